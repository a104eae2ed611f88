"""The inelastic binary collision model.

Cross-sections over the scattering cosine, their projection to a density for
the scattering angle, Fourier-side collision kernels (the weight pair
r-, r+ with their rotations R-, R+), physical two-body collision rules, and
scattering-direction sampling.

A cross-section b(z) lives on the cosine z in (-1, 1) and comes in three
kinds: "isotropic" (constant), "truncated-power" ((1 - z)**(-exponent) cut
off at z <= 1 - cutoff), and "tabulated" (linear interpolation of a strictly
increasing (z, b) table, zero outside the table's range). It is normalized
when

    integral b(z) (1 - z^2)^((d-3)/2) dz  =  integral_0^1 sqrt(z^-1 (1-z)^(d-3)) dz,

the right side being the constant that makes the projected angular density a
probability. Angle sampling uses an exact Beta transform for the isotropic
kind and inversion of a tabulated cumulative (monotone cubic interpolation,
grid doubling until the cumulative is converged) otherwise.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from .errors import ArgumentError, DomainError
from .rng import RandomStream
from .rotations import (elementary_rotation, _elementary_batch,
                        rotation_taking_ed_to, sample_sin_power_angle,
                        sample_subgroup_haar)

# Normalization identity must hold to this absolute tolerance.
NORMALIZATION_TOL = 1e-8
# Tabulated-cumulative refinement: start size, convergence target, cap.
CDF_GRID = 2048
CDF_TOL = 1e-6
CDF_GRID_MAX = 1 << 16


def projection_normalizer(d):
    """The constant integral_0^1 sqrt(z^-1 (1-z)^(d-3)) dz by adaptive
    quadrature; the substitution z = u^2 removes the inverse-square-root
    endpoint singularity exactly."""
    d = int(d)
    if d < 3:
        raise ArgumentError("need d >= 3, got d=%d" % d)
    val, err = integrate.quad(lambda u: 2.0 * (1.0 - u * u) ** (0.5 * (d - 3)),
                              0.0, 1.0, epsabs=1e-13, epsrel=1e-13)
    return val


@dataclass(frozen=True, eq=False)
class CrossSection:
    """A scattering cross-section b(z) on the cosine interval (-1, 1).

    Use the factory helpers (isotropic_cross_section, ...) rather than the
    constructor. Instances are immutable; the angle-sampling table for
    non-isotropic kinds is computed once here and reused by every draw.
    """

    d: int
    kind: str
    scale: float = 1.0
    exponent: float = None
    cutoff: float = None
    grid_z: np.ndarray = None
    grid_b: np.ndarray = None
    _inverse_cdf: object = field(default=None, repr=False)

    def __post_init__(self):
        if int(self.d) < 3:
            raise ArgumentError("need d >= 3, got d=%d" % self.d)
        object.__setattr__(self, "d", int(self.d))
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise DomainError("cross-section scale must be positive, got %r"
                              % (self.scale,))
        if self.kind == "isotropic":
            pass
        elif self.kind == "truncated-power":
            if self.exponent is None or self.cutoff is None:
                raise ArgumentError("truncated-power needs exponent and cutoff")
            if not (np.isfinite(self.exponent) and self.exponent >= 0):
                raise DomainError("exponent must be >= 0")
            if not (0.0 < self.cutoff < 2.0):
                raise DomainError("cutoff must lie in (0, 2) so the support "
                                  "[-1, 1-cutoff] is a proper subinterval")
        elif self.kind == "tabulated":
            z = np.asarray(self.grid_z, dtype=float)
            b = np.asarray(self.grid_b, dtype=float)
            if z.ndim != 1 or z.shape != b.shape or z.size < 2:
                raise DomainError("tabulated cross-section needs matching "
                                  "1-d z and b arrays with >= 2 points")
            if not (np.all(np.diff(z) > 0)):
                raise DomainError("table z values must be strictly increasing")
            if z[0] <= -1.0 or z[-1] >= 1.0:
                raise DomainError("table z values must lie strictly inside "
                                  "(-1, 1)")
            if np.any(b < 0) or not np.all(np.isfinite(b)):
                raise DomainError("table b values must be finite and >= 0")
            if not np.any(b > 0):
                raise DomainError("cross-section vanishes identically")
            object.__setattr__(self, "grid_z", z)
            object.__setattr__(self, "grid_b", b)
        else:
            raise ArgumentError("unknown cross-section kind %r" % (self.kind,))
        if self.kind != "isotropic" and self._inverse_cdf is None:
            object.__setattr__(self, "_inverse_cdf",
                               _build_inverse_cdf(self))

    # -- shape --------------------------------------------------------------

    def support(self):
        """Interval [lo, hi] outside which b vanishes."""
        if self.kind == "isotropic":
            return (-1.0, 1.0)
        if self.kind == "truncated-power":
            return (-1.0, 1.0 - self.cutoff)
        return (float(self.grid_z[0]), float(self.grid_z[-1]))

    def evaluate(self, z):
        """b(z), including the scale factor; zero outside the support."""
        z = np.asarray(z, dtype=float)
        if self.kind == "isotropic":
            out = np.where((z > -1.0) & (z < 1.0), self.scale, 0.0)
        elif self.kind == "truncated-power":
            inside = (z >= -1.0) & (z <= 1.0 - self.cutoff)
            safe = np.where(inside, 1.0 - z, 1.0)  # >= cutoff where inside
            out = np.where(inside, self.scale * safe ** (-self.exponent), 0.0)
        else:
            out = self.scale * np.interp(z, self.grid_z, self.grid_b,
                                         left=0.0, right=0.0)
        return out if out.ndim else float(out)

    def weighted_integral(self):
        """integral b(z) (1 - z^2)^((d-3)/2) dz over the support."""
        lo, hi = self.support()
        p = 0.5 * (self.d - 3)

        def f(z):
            return self.evaluate(z) * (1.0 - z * z) ** p

        if self.kind == "tabulated":
            # b is piecewise linear: integrate panel by panel so quadrature
            # nodes never straddle a kink.
            val = 0.0
            for a, b in zip(self.grid_z[:-1], self.grid_z[1:]):
                val += integrate.fixed_quad(f, a, b, n=12)[0]
            return val
        val, err = integrate.quad(f, lo, hi, epsabs=1e-12, epsrel=1e-12,
                                  limit=200)
        return val


def isotropic_cross_section(d, scale=1.0):
    """The constant cross-section; scale 1 is already normalized."""
    return CrossSection(d=d, kind="isotropic", scale=scale)


def truncated_power_cross_section(d, exponent, cutoff, scale=1.0):
    """b(z) = scale * (1-z)**(-exponent) for z <= 1 - cutoff, else 0."""
    return CrossSection(d=d, kind="truncated-power", scale=scale,
                        exponent=float(exponent), cutoff=float(cutoff))


def tabulated_cross_section(d, grid_z, grid_b, scale=1.0):
    """Linear interpolation of the (z, b) table, zero outside its range."""
    return CrossSection(d=d, kind="tabulated", scale=scale,
                        grid_z=grid_z, grid_b=grid_b)


def load_cross_section_table(path, d, scale=1.0):
    """Read a tabulated cross-section from a whitespace-separated two-column
    text file (z, b(z)) with z strictly increasing inside (-1, 1)."""
    try:
        data = np.loadtxt(path, dtype=float, ndmin=2)
    except Exception as exc:
        raise DomainError("could not parse cross-section table %s: %s"
                          % (path, exc)) from exc
    if data.ndim != 2 or data.shape[1] != 2:
        raise DomainError("cross-section table %s must have exactly two "
                          "columns (z, b)" % path)
    return tabulated_cross_section(d, data[:, 0], data[:, 1], scale=scale)


def normalize_cross_section(cs):
    """Rescale so the normalization identity holds; idempotent."""
    target = projection_normalizer(cs.d)
    current = cs.weighted_integral()
    if not np.isfinite(current) or current <= 0:
        raise DomainError("cross-section is zero or non-integrable "
                          "(weighted integral = %r)" % (current,))
    factor = target / current
    if abs(factor - 1.0) < 1e-14:
        return cs
    return CrossSection(d=cs.d, kind=cs.kind, scale=cs.scale * factor,
                        exponent=cs.exponent, cutoff=cs.cutoff,
                        grid_z=cs.grid_z, grid_b=cs.grid_b,
                        _inverse_cdf=cs._inverse_cdf)


def is_normalized(cs, tol=NORMALIZATION_TOL):
    return abs(cs.weighted_integral() - projection_normalizer(cs.d)) <= tol


def projected_density(cs):
    """The probability density of the scattering cosine:
    Pi_b(z) = b(z) (1-z^2)^((d-3)/2) / normalizer. Integrates to 1 (within
    1e-8) when cs is normalized."""
    total = cs.weighted_integral()
    if not np.isfinite(total) or total <= 0:
        raise DomainError("cross-section is zero or non-integrable")
    B = projection_normalizer(cs.d)
    p = 0.5 * (cs.d - 3)
    scale_back = cs.weighted_integral() / B  # 1 when normalized

    def density(z):
        z = np.asarray(z, dtype=float)
        return cs.evaluate(z) * (1.0 - z * z) ** p / B

    density.normalizer = B
    density.mass = scale_back
    return density


def _build_inverse_cdf(cs):
    """Monotone-cubic inverse of the cumulative of the projected density.

    The cumulative is accumulated from fixed-order panel quadratures on a
    uniform grid over the support; the grid doubles from 2048 points until
    two successive cumulative tables agree to 1e-6 everywhere, otherwise the
    input is rejected as non-convergent.
    """
    lo, hi = cs.support()
    p = 0.5 * (cs.d - 3)

    def weight(z):
        return cs.evaluate(z) * (1.0 - z * z) ** p

    # 17-point Gauss-Legendre panel rule, vectorized over all panels at once.
    nodes, wts = np.polynomial.legendre.leggauss(17)
    n = CDF_GRID
    prev_edges = prev_cdf = None
    while n <= CDF_GRID_MAX:
        edges = np.linspace(lo, hi, n + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        pts = mid[:, None] + half[:, None] * nodes[None, :]
        panel = (weight(pts) * wts[None, :]).sum(axis=1) * half
        cdf = np.concatenate([[0.0], np.cumsum(panel)])
        total = cdf[-1]
        if not np.isfinite(total) or total <= 0:
            raise DomainError("projected density is zero or non-integrable")
        cdf = cdf / total
        if prev_cdf is not None:
            interp = PchipInterpolator(prev_edges, prev_cdf)
            err = np.max(np.abs(interp(edges) - cdf))
            if err < CDF_TOL:
                # Collapse flat stretches (zero density) so the inverse's
                # abscissae are strictly increasing; a flat stretch inverts
                # to its left edge, which carries all of its (zero) mass.
                uniq, idx = np.unique(cdf, return_index=True)
                return PchipInterpolator(uniq, edges[idx])
        prev_edges, prev_cdf = edges, cdf
        n *= 2
    raise DomainError(
        "scattering-angle cumulative did not converge to %g after grid "
        "refinement up to %d points; the cross-section is too singular to "
        "tabulate" % (CDF_TOL, CDF_GRID_MAX))


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Model parameters: dimension d >= 3, inelasticity delta strictly
    inside (0, 1/2), and a cross-section (normalized on construction)."""

    d: int
    delta: float
    cross_section: CrossSection = None

    def __post_init__(self):
        object.__setattr__(self, "d", int(self.d))
        if self.d < 3:
            raise ArgumentError("need d >= 3, got d=%d" % self.d)
        if not (0.0 < self.delta < 0.5):
            raise ArgumentError("inelasticity must lie strictly in (0, 1/2), "
                                "got %r" % (self.delta,))
        cs = self.cross_section
        if cs is None:
            cs = isotropic_cross_section(self.d)
        if cs.d != self.d:
            raise ArgumentError("cross-section dimension %d != model "
                                "dimension %d" % (cs.d, self.d))
        object.__setattr__(self, "cross_section", normalize_cross_section(cs))


def isotropic_params(d, delta):
    return ModelParams(d=d, delta=delta,
                       cross_section=isotropic_cross_section(d))


def sample_psi(params, rng, size=None):
    """Scattering angle psi in (0, pi) whose cosine has the projected
    density of the model's cross-section. Exact Beta transform for the
    isotropic kind; tabulated-cumulative inversion otherwise."""
    cs = params.cross_section
    if cs.kind == "isotropic":
        return sample_sin_power_angle(params.d - 2, rng, size=size)
    u = rng.random(size)
    z = cs._inverse_cdf(u)
    z = np.clip(z, -1.0 + 1e-15, 1.0 - 1e-15)
    out = np.arccos(z)
    return out if size is not None else float(out)


def kernel_components(psi, delta):
    """The weight pair and rotation angles generated by a scattering angle:
    (r-, r+, psi-, psi+) with

        r-     = (1-delta) sqrt((1-cos psi)/2)
        r+     = sqrt(((1+delta^2) + (1-delta^2) cos psi)/2)
        cos psi- = sqrt((1-cos psi)/2)
        cos psi+ = ((1+delta) + (1-delta) cos psi) / (2 r+)

    Vectorized over psi.
    """
    psi_arr = np.asarray(psi, dtype=float)
    if np.any(psi_arr < 0.0) or np.any(psi_arr > np.pi):
        raise ArgumentError("scattering angle must lie in [0, pi]")
    if not (0.0 < delta < 0.5):
        raise ArgumentError("inelasticity must lie strictly in (0, 1/2), "
                            "got %r" % (delta,))
    c = np.cos(psi_arr)
    half_one_minus = 0.5 * (1.0 - c)
    r_minus = (1.0 - delta) * np.sqrt(half_one_minus)
    r_plus = np.sqrt(0.5 * ((1.0 + delta * delta)
                            + (1.0 - delta * delta) * c))
    cos_minus = np.clip(np.sqrt(half_one_minus), -1.0, 1.0)
    cos_plus = np.clip(0.5 * ((1.0 + delta) + (1.0 - delta) * c) / r_plus,
                       -1.0, 1.0)
    psi_minus = np.arccos(cos_minus)
    psi_plus = np.arccos(cos_plus)
    if psi_arr.ndim == 0:
        return (float(r_minus), float(r_plus), float(psi_minus),
                float(psi_plus))
    return r_minus, r_plus, psi_minus, psi_plus


@dataclass(frozen=True, eq=False)
class KernelSample:
    """One draw (or a stacked batch) of the Fourier-side collision kernel:
    weights r-, r+ in [0, 1] and rotations R-, R+, together with the
    generating scattering angle psi. Satisfies, draw by draw,

        r- R- e_d + r+ R+ e_d = e_d.
    """

    r_minus: np.ndarray
    r_plus: np.ndarray
    R_minus: np.ndarray
    R_plus: np.ndarray
    psi: np.ndarray


def sample_kernel(params, rng, size=None, _components_fn=kernel_components):
    """Draw the collision kernel: psi from the cross-section, two
    independent SO(d-1) elements U1, U2, then

        R- = U1 Z(-psi-) U2,      R+ = U1 Z(+psi+) U2,

    where Z is the elementary rotation in the (e_1, e_d) plane. The opposite
    senses make the defining identity r- R- e_d + r+ R+ e_d = e_d hold
    sample by sample, not merely in law. ``_components_fn`` exists so the
    self-check machinery can inject a broken component formula and confirm
    the identity test catches it.
    """
    d = params.d
    scalar = size is None
    n = 1 if scalar else int(size)
    psi = np.atleast_1d(sample_psi(params, rng, size=n))
    U1 = sample_subgroup_haar(d, rng, size=n)
    U2 = sample_subgroup_haar(d, rng, size=n)
    r_minus, r_plus, psi_minus, psi_plus = _components_fn(psi, params.delta)
    Zm = _elementary_batch(d, 1, d, -np.asarray(psi_minus, dtype=float))
    Zp = _elementary_batch(d, 1, d, np.asarray(psi_plus, dtype=float))
    R_minus = U1 @ Zm @ U2
    R_plus = U1 @ Zp @ U2
    if scalar:
        return KernelSample(float(r_minus[0]), float(r_plus[0]),
                            R_minus[0], R_plus[0], float(psi[0]))
    return KernelSample(np.asarray(r_minus), np.asarray(r_plus),
                        R_minus, R_plus, psi)


def kernel_identity_defect(sample):
    """Max-norm violation of r- R- e_d + r+ R+ e_d = e_d for a KernelSample
    (scalar or batch)."""
    Rm = np.asarray(sample.R_minus, dtype=float)
    Rp = np.asarray(sample.R_plus, dtype=float)
    if Rm.ndim == 2:
        Rm, Rp = Rm[None], Rp[None]
    rm = np.atleast_1d(np.asarray(sample.r_minus, dtype=float))
    rp = np.atleast_1d(np.asarray(sample.r_plus, dtype=float))
    d = Rm.shape[-1]
    lhs = rm[:, None] * Rm[:, :, d - 1] + rp[:, None] * Rp[:, :, d - 1]
    lhs[:, d - 1] -= 1.0
    return float(np.abs(lhs).max())


def sample_scattering_direction(params, rel_dir, rng, size=None):
    """Random unit vector n with law b(sigma . rel_dir) times the uniform
    surface measure: the kernel's U1 Z(psi) U2 e_d pattern carried to
    rel_dir by the deterministic rotation taking e_d there."""
    rel_dir = np.asarray(rel_dir, dtype=float)
    R = rotation_taking_ed_to(rel_dir)  # validates rel_dir
    d = params.d
    scalar = size is None
    n = 1 if scalar else int(size)
    psi = np.atleast_1d(sample_psi(params, rng, size=n))
    U1 = sample_subgroup_haar(d, rng, size=n)
    U2 = sample_subgroup_haar(d, rng, size=n)
    Z = _elementary_batch(d, 1, d, psi)
    M = U1 @ Z @ U2
    out = M[:, :, d - 1] @ R.T
    return out[0] if scalar else out


def collide(v, w, n, delta):
    """Post-collision velocities:

        v' = (v+w)/2 + (delta/2)(v-w) + ((1-delta)/2)|v-w| n
        w' = (v+w)/2 - (delta/2)(v-w) - ((1-delta)/2)|v-w| n

    v = w is allowed and returns (v, v) unchanged (the relative speed
    vanishes, so the rules collapse to the common value)."""
    if not (0.0 < delta < 0.5):
        raise ArgumentError("inelasticity must lie strictly in (0, 1/2), "
                            "got %r" % (delta,))
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    n = np.asarray(n, dtype=float)
    if abs(np.linalg.norm(n) - 1.0) > 1e-8:
        raise ArgumentError("scattering direction must be a unit vector")
    center = 0.5 * (v + w)
    rel = v - w
    speed = np.linalg.norm(rel)
    if speed == 0.0:
        return v.copy(), w.copy()
    kick = 0.5 * delta * rel + 0.5 * (1.0 - delta) * speed * n
    return center + kick, center - kick
