"""Scalar spectral analysis of the collision model.

The collision weights (r-, r+) induce the convex moment function

    S(s) = E[(r-)^s] + E[(r+)^s] - 1,

computed here by adaptive quadrature of the closed-form integrands against
the projected cosine density.  S(0) = 1 and S(2) < 0 for every admissible
inelasticity, so S has a unique root alpha in (0, 2); that root is the tail
exponent of the equilibrium law and everything downstream (stable-law
constants, scale constants, moment criteria) is keyed to it.

The second half of the module handles symmetric alpha-stable laws described
by a spectral measure on the sphere (StableSpec): the tail constant
k_alpha, the Levy-measure mass phi(B_u) of the half-space ball attached to
a direction u, and the sphere-averaged projection scale constants
(c_defc, c_scale) used to match heavy-tailed input data to its limit law.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import betaln, gammaln

from .collision import ModelParams, projected_density
from .errors import ArgumentError, DomainError, NumericalError

# Absolute quadrature budget for S(s) evaluations.
S_QUAD_TOL = 1e-10
# Bisection bracket and residual target for the root of S.
ALPHA_BRACKET_LO = 1e-4
ALPHA_BRACKET_HI = 2.0
ALPHA_RESIDUAL_TOL = 1e-8
ALPHA_MAX_ITER = 200
# Witness exponents probed for a strictly negative S(alpha * gamma).
GAMMA_CANDIDATES = (1.1, 1.25, 1.5, 2.0)
# Fullness threshold: smallest singular value of the atom direction matrix.
FULLNESS_TOL = 1e-8
UNIT_TOL = 1e-8


def _quad_breakpoints(cs):
    """Interior abscissae where the cosine density has kinks, for the
    quadrature routine; None when the density is smooth on (-1, 1)."""
    if cs.kind == "tabulated":
        pts = np.asarray(cs.grid_z, dtype=float)
        return [float(z) for z in pts if -1.0 < z < 1.0]
    if cs.kind == "truncated-power" and 0.0 < cs.cutoff < 2.0:
        return [1.0 - cs.cutoff]
    return None


def _evaluate_S_with_error(s, params):
    """S(s) together with the quadrature's absolute error estimate."""
    s = float(s)
    if not np.isfinite(s) or s < 0.0:
        raise ArgumentError("moment order must be a finite real >= 0, "
                            "got %r" % (s,))
    delta = params.delta
    half = 0.5 * s
    density = projected_density(params.cross_section)
    shrink = (1.0 - delta) ** 2 / 2.0
    grow_lo = (1.0 + delta * delta) / 2.0
    grow_sl = (1.0 - delta * delta) / 2.0

    def integrand(z):
        # 0**0 = 1 at (s, z) = (0, 1) is the correct continuation here.
        a = (shrink * (1.0 - z)) ** half
        b = (grow_lo + grow_sl * z) ** half
        return (a + b) * density(z)

    pts = _quad_breakpoints(params.cross_section)
    limit = 200 if pts is None else max(200, 2 * len(pts) + 50)
    val, err = integrate.quad(integrand, -1.0, 1.0, epsabs=1e-12,
                              epsrel=1e-12, limit=limit, points=pts)
    return val - 1.0, err


def evaluate_S(s, params):
    """The moment function S(s) = E[(r-)^s] + E[(r+)^s] - 1 for s >= 0,
    by adaptive quadrature against the projected cosine density (absolute
    error well under 1e-10 for the supported cross-section kinds)."""
    val, _ = _evaluate_S_with_error(s, params)
    return val


@dataclass(frozen=True, eq=False)
class SpectralInfo:
    """The root alpha of S with its certificates: a witness gamma > 1 with
    S(alpha * gamma) < 0, the value S(2 * alpha), and a bound on the
    quadrature error incurred while locating the root."""

    alpha: float
    gamma_witness: float
    S_at_2alpha: float
    quadrature_error: float


def solve_alpha(params):
    """Locate the unique root of S in (0, 2) by bisection.

    S(0) = 1 and S(2) < 0 for admissible parameters, so sign bisection from
    the bracket [1e-4, 2] is unconditionally safe; iteration stops once
    |S(alpha)| <= 1e-8.  A nonnegative S(2) can only mean the quadrature
    broke down and raises NumericalError.  The witness exponent is the first
    of (1.1, 1.25, 1.5, 2) with S(alpha * gamma) < 0; convexity with limit
    S(inf) = -1 guarantees one exists.
    """
    worst_err = 0.0

    def S(s):
        nonlocal worst_err
        val, err = _evaluate_S_with_error(s, params)
        worst_err = max(worst_err, err)
        return val

    s_two = S(2.0)
    if s_two >= 0.0:
        raise NumericalError(
            "S(2) = %r >= 0; the two-point moment must be contracting for "
            "inelasticity in (0, 1/2), so the quadrature is untrustworthy "
            "for these parameters" % (s_two,))
    lo, hi = ALPHA_BRACKET_LO, ALPHA_BRACKET_HI
    s_lo = S(lo)
    if s_lo <= 0.0:
        raise NumericalError(
            "S(%g) = %r <= 0 contradicts S(0) = 1; quadrature failure"
            % (lo, s_lo))
    alpha = s_mid = None
    for _ in range(ALPHA_MAX_ITER):
        mid = 0.5 * (lo + hi)
        s_mid = S(mid)
        if abs(s_mid) <= ALPHA_RESIDUAL_TOL:
            alpha = mid
            break
        if s_mid > 0.0:
            lo = mid
        else:
            hi = mid
    if alpha is None:
        raise NumericalError(
            "bisection failed to bring |S(alpha)| under %g in %d steps "
            "(last residual %r)" % (ALPHA_RESIDUAL_TOL, ALPHA_MAX_ITER,
                                    s_mid))
    gamma = next((g for g in GAMMA_CANDIDATES if S(alpha * g) < 0.0), None)
    if gamma is None:
        raise NumericalError(
            "no witness gamma in %r gives S(alpha * gamma) < 0; quadrature "
            "failure" % (GAMMA_CANDIDATES,))
    return SpectralInfo(alpha=alpha, gamma_witness=gamma,
                        S_at_2alpha=S(2.0 * alpha),
                        quadrature_error=max(worst_err, 0.0))


def moment_criterion(p, info, params):
    """Whether the p-th moment of the equilibrium law is finite, via the
    equivalent contraction test S(p * alpha) < 0.  Requires p > 1."""
    p = float(p)
    if not np.isfinite(p) or p <= 1.0:
        raise ArgumentError("moment criterion needs p > 1, got %r" % (p,))
    return evaluate_S(p * info.alpha, params) < 0.0


def k_alpha(alpha):
    """The one-dimensional stable tail constant
    k_alpha = 2 Gamma(alpha) sin(alpha pi / 2) / pi, alpha in (0, 2),
    evaluated through log-Gamma."""
    alpha = float(alpha)
    if not (0.0 < alpha < 2.0):
        raise ArgumentError("tail constant defined for alpha in (0, 2), "
                            "got %r" % (alpha,))
    return 2.0 * math.exp(gammaln(alpha)) * math.sin(0.5 * math.pi * alpha) \
        / math.pi


def abs_projection_moment(d, alpha):
    """E[|theta . e|^alpha] for theta uniform on the (d-1)-sphere: the
    cosine z = theta . e has density proportional to (1 - z^2)^((d-3)/2),
    so the moment is a ratio of Beta functions (exact; d=3 gives
    1/(alpha+1))."""
    d = int(d)
    if d < 3:
        raise ArgumentError("need d >= 3, got d=%d" % d)
    alpha = float(alpha)
    if alpha <= 0.0:
        raise ArgumentError("moment order must be positive, got %r"
                            % (alpha,))
    h = 0.5 * (d - 1)
    return math.exp(betaln(0.5 * (alpha + 1.0), h) - betaln(0.5, h))


@dataclass(frozen=True, eq=False)
class StableSpec:
    """A symmetric alpha-stable law on R^d described on the sphere.

    kind "radial": spectral measure uniform on the sphere, parametrized by
    the characteristic-function scale lam (CF = exp(-lam |xi|^alpha)).
    kind "discrete-symmetric": atoms (weights[k], directions[k]) with the
    atom set closed under theta -> -theta and matching weights.

    Construction validates shape and symmetry only; whether the atoms span
    R^d (fullness) is recorded as is_full and enforced with DomainError by
    the operations that require it, so degenerate probes remain
    constructible.
    """

    d: int
    alpha: float
    kind: str
    lam: float = None
    weights: np.ndarray = None
    directions: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, "d", int(self.d))
        if self.d < 3:
            raise ArgumentError("need d >= 3, got d=%d" % self.d)
        if not (0.0 < self.alpha < 2.0):
            raise ArgumentError("stable exponent must lie in (0, 2), "
                                "got %r" % (self.alpha,))
        if self.kind == "radial":
            if self.lam is None or not np.isfinite(self.lam) \
                    or self.lam <= 0.0:
                raise ArgumentError("radial law needs a positive scale, "
                                    "got %r" % (self.lam,))
            if self.weights is not None or self.directions is not None:
                raise ArgumentError("radial law takes no atoms")
        elif self.kind == "discrete-symmetric":
            if self.lam is not None:
                raise ArgumentError("discrete law takes no radial scale")
            w = np.asarray(self.weights, dtype=float)
            th = np.asarray(self.directions, dtype=float)
            if w.ndim != 1 or th.shape != (w.size, self.d) or w.size == 0:
                raise ArgumentError(
                    "need matching atom arrays: weights (m,) and "
                    "directions (m, d), got %r and %r"
                    % (np.shape(self.weights), np.shape(self.directions)))
            if not (np.all(np.isfinite(w)) and np.all(w > 0.0)):
                raise ArgumentError("atom weights must be positive finite")
            if not np.all(np.isfinite(th)):
                raise ArgumentError("atom directions must be finite")
            norms = np.linalg.norm(th, axis=1)
            if np.any(np.abs(norms - 1.0) > UNIT_TOL):
                raise ArgumentError("atom directions must be unit vectors "
                                    "(tolerance %g)" % UNIT_TOL)
            th = th / norms[:, None]
            _check_symmetric_atoms(w, th)
            object.__setattr__(self, "weights", w)
            object.__setattr__(self, "directions", th)
        else:
            raise ArgumentError("unknown stable-law kind %r (want 'radial' "
                                "or 'discrete-symmetric')" % (self.kind,))

    @property
    def min_singular_value(self):
        """Smallest singular value of the atom direction matrix; the radial
        spectral measure is always full."""
        if self.kind == "radial":
            return 1.0
        return float(np.linalg.svd(self.directions, compute_uv=False)[-1])

    @property
    def is_full(self):
        """Whether the spectral measure charges no proper subspace."""
        return self.min_singular_value > FULLNESS_TOL


def _check_symmetric_atoms(w, th):
    """Every atom must have an unused partner with opposite direction and
    the same weight."""
    m = w.size
    used = np.zeros(m, dtype=bool)
    for i in range(m):
        if used[i]:
            continue
        partner = None
        for j in range(m):
            if j == i or used[j]:
                continue
            if (np.linalg.norm(th[j] + th[i]) <= 1e-10
                    and abs(w[j] - w[i]) <= 1e-10 * max(1.0, w[i])):
                partner = j
                break
        if partner is None:
            raise ArgumentError(
                "atom %d has no opposite-direction partner of equal "
                "weight; the spectral measure must be symmetric" % i)
        used[i] = used[partner] = True


def radial_spec(d, alpha, lam):
    return StableSpec(d=d, alpha=alpha, kind="radial", lam=float(lam))


def discrete_symmetric_spec(d, alpha, weights, directions):
    return StableSpec(d=d, alpha=alpha, kind="discrete-symmetric",
                      weights=weights, directions=directions)


def _require_full(spec):
    if not spec.is_full:
        raise DomainError(
            "spectral measure is supported on a proper subspace (smallest "
            "singular value %g <= %g); tail constants are only defined for "
            "full laws" % (spec.min_singular_value, FULLNESS_TOL))


def _unit_vector(u, d):
    u = np.asarray(u, dtype=float)
    if u.shape != (d,):
        raise ArgumentError("direction must be a %d-vector, got shape %r"
                            % (d, u.shape))
    n = np.linalg.norm(u)
    if not np.isfinite(n) or abs(n - 1.0) > UNIT_TOL:
        raise ArgumentError("direction must be a unit vector (|u| = %r)"
                            % (n,))
    return u / n


def phi_ball(spec, u):
    """Levy-measure mass of the tail ball attached to direction u:
    phi(B_u) = k_alpha * integral (theta . u)_+^alpha Lambda(d theta).

    Radial case: Lambda is uniform with total mass lam / E|theta . e|^alpha
    (the conversion from the CF scale), and E[(theta . u)_+^alpha] is half
    the absolute moment by symmetry, so the value reduces to
    k_alpha * lam / 2 independent of u.  Discrete case: a finite sum over
    the atoms.  Raises DomainError when the law is not full.
    """
    _require_full(spec)
    u = _unit_vector(u, spec.d)
    ka = k_alpha(spec.alpha)
    if spec.kind == "radial":
        ez = abs_projection_moment(spec.d, spec.alpha)
        lam_spectral = spec.lam / ez
        return ka * lam_spectral * (0.5 * ez)
    dots = spec.directions @ u
    return ka * float(np.sum(spec.weights
                             * np.where(dots > 0.0, dots, 0.0) ** spec.alpha))


def c_constants(spec):
    """The sphere-averaged scale constants (c_defc, c_scale).

    c_defc = integral of phi(B_sigma) over uniform sigma; c_scale =
    (2 / k_alpha) * c_defc, which equals the double integral of
    |theta . sigma|^alpha against the spectral measure and uniform sigma --
    the mean one-dimensional CF scale of the law's projections.  Every atom
    direction is a unit vector, so the sigma-average of each atom's
    contribution is the same absolute projection moment and the integrals
    are exact Beta-function expressions rather than sphere quadratures.
    Radial laws with CF scale lam return c_scale = lam identically, which
    is the self-consistency requirement that a stable law maps to its own
    stationary scale.
    """
    _require_full(spec)
    ez = abs_projection_moment(spec.d, spec.alpha)
    ka = k_alpha(spec.alpha)
    if spec.kind == "radial":
        total_mass = spec.lam / ez
    else:
        total_mass = float(np.sum(spec.weights))
    c_scale = total_mass * ez
    c_defc = 0.5 * ka * c_scale
    return c_defc, c_scale
