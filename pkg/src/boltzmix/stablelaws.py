"""Heavy-tailed stable laws: 1-d and radial samplers, initial-data
generators in the attraction domain, and the equilibrium scale mixture.

Conventions, fixed here and verified by tests:

* sample_stable_1d uses the characteristic-function scale: skew=0 gives
  CF exp(-scale |rho|^alpha); skewed draws follow the standard one-delta
  parametrization CF exp(-scale |rho|^alpha (1 - i skew tan(pi alpha/2)
  sgn rho)), so for skew=1 and alpha < 1 the draw is positive with Laplace
  transform exp(-scale sec(pi alpha/2) s^alpha).
* sample_positive_stable normalizes that one-sided law so the Laplace
  transform is exactly exp(-s^alpha) -- the single constant the Gaussian
  subordination in sample_radial_stable depends on.
* sample_radial_stable(d, alpha, lam) has CF exp(-lam |xi|^alpha) exactly,
  via X = lam^(1/alpha) sqrt(2 A) G with A positive (alpha/2)-stable as
  above and G a standard d-dimensional Gaussian.

The equilibrium law is a scale mixture: draw a mixing weight u from a
cached array of limiting tree weights, then a radial stable with scale
c * u. The cache is importable/exportable as a single-column text file.
"""

import math
from dataclasses import dataclass

import numpy as np

from .cascade import DEFAULT_DEPTH, sample_M_infinity
from .errors import (ArgumentError, DomainError, StateError,
                     UnsupportedError)
from .rotations import sample_uniform_sphere
from .spectral import (abs_projection_moment, discrete_symmetric_spec,
                       k_alpha, radial_spec, _check_symmetric_atoms)

INITIAL_KINDS = ("radial-stable", "discrete-symmetric-stable",
                 "pareto-uniform", "pareto-directional", "point-mixture")
# Default size of the equilibrium mixing-weight cache.
DEFAULT_CACHE_SIZE = 10_000
UNIT_TOL = 1e-8


def _check_alpha(alpha):
    alpha = float(alpha)
    if not (0.0 < alpha < 2.0):
        raise ArgumentError("stable exponent must lie in (0, 2), got %r"
                            % (alpha,))
    return alpha


def sample_stable_1d(alpha, scale, skew, rng, size=None):
    """One draw (or a batch) of a 1-d alpha-stable law.

    CF-scale convention: skew=0 gives CF exp(-scale |rho|^alpha). General
    skew in [-1, 1] follows the standard parametrization above. alpha=1
    supports skew=0 only (the log-correction branch is out of scope).
    """
    alpha = _check_alpha(alpha)
    scale = float(scale)
    if not (np.isfinite(scale) and scale > 0.0):
        raise ArgumentError("scale must be positive, got %r" % (scale,))
    skew = float(skew)
    if not -1.0 <= skew <= 1.0:
        raise ArgumentError("skew must lie in [-1, 1], got %r" % (skew,))
    if alpha == 1.0 and skew != 0.0:
        raise UnsupportedError(
            "alpha=1 with nonzero skew needs the logarithmic correction "
            "term, which this sampler does not implement")
    u = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size)
    w = rng.standard_exponential(size)
    if alpha == 1.0:
        x = np.tan(u)
    elif skew == 0.0:
        x = (np.sin(alpha * u) / np.cos(u) ** (1.0 / alpha)
             * (np.cos((1.0 - alpha) * u) / w) ** ((1.0 - alpha) / alpha))
    else:
        t = skew * math.tan(0.5 * math.pi * alpha)
        b = math.atan(t) / alpha
        s = (1.0 + t * t) ** (0.5 / alpha)
        x = (s * np.sin(alpha * (u + b)) / np.cos(u) ** (1.0 / alpha)
             * (np.cos(u - alpha * (u + b)) / w) ** ((1.0 - alpha) / alpha))
    x = scale ** (1.0 / alpha) * x
    return x if size is not None else float(x)


def sample_positive_stable(alpha, rng, size=None):
    """Positive stable draw with Laplace transform exactly
    exp(-s^alpha), alpha in (0, 1); the subordinator for radial laws."""
    alpha = _check_alpha(alpha)
    if alpha >= 1.0:
        raise ArgumentError("one-sided stable laws need exponent < 1, got "
                            "%r" % (alpha,))
    return sample_stable_1d(alpha, math.cos(0.5 * math.pi * alpha), 1.0,
                            rng, size=size)


def sample_radial_stable(d, alpha, lam, rng, size=None):
    """Spherically symmetric stable draw with CF exp(-lam |xi|^alpha),
    by Gaussian subordination (see module docstring)."""
    d = int(d)
    if d < 3:
        raise ArgumentError("need d >= 3, got d=%d" % d)
    alpha = _check_alpha(alpha)
    lam = float(lam)
    if not (np.isfinite(lam) and lam > 0.0):
        raise ArgumentError("scale must be positive, got %r" % (lam,))
    a = sample_positive_stable(0.5 * alpha, rng,
                               size=size if size is not None else 1)
    g = rng.standard_normal((np.size(a), d))
    x = lam ** (1.0 / alpha) * np.sqrt(2.0 * np.asarray(a))[:, None] * g
    return x if size is not None else x[0]


@dataclass(frozen=True, eq=False)
class InitialData:
    """An initial velocity law, symmetric under x -> -x by construction.

    Kinds: "radial-stable" (alpha, lam); "discrete-symmetric-stable"
    (alpha, per-line CF scales and representative unit directions);
    "pareto-uniform" (alpha; radius is exact Pareto, P{r > t} = t^-alpha
    for t >= 1, direction uniform); "pareto-directional" (alpha; same
    radius, direction uniform over a symmetric finite list);
    "point-mixture" (finite symmetric point cloud, for finite-energy smoke
    tests; no tail exponent). The centered flag must be true whenever
    alpha > 1.
    """

    d: int
    kind: str
    alpha: float = None
    lam: float = None
    scales: np.ndarray = None
    directions: np.ndarray = None
    points: np.ndarray = None
    probs: np.ndarray = None
    centered: bool = True

    def __post_init__(self):
        object.__setattr__(self, "d", int(self.d))
        if self.d < 3:
            raise ArgumentError("need d >= 3, got d=%d" % self.d)
        if self.kind not in INITIAL_KINDS:
            raise ArgumentError("unknown initial-data kind %r (want one of "
                                "%r)" % (self.kind, INITIAL_KINDS))
        if self.kind == "point-mixture":
            if self.alpha is not None:
                raise ArgumentError("point mixtures have no tail exponent")
            self._init_points()
            return
        object.__setattr__(self, "alpha", _check_alpha(self.alpha))
        if self.alpha > 1.0 and not self.centered:
            raise ArgumentError("laws with tail exponent above 1 must be "
                                "declared centered")
        if self.kind == "radial-stable":
            if self.lam is None or not (np.isfinite(self.lam)
                                        and self.lam > 0.0):
                raise ArgumentError("radial law needs a positive scale, "
                                    "got %r" % (self.lam,))
        elif self.kind == "discrete-symmetric-stable":
            s = np.atleast_1d(np.asarray(self.scales, dtype=float))
            th = self._unit_directions(expected=s.size)
            if not (np.all(np.isfinite(s)) and np.all(s > 0.0)):
                raise ArgumentError("per-line scales must be positive")
            object.__setattr__(self, "scales", s)
            object.__setattr__(self, "directions", th)
        elif self.kind == "pareto-directional":
            th = self._unit_directions()
            _check_symmetric_atoms(np.ones(th.shape[0]), th)
            object.__setattr__(self, "directions", th)

    def _unit_directions(self, expected=None):
        th = np.asarray(self.directions, dtype=float)
        if th.ndim != 2 or th.shape[1] != self.d or th.shape[0] == 0:
            raise ArgumentError("directions must be (m, %d), got %r"
                               % (self.d, th.shape))
        if expected is not None and th.shape[0] != expected:
            raise ArgumentError("need one direction per scale")
        norms = np.linalg.norm(th, axis=1)
        if not np.all(np.isfinite(norms)) \
                or np.any(np.abs(norms - 1.0) > UNIT_TOL):
            raise ArgumentError("directions must be unit vectors")
        return th / norms[:, None]

    def _init_points(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.d or pts.shape[0] == 0:
            raise ArgumentError("points must be (m, %d), got %r"
                               % (self.d, pts.shape))
        if not np.all(np.isfinite(pts)):
            raise ArgumentError("points must be finite")
        m = pts.shape[0]
        if self.probs is None:
            probs = np.full(m, 1.0 / m)
        else:
            probs = np.asarray(self.probs, dtype=float)
            if probs.shape != (m,) or np.any(probs < 0.0) \
                    or abs(probs.sum() - 1.0) > 1e-10:
                raise ArgumentError("probs must be a probability vector "
                                    "over the points")
            probs = probs / probs.sum()
        # Symmetry: every point needs a mirror of equal probability.
        used = np.zeros(m, dtype=bool)
        for i in range(m):
            if used[i]:
                continue
            hit = None
            for j in range(m):
                if not used[j] and (i != j or
                                    np.linalg.norm(pts[i]) <= 1e-12):
                    if np.linalg.norm(pts[j] + pts[i]) <= 1e-12 \
                            and abs(probs[j] - probs[i]) <= 1e-12:
                        hit = j
                        break
            if hit is None:
                raise ArgumentError("point %d has no mirror point of equal "
                                    "probability; the mixture must be "
                                    "symmetric" % i)
            used[i] = used[hit] = True
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", probs)


def radial_stable_data(d, alpha, lam=1.0):
    return InitialData(d=d, kind="radial-stable", alpha=alpha,
                       lam=float(lam))


def discrete_stable_data(d, alpha, scales, directions):
    return InitialData(d=d, kind="discrete-symmetric-stable", alpha=alpha,
                       scales=scales, directions=directions)


def pareto_uniform_data(d, alpha):
    return InitialData(d=d, kind="pareto-uniform", alpha=alpha)


def pareto_directional_data(d, alpha, directions):
    return InitialData(d=d, kind="pareto-directional", alpha=alpha,
                       directions=directions)


def point_mixture_data(d, points, probs=None):
    return InitialData(d=d, kind="point-mixture", points=points,
                       probs=probs)


def implied_spec(data):
    """The stable law attracting the given initial data, as a StableSpec.

    radial-stable maps to itself. pareto-uniform has tail-ball masses
    t^alpha P{u . X > t} = E[(Theta . u)_+^alpha], i.e. a uniform spectral
    measure of total mass 1/k_alpha, which as a radial CF scale is
    E|z|^alpha / k_alpha. pareto-directional likewise puts mass
    1/(m k_alpha) on each of its m listed directions. A 1-d symmetric
    stable of CF scale c along a line contributes spectral mass c/2 to
    each end of the line.
    """
    if data.kind == "radial-stable":
        return radial_spec(data.d, data.alpha, data.lam)
    if data.kind == "pareto-uniform":
        lam = abs_projection_moment(data.d, data.alpha) / k_alpha(data.alpha)
        return radial_spec(data.d, data.alpha, lam)
    if data.kind == "pareto-directional":
        m = data.directions.shape[0]
        w = np.full(m, 1.0 / (m * k_alpha(data.alpha)))
        return discrete_symmetric_spec(data.d, data.alpha, w,
                                       data.directions)
    if data.kind == "discrete-symmetric-stable":
        w = np.repeat(0.5 * data.scales, 2)
        th = np.empty((2 * data.directions.shape[0], data.d))
        th[0::2] = data.directions
        th[1::2] = -data.directions
        return discrete_symmetric_spec(data.d, data.alpha, w, th)
    raise DomainError("a finite-variance point mixture has no heavy-tail "
                      "spectral description")


def sample_initial(data, rng, size=None):
    """i.i.d. draw(s) from the initial law; (d,) or (size, d)."""
    n = 1 if size is None else int(size)
    d = data.d
    if data.kind == "radial-stable":
        x = sample_radial_stable(d, data.alpha, data.lam, rng, size=n)
    elif data.kind == "pareto-uniform":
        r = (1.0 - rng.random(n)) ** (-1.0 / data.alpha)
        theta = sample_uniform_sphere(d, rng, size=n)
        x = r[:, None] * theta
    elif data.kind == "pareto-directional":
        r = (1.0 - rng.random(n)) ** (-1.0 / data.alpha)
        idx = rng.integers(0, data.directions.shape[0], n)
        x = r[:, None] * data.directions[idx]
    elif data.kind == "discrete-symmetric-stable":
        x = np.zeros((n, d))
        for scale, theta in zip(data.scales, data.directions):
            y = sample_stable_1d(data.alpha, scale, 0.0, rng, size=n)
            x += y[:, None] * theta
    else:  # point-mixture
        idx = rng.choice(data.points.shape[0], size=n, p=data.probs)
        x = data.points[idx]
    return x if size is not None else x[0]


def initial_sampler(data):
    """The (rng, size) -> draws closure used by projection sums."""
    def sampler(rng, size=None):
        return sample_initial(data, rng, size=size)
    return sampler


@dataclass(frozen=True, eq=False)
class StationaryLaw:
    """The equilibrium scale mixture: mixing weights m_samples (cached
    limiting tree-weight draws, mean 1), stable exponent alpha, and scale
    constant c. Construction validates shape only; use
    build_stationary_law for a properly sized cache."""

    c: float
    alpha: float
    m_samples: np.ndarray

    def __post_init__(self):
        c = float(self.c)
        if not (np.isfinite(c) and c > 0.0):
            raise ArgumentError("stationary scale must be positive, got %r"
                                % (self.c,))
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "alpha", _check_alpha(self.alpha))
        m = np.atleast_1d(np.asarray(self.m_samples, dtype=float))
        if m.ndim != 1:
            raise ArgumentError("mixing-weight cache must be a 1-d array")
        if m.size and (not np.all(np.isfinite(m)) or np.any(m < 0.0)):
            raise ArgumentError("mixing weights must be finite and >= 0")
        object.__setattr__(self, "m_samples", m)


def build_stationary_law(params, alpha, c, rng, size=DEFAULT_CACHE_SIZE,
                         depth=DEFAULT_DEPTH):
    """Build the equilibrium law for the given collision model: draw the
    mixing-weight cache (default 10^4 draws at tree depth 500) and attach
    the scale constant c."""
    size = int(size)
    if size < 1:
        raise ArgumentError("cache size must be >= 1, got %d" % size)
    m = sample_M_infinity(params, alpha, rng, depth=depth, size=size)
    return StationaryLaw(c=c, alpha=alpha, m_samples=m)


def sample_stationary(law, d, rng, size=None):
    """Draw from the equilibrium law: pick a cached mixing weight u
    uniformly, then draw the radial stable with CF scale c * u."""
    if law.m_samples.size == 0:
        raise StateError("the mixing-weight cache is empty; build or load "
                         "it before sampling")
    d = int(d)
    if d < 3:
        raise ArgumentError("need d >= 3, got d=%d" % d)
    n = 1 if size is None else int(size)
    u = law.m_samples[rng.integers(0, law.m_samples.size, n)]
    a = sample_positive_stable(0.5 * law.alpha, rng, size=n)
    g = rng.standard_normal((n, d))
    x = ((law.c * u) ** (1.0 / law.alpha))[:, None] * np.sqrt(2.0 * a)[:, None] * g
    return x if size is not None else x[0]


def cf_stationary(law, xi):
    """The equilibrium CF at xi (a d-vector, or a scalar radial frequency):
    the cache average of exp(-c u |xi|^alpha). Real, in (0, 1]."""
    if law.m_samples.size == 0:
        raise StateError("the mixing-weight cache is empty; build or load "
                         "it before evaluating")
    xi = np.asarray(xi, dtype=float)
    rho = float(np.linalg.norm(xi)) if xi.ndim else abs(float(xi))
    if not np.isfinite(rho):
        raise ArgumentError("frequency must be finite")
    if rho == 0.0:
        return 1.0
    return float(np.mean(np.exp(-law.c * law.m_samples * rho ** law.alpha)))


def save_m_samples(law, path):
    """Write the mixing-weight cache as a single-column text file with
    full precision (round-trips exactly)."""
    np.savetxt(path, law.m_samples, fmt="%.17g")


def load_m_samples(path):
    """Read a mixing-weight cache written by save_m_samples."""
    try:
        m = np.loadtxt(path, dtype=float, ndmin=1)
    except ValueError as exc:
        raise DomainError("could not parse mixing-weight cache: %s" % exc)
    if m.ndim != 1:
        raise DomainError("mixing-weight cache must be a single column")
    return m
