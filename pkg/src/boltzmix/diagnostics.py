"""Statistical verification helpers: empirical characteristic functions,
CF distances, tail-index and tail-constant estimation, and isotropy tests.

Everything here is a deterministic pure function of its input arrays; no
randomness is drawn. KS-style decisions elsewhere in the package use
p > 0.01 gates; the helpers here report statistics and leave thresholds to
callers (IsotropyReport.passed encodes the conventional 3-sigma / p>0.01
gate for convenience).
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import ArgumentError

# The equilibrium CF for tail exponents in (1,2) at scale c ~ 1 decays
# through its informative range on [0, 3].
DEFAULT_RHO_GRID = tuple(0.25 * k for k in range(13))
MIN_ECF_SAMPLES = 100
MIN_ISOTROPY_VECTORS = 1000


def _as_1d(x, name):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ArgumentError("%s must be one-dimensional, got shape %r"
                            % (name, x.shape))
    if x.size and not np.all(np.isfinite(x)):
        raise ArgumentError("%s must be finite" % name)
    return x


@dataclass(frozen=True, eq=False)
class EcfEstimate:
    """Empirical CF on a frequency grid: complex values, per-point
    standard errors (1/sqrt(n); exactly 0 at frequency 0 where the
    estimator is deterministic), and the sample count."""

    grid: np.ndarray
    values: np.ndarray
    stderr: np.ndarray
    n_samples: int

    def __post_init__(self):
        grid = _as_1d(self.grid, "grid")
        values = np.asarray(self.values, dtype=complex)
        stderr = np.asarray(self.stderr, dtype=float)
        if values.shape != grid.shape or stderr.shape != grid.shape:
            raise ArgumentError("values and stderr must match the grid")
        if np.any(np.abs(values) > 1.0 + 1e-12):
            raise ArgumentError("a mean of unit-modulus terms cannot "
                                "exceed modulus 1")
        if np.any(stderr < 0.0):
            raise ArgumentError("stderr must be nonnegative")
        if np.any(values[grid == 0.0] != 1.0):
            raise ArgumentError("the CF at frequency 0 must be exactly 1")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "stderr", stderr)
        object.__setattr__(self, "n_samples", int(self.n_samples))


def empirical_cf(samples, rho_grid):
    """Mean of exp(i rho x) over the samples at each grid frequency."""
    samples = _as_1d(samples, "samples")
    if samples.size < MIN_ECF_SAMPLES:
        raise ArgumentError("empirical CF needs at least %d samples, got %d"
                            % (MIN_ECF_SAMPLES, samples.size))
    grid = _as_1d(rho_grid, "rho_grid")
    values = np.empty(grid.size, dtype=complex)
    for j, rho in enumerate(grid):
        values[j] = np.exp(1j * rho * samples).mean()
    stderr = np.where(grid == 0.0, 0.0, 1.0 / np.sqrt(samples.size))
    return EcfEstimate(grid=grid, values=values, stderr=stderr,
                       n_samples=samples.size)


@dataclass(frozen=True)
class CfDistance:
    """Sup distance between two ECFs, with the combined standard error
    at the maximizing grid point."""

    value: float
    stderr: float

    def __float__(self):
        return self.value


def cf_sup_distance(a, b):
    """max over the (shared) grid of |a - b|."""
    if a.grid.shape != b.grid.shape or not np.array_equal(a.grid, b.grid):
        raise ArgumentError("CF estimates live on different grids")
    diffs = np.abs(a.values - b.values)
    j = int(np.argmax(diffs))
    return CfDistance(value=float(diffs[j]),
                      stderr=float(np.hypot(a.stderr[j], b.stderr[j])))


def tail_constant_process(samples, alpha, y_grid):
    """Empirical directional tail constants: for each y, the pair
    (y^-alpha P{x >= 1/y}, y^-alpha P{x <= -1/y}). For samples in the
    attraction domain of a stable law these stabilize, as y -> 0, at the
    tail masses of the upper/lower half-lines."""
    samples = _as_1d(samples, "samples")
    if samples.size == 0:
        raise ArgumentError("samples must be nonempty")
    alpha = float(alpha)
    if not (0.0 < alpha < 2.0):
        raise ArgumentError("tail exponent must lie in (0, 2), got %r"
                            % (alpha,))
    y = _as_1d(y_grid, "y_grid")
    if np.any(y <= 0.0):
        raise ArgumentError("y_grid must be positive")
    up = np.empty(y.size)
    dn = np.empty(y.size)
    for j, yj in enumerate(y):
        thr = 1.0 / yj
        up[j] = yj ** (-alpha) * np.mean(samples >= thr)
        dn[j] = yj ** (-alpha) * np.mean(samples <= -thr)
    return up, dn


def hill_tail_index(samples, k):
    """Hill estimator of the tail index of |samples| from the top k
    order statistics."""
    x = np.abs(_as_1d(samples, "samples"))
    k = int(k)
    n = x.size
    if k < 10 or 10 * k > n:
        raise ArgumentError("order-statistic count must satisfy "
                            "10 <= k <= n/10 (k=%d, n=%d)" % (k, n))
    top = np.sort(x)[-(k + 1):]
    if top[0] <= 0.0:
        raise ArgumentError("the k+1 largest |samples| must be positive")
    return float(1.0 / np.mean(np.log(top[1:]) - np.log(top[0])))


@dataclass(frozen=True, eq=False)
class IsotropyReport:
    """Directional uniformity summary of a vector sample: second moment
    of normalized directions vs I/d, and the Rayleigh mean-resultant
    statistic (asymptotically chi-square with d degrees of freedom under
    uniformity)."""

    d: int
    n_used: int
    n_zero_skipped: int
    second_moment: np.ndarray
    max_abs_deviation: float
    max_deviation_sigma: float
    resultant_length: float
    rayleigh_statistic: float
    rayleigh_pvalue: float

    def passed(self, sigma=3.0, p_min=0.01):
        return (self.max_deviation_sigma <= sigma
                and self.rayleigh_pvalue > p_min)

    def to_dict(self):
        return {
            "d": self.d,
            "n_used": self.n_used,
            "n_zero_skipped": self.n_zero_skipped,
            "second_moment": self.second_moment.tolist(),
            "max_abs_deviation": self.max_abs_deviation,
            "max_deviation_sigma": self.max_deviation_sigma,
            "resultant_length": self.resultant_length,
            "rayleigh_statistic": self.rayleigh_statistic,
            "rayleigh_pvalue": self.rayleigh_pvalue,
        }


def isotropy_check(vectors):
    """Test a cloud of d-vectors for directional uniformity; zero vectors
    carry no direction and are skipped (their count is reported)."""
    v = np.asarray(vectors, dtype=float)
    if v.ndim != 2 or v.shape[1] < 2:
        raise ArgumentError("vectors must be an (n, d) array with d >= 2, "
                            "got shape %r" % (v.shape,))
    if not np.all(np.isfinite(v)):
        raise ArgumentError("vectors must be finite")
    if v.shape[0] < MIN_ISOTROPY_VECTORS:
        raise ArgumentError("isotropy check needs at least %d vectors, "
                            "got %d" % (MIN_ISOTROPY_VECTORS, v.shape[0]))
    norms = np.linalg.norm(v, axis=1)
    keep = norms > 0.0
    n_zero = int(v.shape[0] - keep.sum())
    s = v[keep] / norms[keep][:, None]
    n, d = s.shape
    if n < 2:
        raise ArgumentError("all vectors are zero; no directions to test")
    second = s.T @ s / n
    target = np.eye(d) / d
    dev = second - target
    max_dev = float(np.abs(dev).max())
    # Per-entry standard errors of the second-moment estimates.
    sigma_max = 0.0
    with np.errstate(divide="ignore"):
        for i in range(d):
            for j in range(i, d):
                prod = s[:, i] * s[:, j]
                se = prod.std(ddof=1) / np.sqrt(n)
                z = np.inf if se == 0.0 and dev[i, j] != 0.0 else (
                    0.0 if se == 0.0 else abs(dev[i, j]) / se)
                sigma_max = max(sigma_max, float(z))
    resultant = float(np.linalg.norm(s.mean(axis=0)))
    rayleigh = n * d * resultant ** 2
    pvalue = float(stats.chi2.sf(rayleigh, df=d))
    return IsotropyReport(d=d, n_used=n, n_zero_skipped=n_zero,
                          second_moment=second,
                          max_abs_deviation=max_dev,
                          max_deviation_sigma=sigma_max,
                          resultant_length=resultant,
                          rayleigh_statistic=float(rayleigh),
                          rayleigh_pvalue=pvalue)


def ecf_records(est):
    """The estimate as a list of {rho, re, im, stderr} records (the JSON
    export shape)."""
    return [{"rho": float(r), "re": float(v.real), "im": float(v.imag),
             "stderr": float(s)}
            for r, v, s in zip(est.grid, est.values, est.stderr)]


def save_ecf_csv(est, path):
    """Write (rho, re, im, stderr) rows as CSV with a header line."""
    table = np.column_stack([est.grid, est.values.real, est.values.imag,
                             est.stderr])
    np.savetxt(path, table, delimiter=",", header="rho,re,im,stderr",
               comments="", fmt="%.17g")
