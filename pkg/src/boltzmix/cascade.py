"""The random splitting recursion over weighted rotations.

Starting from the single leaf (beta, O) = (1, identity), each step picks a
uniformly random leaf and splits it through one collision-kernel draw: the
leaf (beta, O) becomes the adjacent pair (beta r-, O R-), (beta r+, O R+).
After n steps the n+1 leaves carry the weights and orientations that
represent the velocity distribution after n collision events.

Derived quantities: the leaf-weight power sum M = sum beta_j^alpha (a
mean-one martingale in n whose large-n limit is the mixing weight of the
equilibrium law), weighted projection sums that realize one velocity
projection draw from the n-collision distribution, and weighted test sums
over the leaf orientations.

run_tree pre-draws all randomness with numpy and hands the sequential chain
products to the selected backend core; tree_steps is the readable
step-by-step reference with the same leaf law, used to verify the fast
path. Deep trees (n above DEEP_TREE_THRESHOLD) keep weights in log scale
internally and exponentiate only into sums.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .collision import kernel_components, sample_kernel, sample_psi
from .errors import ArgumentError
from .rotations import (CHAIN_CHECK_INTERVAL, CHAIN_DRIFT_TOL, is_rotation,
                        rotation_taking_ed_to)

# Depth beyond which leaf weights are accumulated as logarithms.
DEEP_TREE_THRESHOLD = 1000
# Default recursion depth for drawing the limiting weight M.
DEFAULT_DEPTH = 500
# Newton-Schulz repair parameters (match rotations.reorthogonalize).
NS_TARGET = 1e-14
NS_MAX_ITERS = 12


@dataclass(frozen=True, eq=False)
class WeightArray:
    """The leaf state after n splitting steps: betas[j] >= 0 and rots[j]
    the accumulated rotation of leaf j, both in leaf order. For deep trees
    log_betas carries the log-scale weights (betas = exp(log_betas)); sums
    over such trees should exponentiate per term from log_betas."""

    n: int
    betas: np.ndarray
    rots: np.ndarray
    log_betas: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        betas = np.asarray(self.betas, dtype=float)
        rots = np.asarray(self.rots, dtype=float)
        m = self.n + 1
        if self.n < 0:
            raise ArgumentError("step count must be >= 0, got %d" % self.n)
        if betas.shape != (m,):
            raise ArgumentError("betas must have shape (%d,), got %r"
                               % (m, betas.shape))
        if rots.ndim != 3 or rots.shape[0] != m \
                or rots.shape[1] != rots.shape[2]:
            raise ArgumentError("rots must have shape (%d, d, d), got %r"
                               % (m, rots.shape))
        if np.any(betas < 0.0) or not np.all(np.isfinite(betas)):
            raise ArgumentError("leaf weights must be finite and >= 0")
        if self.n == 0:
            if betas[0] != 1.0 or not np.array_equal(
                    rots[0], np.eye(rots.shape[1])):
                raise ArgumentError("a zero-step tree is the single leaf "
                                    "(1, identity)")
        if self.log_betas is not None:
            lb = np.asarray(self.log_betas, dtype=float)
            if lb.shape != (m,):
                raise ArgumentError("log_betas must have shape (%d,), got "
                                    "%r" % (m, lb.shape))
            object.__setattr__(self, "log_betas", lb)
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "rots", rots)

    @property
    def d(self):
        return self.rots.shape[1]


def _draw_splits(n, rng):
    """Physical slot to split at each step: slot k is uniform on the k+1
    leaves present, which occupy slots 0..k."""
    if n == 0:
        return np.empty(0, dtype=np.int64)
    return rng.integers(0, np.arange(1, n + 1), dtype=np.int64)


def run_tree(n, params, rng):
    """Run n splitting steps and return the WeightArray, leaves in order.

    All randomness is pre-drawn in a fixed order (split slots, then the
    kernel batch), every per-leaf rotation chain is drift-checked every
    CHAIN_CHECK_INTERVAL factors, and the sequential products run on the
    selected backend core. The split leaf is chosen uniformly among
    current leaves; the ordered leaf arrays have the same law as growing
    with any other uniform leaf-picking convention.
    """
    n = int(n)
    if n < 0:
        raise ArgumentError("step count must be >= 0, got %d" % n)
    d = params.d
    log_mode = n > DEEP_TREE_THRESHOLD
    rots = np.zeros((n + 1, d, d))
    rots[0] = np.eye(d)
    if n == 0:
        return WeightArray(0, np.ones(1), rots)
    ell = _draw_splits(n, rng)
    ks = sample_kernel(params, rng, size=n)
    betas = np.zeros(n + 1)
    if log_mode:
        with np.errstate(divide="ignore"):
            r_minus = np.log(ks.r_minus)
            r_plus = np.log(ks.r_plus)
    else:
        betas[0] = 1.0
        r_minus = np.ascontiguousarray(ks.r_minus)
        r_plus = np.ascontiguousarray(ks.r_plus)
    counts = np.zeros(n + 1, dtype=np.int64)
    nxt = np.full(n + 1, -1, dtype=np.int64)
    core = _backend.active()
    core.tree_chain(betas, rots, counts, nxt, ell, r_minus, r_plus,
                    np.ascontiguousarray(ks.R_minus),
                    np.ascontiguousarray(ks.R_plus),
                    CHAIN_CHECK_INTERVAL, CHAIN_DRIFT_TOL,
                    NS_TARGET, NS_MAX_ITERS, log_mode)
    order = np.empty(n + 1, dtype=np.int64)
    core.linked_order(nxt, order)
    rots = rots[order]
    if log_mode:
        logb = betas[order]
        return WeightArray(n, np.exp(logb), rots, log_betas=logb)
    return WeightArray(n, betas[order], rots)


def tree_steps(n, params, rng):
    """Readable single-step reference recursion: yields the WeightArray
    after each step 0..n. Each step draws a 1-based leaf index uniformly,
    then one kernel sample, and splits that leaf in place. Quadratic cost;
    run_tree is the equal-in-law fast path."""
    n = int(n)
    if n < 0:
        raise ArgumentError("step count must be >= 0, got %d" % n)
    d = params.d
    betas = [1.0]
    rots = [np.eye(d)]
    yield WeightArray(0, np.array(betas), np.stack(rots))
    for k in range(1, n + 1):
        ell = int(rng.integers(1, k + 1))
        ks = sample_kernel(params, rng)
        b = betas[ell - 1]
        O = rots[ell - 1]
        betas[ell - 1:ell] = [b * ks.r_minus, b * ks.r_plus]
        rots[ell - 1:ell] = [O @ ks.R_minus, O @ ks.R_plus]
        yield WeightArray(k, np.array(betas), np.stack(rots))


def _alpha_weights(w, alpha):
    """beta_j^alpha, from log scale when the tree stored logs."""
    if w.log_betas is not None:
        return np.exp(alpha * w.log_betas)
    return w.betas ** alpha


def weight_stats(w, alpha):
    """(M, beta_max) for a weight exponent alpha in (0, 2): the leaf power
    sum M = sum beta_j^alpha and the largest leaf weight."""
    alpha = float(alpha)
    if not (0.0 < alpha < 2.0):
        raise ArgumentError("weight exponent must lie in (0, 2), got %r"
                            % (alpha,))
    M = float(np.sum(_alpha_weights(w, alpha)))
    return M, float(np.max(w.betas))


def _weights_only(n, params, rng, log_mode):
    """Leaf weights after n steps without building rotations; draws only
    the split slots and the scattering angles."""
    betas = np.zeros(n + 1)
    if not log_mode:
        betas[0] = 1.0
    if n == 0:
        return betas
    ell = _draw_splits(n, rng)
    psi = sample_psi(params, rng, size=n)
    r_minus, r_plus, _, _ = kernel_components(psi, params.delta)
    if log_mode:
        with np.errstate(divide="ignore"):
            r_minus = np.log(r_minus)
            r_plus = np.log(r_plus)
    _backend.active().tree_chain_weights(betas, ell, r_minus, r_plus,
                                         log_mode)
    return betas


def sample_M_infinity(params, alpha, rng, depth=DEFAULT_DEPTH, size=None):
    """Draw the limiting weight sum M by running the recursion to a fixed
    depth (default 500) and summing beta_j^alpha.

    The depth-n law converges, so a deep enough tree is an (approximate)
    draw from the limit; the default depth is validated by depth-stability
    tests. Only the split slots and scattering angles are consumed from
    rng (rotations are not needed for the weights). Depths above
    DEEP_TREE_THRESHOLD accumulate in log scale.
    """
    alpha = float(alpha)
    if not (0.0 < alpha < 2.0):
        raise ArgumentError("weight exponent must lie in (0, 2), got %r"
                            % (alpha,))
    depth = int(depth)
    if depth < 1:
        raise ArgumentError("depth must be >= 1, got %d" % depth)
    log_mode = depth > DEEP_TREE_THRESHOLD
    count = 1 if size is None else int(size)
    out = np.empty(count)
    for i in range(count):
        b = _weights_only(depth, params, rng, log_mode)
        if log_mode:
            out[i] = np.sum(np.exp(alpha * b))
        else:
            out[i] = np.sum(b ** alpha)
    return out if size is not None else float(out[0])


def _draw_initial(initial_sampler, rng, count, d):
    """count i.i.d. d-vectors from the sampler; batched call when the
    sampler supports a size argument, else one call per draw."""
    try:
        X = np.asarray(initial_sampler(rng, count), dtype=float)
    except TypeError:
        X = np.stack([np.asarray(initial_sampler(rng), dtype=float)
                      for _ in range(count)])
    if X.shape != (count, d):
        raise ArgumentError(
            "initial sampler must produce %d vectors of dimension %d, got "
            "shape %r" % (count, d, X.shape))
    if not np.all(np.isfinite(X)):
        raise ArgumentError("initial sampler produced non-finite values")
    return X


def sample_projection_sum(w, e, initial_sampler, rng):
    """One draw of the projected n-collision velocity: with R the rotation
    taking e_d to e, returns sum_j beta_j (R O_j e_d) . X_j over fresh
    i.i.d. initial draws X_j."""
    d = w.d
    e = np.asarray(e, dtype=float)
    if e.shape != (d,):
        raise ArgumentError("projection direction must be a %d-vector, got "
                            "shape %r" % (d, e.shape))
    R = rotation_taking_ed_to(e)
    dirs = w.rots[:, :, d - 1] @ R.T
    X = _draw_initial(initial_sampler, rng, w.n + 1, d)
    return float(np.sum(w.betas * np.einsum("kd,kd->k", dirs, X)))


def eval_psi_process(w, alpha, psi0, O):
    """The weighted test sum sum_j beta_j^alpha psi0(O O_j) for a bounded
    test function psi0 on rotations, evaluated one leaf at a time."""
    alpha = float(alpha)
    if not (0.0 < alpha < 2.0):
        raise ArgumentError("weight exponent must lie in (0, 2), got %r"
                            % (alpha,))
    O = np.asarray(O, dtype=float)
    d = w.d
    if O.shape != (d, d) or not bool(is_rotation(O)):
        raise ArgumentError("evaluation point must be a %dx%d rotation"
                            % (d, d))
    prods = O @ w.rots
    vals = np.array([float(psi0(prods[j])) for j in range(w.n + 1)])
    return float(np.sum(_alpha_weights(w, alpha) * vals))
