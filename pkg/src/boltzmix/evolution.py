"""Time evolution of the velocity law by two independent routes.

Tree route (exact in law): the solution at time t is a geometric mixture
of collision trees — draw the collision counter N_t with
P{N_t = n} = e^-t (1 - e^-t)^n, grow an N_t-step tree, and form the
projection sum against i.i.d. initial draws.

Particle route (heuristic cross-check): a Nanbu-style direct-simulation
ensemble. Each particle collides at unit rate (global exponential clock of
rate N); at an event a uniformly chosen particle i meets a uniform partner
j != i and is replaced by one of the two post-collision velocities with
probability 1/2 each, which matches the weak-form generator
E[(phi(v') + phi(v'_*))/2]. A symmetric pair update (both particles
replaced) is available behind a flag for robustness checks.

Tree sizes are capped by a node budget (default 10^6, reached near
t = ln(budget) ~ 13.8). Counts beyond the budget are truncated; the law
error is at most the geometric tail P{N_t > budget} =
(1 - e^-t)^(budget+1), which estimate_cf_evolution records whenever
truncation actually occurred.
"""

import math
from dataclasses import dataclass

import numpy as np

from .cascade import run_tree, sample_projection_sum
from .collision import collide, sample_psi
from .diagnostics import empirical_cf
from .errors import ArgumentError, ResourceError
from .rotations import (_elementary_batch, rotation_taking_ed_to,
                        sample_subgroup_haar)
from .stablelaws import initial_sampler, sample_initial

DEFAULT_NODE_BUDGET = 1_000_000
MIN_CF_REPLICATES = 1000


def sample_collision_count(t, rng, size=None):
    """The collision counter N_t: geometric with success probability
    e^-t, counting failures (so t=0 gives 0 always)."""
    t = float(t)
    if not (np.isfinite(t) and t >= 0.0):
        raise ArgumentError("time must be finite and >= 0, got %r" % (t,))
    p = math.exp(-t)
    if p == 0.0:
        raise ArgumentError("time %g is so large that e^-t underflows"
                            % t)
    draw = rng.geometric(p, size)
    if size is None:
        return int(draw) - 1
    return np.asarray(draw, dtype=np.int64) - 1


def geometric_tail_bound(t, n_max):
    """P{N_t > n_max} = (1 - e^-t)^(n_max + 1)."""
    t = float(t)
    if t == 0.0:
        return 0.0
    return math.exp((n_max + 1) * math.log1p(-math.exp(-t)))


def _require_budget(t, node_budget):
    node_budget = int(node_budget)
    if node_budget < 1:
        raise ArgumentError("node budget must be >= 1, got %d"
                            % node_budget)
    mean = math.expm1(t)
    if mean > node_budget:
        raise ResourceError(
            "expected tree size e^t - 1 = %.3g at t=%g exceeds the node "
            "budget %d; raise node_budget or reduce t (truncating at the "
            "budget would mis-state the law by at most the geometric tail "
            "(1 - e^-t)^(budget+1) = %.3g)"
            % (mean, t, node_budget, geometric_tail_bound(t, node_budget)))
    return node_budget


def _capped_collision_count(t, rng, node_budget):
    n = sample_collision_count(t, rng)
    if n > node_budget:
        return node_budget, True
    return n, False


def sample_velocity_projection(t, e, data, params, rng,
                               node_budget=DEFAULT_NODE_BUDGET):
    """One exact-in-law draw of e . V_t: draw N_t, grow the tree, and
    take the projection sum against i.i.d. initial draws."""
    t = float(t)
    if not (np.isfinite(t) and t >= 0.0):
        raise ArgumentError("time must be finite and >= 0, got %r" % (t,))
    if data.d != params.d:
        raise ArgumentError("initial data is %d-dimensional but the model "
                            "is %d-dimensional" % (data.d, params.d))
    node_budget = _require_budget(t, node_budget)
    n, _ = _capped_collision_count(t, rng, node_budget)
    w = run_tree(n, params, rng)
    return sample_projection_sum(w, e, initial_sampler(data), rng)


@dataclass(frozen=True, eq=False)
class ParticleEnsemble:
    """A velocity ensemble at a fixed time."""

    d: int
    t: float
    velocities: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "d", int(self.d))
        t = float(self.t)
        if not (np.isfinite(t) and t >= 0.0):
            raise ArgumentError("time must be finite and >= 0, got %r"
                                % (self.t,))
        object.__setattr__(self, "t", t)
        v = np.asarray(self.velocities, dtype=float)
        if v.ndim != 2 or v.shape[1] != self.d:
            raise ArgumentError("velocities must be (N, %d), got shape %r"
                                % (self.d, v.shape))
        if v.shape[0] < 2:
            raise ArgumentError("an ensemble needs at least 2 particles")
        if not np.all(np.isfinite(v)):
            raise ArgumentError("velocities must be finite")
        object.__setattr__(self, "velocities", v)

    @property
    def n_particles(self):
        return self.velocities.shape[0]


def mean_velocity(ens):
    return ens.velocities.mean(axis=0)


def mean_energy(ens):
    return float((ens.velocities ** 2).sum(axis=1).mean())


def _event_count(t_final, rate, rng):
    """Number of exponential-clock events (rate `rate`) in [0, t_final]:
    cumulative increments drawn in blocks until t_final is passed."""
    if t_final == 0.0:
        return 0
    total = 0.0
    count = 0
    block = max(64, int(rate * t_final + 6.0 * math.sqrt(rate * t_final)
                        + 16.0))
    while True:
        inc = rng.exponential(1.0 / rate, block)
        cum = total + np.cumsum(inc)
        hit = int(np.searchsorted(cum, t_final, side="right"))
        count += hit
        if hit < block:
            return count
        total = cum[-1]
        block = max(64, block // 4)


def run_dsmc(n_particles, t_final, data, params, rng, pair_update=False):
    """Evolve an N-particle Nanbu ensemble drawn from `data` to t_final.

    Draws the initial velocities and hands them to run_dsmc_from; see there
    for the event loop and the draw order.
    """
    n_particles = int(n_particles)
    if n_particles < 2:
        raise ArgumentError("need at least 2 particles, got %d"
                            % n_particles)
    if data.d != params.d:
        raise ArgumentError("initial data is %d-dimensional but the model "
                            "is %d-dimensional" % (data.d, params.d))
    v = np.array(sample_initial(data, rng, size=n_particles))
    return run_dsmc_from(v, t_final, params, rng, pair_update=pair_update)


def run_dsmc_from(velocities, t_final, params, rng, pair_update=False):
    """Evolve an explicit (N, d) velocity array to t_final.

    Entry point for ensembles whose initial law is not an InitialData kind
    (e.g. draws from a stationary-law cache). Draw order: exponential clock
    increments; then the per-event fields in batches (particle i, partner
    offset, scattering angle psi, two subgroup-Haar frames, branch coin).
    The scattering randomness is state-independent, so batching it does not
    change the law or the event sequence.
    """
    t_final = float(t_final)
    if not (np.isfinite(t_final) and t_final >= 0.0):
        raise ArgumentError("time must be finite and >= 0, got %r"
                            % (t_final,))
    d = params.d
    v = np.array(velocities, dtype=float)
    if v.ndim != 2 or v.shape[1] != d:
        raise ArgumentError("velocities must be (N, %d), got shape %r"
                            % (d, v.shape))
    n_particles = v.shape[0]
    if n_particles < 2:
        raise ArgumentError("need at least 2 particles, got %d"
                            % n_particles)
    if not np.all(np.isfinite(v)):
        raise ArgumentError("velocities must be finite")
    n_events = _event_count(t_final, float(n_particles), rng)
    if n_events:
        i_idx = rng.integers(0, n_particles, n_events)
        j_off = rng.integers(0, n_particles - 1, n_events)
        psi = np.atleast_1d(sample_psi(params, rng, size=n_events))
        u1 = sample_subgroup_haar(d, rng, size=n_events)
        u2 = sample_subgroup_haar(d, rng, size=n_events)
        # Scattering directions relative to e_d; rotated onto each
        # event's relative-velocity direction below.
        m = (u1 @ _elementary_batch(d, 1, d, psi) @ u2)[:, :, d - 1]
        coins = rng.random(n_events)
        delta = params.delta
        for k in range(n_events):
            i = int(i_idx[k])
            j = int(j_off[k])
            if j >= i:
                j += 1
            rel = v[i] - v[j]
            speed = np.linalg.norm(rel)
            if speed == 0.0:
                continue  # collide() would return both unchanged
            n_dir = rotation_taking_ed_to(rel / speed) @ m[k]
            vp, vp_star = collide(v[i], v[j], n_dir, delta)
            if pair_update:
                v[i] = vp
                v[j] = vp_star
            else:
                v[i] = vp if coins[k] < 0.5 else vp_star
    return ParticleEnsemble(d=d, t=t_final, velocities=v)


@dataclass(frozen=True, eq=False)
class EvolutionCf:
    """CF-of-projection estimate at a fixed time, with the count of
    budget-truncated trees, the geometric tail bound on the law error
    (0 when no tree was truncated), and the raw projection samples the
    estimate was built from (for export and tail diagnostics)."""

    ecf: object
    truncated_trees: int
    tail_bound: float
    samples: np.ndarray = None


def _one_replicate(t, e, sampler, params, sub, node_budget):
    """One projection draw with its truncation flag: the unit of work of
    the CF estimator, also scheduled across workers by the command-line
    runner. All randomness comes from `sub`, so the value depends only on
    the stream, never on the scheduling."""
    n, capped = _capped_collision_count(t, sub, node_budget)
    w = run_tree(n, params, sub)
    return sample_projection_sum(w, e, sampler, sub), capped


def estimate_cf_evolution(t, rho_grid, e, data, params, replicates, rng,
                          node_budget=DEFAULT_NODE_BUDGET,
                          replicate_streams=None):
    """Empirical CF of e . V_t over independent tree replicates.

    Replicate r draws from replicate_streams(r) (default: substream r of
    rng's seed namespace), so statistics are identical however replicates
    are scheduled across workers.
    """
    t = float(t)
    if not (np.isfinite(t) and t >= 0.0):
        raise ArgumentError("time must be finite and >= 0, got %r" % (t,))
    replicates = int(replicates)
    if replicates < MIN_CF_REPLICATES:
        raise ArgumentError("CF estimation needs at least %d replicates, "
                            "got %d" % (MIN_CF_REPLICATES, replicates))
    if data.d != params.d:
        raise ArgumentError("initial data is %d-dimensional but the model "
                            "is %d-dimensional" % (data.d, params.d))
    node_budget = _require_budget(t, node_budget)
    if replicate_streams is None:
        replicate_streams = rng.substream
    sampler = initial_sampler(data)
    samples = np.empty(replicates)
    truncated = 0
    for r in range(replicates):
        samples[r], capped = _one_replicate(t, e, sampler, params,
                                            replicate_streams(r),
                                            node_budget)
        truncated += capped
    ecf = empirical_cf(samples, rho_grid)
    bound = geometric_tail_bound(t, node_budget) if truncated else 0.0
    return EvolutionCf(ecf=ecf, truncated_trees=truncated,
                       tail_bound=bound, samples=samples)
