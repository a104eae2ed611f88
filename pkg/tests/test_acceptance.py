"""Full-size release battery: one test per gate check, run at the "full"
profile of boltzmix.verify so every tolerance and sample size matches the
shipped release criteria. Each test asserts the check verdict and that the
check finished inside its runtime budget.

Expect roughly 12-15 minutes end to end; the two characteristic-function
self-consistency checks dominate (10^5 cascade replicates at t = 8 each).

Two tests are strict expected failures, mirrored by the known-limitation
list in boltzmix.verify (reported but excluded from the selfcheck gate):

* leaf orientation: at any feasible depth the leaf frames retain a small
  mean alignment with the root direction, so the hemisphere count is
  measurably polarized rather than a fair coin toss;
* heavy-tail attraction: the true time-8 distance of the evolved
  Pareto-uniform law from its predicted stationary mixture is 0.031
  (computed by a leaf-weight quadrature reference to stderr 3e-4, and
  decaying like exp(-0.1875 t)), which already exceeds the 0.030 gate
  before estimator noise; the tail-index half of the same check passes
  with ~2% error.
"""

import pytest

from conftest import SEED

from boltzmix import verify


def run_full(check, budget_seconds):
    """Run one gate check at the full profile; fail with its detail line."""
    (result,) = verify.run_checks("full", seed=SEED, checks=(check,))
    assert result.passed, "%s: %s" % (result.criterion, result.detail)
    assert result.seconds < budget_seconds, \
        "%s took %.1f s (budget %.0f s)" % (result.criterion, result.seconds,
                                            budget_seconds)
    return result


def test_01_kernel_identity():
    run_full(verify.check_kernel_identity, 10.0)


def test_02_spectral_constants():
    run_full(verify.check_spectral_oracle, 5.0)


def test_03_radial_self_consistency():
    run_full(verify.check_radial_self_consistency, 600.0)


@pytest.mark.xfail(
    strict=True,
    reason="the genuine time-8 transient of the Pareto-uniform law is "
           "0.031 +/- 0.0003 (leaf-weight quadrature reference), above "
           "the 0.030 CF gate; with the sup-of-noise lift of the "
           "100k-replicate estimator the measured distance is ~0.036. "
           "Only the particle route's finite-N bias toward equilibrium "
           "would land under the gate, which would validate an artifact. "
           "The Hill half of the check passes (1.8% error)")
def test_04_heavy_tail_attraction():
    run_full(verify.check_heavy_tail_attraction, 600.0)


def test_05_stationarity_under_dynamics():
    run_full(verify.check_stationarity_under_dynamics, 120.0)


def test_06_route_equivalence():
    run_full(verify.check_route_equivalence, 300.0)


def test_07_martingale_fixed_point():
    run_full(verify.check_martingale_fixed_point, 180.0)


def test_08_haar_correctness():
    run_full(verify.check_haar_correctness, 60.0)


@pytest.mark.xfail(
    strict=True,
    reason="finite-depth orientation polarization: the leaf-frame alignment "
           "decays like depth**-0.15, so at any affordable depth the "
           "hemisphere indicator stays correlated with the root direction "
           "and the mixture comparison fails its KS gate")
def test_09_orientation_limit():
    run_full(verify.check_orientation_limit, 180.0)


def test_10_reproducibility():
    run_full(verify.check_reproducibility, 120.0)
