"""Tests for rotation construction and Haar sampling.

Expected constants come from closed forms double-checked by quadrature in
tests/oracles.py (symmetric-Beta moments, sphere moments); distributional
checks compare the Euler-angle sampler against the independent QR-based one.
"""

import numpy as np
import pytest
from scipy import stats

from boltzmix import rotations as rot
from boltzmix.errors import ArgumentError

from conftest import stream, sem


# ---------------------------------------------------------------- elementary

def test_zero_angle_is_identity():
    assert np.array_equal(rot.elementary_rotation(3, 1, 3, 0.0), np.eye(3))


def test_quarter_turn_entry_table():
    Z = rot.elementary_rotation(3, 1, 3, np.pi / 2)
    assert Z[0, 2] == pytest.approx(-1.0, abs=1e-15)
    assert Z[2, 0] == pytest.approx(1.0, abs=1e-15)
    assert Z[0, 0] == pytest.approx(0.0, abs=1e-15)
    assert Z[2, 2] == pytest.approx(0.0, abs=1e-15)
    assert Z[1, 1] == 1.0


@pytest.mark.parametrize("a,b", [(0.3, 0.4), (2.0, -0.7), (np.pi, np.pi),
                                 (5.9, 1.23), (-2.2, -3.3)])
def test_composition_adds_angles(a, b):
    d = 4
    left = rot.elementary_rotation(d, 1, d, a) @ rot.elementary_rotation(d, 1, d, b)
    assert np.allclose(left, rot.elementary_rotation(d, 1, d, a + b), atol=1e-14)


def test_invalid_indices_raise():
    with pytest.raises(ArgumentError):
        rot.elementary_rotation(3, 0, 2, 0.1)
    with pytest.raises(ArgumentError):
        rot.elementary_rotation(3, 2, 2, 0.1)
    with pytest.raises(ArgumentError):
        rot.elementary_rotation(3, 2, 4, 0.1)
    with pytest.raises(ArgumentError):
        rot.elementary_rotation(3, 3, 1, 0.1)


def test_elementary_satisfies_type_invariants():
    rng = stream(1)
    for _ in range(50):
        d = int(rng.integers(2, 7))
        i = int(rng.integers(1, d))
        j = int(rng.integers(i + 1, d + 1))
        R = rot.elementary_rotation(d, i, j, rng.uniform(-10, 10))
        assert rot.rotation_defect(R) <= rot.ORTHO_TOL
        assert abs(np.linalg.det(R) - 1.0) <= rot.DET_TOL


# ------------------------------------------------------------ sin-power angle

def test_sin_power_zero_is_uniform_on_half_circle():
    x = rot.sample_sin_power_angle(0, stream(2), size=100_000)
    assert x.min() >= 0.0 and x.max() < np.pi
    assert abs(x.mean() - np.pi / 2) <= 3 * sem(x)
    p = stats.kstest(x, "uniform", args=(0.0, np.pi)).pvalue
    assert p > 0.01


def test_sin_power_one_gives_uniform_cosine():
    x = rot.sample_sin_power_angle(1, stream(3), size=100_000)
    c = np.cos(x)
    assert abs(c.mean()) <= 3 * sem(c)
    c2 = c ** 2
    assert abs(c2.mean() - 1.0 / 3.0) <= 3 * sem(c2)
    p = stats.kstest(c, "uniform", args=(-1.0, 2.0)).pvalue
    assert p > 0.01


@pytest.mark.parametrize("r", [0, 1, 2, 3, 4, 5])
def test_sin_power_cos_square_moment(r):
    # E[cos^2 psi] = 1/(r+2): the quadrature value of
    # (integral of cos^2 sin^r) / (integral of sin^r) over [0, pi],
    # e.g. 1/4 at r=2 and 1/5 at r=3.
    x = rot.sample_sin_power_angle(r, stream(40 + r), size=100_000)
    c2 = np.cos(x) ** 2
    assert abs(c2.mean() - 1.0 / (r + 2)) <= 3 * sem(c2)


def test_sin_power_rejects_negative_exponent():
    with pytest.raises(ArgumentError):
        rot.sample_sin_power_angle(-1, stream(4))


# ------------------------------------------------------------------- Haar

def test_haar_d2_is_uniform_planar_rotation():
    O = rot.sample_haar(2, stream(5), size=20_000)
    assert np.allclose(O[:, 0, 0], O[:, 1, 1], atol=1e-14)
    assert np.allclose(O[:, 0, 1], -O[:, 1, 0], atol=1e-14)
    theta = np.mod(np.arctan2(O[:, 1, 0], O[:, 0, 0]), 2 * np.pi)
    p = stats.kstest(theta, "uniform", args=(0.0, 2 * np.pi)).pvalue
    assert p > 0.01


@pytest.mark.parametrize("d", [3, 4, 5])
def test_haar_satisfies_type_invariants(d):
    O = rot.sample_haar(d, stream(6), size=10_000)
    assert rot.rotation_defect(O).max() <= rot.ORTHO_TOL
    assert np.abs(np.linalg.det(O) - 1.0).max() <= rot.DET_TOL


def test_haar_last_column_second_moment_is_isotropic():
    d = 3
    O = rot.sample_haar(d, stream(7), size=100_000)
    v = O[:, :, d - 1]
    for i in range(d):
        for j in range(d):
            prod = v[:, i] * v[:, j]
            target = (1.0 / d) if i == j else 0.0
            assert abs(prod.mean() - target) <= 3 * sem(prod)


@pytest.mark.parametrize("statistic", ["trace", "corner"])
def test_haar_matches_independent_oracle(statistic):
    n = 100_000
    O = rot.sample_haar(3, stream(8), size=n)
    Q = rot.sample_haar_oracle(3, stream(9), size=n)
    if statistic == "trace":
        a = np.trace(O, axis1=1, axis2=2)
        b = np.trace(Q, axis1=1, axis2=2)
    else:
        a = O[:, 2, 2]
        b = Q[:, 2, 2]
    p = stats.ks_2samp(a, b).pvalue
    assert p > 0.01


@pytest.mark.parametrize("d", [3, 4])
@pytest.mark.parametrize("transform", ["left", "right", "transpose"])
def test_haar_invariance_under_group_action(d, transform):
    # For fixed G, the laws of G O, O G and O^T all coincide with the law
    # of O; compared on the corner statistic e_d . (.) e_d against an
    # independently drawn sample.
    n = 20_000
    G = (rot.elementary_rotation(d, 1, 2, 0.7)
         @ rot.elementary_rotation(d, 2, d, 1.1))
    O = rot.sample_haar(d, stream(10 + d), size=n)
    ref = rot.sample_haar(d, stream(20 + d), size=n)
    if transform == "left":
        X = G @ O
    elif transform == "right":
        X = O @ G
    else:
        X = np.swapaxes(O, 1, 2)
    p = stats.ks_2samp(X[:, d - 1, d - 1], ref[:, d - 1, d - 1]).pvalue
    assert p > 0.01


def test_haar_scalar_call_matches_batch_head():
    a = rot.sample_haar(3, stream(11))
    b = rot.sample_haar(3, stream(11), size=1)[0]
    assert np.array_equal(a, b)


# ------------------------------------------------------------- Haar oracle

@pytest.mark.parametrize("d", [3, 4, 5])
def test_oracle_satisfies_type_invariants(d):
    Q = rot.sample_haar_oracle(d, stream(12), size=10_000)
    assert rot.rotation_defect(Q).max() <= rot.ORTHO_TOL
    assert np.abs(np.linalg.det(Q) - 1.0).max() <= rot.DET_TOL


def test_oracle_last_column_second_moment_is_isotropic():
    d = 3
    Q = rot.sample_haar_oracle(d, stream(13), size=100_000)
    v = Q[:, :, d - 1]
    for i in range(d):
        for j in range(d):
            prod = v[:, i] * v[:, j]
            target = (1.0 / d) if i == j else 0.0
            assert abs(prod.mean() - target) <= 3 * sem(prod)


def test_oracle_column_norms_d4():
    Q = rot.sample_haar_oracle(4, stream(14), size=1_000)
    norms = np.linalg.norm(Q, axis=1)
    assert np.abs(norms - 1.0).max() <= 1e-12


# ------------------------------------------------------------ subgroup Haar

def test_subgroup_fixes_last_axis_exactly():
    d = 4
    R = rot.sample_subgroup_haar(d, stream(15), size=1_000)
    ed = np.zeros(d)
    ed[-1] = 1.0
    assert np.abs(R[:, :, d - 1] - ed).max() <= 1e-15
    assert np.abs(R[:, d - 1, :] - ed).max() <= 1e-15


def test_subgroup_d3_block_is_uniform_planar_rotation():
    R = rot.sample_subgroup_haar(3, stream(16), size=20_000)
    B = R[:, :2, :2]
    assert np.allclose(B[:, 0, 0], B[:, 1, 1], atol=1e-14)
    theta = np.mod(np.arctan2(B[:, 1, 0], B[:, 0, 0]), 2 * np.pi)
    p = stats.kstest(theta, "uniform", args=(0.0, 2 * np.pi)).pvalue
    assert p > 0.01


def test_subgroup_d4_rotates_e1_uniformly_on_sphere():
    d = 4
    R = rot.sample_subgroup_haar(d, stream(17), size=100_000)
    img = R[:, :, 0]
    assert np.abs(img[:, 3]).max() == 0.0
    xyz = img[:, :3]
    assert np.abs(np.linalg.norm(xyz, axis=1) - 1.0).max() <= 1e-12
    # last coordinate of a uniform point on the 2-sphere is uniform on (-1,1)
    p = stats.kstest(xyz[:, 2], "uniform", args=(-1.0, 2.0)).pvalue
    assert p > 0.01


@pytest.mark.parametrize("d", [3, 4, 5])
def test_subgroup_satisfies_type_invariants(d):
    R = rot.sample_subgroup_haar(d, stream(18), size=10_000)
    assert rot.rotation_defect(R).max() <= rot.ORTHO_TOL
    assert np.abs(np.linalg.det(R) - 1.0).max() <= rot.DET_TOL


def test_subgroup_rejects_dimension_below_three():
    with pytest.raises(ArgumentError):
        rot.sample_subgroup_haar(2, stream(19))


# --------------------------------------------------- rotation taking e_d to e

def test_orienting_rotation_identity_case():
    assert np.array_equal(rot.rotation_taking_ed_to(np.array([0.0, 0.0, 1.0])),
                          np.eye(3))


def test_orienting_rotation_to_first_axis():
    e = np.array([1.0, 0.0, 0.0])
    R = rot.rotation_taking_ed_to(e)
    assert np.linalg.norm(R @ np.array([0.0, 0.0, 1.0]) - e) <= 1e-12
    assert rot.is_rotation(R)


def test_orienting_rotation_antipodal_case():
    e = np.array([0.0, 0.0, -1.0])
    R = rot.rotation_taking_ed_to(e)
    assert np.linalg.norm(R @ np.array([0.0, 0.0, 1.0]) - e) <= 1e-12
    assert abs(np.linalg.det(R) - 1.0) <= rot.DET_TOL


@pytest.mark.parametrize("d", [3, 4, 5])
def test_orienting_rotation_random_directions(d):
    e = rot.sample_uniform_sphere(d, stream(21), size=500)
    ed = np.zeros(d)
    ed[-1] = 1.0
    for k in range(e.shape[0]):
        R = rot.rotation_taking_ed_to(e[k])
        assert np.linalg.norm(R @ ed - e[k]) <= 1e-12
        assert rot.rotation_defect(R) <= rot.ORTHO_TOL
        assert abs(np.linalg.det(R) - 1.0) <= rot.DET_TOL


def test_orienting_rotation_near_antipodal_is_stable():
    e = np.array([1e-13, 0.0, -1.0])
    e = e / np.linalg.norm(e)
    R = rot.rotation_taking_ed_to(e)
    assert np.linalg.norm(R @ np.array([0.0, 0.0, 1.0]) - e) <= 1e-12
    assert rot.is_rotation(R)


def test_orienting_rotation_rejects_zero_vector():
    with pytest.raises(ArgumentError):
        rot.rotation_taking_ed_to(np.zeros(3))


# ------------------------------------------------------------ uniform sphere

def test_sphere_samples_have_unit_norm():
    u = rot.sample_uniform_sphere(3, stream(22), size=10_000)
    assert np.abs(np.linalg.norm(u, axis=1) - 1.0).max() <= 1e-12


def test_sphere_coordinate_means_vanish():
    u = rot.sample_uniform_sphere(3, stream(23), size=100_000)
    for i in range(3):
        assert abs(u[:, i].mean()) <= 3 * sem(u[:, i])


def test_sphere_last_coordinate_uniform_d3():
    u = rot.sample_uniform_sphere(3, stream(24), size=100_000)
    p = stats.kstest(u[:, 2], "uniform", args=(-1.0, 2.0)).pvalue
    assert p > 0.01


# ------------------------------------------------------- drift maintenance

def test_rotation_defect_measures_drift():
    R = rot.elementary_rotation(3, 1, 3, 0.4)
    assert rot.rotation_defect(R) <= 1e-15
    assert rot.rotation_defect(R + 1e-6) > 1e-7


def test_reorthogonalize_restores_drifted_rotation():
    gen = stream(25)
    R = rot.sample_haar(4, gen)
    noisy = R + 1e-8 * gen.standard_normal((4, 4))
    fixed = rot.reorthogonalize(noisy)
    assert rot.rotation_defect(fixed) <= 1e-13
    assert np.abs(fixed - R).max() <= 1e-6


def test_is_rotation_rejects_reflection():
    M = np.eye(3)
    M[2, 2] = -1.0
    assert not rot.is_rotation(M)
