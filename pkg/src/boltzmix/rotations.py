"""Rotations in SO(d).

Elementary plane rotations, Haar sampling through the classical generalized
Euler-angle product (Hurwitz's construction), the SO(d-1) subgroup fixing the
last axis, uniform sampling on the sphere, a deterministic rotation carrying
e_d to a prescribed direction, and an independent QR-based Haar sampler used
to cross-validate the Euler-angle one.

Rotations are represented as plain (d, d) float arrays with orthonormal
columns and determinant +1; unit vectors as plain (d,) arrays. Samplers take
an explicit RandomStream and accept an optional ``size`` to draw a batch in
one call (returning a stacked (size, d, d) or (size, d) array), which is how
the hot paths avoid Python-loop overhead.

Sign convention, fixed once and used everywhere: elementary_rotation puts
-sin(psi) at entry (i, j) and +sin(psi) at (j, i), so that
elementary_rotation(d, 1, d, psi) maps e_d to cos(psi)*e_d - sin(psi)*e_1
direction-wise with column d equal to (-sin psi, 0, ..., 0, cos psi).
"""

import numpy as np

from .errors import ArgumentError

# Type tolerances for what counts as a rotation.
ORTHO_TOL = 1e-12
DET_TOL = 1e-10

# Long products of rotations accumulate rounding drift. Consumers that chain
# more than CHAIN_CHECK_INTERVAL factors onto one matrix re-check the drift at
# this interval and re-orthogonalize once it exceeds CHAIN_DRIFT_TOL.
CHAIN_CHECK_INTERVAL = 64
CHAIN_DRIFT_TOL = 1e-10


def elementary_rotation(d, i, j, psi):
    """Rotation of angle psi in the (e_i, e_j) coordinate plane of R^d.

    Indices are 1-based with 1 <= i < j <= d. The matrix is the identity
    except for entries (i,i) = (j,j) = cos(psi), (i,j) = -sin(psi),
    (j,i) = sin(psi).
    """
    d = int(d)
    i = int(i)
    j = int(j)
    if d < 2:
        raise ArgumentError("need d >= 2, got d=%d" % d)
    if not (1 <= i < j <= d):
        raise ArgumentError("need 1 <= i < j <= d, got i=%d j=%d d=%d"
                            % (i, j, d))
    psi = float(psi)
    R = np.eye(d)
    c = np.cos(psi)
    s = np.sin(psi)
    R[i - 1, i - 1] = c
    R[j - 1, j - 1] = c
    R[i - 1, j - 1] = -s
    R[j - 1, i - 1] = s
    return R


def _elementary_batch(d, i, j, angles):
    """Stack of elementary rotations in the (i, j) plane, one per angle."""
    angles = np.asarray(angles, dtype=float)
    n = angles.shape[0]
    R = np.broadcast_to(np.eye(d), (n, d, d)).copy()
    c = np.cos(angles)
    s = np.sin(angles)
    R[:, i - 1, i - 1] = c
    R[:, j - 1, j - 1] = c
    R[:, i - 1, j - 1] = -s
    R[:, j - 1, i - 1] = s
    return R


def sample_sin_power_angle(r, rng, size=None):
    """Random angle on [0, pi) with density proportional to sin(psi)**r.

    Exact and rejection-free: cos(psi) = 2B - 1 with B ~ Beta((r+1)/2,
    (r+1)/2) has density proportional to (1 - z**2)**((r-1)/2), which is the
    pushforward of sin(psi)**r dpsi under the cosine. r = 0 gives the
    uniform angle on [0, pi).
    """
    r = int(r)
    if r < 0:
        raise ArgumentError("sin-power exponent must be >= 0, got %d" % r)
    a = 0.5 * (r + 1)
    b = rng.beta(a, a, size=size)
    return np.arccos(2.0 * b - 1.0)


def sample_haar(d, rng, size=None):
    """Haar-distributed rotation(s) in SO(d) via generalized Euler angles.

    Builds O = F_1 F_2 ... F_{d-1} where factor F_i is itself the product of
    elementary rotations in the consecutive planes (d-i, d-i+1), ...,
    (d-1, d); the angle in plane (d-1, d) is uniform on [0, 2*pi) and the
    angle k planes before it has density proportional to sin**k. This is
    Hurwitz's classical parameterization; the draw order is fixed, so a given
    stream always produces the same rotation sequence.
    """
    d = int(d)
    if d < 2:
        raise ArgumentError("need d >= 2, got d=%d" % d)
    scalar = size is None
    n = 1 if scalar else int(size)
    O = np.broadcast_to(np.eye(d), (n, d, d)).copy()
    for i in range(1, d):
        F = None
        for k in range(i):
            r = i - 1 - k
            plane = d - i + k  # 1-based first axis of the plane
            if r == 0:
                ang = rng.uniform(0.0, 2.0 * np.pi, size=n)
            else:
                ang = sample_sin_power_angle(r, rng, size=n)
            Z = _elementary_batch(d, plane, plane + 1, ang)
            F = Z if F is None else F @ Z
        O = O @ F
    return O[0] if scalar else O


def sample_haar_oracle(d, rng, size=None):
    """Haar-distributed rotation(s) in SO(d) by a construction independent
    of sample_haar: orthonormalize a Gaussian matrix by QR, fix the sign
    ambiguity by making the R-diagonal nonnegative (which yields Haar on the
    full orthogonal group), then flip the last column where the determinant
    is negative to land in SO(d).
    """
    d = int(d)
    if d < 2:
        raise ArgumentError("need d >= 2, got d=%d" % d)
    scalar = size is None
    n = 1 if scalar else int(size)
    A = rng.standard_normal((n, d, d))
    Q, R = np.linalg.qr(A)
    diag = np.diagonal(R, axis1=-2, axis2=-1)
    signs = np.where(diag < 0.0, -1.0, 1.0)
    Q = Q * signs[:, None, :]
    neg = np.linalg.det(Q) < 0.0
    Q[neg, :, -1] *= -1.0
    return Q[0] if scalar else Q


def sample_subgroup_haar(d, rng, size=None):
    """Haar-distributed element(s) of the copy of SO(d-1) inside SO(d) that
    fixes e_d: the leading (d-1)x(d-1) block is Haar on SO(d-1) and the last
    row and column equal e_d exactly.
    """
    d = int(d)
    if d < 3:
        raise ArgumentError("the subgroup fixing e_d needs d >= 3, got d=%d"
                            % d)
    scalar = size is None
    n = 1 if scalar else int(size)
    block = sample_haar(d - 1, rng, size=n)
    R = np.zeros((n, d, d))
    R[:, : d - 1, : d - 1] = block
    R[:, d - 1, d - 1] = 1.0
    return R[0] if scalar else R


def sample_uniform_sphere(d, rng, size=None):
    """Uniform random unit vector(s) on the sphere in R^d (normalized
    Gaussian)."""
    d = int(d)
    if d < 1:
        raise ArgumentError("need d >= 1, got d=%d" % d)
    scalar = size is None
    n = 1 if scalar else int(size)
    x = rng.standard_normal((n, d))
    norms = np.linalg.norm(x, axis=1)
    while np.any(norms < 1e-12):  # essentially never; guards the division
        bad = norms < 1e-12
        x[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(x, axis=1)
    u = x / norms[:, None]
    return u[0] if scalar else u


def rotation_taking_ed_to(e):
    """A deterministic rotation R with R e_d = e, for a unit vector e.

    Built from two Householder reflections: first through the bisector
    (e_d + e)/|e_d + e| (which sends e_d to -e), then through e itself; the
    composition has determinant +1. e = e_d returns the identity; vectors
    essentially opposite to e_d get an explicit rotation by pi in the
    (e_1, e_d) plane.
    """
    e = np.asarray(e, dtype=float)
    if e.ndim != 1 or e.shape[0] < 2:
        raise ArgumentError("expected a vector of dimension >= 2, got shape "
                            "%r" % (e.shape,))
    if not np.all(np.isfinite(e)):
        raise ArgumentError("direction vector must be finite")
    norm = np.linalg.norm(e)
    if norm < 1e-300:
        raise ArgumentError("cannot orient along the zero vector")
    e = e / norm
    d = e.shape[0]
    ed = np.zeros(d)
    ed[-1] = 1.0
    if np.array_equal(e, ed):
        return np.eye(d)
    u = ed + e
    un = np.linalg.norm(u)
    if un < 1e-12:
        # e is (numerically) -e_d: any half-turn through the axis works; fix
        # the one in the (e_1, e_d) plane for reproducibility.
        return elementary_rotation(d, 1, d, np.pi)
    m = u / un
    Hm = np.eye(d) - 2.0 * np.outer(m, m)
    He = np.eye(d) - 2.0 * np.outer(e, e)
    return He @ Hm


def rotation_defect(R):
    """Max-norm of R^T R - I: how far R has drifted from orthogonality.
    Accepts a single matrix or a stack."""
    R = np.asarray(R, dtype=float)
    G = np.swapaxes(R, -1, -2) @ R
    G = G - np.eye(R.shape[-1])
    return np.max(np.abs(G), axis=(-2, -1))


def is_rotation(R, ortho_tol=ORTHO_TOL, det_tol=DET_TOL):
    """True when R is orthogonal within ortho_tol with determinant 1 within
    det_tol. Accepts a stack, returning a boolean array."""
    R = np.asarray(R, dtype=float)
    ok_ortho = rotation_defect(R) <= ortho_tol
    ok_det = np.abs(np.linalg.det(R) - 1.0) <= det_tol
    return np.logical_and(ok_ortho, ok_det)


def reorthogonalize(R, target=1e-14, max_iters=12):
    """Pull a slightly drifted rotation back onto SO(d) with the
    Newton-Schulz iteration X <- X (3I - X^T X)/2.

    Quadratically convergent when the drift is small (the only regime in
    which the product-chain maintenance calls this); one or two iterations
    take a 1e-10 defect to rounding level. Accepts a stack.
    """
    X = np.array(R, dtype=float, copy=True)
    d = X.shape[-1]
    I = np.eye(d)
    for _ in range(max_iters):
        E = np.swapaxes(X, -1, -2) @ X
        if np.max(np.abs(E - I)) <= target:
            break
        X = X @ (1.5 * I - 0.5 * E)
    return X
