"""Pure-Python twin of the compiled sequential kernels (_core).

Statement-for-statement transcription of the compiled loops. Scalar reads
from numpy arrays yield IEEE doubles and every arithmetic statement appears
in the same order as in the compiled core, so for identical inputs the two
backends produce bit-identical arrays. Keep the two files in sync: any
change to one loop must be mirrored verbatim in the other.

This backend is orders of magnitude slower; it exists so the package works
without a C toolchain and as the reference the compiled core is checked
against.
"""

import numpy as np


def _defect(R):
    """max |R^T R - I| over entries."""
    d = R.shape[0]
    best = 0.0
    for i in range(d):
        for j in range(d):
            s = 0.0
            for t in range(d):
                s = s + R[t, i] * R[t, j]
            if i == j:
                s = s - 1.0
            dev = s if s >= 0.0 else -s
            if dev > best:
                best = dev
    return best


def _matmul(A, B, C):
    """C = A @ B (C must not alias A or B)."""
    d = A.shape[0]
    for i in range(d):
        for j in range(d):
            s = 0.0
            for t in range(d):
                s = s + A[i, t] * B[t, j]
            C[i, j] = s


def _newton_schulz(X, g, h, y, target, max_iters):
    """X <- X (3I - X^T X)/2 until max |X^T X - I| <= target."""
    d = X.shape[0]
    for it in range(max_iters):
        best = 0.0
        for i in range(d):
            for j in range(d):
                s = 0.0
                for t in range(d):
                    s = s + X[t, i] * X[t, j]
                g[i, j] = s
                if i == j:
                    s = s - 1.0
                dev = s if s >= 0.0 else -s
                if dev > best:
                    best = dev
        if best <= target:
            return it
        for i in range(d):
            for j in range(d):
                v = -0.5 * g[i, j]
                if i == j:
                    v = v + 1.5
                h[i, j] = v
        _matmul(X, h, y)
        for i in range(d):
            for j in range(d):
                X[i, j] = y[i, j]
    return max_iters


def tree_chain(betas, rots, counts, nxt, ell, r_minus, r_plus,
               R_minus, R_plus, check_interval, drift_tol,
               ns_target, ns_max_iters, log_mode):
    """Run the n splitting steps in place; returns the number of
    Newton-Schulz repairs performed. See the compiled core for the
    step-by-step contract."""
    n = ell.shape[0]
    d = rots.shape[1]
    scratch = np.empty((4, d, d), dtype=np.float64)
    tmp = scratch[0]
    g = scratch[1]
    h = scratch[2]
    y = scratch[3]
    reorth = 0
    for k in range(n):
        p = ell[k]
        q = k + 1
        b = betas[p]
        if log_mode:
            betas[p] = b + r_minus[k]
            betas[q] = b + r_plus[k]
        else:
            betas[p] = b * r_minus[k]
            betas[q] = b * r_plus[k]
        _matmul(rots[p], R_minus[k], tmp)
        _matmul(rots[p], R_plus[k], rots[q])
        for i in range(d):
            for j in range(d):
                rots[p, i, j] = tmp[i, j]
        nxt[q] = nxt[p]
        nxt[p] = q
        c = counts[p] + 1
        counts[p] = c
        counts[q] = c
        if check_interval > 0 and c % check_interval == 0:
            if _defect(rots[p]) > drift_tol:
                _newton_schulz(rots[p], g, h, y, ns_target, ns_max_iters)
                reorth += 1
            if _defect(rots[q]) > drift_tol:
                _newton_schulz(rots[q], g, h, y, ns_target, ns_max_iters)
                reorth += 1
    return reorth


def tree_chain_weights(betas, ell, r_minus, r_plus, log_mode):
    """Weights-only variant of tree_chain: no rotations, no leaf order."""
    n = ell.shape[0]
    for k in range(n):
        p = ell[k]
        b = betas[p]
        if log_mode:
            betas[p] = b + r_minus[k]
            betas[k + 1] = b + r_plus[k]
        else:
            betas[p] = b * r_minus[k]
            betas[k + 1] = b * r_plus[k]


def linked_order(nxt, order):
    """Fill order with physical slot ids in leaf order (head is slot 0)."""
    m = order.shape[0]
    p = 0
    for i in range(m):
        order[i] = p
        p = nxt[p]
