# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled sequential kernels for the splitting recursion.

Only code whose floating-point operation order must be reproduced exactly by
the pure-Python twin (_core_py) lives here: the per-step chain products on
the leaf rotations, the periodic drift check with its Newton-Schulz repair,
and the traversal that reads the leaf order off the linked list. Every
vectorizable quantity (leaf choices, weight factors, step rotations) is
pre-drawn with numpy by the caller and shared verbatim by both backends, so
a run is bit-identical whichever core executes it.

Matrix products are written as explicit triple loops with a left-to-right
scalar accumulator; compiled without fused-multiply-add contraction these
perform the same IEEE operations as the Python twin.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef double _defect(double[:, ::1] R) noexcept nogil:
    """max |R^T R - I| over entries."""
    cdef Py_ssize_t d = R.shape[0]
    cdef Py_ssize_t i, j, t
    cdef double s, dev, best = 0.0
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


cdef void _matmul(double[:, ::1] A, double[:, ::1] B,
                  double[:, ::1] C) noexcept nogil:
    """C = A @ B (C must not alias A or B)."""
    cdef Py_ssize_t d = A.shape[0]
    cdef Py_ssize_t i, j, t
    cdef double s
    for i in range(d):
        for j in range(d):
            s = 0.0
            for t in range(d):
                s = s + A[i, t] * B[t, j]
            C[i, j] = s


cdef int _newton_schulz(double[:, ::1] X, double[:, ::1] g,
                        double[:, ::1] h, double[:, ::1] y,
                        double target, int max_iters) noexcept nogil:
    """X <- X (3I - X^T X)/2 until max |X^T X - I| <= target."""
    cdef Py_ssize_t d = X.shape[0]
    cdef Py_ssize_t i, j, t
    cdef double s, dev, best, v
    cdef int it
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


def tree_chain(double[::1] betas, double[:, :, ::1] rots,
               cnp.int64_t[::1] counts, cnp.int64_t[::1] nxt,
               cnp.int64_t[::1] ell,
               double[::1] r_minus, double[::1] r_plus,
               double[:, :, ::1] R_minus, double[:, :, ::1] R_plus,
               cnp.int64_t check_interval, double drift_tol,
               double ns_target, int ns_max_iters, bint log_mode):
    """Run the n splitting steps in place; returns the number of
    Newton-Schulz repairs performed.

    Step k splits the leaf in physical slot ell[k]: the slot keeps the
    minus fragment, the new slot k+1 takes the plus fragment, and the new
    slot is linked immediately after the old one in leaf order. In
    log_mode the weight arrays hold logarithms and the updates add instead
    of multiply. Chain lengths are tracked per leaf; every check_interval
    factors the chain's rotation is drift-checked and repaired if needed.
    """
    cdef Py_ssize_t n = ell.shape[0]
    cdef Py_ssize_t d = rots.shape[1]
    cdef Py_ssize_t k, q, i, j
    cdef cnp.int64_t p, c
    cdef double b
    cdef int reorth = 0
    scratch = np.empty((4, d, d), dtype=np.float64)
    cdef double[:, ::1] tmp = scratch[0]
    cdef double[:, ::1] g = scratch[1]
    cdef double[:, ::1] h = scratch[2]
    cdef double[:, ::1] y = scratch[3]
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


def tree_chain_weights(double[::1] betas, cnp.int64_t[::1] ell,
                       double[::1] r_minus, double[::1] r_plus,
                       bint log_mode):
    """Weights-only variant of tree_chain: no rotations, no leaf order."""
    cdef Py_ssize_t n = ell.shape[0]
    cdef Py_ssize_t k
    cdef cnp.int64_t p
    cdef double b
    for k in range(n):
        p = ell[k]
        b = betas[p]
        if log_mode:
            betas[p] = b + r_minus[k]
            betas[k + 1] = b + r_plus[k]
        else:
            betas[p] = b * r_minus[k]
            betas[k + 1] = b * r_plus[k]


def linked_order(cnp.int64_t[::1] nxt, cnp.int64_t[::1] order):
    """Fill order with physical slot ids in leaf order (head is slot 0)."""
    cdef Py_ssize_t m = order.shape[0]
    cdef Py_ssize_t i
    cdef cnp.int64_t p = 0
    for i in range(m):
        order[i] = p
        p = nxt[p]
