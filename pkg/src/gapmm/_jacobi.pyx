# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic-Jacobi sweep kernel.

Full symmetric storage, row-oriented rotations: a rotation in the (p, q)
plane reads only rows p and q (contiguous, vectorizable), overwrites them,
and mirrors the result into columns p and q to keep the matrix exactly
symmetric.  The per-element arithmetic is kept statement-for-statement
identical to the pure Python fallback in ``_jacobi_py`` so that both
backends produce bit-identical eigensystems; do not "simplify" the
temporaries below.

Eigenvectors are accumulated in transposed layout (row i of ``qt`` is the
coordinate vector that ends up as column i of the returned matrix), again
so that every update is a contiguous row operation.
"""

import numpy as np

from libc.math cimport fabs, sqrt


def jacobi_kernel(double[:, ::1] a, double thresh, int max_sweeps, bint want_vectors):
    """Run cyclic Jacobi sweeps in place on the symmetric matrix ``a``.

    Returns ``(d, q, sweeps)`` where ``d`` holds the unsorted eigenvalues,
    ``q`` the accumulated rotations (columns are eigenvectors, ``None`` if
    not requested) and ``sweeps`` the number of sweeps used, or ``-1`` if
    the off-diagonal maximum stayed above ``thresh`` for the whole budget.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, j, it
    cdef double apq, app, aqq, diff, theta, t, c, s, tau, h
    cdef double g_val, h_val, gt, hp, sv, ht, gm, sv2
    cdef double off
    cdef int sweeps = -1
    cdef double[:, ::1] qt = None

    qt_arr = None
    if want_vectors:
        qt_arr = np.eye(n, dtype=np.float64)
        qt = qt_arr

    for it in range(max_sweeps + 1):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                if fabs(a[p, q]) > off:
                    off = fabs(a[p, q])
        if off <= thresh:
            sweeps = <int>it
            break
        if it == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if fabs(apq) <= thresh:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                diff = aqq - app
                theta = (0.5 * diff) / apq
                t = 1.0 / (fabs(theta) + sqrt(1.0 + theta * theta))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                tau = s / (1.0 + c)
                h = t * apq
                # Rotate rows p and q in full; the entries at columns p and
                # q are fixed up afterwards.
                for j in range(n):
                    g_val = a[p, j]
                    h_val = a[q, j]
                    gt = g_val * tau
                    hp = h_val + gt
                    sv = s * hp
                    a[p, j] = g_val - sv
                    ht = h_val * tau
                    gm = g_val - ht
                    sv2 = s * gm
                    a[q, j] = h_val + sv2
                a[p, p] = app - h
                a[q, q] = aqq + h
                a[p, q] = 0.0
                a[q, p] = 0.0
                # Mirror into columns to restore exact symmetry.
                for j in range(n):
                    a[j, p] = a[p, j]
                    a[j, q] = a[q, j]
                if want_vectors:
                    for j in range(n):
                        g_val = qt[p, j]
                        h_val = qt[q, j]
                        gt = g_val * tau
                        hp = h_val + gt
                        sv = s * hp
                        qt[p, j] = g_val - sv
                        ht = h_val * tau
                        gm = g_val - ht
                        sv2 = s * gm
                        qt[q, j] = h_val + sv2

    d = np.empty(n, dtype=np.float64)
    for j in range(n):
        d[j] = a[j, j]
    q_arr = qt_arr.T.copy() if want_vectors else None
    return d, q_arr, sweeps
