"""Pure Python (numpy-vectorized) cyclic-Jacobi sweep kernel.

Fallback used when the compiled extension is unavailable.  Same full-storage
row-oriented rotation as the compiled kernel; every vectorized statement
below evaluates the same chain of IEEE double operations per element as the
scalar loops in ``_jacobi.pyx``, so both backends return bit-identical
results.
"""

import math

import numpy as np


def jacobi_kernel(a, thresh, max_sweeps, want_vectors):
    """See ``gapmm._jacobi.jacobi_kernel``; same contract, same arithmetic."""
    n = a.shape[0]
    qt = np.eye(n, dtype=np.float64) if want_vectors else None
    sweeps = -1

    for it in range(max_sweeps + 1):
        off = float(np.abs(np.triu(a, 1)).max()) if n > 1 else 0.0
        if off <= thresh:
            sweeps = it
            break
        if it == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = float(a[p, q])
                if abs(apq) <= thresh:
                    continue
                app = float(a[p, p])
                aqq = float(a[q, q])
                diff = aqq - app
                theta = (0.5 * diff) / apq
                t = 1.0 / (abs(theta) + math.sqrt(1.0 + theta * theta))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                tau = s / (1.0 + c)
                h = t * apq
                g = a[p, :].copy()
                hh = a[q, :].copy()
                a[p, :] = g - s * (hh + g * tau)
                a[q, :] = hh + s * (g - hh * tau)
                a[p, p] = app - h
                a[q, q] = aqq + h
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[:, p] = a[p, :]
                a[:, q] = a[q, :]
                if want_vectors:
                    g = qt[p, :].copy()
                    hh = qt[q, :].copy()
                    qt[p, :] = g - s * (hh + g * tau)
                    qt[q, :] = hh + s * (g - hh * tau)

    d = np.diagonal(a).copy()
    q_arr = qt.T.copy() if want_vectors else None
    return d, q_arr, sweeps
