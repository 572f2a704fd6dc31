"""Backend selection for the eigensolver kernel.

At import time the compiled Cython kernel is preferred; the numpy fallback
is used when the extension is missing.  ``GAPMM_BACKEND=python`` or
``GAPMM_BACKEND=compiled`` forces a choice (the latter raises if the
extension cannot be imported).  Both kernels implement the identical
cyclic-Jacobi sweep and produce bit-identical output.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import IterationLimit

_forced = os.environ.get("GAPMM_BACKEND")
if _forced not in (None, "compiled", "python"):
    raise ImportError(f"GAPMM_BACKEND must be 'compiled' or 'python', got {_forced!r}")

_kernel = None
BACKEND = None
if _forced != "python":
    try:
        from . import _jacobi

        _kernel = _jacobi.jacobi_kernel
        BACKEND = "compiled"
    except ImportError:
        if _forced == "compiled":
            raise
if _kernel is None:
    from . import _jacobi_py

    _kernel = _jacobi_py.jacobi_kernel
    BACKEND = "python"


def jacobi_eigh(m, tol_factor=1e-14, max_sweeps=100, want_vectors=True, kernel=None):
    """Eigenvalues (and optionally eigenvectors) of a symmetric matrix.

    Runs cyclic Jacobi sweeps until the largest off-diagonal element drops
    below ``tol_factor * ||m||_F / n`` (which bounds the off-diagonal
    Frobenius norm by ``tol_factor * ||m||_F``).  Eigenvalues are returned
    in nondecreasing order with a stable (input-dependent but deterministic)
    tie order; column i of the returned matrix is the eigenvector for
    value i.

    Raises IterationLimit when the sweep budget is exhausted.
    """
    a = np.array(m, dtype=np.float64, order="C", copy=True)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("expected a square matrix")
    # The threshold is computed here, once, so that both kernels base their
    # stopping decisions on the same scalar.
    normf = float(np.sqrt((a * a).sum()))
    thresh = tol_factor * normf / n
    run = kernel if kernel is not None else _kernel
    d, q, sweeps = run(a, thresh, int(max_sweeps), bool(want_vectors))
    if sweeps < 0:
        raise IterationLimit(
            f"Jacobi sweeps did not converge within {max_sweeps} sweeps (n={n})"
        )
    order = np.argsort(d, kind="stable")
    values = np.asarray(d)[order]
    vectors = np.asarray(q)[:, order] if want_vectors else None
    return values, vectors, sweeps
