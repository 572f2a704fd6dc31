"""Dense real symmetric matrix core.

Eigendecomposition (cyclic Jacobi, see ``backend``), functional calculus,
spectral norm, positive-semidefinite order checks, and quadratic-form
evaluation through ``|B|^(1/2)`` and ``sign(B)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .backend import jacobi_eigh
from .config import Tolerances, default_tolerances
from .errors import DimensionMismatch, DomainError, ParseError


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SymMatrix:
    """Dense real symmetric matrix; entries are exactly symmetric."""

    n: int
    entries: np.ndarray

    @classmethod
    def from_entries(cls, m) -> "SymMatrix":
        a = np.asarray(m, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise DimensionMismatch("matrix dimension must be at least 1")
        if not np.isfinite(a).all():
            raise DomainError("matrix entries must be finite")
        sym = 0.5 * (a + a.T)
        return cls(n=a.shape[0], entries=_freeze(sym))

    @property
    def m(self) -> np.ndarray:
        return self.entries

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        return SymMatrix.from_entries(self.entries + as_array(other))

    def __sub__(self, other: "SymMatrix") -> "SymMatrix":
        return SymMatrix.from_entries(self.entries - as_array(other))

    def __mul__(self, scalar: float) -> "SymMatrix":
        return SymMatrix.from_entries(self.entries * float(scalar))

    __rmul__ = __mul__


def as_array(m) -> np.ndarray:
    """Accept a SymMatrix or a plain array; return the ndarray view."""
    if isinstance(m, SymMatrix):
        return m.entries
    return np.asarray(m, dtype=np.float64)


def as_symmatrix(m) -> SymMatrix:
    if isinstance(m, SymMatrix):
        return m
    return SymMatrix.from_entries(m)


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in nondecreasing order; column i of ``vectors`` pairs
    with ``values[i]``."""

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int


def eig_sym(m, tols: Tolerances | None = None) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric matrix.

    Deterministic for identical input; raises IterationLimit if the sweep
    budget is exhausted.
    """
    tols = tols or default_tolerances()
    a = as_array(m)
    values, vectors, sweeps = jacobi_eigh(
        a, tol_factor=tols.jacobi_tol_factor, max_sweeps=tols.jacobi_max_sweeps
    )
    return EigenDecomposition(values=_freeze(values), vectors=_freeze(vectors), sweeps=sweeps)


def eigvals_sym(m, tols: Tolerances | None = None) -> np.ndarray:
    """Eigenvalues only (skips accumulating the rotations)."""
    tols = tols or default_tolerances()
    values, _, _ = jacobi_eigh(
        as_array(m),
        tol_factor=tols.jacobi_tol_factor,
        max_sweeps=tols.jacobi_max_sweeps,
        want_vectors=False,
    )
    return values


def apply_fn(m, f: Callable[[float], float], tols: Tolerances | None = None) -> SymMatrix:
    """Functional calculus: Q diag(f(lambda_i)) Q^T, symmetrized.

    Raises DomainError if ``f`` is undefined (raises or returns non-finite)
    at some eigenvalue.
    """
    dec = eig_sym(m, tols)
    try:
        fw = np.array([float(f(float(v))) for v in dec.values])
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise DomainError(f"function undefined at an eigenvalue: {exc}") from exc
    if not np.isfinite(fw).all():
        bad = dec.values[~np.isfinite(fw)]
        raise DomainError(f"function not finite at eigenvalue(s) {bad}")
    out = (dec.vectors * fw) @ dec.vectors.T
    return SymMatrix.from_entries(out)


def spectral_norm(m, tols: Tolerances | None = None) -> float:
    """Largest singular value of a (possibly rectangular) matrix, computed
    via the eigendecomposition of the smaller Gram matrix."""
    a = np.atleast_2d(as_array(m))
    if a.size == 0:
        return 0.0
    if a.shape[0] < a.shape[1]:
        gram = a @ a.T
    else:
        gram = a.T @ a
    gram = 0.5 * (gram + gram.T)
    values = eigvals_sym(gram, tols)
    return math.sqrt(max(float(values[-1]), 0.0))


def psd_leq(l, r, tol: float, tols: Tolerances | None = None):
    """Order check L <= R in the quadratic-form sense.

    Returns ``(holds, margin)`` with ``margin = lambda_min(R - L)``; holds
    iff the margin is at least ``-tol``.
    """
    la, ra = as_array(l), as_array(r)
    if la.shape != ra.shape:
        raise DimensionMismatch(f"shape mismatch {la.shape} vs {ra.shape}")
    values = eigvals_sym(SymMatrix.from_entries(ra - la), tols)
    margin = float(values[0])
    return margin >= -tol, margin


@dataclass(frozen=True)
class QuadraticForm:
    """A symmetric operator's quadratic form, evaluated through the
    factorization |B|^(1/2) . sign(B) . |B|^(1/2)."""

    generator: SymMatrix
    half: np.ndarray      # |generator|^(1/2)
    signop: np.ndarray    # sign(generator); sign(0) := 0

    @classmethod
    def of(cls, m, tols: Tolerances | None = None) -> "QuadraticForm":
        gen = as_symmatrix(m)
        half = apply_fn(gen, lambda v: math.sqrt(abs(v)), tols)
        signop = apply_fn(gen, lambda v: math.copysign(1.0, v) if v != 0.0 else 0.0, tols)
        return cls(generator=gen, half=half.entries, signop=signop.entries)

    def matrix(self) -> np.ndarray:
        """The form's matrix |B|^(1/2) sign(B) |B|^(1/2) (== B up to rounding)."""
        return self.half @ self.signop @ self.half


def form_eval(form: QuadraticForm, x, y) -> float:
    """Evaluate <|B|^(1/2) x, sign(B) |B|^(1/2) y>."""
    xv = np.asarray(x, dtype=np.float64)
    yv = np.asarray(y, dtype=np.float64)
    if xv.shape != (form.generator.n,) or yv.shape != (form.generator.n,):
        raise DimensionMismatch("vector length does not match the form's dimension")
    return float((form.half @ xv) @ (form.signop @ (form.half @ yv)))


@dataclass(frozen=True)
class FormSumReport:
    """Residuals of the two decompositions of the form of a sum."""

    residual_operator_term: float   # form(L+K) - form(L) - x^T K y
    residual_form_term: float       # form(L+K) - form(L) - form(K)
    scale: float
    tol: float

    @property
    def holds(self) -> bool:
        bound = self.tol * self.scale
        return self.residual_operator_term <= bound and self.residual_form_term <= bound


def check_form_sum(lam, k, tols: Tolerances | None = None, rng=None, extra_probes: int = 8) -> FormSumReport:
    """Check that the form of a sum splits against both the operator term
    and the summand's own form, over all basis-pair probes (plus a few
    random probes)."""
    tols = tols or default_tolerances()
    la, ka = as_array(lam), as_array(k)
    if la.shape != ka.shape:
        raise DimensionMismatch(f"shape mismatch {la.shape} vs {ka.shape}")
    f_sum = QuadraticForm.of(SymMatrix.from_entries(la + ka), tols).matrix()
    f_lam = QuadraticForm.of(la, tols).matrix()
    f_k = QuadraticForm.of(ka, tols).matrix()
    # Basis probes e_i, e_j amount to entrywise comparison.
    r_op = float(np.abs(f_sum - f_lam - ka).max())
    r_form = float(np.abs(f_sum - f_lam - f_k).max())
    if rng is not None:
        for _ in range(extra_probes):
            x = rng.standard_normal(la.shape[0])
            y = rng.standard_normal(la.shape[0])
            x /= np.linalg.norm(x)
            y /= np.linalg.norm(y)
            s = float(x @ f_sum @ y)
            r_op = max(r_op, abs(s - x @ f_lam @ y - x @ ka @ y))
            r_form = max(r_form, abs(s - x @ f_lam @ y - x @ f_k @ y))
    scale = 1.0 + spectral_norm(la, tols) + spectral_norm(ka, tols)
    return FormSumReport(
        residual_operator_term=r_op,
        residual_form_term=r_form,
        scale=scale,
        tol=tols.form_tol,
    )


# ---------------------------------------------------------------------------
# Matrix text format: first line "n", then n rows of n whitespace-separated
# decimal values; symmetrized by averaging (i,j) and (j,i) on read.

def write_matrix(path, m) -> None:
    a = as_array(m)
    with open(path, "w") as fh:
        fh.write(f"{a.shape[0]}\n")
        for row in a:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def read_matrix(path) -> SymMatrix:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty matrix file", line=1)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ParseError(f"expected integer dimension, got {lines[0]!r}", line=1) from None
    if n < 1:
        raise ParseError("matrix dimension must be at least 1", line=1)
    if len(lines) < n + 1:
        raise ParseError(f"expected {n} rows, found {len(lines) - 1}", line=len(lines))
    rows = []
    for i in range(n):
        parts = lines[1 + i].split()
        if len(parts) != n:
            raise ParseError(
                f"expected {n} values, found {len(parts)}", line=i + 2
            )
        row = []
        for j, tok in enumerate(parts):
            try:
                row.append(float(tok))
            except ValueError:
                raise ParseError(f"bad value {tok!r}", line=i + 2, column=j + 1) from None
        rows.append(row)
    return SymMatrix.from_entries(np.array(rows, dtype=np.float64))
