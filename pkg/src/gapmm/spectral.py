"""Spectral projectors for split points, gap detection, compressions, and
the graph-operator geometry of a pair of projectors."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import Tolerances, default_tolerances
from .errors import (
    GapTooClose,
    GraphUndefined,
    IndexOutOfRange,
    InsideSpectrum,
    NotBijective,
    NotOrthonormal,
)
from .symmat import SymMatrix, as_array, eig_sym, eigvals_sym, spectral_norm


@dataclass(frozen=True)
class GapWindow:
    """An eigenvalue-free interval (c, d) around the split point gamma;
    semibounded sides are encoded as +-inf."""

    c: float
    d: float
    gamma: float


@dataclass(frozen=True)
class SpectralSplit:
    """Projector pair for a split point: Pp onto eigenvalues > gamma, Pm
    onto eigenvalues <= gamma, with orthonormal bases of both ranges."""

    gamma: float
    Pp: np.ndarray
    Pm: np.ndarray
    basis_p: np.ndarray   # n x k_plus
    basis_m: np.ndarray   # n x k_minus

    @property
    def n(self) -> int:
        return self.Pp.shape[0]

    @property
    def dim_plus(self) -> int:
        return self.basis_p.shape[1]

    @property
    def dim_minus(self) -> int:
        return self.basis_m.shape[1]


def split(a, gamma: float, tols: Tolerances | None = None, gap_tol: float | None = None) -> SpectralSplit:
    """Spectral split of a symmetric matrix at ``gamma``.

    Eigenvalues strictly above ``gamma`` go to the plus side, the rest to
    the minus side.  By default eigenvalues within ``gap_tol`` of the split
    point are rejected (GapTooClose); pass ``gap_tol=0.0`` to allow
    eigenvalues sitting exactly at the split point, which then land on the
    minus side.
    """
    tols = tols or default_tolerances()
    dec = eig_sym(a, tols)
    norm_a = max(abs(float(dec.values[0])), abs(float(dec.values[-1])))
    if gap_tol is None:
        gap_tol = tols.gap_tol * (1.0 + norm_a)
    if gap_tol > 0.0:
        dist = np.abs(dec.values - gamma).min()
        if dist <= gap_tol:
            raise GapTooClose(
                f"eigenvalue within {gap_tol:.3e} of split point {gamma} (distance {dist:.3e})"
            )
    mask = dec.values > gamma
    basis_p = dec.vectors[:, mask]
    basis_m = dec.vectors[:, ~mask]
    pp = basis_p @ basis_p.T
    pm = basis_m @ basis_m.T
    return SpectralSplit(
        gamma=float(gamma),
        Pp=0.5 * (pp + pp.T),
        Pm=0.5 * (pm + pm.T),
        basis_p=basis_p,
        basis_m=basis_m,
    )


def find_gap(a, around: float, tols: Tolerances | None = None) -> GapWindow:
    """Locate the spectral gap containing ``around``.

    Returns c = largest eigenvalue <= around (-inf if none) and d = smallest
    eigenvalue > around (+inf if none).  Raises InsideSpectrum when
    ``around`` is within gap_tol of an eigenvalue.
    """
    tols = tols or default_tolerances()
    values = eigvals_sym(a, tols)
    norm_a = max(abs(float(values[0])), abs(float(values[-1])))
    gap_tol = tols.gap_tol * (1.0 + norm_a)
    if np.abs(values - around).min() <= gap_tol:
        raise InsideSpectrum(f"{around} is within {gap_tol:.3e} of the spectrum")
    below = values[values <= around]
    above = values[values > around]
    c = float(below[-1]) if below.size else -math.inf
    d = float(above[0]) if above.size else math.inf
    return GapWindow(c=c, d=d, gamma=float(around))


def check_orthonormal(w: np.ndarray, tol: float) -> None:
    gram = w.T @ w
    if np.abs(gram - np.eye(w.shape[1])).max() > tol:
        raise NotOrthonormal(
            f"columns are not orthonormal (max deviation {np.abs(gram - np.eye(w.shape[1])).max():.3e})"
        )


def compress(b, w: np.ndarray, tols: Tolerances | None = None) -> np.ndarray:
    """Matrix of the part of ``b`` in the subspace spanned by the
    orthonormal columns ``w`` (symmetrized)."""
    tols = tols or default_tolerances()
    ba = as_array(b)
    check_orthonormal(w, tols.ortho_tol)
    c = w.T @ ba @ w
    return 0.5 * (c + c.T)


def part_eigenvalues(b, split_b: SpectralSplit, k: int, tols: Tolerances | None = None) -> float:
    """k-th smallest eigenvalue of ``b`` restricted to the plus side of its
    own split (1-based)."""
    if not 1 <= k <= split_b.dim_plus:
        raise IndexOutOfRange(f"k={k} outside 1..{split_b.dim_plus}")
    values = eigvals_sym(compress(b, split_b.basis_p, tols), tols)
    return float(values[k - 1])


@dataclass(frozen=True)
class GraphData:
    """Graph operator of a projector pair in the reduced bases, the ambient
    skew-symmetric block operator built from it, and the distance data."""

    X: np.ndarray        # k_minus x k_plus, in (basis_p, basis_m) coordinates
    Y: np.ndarray        # n x n, skew-symmetric
    normX: float
    dist: float          # ||Pp_A - Pp_B||


def _sym_inv(m: np.ndarray, tols: Tolerances) -> np.ndarray:
    """Inverse of a symmetric positive definite matrix via eigendecomposition."""
    dec = eig_sym(SymMatrix.from_entries(m), tols)
    inv = (dec.vectors / dec.values) @ dec.vectors.T
    return 0.5 * (inv + inv.T)


def graph_operator(split_a: SpectralSplit, split_b: SpectralSplit, tols: Tolerances | None = None) -> GraphData:
    """Graph operator of the perturbed plus-projector over the unperturbed
    one: the columns (f, Xf) for f in the plus basis span the perturbed
    plus subspace.  Defined when the projector distance is below 1.
    """
    tols = tols or default_tolerances()
    qp = split_b.Pp
    dist = spectral_norm(split_a.Pp - qp, tols)
    if dist >= 1.0 - tols.graph_tol:
        raise GraphUndefined(f"projector distance {dist:.6f} too close to 1")
    wp, wm = split_a.basis_p, split_a.basis_m
    t_hat = wp.T @ qp @ wp
    t_hat = 0.5 * (t_hat + t_hat.T)
    sv_min = math.sqrt(max(float(eigvals_sym(t_hat @ t_hat, tols)[0]), 0.0))
    if sv_min < tols.sv_tol:
        raise NotBijective(f"plus-side overlap singular (sigma_min {sv_min:.3e})")
    r_hat = wm.T @ qp @ wp
    x_hat = r_hat @ _sym_inv(t_hat, tols)
    norm_x = spectral_norm(x_hat, tols)
    kp = wp.shape[1]
    km = wm.shape[1]
    blocks = np.zeros((kp + km, kp + km))
    blocks[:kp, kp:] = -x_hat.T
    blocks[kp:, :kp] = x_hat
    wf = np.hstack([wp, wm])
    y = wf @ blocks @ wf.T
    y = 0.5 * (y - y.T)
    return GraphData(X=x_hat, Y=y, normX=norm_x, dist=dist)


@dataclass(frozen=True)
class GraphIdentityReport:
    """Residuals of the block representations tied to the graph operator."""

    repr_first: float        # perturbed projector vs first block formula
    repr_second: float       # ... vs resolvent-flavored second block formula
    ypm: float               # (I-Y)(I+Y) vs blockdiag(I+X*X, I+XX*)
    pqy: float               # plus-overlap vs (I+X*X)^{-1}
    norm_pqx: float          # |dist - ||X||/sqrt(1+||X||^2)|
    bound: float

    @property
    def max_residual(self) -> float:
        return max(self.repr_first, self.repr_second, self.ypm, self.pqy, self.norm_pqx)

    @property
    def holds(self) -> bool:
        return self.max_residual <= self.bound


def verify_graph_identities(
    g: GraphData,
    split_a: SpectralSplit,
    split_b: SpectralSplit,
    tols: Tolerances | None = None,
) -> GraphIdentityReport:
    """Residuals of both block representations of the perturbed projector,
    the (I-Y)(I+Y) factorization, and the overlap identity."""
    tols = tols or default_tolerances()
    wp, wm = split_a.basis_p, split_a.basis_m
    wf = np.hstack([wp, wm])
    kp = wp.shape[1]
    km = wm.shape[1]
    x = g.X
    ixx = np.eye(kp) + x.T @ x
    ixx_inv = _sym_inv(ixx, tols)
    ixxs = np.eye(km) + x @ x.T
    ixxs_inv = _sym_inv(ixxs, tols)

    blocks1 = np.zeros((kp + km, kp + km))
    blocks1[:kp, :kp] = ixx_inv
    blocks1[:kp, kp:] = ixx_inv @ x.T
    blocks1[kp:, :kp] = x @ ixx_inv
    blocks1[kp:, kp:] = x @ ixx_inv @ x.T
    q1 = wf @ blocks1 @ wf.T

    blocks2 = np.zeros_like(blocks1)
    blocks2[:kp, :kp] = ixx_inv
    blocks2[:kp, kp:] = x.T @ ixxs_inv
    blocks2[kp:, :kp] = ixxs_inv @ x
    blocks2[kp:, kp:] = x @ x.T @ ixxs_inv
    q2 = wf @ blocks2 @ wf.T

    qp = split_b.Pp
    r1 = spectral_norm(q1 - qp, tols)
    r2 = spectral_norm(q2 - qp, tols)

    n = qp.shape[0]
    eye = np.eye(n)
    lhs = (eye - g.Y) @ (eye + g.Y)
    blockdiag = np.zeros_like(blocks1)
    blockdiag[:kp, :kp] = ixx
    blockdiag[kp:, kp:] = ixxs
    rhs = wf @ blockdiag @ wf.T
    r_ypm = spectral_norm(lhs - rhs, tols)

    t_hat = wp.T @ qp @ wp
    r_pqy = spectral_norm(0.5 * (t_hat + t_hat.T) - ixx_inv, tols)

    r_norm = abs(g.dist - g.normX / math.sqrt(1.0 + g.normX**2))

    bound = tols.bd_tol * (1.0 + g.normX**2)
    return GraphIdentityReport(
        repr_first=r1,
        repr_second=r2,
        ypm=r_ypm,
        pqy=r_pqy,
        norm_pqx=r_norm,
        bound=bound,
    )
