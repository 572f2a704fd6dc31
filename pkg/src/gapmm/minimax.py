"""Minimax engine for eigenvalues in a spectral gap.

Evaluates the inf-sup representation of the k-th eigenvalue of the
perturbed operator above the split point: the candidate subspace comes
from projecting the perturbed eigenvectors onto the unperturbed plus
subspace, randomized subspace probes sample the inf direction, and a
derivative-free rotation descent refines the candidate when needed.
Everything is compared against the direct eigenvalue oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import Tolerances, VerifyConfig, default_tolerances
from .errors import IndexOutOfRange, RankDeficient
from .spectral import SpectralSplit, check_orthonormal, compress, split
from .symmat import QuadraticForm, as_array, eig_sym, eigvals_sym


@dataclass(frozen=True)
class MinimaxReport:
    """Outcome of verifying the inf-sup representation for one index k."""

    k: int
    direct: float
    candidate_value: float
    probe_min: float
    probe_count: int
    refined_value: float | None
    status: str               # pass | refined-pass | fail
    mm_tol: float             # absolute tolerance used
    form_gap: float           # |op-path sup - form-path sup| on the candidate
    form_ok: bool

    @property
    def attained_value(self) -> float:
        if self.refined_value is not None:
            return min(self.candidate_value, self.refined_value)
        return self.candidate_value


def probe_seed(seed: int, k: int) -> int:
    """Per-index base seed; trial i then uses ``base ^ i``."""
    return (seed * 1000003 + k * 7919) & ((1 << 63) - 1)


def _haar_frame(rng, rows: int, cols: int) -> np.ndarray:
    g = rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diagonal(r))
    signs[signs == 0.0] = 1.0
    return q * signs


class _Blocks:
    """Compressions of the operator onto the reference bases, shared by all
    subspace evaluations for one (A, B, gamma) triple."""

    def __init__(self, b_arr: np.ndarray, split_a: SpectralSplit, tols: Tolerances):
        wp, wm = split_a.basis_p, split_a.basis_m
        self.bpp = wp.T @ b_arr @ wp
        self.bpm = wp.T @ b_arr @ wm
        self.bmm = wm.T @ b_arr @ wm
        self.tols = tols

    def sup_over(self, frame: np.ndarray) -> float:
        """sup of the Rayleigh quotient over span(frame) + minus side,
        with ``frame`` orthonormal in plus-basis coordinates."""
        k = frame.shape[1]
        km = self.bmm.shape[0]
        m = np.empty((k + km, k + km))
        m[:k, :k] = frame.T @ self.bpp @ frame
        m[:k, k:] = frame.T @ self.bpm
        m[k:, :k] = m[:k, k:].T
        m[k:, k:] = self.bmm
        m = 0.5 * (m + m.T)
        return float(eigvals_sym(m, self.tols)[-1])


def inner_sup(b, mp: np.ndarray, basis_m: np.ndarray, tols: Tolerances | None = None) -> float:
    """Largest eigenvalue of the compression of ``b`` onto
    span(mp) + span(basis_m); equals the supremum of the Rayleigh quotient
    over that subspace."""
    tols = tols or default_tolerances()
    w = np.hstack([mp, basis_m]) if basis_m.size else np.asarray(mp)
    c = compress(b, w, tols)
    return float(eigvals_sym(c, tols)[-1])


def candidate_subspace(
    b,
    split_a: SpectralSplit,
    split_b: SpectralSplit,
    k: int,
    tols: Tolerances | None = None,
):
    """Orthonormal basis of the plus-projection of the span of the k lowest
    eigenvectors of the perturbed operator's plus part.

    The projected span has dimension exactly k whenever the plus-overlap
    is bijective; RankDeficient signals a projector pair too far apart.
    """
    tols = tols or default_tolerances()
    coords = _candidate_coords(b, split_a, split_b, k, tols)
    return split_a.basis_p @ coords


def _candidate_coords(b, split_a, split_b, k, tols, dec=None) -> np.ndarray:
    if not 1 <= k <= split_b.dim_plus:
        raise IndexOutOfRange(f"k={k} outside 1..{split_b.dim_plus}")
    if dec is None:
        dec = eig_sym(compress(b, split_b.basis_p, tols), tols)
    psi = split_b.basis_p @ dec.vectors[:, :k]
    proj = split_a.basis_p.T @ psi
    gram = proj.T @ proj
    sv_min_sq = float(eigvals_sym(0.5 * (gram + gram.T), tols)[0])
    if sv_min_sq < tols.sv_tol**2:
        raise RankDeficient(
            f"projected candidate span numerically rank-deficient "
            f"(sigma_min {math.sqrt(max(sv_min_sq, 0.0)):.3e})"
        )
    q, r = np.linalg.qr(proj)
    signs = np.sign(np.diagonal(r))
    signs[signs == 0.0] = 1.0
    return q * signs


def probe(
    b,
    split_a: SpectralSplit,
    k: int,
    trials: int,
    seed: int,
    tols: Tolerances | None = None,
    blocks: _Blocks | None = None,
):
    """Minimum of the inner sup over ``trials`` Haar-random k-dimensional
    subspaces of the plus side; deterministic given the seed (trial i uses
    seed XOR i).  Returns (probe_min, argmin basis as ambient columns)."""
    best, frame = _probe_coords(b, split_a, k, trials, seed, tols, blocks)
    return best, (split_a.basis_p @ frame if frame is not None else None)


def _probe_coords(b, split_a, k, trials, seed, tols=None, blocks=None):
    tols = tols or default_tolerances()
    kp = split_a.dim_plus
    if not 1 <= k <= kp:
        raise IndexOutOfRange(f"k={k} outside 1..{kp}")
    if blocks is None:
        blocks = _Blocks(as_array(b), split_a, tols)
    best = math.inf
    best_frame = None
    for i in range(trials):
        rng = np.random.default_rng(seed ^ i)
        frame = _haar_frame(rng, kp, k)
        val = blocks.sup_over(frame)
        if val < best:
            best = val
            best_frame = frame
    return best, best_frame


def refine(
    b,
    split_a: SpectralSplit,
    start: np.ndarray,
    iters: int,
    tols: Tolerances | None = None,
    blocks: _Blocks | None = None,
) -> float:
    """Derivative-free descent over k-frames in the plus side.

    Rotates frame columns against the orthocomplement within the plus
    side, accepting strict decreases of the inner sup; the returned value
    never exceeds the starting one.  ``start`` is a frame in plus-basis
    coordinates (or ambient columns, which are converted).
    """
    tols = tols or default_tolerances()
    kp = split_a.dim_plus
    frame = np.asarray(start, dtype=np.float64)
    if frame.shape[0] == split_a.Pp.shape[0]:
        frame = split_a.basis_p.T @ frame
    check_orthonormal(frame, 10 * tols.ortho_tol)
    if blocks is None:
        blocks = _Blocks(as_array(b), split_a, tols)
    k = frame.shape[1]
    best = blocks.sup_over(frame)
    if k == kp or iters <= 0:
        return best
    # Orthonormal completion of the frame within the plus side.
    full, _ = np.linalg.qr(np.hstack([frame, np.eye(kp)]))
    comp = full[:, k:kp]
    step = 0.5
    for _ in range(iters):
        improved = False
        for i in range(k):
            for j in range(kp - k):
                for sgn in (1.0, -1.0):
                    ci, sj = math.cos(sgn * step), math.sin(sgn * step)
                    trial = frame.copy()
                    trial[:, i] = ci * frame[:, i] + sj * comp[:, j]
                    val = blocks.sup_over(trial)
                    if val < best - 1e-15 * (1.0 + abs(best)):
                        new_comp = -sj * frame[:, i] + ci * comp[:, j]
                        frame = trial
                        comp = comp.copy()
                        comp[:, j] = new_comp
                        best = val
                        improved = True
                        break
        if not improved:
            step *= 0.5
            if step < 1e-8:
                break
    return best


@dataclass
class MinimaxContext:
    """Shared per-instance state for a battery of k values."""

    split_a: SpectralSplit
    split_b: SpectralSplit
    blocks: _Blocks
    form_blocks: _Blocks
    dec_b_plus: object            # eigendecomposition of B on its plus basis
    tols: Tolerances
    k_cap: int = field(init=False)

    def __post_init__(self):
        self.k_cap = min(self.split_a.dim_plus, self.split_b.dim_plus)


def build_context(
    a,
    b,
    gamma: float,
    cfg: VerifyConfig,
    split_a: SpectralSplit | None = None,
    split_b: SpectralSplit | None = None,
    gap_tol: float | None = None,
) -> MinimaxContext:
    tols = cfg.tols
    if split_a is None:
        split_a = split(a, gamma, tols, gap_tol=gap_tol)
    if split_b is None:
        split_b = split(b, gamma, tols, gap_tol=gap_tol)
    b_arr = as_array(b)
    blocks = _Blocks(b_arr, split_a, tols)
    form_mat = QuadraticForm.of(b, tols).matrix()
    form_blocks = _Blocks(0.5 * (form_mat + form_mat.T), split_a, tols)
    dec_b_plus = eig_sym(compress(b, split_b.basis_p, tols), tols)
    return MinimaxContext(
        split_a=split_a,
        split_b=split_b,
        blocks=blocks,
        form_blocks=form_blocks,
        dec_b_plus=dec_b_plus,
        tols=tols,
    )


def verify_minimax(
    a,
    b,
    gamma: float,
    k: int,
    cfg: VerifyConfig | None = None,
    ctx: MinimaxContext | None = None,
) -> MinimaxReport:
    """Verify the inf-sup representation of the k-th gap eigenvalue.

    Checks three things: the direct eigenvalue is attained (by the
    candidate subspace, or after refinement), no sampled subspace falls
    below it, and the operator-path and form-path suprema agree on the
    candidate subspace.
    """
    cfg = cfg or VerifyConfig()
    if ctx is None:
        ctx = build_context(a, b, gamma, cfg)
    tols = ctx.tols
    if not 1 <= k <= ctx.split_b.dim_plus:
        raise IndexOutOfRange(f"k={k} outside 1..{ctx.split_b.dim_plus}")

    direct = float(ctx.dec_b_plus.values[k - 1])
    mm_tol = tols.mm_tol * (1.0 + abs(direct))

    cand = _candidate_coords(b, ctx.split_a, ctx.split_b, k, tols, dec=ctx.dec_b_plus)
    candidate_value = ctx.blocks.sup_over(cand)
    form_value = ctx.form_blocks.sup_over(cand)
    form_scale = 1.0 + abs(direct) + abs(candidate_value)
    form_gap = abs(form_value - candidate_value)
    form_ok = form_gap <= tols.form_tol * form_scale

    base = probe_seed(cfg.seed, k)
    probe_min, probe_argmin = _probe_coords(
        b, ctx.split_a, k, cfg.probe_trials, base, tols, blocks=ctx.blocks
    ) if cfg.probe_trials > 0 else (math.inf, None)

    probe_ok = probe_min >= direct - mm_tol
    cand_ok = candidate_value <= direct + mm_tol

    refined_value = None
    if probe_ok and not cand_ok:
        start = cand
        if probe_argmin is not None and probe_min < candidate_value:
            start = probe_argmin
        refined_value = refine(
            b,
            ctx.split_a,
            ctx.split_a.basis_p @ start,
            cfg.refine_rounds,
            tols,
            blocks=ctx.blocks,
        )

    if cand_ok and probe_ok and form_ok:
        status = "pass"
    elif (
        probe_ok
        and form_ok
        and refined_value is not None
        and min(candidate_value, refined_value) <= direct + mm_tol
    ):
        status = "refined-pass"
    else:
        status = "fail"

    return MinimaxReport(
        k=k,
        direct=direct,
        candidate_value=candidate_value,
        probe_min=probe_min if cfg.probe_trials > 0 else math.nan,
        probe_count=cfg.probe_trials,
        refined_value=refined_value,
        status=status,
        mm_tol=mm_tol,
        form_gap=form_gap,
        form_ok=form_ok,
    )


def minimax_battery(
    a,
    b,
    gamma: float,
    ks,
    cfg: VerifyConfig | None = None,
    ctx: MinimaxContext | None = None,
) -> list[MinimaxReport]:
    cfg = cfg or VerifyConfig()
    if ctx is None:
        ctx = build_context(a, b, gamma, cfg)
    return [verify_minimax(a, b, gamma, k, cfg, ctx=ctx) for k in ks]
