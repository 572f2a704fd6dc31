"""Deterministic instance generation.

Every instance is reproducible from (kind, dim, gap, seed); hypotheses of
the target statement hold by construction and the realized margins are
recorded in the instance for the manifest.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import Tolerances, default_tolerances
from .errors import GapmmError
from .perturb import min_form_bound_a, split_pos_neg
from .spectral import split
from .symmat import SymMatrix, spectral_norm

KINDS = (
    "bounded-pert",
    "offdiag-op",
    "offdiag-form",
    "unbounded-style",
    "semibounded",
)


@dataclass(frozen=True)
class Instance:
    kind: str
    seed: int
    dim: int
    c: float
    d: float
    gamma: float
    a: SymMatrix
    v: SymMatrix | None = None
    v1: SymMatrix | None = None          # second perturbation for ordered pairs
    branch: str = "lower"
    margins: dict = field(default_factory=dict)


def rng_for(seed: int, *path: int):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=path))


def haar_orthogonal(rng, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diagonal(r))
    signs[signs == 0.0] = 1.0
    return q * signs


def random_symmetric(rng, n: int) -> SymMatrix:
    g = rng.standard_normal((n, n))
    return SymMatrix.from_entries(0.5 * (g + g.T))


def gapped_operator(
    rng,
    dim: int,
    c: float,
    d: float,
    spread: float = 1.5,
    min_side: int = 3,
    positive: bool = False,
    negative: bool = False,
) -> SymMatrix:
    """Symmetric matrix whose spectrum avoids (c, d), with at least
    ``min_side`` eigenvalues on each side; ``positive``/``negative`` keep
    the whole spectrum on one sign (for the semibounded branches)."""
    if dim < 2 * min_side:
        raise GapmmError(f"dimension {dim} too small for {min_side} per side")
    width = d - c
    k_minus = int(rng.integers(min_side, dim - min_side + 1))
    lo_floor = c - spread * width
    if positive:
        lo_floor = max(lo_floor, 0.05 * abs(c) if c > 0 else 0.05)
    hi_ceil = d + spread * width
    if negative:
        hi_ceil = min(hi_ceil, -0.05 * abs(d) if d < 0 else -0.05)
    vals_minus = rng.uniform(lo_floor, c, size=k_minus)
    vals_plus = rng.uniform(d, hi_ceil, size=dim - k_minus)
    vals = np.concatenate([vals_minus, vals_plus])
    q = haar_orthogonal(rng, dim)
    return SymMatrix.from_entries(q @ np.diag(vals) @ q.T)


def _offdiagonal_perturbation(rng, a: SymMatrix, gamma: float, scale: float, tols) -> SymMatrix:
    sa = split(a, gamma, tols)
    r = rng.standard_normal((sa.dim_plus, sa.dim_minus))
    v = sa.basis_p @ r @ sa.basis_m.T
    v = v + v.T
    norm = spectral_norm(v, tols)
    return SymMatrix.from_entries(v * (scale / norm))


def make_instance(
    kind: str,
    dim: int,
    seed: int,
    gap: tuple[float, float] | None = None,
    scale: float | None = None,
    branch: str = "lower",
    tols: Tolerances | None = None,
) -> Instance:
    """Generate one instance of the given kind; see KINDS."""
    tols = tols or default_tolerances()
    if kind not in KINDS:
        raise GapmmError(f"unknown instance kind {kind!r} (expected one of {KINDS})")
    rng = rng_for(seed, KINDS.index(kind), dim)
    margins: dict = {}

    if kind in ("bounded-pert", "semibounded"):
        c, d = gap or (-1.0, 1.0)
        a = gapped_operator(rng, dim, c, d)
        ratio = float(rng.uniform(0.35, 0.85)) if scale is None else scale
        v0 = random_symmetric(rng, dim)
        vp, vn = split_pos_neg(v0, tols)
        s0 = spectral_norm(vp, tols) + spectral_norm(vn, tols)
        v = SymMatrix.from_entries(v0.entries * (ratio * (d - c) / s0))
        vp, vn = split_pos_neg(v, tols)
        np_n, nn_n = spectral_norm(vp, tols), spectral_norm(vn, tols)
        gamma = 0.5 * ((c + np_n) + (d - nn_n))
        margins["part_norm_sum_margin"] = (d - c) - (np_n + nn_n)
        margins["norm"] = spectral_norm(v, tols)
        return Instance(kind, seed, dim, c, d, gamma, a, v, margins=margins, branch=branch)

    if kind in ("offdiag-op", "offdiag-form"):
        c, d = gap or (-1.0, 1.0)
        a = gapped_operator(rng, dim, c, d)
        gamma = 0.5 * (c + d)
        amp = float(rng.uniform(0.2, 1.2)) * (d - c) if scale is None else scale
        v = _offdiagonal_perturbation(rng, a, gamma, amp, tols)
        margins["norm"] = spectral_norm(v, tols)
        sa = split(a, gamma, tols)
        margins["offdiag_residual"] = max(
            spectral_norm(sa.Pp @ v.entries @ sa.Pp, tols),
            spectral_norm(sa.Pm @ v.entries @ sa.Pm, tols),
        )
        return Instance(kind, seed, dim, c, d, gamma, a, v, margins=margins, branch=branch)

    if kind == "unbounded-style":
        if branch == "lower":
            c, d = gap or (1.0, 2.0)
            if c <= 0:
                raise GapmmError("lower branch requires a positive gap (c > 0)")
            a = gapped_operator(rng, dim, c, d, positive=True)
        else:
            c, d = gap or (-2.0, -1.0)
            if d >= 0:
                raise GapmmError("upper branch requires a negative gap (d < 0)")
            a = gapped_operator(rng, dim, c, d, negative=True)
        width = d - c
        b_slope = 0.3 * width / abs(c + d) if abs(c + d) > 1e-12 else 0.3
        b_slope = min(b_slope, 0.8)
        target_ratio = 0.6 if scale is None else scale
        signed = b_slope * (c + d) if branch == "lower" else -b_slope * (c + d)
        a_target = 0.5 * (target_ratio * width - signed)
        if a_target <= 0:
            raise GapmmError("infeasible margin target for this gap")
        v0 = random_symmetric(rng, dim)

        def a_of(eta):
            vv = SymMatrix.from_entries(eta * v0.entries)
            return min_form_bound_a(vv, a, b_slope, branch=branch, shifted=False, tols=tols).a

        eta_hi = 1.0
        while a_of(eta_hi) < a_target:
            eta_hi *= 2.0
        eta_lo = 0.0
        for _ in range(50):
            mid = 0.5 * (eta_lo + eta_hi)
            if a_of(mid) < a_target:
                eta_lo = mid
            else:
                eta_hi = mid
        eta = eta_lo if eta_lo > 0 else eta_hi
        v = SymMatrix.from_entries(eta * v0.entries)
        a_c = a_of(eta)
        cond = 2.0 * a_c + signed
        margins["margin_condition"] = width - cond
        margins["form_a"] = a_c
        margins["form_b"] = b_slope
        if branch == "lower":
            lo, hi = a_c + (1.0 + b_slope) * c, (1.0 - b_slope) * d - a_c
        else:
            lo, hi = (1.0 - b_slope) * c + a_c, (1.0 + b_slope) * d - a_c
        gamma = 0.5 * (lo + hi)
        return Instance(kind, seed, dim, c, d, gamma, a, v, margins=margins, branch=branch)

    raise AssertionError("unreachable")


def make_ordered_pair(
    dim: int,
    seed: int,
    gap: tuple[float, float] | None = None,
    tols: Tolerances | None = None,
) -> Instance:
    """Bounded perturbation pair with the second dominating the first and
    both satisfying the norm condition."""
    tols = tols or default_tolerances()
    c, d = gap or (-1.0, 1.0)
    rng = rng_for(seed, 0xD0, dim)
    base = make_instance("bounded-pert", dim, seed, gap=(c, d), scale=0.45, tols=tols)
    v0 = base.v
    g = rng.standard_normal((dim, max(2, dim // 3)))
    bump = SymMatrix.from_entries(g @ g.T)
    delta = 0.2 * (d - c) / spectral_norm(bump, tols)
    while True:
        v1 = SymMatrix.from_entries(v0.entries + delta * bump.entries)
        vp, vn = split_pos_neg(v1, tols)
        if spectral_norm(vp, tols) + spectral_norm(vn, tols) < 0.95 * (d - c):
            break
        delta *= 0.5
    margins = dict(base.margins)
    margins["order_margin"] = 0.0  # PSD bump by construction
    margins["bump_scale"] = delta
    return Instance(
        "bounded-pert", seed, dim, c, d, base.gamma, base.a, v0, v1=v1, margins=margins
    )
