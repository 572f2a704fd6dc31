"""Hypothesis checkers and conclusion verifiers.

Each checker inspects the hypotheses of one verified statement, reports
each with a margin, and evaluates the statement's conclusions only when
all hypotheses hold (otherwise the conclusions are marked not-applicable).
Scale-dependent estimates are evaluated in the frame shifted by the split
point, where the gap is centered at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import VerifyConfig
from .errors import InsideSpectrum, NotPositiveDefinite
from .minimax import MinimaxReport, build_context, minimax_battery
from .perturb import (
    min_form_bound_a,
    min_operator_bound_a,
    split_diag_offdiag,
    split_pos_neg,
)
from .spectral import (
    SpectralSplit,
    compress,
    graph_operator,
    part_eigenvalues,
    split,
    verify_graph_identities,
)
from .symmat import (
    QuadraticForm,
    SymMatrix,
    apply_fn,
    as_array,
    as_symmatrix,
    eigvals_sym,
    psd_leq,
    spectral_norm,
)

SQRT2_OVER_2 = math.sqrt(2.0) / 2.0


@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    holds: bool
    margin: float

    def __post_init__(self):
        object.__setattr__(self, "holds", bool(self.holds))
        object.__setattr__(self, "margin", float(self.margin))


@dataclass(frozen=True)
class ConclusionCheck:
    name: str
    holds: bool | None            # None = not-applicable (hypotheses failed)
    residual: float | None

    def __post_init__(self):
        if self.holds is not None:
            object.__setattr__(self, "holds", bool(self.holds))
        if self.residual is not None:
            object.__setattr__(self, "residual", float(self.residual))


@dataclass
class TheoremReport:
    theorem_id: str
    hypotheses: list[HypothesisCheck] = field(default_factory=list)
    conclusions: list[ConclusionCheck] = field(default_factory=list)
    minimax: list[MinimaxReport] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def hypotheses_hold(self) -> bool:
        return all(h.holds for h in self.hypotheses)

    @property
    def failed_conclusions(self) -> list[ConclusionCheck]:
        return [c for c in self.conclusions if c.holds is False]

    @property
    def ok(self) -> bool:
        return not self.failed_conclusions

    def mark_not_applicable(self, names) -> None:
        for name in names:
            self.conclusions.append(ConclusionCheck(name, None, None))


def _norm(m, cfg) -> float:
    return spectral_norm(as_array(m), cfg.tols)


def _shifted(m, gamma: float) -> SymMatrix:
    a = as_array(m)
    return SymMatrix.from_entries(a - gamma * np.eye(a.shape[0]))


def check_negativity(b, split_a: SpectralSplit, gamma: float, cfg: VerifyConfig):
    """Margin of the sign condition on the minus side: the shifted operator
    must be nonpositive there.  Returns (holds, margin)."""
    if split_a.dim_minus == 0:
        return True, math.inf
    comp = compress(b, split_a.basis_m, cfg.tols)
    margin = gamma - float(eigvals_sym(comp, cfg.tols)[-1])
    scale = 1.0 + _norm(b, cfg)
    return margin >= -cfg.tols.neg_tol * scale, margin


def _form_negativity(b, split_a: SpectralSplit, gamma: float, cfg: VerifyConfig):
    """Same sign condition evaluated through the |B|^(1/2)/sign(B) path."""
    if split_a.dim_minus == 0:
        return True, math.inf
    fm = QuadraticForm.of(b, cfg.tols).matrix()
    comp = compress(SymMatrix.from_entries(fm), split_a.basis_m, cfg.tols)
    margin = gamma - float(eigvals_sym(comp, cfg.tols)[-1])
    scale = 1.0 + _norm(b, cfg)
    return margin >= -cfg.tols.neg_tol * scale, margin


def _battery(report: TheoremReport, a, b, gamma, cfg, ctx=None, label="minimax"):
    """Run the minimax battery for k = 1..k_max and record one conclusion
    per index (plus the form-path agreement)."""
    if ctx is None:
        ctx = build_context(a, b, gamma, cfg)
    k_max = min(cfg.k_max, ctx.k_cap)
    reports = minimax_battery(a, b, gamma, range(1, k_max + 1), cfg, ctx=ctx)
    report.minimax.extend(reports)
    for r in reports:
        gap = abs(r.attained_value - r.direct)
        report.conclusions.append(
            ConclusionCheck(f"{label}-k{r.k}", r.status in ("pass", "refined-pass"), gap)
        )
        report.conclusions.append(
            ConclusionCheck(f"{label}-form-agreement-k{r.k}", r.form_ok, r.form_gap)
        )
        if r.probe_count > 0:
            report.conclusions.append(
                ConclusionCheck(
                    f"{label}-probe-floor-k{r.k}",
                    r.probe_min >= r.direct - r.mm_tol,
                    r.direct - r.probe_min,
                )
            )
    return ctx


# ---------------------------------------------------------------------------
# Additive operator perturbation with the graph-norm route hypotheses:
# overlap of the unperturbed plus side with the perturbed minus side below
# one, and the sign condition on the minus side.

def check_operator_perturbation(a, v, gamma: float, cfg: VerifyConfig) -> TheoremReport:
    report = TheoremReport(theorem_id="op-pert")
    a_m = as_symmatrix(a)
    v_m = as_symmatrix(v)
    b_m = a_m + v_m

    split_a = split(a_m, gamma, cfg.tols)
    split_b = split(b_m, gamma, cfg.tols)

    va = as_array(v)
    asym = float(np.abs(va - va.T).max())
    report.hypotheses.append(HypothesisCheck("perturbation-symmetric", asym == 0.0, -asym))

    pq = spectral_norm(split_a.Pp @ split_b.Pm, cfg.tols)
    report.hypotheses.append(HypothesisCheck("plus-minus-overlap-below-one", pq < 1.0, 1.0 - pq))
    report.extras["plus_minus_overlap"] = pq

    neg_ok, neg_margin = check_negativity(b_m, split_a, gamma, cfg)
    report.hypotheses.append(HypothesisCheck("negativity-on-minus-side", neg_ok, neg_margin))

    rb = min_operator_bound_a(v_m, _shifted(a_m, gamma), cfg.small_b, cfg.tols)
    report.notes.append(
        "finite-dim collapse: every matrix perturbation has relative bound 0; "
        f"certified a={rb.a:.6g} at b={rb.b:.3g}"
    )
    report.extras["relative_bound"] = {"a": rb.a, "b": rb.b}

    k_max = min(cfg.k_max, split_a.dim_plus, split_b.dim_plus)
    if not report.hypotheses_hold:
        report.mark_not_applicable([f"minimax-k{k}" for k in range(1, k_max + 1)])
        return report

    _battery(report, a_m, b_m, gamma, cfg)
    return report


# ---------------------------------------------------------------------------
# Pair of operators with the projector-distance route: no assumption on how
# the second operator arises; declared semibounded branch recorded.

def check_semibounded_pair(
    a, b, gamma: float, cfg: VerifyConfig, branch: str = "lower"
) -> TheoremReport:
    report = TheoremReport(theorem_id="semibounded")
    a_m = as_symmatrix(a)
    b_m = as_symmatrix(b)
    split_a = split(a_m, gamma, cfg.tols)
    split_b = split(b_m, gamma, cfg.tols)

    dist = spectral_norm(split_a.Pp - split_b.Pp, cfg.tols)
    report.hypotheses.append(HypothesisCheck("projector-distance-below-one", dist < 1.0, 1.0 - dist))
    report.extras["projector_distance"] = dist

    neg_ok, neg_margin = check_negativity(b_m, split_a, gamma, cfg)
    report.hypotheses.append(HypothesisCheck("negativity-on-minus-side", neg_ok, neg_margin))
    fneg_ok, fneg_margin = _form_negativity(b_m, split_a, gamma, cfg)
    report.hypotheses.append(HypothesisCheck("form-negativity-on-minus-side", fneg_ok, fneg_margin))

    report.notes.append(
        f"semibounded branch declared: {branch} (every matrix is semibounded; "
        "the branch keeps the bounded-side bookkeeping of the statement)"
    )

    k_max = min(cfg.k_max, split_a.dim_plus, split_b.dim_plus)
    if not report.hypotheses_hold:
        report.mark_not_applicable(
            ["dim-equality"] + [f"minimax-k{k}" for k in range(1, k_max + 1)]
        )
        return report

    report.conclusions.append(
        ConclusionCheck(
            "dim-equality",
            split_a.dim_plus == split_b.dim_plus,
            float(abs(split_a.dim_plus - split_b.dim_plus)),
        )
    )
    _battery(report, a_m, b_m, gamma, cfg)
    return report


# ---------------------------------------------------------------------------
# Off-diagonal operator perturbation: the strongest conclusions (dimension
# equality, universal projector-distance bound, block diagonalization).

def check_offdiag_operator(
    a, v, gamma: float, cfg: VerifyConfig, t_grid=None
) -> TheoremReport:
    report = TheoremReport(theorem_id="offdiag-op")
    a_m = as_symmatrix(a)
    v_m = as_symmatrix(v)
    b_m = a_m + v_m
    split_a = split(a_m, gamma, cfg.tols)

    va = as_array(v_m)
    r_pp = spectral_norm(split_a.Pp @ va @ split_a.Pp, cfg.tols)
    r_mm = spectral_norm(split_a.Pm @ va @ split_a.Pm, cfg.tols)
    od_scale = 1.0 + _norm(b_m, cfg)
    od_res = max(r_pp, r_mm)
    report.hypotheses.append(
        HypothesisCheck("off-diagonal", od_res <= cfg.tols.od_tol * od_scale, od_res)
    )

    rb = min_operator_bound_a(v_m, _shifted(a_m, gamma), cfg.small_b, cfg.tols)
    report.hypotheses.append(HypothesisCheck("relative-bound-below-one", rb.b < 1.0, 1.0 - rb.b))
    report.notes.append(
        f"finite-dim collapse: relative bound 0; certified a={rb.a:.6g} at b={rb.b:.3g}"
    )

    conclusions_planned = ["dim-equality", "projector-distance-bound", "graph-identities",
                           "block-diagonalization", "block-form"]
    if not report.hypotheses_hold:
        report.mark_not_applicable(conclusions_planned)
        return report

    split_b = split(b_m, gamma, cfg.tols)
    report.conclusions.append(
        ConclusionCheck(
            "dim-equality",
            split_a.dim_plus == split_b.dim_plus,
            float(abs(split_a.dim_plus - split_b.dim_plus)),
        )
    )

    dist = spectral_norm(split_a.Pp - split_b.Pp, cfg.tols)
    report.extras["projector_distance"] = dist
    report.conclusions.append(
        ConclusionCheck("projector-distance-bound", dist <= SQRT2_OVER_2 + 1e-12, dist - SQRT2_OVER_2)
    )

    graph = graph_operator(split_a, split_b, cfg.tols)
    ident = verify_graph_identities(graph, split_a, split_b, cfg.tols)
    report.extras["graph_identities"] = {
        "repr_first": ident.repr_first,
        "repr_second": ident.repr_second,
        "ypm": ident.ypm,
        "pqy": ident.pqy,
        "norm_pqx": ident.norm_pqx,
        "bound": ident.bound,
    }
    report.conclusions.append(
        ConclusionCheck("graph-identities", ident.holds, ident.max_residual)
    )

    # Multiplied-through similarity residual (avoids inverting I - Y).
    aa, y = as_array(a_m), graph.Y
    n = aa.shape[0]
    eye = np.eye(n)
    lhs = (eye - y) @ as_array(b_m)
    diag_op = aa - y @ va
    rhs = diag_op @ (eye - y)
    bd_scale = (1.0 + _norm(a_m, cfg) + _norm(v_m, cfg)) * (1.0 + spectral_norm(y, cfg.tols))
    bd_res = spectral_norm(lhs - rhs, cfg.tols)
    report.conclusions.append(
        ConclusionCheck("block-diagonalization", bd_res <= cfg.tols.bd_tol * bd_scale, bd_res)
    )

    # Block form of the diagonalized operator in the reduced bases.  The
    # correction terms enter with the signs produced by expanding the
    # product of the skew block operator with the off-diagonal coupling.
    wp, wm = split_a.basis_p, split_a.basis_m
    kp = wp.shape[1]
    w_hat = wp.T @ va @ wm
    top = wp.T @ aa @ wp + graph.X.T @ w_hat.T
    bot = wm.T @ aa @ wm - graph.X @ w_hat
    wf = np.hstack([wp, wm])
    transformed = wf.T @ diag_op @ wf
    block_res = max(
        spectral_norm(transformed[:kp, :kp] - top, cfg.tols),
        spectral_norm(transformed[kp:, kp:] - bot, cfg.tols),
        spectral_norm(transformed[:kp, kp:], cfg.tols),
    )
    report.conclusions.append(
        ConclusionCheck("block-form", block_res <= cfg.tols.bd_tol * bd_scale, block_res)
    )

    ctx = _battery(report, a_m, b_m, gamma, cfg)

    # Lower bound: unperturbed gap eigenvalues never exceed perturbed ones.
    k_max = min(cfg.k_max, ctx.k_cap, split_a.dim_plus)
    for k in range(1, k_max + 1):
        lam_a = part_eigenvalues(a_m, split_a, k, cfg.tols)
        lam_b = float(ctx.dec_b_plus.values[k - 1])
        tol = cfg.tols.mm_tol * (1.0 + abs(lam_b))
        report.conclusions.append(
            ConclusionCheck(f"lower-bound-k{k}", lam_a <= lam_b + tol, lam_a - lam_b)
        )

    if t_grid is not None:
        _lipschitz_offdiag(report, a_m, v_m, gamma, t_grid, cfg)
    return report


def _lipschitz_offdiag(report, a_m, v_m, gamma, t_grid, cfg):
    """Scaling continuity for bounded off-diagonal perturbations: the gap
    eigenvalues move at most ||V|| per unit of the coupling parameter."""
    norm_v = _norm(v_m, cfg)
    curves, skipped = _eig_curves(a_m, v_m, gamma, t_grid, cfg)
    report.extras["lipschitz_skipped_t"] = skipped
    report.extras["perturbation_norm"] = norm_v
    if len(curves) < 2:
        report.conclusions.append(ConclusionCheck("lipschitz", None, None))
        return
    k_common = min(len(v) for _, v in curves)
    k_common = min(k_common, cfg.k_max)
    worst = -math.inf
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            t, lam_t = curves[i]
            s, lam_s = curves[j]
            for k in range(k_common):
                worst = max(worst, abs(lam_t[k] - lam_s[k]) - norm_v * abs(t - s))
    scale = 1.0 + norm_v + max(abs(t) for t, _ in curves)
    report.conclusions.append(
        ConclusionCheck("lipschitz", worst <= cfg.tols.mm_tol * scale, worst)
    )


def _eig_curves(a_m, v_m, gamma, t_grid, cfg):
    """Gap-eigenvalue curves t -> (lambda_k) for B_t = A + tV; t values whose
    split at gamma fails are skipped and reported."""
    curves = []
    skipped = []
    for t in t_grid:
        b_t = as_array(a_m) + float(t) * as_array(v_m)
        try:
            split_t = split(SymMatrix.from_entries(b_t), gamma, cfg.tols)
        except Exception:
            skipped.append(float(t))
            continue
        vals = eigvals_sym(compress(b_t, split_t.basis_p, cfg.tols), cfg.tols)
        curves.append((float(t), [float(x) for x in vals]))
    return curves, skipped


# ---------------------------------------------------------------------------
# Off-diagonal form perturbation (semibounded branch), with the mixed-form
# continuity estimate and the explicit upper bound.

def check_offdiag_form(
    a,
    v,
    gamma: float,
    cfg: VerifyConfig,
    t_grid=None,
    branch: str = "lower",
) -> TheoremReport:
    report = TheoremReport(theorem_id="offdiag-form")
    a_m = as_symmatrix(a)
    v_m = as_symmatrix(v)
    b_m = a_m + v_m
    split_a = split(a_m, gamma, cfg.tols)

    va = as_array(v_m)
    r_pp = spectral_norm(split_a.Pp @ va @ split_a.Pp, cfg.tols)
    r_mm = spectral_norm(split_a.Pm @ va @ split_a.Pm, cfg.tols)
    od_scale = 1.0 + _norm(b_m, cfg)
    od_res = max(r_pp, r_mm)
    report.hypotheses.append(
        HypothesisCheck("form-off-diagonal", od_res <= cfg.tols.od_tol * od_scale, od_res)
    )

    rb = min_form_bound_a(v_m, _shifted(a_m, gamma), cfg.form_b, branch=branch, tols=cfg.tols)
    report.hypotheses.append(HypothesisCheck("form-bound-slope-below-one", rb.b < 1.0, 1.0 - rb.b))
    report.extras["form_bound"] = {"a": rb.a, "b": rb.b, "m": rb.m, "branch": branch}
    report.notes.append(
        f"certified form bound a={rb.a:.6g}, b={rb.b:.3g} on the {branch} branch "
        f"(semibound m={rb.m:.6g} in the shifted frame); semiboundedness of the "
        "perturbed family is automatic in finite dimension"
    )

    if not report.hypotheses_hold:
        report.mark_not_applicable(["dim-equality", "minimax", "lower-bound", "upper-bound"])
        return report

    split_b = split(b_m, gamma, cfg.tols)
    report.conclusions.append(
        ConclusionCheck(
            "dim-equality",
            split_a.dim_plus == split_b.dim_plus,
            float(abs(split_a.dim_plus - split_b.dim_plus)),
        )
    )

    ctx = _battery(report, a_m, b_m, gamma, cfg)
    k_max = min(cfg.k_max, ctx.k_cap, split_a.dim_plus)

    lam_a_shift = [
        part_eigenvalues(a_m, split_a, k, cfg.tols) - gamma for k in range(1, k_max + 1)
    ]
    lam_b_shift = [float(ctx.dec_b_plus.values[k - 1]) - gamma for k in range(1, k_max + 1)]

    # Lower bound (the perturbation vanishes on the plus side).
    for k in range(1, k_max + 1):
        tol = cfg.tols.mm_tol * (1.0 + abs(lam_b_shift[k - 1]))
        report.conclusions.append(
            ConclusionCheck(
                f"lower-bound-k{k}",
                lam_a_shift[k - 1] <= lam_b_shift[k - 1] + tol,
                lam_a_shift[k - 1] - lam_b_shift[k - 1],
            )
        )

    # Explicit upper bound from the certified form bound.
    a_c, b_c, m_c = rb.a, rb.b, rb.m
    const = a_c + b_c * (abs(m_c) - m_c) if branch == "lower" else a_c + b_c * (abs(m_c) + m_c)
    slope = 1.0 + b_c if branch == "lower" else 1.0 - b_c
    worst = -math.inf
    for k in range(1, k_max + 1):
        bound = slope * lam_a_shift[k - 1] + const
        worst = max(worst, lam_b_shift[k - 1] - bound)
    ub_scale = 1.0 + max(abs(x) for x in lam_b_shift) if lam_b_shift else 1.0
    report.conclusions.append(
        ConclusionCheck("upper-bound", worst <= cfg.tols.mm_tol * ub_scale, worst)
    )

    if t_grid is not None:
        _lipschitz_form(report, a_m, v_m, gamma, t_grid, cfg, rb, branch)
    return report


def _lipschitz_form(report, a_m, v_m, gamma, t_grid, cfg, rb, branch):
    """Mixed-form continuity: |lam_k(t) - lam_k(s)| is controlled by
    (a~ + b |lam_k(s)|) |t-s| / (1 - b|s|) on pairs with b|t-s| <= 1 - b|s|,
    in the shifted frame."""
    a_c, b_c, m_c = rb.a, rb.b, rb.m
    a_tilde = a_c + abs(m_c) - m_c if branch == "lower" else a_c + m_c + abs(m_c)
    curves, skipped = _eig_curves(a_m, v_m, gamma, t_grid, cfg)
    report.extras["lipschitz_skipped_t"] = skipped
    if len(curves) < 2:
        report.conclusions.append(ConclusionCheck("form-lipschitz", None, None))
        return
    k_common = min(min(len(v) for _, v in curves), cfg.k_max)
    worst = -math.inf
    pairs = 0
    for i in range(len(curves)):
        for j in range(len(curves)):
            if i == j:
                continue
            t, lam_t = curves[i]
            s, lam_s = curves[j]
            if b_c * abs(t - s) > 1.0 - b_c * abs(s):
                continue
            pairs += 1
            denom = 1.0 - b_c * abs(s)
            for k in range(k_common):
                lt = lam_t[k] - gamma
                ls = lam_s[k] - gamma
                bound = (a_tilde * abs(t - s) + b_c * abs(t - s) * abs(ls)) / denom
                worst = max(worst, abs(lt - ls) - bound)
    report.extras["form_lipschitz_pairs"] = pairs
    if pairs == 0:
        report.conclusions.append(ConclusionCheck("form-lipschitz", None, None))
        return
    scale = 1.0 + a_tilde
    report.conclusions.append(
        ConclusionCheck("form-lipschitz", worst <= cfg.tols.mm_tol * scale, worst)
    )


# ---------------------------------------------------------------------------
# Bounded perturbation of a gapped operator, with the positive/negative part
# norm condition, the half-angle projector bound, and both proof routes.

def check_bounded_perturbation(a, v, c: float, d: float, cfg: VerifyConfig) -> TheoremReport:
    report = TheoremReport(theorem_id="bounded-pert")
    a_m = as_symmatrix(a)
    v_m = as_symmatrix(v)
    b_m = a_m + v_m

    vals_a = eigvals_sym(a_m, cfg.tols)
    inside = vals_a[(vals_a > c) & (vals_a < d)]
    if inside.size:
        raise InsideSpectrum(f"interval ({c}, {d}) contains eigenvalues {inside}")

    vp, vn = split_pos_neg(v_m, cfg.tols)
    np_norm = spectral_norm(vp, cfg.tols)
    nn_norm = spectral_norm(vn, cfg.tols)
    width = d - c
    margin = width - (np_norm + nn_norm)
    report.hypotheses.append(HypothesisCheck("part-norm-sum-below-gap", margin > 0.0, margin))
    report.extras["part_norms"] = {"positive": np_norm, "negative": nn_norm, "norm": _norm(v_m, cfg)}

    planned = ["perturbed-gap-free", "dim-equality", "projector-sin-bound"]
    if not report.hypotheses_hold:
        report.mark_not_applicable(planned)
        return report

    lo = c + np_norm
    hi = d - nn_norm
    gamma = 0.5 * (lo + hi)
    report.extras["gamma"] = gamma
    report.extras["shrunk_interval"] = [lo, hi]

    vals_b = eigvals_sym(b_m, cfg.tols)
    scale_b = 1.0 + max(abs(float(vals_b[0])), abs(float(vals_b[-1])))
    penetration = 0.0
    for e in vals_b:
        if lo < e < hi:
            penetration = max(penetration, min(float(e) - lo, hi - float(e)))
    report.conclusions.append(
        ConclusionCheck(
            "perturbed-gap-free", penetration <= cfg.tols.gap_tol * scale_b, penetration
        )
    )

    split_a = split(a_m, gamma, cfg.tols)
    split_b = split(b_m, gamma, cfg.tols)
    report.conclusions.append(
        ConclusionCheck(
            "dim-equality",
            split_a.dim_plus == split_b.dim_plus,
            float(abs(split_a.dim_plus - split_b.dim_plus)),
        )
    )

    dist = spectral_norm(split_a.Pp - split_b.Pp, cfg.tols)
    sin_bound = math.sin(0.5 * math.asin(min((np_norm + nn_norm) / width, 1.0)))
    report.extras["projector_distance"] = dist
    report.extras["projector_sin_bound"] = sin_bound
    report.conclusions.append(
        ConclusionCheck("projector-sin-bound", dist <= sin_bound + 1e-10, dist - sin_bound)
    )

    ctx = _battery(report, a_m, b_m, gamma, cfg)

    # Second proof route: absorb the split-diagonal part into the reference
    # operator and treat the remainder as an off-diagonal perturbation.
    vdiag, voff = split_diag_offdiag(v_m, split_a, cfg.tols)
    a2 = a_m + vdiag
    split_a2 = split(a2, gamma, cfg.tols)
    od_res = max(
        spectral_norm(split_a2.Pp @ as_array(voff) @ split_a2.Pp, cfg.tols),
        spectral_norm(split_a2.Pm @ as_array(voff) @ split_a2.Pm, cfg.tols),
    )
    report.extras["route2_offdiag_residual"] = od_res
    ctx2 = build_context(a2, b_m, gamma, cfg)
    k_max = min(cfg.k_max, ctx.k_cap, ctx2.k_cap)
    route2 = minimax_battery(a2, b_m, gamma, range(1, k_max + 1), cfg, ctx=ctx2)
    for r1, r2 in zip(report.minimax, route2):
        tol = 1e-8 * (1.0 + abs(r1.direct))
        report.conclusions.append(
            ConclusionCheck(
                f"route-agreement-k{r1.k}",
                abs(r1.attained_value - r2.attained_value) <= tol
                and r2.status in ("pass", "refined-pass"),
                abs(r1.attained_value - r2.attained_value),
            )
        )
    return report


# ---------------------------------------------------------------------------
# Order and continuity corollaries for bounded perturbations.

def check_ordering(a, v0, v1, c: float, d: float, cfg: VerifyConfig) -> TheoremReport:
    report = TheoremReport(theorem_id="monotonicity")
    a_m = as_symmatrix(a)
    width = d - c
    gammas = []
    for tag, v in (("first", v0), ("second", v1)):
        vp, vn = split_pos_neg(v, cfg.tols)
        npn = spectral_norm(vp, cfg.tols) + spectral_norm(vn, cfg.tols)
        report.hypotheses.append(
            HypothesisCheck(f"part-norm-sum-below-gap-{tag}", npn < width, width - npn)
        )
        vp_n = spectral_norm(vp, cfg.tols)
        vn_n = spectral_norm(vn, cfg.tols)
        gammas.append(0.5 * ((c + vp_n) + (d - vn_n)))
    ordered, order_margin = psd_leq(v0, v1, cfg.tols.neg_tol * (1.0 + _norm(v1, cfg)), cfg.tols)
    report.hypotheses.append(HypothesisCheck("perturbations-ordered", ordered, order_margin))

    if not report.hypotheses_hold:
        report.mark_not_applicable(["monotonicity"])
        return report

    b0 = a_m + as_symmatrix(v0)
    b1 = a_m + as_symmatrix(v1)
    s0 = split(b0, gammas[0], cfg.tols)
    s1 = split(b1, gammas[1], cfg.tols)
    k_max = min(cfg.k_max, s0.dim_plus, s1.dim_plus)
    worst = -math.inf
    for k in range(1, k_max + 1):
        l0 = part_eigenvalues(b0, s0, k, cfg.tols)
        l1 = part_eigenvalues(b1, s1, k, cfg.tols)
        worst = max(worst, (l0 - l1) / (1.0 + abs(l1)))
    report.conclusions.append(
        ConclusionCheck("monotonicity", worst <= cfg.tols.mm_tol, worst)
    )
    return report


def check_scaling_lipschitz(a, v, c: float, d: float, t_grid, cfg: VerifyConfig) -> TheoremReport:
    """Continuity of the gap eigenvalues of A + tV, t in [0, 1], with the
    perturbation norm as the modulus."""
    report = TheoremReport(theorem_id="lipschitz")
    a_m = as_symmatrix(a)
    v_m = as_symmatrix(v)
    vp, vn = split_pos_neg(v_m, cfg.tols)
    np_n = spectral_norm(vp, cfg.tols)
    nn_n = spectral_norm(vn, cfg.tols)
    width = d - c
    report.hypotheses.append(
        HypothesisCheck("part-norm-sum-below-gap", np_n + nn_n < width, width - (np_n + nn_n))
    )
    if not report.hypotheses_hold:
        report.mark_not_applicable(["lipschitz"])
        return report

    norm_v = _norm(v_m, cfg)
    curves = []
    skipped = []
    for t in t_grid:
        t = float(t)
        gamma_t = 0.5 * ((c + t * np_n) + (d - t * nn_n))
        b_t = a_m + t * v_m
        try:
            s_t = split(b_t, gamma_t, cfg.tols)
        except Exception:
            skipped.append(t)
            continue
        vals = eigvals_sym(compress(b_t, s_t.basis_p, cfg.tols), cfg.tols)
        curves.append((t, [float(x) for x in vals]))
    report.extras["lipschitz_skipped_t"] = skipped
    report.extras["perturbation_norm"] = norm_v
    if len(curves) < 2:
        report.conclusions.append(ConclusionCheck("lipschitz", None, None))
        return report
    k_common = min(min(len(v) for _, v in curves), cfg.k_max)
    worst = -math.inf
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            t, lam_t = curves[i]
            s, lam_s = curves[j]
            for k in range(k_common):
                worst = max(worst, abs(lam_t[k] - lam_s[k]) - norm_v * abs(t - s))
    scale = 1.0 + norm_v
    report.conclusions.append(
        ConclusionCheck("lipschitz", worst <= cfg.tols.mm_tol * scale, worst)
    )
    report.extras["dims_constant"] = len({len(v) for _, v in curves}) == 1
    return report


# ---------------------------------------------------------------------------
# Relatively form-bounded perturbation of a semibounded gapped operator.

def check_relative_perturbation(
    a, v, c: float, d: float, cfg: VerifyConfig, branch: str = "lower", b_slope: float | None = None
) -> TheoremReport:
    report = TheoremReport(theorem_id="unbounded-style")
    a_m = as_symmatrix(a)
    v_m = as_symmatrix(v)
    b_m = a_m + v_m

    vals_a = eigvals_sym(a_m, cfg.tols)
    inside = vals_a[(vals_a > c) & (vals_a < d)]
    if inside.size:
        raise InsideSpectrum(f"interval ({c}, {d}) contains eigenvalues {inside}")

    width = d - c
    if b_slope is None:
        b_slope = 0.25 * width / (abs(c + d) + width)
    rb = min_form_bound_a(v_m, a_m, b_slope, branch=branch, shifted=False, tols=cfg.tols)
    a_c, b_c = rb.a, rb.b
    report.extras["form_bound"] = {"a": a_c, "b": b_c, "branch": branch}
    report.hypotheses.append(HypothesisCheck("form-bound-slope-below-one", b_c < 1.0, 1.0 - b_c))
    if branch == "lower":
        margin = width - (2.0 * a_c + b_c * (c + d))
        lo, hi = a_c + (1.0 + b_c) * c, (1.0 - b_c) * d - a_c
    else:
        margin = width - (2.0 * a_c - b_c * (c + d))
        lo, hi = (1.0 - b_c) * c + a_c, (1.0 + b_c) * d - a_c
    report.hypotheses.append(HypothesisCheck("margin-condition", margin > 0.0, margin))
    report.extras["shrunk_interval"] = [lo, hi]

    planned = ["perturbed-gap-free", "dim-equality"]
    if not report.hypotheses_hold:
        report.mark_not_applicable(planned)
        return report

    gamma = 0.5 * (lo + hi)
    report.extras["gamma"] = gamma
    vals_b = eigvals_sym(b_m, cfg.tols)
    scale_b = 1.0 + max(abs(float(vals_b[0])), abs(float(vals_b[-1])))
    penetration = 0.0
    for e in vals_b:
        if lo < e < hi:
            penetration = max(penetration, min(float(e) - lo, hi - float(e)))
    report.conclusions.append(
        ConclusionCheck(
            "perturbed-gap-free", penetration <= cfg.tols.gap_tol * scale_b, penetration
        )
    )

    split_a = split(a_m, gamma, cfg.tols)
    split_b = split(b_m, gamma, cfg.tols)
    report.conclusions.append(
        ConclusionCheck(
            "dim-equality",
            split_a.dim_plus == split_b.dim_plus,
            float(abs(split_a.dim_plus - split_b.dim_plus)),
        )
    )
    _battery(report, a_m, b_m, gamma, cfg)
    return report


# ---------------------------------------------------------------------------
# Commutator machinery of the graph-norm route.

def check_commutator_bounds(a, v, gamma: float, cfg: VerifyConfig) -> TheoremReport:
    """Commutator identity for the plus-side overlap, the spectral-radius
    bound, and the two overlap-threshold gates for non-infinitesimal slopes
    (the gates are recorded, not asserted)."""
    report = TheoremReport(theorem_id="specrad")
    a_m = as_symmatrix(a)
    v_m = as_symmatrix(v)
    b_m = a_m + v_m
    split_a = split(a_m, gamma, cfg.tols)
    split_b = split(b_m, gamma, cfg.tols)
    wp = split_a.basis_p
    qm = split_b.Pm
    va = as_array(v_m)

    s_hat = wp.T @ qm @ wp
    s_hat = 0.5 * (s_hat + s_hat.T)
    lam_hat = wp.T @ (as_array(a_m) - gamma * np.eye(split_a.n)) @ wp
    lam_hat = 0.5 * (lam_hat + lam_hat.T)
    k_hat = wp.T @ (qm @ va - va @ qm) @ wp

    comm_res = spectral_norm(lam_hat @ s_hat - s_hat @ lam_hat - k_hat, cfg.tols)
    scale = (1.0 + _norm(a_m, cfg) + _norm(v_m, cfg))
    report.conclusions.append(
        ConclusionCheck("commutator-identity", comm_res <= cfg.tols.bd_tol * scale, comm_res)
    )

    s_vals = eigvals_sym(SymMatrix.from_entries(s_hat), cfg.tols)
    spec_rad = max(abs(float(s_vals[0])), abs(float(s_vals[-1])))
    norm_s = spectral_norm(s_hat, cfg.tols)
    beta = min_operator_bound_a(k_hat, lam_hat, cfg.small_b, cfg.tols)
    report.extras["spectral_radius"] = spec_rad
    report.extras["overlap_norm"] = norm_s
    report.conclusions.append(
        ConclusionCheck(
            "spectral-radius-bound",
            spec_rad <= norm_s + beta.b + 1e-9,
            spec_rad - (norm_s + beta.b),
        )
    )
    report.notes.append(
        "the compressed overlap is symmetric, so its spectral radius equals its "
        "norm; the commutator slope bound is slack by construction in finite dimension"
    )

    pq = spectral_norm(split_a.Pp @ qm, cfg.tols)
    b_star = cfg.small_b
    thr1 = (1.0 - 2.0 * b_star - b_star**2) / (1.0 - b_star**2)
    rb_t = min_operator_bound_a(v_m, _shifted(b_m, gamma), cfg.small_b, cfg.tols)
    thr2 = 1.0 - 2.0 * rb_t.b
    report.extras["overlap_gates"] = {
        "plus_minus_overlap": pq,
        "slope_vs_reference": b_star,
        "threshold_reference": thr1,
        "gate_reference_open": bool(pq < thr1),
        "slope_vs_perturbed": rb_t.b,
        "threshold_perturbed": thr2,
        "gate_perturbed_open": bool(pq < thr2),
    }
    return report


# ---------------------------------------------------------------------------
# Overlap/bijectivity conditions of the abstract principle.

def check_overlap_conditions(a, b, gamma: float, cfg: VerifyConfig) -> TheoremReport:
    """Bijectivity margin of the plus-side overlap, the Neumann-series lower
    bound for it, and the weighted overlap quantities (reported, never
    asserted: no expected truth value on general instances)."""
    report = TheoremReport(theorem_id="overlap")
    a_m = as_symmatrix(a)
    b_m = as_symmatrix(b)
    split_a = split(a_m, gamma, cfg.tols)
    split_b = split(b_m, gamma, cfg.tols)
    wp = split_a.basis_p

    t_hat = wp.T @ split_b.Pp @ wp
    t_hat = 0.5 * (t_hat + t_hat.T)
    sv_min = math.sqrt(max(float(eigvals_sym(SymMatrix.from_entries(t_hat @ t_hat), cfg.tols)[0]), 0.0))
    report.extras["bijectivity_margin"] = sv_min

    pq = spectral_norm(split_a.Pp @ split_b.Pm, cfg.tols)
    report.extras["plus_minus_overlap"] = pq
    if pq < 1.0:
        report.conclusions.append(
            ConclusionCheck(
                "neumann-lower-bound", sv_min >= 1.0 - pq - 1e-10, (1.0 - pq) - sv_min
            )
        )
    else:
        report.conclusions.append(ConclusionCheck("neumann-lower-bound", None, None))

    # Weighted overlaps at exponents 1/2 and 1, with weight |A - gamma| + alpha.
    abs_shift = apply_fn(_shifted(a_m, gamma), abs, cfg.tols)
    min_abs = float(eigvals_sym(abs_shift, cfg.tols)[0])
    weights = {}
    alphas = [1.0] if min_abs <= cfg.tols.pd_tol else [0.0, 1.0]
    pq_op = split_a.Pp @ split_b.Pm
    n = split_a.n
    for alpha in alphas:
        wmat = SymMatrix.from_entries(as_array(abs_shift) + alpha * np.eye(n))
        for expo, tag in ((0.5, "half"), (1.0, "one")):
            wpow = apply_fn(wmat, lambda x: x**expo, cfg.tols)
            wneg = apply_fn(wmat, lambda x: x ** (-expo), cfg.tols)
            q_val = spectral_norm(as_array(wpow) @ pq_op @ as_array(wneg), cfg.tols)
            weights[f"alpha_{alpha:g}_exponent_{tag}"] = {
                "value": q_val,
                "below_one": bool(q_val < 1.0),
            }
    report.extras["weighted_overlaps"] = weights
    report.notes.append(
        "weighted overlap gates are reported only; no expected truth value on "
        "general instances"
    )
    return report


# ---------------------------------------------------------------------------
# Fractional-power interpolation (Heinz) inequality.

def check_heinz(l1, l2, s, nu_grid, cfg: VerifyConfig) -> TheoremReport:
    """Interpolated norm bound for fractional powers: from
    ||L2 S x|| <= C ||L1 x|| the bound ||L2^nu S L1^(-nu)|| <= C^nu ||S||^(1-nu)
    follows for nu in [0, 1]; endpoints must agree exactly."""
    report = TheoremReport(theorem_id="heinz")
    l1_m = as_symmatrix(l1)
    l2_m = as_symmatrix(l2)
    s_arr = np.asarray(as_array(s), dtype=np.float64)
    for tag, mat in (("first", l1_m), ("second", l2_m)):
        lam_min = float(eigvals_sym(mat, cfg.tols)[0])
        if lam_min <= cfg.tols.pd_tol:
            raise NotPositiveDefinite(f"{tag} weight not positive definite (min {lam_min:.3e})")

    norm_s = spectral_norm(s_arr, cfg.tols)
    l1_inv = apply_fn(l1_m, lambda x: 1.0 / x, cfg.tols)
    c_const = spectral_norm(as_array(l2_m) @ s_arr @ as_array(l1_inv), cfg.tols)
    report.extras["interpolation_constant"] = c_const
    report.extras["operator_norm"] = norm_s

    heinz_scale = 1.0 + c_const + norm_s
    worst = -math.inf
    values = {}
    for nu in nu_grid:
        nu = float(nu)
        lpow = apply_fn(l2_m, lambda x: x**nu, cfg.tols)
        lneg = apply_fn(l1_m, lambda x: x ** (-nu), cfg.tols)
        val = spectral_norm(as_array(lpow) @ s_arr @ as_array(lneg), cfg.tols)
        bound = (c_const**nu) * (norm_s ** (1.0 - nu))
        values[f"{nu:g}"] = {"value": val, "bound": bound}
        worst = max(worst, val - bound)
        if nu == 0.0:
            report.conclusions.append(
                ConclusionCheck("endpoint-zero", abs(val - norm_s) <= 1e-10, abs(val - norm_s))
            )
        if nu == 1.0:
            report.conclusions.append(
                ConclusionCheck("endpoint-one", abs(val - c_const) <= 1e-10, abs(val - c_const))
            )
    report.extras["interpolation_values"] = values
    report.conclusions.append(
        ConclusionCheck(
            "interpolation-bound", worst <= cfg.tols.heinz_tol * heinz_scale, worst
        )
    )
    return report
