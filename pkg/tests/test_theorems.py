"""Theorem checkers: hypothesis gating, worked small examples, constructed
violations, and random valid instances."""

import math

import numpy as np
import pytest

from gapmm.config import VerifyConfig
from gapmm.generate import make_instance, make_ordered_pair
from gapmm.spectral import split
from gapmm.symmat import SymMatrix, spectral_norm
from gapmm.theorems import (
    check_bounded_perturbation,
    check_commutator_bounds,
    check_heinz,
    check_negativity,
    check_offdiag_form,
    check_offdiag_operator,
    check_operator_perturbation,
    check_ordering,
    check_overlap_conditions,
    check_relative_perturbation,
    check_scaling_lipschitz,
    check_semibounded_pair,
)

CFG = VerifyConfig(probe_trials=40, seed=77)


def random_gapped(rng, n, c=-1.0, d=1.0):
    k = n // 2
    vals = np.concatenate([rng.uniform(c - 2, c, k), rng.uniform(d, d + 2, n - k)])
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    return SymMatrix.from_entries(q @ np.diag(vals) @ q.T)


# -- negativity -------------------------------------------------------------

def test_negativity_reference_operator():
    rng = np.random.default_rng(0)
    a = random_gapped(rng, 10)
    s = split(a, 0.0)
    holds, margin = check_negativity(a, s, 0.0, CFG)
    assert holds and margin >= 0.0


def test_negativity_offdiagonal_perturbation_preserved():
    rng = np.random.default_rng(1)
    a = random_gapped(rng, 10)
    s = split(a, 0.0)
    r = rng.standard_normal((s.dim_plus, s.dim_minus))
    v = s.basis_p @ r @ s.basis_m.T
    b = SymMatrix.from_entries(a.entries + v + v.T)
    holds, margin = check_negativity(b, s, 0.0, CFG)
    assert holds
    # The perturbation vanishes on the minus side, so the margin matches the
    # unperturbed one.
    _, margin0 = check_negativity(a, s, 0.0, CFG)
    assert margin == pytest.approx(margin0, rel=1e-9)


def test_negativity_fails_with_positive_shift_on_minus_side():
    rng = np.random.default_rng(2)
    a = random_gapped(rng, 10)
    s = split(a, 0.0)
    shift = 10.0 * s.basis_m @ s.basis_m.T
    b = SymMatrix.from_entries(a.entries + shift)
    holds, margin = check_negativity(b, s, 0.0, CFG)
    assert not holds and margin < 0


# -- operator perturbation with overlap hypotheses --------------------------

def test_operator_perturbation_zero():
    rng = np.random.default_rng(3)
    a = random_gapped(rng, 12)
    rep = check_operator_perturbation(a, SymMatrix.from_entries(np.zeros((12, 12))), 0.0, CFG)
    assert rep.hypotheses_hold and rep.ok
    assert all(r.status == "pass" for r in rep.minimax)


def test_operator_perturbation_random_instance():
    inst = make_instance("bounded-pert", 20, 4)
    rep = check_operator_perturbation(inst.a, inst.v, inst.gamma, CFG)
    assert rep.hypotheses_hold and rep.ok


def test_operator_perturbation_gated_when_rotated_past_perpendicular():
    # Perturbation that flips the gap: the perturbed plus subspace becomes
    # orthogonal to the reference one, so the overlap hypothesis fails and
    # every conclusion is not-applicable.
    a = SymMatrix.from_entries(np.diag([1.0, 1.0, -1.0, -1.0]))
    v = SymMatrix.from_entries(np.diag([-3.0, -3.0, 3.0, 3.0]))
    rep = check_operator_perturbation(a, v, 0.0, CFG)
    assert not rep.hypotheses_hold
    assert all(c.holds is None for c in rep.conclusions)
    assert not rep.minimax


# -- semibounded pair --------------------------------------------------------

def test_semibounded_pair_zero():
    rng = np.random.default_rng(5)
    a = random_gapped(rng, 12)
    rep = check_semibounded_pair(a, a, 0.0, CFG)
    assert rep.hypotheses_hold and rep.ok


def test_semibounded_pair_random():
    inst = make_instance("semibounded", 18, 6)
    rep = check_semibounded_pair(inst.a, inst.a + inst.v, inst.gamma, CFG)
    assert rep.hypotheses_hold and rep.ok
    names = [c.name for c in rep.conclusions]
    assert "dim-equality" in names


def test_semibounded_pair_gated():
    a = SymMatrix.from_entries(np.diag([1.0, -1.0]))
    b = SymMatrix.from_entries(np.diag([-1.0, 1.0]))  # orthogonal plus sides
    rep = check_semibounded_pair(a, b, 0.0, CFG)
    assert not rep.hypotheses_hold
    assert all(c.holds is None for c in rep.conclusions)


# -- off-diagonal operator ---------------------------------------------------

def test_offdiag_operator_zero():
    rng = np.random.default_rng(7)
    a = random_gapped(rng, 12)
    rep = check_offdiag_operator(a, SymMatrix.from_entries(np.zeros((12, 12))), 0.0, CFG)
    assert rep.hypotheses_hold and rep.ok
    assert rep.extras["projector_distance"] <= 1e-12


def test_offdiag_operator_2x2_closed_form():
    v_val = 0.5
    a = SymMatrix.from_entries(np.diag([1.0, -1.0]))
    v = SymMatrix.from_entries([[0.0, v_val], [v_val, 0.0]])
    rep = check_offdiag_operator(a, v, 0.0, CFG)
    assert rep.hypotheses_hold and rep.ok
    # Distance of the spectral projectors: sin(theta) with
    # tan(theta) = (sqrt(1 + v^2) - 1)/v, always below sqrt(2)/2.
    t = (math.sqrt(1 + v_val**2) - 1.0) / v_val
    expected = math.sin(math.atan(t))
    assert rep.extras["projector_distance"] == pytest.approx(expected, abs=1e-12)
    assert rep.extras["projector_distance"] <= math.sqrt(2) / 2


def test_offdiag_operator_random_with_sweep():
    inst = make_instance("offdiag-op", 24, 8)
    rep = check_offdiag_operator(inst.a, inst.v, inst.gamma, CFG, t_grid=np.linspace(-1, 1, 7))
    assert rep.hypotheses_hold and rep.ok
    names = [c.name for c in rep.conclusions]
    for expected in ("dim-equality", "projector-distance-bound", "graph-identities",
                     "block-diagonalization", "block-form", "lipschitz"):
        assert expected in names


def test_offdiag_operator_gated_on_diagonal_perturbation():
    rng = np.random.default_rng(9)
    a = random_gapped(rng, 10)
    v = SymMatrix.from_entries(np.eye(10))   # fully diagonal: hypothesis fails
    rep = check_offdiag_operator(a, v, 0.0, CFG)
    assert not rep.hypotheses_hold
    assert all(c.holds is None for c in rep.conclusions)


# -- off-diagonal form --------------------------------------------------------

def test_offdiag_form_t_zero_matches_reference():
    inst = make_instance("offdiag-form", 16, 10)
    rep = check_offdiag_form(inst.a, SymMatrix.from_entries(np.zeros((16, 16))), inst.gamma, CFG)
    assert rep.hypotheses_hold and rep.ok
    for r in rep.minimax:
        assert r.status == "pass"


def test_offdiag_form_random_with_grid():
    inst = make_instance("offdiag-form", 20, 11)
    cfg = CFG
    half = 1.0 / (2.0 * cfg.form_b)
    rep = check_offdiag_form(
        inst.a, inst.v, inst.gamma, cfg, t_grid=np.linspace(-0.9 * half, 0.9 * half, 9)
    )
    assert rep.hypotheses_hold and rep.ok
    names = [c.name for c in rep.conclusions]
    assert "form-lipschitz" in names and "upper-bound" in names
    assert rep.extras["form_lipschitz_pairs"] > 0


def test_offdiag_form_upper_branch():
    rng = np.random.default_rng(12)
    n = 14
    vals = np.concatenate([rng.uniform(-6, -4, 7), rng.uniform(-2, -1.5, 7)])
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    a = SymMatrix.from_entries(q @ np.diag(vals) @ q.T)
    gamma = -3.0
    s = split(a, gamma)
    rmat = rng.standard_normal((s.dim_plus, s.dim_minus))
    v = s.basis_p @ rmat @ s.basis_m.T
    v = SymMatrix.from_entries(v + v.T)
    rep = check_offdiag_form(a, v, gamma, CFG, branch="upper")
    assert rep.hypotheses_hold and rep.ok


# -- bounded perturbation -----------------------------------------------------

def test_bounded_pert_zero_keeps_gap():
    rng = np.random.default_rng(13)
    a = random_gapped(rng, 12)
    rep = check_bounded_perturbation(a, SymMatrix.from_entries(np.zeros((12, 12))), -1.0, 1.0, CFG)
    assert rep.hypotheses_hold and rep.ok


def test_bounded_pert_2x2_worked_example():
    a = SymMatrix.from_entries(np.diag([1.0, -1.0]))
    v = SymMatrix.from_entries(np.diag([0.5, 0.0]))
    rep = check_bounded_perturbation(a, v, -1.0, 1.0, CFG)
    assert rep.hypotheses_hold and rep.ok
    assert rep.extras["part_norms"]["positive"] == pytest.approx(0.5, abs=1e-12)
    assert rep.extras["part_norms"]["negative"] == pytest.approx(0.0, abs=1e-12)
    assert rep.extras["shrunk_interval"] == pytest.approx([-0.5, 1.0], abs=1e-12)
    assert rep.minimax[0].direct == pytest.approx(1.5, abs=1e-12)


def test_bounded_pert_indefinite_beyond_half_gap():
    # Indefinite perturbation with norm in [width/2, width) but part-norm
    # sum still below the gap width: the regime the norm condition adds.
    rng = np.random.default_rng(14)
    n, c, d = 16, -1.0, 1.0
    a = random_gapped(rng, n, c, d)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    vvals = np.linspace(-1.1, 0.7, n)   # parts 1.1 and 0.7: sum 1.8 < 2
    v = SymMatrix.from_entries(q @ np.diag(vvals) @ q.T)
    norm_v = spectral_norm(v)
    assert (d - c) / 2 <= norm_v < d - c
    rep = check_bounded_perturbation(a, v, c, d, CFG)
    assert rep.hypotheses_hold and rep.ok
    sum_parts = rep.extras["part_norms"]["positive"] + rep.extras["part_norms"]["negative"]
    assert sum_parts < d - c


def test_bounded_pert_route_agreement():
    inst = make_instance("bounded-pert", 22, 15)
    rep = check_bounded_perturbation(inst.a, inst.v, inst.c, inst.d, CFG)
    assert rep.hypotheses_hold and rep.ok
    route_checks = [c for c in rep.conclusions if c.name.startswith("route-agreement")]
    assert route_checks
    for c in route_checks:
        assert c.holds and c.residual <= 1e-8 * 10


def test_bounded_pert_rejects_interval_in_spectrum():
    from gapmm.errors import InsideSpectrum

    a = SymMatrix.from_entries(np.diag([0.5, -1.0]))
    with pytest.raises(InsideSpectrum):
        check_bounded_perturbation(a, SymMatrix.from_entries(np.zeros((2, 2))), -0.9, 0.9, CFG)


def test_bounded_pert_gated_when_norm_condition_fails():
    rng = np.random.default_rng(16)
    a = random_gapped(rng, 10)
    v = SymMatrix.from_entries(3.0 * np.eye(10))
    rep = check_bounded_perturbation(a, v, -1.0, 1.0, CFG)
    assert not rep.hypotheses_hold
    assert all(c.holds is None for c in rep.conclusions)


# -- ordering and scaling continuity ------------------------------------------

def test_ordering_equal_perturbations():
    inst = make_instance("bounded-pert", 14, 17, scale=0.4)
    rep = check_ordering(inst.a, inst.v, inst.v, inst.c, inst.d, CFG)
    assert rep.hypotheses_hold and rep.ok


def test_ordering_small_shift():
    inst = make_instance("bounded-pert", 14, 18, scale=0.4)
    eps = 1e-3
    v1 = SymMatrix.from_entries(inst.v.entries + eps * np.eye(14))
    rep = check_ordering(inst.a, inst.v, v1, inst.c, inst.d, CFG)
    assert rep.hypotheses_hold and rep.ok
    # The k-th value moves by at most the shift.
    assert rep.conclusions[-1].residual <= 0.0 + 1e-12


def test_ordering_random_pair():
    pair = make_ordered_pair(16, 19)
    rep = check_ordering(pair.a, pair.v, pair.v1, pair.c, pair.d, CFG)
    assert rep.hypotheses_hold and rep.ok


def test_scaling_lipschitz_2x2_closed_form():
    # Off-diagonal coupling keeps eigenvalue curves sqrt(1 + (t v)^2); the
    # modulus bound with the perturbation norm must hold along the grid.
    v_val = 0.6
    a = SymMatrix.from_entries(np.diag([1.0, -1.0]))
    v = SymMatrix.from_entries([[0.0, v_val], [v_val, 0.0]])
    grid = np.linspace(0.0, 1.0, 21)
    rep = check_scaling_lipschitz(a, v, -1.0, 1.0, grid, CFG)
    assert rep.hypotheses_hold and rep.ok


def test_scaling_lipschitz_random():
    inst = make_instance("bounded-pert", 18, 20)
    rep = check_scaling_lipschitz(inst.a, inst.v, inst.c, inst.d, np.linspace(0, 1, 21), CFG)
    assert rep.hypotheses_hold and rep.ok
    assert rep.extras["dims_constant"]


# -- relative form perturbation ------------------------------------------------

def test_relative_perturbation_zero():
    rng = np.random.default_rng(21)
    n = 12
    vals = np.concatenate([rng.uniform(0.2, 1.0, 6), rng.uniform(2.0, 3.0, 6)])
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    a = SymMatrix.from_entries(q @ np.diag(vals) @ q.T)
    rep = check_relative_perturbation(a, SymMatrix.from_entries(np.zeros((n, n))), 1.0, 2.0, CFG)
    assert rep.hypotheses_hold and rep.ok


def test_relative_perturbation_margin_monotone_in_scale():
    inst = make_instance("unbounded-style", 16, 22)
    b_slope = inst.margins["form_b"]
    margins = []
    for t in (0.2, 0.6, 1.0, 1.4):
        v_t = SymMatrix.from_entries(t * inst.v.entries)
        rep = check_relative_perturbation(
            inst.a, v_t, inst.c, inst.d, CFG, b_slope=b_slope
        )
        margins.append([h.margin for h in rep.hypotheses if h.name == "margin-condition"][0])
    assert all(x >= y - 1e-12 for x, y in zip(margins, margins[1:]))


def test_relative_perturbation_both_branches():
    for branch, seed in (("lower", 23), ("upper", 24)):
        inst = make_instance("unbounded-style", 16, seed, branch=branch)
        rep = check_relative_perturbation(
            inst.a, inst.v, inst.c, inst.d, CFG, branch=branch, b_slope=inst.margins["form_b"]
        )
        assert rep.hypotheses_hold and rep.ok, branch


# -- commutator and overlap sub-reports ----------------------------------------

def test_commutator_zero_perturbation():
    rng = np.random.default_rng(25)
    a = random_gapped(rng, 10)
    rep = check_commutator_bounds(a, SymMatrix.from_entries(np.zeros((10, 10))), 0.0, CFG)
    assert rep.ok
    assert rep.conclusions[0].residual <= 1e-12


def test_commutator_diagonal_perturbation():
    # A perturbation diagonal in the reference eigenbasis commutes with the
    # reference but not with the perturbed projectors.
    rng = np.random.default_rng(26)
    n = 10
    vals = np.concatenate([rng.uniform(-3, -1, 5), rng.uniform(1, 3, 5)])
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    a = SymMatrix.from_entries(q @ np.diag(vals) @ q.T)
    v = SymMatrix.from_entries(q @ np.diag(rng.uniform(-0.3, 0.3, n)) @ q.T)
    rep = check_commutator_bounds(a, v, 0.0, CFG)
    assert rep.ok
    assert rep.conclusions[0].residual <= 1e-10 * (1 + spectral_norm(a))


def test_commutator_random_and_gates():
    inst = make_instance("bounded-pert", 18, 27)
    rep = check_commutator_bounds(inst.a, inst.v, inst.gamma, CFG)
    assert rep.ok
    gates = rep.extras["overlap_gates"]
    assert rep.extras["spectral_radius"] <= rep.extras["overlap_norm"] + 1e-12
    assert 0.0 < gates["threshold_reference"] <= 1.0


def test_overlap_identity_pair():
    rng = np.random.default_rng(28)
    a = random_gapped(rng, 10)
    rep = check_overlap_conditions(a, a, 0.0, CFG)
    assert rep.ok
    assert rep.extras["bijectivity_margin"] == pytest.approx(1.0, abs=1e-10)
    assert rep.extras["plus_minus_overlap"] <= 1e-10


def test_overlap_rotation_closed_form():
    theta = 0.4
    a = SymMatrix.from_entries(np.diag([1.0, -1.0]))
    c, s = math.cos(theta), math.sin(theta)
    vec = np.array([c, s])
    b = SymMatrix.from_entries(2.0 * np.outer(vec, vec) - np.eye(2))
    rep = check_overlap_conditions(a, b, 0.0, CFG)
    assert rep.ok
    assert rep.extras["bijectivity_margin"] == pytest.approx(math.cos(theta) ** 2, abs=1e-12)


def test_overlap_neumann_bound_random():
    inst = make_instance("bounded-pert", 16, 29)
    rep = check_overlap_conditions(inst.a, inst.a + inst.v, inst.gamma, CFG)
    assert rep.ok
    assert rep.extras["bijectivity_margin"] >= 1.0 - rep.extras["plus_minus_overlap"] - 1e-10


# -- fractional-power interpolation ---------------------------------------------

def test_heinz_identity_weights():
    rng = np.random.default_rng(30)
    s = rng.standard_normal((6, 6))
    rep = check_heinz(np.eye(6), np.eye(6), s, [0.0, 0.25, 0.5, 0.75, 1.0], CFG)
    assert rep.ok
    values = rep.extras["interpolation_values"]
    for entry in values.values():
        assert entry["value"] == pytest.approx(entry["bound"], rel=1e-10)


def test_heinz_random_triple():
    rng = np.random.default_rng(31)
    n = 12
    g1, g2 = rng.standard_normal((2, n, n))
    l1 = g1 @ g1.T + 0.5 * np.eye(n)
    l2 = g2 @ g2.T + 0.5 * np.eye(n)
    s = rng.standard_normal((n, n))
    rep = check_heinz(l1, l2, s, np.linspace(0, 1, 11), CFG)
    assert rep.ok
    names = [c.name for c in rep.conclusions]
    assert "endpoint-zero" in names and "endpoint-one" in names


def test_heinz_rejects_indefinite_weight():
    from gapmm.errors import NotPositiveDefinite

    rng = np.random.default_rng(32)
    with pytest.raises(NotPositiveDefinite):
        check_heinz(np.diag([1.0, -1.0]), np.eye(2), rng.standard_normal((2, 2)), [0.5], CFG)
