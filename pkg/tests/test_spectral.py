"""Spectral splits, gap detection, compressions, and graph-operator
geometry of projector pairs."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapmm.config import default_tolerances
from gapmm.errors import (
    GapTooClose,
    GraphUndefined,
    IndexOutOfRange,
    InsideSpectrum,
    NotOrthonormal,
    RankDeficient,
)
from gapmm.minimax import candidate_subspace
from gapmm.spectral import (
    compress,
    find_gap,
    graph_operator,
    part_eigenvalues,
    split,
    verify_graph_identities,
)
from gapmm.symmat import SymMatrix, spectral_norm

TOLS = default_tolerances()


def random_gapped(rng, n, c=-1.0, d=1.0, k_minus=None):
    k_minus = k_minus if k_minus is not None else n // 2
    vals = np.concatenate(
        [rng.uniform(c - 2.0, c, k_minus), rng.uniform(d, d + 2.0, n - k_minus)]
    )
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    return SymMatrix.from_entries(q @ np.diag(vals) @ q.T)


def rotation_pair(theta):
    """Projector pair in 2D: the unperturbed plus side is the first axis,
    the perturbed one is rotated by theta."""
    a = SymMatrix.from_entries(np.diag([1.0, -1.0]))
    c, s = math.cos(theta), math.sin(theta)
    vec = np.array([c, s])
    b = SymMatrix.from_entries(2.0 * np.outer(vec, vec) - np.eye(2))
    return split(a, 0.0), split(b, 0.0)


def test_split_diagonal_examples():
    s = split(np.diag([1.0, -1.0]), 0.0)
    assert np.allclose(s.Pp, np.diag([1.0, 0.0]), atol=1e-14)
    assert np.allclose(s.Pm, np.diag([0.0, 1.0]), atol=1e-14)
    s2 = split(np.diag([5.0, 3.0, -2.0]), 0.0)
    assert s2.dim_plus == 2


def test_split_commutes_with_source():
    rng = np.random.default_rng(0)
    a = random_gapped(rng, 12)
    s = split(a, 0.0)
    assert spectral_norm(s.Pp @ a.entries - a.entries @ s.Pp) <= 1e-10 * (1 + spectral_norm(a))
    assert spectral_norm(s.Pp @ s.Pp - s.Pp) <= TOLS.recon_tol
    assert spectral_norm(s.Pp + s.Pm - np.eye(12)) <= TOLS.recon_tol


def test_split_rejects_near_eigenvalue():
    with pytest.raises(GapTooClose):
        split(np.diag([1.0, -1.0]), 1.0 - 1e-12)


def test_split_zero_gap_tol_boundary_goes_minus():
    s = split(np.diag([2.0, 0.0, -1.0]), 0.0, gap_tol=0.0)
    assert s.dim_plus == 1
    assert s.dim_minus == 2


def test_split_one_sided():
    s = split(np.diag([2.0, 3.0]), 0.0)
    assert s.dim_plus == 2 and s.dim_minus == 0


def test_find_gap_examples():
    w = find_gap(np.diag([1.0, -1.0]), 0.0)
    assert (w.c, w.d) == (-1.0, 1.0)
    w = find_gap(np.diag([2.0, 3.0]), 0.0)
    assert w.c == -math.inf and w.d == 2.0
    w = find_gap(np.diag([-2.0, -3.0]), 0.0)
    assert w.d == math.inf and w.c == -2.0
    with pytest.raises(InsideSpectrum):
        find_gap(np.diag([1.0, -1.0]), 1.0 + 1e-12)


def test_find_gap_matches_sorted_scan():
    rng = np.random.default_rng(1)
    a = random_gapped(rng, 15)
    vals = np.sort(np.linalg.eigvalsh(a.entries))
    w = find_gap(a, 0.0)
    assert w.c == pytest.approx(vals[vals <= 0.0].max(), abs=1e-12)
    assert w.d == pytest.approx(vals[vals > 0.0].min(), abs=1e-12)


def test_compress_examples():
    b = np.diag([1.0, 2.0, 3.0])
    assert np.allclose(compress(b, np.eye(3)), b, atol=0)
    w = np.eye(3)[:, :2]
    assert np.allclose(compress(b, w), np.diag([1.0, 2.0]), atol=0)
    with pytest.raises(NotOrthonormal):
        compress(b, 2.0 * np.eye(3))


def test_compress_own_split_reproduces_upper_eigenvalues():
    rng = np.random.default_rng(2)
    b = random_gapped(rng, 10)
    s = split(b, 0.0)
    comp_vals = np.sort(np.linalg.eigvalsh(compress(b, s.basis_p)))
    all_vals = np.sort(np.linalg.eigvalsh(b.entries))
    assert np.abs(comp_vals - all_vals[all_vals > 0.0]).max() <= 1e-10 * (1 + spectral_norm(b))


def test_part_eigenvalues_examples():
    b = SymMatrix.from_entries(np.diag([5.0, 2.0, -1.0]))
    s = split(b, 0.0)
    assert part_eigenvalues(b, s, 1) == pytest.approx(2.0, abs=1e-12)
    assert part_eigenvalues(b, s, 2) == pytest.approx(5.0, abs=1e-12)
    with pytest.raises(IndexOutOfRange):
        part_eigenvalues(b, s, 3)


def test_part_eigenvalues_sorted_oracle():
    rng = np.random.default_rng(3)
    b = random_gapped(rng, 14)
    s = split(b, 0.0)
    vals = np.sort(np.linalg.eigvalsh(b.entries))
    below = int((vals <= 0.0).sum())
    for k in range(1, s.dim_plus + 1):
        assert part_eigenvalues(b, s, k) == pytest.approx(vals[below + k - 1], rel=1e-10)


def test_graph_operator_identity_pair():
    rng = np.random.default_rng(4)
    a = random_gapped(rng, 8)
    s = split(a, 0.0)
    g = graph_operator(s, s)
    assert g.dist <= 1e-12
    assert spectral_norm(g.X) <= 1e-10
    assert spectral_norm(g.Y) <= 1e-10


def test_graph_operator_rotation_closed_form():
    theta = 0.3
    sa, sb = rotation_pair(theta)
    g = graph_operator(sa, sb)
    assert g.dist == pytest.approx(math.sin(theta), abs=1e-12)
    # X is 1x1 in the reduced bases; the graph slope is tan(theta) up to the
    # sign of the basis vectors.
    assert abs(g.X[0, 0]) == pytest.approx(math.tan(theta), abs=1e-12)
    assert g.normX == pytest.approx(math.tan(theta), abs=1e-12)
    rep = verify_graph_identities(g, sa, sb)
    assert rep.max_residual <= 1e-12


def test_graph_operator_undefined_at_perpendicular():
    sa, sb = rotation_pair(math.pi / 2)
    with pytest.raises(GraphUndefined):
        graph_operator(sa, sb)


def test_candidate_rank_deficient_near_perpendicular():
    a = SymMatrix.from_entries(np.diag([1.0, -1.0]))
    theta = math.pi / 2 - 1e-12
    c, s = math.cos(theta), math.sin(theta)
    vec = np.array([c, s])
    b = SymMatrix.from_entries(2.0 * np.outer(vec, vec) - np.eye(2))
    sa, sb = split(a, 0.0), split(b, 0.0)
    with pytest.raises(RankDeficient):
        candidate_subspace(b, sa, sb, 1)


def test_graph_identities_random():
    rng = np.random.default_rng(5)
    a = random_gapped(rng, 20)
    sa = split(a, 0.0)
    v = rng.standard_normal((20, 20)) * 0.15
    b = SymMatrix.from_entries(a.entries + v + v.T)
    sb = split(b, 0.0)
    g = graph_operator(sa, sb)
    rep = verify_graph_identities(g, sa, sb)
    assert rep.holds, (rep.max_residual, rep.bound)
    # Reconstruction bound from the identity report covers the block formula.
    assert rep.repr_first <= 1e-9
    assert rep.repr_second <= 1e-9


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(6, 16))
def test_split_trace_counts_eigenvalues(seed, n):
    rng = np.random.default_rng(seed)
    a = random_gapped(rng, n)
    s = split(a, 0.0)
    tr = float(np.trace(s.Pp))
    count = int((np.linalg.eigvalsh(a.entries) > 0.0).sum())
    assert abs(tr - round(tr)) <= 1e-8
    assert round(tr) == count == s.dim_plus


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_norm_identity_and_overlap_inequality(seed):
    rng = np.random.default_rng(seed)
    a = random_gapped(rng, 12)
    sa = split(a, 0.0)
    v = rng.standard_normal((12, 12)) * 0.2
    b = SymMatrix.from_entries(a.entries + v + v.T)
    sb = split(b, 0.0)
    dist = spectral_norm(sa.Pp - sb.Pp)
    if dist >= 1.0 - 1e-8:
        return
    g = graph_operator(sa, sb)
    assert abs(g.dist - g.normX / math.sqrt(1.0 + g.normX**2)) <= 1e-9
    # The plus-minus overlap never exceeds the projector distance.
    assert spectral_norm(sa.Pp @ sb.Pm) <= dist + 1e-12
