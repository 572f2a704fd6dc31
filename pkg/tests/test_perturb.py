"""Perturbation decompositions and certified relative bounds."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapmm.config import default_tolerances
from gapmm.perturb import (
    min_form_bound_a,
    min_operator_bound_a,
    perturbation_split,
    split_diag_offdiag,
    split_pos_neg,
)
from gapmm.spectral import split
from gapmm.symmat import SymMatrix, spectral_norm

TOLS = default_tolerances()


def random_sym(rng, n):
    m = rng.standard_normal((n, n))
    return SymMatrix.from_entries(0.5 * (m + m.T))


def test_pos_neg_diagonal():
    vp, vn = split_pos_neg(np.diag([2.0, -3.0]))
    assert np.allclose(vp.entries, np.diag([2.0, 0.0]), atol=1e-14)
    assert np.allclose(vn.entries, np.diag([0.0, 3.0]), atol=1e-14)


def test_pos_neg_psd_input():
    rng = np.random.default_rng(0)
    g = rng.standard_normal((5, 5))
    vp, vn = split_pos_neg(g @ g.T)
    assert spectral_norm(vn) <= 1e-10 * (1.0 + spectral_norm(g @ g.T))


def test_pos_neg_residuals():
    rng = np.random.default_rng(1)
    v = random_sym(rng, 9)
    vp, vn = split_pos_neg(v)
    scale = 1.0 + spectral_norm(v)
    assert spectral_norm(vp.entries - vn.entries - v.entries) <= 1e-10 * scale
    assert spectral_norm(vp.entries @ vn.entries) <= 1e-10 * scale**2
    assert np.linalg.eigvalsh(vp.entries).min() >= -1e-10 * scale
    assert spectral_norm(vp) <= spectral_norm(v) + 1e-10
    assert spectral_norm(vn) <= spectral_norm(v) + 1e-10


def test_pos_neg_negation_swaps():
    rng = np.random.default_rng(2)
    v = random_sym(rng, 6)
    vp, vn = split_pos_neg(v)
    wp, wn = split_pos_neg(SymMatrix.from_entries(-v.entries))
    assert np.allclose(wp.entries, vn.entries, atol=1e-12)
    assert np.allclose(wn.entries, vp.entries, atol=1e-12)


def test_diag_offdiag_examples():
    a = SymMatrix.from_entries(np.diag([1.0, -1.0]))
    s = split(a, 0.0)
    v = SymMatrix.from_entries([[1.0, 2.0], [2.0, 3.0]])
    vdiag, voff = split_diag_offdiag(v, s)
    assert np.allclose(vdiag.entries, np.diag([1.0, 3.0]), atol=1e-14)
    assert np.allclose(voff.entries, [[0.0, 2.0], [2.0, 0.0]], atol=1e-14)


def test_diag_offdiag_reconstructs_and_gates():
    rng = np.random.default_rng(3)
    n = 10
    vals = np.concatenate([rng.uniform(-3, -1, 5), rng.uniform(1, 3, 5)])
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    a = SymMatrix.from_entries(q @ np.diag(vals) @ q.T)
    s = split(a, 0.0)
    v = random_sym(rng, n)
    vdiag, voff = split_diag_offdiag(v, s)
    assert spectral_norm(vdiag.entries + voff.entries - v.entries) <= 1e-12 * (1 + spectral_norm(v))
    assert spectral_norm(s.Pp @ voff.entries @ s.Pp) <= 1e-12 * (1 + spectral_norm(v))
    assert spectral_norm(s.Pm @ voff.entries @ s.Pm) <= 1e-12 * (1 + spectral_norm(v))
    # Idempotence: the diagonal part of the diagonal part is itself.
    vdd, vdo = split_diag_offdiag(vdiag, s)
    assert spectral_norm(vdd.entries - vdiag.entries) <= 1e-12 * (1 + spectral_norm(v))
    assert spectral_norm(vdo) <= 1e-12 * (1 + spectral_norm(v))
    ps = perturbation_split(v, s)
    assert spectral_norm(ps.Vp.entries - ps.Vn.entries - v.entries) <= 1e-10 * (1 + spectral_norm(v))


def test_operator_bound_examples():
    rng = np.random.default_rng(4)
    a = random_sym(rng, 6)
    rb = min_operator_bound_a(SymMatrix.from_entries(0.5 * a.entries), a, 0.5)
    assert rb.a <= 1e-7
    v = random_sym(rng, 6)
    rb0 = min_operator_bound_a(v, a, 0.0)
    assert rb0.a == pytest.approx(spectral_norm(v), rel=1e-10)


def test_operator_bound_sampled_certificate():
    rng = np.random.default_rng(5)
    v = random_sym(rng, 8)
    a = random_sym(rng, 8)
    rb = min_operator_bound_a(v, a, 0.3)
    for _ in range(1000):
        x = rng.standard_normal(8)
        lhs = np.linalg.norm(v.entries @ x)
        rhs = rb.a * np.linalg.norm(x) + rb.b * np.linalg.norm(a.entries @ x)
        assert lhs <= rhs + 1e-9 * (1.0 + rhs)


def test_form_bound_examples():
    rng = np.random.default_rng(6)
    a = random_sym(rng, 6)
    rb = min_form_bound_a(np.zeros((6, 6)), a, 0.4)
    assert rb.a == 0.0
    rb1 = min_form_bound_a(np.eye(4), np.eye(4), 0.0)
    assert rb1.a == pytest.approx(1.0, abs=1e-12)


def test_form_bound_sampled_definite():
    rng = np.random.default_rng(7)
    g = rng.standard_normal((8, 8))
    a = SymMatrix.from_entries(g @ g.T + 0.5 * np.eye(8))   # definite: shift-free
    v = random_sym(rng, 8)
    rb = min_form_bound_a(v, a, 0.3)
    assert rb.m > 0 and rb.shifted
    for _ in range(1000):
        x = rng.standard_normal(8)
        lhs = abs(x @ v.entries @ x)
        rhs = rb.a * (x @ x) + rb.b * abs(x @ a.entries @ x)
        assert lhs <= rhs + 1e-9 * (1.0 + rhs)


def test_form_bound_certificate_indefinite_shifted():
    rng = np.random.default_rng(8)
    a = random_sym(rng, 8)
    v = random_sym(rng, 8)
    rb = min_form_bound_a(v, a, 0.5)
    m = float(np.linalg.eigvalsh(a.entries).min())
    shifted = a.entries + (abs(m) - m) * np.eye(8)
    for _ in range(500):
        x = rng.standard_normal(8)
        lhs = abs(x @ v.entries @ x)
        rhs = rb.a * (x @ x) + rb.b * (x @ shifted @ x)
        assert lhs <= rhs + 1e-9 * (1.0 + rhs)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bound_a_nonincreasing_in_b(seed):
    rng = np.random.default_rng(seed)
    v = random_sym(rng, 7)
    a = random_sym(rng, 7)
    slopes = [0.0, 0.1, 0.3, 0.7, 1.2]
    ops = [min_operator_bound_a(v, a, b).a for b in slopes]
    assert all(x >= y - 1e-12 for x, y in zip(ops, ops[1:]))
    forms = [min_form_bound_a(v, a, b).a for b in slopes]
    assert all(x >= y - 1e-12 for x, y in zip(forms, forms[1:]))
