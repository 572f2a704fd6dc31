"""Perturbation decompositions and certified relative bounds.

Positive/negative parts via functional calculus, diagonal/off-diagonal
parts with respect to a spectral split, and certified (a, b) pairs for
operator bounds ||Vx|| <= a||x|| + b||Ax|| and form bounds
|v[x,x]| <= a||x||^2 + b * (dominating form of A).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Tolerances, default_tolerances
from .errors import DimensionMismatch
from .spectral import SpectralSplit
from .symmat import SymMatrix, apply_fn, as_array, eigvals_sym


@dataclass(frozen=True)
class PerturbationSplit:
    """Positive/negative and diagonal/off-diagonal parts of a perturbation
    relative to a spectral split."""

    Vp: SymMatrix
    Vn: SymMatrix
    Vdiag: SymMatrix
    Voff: SymMatrix
    split: SpectralSplit


@dataclass(frozen=True)
class RelBound:
    """A certified relative-bound pair.

    kind 'operator': V^T V <= a^2 I + b^2 A^2 (PSD certificate), which is
    sufficient for ||Vx|| <= a ||x|| + b ||Ax||.

    kind 'form': -(a I + b At) <= V <= a I + b At where At is the
    nonnegative shifted generator dominating |<x, Ax>| on the declared
    semibounded branch (At = A - m + |m| for the lower branch); with
    ``shifted=False`` the unshifted generator itself is used, certifying
    |<x,Vx>| <= a ||x||^2 + b <x, Ax> (lower) resp. ... - b <x, Ax> (upper).
    """

    a: float
    b: float
    kind: str
    certified: bool = True
    note: str = "certified: sufficient PSD condition"
    branch: str = "lower"
    m: float = 0.0        # semibound of the generator on the declared branch
    shifted: bool = True


def split_pos_neg(v, tols: Tolerances | None = None):
    """Positive and negative parts (both PSD, product zero, difference V)."""
    vp = apply_fn(v, lambda t: max(t, 0.0), tols)
    vn = apply_fn(v, lambda t: max(-t, 0.0), tols)
    return vp, vn


def split_diag_offdiag(v, s: SpectralSplit, tols: Tolerances | None = None):
    """Diagonal and off-diagonal parts relative to the split's projectors."""
    va = as_array(v)
    if va.shape != s.Pp.shape:
        raise DimensionMismatch(f"shape mismatch {va.shape} vs {s.Pp.shape}")
    vdiag = s.Pp @ va @ s.Pp + s.Pm @ va @ s.Pm
    voff = s.Pp @ va @ s.Pm + s.Pm @ va @ s.Pp
    return SymMatrix.from_entries(vdiag), SymMatrix.from_entries(voff)


def perturbation_split(v, s: SpectralSplit, tols: Tolerances | None = None) -> PerturbationSplit:
    vp, vn = split_pos_neg(v, tols)
    vdiag, voff = split_diag_offdiag(v, s, tols)
    return PerturbationSplit(Vp=vp, Vn=vn, Vdiag=vdiag, Voff=voff, split=s)


def min_operator_bound_a(v, a, b: float, tols: Tolerances | None = None) -> RelBound:
    """Smallest a making the PSD certificate V^T V <= a^2 I + b^2 A^2 hold
    for the given slope b.  ``v`` may be any square matrix (the certificate
    uses V^T V only); ``a`` must be symmetric."""
    if b < 0:
        raise ValueError("b must be nonnegative")
    tols = tols or default_tolerances()
    va, aa = np.asarray(as_array(v)), as_array(a)
    if va.shape != aa.shape:
        raise DimensionMismatch(f"shape mismatch {va.shape} vs {aa.shape}")
    gram = va.T @ va
    a2 = aa @ aa
    diff = SymMatrix.from_entries(gram - (b * b) * a2)
    lam_max = float(eigvals_sym(diff, tols)[-1])
    a_val = float(np.sqrt(max(lam_max, 0.0)))
    return RelBound(a=a_val, b=float(b), kind="operator")


def min_form_bound_a(
    v,
    a,
    b: float,
    branch: str = "lower",
    shifted: bool = True,
    tols: Tolerances | None = None,
) -> RelBound:
    """Smallest a for the form certificate at slope b.

    With ``shifted=True`` the generator is replaced by its nonnegative
    shift At = (+-A) - m + |m| (m the semibound of +-A on the declared
    branch), which dominates |<x, Ax>|; the certificate then implies the
    mixed inequality the downstream continuity estimates consume.  With
    ``shifted=False`` the certificate is against the signed generator
    itself.
    """
    if b < 0:
        raise ValueError("b must be nonnegative")
    if branch not in ("lower", "upper"):
        raise ValueError(f"branch must be 'lower' or 'upper', got {branch!r}")
    tols = tols or default_tolerances()
    va, aa = as_array(v), as_array(a)
    if va.shape != aa.shape:
        raise DimensionMismatch(f"shape mismatch {va.shape} vs {aa.shape}")
    base = aa if branch == "lower" else -aa
    base_vals = eigvals_sym(SymMatrix.from_entries(base), tols)
    m_base = float(base_vals[0])
    if shifted:
        gen = base + (abs(m_base) - m_base) * np.eye(base.shape[0])
    else:
        gen = base
    up = float(eigvals_sym(SymMatrix.from_entries(va - b * gen), tols)[-1])
    dn = float(eigvals_sym(SymMatrix.from_entries(-va - b * gen), tols)[-1])
    a_val = max(0.0, up, dn)
    # m reported for the original generator's declared branch.
    m_orig = m_base if branch == "lower" else -m_base
    return RelBound(
        a=a_val,
        b=float(b),
        kind="form",
        branch=branch,
        m=m_orig,
        shifted=shifted,
    )
