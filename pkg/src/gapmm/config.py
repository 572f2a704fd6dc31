"""Default tolerances and run configuration.

All defaults can be scaled globally through the ``GAPMM_TOL_SCALE``
environment variable (a multiplicative factor applied to every tolerance).
Scale-dependent tolerances are stored as bare factors here; call sites
multiply by the relevant ``(1 + norm)`` scale.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace


def _env_scale() -> float:
    raw = os.environ.get("GAPMM_TOL_SCALE")
    if raw is None:
        return 1.0
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"GAPMM_TOL_SCALE must be a float, got {raw!r}") from exc
    if value <= 0.0:
        raise ValueError("GAPMM_TOL_SCALE must be positive")
    return value


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances; see the per-field comments for the scaling
    convention applied at the call sites."""

    recon_tol: float = 1e-10     # times (1 + ||M||)
    ortho_tol: float = 1e-10     # absolute, max-norm of Q^T Q - I
    form_tol: float = 1e-9       # times (1 + scale of the operators involved)
    gap_tol: float = 1e-8        # times (1 + ||A||)
    graph_tol: float = 1e-8      # absolute, distance of ||P-Q|| from 1
    sv_tol: float = 1e-10        # absolute, smallest singular value gate
    mm_tol: float = 1e-7         # times (1 + |direct value|)
    neg_tol: float = 1e-10       # times (1 + ||B||)
    od_tol: float = 1e-10        # times (1 + ||B||)
    bd_tol: float = 1e-9         # times (1 + ||A|| + ||V||)(1 + ||Y||)
    heinz_tol: float = 1e-9      # times (1 + C + ||S||)
    pd_tol: float = 1e-10        # absolute
    jacobi_tol_factor: float = 1e-14   # off-diagonal Frobenius factor
    jacobi_max_sweeps: int = 100

    def scaled(self, factor: float) -> "Tolerances":
        if factor == 1.0:
            return self
        float_fields = {
            name: getattr(self, name) * factor
            for name in (
                "recon_tol", "ortho_tol", "form_tol", "gap_tol", "graph_tol",
                "sv_tol", "mm_tol", "neg_tol", "od_tol", "bd_tol",
                "heinz_tol", "pd_tol",
            )
        }
        return replace(self, **float_fields)


def default_tolerances() -> Tolerances:
    """Tolerances with the ``GAPMM_TOL_SCALE`` environment factor applied."""
    return Tolerances().scaled(_env_scale())


@dataclass(frozen=True)
class VerifyConfig:
    """Knobs for the minimax engine and the theorem checkers."""

    tols: Tolerances = field(default_factory=default_tolerances)
    probe_trials: int = 500
    refine_rounds: int = 200
    k_max: int = 5
    seed: int = 0
    # Relative-bound slope used where a certified (a, b) pair is needed and
    # the caller did not fix b.  Small b documents the finite-dimensional
    # collapse of "relative bound" hypotheses.
    small_b: float = 1e-3
    form_b: float = 0.25

    def with_tol_scale(self, factor: float) -> "VerifyConfig":
        return replace(self, tols=self.tols.scaled(factor))
