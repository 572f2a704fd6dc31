"""Numerical laboratory for minimax characterizations of eigenvalues in
spectral gaps of symmetric matrices, with perturbation splittings, graph
subspaces, block diagonalization, certified relative bounds, and a
discretized saddle-point block operator as a worked example."""

__version__ = "0.1.0"

from .backend import BACKEND, jacobi_eigh
from .config import Tolerances, VerifyConfig, default_tolerances
from .symmat import (
    EigenDecomposition,
    QuadraticForm,
    SymMatrix,
    apply_fn,
    check_form_sum,
    eig_sym,
    eigvals_sym,
    form_eval,
    psd_leq,
    read_matrix,
    spectral_norm,
    write_matrix,
)
from .spectral import (
    GapWindow,
    GraphData,
    SpectralSplit,
    compress,
    find_gap,
    graph_operator,
    part_eigenvalues,
    split,
    verify_graph_identities,
)
from .perturb import (
    PerturbationSplit,
    RelBound,
    min_form_bound_a,
    min_operator_bound_a,
    perturbation_split,
    split_diag_offdiag,
    split_pos_neg,
)
from .minimax import (
    MinimaxReport,
    candidate_subspace,
    inner_sup,
    minimax_battery,
    probe,
    refine,
    verify_minimax,
)
from .theorems import (
    ConclusionCheck,
    HypothesisCheck,
    TheoremReport,
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
from .stokes import (
    Grid,
    StokesInstance,
    assemble_stokes,
    build_laplacian,
    check_vstar_continuity,
    laplacian_eigenvalues,
    laplacian_eigenvalues_closed_form,
    measure_div_constant,
    verify_stokes_bounds,
)
from .generate import Instance, make_instance, make_ordered_pair
