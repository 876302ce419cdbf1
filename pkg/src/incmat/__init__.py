"""Exact ranks of subset and subspace inclusion matrices, and how those
ranks survive removing rows.

The package has three layers:

* ``fields`` and ``linalg``: small exact fields (rationals, prime fields,
  prime-power extensions) and exact rank/kernel/RREF over them.
* ``sets`` and ``qpaths``/``qrank``: the combinatorial objects. Inclusion
  matrices of r-subsets vs s-subsets of an n-element ground set, their
  subspace analogues over GF(q), rank formulas, nested bases, lattice-path
  codings of subspaces, and certificate searches for rank-preserving
  removals.
* ``harness``: a CLI, grid sweeps with JSON/CSV reports, and a self-check
  suite (``incmat verify``).
"""
from .fields import (
    CharacterCtx,
    FieldCtx,
    FieldSpec,
    RATIONALS,
    find_root_of_unity,
    ground_field,
    make_character_ctx,
    make_field,
    parse_field,
    smallest_character_host,
)
from .linalg import (
    ExactMatrix,
    SubspaceBasis,
    entry_budget_guard,
    in_column_space,
    intersect,
    kernel_basis,
    rank,
    read_matrix,
    row_space_basis,
    write_matrix,
)
from .report import ResilienceReport
from .sets import (
    PermCert,
    SetFamily,
    Subset,
    bier_basis_matrix,
    bier_identity_residual,
    bier_vector,
    binomial,
    bracket,
    build_w,
    diagonal_form_check,
    find_sigma,
    frankl_rank,
    full_rank_sets,
    full_rank_tuples,
    k_subsets,
    lovasz_x,
    m_parameter,
    shadow,
    verify_set_resilience,
    wilson_rank,
)
from .qpaths import (
    MINUS,
    OUTSIDE,
    PLUS,
    LatticePath,
    QFamily,
    SubspaceCode,
    box_count,
    classify,
    count_good,
    decode_subspace,
    encode_subspace,
    enumerate_paths,
    enumerate_subspaces,
    gaussian_binomial,
    is_good,
    leading_term,
    subspace_index_map,
)
from .qrank import (
    GLCert,
    build_wq,
    e_vector,
    find_g,
    fy_rank,
    specht_dimension,
    subspace_contains,
    u_subspace,
    up_space_avoids_plus_block,
    up_vector,
    verify_q_resilience,
    w_chain_dims,
)
from .harness import (
    ExperimentConfig,
    RunSummary,
    cli_main,
    read_q_family,
    read_set_family,
    run_sweep,
    run_verify,
    summary_to_json_dict,
    write_csv_report,
    write_json_report,
    write_q_family,
    write_set_family,
)

__version__ = "0.1.0"

__all__ = [
    "CharacterCtx", "FieldCtx", "FieldSpec", "RATIONALS",
    "find_root_of_unity", "ground_field", "make_character_ctx", "make_field",
    "parse_field", "smallest_character_host",
    "ExactMatrix", "SubspaceBasis", "entry_budget_guard", "in_column_space",
    "intersect", "kernel_basis", "rank", "read_matrix", "row_space_basis",
    "write_matrix",
    "ResilienceReport",
    "PermCert", "SetFamily", "Subset", "bier_basis_matrix",
    "bier_identity_residual", "bier_vector", "binomial", "bracket", "build_w",
    "diagonal_form_check", "find_sigma", "frankl_rank", "full_rank_sets",
    "full_rank_tuples", "k_subsets", "lovasz_x", "m_parameter", "shadow",
    "verify_set_resilience", "wilson_rank",
    "MINUS", "OUTSIDE", "PLUS", "LatticePath", "QFamily", "SubspaceCode",
    "box_count", "classify", "count_good", "decode_subspace",
    "encode_subspace", "enumerate_paths", "enumerate_subspaces",
    "gaussian_binomial", "is_good", "leading_term", "subspace_index_map",
    "GLCert", "build_wq", "e_vector", "find_g", "fy_rank",
    "specht_dimension", "subspace_contains",
    "u_subspace", "up_space_avoids_plus_block", "up_vector",
    "verify_q_resilience", "w_chain_dims",
    "ExperimentConfig", "RunSummary", "cli_main", "read_q_family",
    "read_set_family", "run_sweep", "run_verify", "summary_to_json_dict",
    "write_csv_report", "write_json_report", "write_q_family",
    "write_set_family",
]
