"""Exact optimality certificates for symmetric rendezvous search on K3."""

from .algebra import (
    Eisenstein,
    EisVector,
    PathVector,
    apply_permutation,
    apply_symmetry,
    char_transform,
    conj_transform,
    decode_path,
    dense_character_matrix,
    encode_path,
    kron_vec,
    real_spectrum,
)
from .certificate import (
    a_value,
    certify,
    r_vector,
    spectrum_recursive,
    t_closed_forms,
    verify_domination,
    verify_spectrum,
    w_value,
    x_vector,
)
from .game import (
    MeetingModel,
    aw_distribution,
    b_vector,
    m_vector,
    matvec_m,
    parametric_aw_value,
    quad_form_m,
    tail_prob,
)
from .kn import kn_aw_evaluate, kn_aw_optimize
from .relaxation import (
    build_dual_lp,
    build_primal_lp,
    export_sdpa,
    verify_feasible_bound,
)
from .lp import solve_lp_exact
from .search import SearchConfig, search_tail

__version__ = "0.1.0"

__all__ = [
    "EisVector",
    "Eisenstein",
    "MeetingModel",
    "PathVector",
    "SearchConfig",
    "a_value",
    "apply_permutation",
    "apply_symmetry",
    "aw_distribution",
    "b_vector",
    "build_dual_lp",
    "build_primal_lp",
    "certify",
    "char_transform",
    "conj_transform",
    "decode_path",
    "dense_character_matrix",
    "encode_path",
    "export_sdpa",
    "kn_aw_evaluate",
    "kn_aw_optimize",
    "kron_vec",
    "m_vector",
    "matvec_m",
    "parametric_aw_value",
    "quad_form_m",
    "r_vector",
    "real_spectrum",
    "search_tail",
    "solve_lp_exact",
    "spectrum_recursive",
    "t_closed_forms",
    "tail_prob",
    "verify_domination",
    "verify_feasible_bound",
    "verify_spectrum",
    "w_value",
    "x_vector",
]
