"""Ranking functions, conditional structures and conditional preservation.

Set ``CONDPRES_BACKEND=numpy`` to bypass the numba kernels.
"""

from ._kernels import set_backend
from .construct import (
    SolverError,
    SolverOptions,
    brute_force_constants,
    c_representation,
    c_revision,
    compose,
    solve_constants,
)
from .indifference import (
    ConstantVector,
    decompose,
    is_indifferent,
    is_revision_indifferent,
    kernel_vanishing_check,
    satisfies_conditional_preservation,
)
from .logic import (
    Conditional,
    KnowledgeBase,
    Signature,
    parse_conditional,
    parse_formula,
    parse_kb,
)
from .postulates import check_cr, probe_set
from .ranking import INF, OCF, accepts, rank_formula
from .structures import kernel_basis, sigma, structure_table
from .zsystems import InconsistentKBError, kappa_star, kappa_z, kappa_z_c, z_ranks, z_star

__version__ = "0.1.0"

__all__ = [
    "INF", "OCF", "Conditional", "ConstantVector", "InconsistentKBError", "KnowledgeBase",
    "Signature", "SolverError", "SolverOptions", "accepts", "brute_force_constants",
    "c_representation", "c_revision", "check_cr", "compose", "decompose", "is_indifferent",
    "is_revision_indifferent", "kappa_star", "kappa_z", "kappa_z_c", "kernel_basis",
    "kernel_vanishing_check", "parse_conditional", "parse_formula", "parse_kb", "probe_set",
    "rank_formula", "satisfies_conditional_preservation", "set_backend", "sigma",
    "solve_constants", "structure_table", "z_ranks", "z_star",
]
