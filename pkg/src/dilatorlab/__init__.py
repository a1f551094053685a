"""Desk-scale laboratory for semidilators, predilators and pseudodilators.

Linear orders with decidable comparison, arity diagrams, semidilators as
denotation systems, the usual combinators, climax probes and toy theories.
"""

from .cnf import Ordinal
from .combinators import (
    arrow_beta_embedding,
    c_arrow,
    c_bigjoin,
    c_integral,
    c_join,
    c_join_embedding,
    c_sum,
    integral_embedding,
    integral_host,
)
from .diagram import (
    ArityDiagram,
    IUDiagram,
    diag_decompose_monotone,
    diag_enumerate,
    diag_from_json,
    diag_induced,
    diag_is_monotone,
    diag_make,
    iu_from_subsets,
)
from .dilator import (
    ConstDilator,
    DilEmbedding,
    FiniteSemidilator,
    IdDilator,
    Semidilator,
    dil_apply,
    dil_check_axioms,
    dil_check_monotone,
    dil_map,
    dil_monotone_counterexample_descent,
    dil_trace_roundtrip,
    emb_apply,
    emb_check,
    finite_semidilator,
)
from .errors import DilatorLabError, InvariantError
from .linorder import (
    Applied,
    Cmp,
    Cnf,
    Finite,
    Inst,
    Omega,
    OmegaStar,
    Restrict,
    Sum,
    lo_cmp,
    lo_descend_search,
    lo_restrict,
    lo_sum,
)
from .pseudo import climax_probe, climax_successor_check, grow_check
from .theorylab import ToyTheory, norm_pi11, ptp_sigma12, s12_probe, tag_terms

__version__ = "0.1.0"
