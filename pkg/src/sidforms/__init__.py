"""Sidorenko/common classification, exact solution counting and
counterexample search for systems of linear forms over finite fields."""

from .classify import (
    Certificate,
    Rule,
    TemplateGraph,
    Trilean,
    Verdict,
    classify_single_equation,
    classify_system,
    detect_tree_template,
    is_b_coincidental,
)
from .counting import (
    DeficitReport,
    PointSet,
    SolutionCount,
    complement_identity,
    count_solutions,
    deficits,
    inclusion_exclusion,
    load_point_set,
    partial_density,
    save_point_set,
)
from .field import FieldElem, FieldSpec, character, field_from_order, make_field, trace
from .fourier import (
    SpectralFunction,
    TauReport,
    build_sign_witness,
    round_to_set,
    sum_tau_shortest,
    tau,
    transform,
    twisted_identity,
)
from .kernels import BACKEND
from .linalg import (
    GoodSetReport,
    InducedEquation,
    LinearSystem,
    good_sets,
    induced_equations,
    min_induced_length,
    normalize,
    rank_reduction_amount,
    structural_flags,
)
from .search import SearchConfig, Witness, anneal_search, exhaustive_search, run_search

__version__ = "0.1.0"
