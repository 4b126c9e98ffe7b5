"""Careful synchronization of partial finite automata."""

from .bk import BkInstance, generate_bk, tk_family
from .clusters import (
    Cluster,
    ClusterDecomposition,
    NotTotalError,
    cycle_distance,
    decompose,
    is_one_cluster,
    sync_prerequisites,
)
from .io import PfaDocument, parse_pfa, serialize_pfa, to_dot
from .pfa import Pfa, StateSet, Word, apply_letter, apply_word, is_total, preimage
from .reduction import (
    CnfFormula,
    ReductionOutput,
    assignment_to_word,
    brute_force_sat,
    evaluate,
    extract_assignment,
    full_sync_word,
    parse_dimacs,
    reduce,
    window_check,
    word_to_assignment,
)
from .search import (
    Found,
    LimitExceeded,
    Limits,
    NotSingleton,
    NotSynchronizing,
    SearchLimitError,
    Synchronizing,
    Undefined,
    find_cycle_shrinking_word,
    halving_bound,
    shortest_sync_word,
    shrink_below_half,
    verify_word,
)

__version__ = "0.1.0"
