"""Exact Weingarten functions, Weingarten graphs and the Weingarten process.

The unitary Weingarten function is computed two independent ways (Gram matrix
inversion and the loop-equation recursion), expanded as a series over paths in
the Weingarten graph, sampled through the Weingarten process, and checked
against explicit large-N bounds in exact arithmetic.
"""

from .exact import (
    CapExceededError,
    WgTable,
    wg_full_cycle,
    wg_orthogonal_gram,
    wg_orthogonal_series,
    wg_symplectic,
    wg_unitary_gram,
    wg_unitary_recursion,
    wg_unitary_series,
)
from .graph import (
    EnumerationCapError,
    count_paths_orthogonal,
    count_paths_unitary,
    count_paths_unitary_class,
)
from .linalg import SingularMatrixError
from .pairing import Pairing, all_pairings
from .perm import ParseError, Partition, Permutation, catalan, cycle_type, moebius, partitions
from .process import ProcessTrace, run_wp_orthogonal, run_wp_unitary
from .rng import Stream

__all__ = [
    "CapExceededError",
    "EnumerationCapError",
    "Pairing",
    "ParseError",
    "Partition",
    "Permutation",
    "ProcessTrace",
    "SingularMatrixError",
    "Stream",
    "WgTable",
    "all_pairings",
    "catalan",
    "count_paths_orthogonal",
    "count_paths_unitary",
    "count_paths_unitary_class",
    "cycle_type",
    "moebius",
    "partitions",
    "run_wp_orthogonal",
    "run_wp_unitary",
    "wg_full_cycle",
    "wg_orthogonal_gram",
    "wg_orthogonal_series",
    "wg_symplectic",
    "wg_unitary_gram",
    "wg_unitary_recursion",
    "wg_unitary_series",
]
