"""Exact combinatorics of tree lattices: free groups acting on homogeneous trees,
their Cuntz-Krieger data, boundary measure cocycle and ratio-set type."""

from __future__ import annotations

from .boundary import (ConsistencyError, PairingTable, RatioSetReport, delta_spectrum,
                       full_group_pairing, radon_nikodym, ratio_set_classification)
from .completion import CycleCompleter, attach_loop, complete_to_equal_cycles
from .covering import (ORIGIN, Ray, SpanningData, TreeVertex, reduce_word, tree_distance)
from .cylinders import CylinderAlgebra, CylinderSet, cylinder_measure, pi_vertex
from .graph import (CircuitBudgetExceeded, Graph, GraphError, InapplicableError, ParseError,
                    covolume_identity_check, graph_invariants, odd_circuit, parse_graph,
                    validate_lattice_input)
from .ktheory import admissibility, ck_matrix, k_groups, smith_normal_form, verify_ck_partition

__version__ = "0.1.0"

__all__ = [
    "CircuitBudgetExceeded", "ConsistencyError", "CycleCompleter", "CylinderAlgebra",
    "CylinderSet", "Graph", "GraphError", "InapplicableError", "ORIGIN", "PairingTable",
    "ParseError", "RatioSetReport", "Ray", "SpanningData", "TreeVertex", "admissibility",
    "attach_loop", "ck_matrix", "complete_to_equal_cycles", "covolume_identity_check",
    "cylinder_measure", "delta_spectrum", "full_group_pairing", "graph_invariants",
    "k_groups", "odd_circuit", "parse_graph", "pi_vertex", "radon_nikodym",
    "ratio_set_classification", "reduce_word", "smith_normal_form", "tree_distance",
    "validate_lattice_input", "verify_ck_partition",
]
