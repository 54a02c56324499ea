from .alphabet import HALF, ZERO_ONE, Alphabet, AlphabetError, Assignment, fmt_rational, parse_rational
from .check import CheckResult, PartialAssignment, ValueOutsideAlphabet, check_assignment
from .fstab import HalfIntegralityReport, half_integrality_probe, tight_subset_vertices
from .lp import (Extremum, FeasibilityResult, InfeasibleSystem, LinearSystem, lp_extremize,
                 lp_feasible, system_from_graph)
from .oracle import TooLarge, exhaustive_oracle
from .search import (KERNEL, Budget, PinError, PropagationTrace, SolveResult, compile_graph,
                     propagation_trace, search_assignment)

__all__ = [
    "Alphabet", "AlphabetError", "Assignment", "Budget", "CheckResult", "Extremum",
    "FeasibilityResult", "HALF", "HalfIntegralityReport", "InfeasibleSystem", "KERNEL",
    "LinearSystem", "PartialAssignment", "PinError", "PropagationTrace", "SolveResult",
    "TooLarge", "ValueOutsideAlphabet", "ZERO_ONE", "check_assignment", "compile_graph",
    "exhaustive_oracle", "fmt_rational", "half_integrality_probe", "lp_extremize",
    "lp_feasible", "parse_rational", "propagation_trace", "search_assignment",
    "system_from_graph", "tight_subset_vertices",
]
