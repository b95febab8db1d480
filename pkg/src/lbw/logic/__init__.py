from .calculus import HilbertCalculus, LogicPresentation, Rule, counterexample, matrix_consequence, rule_valid
from .filters import FilterLattice, filter_generate, filter_lattice, is_filter
from .models import modstar, modsuszko
from .proof import ProofStep, derivable, find_countermodel, has_theorems, replay
from .verdict import DERIVED, REFUTED, UNKNOWN, TriStateVerdict

__all__ = [
    "Rule", "HilbertCalculus", "LogicPresentation", "rule_valid", "matrix_consequence", "counterexample",
    "FilterLattice", "filter_generate", "filter_lattice", "is_filter",
    "modstar", "modsuszko",
    "ProofStep", "derivable", "find_countermodel", "has_theorems", "replay",
    "TriStateVerdict", "DERIVED", "REFUTED", "UNKNOWN",
]
