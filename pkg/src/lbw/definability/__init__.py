from .detect import Detection, binary_terms, detect_protoalgebraic, detect_protoconjunction, detect_protodisjunction
from .hierarchy import LEVELS, Bounds, HierarchyReport, LevelStatus, classify
from .operators import (
    OperatorProfile,
    check_completely_order_reflecting,
    check_injective,
    check_order_reflecting,
    check_truth_implicit,
    check_truth_small,
    naive_completely_order_reflecting,
    operator_profile,
)
from .synthesis import SynthesisResult, synthesize_translation
from .translation import Check, Translation, check_in_reduction, defines_truth, expand_with_constant, solutions

__all__ = [
    "Translation", "Check", "solutions", "defines_truth", "check_in_reduction", "expand_with_constant",
    "SynthesisResult", "synthesize_translation",
    "OperatorProfile", "operator_profile", "check_injective", "check_order_reflecting",
    "check_completely_order_reflecting", "naive_completely_order_reflecting",
    "check_truth_implicit", "check_truth_small",
    "Detection", "binary_terms", "detect_protodisjunction", "detect_protoconjunction", "detect_protoalgebraic",
    "LEVELS", "Bounds", "LevelStatus", "HierarchyReport", "classify",
]
