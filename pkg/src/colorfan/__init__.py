"""Colored fans of partitioned sets, exact divisor degrees and independence complex volumes."""

from .chow import Divisor, convert, degree_product, restrict_to_boolean, sum_of_h, verify_theorem_A
from .errors import BudgetExceeded, ColorfanError, HypothesisViolated, InputError, InternalConsistencyError
from .fan import Fan, WeightedCycle, build_fan, check_balancing, check_unimodular
from .geometry import ExactPolytope, ipc_volume, ipc_volume_via_transversals, normalized_volume
from .ground import GroundSet, enumerate_colored_sets, enumerate_max_chains, transversal_count
from .harness import VerificationReport, run_suite, verify_a, verify_b
from .multimatroid import (
    RankFunction,
    check_multimatroid_axioms,
    check_R_axioms,
    cubicality,
    divisor_of,
    random_R_multimatroid,
)

__all__ = [
    "BudgetExceeded",
    "ColorfanError",
    "Divisor",
    "ExactPolytope",
    "Fan",
    "GroundSet",
    "HypothesisViolated",
    "InputError",
    "InternalConsistencyError",
    "RankFunction",
    "VerificationReport",
    "WeightedCycle",
    "build_fan",
    "check_R_axioms",
    "check_balancing",
    "check_multimatroid_axioms",
    "check_unimodular",
    "convert",
    "cubicality",
    "degree_product",
    "divisor_of",
    "enumerate_colored_sets",
    "enumerate_max_chains",
    "ipc_volume",
    "ipc_volume_via_transversals",
    "normalized_volume",
    "random_R_multimatroid",
    "restrict_to_boolean",
    "run_suite",
    "sum_of_h",
    "transversal_count",
    "verify_a",
    "verify_b",
    "verify_theorem_A",
]
