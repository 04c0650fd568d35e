"""Decide additive (strategic) separability of a focal player's preferences in
finite normal-form games, with exact representations or balanced-sequence
certificates."""

from .axioms import (
    Axiom,
    AxiomReport,
    BalancedCertificate,
    check_joint_independence,
    check_opponent_independence,
    check_strategic_independence,
    verify_certificate,
)
from .crs import LinearCanonicalForm, NotCRS, NotFactorable, canonicalize_crs, detect_crs
from .game import (
    FullOrder,
    Game,
    PreferenceFamily,
    family_from_utility,
    full_order_from_utility,
    strategically_equivalent,
)
from .generators import GeneratorSpec, generate
from .lp import Dual, FeasibilitySystem, Primal, hadamard_bound, lift_to_integers, solve
from .mixed import BernoulliIndex, Lottery, check_pairwise_marginal_condition, decompose
from .separability import (
    Mode,
    NoneWithinBudget,
    NotSeparable,
    Representation,
    Separable,
    build_full_system,
    build_strategic_system,
    certificate_length_bound,
    decide,
    extract_certificate,
    minimal_certificate,
    verify_representation,
)

__version__ = "0.1.0"

__all__ = [
    "Axiom",
    "AxiomReport",
    "BalancedCertificate",
    "BernoulliIndex",
    "Dual",
    "FeasibilitySystem",
    "FullOrder",
    "Game",
    "GeneratorSpec",
    "LinearCanonicalForm",
    "Lottery",
    "Mode",
    "NoneWithinBudget",
    "NotCRS",
    "NotFactorable",
    "NotSeparable",
    "PreferenceFamily",
    "Primal",
    "Representation",
    "Separable",
    "build_full_system",
    "build_strategic_system",
    "canonicalize_crs",
    "certificate_length_bound",
    "check_joint_independence",
    "check_opponent_independence",
    "check_pairwise_marginal_condition",
    "check_strategic_independence",
    "decide",
    "decompose",
    "detect_crs",
    "extract_certificate",
    "family_from_utility",
    "full_order_from_utility",
    "generate",
    "hadamard_bound",
    "lift_to_integers",
    "minimal_certificate",
    "solve",
    "strategically_equivalent",
    "verify_certificate",
    "verify_representation",
]
