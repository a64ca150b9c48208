"""Finite monoids, bimodules, bar resolutions and Segal checks at desk scale."""
from .errors import BudgetExceeded, CheckFailed, SegalHHError, StructuralError, TruncationError, Unsupported
from .monoid import FiniteMonoid, centre, corpus, nerve, validate_monoid
from .simplicial import FinSimplicialSet, SimplicialMap, pi0, validate_identities
from .bimodule import Bimodule, free_bimodule, regular, tensor_over_A
from .bar import augmentation_equivalence, diagonal, lift_through_resolution
from .hochschild import centre_comparison, eckmann_hilton_report, hh_pi0, mapping_space
from .segal import SegalObject, check_2monoid, check_segal, nerve_strict_check

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "CheckFailed", "SegalHHError", "StructuralError", "TruncationError", "Unsupported",
    "FiniteMonoid", "centre", "corpus", "nerve", "validate_monoid",
    "FinSimplicialSet", "SimplicialMap", "pi0", "validate_identities",
    "Bimodule", "free_bimodule", "regular", "tensor_over_A",
    "augmentation_equivalence", "diagonal", "lift_through_resolution",
    "centre_comparison", "eckmann_hilton_report", "hh_pi0", "mapping_space",
    "SegalObject", "check_2monoid", "check_segal", "nerve_strict_check",
]
