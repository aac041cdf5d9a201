"""Prime pairs among coset lattice congruence classes: sieve, characters, measurements."""

__version__ = "0.1.0"

from ._accel import BACKEND
from .errors import (
    AdmissibilityError,
    ArgumentError,
    BoundError,
    FitError,
    HypothesisError,
    PreconditionError,
    ResourceError,
)
from .sieve import PrimeTable, PrimePair, build_table, load_table, save_table

__all__ = [
    "BACKEND",
    "PrimeTable",
    "PrimePair",
    "build_table",
    "load_table",
    "save_table",
    "AdmissibilityError",
    "ArgumentError",
    "BoundError",
    "FitError",
    "HypothesisError",
    "PreconditionError",
    "ResourceError",
]
