"""S-boxes from orthogonal cellular automata.

Exhaustive search over pairs of bipermutive CA rules, nonlinearity of the
resulting superposition S-boxes, and classification of their linear
components spaces as polynomial codes.
"""

from .boolfun import (
    LocalRule,
    TruthTable,
    algebraic_degree,
    bipermutive_decompose,
    bipermutive_from_generating,
    is_balanced,
    mobius_transform,
    nonlinearity,
    truth_table_from_wolfram,
    walsh_transform,
)
from .errors import CheckpointError, DomainError, ResourceError
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CheckpointError",
    "DomainError",
    "LocalRule",
    "ResourceError",
    "TruthTable",
    "algebraic_degree",
    "bipermutive_decompose",
    "bipermutive_from_generating",
    "is_balanced",
    "mobius_transform",
    "nonlinearity",
    "truth_table_from_wolfram",
    "walsh_transform",
]
