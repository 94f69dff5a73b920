"""Exact computations with flag varieties over finite fields: twisted Galois
actions, the vector bundle charts of projections along V = V1 ⊕ V2, eigenspace
splitting, fixed-point descent counts and cyclic algebras."""

__version__ = "0.1.0"

from .budget import BudgetExceeded
from .fields import GF, FieldElement, FiniteField, GaloisGroup, make_tower, primitive_root_of_unity
from .flags import Flag, FlagSignature, SplitSignature, enumerate_flags, enumerate_subspaces, gaussian_binomial
from .linalg import Decomposition, Matrix, SemilinearMap, Subspace

__all__ = [
    "BudgetExceeded",
    "Decomposition",
    "FieldElement",
    "FiniteField",
    "Flag",
    "FlagSignature",
    "GF",
    "GaloisGroup",
    "Matrix",
    "SemilinearMap",
    "SplitSignature",
    "Subspace",
    "enumerate_flags",
    "enumerate_subspaces",
    "gaussian_binomial",
    "make_tower",
    "primitive_root_of_unity",
]
