"""Algebraic toolkit for 2d unitary topological modular functors."""
from .curves import CurveDiagram, NormalForm, equal, normal_form, refactor, induced_unitary
from .fusion import Basis, FusionTree, Observable, StandardSurface, TreeShape, dim, enumerate_basis
from .model import AnyonModel, ModelError, builtin, load, save, validate
from .moves import Move, Unitary, braid_generator, compile_word, compose_moves, dehn_twist, f_matrix

__all__ = [
    "AnyonModel", "Basis", "CurveDiagram", "FusionTree", "ModelError", "Move", "NormalForm",
    "Observable", "StandardSurface", "TreeShape", "Unitary", "braid_generator", "builtin",
    "compile_word", "compose_moves", "dehn_twist", "dim", "enumerate_basis", "equal",
    "f_matrix", "induced_unitary", "load", "normal_form", "refactor", "save", "validate",
]
