"""Exact curvature computations on Hermitian and para-Hermitian vector spaces."""

from __future__ import annotations

from .errors import ParagrayError
from .exactnum import GaussRational, Matrix, Subspace, rational
from .model import Kind, Structure, standard_hermitian, standard_para_hermitian

__version__ = "0.1.0"

__all__ = [
    "GaussRational",
    "Kind",
    "Matrix",
    "ParagrayError",
    "Structure",
    "Subspace",
    "rational",
    "standard_hermitian",
    "standard_para_hermitian",
    "__version__",
]
