"""Exact distributions of polynomials in conditionally free random variables."""

from .errors import (
    CFreeError,
    DomainError,
    InternalError,
    LimitError,
    ParseError,
)
from .ncpoly import NCPolynomial, parse_poly
from .scalars import GaussianRational, format_gaussian, parse_gaussian
from .series import SquareMatrix, TruncSeries
from .twostate import TwoStateSpec, spec_from_json

__version__ = "0.1.0"

__all__ = [
    "CFreeError",
    "DomainError",
    "GaussianRational",
    "InternalError",
    "LimitError",
    "NCPolynomial",
    "ParseError",
    "SquareMatrix",
    "TruncSeries",
    "TwoStateSpec",
    "format_gaussian",
    "parse_gaussian",
    "parse_poly",
    "spec_from_json",
    "__version__",
]
