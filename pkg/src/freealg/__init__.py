"""Exact arithmetic and first-order tooling for free associative algebras."""
from .errors import FreeAlgError
from .ncpoly import NcPoly, parse_poly
from .scalars import FieldElem, FieldSpec
from .tribool import FALSE, TRUE, UNKNOWN, TriBool

__all__ = ["FreeAlgError", "NcPoly", "parse_poly", "FieldElem", "FieldSpec", "TriBool", "TRUE", "FALSE", "UNKNOWN"]
__version__ = "0.1.0"
