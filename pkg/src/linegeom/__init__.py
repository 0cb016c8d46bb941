"""Lines-and-incidence model of three-dimensional projective space over GF(q)."""

from .audit import run_audit
from .galois import FieldElement, FieldSpec, field_make
from .incidence import Bundle, Geometry, classify, classify_bundles
from .pg3 import Pg3Model, build_model, export_structure
from .reguli import Regulus, conjugate, enumerate_reguli, extend_skew_pair, regulus
from .structure import IncidenceStructure

__all__ = [
    "Bundle", "FieldElement", "FieldSpec", "Geometry", "IncidenceStructure", "Pg3Model", "Regulus",
    "build_model", "classify", "classify_bundles", "conjugate", "enumerate_reguli",
    "export_structure", "extend_skew_pair", "field_make", "regulus", "run_audit",
]
