"""Exact invariants of Seifert G_m-bundles over varieties with cyclic quotient singularities."""

from .errors import (
    AmbiguityPossible,
    DimensionMismatch,
    HypothesisNotMet,
    InvalidChart,
    InvalidLocalData,
    PreconditionFailed,
    SeifertError,
    StructuralError,
    Undecidable,
    ValidationRequired,
)
from .exactmath import FpAbelianGroup, GroupElement, IntMatrix, cokernel, smith_normal_form
from .localmodel import (
    CyclicChart,
    LocalSeifertData,
    QuotientPresentation,
    ReducedChart,
    reduce_chart,
    to_quotient,
    to_seifert,
)
from .seifert import (
    BaseVariety,
    Divisor,
    MarkedPoint,
    QClass,
    SeifertData,
    chern_class,
    class_group_Y,
    global_order,
    quotient_by_mu,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguityPossible",
    "DimensionMismatch",
    "HypothesisNotMet",
    "InvalidChart",
    "InvalidLocalData",
    "PreconditionFailed",
    "SeifertError",
    "StructuralError",
    "Undecidable",
    "ValidationRequired",
    "FpAbelianGroup",
    "GroupElement",
    "IntMatrix",
    "cokernel",
    "smith_normal_form",
    "CyclicChart",
    "LocalSeifertData",
    "QuotientPresentation",
    "ReducedChart",
    "reduce_chart",
    "to_quotient",
    "to_seifert",
    "BaseVariety",
    "Divisor",
    "MarkedPoint",
    "QClass",
    "SeifertData",
    "chern_class",
    "class_group_Y",
    "global_order",
    "quotient_by_mu",
    "validate",
]
