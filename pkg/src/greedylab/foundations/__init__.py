"""Scalar and vector primitives shared by every other module."""

from greedylab.foundations.contracts import (
    CheckResult,
    CheckStatus,
    ConstantKind,
    RenormKind,
    ReportFormat,
    SearchMode,
)
from greedylab.foundations.geometry import GeomConstants, eta_p, geom_constants
from greedylab.foundations.vectors import (
    SignPattern,
    SpVec,
    decreasing_magnitudes,
    nonincreasing_rearrangement,
)
from greedylab.foundations.weights import WeightSpec

__all__ = [
    "CheckResult",
    "CheckStatus",
    "ConstantKind",
    "GeomConstants",
    "RenormKind",
    "ReportFormat",
    "SearchMode",
    "SignPattern",
    "SpVec",
    "WeightSpec",
    "decreasing_magnitudes",
    "eta_p",
    "geom_constants",
    "nonincreasing_rearrangement",
]
