"""Search-based estimates of basis constants and democracy functions."""

from greedylab.constants.democracy import (
    DemocracyFunctions,
    SandwichReport,
    democracy_functions,
    embedding_sandwich_check,
)
from greedylab.constants.estimators import (
    ConstantEstimate,
    EstimateTable,
    NormCache,
    Witness,
    dual_fundamental,
    estimate_all,
    estimate_constant,
)
from greedylab.constants.families import TestFamily

__all__ = [
    "ConstantEstimate",
    "DemocracyFunctions",
    "EstimateTable",
    "NormCache",
    "SandwichReport",
    "TestFamily",
    "Witness",
    "democracy_functions",
    "dual_fundamental",
    "embedding_sandwich_check",
    "estimate_all",
    "estimate_constant",
]
