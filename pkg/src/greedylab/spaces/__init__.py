"""The quasi-norm zoo, its grammar and the weight-regularity checks."""

from greedylab.spaces.grammar import parse_space, parse_weight
from greedylab.spaces.lorentz import (
    fundamental_lorentz,
    lorentz_norm,
    lorentz_norm_from_primitive,
    marcinkiewicz_norm,
)
from greedylab.spaces.norms import (
    C0Space,
    CertificationConfig,
    DirectSum,
    GarlingSpace,
    KTSpace,
    LorentzSpace,
    LpSpace,
    MarcinkiewiczSpace,
    MixedNormSpace,
    SequenceSpace,
    SwSpace,
    VpSpace,
    certify_exponent,
    doubling_constant,
    norm,
)
from greedylab.spaces.regularity import HardyReport, WeightReport, hardy_check, weight_report
from greedylab.spaces.runlength import RunLengthVector, runlength_norm

__all__ = [
    "C0Space",
    "CertificationConfig",
    "DirectSum",
    "GarlingSpace",
    "HardyReport",
    "KTSpace",
    "LorentzSpace",
    "LpSpace",
    "MarcinkiewiczSpace",
    "MixedNormSpace",
    "RunLengthVector",
    "SequenceSpace",
    "SwSpace",
    "VpSpace",
    "WeightReport",
    "certify_exponent",
    "doubling_constant",
    "fundamental_lorentz",
    "hardy_check",
    "lorentz_norm",
    "lorentz_norm_from_primitive",
    "marcinkiewicz_norm",
    "norm",
    "parse_space",
    "parse_weight",
    "runlength_norm",
    "weight_report",
]
