"""Reconstructions of classical examples with their quantitative signatures."""

from greedylab.gallery.alternating import (
    AlternatingReport,
    alternating_basis,
    vp_alternating_report,
)
from greedylab.gallery.garling_escape import (
    EscapeReport,
    GammaWitness,
    escape_growth,
    garling_gamma_lower_bound,
    garling_l1_escape,
)
from greedylab.gallery.hilbert import HilbertBlockBasis, HilbertReport, hilbert_block_report
from greedylab.gallery.kt import (
    BlockSchedule,
    KTBoundReport,
    KTWitness,
    TEtaReport,
    URPConstant,
    block_lengths,
    kt_not_qg_witness,
    kt_qg_bound_check,
    kt_space,
    kt_urp_constant,
    random_samples,
    t_eta,
    t_eta_check,
)
from greedylab.gallery.lplq import LplqReport, lplq_basis, lplq_succ_not_lucc_report, lplq_vectors

__all__ = [
    "AlternatingReport",
    "BlockSchedule",
    "EscapeReport",
    "GammaWitness",
    "HilbertBlockBasis",
    "HilbertReport",
    "KTBoundReport",
    "KTWitness",
    "LplqReport",
    "TEtaReport",
    "URPConstant",
    "alternating_basis",
    "block_lengths",
    "escape_growth",
    "garling_gamma_lower_bound",
    "garling_l1_escape",
    "hilbert_block_report",
    "kt_not_qg_witness",
    "kt_qg_bound_check",
    "kt_space",
    "kt_urp_constant",
    "lplq_basis",
    "lplq_succ_not_lucc_report",
    "lplq_vectors",
    "random_samples",
    "t_eta",
    "t_eta_check",
    "vp_alternating_report",
]
