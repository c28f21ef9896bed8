"""
The alternating basis x_n = (-1)^(n-1) e_n of v_p.

Signed indicators with alternating signs become the constant vector, whose
v_p norm is 2^(1/p) whatever the length, while plain indicators on spread-out
sets pick up two unit jumps per coordinate. So the basis is democratic for
signed sums but its upper democracy function grows like m^(1/p).
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Tuple

import numpy as np
import structlog

from greedylab.basis.models import LatticeModel
from greedylab.errors import ParameterError
from greedylab.foundations.vectors import SignPattern, SpVec
from greedylab.spaces.norms import VpSpace

logger = structlog.get_logger(__name__)

ALTERNATING_BLOCK = np.diag([1.0, -1.0])
EXHAUSTIVE_M = 12  # Sets and signs are enumerated completely up to this cardinality
QUOTED_CONSTANT = 2.0  # Value quoted in the literature for ||sum (-1)^(n-1) e_n||


def alternating_basis(p: float) -> LatticeModel:
    return LatticeModel(VpSpace(p), block=ALTERNATING_BLOCK, name="alternating")


@dataclass
class AlternatingReport:
    """Democracy profile of the alternating basis for m = 1..m_max."""

    p: float
    m: List[int]
    interval_norms: List[float]  # ||1_[1..m][B]||
    upper: List[float]  # phi_u(m), a lower bound from structured and exhaustive sets
    lower_signed: List[float]  # phi^eps_l(m), an upper bound from the signs searched
    democracy_bound: float  # 2^(1/p)
    democracy_estimate: float  # Delta over all subsets of [1..EXHAUSTIVE_M]
    upper_ratio_min: float  # min of phi_u(m) / m^(1/p)
    upper_ratio_max: float
    lower_bounded: bool
    quoted_constant: float = QUOTED_CONSTANT
    discrepancy: bool = False  # True when 2^(1/p) differs from the quoted constant
    witnesses: Dict[str, SpVec] = field(default_factory=dict)


def _subset_extremes(basis: LatticeModel, universe: int) -> Tuple[np.ndarray, np.ndarray]:
    """max and min of ||1_A|| per cardinality over all nonempty A in [1..universe]."""
    largest = np.zeros(universe + 1)
    smallest = np.full(universe + 1, np.inf)
    for size in range(1, universe + 1):
        for chosen in combinations(range(1, universe + 1), size):
            value = basis.norm(SpVec.indicator(chosen))
            largest[size] = max(largest[size], value)
            smallest[size] = min(smallest[size], value)
    return largest, smallest


def vp_alternating_report(p: float, m_max: int = 64) -> AlternatingReport:
    """
    Democracy functions of the alternating basis of v_p.

    Args:
        p: Exponent, 0 < p <= 1
        m_max: Largest cardinality

    Returns:
        AlternatingReport; ``lower_bounded`` says phi^eps_l(m) <= 2^(1/p) on the whole range.
    """
    if m_max < 1:
        raise ParameterError(f"m_max must be >= 1, got {m_max}")
    basis = alternating_basis(p)
    bound = 2.0 ** (1.0 / p)
    universe = min(EXHAUSTIVE_M, 2 * m_max)
    largest, smallest = _subset_extremes(basis, universe)

    ms = list(range(1, m_max + 1))
    intervals: List[float] = []
    per_m_upper: List[float] = []
    per_m_lower: List[float] = []
    for m in ms:
        block = range(1, m + 1)
        interval = basis.norm(SpVec.indicator(block))
        spread = basis.norm(SpVec.indicator(range(1, 2 * m, 2)))
        intervals.append(interval)
        upper = max(interval, spread)
        if m <= universe:
            upper = max(upper, float(largest[m]))
        per_m_upper.append(upper)
        if m <= EXHAUSTIVE_M:
            patterns = [SignPattern.from_bits(block, bits) for bits in range(2**m)]
        else:
            patterns = [SignPattern.all_plus(block), SignPattern.alternating(block)]
        per_m_lower.append(min(basis.norm(eps.indicator()) for eps in patterns))

    upper_running = np.maximum.accumulate(per_m_upper)
    lower_running = np.minimum.accumulate(per_m_lower[::-1])[::-1]
    scale = np.arange(1, m_max + 1, dtype=np.float64) ** (1.0 / p)
    ratios = upper_running / scale

    # Delta = max over k <= l of max_k / min_l.
    tail_min = np.minimum.accumulate(smallest[1:][::-1])[::-1]
    democracy = float(np.max(largest[1:] / tail_min))

    report = AlternatingReport(
        p=p,
        m=ms,
        interval_norms=intervals,
        upper=upper_running.tolist(),
        lower_signed=lower_running.tolist(),
        democracy_bound=bound,
        democracy_estimate=democracy,
        upper_ratio_min=float(np.min(ratios)),
        upper_ratio_max=float(np.max(ratios)),
        lower_bounded=bool(np.all(lower_running <= bound * (1 + 1e-9))),
        discrepancy=abs(bound - QUOTED_CONSTANT) > 1e-9,
        witnesses={
            "lower_signed": SignPattern.alternating(range(1, m_max + 1)).indicator(),
            "upper": SpVec.indicator(range(1, 2 * m_max, 2)),
        },
    )
    if report.discrepancy:
        logger.info(
            "alternating_constant_differs",
            p=p,
            evaluated=bound,
            quoted=QUOTED_CONSTANT,
        )
    return report
