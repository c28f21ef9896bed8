"""
Regularity predicates for weights and the discrete Hardy operator check.

A primitive weight s has the upper regularity property (URP) when
s_{bm} <= (b/2) s_m for some b >= 3, and the lower one (LRP) when
2 s_m <= s_{bm} for some b >= 2. A positive sequence v is regular when the
Dini averages (1/(n v_n)) sum_{k<=n} v_k stay bounded.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from greedylab.errors import ParameterError
from greedylab.foundations.vectors import SpVec
from greedylab.foundations.weights import WeightSpec
from greedylab.spaces.lorentz import lorentz_norm
from greedylab.spaces.norms import doubling_constant

URP_RANGE = range(3, 33)
LRP_RANGE = range(2, 33)
GROWTH_TOLERANCE = 0.05  # Relative increase over four doublings that counts as growth
_SLACK = 1e-12


@dataclass
class WeightReport:
    """Exhaustive verdicts of the regularity predicates over n <= check_range."""

    check_range: int
    doubling: bool
    doubling_constant: float  # max s_{2m}/s_m observed
    urp: bool
    urp_b: Optional[int]  # smallest b in 3..32 satisfying URP on the range
    lrp: bool
    lrp_b: Optional[int]  # smallest b in 2..32 satisfying LRP on the range
    regular: bool  # Dini condition for w itself
    regular_running_max: float
    reciprocal_regular: bool  # Dini condition for 1/s
    reciprocal_running_max: float


def _smallest_b(s: np.ndarray, candidates: range, upper: bool) -> Optional[int]:
    n = s.size
    for b in candidates:
        m = np.arange(1, n // b + 1)
        if m.size == 0:
            break
        s_m = s[m - 1]
        s_bm = s[b * m - 1]
        if upper:
            holds = np.all(s_bm <= (b / 2.0) * s_m * (1 + _SLACK))
        else:
            holds = np.all(2.0 * s_m <= s_bm * (1 + _SLACK))
        if holds:
            return b
    return None


def dini_profile(v: np.ndarray) -> np.ndarray:
    """Running maximum of (1/(n v_n)) sum_{k<=n} v_k."""
    n = np.arange(1, v.size + 1, dtype=np.float64)
    return np.maximum.accumulate(np.cumsum(v) / (n * v))


def is_growing(
    profile: np.ndarray, earlier_index: int, tolerance: float = GROWTH_TOLERANCE
) -> bool:
    """True when the last running maximum exceeds the one at ``earlier_index`` by the tolerance."""
    earlier = profile[max(0, earlier_index)]
    return bool(profile[-1] > (1.0 + tolerance) * earlier)


def weight_report(
    w: WeightSpec, N: int = 4096, doubling_cap: float = 64.0
) -> WeightReport:
    """
    Evaluate doubling, URP, LRP and regularity over indices up to N.

    Args:
        w: Weight whose primitive is tested
        N: Largest index tested, at least 16
        doubling_cap: Largest doubling constant reported as doubling

    Returns:
        WeightReport with witnesses.
    """
    if N < 16:
        raise ParameterError(f"weight_report needs N >= 16, got {N}")
    s = np.asarray(w.primitive(N))
    urp_b = _smallest_b(s, URP_RANGE, upper=True)
    lrp_b = _smallest_b(s, LRP_RANGE, upper=False)
    constant = doubling_constant(w, N)
    own = dini_profile(np.asarray(w.weights(N)))
    reciprocal = dini_profile(1.0 / s)
    return WeightReport(
        check_range=N,
        doubling=constant <= doubling_cap,
        doubling_constant=constant,
        urp=urp_b is not None,
        urp_b=urp_b,
        lrp=lrp_b is not None,
        lrp_b=lrp_b,
        regular=not is_growing(own, N // 16 - 1),
        regular_running_max=float(own[-1]),
        reciprocal_regular=not is_growing(reciprocal, N // 16 - 1),
        reciprocal_running_max=float(reciprocal[-1]),
    )


@dataclass
class HardyReport:
    """Ratios ||A_d f||_{1,inf,w} / ||f||_{1,q,w} along a sample family."""

    q: float
    cutoff: int  # Coordinates of A_d f kept after truncation
    ratios: List[float] = field(default_factory=list)
    max_ratio: float = 0.0
    strictly_increasing: bool = False
    stabilizes: bool = True


def hardy_average(f: SpVec, cutoff: int) -> np.ndarray:
    """Discrete Hardy operator (1/n) sum_{k<=n} a_k for n = 1..cutoff."""
    dense = f.to_dense(max(cutoff, f.max_index))[:cutoff]
    return np.cumsum(dense) / np.arange(1, cutoff + 1, dtype=np.float64)


def prefix_family(levels: int) -> List[SpVec]:
    """Indicators of [1..2^k] for k = 0..levels."""
    return [SpVec.indicator(range(1, 2**k + 1)) for k in range(levels + 1)]


def harmonic_family(levels: int) -> List[SpVec]:
    """(1/n)_{n <= 2^k} for k = 0..levels."""
    return [SpVec.from_dense(1.0 / np.arange(1, 2**k + 1)) for k in range(levels + 1)]


def hardy_check(
    w: WeightSpec, q: float, samples: Sequence[SpVec], cutoff: Optional[int] = None
) -> HardyReport:
    """
    Compare the Hardy average in d_{1,inf}(w) against f in d_{1,q}(w).

    Args:
        w: Nonincreasing weight
        q: Outer Lorentz index, q > 1
        samples: Vectors in family order (a doubling schedule for growth detection)
        cutoff: Truncation of A_d f; defaults to max(4 * largest index, 2^14)

    Returns:
        HardyReport with the ratio sequence and its growth flags.
    """
    if not w.is_nonincreasing:
        raise ParameterError(f"Hardy check needs a nonincreasing weight, got {w.label}")
    if not q > 1 or math.isinf(q):
        raise ParameterError(f"Hardy check needs finite q > 1, got {q}")
    largest = max((f.max_index for f in samples), default=1)
    cut = cutoff if cutoff is not None else max(4 * largest, 2**14)
    report = HardyReport(q=q, cutoff=cut)
    for f in samples:
        denominator = lorentz_norm(f.values, 1.0, q, w)
        if denominator == 0.0:
            continue
        numerator = lorentz_norm(hardy_average(f, cut), 1.0, math.inf, w)
        report.ratios.append(numerator / denominator)
    if report.ratios:
        ratios = np.array(report.ratios)
        report.max_ratio = float(np.max(ratios))
        report.strictly_increasing = bool(np.all(np.diff(ratios) > 0))
        running = np.maximum.accumulate(ratios)
        report.stabilizes = not is_growing(running, running.size - 5)
    return report
