"""
A superdemocratic basis of l_p + l_q that is not LUCC.

x_{2k-1} = (e_k, e_k) and x_{2k} = (e_k / 2, e_k) in dsum(lp:p, lp:q). The
vectors f_m = (0, 1_m), g_m and h_m below have coefficients of modulus at
most 2, yet ||g_m|| and ||h_m|| grow like m^(1/p) against ||f_m|| = m^(1/q).
"""

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
import structlog

from greedylab.basis.models import LatticeModel
from greedylab.errors import ParameterError
from greedylab.foundations.vectors import SignPattern, SpVec
from greedylab.spaces.norms import DirectSum, LpSpace

logger = structlog.get_logger(__name__)

LPLQ_BLOCK = np.array([[1.0, 0.5], [1.0, 1.0]])
SIGN_SETS_M = 10  # Largest |A| whose sign patterns are enumerated


def lplq_basis(p: float, q: float) -> LatticeModel:
    return LatticeModel(DirectSum((LpSpace(p), LpSpace(q))), block=LPLQ_BLOCK, name="lplq")


def lplq_vectors(m: int) -> Tuple[SpVec, SpVec, SpVec]:
    """Coefficients of f_m, g_m and h_m."""
    odd = range(1, 2 * m, 2)
    even = range(2, 2 * m + 1, 2)
    f = SpVec({**{i: -1.0 for i in odd}, **{i: 2.0 for i in even}})
    g = SpVec({**{i: -1.0 for i in odd}, **{i: 1.0 for i in even}})
    h = SpVec.indicator(odd, -1.0)
    return f, g, h


def _h_over_f(basis: LatticeModel, m: int) -> float:
    f, _, h = lplq_vectors(m)
    return basis.norm(h) / basis.norm(f)


@dataclass
class LplqReport:
    p: float
    q: float
    m: List[int]  # doubling sequence 1, 2, 4, ...
    f_norms: List[float]
    g_norms: List[float]
    h_norms: List[float]
    ratios: List[float]  # ||g_m|| / ||f_m||
    ratios_increasing: bool
    h_ratios: List[float]  # ||h_m|| / ||f_m||
    h_ratios_increasing: bool  # strict, over every m <= m_max
    sandwich_lower: float  # 2^(-1-1/p)
    sandwich_upper: float  # max(1, 2^(1-1/q), 3 / 2^(1+1/p))
    observed_min: float  # min of ||1_{eps,A}|| / |A|^(1/p) over the sets searched
    observed_max: float
    sandwich_holds: bool


def lplq_succ_not_lucc_report(p: float, q: float, m_max: int = 1024) -> LplqReport:
    """
    Norms of f_m, g_m, h_m along doubling m and the superdemocracy bounds.

    Args:
        p: Exponent of the first summand
        q: Exponent of the second summand, p < q <= inf
        m_max: Largest m of the doubling sequence

    Returns:
        LplqReport with the two-sided signed-indicator bounds checked on
        intervals, odd and even index sets with all signs for |A| <= SIGN_SETS_M.
    """
    if not 0 < p < q:
        raise ParameterError(f"Need 0 < p < q, got p={p}, q={q}")
    if m_max < 1:
        raise ParameterError(f"m_max must be >= 1, got {m_max}")
    basis = lplq_basis(p, q)

    ms: List[int] = []
    m = 1
    while m <= m_max:
        ms.append(m)
        m *= 2
    f_norms, g_norms, h_norms = [], [], []
    for m in ms:
        f, g, h = lplq_vectors(m)
        f_norms.append(basis.norm(f))
        g_norms.append(basis.norm(g))
        h_norms.append(basis.norm(h))
    ratios = [g / f for g, f in zip(g_norms, f_norms)]
    h_ratios = [h / f for h, f in zip(h_norms, f_norms)]
    every_m = [_h_over_f(basis, m) for m in range(1, m_max + 1)]

    lower = 2.0 ** (-1.0 - 1.0 / p)
    tail = 1.0 if math.isinf(q) else 1.0 / q
    upper = max(1.0, 2.0 ** (1.0 - tail), 3.0 / 2.0 ** (1.0 + 1.0 / p))
    observed: List[float] = []
    for size in range(1, SIGN_SETS_M + 1):
        for chosen in (
            range(1, size + 1),
            range(1, 2 * size, 2),
            range(2, 2 * size + 1, 2),
        ):
            scale = size ** (1.0 / p)
            for bits in range(2**size):
                vector = SignPattern.from_bits(chosen, bits).indicator()
                observed.append(basis.norm(vector) / scale)

    report = LplqReport(
        p=p,
        q=q,
        m=ms,
        f_norms=f_norms,
        g_norms=g_norms,
        h_norms=h_norms,
        ratios=ratios,
        ratios_increasing=all(b > a for a, b in zip(ratios, ratios[1:])),
        h_ratios=h_ratios,
        h_ratios_increasing=all(b > a for a, b in zip(every_m, every_m[1:])),
        sandwich_lower=lower,
        sandwich_upper=upper,
        observed_min=min(observed),
        observed_max=max(observed),
        sandwich_holds=min(observed) >= lower * (1 - 1e-9)
        and max(observed) <= upper * (1 + 1e-9),
    )
    logger.debug("lplq_report", p=p, q=q, last_ratio=ratios[-1])
    return report
