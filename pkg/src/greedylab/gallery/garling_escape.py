"""
Garling space g(u_p, p) with p < 1 is not contained in l_1, and its unit
vector system has symmetry-for-largest-coefficients constant at least 2^(1/p).

The escape builds constant-coefficient tuples f_N, ..., f_1, each prepended
to the previous concatenation so that the whole stays in the unit ball while
every new tuple has norm at least (1 - eps)^(1/p). Replacing each f_j by the
averaging tuple (1/m_j) 1_{m_j} of l_1 mass one costs at most a bounded
factor C, so the l_1 mass of the result grows like N with a bounded g-norm.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
import structlog

from greedylab.constants.estimators import Witness
from greedylab.errors import BudgetExceededError, ParameterError
from greedylab.foundations.vectors import SpVec
from greedylab.foundations.weights import WeightSpec
from greedylab.spaces.garling import garling_shift_profile
from greedylab.spaces.norms import GarlingSpace
from greedylab.spaces.runlength import RunLengthVector, exact_unit_mass, runlength_norm

logger = structlog.get_logger(__name__)

EPSILON = 0.1
LENGTH_CAP = 100_000
SAFETY = 1.0 - 1e-12  # Keeps the concatenation strictly inside the unit ball after rounding


@dataclass
class EscapeReport:
    p: float
    epsilon: float
    lengths: List[int]  # m_1, ..., m_N in construction order
    coefficients: List[float]  # c_j of f_j = c_j 1_{m_j}
    lambdas: List[float]  # ||f_j||
    concatenation_norm: float  # ||f_N ... f_1||, at most 1
    C: float  # max_j phi(m_j) / (lambda_j m_j)
    h_norms: List[float]  # ||h|| using the last N' tuples, N' = 1..N
    l1_masses: List[Fraction]  # exactly N'
    bounded: bool
    h: Optional[RunLengthVector] = field(default=None, repr=False)


def _coefficient_power(
    tail: RunLengthVector, k: int, p: float, weight: WeightSpec
) -> float:
    """Largest c^p with ||c 1_k followed by tail||^p <= 1, shrunk by SAFETY."""
    profile = garling_shift_profile(tail.values, tail.counts, p, weight, k)
    s = np.asarray(weight.primitive(k))
    return float(np.min((1.0 - profile[1 : k + 1]) / s)) * SAFETY


def _feasible(tail: RunLengthVector, k: int, p: float, weight: WeightSpec, eps: float) -> bool:
    c_power = _coefficient_power(tail, k, p, weight)
    return c_power > 0 and c_power * weight.primitive_at(k) >= 1.0 - eps


def _shortest_length(
    tail: RunLengthVector, p: float, weight: WeightSpec, eps: float, cap: int
) -> int:
    """Smallest feasible tuple length, by doubling then bisection."""
    k = 1
    while not _feasible(tail, k, p, weight, eps):
        k *= 2
        if k > cap:
            raise BudgetExceededError(f"No constant tuple of length <= {cap} keeps the norm")
    low, high = k // 2, k
    while high - low > 1:
        mid = (low + high) // 2
        if _feasible(tail, mid, p, weight, eps):
            high = mid
        else:
            low = mid
    return high


def garling_l1_escape(
    p: float, N: int = 6, epsilon: float = EPSILON, length_cap: int = LENGTH_CAP
) -> EscapeReport:
    """
    Build h with ||h||_1 = N and ||h||_{g(u_p, p)} <= C.

    Args:
        p: Exponent, 0 < p < 1
        N: Number of tuples
        epsilon: Slack of each new tuple's norm below one
        length_cap: Largest tuple length tried

    Raises:
        BudgetExceededError: If some tuple would need more than ``length_cap`` entries.
    """
    if not 0 < p < 1:
        raise ParameterError(f"The escape needs 0 < p < 1, got {p}")
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")
    weight = WeightSpec.potential(p)
    space = GarlingSpace(p, weight)
    tail = RunLengthVector((), ())
    lengths: List[int] = []
    coefficients: List[float] = []
    lambdas: List[float] = []
    for j in range(1, N + 1):
        k = _shortest_length(tail, p, weight, epsilon, length_cap)
        c_power = _coefficient_power(tail, k, p, weight)
        c = c_power ** (1.0 / p)
        lengths.append(k)
        coefficients.append(c)
        lambdas.append((c_power * weight.primitive_at(k)) ** (1.0 / p))
        tail = RunLengthVector((c,) + tail.values, (k,) + tail.counts)
        logger.debug("escape_tuple_added", j=j, length=k, coefficient=c)

    phi = [weight.primitive_at(m) ** (1.0 / p) for m in lengths]
    C = max(f / (lam * m) for f, lam, m in zip(phi, lambdas, lengths))
    h_norms: List[float] = []
    masses: List[Fraction] = []
    h = RunLengthVector((), ())
    for m in lengths:
        h = RunLengthVector((1.0 / m,) + h.values, (m,) + h.counts)
        h_norms.append(runlength_norm(space, h))
        masses.append(exact_unit_mass(h.counts))
    report = EscapeReport(
        p=p,
        epsilon=epsilon,
        lengths=lengths,
        coefficients=coefficients,
        lambdas=lambdas,
        concatenation_norm=runlength_norm(space, tail),
        C=C,
        h_norms=h_norms,
        l1_masses=masses,
        bounded=all(value <= C * (1 + 1e-9) for value in h_norms),
        h=h,
    )
    logger.info("garling_escape_built", p=p, N=N, C=C, lengths=lengths)
    return report


@dataclass
class GammaWitness:
    """||e_1 + a 1_A|| against ||e_{n+2} + a 1_A|| for A = {2, ..., n+1}."""

    p: float
    n: int
    weight: str
    a: float
    numerator_norm: float
    denominator_norm: float
    ratio: float
    target: float  # 2^(1/p)
    witness: Witness

    @property
    def attained_share(self) -> float:
        return self.ratio / self.target


def _witness_runs(a: float, n: int) -> Tuple[RunLengthVector, RunLengthVector]:
    first = RunLengthVector.from_runs([(1.0, 1), (a, n)])
    last = RunLengthVector.from_runs([(0.0, 1), (a, n), (1.0, 1)])
    return first, last


def garling_gamma_lower_bound(
    p: float, n: int, weight: Optional[WeightSpec] = None
) -> GammaWitness:
    """
    Witness for Gamma >= 2^(1/p) on g(w, p), approached as n grows.

    a is the largest value keeping ||e_{n+2} + a 1_A|| <= 1, which needs
    a^p s_t + w_{t+1} <= 1 for every t <= n.
    """
    w = weight or WeightSpec.potential(0.5)
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    space = GarlingSpace(p, w)
    s = np.asarray(w.primitive(n))
    following = np.asarray(w.weights(n + 1))[1:]
    a_power = float(np.min((1.0 - following) / s))
    if not a_power > 0:
        raise ParameterError(f"Weight {w.label} does not decay; no admissible a")
    a = a_power ** (1.0 / p)
    first, last = _witness_runs(a, n)
    top = runlength_norm(space, first)
    bottom = runlength_norm(space, last)
    block = range(2, n + 2)
    witness = Witness(
        numerator=SpVec.unit(1) + SpVec.indicator(block, a),
        denominator=SpVec.unit(n + 2) + SpVec.indicator(block, a),
        note=f"gamma n={n}",
    )
    result = GammaWitness(
        p=p,
        n=n,
        weight=w.label,
        a=a,
        numerator_norm=top,
        denominator_norm=bottom,
        ratio=top / bottom,
        target=2.0 ** (1.0 / p),
        witness=witness,
    )
    logger.debug("garling_gamma_witness", p=p, n=n, ratio=result.ratio, target=result.target)
    return result


def escape_growth(report: EscapeReport) -> float:
    """||h(N)|| / ||h(1)||, to be compared with 2C."""
    return report.h_norms[-1] / report.h_norms[0]
