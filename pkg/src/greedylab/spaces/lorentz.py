"""
Weighted Lorentz and Marcinkiewicz quasi-norms.

Both act on the nonincreasing rearrangement of the coefficients. For
d_{p,q}(w) the q-th power of the quasi-norm is sum (a*_n)^q s_n^(q/p-1) w_n,
with the sup form a*_n s_n^(1/p) when q is infinite.
"""

import math
from typing import Sequence

import numpy as np

from greedylab.errors import ParameterError
from greedylab.foundations.vectors import decreasing_magnitudes
from greedylab.foundations.weights import WeightSpec


def check_lorentz_indices(p: float, q: float) -> None:
    if not p > 0 or math.isinf(p):
        raise ParameterError(f"Lorentz index p must be positive and finite, got {p}")
    if not q > 0:
        raise ParameterError(f"Lorentz index q must be positive, got {q}")


def lorentz_profile(p: float, q: float, weight: WeightSpec, n: int) -> np.ndarray:
    """The sequence v_n = s_n^(q/p-1) w_n weighting (a*_n)^q in the series form."""
    if math.isinf(q):
        raise ParameterError("The series form of a Lorentz norm needs a finite q")
    s = weight.primitive(n)
    return s ** (q / p - 1.0) * weight.weights(n)


def lorentz_series(values: np.ndarray, p: float, q: float, weight: WeightSpec) -> float:
    """Sum of (a*_n)^q s_n^(q/p-1) w_n; rejects q = inf."""
    check_lorentz_indices(p, q)
    a = decreasing_magnitudes(values)
    if a.size == 0:
        return 0.0
    return float(np.sum(a**q * lorentz_profile(p, q, weight, a.size)))


def lorentz_norm(values: np.ndarray, p: float, q: float, weight: WeightSpec) -> float:
    """
    Quasi-norm of d_{p,q}(w).

    Args:
        values: Coefficients in any order (only magnitudes matter)
        p: Fine index, p > 0
        q: Outer index, q > 0 or math.inf
        weight: Weight w whose primitive is s

    Returns:
        The Lorentz quasi-norm.
    """
    check_lorentz_indices(p, q)
    a = decreasing_magnitudes(values)
    if a.size == 0:
        return 0.0
    if math.isinf(q):
        return float(np.max(a * weight.primitive(a.size) ** (1.0 / p)))
    return lorentz_series(a, p, q, weight) ** (1.0 / q)


def lorentz_norm_from_primitive(
    values: np.ndarray, p: float, q: float, primitive: Sequence[float]
) -> float:
    """
    Lorentz quasi-norm for a weight given through its primitive sequence.

    The weight is Delta(primitive); only the first len(values) entries are used,
    so ``primitive`` must be at least that long.
    """
    check_lorentz_indices(p, q)
    a = decreasing_magnitudes(values)
    if a.size == 0:
        return 0.0
    s = np.asarray(primitive, dtype=np.float64)
    if s.size < a.size:
        raise ParameterError(f"Primitive of length {s.size} is shorter than the support {a.size}")
    s = s[: a.size]
    if math.isinf(q):
        return float(np.max(a * s ** (1.0 / p)))
    w = WeightSpec.discrete_derivative(s)
    return float(np.sum(a**q * s ** (q / p - 1.0) * w)) ** (1.0 / q)


def fundamental_lorentz(p: float, q: float, weight: WeightSpec, m: int) -> float:
    """
    Fundamental function phi_{p,q,w}(m) = ||1_{[1..m]}||_{d_{p,q}(w)}.

    Returns s_m^(1/p) when q is infinite.
    """
    check_lorentz_indices(p, q)
    if m < 1:
        raise ParameterError(f"Fundamental function needs m >= 1, got {m}")
    if math.isinf(q):
        return weight.primitive_at(m) ** (1.0 / p)
    return float(np.sum(lorentz_profile(p, q, weight, m))) ** (1.0 / q)


def marcinkiewicz_norm(values: np.ndarray, weight: WeightSpec) -> float:
    """sup over finite A of (sum_{n in A} |a_n|) / s_|A|, attained on leading rearrangements."""
    a = decreasing_magnitudes(values)
    if a.size == 0:
        return 0.0
    return float(np.max(np.cumsum(a) / weight.primitive(a.size)))
