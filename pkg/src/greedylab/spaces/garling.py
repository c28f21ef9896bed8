"""
Garling sequence space g(w, p).

The quasi-norm is the supremum over increasing index maps n_1 < n_2 < ...
of (sum_k |a_{n_k}|^p w_k)^(1/p) for a nonincreasing weight w. It is
evaluated by dynamic programming over (element, weight slot) pairs. The
same recursion runs over block-constant vectors, where a whole run of equal
coefficients is consumed with a sliding-window maximum, so that vectors with
hundreds of thousands of coordinates stay cheap.
"""

from itertools import combinations
from typing import Sequence

import numpy as np

from greedylab.errors import BudgetExceededError, ParameterError
from greedylab.foundations.weights import WeightSpec

BRUTE_FORCE_CAP = 20


def trailing_max(values: np.ndarray, window: int) -> np.ndarray:
    """out[i] = max(values[max(0, i-window+1) .. i]) by binary decomposition of the window."""
    if window < 1:
        raise ParameterError(f"Window must be positive, got {window}")
    size = values.size
    out = np.full(size, -np.inf)
    block = values.copy()
    span = 1
    offset = 0
    remaining = window
    while remaining:
        if remaining & 1 and offset < size:
            np.maximum(out[offset:], block[: size - offset], out=out[offset:])
            offset += span
        remaining >>= 1
        if remaining and span < size:
            grown = block.copy()
            np.maximum(grown[span:], block[:-span], out=grown[span:])
            block = grown
        span *= 2
    return out


def _slot_sums(weight: WeightSpec, slots: int) -> np.ndarray:
    """S_0 = 0, S_1, ..., S_slots."""
    return np.concatenate([[0.0], weight.primitive(slots)])


def _check_weight(weight: WeightSpec) -> None:
    if not weight.is_nonincreasing:
        raise ParameterError(f"Garling spaces need a nonincreasing weight, got {weight.label}")


def garling_runs_power(
    magnitudes: Sequence[float], lengths: Sequence[int], p: float, weight: WeightSpec
) -> float:
    """
    p-th power of the Garling norm of a vector made of constant runs.

    Args:
        magnitudes: |coefficient| of each run, in index order
        lengths: Number of coordinates in each run
        p: Exponent, p > 0
        weight: Nonincreasing weight

    Returns:
        max over increasing maps of sum |a_{n_k}|^p w_k.
    """
    _check_weight(weight)
    total = int(sum(int(n) for n in lengths))
    if total == 0:
        return 0.0
    sums = _slot_sums(weight, total)
    best = np.full(total + 1, -np.inf)
    best[0] = 0.0
    reach = 0
    for magnitude, length in zip(magnitudes, lengths):
        length = int(length)
        if length < 0:
            raise ParameterError(f"Run lengths must be non-negative, got {length}")
        a = abs(float(magnitude)) ** p
        if a == 0.0 or length == 0:
            continue
        stop = reach + length + 1
        shifted = np.full(stop, -np.inf)
        shifted[: reach + 1] = best[: reach + 1] - a * sums[: reach + 1]
        best[:stop] = a * sums[:stop] + trailing_max(shifted, length + 1)
        reach += length
    return float(np.max(best[: reach + 1]))


def garling_norm(values: np.ndarray, p: float, weight: WeightSpec) -> float:
    """Garling norm of coefficients listed in increasing index order; O(k^2) time."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return 0.0
    power = garling_runs_power(np.abs(values), np.ones(values.size, dtype=np.int64), p, weight)
    return power ** (1.0 / p)


def garling_brute_force(values: np.ndarray, p: float, weight: WeightSpec) -> float:
    """Exhaustive maximum over all increasing maps; for cross-checking small supports."""
    values = np.abs(np.asarray(values, dtype=np.float64))
    k = values.size
    if k > BRUTE_FORCE_CAP:
        raise BudgetExceededError(f"Brute force over {k} coordinates exceeds {BRUTE_FORCE_CAP}")
    _check_weight(weight)
    w = weight.weights(max(k, 1))
    best = 0.0
    powered = values**p
    for size in range(1, k + 1):
        for chosen in combinations(range(k), size):
            best = max(best, float(np.sum(powered[list(chosen)] * w[:size])))
    return best ** (1.0 / p)


def garling_shift_profile(
    magnitudes: Sequence[float],
    lengths: Sequence[int],
    p: float,
    weight: WeightSpec,
    max_shift: int,
) -> np.ndarray:
    """
    Best p-th power contributions of a run vector placed after t used slots.

    F[t] is the Garling p-th power of the vector when the weight starts at
    w_{t+1} instead of w_1, for t = 0..max_shift.
    """
    _check_weight(weight)
    total = int(sum(int(n) for n in lengths))
    size = max_shift + total + 1
    sums = _slot_sums(weight, size - 1)
    after = np.zeros(size)
    for magnitude, length in reversed(list(zip(magnitudes, lengths))):
        a = abs(float(magnitude)) ** p
        length = int(length)
        if a == 0.0 or length == 0:
            continue
        # Leading-window maximum via a trailing maximum on the reversed array.
        lifted = a * sums + after
        lead = trailing_max(lifted[::-1], length + 1)[::-1]
        after = lead - a * sums
    return after[: max_shift + 1]
