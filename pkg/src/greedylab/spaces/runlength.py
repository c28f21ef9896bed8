"""
Block-constant vectors evaluated without materializing their coordinates.

A RunLengthVector lists constant runs in index order. Lorentz norms with a
constant weight reduce to power sums over each run, evaluated exactly for
short runs and by an Euler-Maclaurin expansion beyond an exact head; weighted
partial sums are linear inside a run, so their extremes sit at run ends.
"""

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from greedylab.errors import BudgetExceededError, ParameterError, UnsupportedError
from greedylab.foundations.vectors import SpVec
from greedylab.foundations.weights import CONSTANT
from greedylab.spaces.garling import garling_runs_power
from greedylab.spaces.norms import (
    GarlingSpace,
    KTSpace,
    LorentzSpace,
    LpSpace,
    SequenceSpace,
    SwSpace,
)

EXACT_HEAD = 4096  # Terms summed directly before the asymptotic expansion
MATERIALIZE_CAP = 2_000_000  # Largest run vector converted to an SpVec


@dataclass(frozen=True)
class RunLengthVector:
    """Vector made of constant runs: run k holds ``counts[k]`` copies of ``values[k]``."""

    values: Tuple[float, ...]
    counts: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.counts):
            raise ParameterError("Run values and counts must have equal length")
        if any(int(c) < 0 for c in self.counts):
            raise ParameterError("Run counts must be non-negative")
        if any(not math.isfinite(v) for v in self.values):
            raise ParameterError("Run values must be finite")

    @classmethod
    def from_runs(cls, runs: Sequence[Tuple[float, int]]) -> "RunLengthVector":
        return cls(tuple(float(v) for v, _ in runs), tuple(int(c) for _, c in runs))

    @property
    def length(self) -> int:
        return sum(self.counts)

    def l1_mass(self) -> float:
        return math.fsum(abs(v) * c for v, c in zip(self.values, self.counts))

    def digest(self) -> str:
        """Stable SHA-256 of the run description."""
        payload = np.array(self.values, dtype=np.float64).tobytes()
        payload += np.array(self.counts, dtype=np.int64).tobytes()
        return hashlib.sha256(payload).hexdigest()

    def to_spvec(self) -> SpVec:
        """Materialize the coordinates; refused beyond MATERIALIZE_CAP."""
        if self.length > MATERIALIZE_CAP:
            raise BudgetExceededError(
                f"Run vector of length {self.length} exceeds {MATERIALIZE_CAP} coordinates"
            )
        dense = np.repeat(np.array(self.values, dtype=np.float64), np.array(self.counts))
        return SpVec.from_dense(dense)


def exact_unit_mass(counts: Sequence[int]) -> Fraction:
    """l1 mass of concatenated averaging blocks (1/m)*1_m, computed in exact arithmetic."""
    return sum((Fraction(1, int(m)) * int(m) for m in counts), Fraction(0))


def power_sum(start: int, stop: int, exponent: float) -> float:
    """
    Sum of n^exponent for n = start..stop (inclusive), start >= 1.

    Exact for the first EXACT_HEAD terms; the remainder uses Euler-Maclaurin
    with three correction terms.
    """
    if start < 1:
        raise ParameterError(f"Power sums start at n >= 1, got {start}")
    if stop < start:
        return 0.0
    head_stop = min(stop, start + EXACT_HEAD - 1)
    head = float(np.sum(np.arange(start, head_stop + 1, dtype=np.float64) ** exponent))
    if head_stop == stop:
        return head
    a = float(head_stop + 1)
    b = float(stop)
    r = exponent
    if r == -1.0:
        integral = math.log1p((b - a) / a)
    else:
        integral = a ** (r + 1.0) * math.expm1((r + 1.0) * math.log1p((b - a) / a)) / (r + 1.0)
    correction = 0.5 * (a**r + b**r)
    correction += r / 12.0 * (b ** (r - 1.0) - a ** (r - 1.0))
    correction -= r * (r - 1.0) * (r - 2.0) / 720.0 * (b ** (r - 3.0) - a ** (r - 3.0))
    return head + integral + correction


def _constant_weight(space: SequenceSpace) -> float:
    weight = getattr(space, "weight")
    if weight.kind != CONSTANT:
        raise UnsupportedError(f"Run-length evaluation needs a constant weight, got {weight.label}")
    return float(weight.parameter)


def _lorentz_runs(rle: RunLengthVector, space: LorentzSpace) -> float:
    c = _constant_weight(space)
    order = np.argsort(-np.abs(np.array(rle.values)), kind="stable")
    position = 0
    total = 0.0
    peak = 0.0
    for k in order.tolist():
        count = rle.counts[k]
        magnitude = abs(rle.values[k])
        if count == 0 or magnitude == 0.0:
            continue
        first, last = position + 1, position + count
        position = last
        if math.isinf(space.q):
            peak = max(peak, magnitude * (c * last) ** (1.0 / space.p))
        else:
            exponent = space.q / space.p - 1.0
            scale = c ** (space.q / space.p)
            total += magnitude**space.q * scale * power_sum(first, last, exponent)
    if math.isinf(space.q):
        return peak
    return total ** (1.0 / space.q)


def _sw_runs(rle: RunLengthVector, space: SwSpace) -> float:
    c = _constant_weight(space)
    ends = np.cumsum(np.array(rle.values) * np.array(rle.counts, dtype=np.float64))
    return float(c * np.max(np.abs(ends), initial=0.0))


def runlength_norm(space: SequenceSpace, rle: RunLengthVector) -> float:
    """
    Evaluate a quasi-norm on a run-length vector.

    Supported: finite lp, Lorentz and s_w with constant weights, Garling, and
    KT spaces combining them.
    """
    if isinstance(space, LpSpace) and not math.isinf(space.p):
        powered = math.fsum(abs(v) ** space.p * c for v, c in zip(rle.values, rle.counts))
        return powered ** (1.0 / space.p)
    if isinstance(space, LorentzSpace):
        return _lorentz_runs(rle, space)
    if isinstance(space, SwSpace):
        return _sw_runs(rle, space)
    if isinstance(space, GarlingSpace):
        power = garling_runs_power(rle.values, rle.counts, space.p, space.weight)
        return power ** (1.0 / space.p)
    if isinstance(space, KTSpace):
        return max(runlength_norm(space.inner, rle), runlength_norm(space.sw, rle))
    raise UnsupportedError(f"No run-length evaluation for {space.label}")

