"""
The quasi-norm zoo.

Each space is an immutable description with a ``norm`` method acting on
finitely supported vectors, a guaranteed p-norm exponent and two structural
flags. Exponents are analytic where a closed argument exists and otherwise
certified by a sampled r-triangle test along a fixed ladder.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Tuple

import numpy as np
import structlog

from greedylab.errors import ParameterError
from greedylab.foundations.geometry import GeomConstants, geom_constants
from greedylab.foundations.vectors import SpVec
from greedylab.foundations.weights import WeightSpec
from greedylab.spaces.garling import garling_norm
from greedylab.spaces.lorentz import (
    check_lorentz_indices,
    lorentz_norm,
    lorentz_profile,
    marcinkiewicz_norm,
)

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class CertificationConfig:
    """Configuration for sampled exponent certificates and weight screening."""

    ladder: Tuple[float, ...] = (0.99, 0.9, 0.75, 0.5, 0.25)  # Candidate exponents, best first
    pairs: int = 400  # Random pairs per certificate (structured pairs come on top)
    dim: int = 12  # Largest support used by certification pairs
    seed: int = 0  # Seed of the certification sampler
    tol: float = 1e-9  # Slack allowed in the r-triangle inequality
    doubling_cap: float = 64.0  # Largest accepted empirical doubling constant
    doubling_range: int = 4096  # Indices screened by the doubling test


DEFAULT_CERTIFICATION = CertificationConfig()


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return str(int(value)) if float(value).is_integer() else repr(float(value))


class SequenceSpace(ABC):
    """Abstract quasi-normed sequence space on finitely supported vectors."""

    @property
    @abstractmethod
    def label(self) -> str:
        """Canonical grammar text of the space."""
        pass

    @property
    @abstractmethod
    def p_exponent(self) -> float:
        """Exponent r in (0, 1] with ||f+g||^r <= ||f||^r + ||g||^r."""
        pass

    @property
    @abstractmethod
    def lattice_unconditional(self) -> bool:
        pass

    @property
    def symmetric(self) -> bool:
        return False

    @abstractmethod
    def norm(self, f: SpVec) -> float:
        """Evaluate the quasi-norm of a finitely supported vector."""
        pass

    @property
    def geometry(self) -> GeomConstants:
        return geom_constants(self.p_exponent)

    def __str__(self) -> str:
        return self.label


def norm(space: SequenceSpace, f: SpVec) -> float:
    """Quasi-norm of f in ``space``."""
    if not isinstance(f, SpVec):
        raise ParameterError(f"Expected an SpVec, got {type(f).__name__}")
    return space.norm(f)


@dataclass(frozen=True)
class LpSpace(SequenceSpace):
    p: float

    def __post_init__(self) -> None:
        if not self.p > 0:
            raise ParameterError(f"lp needs p > 0, got {self.p}")

    @property
    def label(self) -> str:
        return f"lp:{_fmt(self.p)}"

    @property
    def p_exponent(self) -> float:
        return min(self.p, 1.0)

    @property
    def lattice_unconditional(self) -> bool:
        return True

    @property
    def symmetric(self) -> bool:
        return True

    def norm(self, f: SpVec) -> float:
        a = np.abs(f.values)
        if a.size == 0:
            return 0.0
        if math.isinf(self.p):
            return float(np.max(a))
        if self.p == 1.0:
            return float(np.sum(a))
        return float(np.sum(a**self.p)) ** (1.0 / self.p)


@dataclass(frozen=True)
class C0Space(SequenceSpace):
    @property
    def label(self) -> str:
        return "c0"

    @property
    def p_exponent(self) -> float:
        return 1.0

    @property
    def lattice_unconditional(self) -> bool:
        return True

    @property
    def symmetric(self) -> bool:
        return True

    def norm(self, f: SpVec) -> float:
        return f.max_abs()


def doubling_constant(weight: WeightSpec, n: int) -> float:
    """max_{m <= n/2} s_{2m} / s_m over the screened range."""
    s = weight.primitive(2 * (n // 2))
    m = np.arange(1, n // 2 + 1)
    return float(np.max(s[2 * m - 1] / s[m - 1]))


@dataclass(frozen=True)
class LorentzSpace(SequenceSpace):
    p: float
    q: float
    weight: WeightSpec
    config: CertificationConfig = field(
        default=DEFAULT_CERTIFICATION, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        check_lorentz_indices(self.p, self.q)
        constant = doubling_constant(self.weight, self.config.doubling_range)
        if constant > self.config.doubling_cap:
            raise ParameterError(
                f"Lorentz space needs a doubling primitive weight; {self.weight.label} has "
                f"s_2m/s_m up to {constant:.4g} (cap {self.config.doubling_cap})"
            )

    @property
    def label(self) -> str:
        return f"lorentz:p={_fmt(self.p)},q={_fmt(self.q)},w={self.weight.label}"

    @cached_property
    def p_exponent(self) -> float:
        if not math.isinf(self.q):
            profile = lorentz_profile(self.p, self.q, self.weight, self.config.doubling_range)
            if np.all(np.diff(profile) <= 1e-15 * profile[:-1]):
                return min(self.q, 1.0)
        return certify_exponent(self, upper=min(self.q, 1.0), config=self.config)

    @property
    def lattice_unconditional(self) -> bool:
        return True

    @property
    def symmetric(self) -> bool:
        return True

    def norm(self, f: SpVec) -> float:
        return lorentz_norm(f.values, self.p, self.q, self.weight)


@dataclass(frozen=True)
class MarcinkiewiczSpace(SequenceSpace):
    weight: WeightSpec

    @property
    def label(self) -> str:
        return f"marcin:w={self.weight.label}"

    @property
    def p_exponent(self) -> float:
        return 1.0

    @property
    def lattice_unconditional(self) -> bool:
        return True

    @property
    def symmetric(self) -> bool:
        return True

    def norm(self, f: SpVec) -> float:
        return marcinkiewicz_norm(f.values, self.weight)


@dataclass(frozen=True)
class GarlingSpace(SequenceSpace):
    p: float
    weight: WeightSpec

    def __post_init__(self) -> None:
        if not self.p > 0 or math.isinf(self.p):
            raise ParameterError(f"Garling space needs finite p > 0, got {self.p}")
        if not self.weight.is_nonincreasing:
            raise ParameterError(f"Garling space needs a nonincreasing weight: {self.weight.label}")

    @property
    def label(self) -> str:
        return f"garling:p={_fmt(self.p)},w={self.weight.label}"

    @property
    def p_exponent(self) -> float:
        return min(self.p, 1.0)

    @property
    def lattice_unconditional(self) -> bool:
        return True

    def norm(self, f: SpVec) -> float:
        return garling_norm(f.values, self.p, self.weight)


@dataclass(frozen=True)
class VpSpace(SequenceSpace):
    """Differences space: ||f|| = (sum |a_n - a_{n-1}|^p)^(1/p), a_0 = 0, trailing zero."""

    p: float

    def __post_init__(self) -> None:
        if not 0 < self.p <= 1:
            raise ParameterError(f"vp needs 0 < p <= 1, got {self.p}")

    @property
    def label(self) -> str:
        return f"vp:{_fmt(self.p)}"

    @property
    def p_exponent(self) -> float:
        return self.p

    @property
    def lattice_unconditional(self) -> bool:
        return False

    def norm(self, f: SpVec) -> float:
        idx, val = f.indices, f.values
        if idx.size == 0:
            return 0.0
        # Jump into each coordinate from its left neighbour (zero across gaps).
        previous = np.zeros_like(val)
        contiguous = np.diff(idx) == 1
        previous[1:][contiguous] = val[:-1][contiguous]
        jumps = np.abs(val - previous) ** self.p
        # Drop back to zero after the last coordinate of every contiguous run.
        run_ends = np.append(~contiguous, True)
        total = float(np.sum(jumps) + np.sum(np.abs(val[run_ends]) ** self.p))
        return total ** (1.0 / self.p)


@dataclass(frozen=True)
class SwSpace(SequenceSpace):
    """Weighted partial sums: ||f||_w = sup_m |sum_{n<=m} a_n w_n|."""

    weight: WeightSpec

    @property
    def label(self) -> str:
        return f"sw:w={self.weight.label}"

    @property
    def p_exponent(self) -> float:
        return 1.0

    @property
    def lattice_unconditional(self) -> bool:
        return False

    def norm(self, f: SpVec) -> float:
        if not f:
            return 0.0
        w = self.weight.weights(f.max_index)[f.indices - 1]
        return float(np.max(np.abs(np.cumsum(f.values * w))))


@dataclass(frozen=True)
class KTSpace(SequenceSpace):
    """max(||f||_X, ||f||_w): a lattice space intersected with weighted partial sums."""

    inner: SequenceSpace
    weight: WeightSpec

    @property
    def sw(self) -> SwSpace:
        return SwSpace(self.weight)

    @property
    def label(self) -> str:
        return f"kt({self.inner.label} ; w={self.weight.label})"

    @property
    def p_exponent(self) -> float:
        return min(self.inner.p_exponent, 1.0)

    @property
    def lattice_unconditional(self) -> bool:
        return False

    def norm(self, f: SpVec) -> float:
        return max(self.inner.norm(f), self.sw.norm(f))


@dataclass(frozen=True)
class DirectSum(SequenceSpace):
    """
    Max-combined direct sum with interleaved coordinates.

    With k parts, coordinate n belongs to part (n-1) mod k at position
    (n-1) // k + 1.
    """

    parts: Tuple[SequenceSpace, ...]

    def __post_init__(self) -> None:
        if len(self.parts) < 2:
            raise ParameterError("dsum needs at least two parts")

    @property
    def label(self) -> str:
        return "dsum(" + ",".join(part.label for part in self.parts) + ")"

    @property
    def p_exponent(self) -> float:
        return min(part.p_exponent for part in self.parts)

    @property
    def lattice_unconditional(self) -> bool:
        return all(part.lattice_unconditional for part in self.parts)

    def split(self, f: SpVec) -> List[SpVec]:
        """Component vectors, each indexed from 1."""
        k = len(self.parts)
        zero_based = f.indices - 1
        pieces = []
        for j in range(k):
            mask = zero_based % k == j
            pieces.append(SpVec._from_sorted(zero_based[mask] // k + 1, f.values[mask]))
        return pieces

    def embed(self, component: int, g: SpVec) -> SpVec:
        """Place a component vector at its interleaved coordinates."""
        k = len(self.parts)
        if not 0 <= component < k:
            raise ParameterError(f"Component {component} out of range for {k} parts")
        return SpVec._from_sorted((g.indices - 1) * k + component + 1, g.values)

    def norm(self, f: SpVec) -> float:
        return max(part.norm(piece) for part, piece in zip(self.parts, self.split(f)))


@dataclass(frozen=True)
class MixedNormSpace(SequenceSpace):
    """(sum over blocks of ||block||_p^q)^(1/q) over consecutive index blocks."""

    q: float
    p: float
    blocks: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.p > 0 or not self.q > 0:
            raise ParameterError(f"mixed norm needs p, q > 0, got p={self.p}, q={self.q}")
        if not self.blocks or any(int(b) < 1 for b in self.blocks):
            raise ParameterError(f"Block lengths must be positive: {self.blocks}")

    @classmethod
    def besov(cls, q: float, p: float, levels: int) -> "MixedNormSpace":
        """Blocks of lengths 1, 2, ..., levels."""
        return cls(q, p, tuple(range(1, levels + 1)))

    @property
    def label(self) -> str:
        blocks = ",".join(str(b) for b in self.blocks)
        return f"mixed:q={_fmt(self.q)},p={_fmt(self.p)},blocks={blocks}"

    @property
    def p_exponent(self) -> float:
        return min(self.p, self.q, 1.0)

    @property
    def lattice_unconditional(self) -> bool:
        return True

    @property
    def dimension(self) -> int:
        return int(sum(self.blocks))

    def norm(self, f: SpVec) -> float:
        if f.max_index > self.dimension:
            raise ParameterError(
                f"Index {f.max_index} lies beyond the {self.dimension} coordinates of {self.label}"
            )
        if not f:
            return 0.0
        edges = np.cumsum((0,) + self.blocks)
        block_of = np.searchsorted(edges, f.indices - 1, side="right") - 1
        inner = LpSpace(self.p)
        block_norms = []
        for b in np.unique(block_of).tolist():
            mask = block_of == b
            block_norms.append(inner.norm(SpVec._from_sorted(f.indices[mask], f.values[mask])))
        return LpSpace(self.q).norm(SpVec.from_dense(block_norms))


def _certification_pairs(config: CertificationConfig) -> List[Tuple[SpVec, SpVec]]:
    """Structured rearrangement pairs followed by seeded random pairs."""
    rng = np.random.default_rng(config.seed)
    pairs: List[Tuple[SpVec, SpVec]] = []
    for t in np.linspace(0.0, 1.0, 11):
        pairs.append((SpVec.from_dense([1.0, t]), SpVec.from_dense([t, 1.0])))
    for _ in range(config.pairs // 4):
        k = int(rng.integers(2, config.dim + 1))
        decreasing = np.sort(rng.random(k))[::-1]
        pairs.append((SpVec.from_dense(decreasing), SpVec.from_dense(decreasing[::-1])))
        pairs.append((SpVec.from_dense(decreasing), SpVec.from_dense(rng.permutation(decreasing))))
    while len(pairs) < config.pairs + 11:
        k = int(rng.integers(1, config.dim + 1))
        f = SpVec.from_dense(rng.standard_normal(k))
        g = SpVec.from_dense(rng.standard_normal(int(rng.integers(1, config.dim + 1))))
        pairs.append((f, g))
    return pairs


def certify_exponent(
    space: SequenceSpace, upper: float = 1.0, config: CertificationConfig = DEFAULT_CERTIFICATION
) -> float:
    """
    Largest ladder exponent r <= upper passing the sampled r-triangle test.

    Args:
        space: Space whose norm is tested (its own p_exponent is not consulted)
        upper: Analytic ceiling for the exponent
        config: Ladder, sample sizes and tolerance

    Returns:
        The certified exponent.
    """
    cache: Dict[SpVec, float] = {}

    def cached(f: SpVec) -> float:
        if f not in cache:
            cache[f] = space.norm(f)
        return cache[f]

    triples = [(cached(f + g), cached(f), cached(g)) for f, g in _certification_pairs(config)]
    for r in config.ladder:
        if r > upper:
            continue
        if all(s**r <= a**r + b**r + config.tol * max(1.0, s**r) for s, a, b in triples):
            logger.debug("exponent_certified", space=space.label, exponent=r)
            return r
    raise ParameterError(f"No exponent on the ladder {config.ladder} certified for {space.label}")
