"""
Deterministic search families for constant estimation.

A TestFamily fixes the index range, the coefficient grid and the sign and
subset budgets. Every random draw comes from a generator seeded by the family
seed and a tag naming the draw, so the same family always yields the same
candidates regardless of the order in which kinds are estimated.
"""

import zlib
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from greedylab.errors import ParameterError
from greedylab.foundations.vectors import SignPattern, SpVec

SCALAR_GRID = (-1.0, -0.5, 0.0, 0.5, 1.0)  # Multipliers of modulus at most one


@dataclass
class TestFamily:
    """Search budget shared by every constant estimator."""

    __test__ = False

    dimension: int = 8  # Indices 1..dimension
    levels: Tuple[float, ...] = (1.0, 1.5, 2.0, 4.0)  # Coefficient grid, all >= 1
    exhaustive_subsets: int = 8  # Enumerate every subset up to this many indices
    exhaustive_signs: int = 6  # Enumerate every sign pattern up to this many indices
    n_random: int = 32  # Random draws per family
    carrier_draws: int = 8  # Carrier vectors per set pair for Gamma and C_ql
    max_evaluations: int = 20_000  # Norm evaluations per kind
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ParameterError(f"dimension must be >= 1, got {self.dimension}")
        if not self.levels or min(self.levels) < 1.0:
            raise ParameterError(f"levels must be nonempty and >= 1, got {self.levels}")
        if self.n_random < 0 or self.carrier_draws < 0 or self.max_evaluations < 1:
            raise ParameterError("random draw counts must be >= 0 and the budget >= 1")

    def describe(self) -> str:
        return (
            f"d={self.dimension},subsets<={self.exhaustive_subsets},"
            f"signs<={self.exhaustive_signs},random={self.n_random},seed={self.seed}"
        )

    def rng(self, tag: str) -> np.random.Generator:
        """Generator for one named draw."""
        return np.random.default_rng([self.seed, zlib.crc32(tag.encode())])

    # --- index sets ---

    def index_sets(self, dimension: int) -> List[Tuple[int, ...]]:
        """Nonempty subsets of 1..dimension: all of them, or intervals plus random sets."""
        universe = range(1, dimension + 1)
        if dimension <= self.exhaustive_subsets:
            return [c for k in range(1, dimension + 1) for c in combinations(universe, k)]
        seen = {
            tuple(range(start, stop + 1))
            for start in universe
            for stop in range(start, dimension + 1)
        }
        rng = self.rng(f"sets:{dimension}")
        for k in range(1, dimension + 1):
            for _ in range(self.n_random):
                picked = rng.choice(dimension, size=k, replace=False) + 1
                seen.add(tuple(sorted(int(i) for i in picked)))
        return sorted(seen, key=lambda s: (len(s), s))

    def subsets_of(self, indices: Sequence[int], tag: str) -> Iterator[Tuple[int, ...]]:
        """Subsets of a given set, exhaustive or sampled."""
        items = sorted(indices)
        if len(items) <= self.exhaustive_subsets:
            for k in range(len(items) + 1):
                yield from combinations(items, k)
            return
        yield ()
        yield tuple(items)
        for k in range(1, len(items)):
            yield tuple(items[:k])
            yield tuple(items[k:])
        rng = self.rng(f"subsets:{tag}")
        for _ in range(self.n_random):
            mask = rng.random(len(items)) < 0.5
            yield tuple(i for i, keep in zip(items, mask) if keep)

    # --- signs and scalars ---

    def sign_patterns(self, indices: Sequence[int]) -> List[SignPattern]:
        """All sign patterns on small sets; structured plus random ones otherwise."""
        items = sorted(indices)
        if len(items) <= self.exhaustive_signs:
            return [SignPattern.from_bits(items, bits) for bits in range(2 ** len(items))]
        patterns = [
            SignPattern.all_plus(items),
            SignPattern.alternating(items),
            SignPattern.block_alternating(items, 2),
        ]
        rng = self.rng(f"signs:{items}")
        for _ in range(self.n_random):
            patterns.append(SignPattern.from_bits(items, int(rng.integers(0, 2 ** len(items)))))
        return list(dict.fromkeys(patterns))

    def multipliers(self, indices: Sequence[int], tag: str) -> Iterator[SpVec]:
        """Multiplier sequences with entries in [-1, 1] on the given indices."""
        items = sorted(indices)
        if len(SCALAR_GRID) ** len(items) <= 5**5:
            for grid_point in np.ndindex(*([len(SCALAR_GRID)] * len(items))):
                yield SpVec({i: SCALAR_GRID[g] for i, g in zip(items, grid_point)})
            return
        for pattern in self.sign_patterns(items):
            yield pattern.indicator()
        rng = self.rng(f"multipliers:{tag}")
        for _ in range(self.n_random):
            yield SpVec({i: rng.choice(SCALAR_GRID) for i in items})

    def level_draws(self, indices: Sequence[int], tag: str) -> Iterator[SpVec]:
        """Coefficient vectors with entries from the level grid (all >= 1)."""
        items = sorted(indices)
        top = max(self.levels)
        yield SpVec.indicator(items)
        for i in items:
            yield SpVec({j: (top if j == i else 1.0) for j in items})
        rng = self.rng(f"levels:{tag}")
        for _ in range(max(self.n_random // 4, 1)):
            yield SpVec({i: float(rng.choice(self.levels)) for i in items})

    # --- test vectors ---

    def vectors(self, dimension: int) -> List[SpVec]:
        """Structured vectors first, then random level and Gaussian draws, on 1..dimension."""
        n = np.arange(1, dimension + 1, dtype=np.float64)
        structured = [
            SpVec.from_dense(np.ones(dimension)),
            SpVec.from_dense((-1.0) ** (n - 1)),
            SpVec.from_dense(1.0 / n),
            SpVec.from_dense(n),
            SpVec.from_dense(2.0 ** (1 - n)),
            SpVec.from_dense([self.levels[k % len(self.levels)] for k in range(dimension)]),
        ]
        rng = self.rng(f"vectors:{dimension}")
        drawn: List[SpVec] = []
        for _ in range(self.n_random):
            keep = rng.random(dimension) < 0.75
            keep[rng.integers(0, dimension)] = True
            values = rng.choice(self.levels, size=dimension) * rng.choice([-1.0, 1.0], dimension)
            drawn.append(SpVec.from_dense(np.where(keep, values, 0.0)))
        for _ in range(self.n_random):
            drawn.append(SpVec.from_dense(rng.standard_normal(dimension)))
        return list(dict.fromkeys(structured + drawn))

    def carriers(self, indices: Sequence[int], tag: str) -> Iterator[SpVec]:
        """Vectors with coefficients of modulus at most one supported on the given indices."""
        items = sorted(indices)
        if not items:
            return
        yield SpVec.indicator(items)
        yield SignPattern.alternating(items).indicator()
        rng = self.rng(f"carriers:{tag}")
        for _ in range(self.carrier_draws):
            yield SpVec({i: float(rng.choice(SCALAR_GRID)) for i in items})
