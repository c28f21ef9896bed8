"""
Renormings under which greedy-type constants become one.

chain0 takes the sup of ||S_{A2 minus A1} f|| over nested greedy pairs,
trunc1 the sup of ||T(f, A)||_0 over strictly greedy sets, and almost_a the
inf of ||f - S_A f + z|| over admissible pairs (A, z). The first two are exact
for finitely supported f. almost_a searches z among sign vectors at one level
on a block of fresh indices, so its value is an upper bound for the inf.
"""

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from greedylab.basis.greedy import (
    PAIR_CAP,
    all_greedy_sets,
    nested_greedy_pairs,
    strictly_greedy_sets,
    truncation_T,
)
from greedylab.basis.models import ModelLike, as_model
from greedylab.errors import BudgetExceededError, CollisionError, ParameterError
from greedylab.foundations.contracts import RenormKind
from greedylab.foundations.vectors import SignPattern, SpVec

logger = structlog.get_logger(__name__)

SUBSET_CAP = 5000  # Exhaustive A enumeration limit for almost_a


@dataclass
class RenormedSpace:
    """A base model with one of the three renormings."""

    base: ModelLike
    kind: RenormKind
    budget: int = 3  # Largest |A| and |supp z| searched by almost_a
    sign_draws: int = 8  # Random sign patterns per block size for almost_a
    pair_cap: int = PAIR_CAP
    seed: int = 0

    def __post_init__(self) -> None:
        self.base = as_model(self.base)
        self.kind = RenormKind(self.kind)
        if self.budget < 0:
            raise ParameterError(f"budget must be >= 0, got {self.budget}")

    @property
    def label(self) -> str:
        return f"{self.kind.value}[{self.base.label}]"


def _chain0(r: RenormedSpace, f: SpVec) -> float:
    best = 0.0
    for inner, outer in nested_greedy_pairs(f, r.pair_cap):
        best = max(best, r.base.norm(f.restrict(outer - inner)))
    return best


def _trunc1(r: RenormedSpace, f: SpVec) -> float:
    return max(
        _chain0(r, truncation_T(r.base, f, chosen)) for chosen in strictly_greedy_sets(f)
    )


@dataclass
class AdmissiblePairs:
    """Search space of almost_a: the z level and the first fresh index."""

    level: float
    fresh_start: int
    budget: int
    sign_draws: int
    seed: int
    subsets: List[Tuple[int, ...]] = field(default_factory=list)

    def signs(self, k: int) -> Iterator[SignPattern]:
        block = range(self.fresh_start, self.fresh_start + k)
        if k <= 4:
            for bits in range(2**k):
                yield SignPattern.from_bits(block, bits)
            return
        yield SignPattern.all_plus(block)
        yield SignPattern.alternating(block)
        rng = np.random.default_rng([self.seed, k])
        for _ in range(self.sign_draws):
            yield SignPattern.from_bits(block, int(rng.integers(0, 2**k)))


def admissible_pairs(
    r: RenormedSpace,
    f: SpVec,
    level: Optional[float] = None,
    fresh_start: Optional[int] = None,
) -> AdmissiblePairs:
    """
    The almost_a search space for f.

    Args:
        r: Renormed space supplying the budget
        f: Vector whose pairs are searched
        level: Modulus of z; defaults to max |coefficient of f| and must dominate it
        fresh_start: First index of the z block; defaults to just past supp(f)

    Raises:
        CollisionError: If the fresh block meets supp(f).
    """
    top = f.max_abs() if f else 0.0
    level = top if level is None else level
    if level < top:
        raise ParameterError(f"z level {level} is below max |coefficient| {top}")
    start = (f.max_index + 1 if f else 1) if fresh_start is None else fresh_start
    block = set(range(start, start + r.budget))
    overlap = sorted(block & f.support)
    if overlap:
        raise CollisionError(f"Fresh indices {overlap} collide with the support of f")
    support = f.indices.tolist()
    subsets: List[Tuple[int, ...]] = []
    sizes = range(min(r.budget, len(support)) + 1)
    if sum(comb(len(support), k) for k in sizes) <= SUBSET_CAP:
        subsets = [c for k in sizes for c in combinations(support, k)]
    else:
        seen = {tuple(sorted(s)) for s in all_greedy_sets(f) if len(s) <= r.budget}
        rng = np.random.default_rng([r.seed, len(support)])
        for _ in range(SUBSET_CAP):
            k = int(rng.integers(0, r.budget + 1))
            seen.add(tuple(sorted(int(i) for i in rng.choice(support, size=k, replace=False))))
        subsets = sorted(seen, key=lambda s: (len(s), s))
    return AdmissiblePairs(level, start, r.budget, r.sign_draws, r.seed, subsets)


def _almost_a(r: RenormedSpace, f: SpVec, pairs: AdmissiblePairs) -> Tuple[float, SpVec]:
    best = r.base.norm(f)
    best_vector = f
    for chosen in pairs.subsets:
        rest = f.without(chosen)
        for k in range(len(chosen), pairs.budget + 1):
            if k == 0:
                continue
            for eps in pairs.signs(k):
                candidate = rest + eps.indicator(pairs.level)
                value = r.base.norm(candidate)
                if value < best:
                    best, best_vector = value, candidate
    return best, best_vector


def renorm_eval(
    r: RenormedSpace,
    f: SpVec,
    level: Optional[float] = None,
    fresh_start: Optional[int] = None,
) -> float:
    """
    Renormed quasi-norm of f.

    ``level`` and ``fresh_start`` only affect almost_a; see admissible_pairs.

    Raises:
        BudgetExceededError: chain0/trunc1 past the nested-pair cap.
        CollisionError: almost_a fresh block meets supp(f).
    """
    if r.kind == RenormKind.CHAIN0:
        return _chain0(r, f)
    if r.kind == RenormKind.TRUNC1:
        return _trunc1(r, f)
    return _almost_a(r, f, admissible_pairs(r, f, level, fresh_start))[0]


@dataclass
class RenormReport:
    """Outcome of the isometric-property check of one renorming."""

    kind: RenormKind
    space: str
    samples: int
    instances: int = 0
    violations: int = 0
    worst_margin: float = np.inf  # min over instances of rhs - lhs
    worst_lhs: float = 0.0
    worst_rhs: float = 0.0
    witness: Optional[SpVec] = None
    note: str = ""
    skipped: int = 0  # samples dropped past the enumeration caps
    skip_reason: str = ""

    @property
    def complete(self) -> bool:
        return self.skipped == 0

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.complete

    def skip(self, reason: str) -> None:
        self.skipped += 1
        if not self.skip_reason:
            self.skip_reason = reason

    def record(self, lhs: float, rhs: float, f: SpVec, tol: float, note: str = "") -> None:
        self.instances += 1
        margin = rhs - lhs
        if lhs > rhs + tol * max(rhs, 1.0):
            self.violations += 1
        if margin < self.worst_margin:
            self.worst_margin, self.worst_lhs, self.worst_rhs = margin, lhs, rhs
            self.witness, self.note = f, note


def renorm_isometry_check(
    r: RenormedSpace, samples: Sequence[SpVec], tol: float = 1e-9
) -> RenormReport:
    """
    Check the isometric properties the renorming is built for.

    chain0: ||S_{A2 minus A1} f||_0 <= ||f||_0 over nested greedy pairs.
    trunc1: ||T(f, A)||_1 <= ||f||_1 over strictly greedy sets.
    almost_a: ||f - S_B f||_a <= ||f||_a over greedy B, and ||S_B f||_a <= ||f||_a
    when the base is lattice unconditional (so C_qg = 1). Both sides use the
    z level and fresh block of f.
    """
    report = RenormReport(kind=r.kind, space=r.base.label, samples=len(samples))
    for f in samples:
        if not f:
            continue
        try:
            if r.kind == RenormKind.CHAIN0:
                whole = _chain0(r, f)
                for inner, outer in nested_greedy_pairs(f, r.pair_cap):
                    part = f.restrict(outer - inner)
                    report.record(_chain0(r, part), whole, f, tol, "S_{A2-A1}")
            elif r.kind == RenormKind.TRUNC1:
                whole = _trunc1(r, f)
                for chosen in strictly_greedy_sets(f):
                    truncated = truncation_T(r.base, f, chosen)
                    report.record(_trunc1(r, truncated), whole, f, tol, f"A={sorted(chosen)}")
            else:
                pairs = admissible_pairs(r, f)
                whole = _almost_a(r, f, pairs)[0]
                for chosen in all_greedy_sets(f):
                    if not chosen:
                        continue
                    rest = f.without(chosen)
                    rest_pairs = admissible_pairs(r, rest, pairs.level, pairs.fresh_start)
                    report.record(_almost_a(r, rest, rest_pairs)[0], whole, f, tol, "f-S_B f")
                    if r.base.lattice_unconditional:
                        head = f.restrict(chosen)
                        head_pairs = admissible_pairs(r, head, pairs.level, pairs.fresh_start)
                        report.record(_almost_a(r, head, head_pairs)[0], whole, f, tol, "S_B f")
        except BudgetExceededError as exc:
            report.skip(str(exc))
            logger.warning("renorm_sample_skipped", kind=r.kind.value, reason=str(exc))
    logger.info(
        "renorm_checked",
        kind=r.kind.value,
        space=r.base.label,
        instances=report.instances,
        violations=report.violations,
        skipped=report.skipped,
    )
    return report
