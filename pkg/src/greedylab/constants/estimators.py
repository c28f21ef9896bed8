"""
Witness-certified lower bounds for the named basis constants.

Every constant is the supremum of a ratio of two quasi-norms over some family
of vectors, sets and signs. The estimators below walk a deterministic
TestFamily, keep the largest ratio seen and the two vectors that realize it,
so each reported value can be re-derived from its witness by one norm
evaluation per side.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from greedylab.basis.approximation import BestTermError, SigmaConfig, sigma, sigma_tilde
from greedylab.basis.greedy import (
    all_greedy_sets,
    greedy_set,
    nested_greedy_pairs,
    truncation_T,
    truncation_U,
)
from greedylab.basis.models import BasisModel, LatticeModel, ModelLike, as_model
from greedylab.constants.families import TestFamily
from greedylab.errors import BudgetExceededError, UnsupportedError
from greedylab.foundations.contracts import ConstantKind, SearchMode
from greedylab.foundations.vectors import SignPattern, SpVec
from greedylab.spaces.norms import C0Space, LorentzSpace, LpSpace
from greedylab.spaces.regularity import weight_report

logger = structlog.get_logger(__name__)

DEFAULT_FAMILY = TestFamily()
CARRIER_PAIRS = 16  # Best f = 0 set pairs reused with nonzero carriers
SIGMA_VECTORS = 16  # Vectors searched for C_g on models without lattice structure
SIGMA_SEARCH = SigmaConfig(refine_top=2, sweeps=5)

IndexTuple = Tuple[int, ...]
IndexSet = FrozenSet[int]


@dataclass
class Witness:
    """
    Vectors realizing a ratio: factor * ||numerator|| / ||denominator||.

    A missing denominator stands for 1.
    """

    numerator: SpVec
    denominator: Optional[SpVec] = None
    factor: float = 1.0
    note: str = ""

    def recheck(self, model: ModelLike) -> float:
        """Recompute the ratio from scratch."""
        basis = as_model(model)
        bottom = basis.norm(self.denominator) if self.denominator is not None else 1.0
        return self.factor * basis.norm(self.numerator) / bottom

    def describe(self) -> str:
        """Vector literals of both sides, ready for the ``norm`` command."""
        text = f"num={self.numerator.serialize()}"
        if self.denominator is not None:
            text += f";den={self.denominator.serialize()}"
        if self.factor != 1.0:
            text += f";factor={self.factor!r}"
        if self.note:
            text += f";{self.note}"
        return text


@dataclass
class ConstantEstimate:
    """Lower bound for one constant with the witness attaining it."""

    kind: ConstantKind
    value: float
    witness: Witness
    budget: str
    evaluations: int = 0
    model: str = ""
    sigma_exact: bool = True  # every sigma behind the witness was computed exactly


class NormCache:
    """Memoized quasi-norm of one basis model; safe to share between threads."""

    def __init__(self, basis: BasisModel):
        self.basis = basis
        self._values: Dict[SpVec, float] = {}

    def __call__(self, f: SpVec) -> float:
        value = self._values.get(f)
        if value is None:
            value = self.basis.norm(f)
            self._values[f] = value
        return value

    def __len__(self) -> int:
        return len(self._values)


class _RatioSearch:
    """Running maximum of a ratio with its witness and an evaluation budget."""

    def __init__(self, kind: ConstantKind, norm: NormCache, cap: int):
        self.kind = kind
        self._norm = norm
        self.cap = cap
        self.evaluations = 0
        self.sigma_exact = True  # whether the current witness used only exact sigma values
        unit = SpVec.unit(1)
        self.witness = Witness(unit, unit, note="trivial")
        self.value = self.norm(unit) / self.norm(unit)

    @property
    def exhausted(self) -> bool:
        return self.evaluations >= self.cap

    def norm(self, f: SpVec) -> float:
        self.evaluations += 1
        return self._norm(f)

    def offer(
        self,
        numerator: SpVec,
        denominator: Optional[SpVec],
        factor: float = 1.0,
        note: str = "",
        exact: bool = True,
    ) -> None:
        if self.exhausted:
            return
        bottom = self.norm(denominator) if denominator is not None else 1.0
        if bottom <= 0.0:
            return
        value = factor * self.norm(numerator) / bottom
        if value > self.value:
            self.value = value
            self.witness = Witness(numerator, denominator, factor, note)
            self.sigma_exact = exact


def dual_fundamental(model: ModelLike, m: int) -> float:
    """
    Closed-form dual fundamental function phi*_u(m) for the supported spaces.

    Raises:
        UnsupportedError: When the dual norm has no closed form here.
    """
    basis = as_model(model)
    if isinstance(basis, LatticeModel) and basis.block is None:
        space = basis.space
        if isinstance(space, LpSpace):
            if space.p < 1.0:
                return 1.0
            return float(m) ** (1.0 - 1.0 / space.p)
        if isinstance(space, C0Space):
            return float(m)
        if isinstance(space, LorentzSpace) and space.p == 1.0 and space.q >= 1.0:
            if weight_report(space.weight).reciprocal_regular:
                return m / space.weight.primitive_at(m)
    raise UnsupportedError(f"No dual fundamental function available for {basis.label}")


class _Context:
    """Shared tables for one (model, family) pair."""

    def __init__(self, basis: BasisModel, family: TestFamily, norm: NormCache):
        self.basis = basis
        self.family = family
        self.norm = norm
        bound = basis.dimension
        self.dimension = family.dimension if bound is None else min(family.dimension, bound)

    def patterns(self, indices: Sequence[int]) -> List[SignPattern]:
        # Norms monotone in the moduli do not see signs
        if self.basis.lattice_unconditional:
            return [SignPattern.all_plus(indices)]
        return self.family.sign_patterns(indices)

    @cached_property
    def vectors(self) -> List[SpVec]:
        return self.family.vectors(self.dimension)

    @cached_property
    def sets(self) -> List[IndexTuple]:
        return self.family.index_sets(self.dimension)

    @cached_property
    def plain_norms(self) -> np.ndarray:
        return np.array([self.norm(SpVec.indicator(s)) for s in self.sets])

    @cached_property
    def signed_extremes(self) -> List[Tuple[float, SignPattern, float, SignPattern]]:
        """Per set: largest and smallest ||1_{eps,A}|| over the sign family."""
        table = []
        for chosen in self.sets:
            scored = [(self.norm(eps.indicator()), eps) for eps in self.patterns(chosen)]
            high = max(scored, key=lambda item: item[0])
            low = min(scored, key=lambda item: item[0])
            table.append((high[0], high[1], low[0], low[1]))
        return table

    def warm(self, plain: bool, signed: bool) -> None:
        """Fill the set tables before threads share them."""
        if plain:
            _ = self.plain_norms
        if signed:
            _ = self.signed_extremes

    @cached_property
    def cardinalities(self) -> np.ndarray:
        return np.array([len(s) for s in self.sets])

    @cached_property
    def masks(self) -> np.ndarray:
        return np.array(
            [sum(1 << (i - 1) for i in s) for s in self.sets], dtype=np.uint64
        )


# --- unconditionality ---


def _suppression(search: _RatioSearch, ctx: _Context) -> None:
    for k, f in enumerate(ctx.vectors):
        for chosen in ctx.family.subsets_of(f.indices.tolist(), f"su:{k}"):
            search.offer(f.restrict(chosen), f, note=f"A={list(chosen)}")
        if search.exhausted:
            return


def _lattice(search: _RatioSearch, ctx: _Context) -> None:
    for k, f in enumerate(ctx.vectors):
        for gamma in ctx.family.multipliers(f.indices.tolist(), f"u:{k}"):
            search.offer(f.multiply(dict(gamma.items()), default=0.0), f, note="multiplier")
        if search.exhausted:
            return


def _by_cardinality(ctx: _Context) -> List[IndexTuple]:
    return sorted(ctx.sets, key=lambda s: (-len(s), s))


def _succ(search: _RatioSearch, ctx: _Context) -> None:
    for chosen in _by_cardinality(ctx):
        for eps in ctx.patterns(chosen):
            whole = eps.indicator()
            for part in ctx.family.subsets_of(chosen, f"sc:{chosen}"):
                if part:
                    search.offer(eps.restrict(part).indicator(), whole, note="B subset A")
        if search.exhausted:
            return


def _lucc(search: _RatioSearch, ctx: _Context) -> None:
    for chosen in _by_cardinality(ctx):
        for eps in ctx.patterns(chosen):
            for a in ctx.family.level_draws(chosen, f"lc:{chosen}"):
                search.offer(eps.indicator(), a.multiply(dict(eps.items())), note="a_n >= 1")
        if search.exhausted:
            return


def _lpu(search: _RatioSearch, ctx: _Context) -> None:
    for chosen in _by_cardinality(ctx):
        patterns = ctx.patterns(chosen)
        small = [eps.indicator() for eps in patterns]
        small.extend(ctx.family.multipliers(chosen, f"pu:{chosen}") if len(chosen) <= 3 else [])
        large = [
            a.multiply(dict(eps.items()))
            for eps in patterns
            for a in ctx.family.level_draws(chosen, f"pu:{chosen}")
        ]
        small = [v for v in small if v]
        if not small:
            continue
        top = max(small, key=lambda v: (search.norm(v), v.serialize()))
        bottom = min(large, key=lambda v: (search.norm(v), v.serialize()))
        search.offer(top, bottom, note="max|a| <= min|b|")
        if search.exhausted:
            return


# --- greedy-type constants ---


def _greedy_sets(f: SpVec) -> List[IndexSet]:
    try:
        return [s for s in all_greedy_sets(f) if s]
    except BudgetExceededError:
        return [greedy_set(f, m) for m in range(1, len(f) + 1)]


def _quasi_greedy(search: _RatioSearch, ctx: _Context) -> None:
    for f in ctx.vectors:
        try:
            pairs: Iterable[Tuple[IndexSet, IndexSet]] = list(nested_greedy_pairs(f))
        except BudgetExceededError:
            chain = [greedy_set(f, m) for m in range(len(f) + 1)]
            pairs = [(inner, outer) for outer in chain for inner in chain if inner <= outer]
        for inner, outer in pairs:
            if outer - inner:
                search.offer(f.restrict(outer - inner), f, note="A2 minus A1")
        if search.exhausted:
            return


def _truncation(search: _RatioSearch, ctx: _Context, operator: Callable[..., SpVec]) -> None:
    for f in ctx.vectors:
        for chosen in _greedy_sets(f):
            search.offer(operator(ctx.basis, f, chosen), f, note=f"A={sorted(chosen)}")
        if search.exhausted:
            return


def _sigma_note(m: int, best: BestTermError) -> str:
    return f"|A|={m}" if best.is_exact else f"|A|={m};sigma searched, upper bound"


def _almost_greedy(search: _RatioSearch, ctx: _Context) -> None:
    for f in ctx.vectors:
        for m in range(1, len(f)):
            try:
                best = sigma_tilde(ctx.basis, f, m, SearchMode.EXACT)
            except BudgetExceededError:
                best = sigma_tilde(ctx.basis, f, m, SearchMode.HEURISTIC)
            rest = f.without(best.witness)
            for chosen in _greedy_sets(f):
                if len(chosen) == m:
                    search.offer(
                        f.without(chosen), rest, note=_sigma_note(m, best), exact=best.is_exact
                    )
        if search.exhausted:
            return


def _greedy(search: _RatioSearch, ctx: _Context) -> None:
    vectors = ctx.vectors
    if not ctx.basis.lattice_unconditional:
        vectors = vectors[:SIGMA_VECTORS]
    for f in vectors:
        for m in range(1, len(f)):
            try:
                best = sigma(ctx.basis, f, m, SearchMode.EXACT, SIGMA_SEARCH)
            except BudgetExceededError:
                best = sigma(ctx.basis, f, m, SearchMode.HEURISTIC, SIGMA_SEARCH)
            rest = f - best.approximant
            for chosen in _greedy_sets(f):
                if len(chosen) == m:
                    search.offer(
                        f.without(chosen), rest, note=_sigma_note(m, best), exact=best.is_exact
                    )
        if search.exhausted:
            return


# --- democracy ---


def _democracy_pairs(
    ctx: _Context, signed: bool, disjoint: bool
) -> List[Tuple[float, int, int]]:
    """Per set A the best (ratio, A, B) with |A| <= |B|, sorted by decreasing ratio."""
    if signed:
        extremes = ctx.signed_extremes
        highs = np.array([e[0] for e in extremes])
        lows = np.array([e[2] for e in extremes])
    else:
        highs = lows = ctx.plain_norms
    cards = ctx.cardinalities
    masks = ctx.masks
    ranked = []
    for a in range(len(ctx.sets)):
        valid = cards >= cards[a]
        if disjoint:
            valid &= (masks & masks[a]) == 0
        if not valid.any():
            continue
        candidates = np.flatnonzero(valid)
        b = int(candidates[np.argmin(lows[candidates])])
        ranked.append((float(highs[a] / lows[b]), a, b))
    ranked.sort(key=lambda item: (-item[0], item[1], item[2]))
    return ranked


def _indicators(ctx: _Context, a: int, b: int, signed: bool) -> Tuple[SpVec, SpVec]:
    if signed:
        return ctx.signed_extremes[a][1].indicator(), ctx.signed_extremes[b][3].indicator()
    return SpVec.indicator(ctx.sets[a]), SpVec.indicator(ctx.sets[b])


def _democracy(search: _RatioSearch, ctx: _Context, signed: bool, disjoint: bool) -> None:
    ranked = _democracy_pairs(ctx, signed, disjoint)
    if ranked:
        _, a, b = ranked[0]
        top, bottom = _indicators(ctx, a, b, signed)
        search.offer(top, bottom, note=f"A={list(ctx.sets[a])};B={list(ctx.sets[b])}")


def _slc(search: _RatioSearch, ctx: _Context) -> None:
    """Gamma: disjoint signed democracy, then with carriers f off A and B."""
    ranked = _democracy_pairs(ctx, signed=True, disjoint=True)
    if not ranked:
        return
    _, a, b = ranked[0]
    top, bottom = _indicators(ctx, a, b, True)
    search.offer(top, bottom, note="f=0")
    pairs = [(a, b) for _, a, b in ranked[:CARRIER_PAIRS]]
    rng = ctx.family.rng("gamma:pairs")
    for _ in range(ctx.family.n_random):
        a = int(rng.integers(0, len(ctx.sets)))
        free = [
            k for k in range(len(ctx.sets))
            if len(ctx.sets[k]) >= len(ctx.sets[a]) and not set(ctx.sets[k]) & set(ctx.sets[a])
        ]
        if free:
            pairs.append((a, free[int(rng.integers(0, len(free)))]))
    universe = set(range(1, ctx.dimension + 1))
    for a, b in pairs:
        top, bottom = _indicators(ctx, a, b, True)
        rest = sorted(universe - set(ctx.sets[a]) - set(ctx.sets[b]))
        for f in ctx.family.carriers(rest, f"gamma:{a}:{b}"):
            search.offer(f + top, f + bottom, note="carrier")
        if search.exhausted:
            return


def _qglc(search: _RatioSearch, ctx: _Context) -> None:
    universe = set(range(1, ctx.dimension + 1))
    for chosen in _by_cardinality(ctx):
        patterns = ctx.patterns(chosen)
        rest = sorted(universe - set(chosen))
        for eps in dict.fromkeys([patterns[0], patterns[-1]]):
            block = eps.indicator()
            for f in ctx.family.carriers(rest, f"ql:{chosen}"):
                search.offer(f, f + block, note="||f||")
                search.offer(block, f + block, note="||1_eps,A||")
        if search.exhausted:
            return


def _bidemocracy(search: _RatioSearch, ctx: _Context, signed: bool) -> None:
    duals = [dual_fundamental(ctx.basis, m) for m in range(1, ctx.dimension + 1)]
    for k, chosen in enumerate(ctx.sets):
        if signed:
            top = ctx.signed_extremes[k][1].indicator()
        else:
            top = SpVec.indicator(chosen)
        for m in range(len(chosen), ctx.dimension + 1):
            search.offer(top, None, factor=duals[m - 1] / m, note=f"m={m}")
        if search.exhausted:
            return


_ESTIMATORS: Dict[ConstantKind, Callable[[_RatioSearch, _Context], None]] = {
    ConstantKind.K_SU: _suppression,
    ConstantKind.K_U: _lattice,
    ConstantKind.K_SC: _succ,
    ConstantKind.K_LC: _lucc,
    ConstantKind.K_PU: _lpu,
    ConstantKind.C_QG: _quasi_greedy,
    ConstantKind.C_QL: _qglc,
    ConstantKind.C_AG: _almost_greedy,
    ConstantKind.C_G: _greedy,
    ConstantKind.DELTA: lambda s, c: _democracy(s, c, signed=False, disjoint=False),
    ConstantKind.DELTA_D: lambda s, c: _democracy(s, c, signed=False, disjoint=True),
    ConstantKind.DELTA_S: lambda s, c: _democracy(s, c, signed=True, disjoint=False),
    ConstantKind.DELTA_SD: lambda s, c: _democracy(s, c, signed=True, disjoint=True),
    ConstantKind.GAMMA: _slc,
    ConstantKind.LAMBDA_U: lambda s, c: _truncation(s, c, truncation_U),
    ConstantKind.LAMBDA_T: lambda s, c: _truncation(s, c, truncation_T),
    ConstantKind.DELTA_B: lambda s, c: _bidemocracy(s, c, signed=False),
    ConstantKind.DELTA_SB: lambda s, c: _bidemocracy(s, c, signed=True),
}


_SIGNED_KINDS = {
    ConstantKind.DELTA_S,
    ConstantKind.DELTA_SD,
    ConstantKind.GAMMA,
    ConstantKind.DELTA_SB,
}
_SET_KINDS = _SIGNED_KINDS | {ConstantKind.DELTA, ConstantKind.DELTA_D, ConstantKind.DELTA_B}


def _estimate(kind: ConstantKind, ctx: _Context) -> ConstantEstimate:
    search = _RatioSearch(kind, ctx.norm, ctx.family.max_evaluations)
    _ESTIMATORS[kind](search, ctx)
    if search.exhausted:
        logger.info("search_budget_exhausted", kind=kind.value, model=ctx.basis.label)
    logger.debug(
        "constant_estimated",
        kind=kind.value,
        model=ctx.basis.label,
        value=search.value,
        evaluations=search.evaluations,
    )
    return ConstantEstimate(
        kind=kind,
        value=search.value,
        witness=search.witness,
        budget=ctx.family.describe(),
        evaluations=search.evaluations,
        model=ctx.basis.label,
        sigma_exact=search.sigma_exact,
    )


def estimate_constant(
    kind: ConstantKind,
    model: ModelLike,
    family: Optional[TestFamily] = None,
    cache: Optional[NormCache] = None,
) -> ConstantEstimate:
    """
    Lower bound for one named constant.

    Args:
        kind: Which constant
        model: Basis model or bare space
        family: Search family; defaults to TestFamily()
        cache: Norm cache to share with other estimates of the same model

    Returns:
        ConstantEstimate whose value is the ratio realized by its witness.

    Raises:
        UnsupportedError: Delta_b or Delta_sb without a dual fundamental function.
    """
    basis = as_model(model)
    kind = ConstantKind(kind)
    family = family or DEFAULT_FAMILY
    if kind in (ConstantKind.DELTA_B, ConstantKind.DELTA_SB):
        dual_fundamental(basis, 1)
    ctx = _Context(basis, family, cache or NormCache(basis))
    return _estimate(kind, ctx)


@dataclass
class EstimateTable:
    """Estimates of several constants for one model."""

    model: str
    estimates: Dict[ConstantKind, ConstantEstimate] = field(default_factory=dict)
    unsupported: Dict[ConstantKind, str] = field(default_factory=dict)

    def value(self, kind: ConstantKind) -> float:
        return self.estimates[kind].value

    def __contains__(self, kind: object) -> bool:
        return kind in self.estimates


def estimate_all(
    model: ModelLike,
    family: Optional[TestFamily] = None,
    kinds: Optional[Sequence[ConstantKind]] = None,
    workers: Optional[int] = None,
) -> EstimateTable:
    """
    Estimate several constants of one model in parallel.

    Results do not depend on ``workers``: each kind runs its own sequential
    search and only the norm cache is shared.
    """
    basis = as_model(model)
    family = family or DEFAULT_FAMILY
    selected = list(kinds) if kinds is not None else list(ConstantKind)
    ctx = _Context(basis, family, NormCache(basis))
    table = EstimateTable(model=basis.label)
    runnable = []
    for kind in selected:
        kind = ConstantKind(kind)
        if kind in (ConstantKind.DELTA_B, ConstantKind.DELTA_SB):
            try:
                dual_fundamental(basis, 1)
            except UnsupportedError as exc:
                table.unsupported[kind] = str(exc)
                continue
        runnable.append(kind)
    ctx.warm(any(k in _SET_KINDS for k in runnable), any(k in _SIGNED_KINDS for k in runnable))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda k: _estimate(k, ctx), runnable))
    for estimate in results:
        table.estimates[estimate.kind] = estimate
    logger.info(
        "constants_estimated",
        model=basis.label,
        kinds=len(results),
        unsupported=len(table.unsupported),
        cached_norms=len(ctx.norm),
    )
    return table

