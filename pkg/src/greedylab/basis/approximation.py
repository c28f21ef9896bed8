"""
Best m-term errors.

sigma_tilde is the best error by coordinate projections, sigma the best
error by arbitrary m-term combinations. On lattice-unconditional models both
reduce to a search over index sets; elsewhere sigma refines the coefficients
of the best candidate sets by coordinate descent and reports an upper bound.
"""

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np
import structlog

from greedylab.basis.greedy import (
    LEVEL_CAP,
    VectorLike,
    coefficients_of,
    enumerate_greedy_sets,
    greedy_set,
    magnitude_levels,
)
from greedylab.basis.models import BasisModel, ModelLike, as_model
from greedylab.errors import BudgetExceededError, ParameterError
from greedylab.foundations.contracts import SearchMode
from greedylab.foundations.vectors import SpVec

logger = structlog.get_logger(__name__)

IndexSet = FrozenSet[int]


@dataclass
class SigmaConfig:
    """Search budget of the best m-term error functionals."""

    binomial_cap: int = 10**6  # Exact mode enumerates at most this many sets
    random_subsets: int = 1000  # Random candidates in heuristic mode
    level_cap: int = 12  # Largest number of levels combined exhaustively
    refine_top: int = 8  # Candidate sets refined by coordinate descent
    sweeps: int = 20  # Coordinate descent sweeps
    grid_support: int = 6  # Largest support confirmed on the coefficient grid
    grid_cap: int = 200_000  # Largest coefficient grid evaluated
    seed: int = 0
    tol: float = 1e-9


DEFAULT_SIGMA = SigmaConfig()


@dataclass
class BestTermError:
    """
    Value of a best m-term error search.

    ``is_exact`` is False when the value is only an upper bound for the
    infimum (heuristic set search or refined coefficients).
    """

    value: float
    is_exact: bool
    witness: IndexSet  # The set B
    approximant: SpVec  # The m-term vector subtracted from f


def _subset_count(n: int, sizes: Iterable[int]) -> int:
    return sum(comb(n, k) for k in sizes)


def _exact_candidates(
    support: List[int], sizes: List[int], cap: int
) -> Iterable[IndexSet]:
    count = _subset_count(len(support), sizes)
    if count > cap:
        raise BudgetExceededError(
            f"Exact search needs {count} subsets of a support of size {len(support)}, cap is {cap}"
        )
    for k in sizes:
        for chosen in combinations(support, k):
            yield frozenset(chosen)


def _heuristic_candidates(f: SpVec, m: int, config: SigmaConfig) -> List[IndexSet]:
    seen: Dict[IndexSet, None] = {}
    for k in range(m + 1):
        try:
            for chosen in enumerate_greedy_sets(f, k, LEVEL_CAP):
                seen[chosen] = None
        except BudgetExceededError:
            seen[greedy_set(f, k)] = None
    levels = [set(level) for _, level in magnitude_levels(f)]
    if len(levels) <= config.level_cap:
        for bits in range(1, 2 ** len(levels)):
            union = set().union(*(levels[j] for j in range(len(levels)) if bits >> j & 1))
            if len(union) <= m:
                seen[frozenset(union)] = None
    rng = np.random.default_rng(config.seed)
    support = f.indices
    for _ in range(config.random_subsets):
        size = int(rng.integers(0, m + 1))
        seen[frozenset(rng.choice(support, size=size, replace=False).tolist())] = None
    return list(seen)


def _candidate_sets(
    basis: BasisModel, f: SpVec, m: int, mode: SearchMode, config: SigmaConfig
) -> Tuple[Iterable[IndexSet], bool]:
    support = f.indices.tolist()
    if mode == SearchMode.HEURISTIC:
        return _heuristic_candidates(f, m, config), False
    # Larger sets never hurt a lattice-unconditional norm
    sizes = [m] if basis.lattice_unconditional else list(range(m + 1))
    return _exact_candidates(support, sizes, config.binomial_cap), True


def _check_m(f: SpVec, m: int) -> None:
    if m < 0:
        raise ParameterError(f"m must be >= 0, got {m}")


def sigma_tilde(
    model: ModelLike,
    f: VectorLike,
    m: int,
    mode: SearchMode = SearchMode.EXACT,
    config: Optional[SigmaConfig] = None,
) -> BestTermError:
    """
    Best error by projections, min over |B| <= m of ||f - S_B f||.

    Args:
        model: Basis model or bare space
        f: Coefficient vector
        m: Number of terms
        mode: Exhaustive search or heuristic upper bound
        config: Search budget

    Returns:
        BestTermError with the minimizing set.

    Raises:
        BudgetExceededError: In exact mode, past the binomial cap.
    """
    config = config or DEFAULT_SIGMA
    basis = as_model(model)
    coefficients = coefficients_of(basis, f)
    _check_m(coefficients, m)
    if m >= len(coefficients):
        return BestTermError(0.0, True, coefficients.support, coefficients)
    candidates, exact = _candidate_sets(basis, coefficients, m, mode, config)
    best_value = np.inf
    best_set: IndexSet = frozenset()
    evaluations = 0
    for chosen in candidates:
        value = basis.norm(coefficients.without(chosen))
        evaluations += 1
        if value < best_value:
            best_value, best_set = value, chosen
    logger.debug(
        "sigma_tilde_searched", model=basis.label, m=m, mode=mode.value, evaluations=evaluations
    )
    return BestTermError(float(best_value), exact, best_set, coefficients.restrict(best_set))


def _coordinate_descent(
    basis: BasisModel, f: SpVec, chosen: IndexSet, config: SigmaConfig
) -> Tuple[float, Dict[int, float]]:
    from scipy.optimize import minimize_scalar

    coefficients = {i: f[i] for i in sorted(chosen)}
    scale = max(f.max_abs(), 1.0)

    def error(values: Dict[int, float]) -> float:
        return basis.norm(f - SpVec(values))

    current = error(coefficients)
    for _ in range(config.sweeps):
        before = current
        for index in coefficients:
            start = coefficients[index]

            def along(t: float, index: int = index) -> float:
                trial = dict(coefficients)
                trial[index] = t
                return error(trial)

            result = minimize_scalar(
                along,
                bounds=(start - 2.0 * scale, start + 2.0 * scale),
                method="bounded",
                options={"xatol": config.tol * scale},
            )
            if result.fun < current:
                coefficients[index] = float(result.x)
                current = float(result.fun)
        if before - current <= config.tol * max(before, 1.0):
            break
    return current, coefficients


def _grid_minimum(
    basis: BasisModel, f: SpVec, chosen: IndexSet, config: SigmaConfig
) -> Optional[Tuple[float, Dict[int, float]]]:
    levels = sorted({abs(v) for v in f.values.tolist()})
    grid = [0.0] + [s * level for level in levels for s in (1.0, -1.0)]
    order = sorted(chosen)
    if len(grid) ** len(order) > config.grid_cap:
        return None
    best = (np.inf, {})
    for point in product(grid, repeat=len(order)):
        values = dict(zip(order, point))
        value = basis.norm(f - SpVec(values))
        if value < best[0]:
            best = (value, values)
    return best


def sigma(
    model: ModelLike,
    f: VectorLike,
    m: int,
    mode: SearchMode = SearchMode.EXACT,
    config: Optional[SigmaConfig] = None,
) -> BestTermError:
    """
    Best m-term error, inf over |B| <= m and scalars b_n of ||f - sum b_n x_n||.

    Lattice-unconditional models take b_n = a_n on the best set. Other models
    refine the ``refine_top`` best projection candidates by coordinate
    descent; the result is exact only when a coefficient grid on small
    supports reproduces it.
    """
    config = config or DEFAULT_SIGMA
    basis = as_model(model)
    coefficients = coefficients_of(basis, f)
    _check_m(coefficients, m)
    if basis.lattice_unconditional or m >= len(coefficients):
        return sigma_tilde(basis, coefficients, m, mode, config)

    candidates, _ = _candidate_sets(basis, coefficients, m, mode, config)
    scored = sorted(
        ((basis.norm(coefficients.without(chosen)), sorted(chosen)) for chosen in candidates),
        key=lambda item: (item[0], item[1]),
    )
    best_value = np.inf
    best_set: IndexSet = frozenset()
    best_values: Dict[int, float] = {}
    for _, order in scored[: config.refine_top]:
        chosen = frozenset(order)
        value, values = _coordinate_descent(basis, coefficients, chosen, config)
        if value < best_value:
            best_value, best_set, best_values = value, chosen, values

    exact = False
    if mode == SearchMode.EXACT and len(coefficients) <= config.grid_support:
        grid_best = np.inf
        grid_values: Dict[int, float] = {}
        grid_set: IndexSet = frozenset()
        complete = True
        for _, order in scored:
            found = _grid_minimum(basis, coefficients, frozenset(order), config)
            if found is None:
                complete = False
                break
            if found[0] < grid_best:
                grid_best, grid_values, grid_set = found[0], found[1], frozenset(order)
        if complete:
            tol = config.tol * max(best_value, 1.0)
            exact = abs(grid_best - best_value) <= 10 * tol
            if grid_best < best_value:
                best_value, best_values, best_set = grid_best, grid_values, grid_set
    logger.debug(
        "sigma_refined", model=basis.label, m=m, value=float(best_value), exact=exact
    )
    return BestTermError(float(best_value), exact, best_set, SpVec(best_values))
