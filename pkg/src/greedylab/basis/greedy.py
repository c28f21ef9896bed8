"""
The thresholding greedy machinery.

Coefficients are ordered by decreasing modulus with ties broken by the
smaller index. Greedy sets are index sets whose coefficients dominate every
coefficient outside; they are enumerated level by level, where a level is
the set of indices sharing one modulus.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import FrozenSet, Iterable, Iterator, List, Tuple, Union

import numpy as np

from greedylab.basis.models import BasisModel, ModelLike, as_model
from greedylab.errors import BudgetExceededError, NotGreedySetError, ParameterError
from greedylab.foundations.vectors import SpVec

LEVEL_CAP = 20  # Largest boundary level enumerated exhaustively
PAIR_CAP = 2**20  # Largest number of nested greedy pairs enumerated

VectorLike = Union[SpVec, np.ndarray]
IndexSet = FrozenSet[int]


@dataclass
class GreedyTrace:
    """Full run of the greedy algorithm on one vector."""

    ordering: List[int]
    greedy_sets: List[IndexSet] = field(default_factory=list)  # A_1, A_2, ..., A_n
    residual_norms: List[float] = field(default_factory=list)  # ||H_m f|| for m = 0..n


def coefficients_of(model: ModelLike, f: VectorLike) -> SpVec:
    """Coefficient vector of f: SpVecs are coefficients already, arrays are ambient vectors."""
    basis = as_model(model)
    if isinstance(f, SpVec):
        basis.check_support(f)
        return f
    coordinates = getattr(basis, "coordinates", None)
    if coordinates is None:
        raise ParameterError(f"{basis.label} cannot read coordinates of an ambient array")
    ambient = np.asarray(f, dtype=np.float64)
    if isinstance(basis, BasisModel) and basis.dimension is None:
        return coordinates(SpVec.from_dense(ambient))
    return coordinates(ambient)


def _order(f: SpVec) -> np.ndarray:
    return f.indices[np.lexsort((f.indices, -np.abs(f.values)))]


def greedy_order(model: ModelLike, f: VectorLike) -> List[int]:
    """
    Greedy ordering of the support: decreasing modulus, ties by smaller index.

    Args:
        model: Basis model whose dual functionals define the coefficients
        f: Coefficient vector or ambient array

    Returns:
        Permutation of supp(f); empty for the zero vector.
    """
    return _order(coefficients_of(model, f)).tolist()


def greedy_set(f: SpVec, m: int) -> IndexSet:
    """A_m(f), the first m indices of the greedy ordering."""
    if not 0 <= m <= len(f):
        raise ParameterError(f"m must lie in 0..{len(f)}, got {m}")
    return frozenset(_order(f)[:m].tolist())


def greedy_projection(model: ModelLike, f: VectorLike, m: int) -> SpVec:
    """G_m(f) = S_{A_m(f)} f."""
    coefficients = coefficients_of(model, f)
    return coefficients.restrict(greedy_set(coefficients, m))


def residual(model: ModelLike, f: VectorLike, m: int) -> SpVec:
    """H_m(f) = f - G_m(f)."""
    coefficients = coefficients_of(model, f)
    return coefficients.without(greedy_set(coefficients, m))


def greedy_trace(model: ModelLike, f: VectorLike) -> GreedyTrace:
    """Ordering, greedy chain and residual norms of f."""
    basis = as_model(model)
    coefficients = coefficients_of(basis, f)
    ordering = _order(coefficients).tolist()
    trace = GreedyTrace(ordering=ordering)
    for m in range(len(ordering) + 1):
        chosen = frozenset(ordering[:m])
        if m:
            trace.greedy_sets.append(chosen)
        trace.residual_norms.append(basis.norm(coefficients.without(chosen)))
    return trace


def magnitude_levels(f: SpVec) -> List[Tuple[float, Tuple[int, ...]]]:
    """Indices grouped by modulus, largest modulus first, indices increasing."""
    levels: List[Tuple[float, Tuple[int, ...]]] = []
    order = _order(f)
    moduli = np.abs(np.array([f[i] for i in order.tolist()]))
    start = 0
    for k in range(1, order.size + 1):
        if k == order.size or moduli[k] != moduli[start]:
            levels.append((float(moduli[start]), tuple(order[start:k].tolist())))
            start = k
    return levels


def is_greedy_set(f: SpVec, indices: Iterable[int], strict: bool = False) -> bool:
    """
    Magnitude test: every modulus inside A dominates every modulus outside.

    Indices of A outside the support count as modulus zero. The empty set is
    greedy.
    """
    chosen = frozenset(int(i) for i in indices)
    if not chosen:
        return True
    inside = min(abs(f[i]) for i in chosen)
    outside = [abs(v) for i, v in f.items() if i not in chosen]
    top = max(outside, default=0.0)
    if strict:
        return inside > top or not outside
    return inside >= top


def enumerate_greedy_sets(f: SpVec, m: int, cap: int = LEVEL_CAP) -> List[IndexSet]:
    """
    All greedy sets of cardinality m inside supp(f).

    Full higher levels plus every subset of the right size of the boundary
    level, in lexicographic order.

    Raises:
        BudgetExceededError: If the boundary level has more than ``cap`` members.
    """
    if not 0 <= m <= len(f):
        raise ParameterError(f"m must lie in 0..{len(f)}, got {m}")
    if m == 0:
        return [frozenset()]
    taken: List[int] = []
    for _, level in magnitude_levels(f):
        if len(taken) + len(level) < m:
            taken.extend(level)
            continue
        if len(taken) + len(level) == m:
            return [frozenset(taken + list(level))]
        if len(level) > cap:
            raise BudgetExceededError(
                f"Boundary level of {len(level)} indices exceeds the cap of {cap}"
            )
        need = m - len(taken)
        return [frozenset(taken + list(extra)) for extra in combinations(level, need)]
    raise ParameterError(f"m={m} exceeds the support size {len(f)}")


def all_greedy_sets(f: SpVec, cap: int = LEVEL_CAP) -> Iterator[IndexSet]:
    """Every greedy set contained in supp(f), by increasing cardinality."""
    for m in range(len(f) + 1):
        yield from enumerate_greedy_sets(f, m, cap)


def strictly_greedy_sets(f: SpVec) -> List[IndexSet]:
    """Level prefixes: the empty set, the top level, the top two levels, ... up to supp(f)."""
    prefixes: List[IndexSet] = [frozenset()]
    taken: List[int] = []
    for _, level in magnitude_levels(f):
        taken.extend(level)
        prefixes.append(frozenset(taken))
    return prefixes


def nested_greedy_pairs(f: SpVec, cap: int = PAIR_CAP) -> Iterator[Tuple[IndexSet, IndexSet]]:
    """
    Pairs (A1, A2) of greedy sets of f with A1 subset of A2 subset of supp(f).

    Raises:
        BudgetExceededError: Past ``cap`` pairs.
    """
    sets = list(all_greedy_sets(f))
    emitted = 0
    for outer in sets:
        for inner in sets:
            if len(inner) > len(outer):
                break
            if inner <= outer:
                emitted += 1
                if emitted > cap:
                    raise BudgetExceededError(f"More than {cap} nested greedy pairs")
                yield inner, outer


def _require_greedy(f: SpVec, chosen: IndexSet) -> None:
    if not is_greedy_set(f, chosen):
        raise NotGreedySetError(sorted(chosen))


def truncation_U(model: ModelLike, f: VectorLike, indices: Iterable[int]) -> SpVec:
    """U(f, A) = min_{n in A} |a_n| * sum_{n in A} sgn(a_n) x_n for a greedy set A."""
    coefficients = coefficients_of(model, f)
    chosen = frozenset(int(i) for i in indices)
    _require_greedy(coefficients, chosen)
    if not chosen:
        return SpVec()
    level = min(abs(coefficients[i]) for i in chosen)
    return SpVec({i: level * float(np.sign(coefficients[i])) for i in chosen})


def truncation_T(model: ModelLike, f: VectorLike, indices: Iterable[int]) -> SpVec:
    """T(f, A) = U(f, A) + S_{A^c}(f)."""
    coefficients = coefficients_of(model, f)
    chosen = frozenset(int(i) for i in indices)
    return truncation_U(model, coefficients, chosen) + coefficients.without(chosen)
