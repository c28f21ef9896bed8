"""
Democracy functions and the Lorentz embedding sandwich.

phi_u(m) and phi_l(m) are the sup and inf of ||1_A|| over |A| <= m and
|A| >= m; the signed variants range over 1_{eps,A} as well. On symmetric
spaces all four reduce to ||1_{[1..m]}||.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from greedylab.basis.models import ModelLike, as_model
from greedylab.constants.families import TestFamily
from greedylab.errors import ParameterError
from greedylab.foundations.geometry import geom_constants
from greedylab.foundations.vectors import SignPattern, SpVec
from greedylab.spaces.lorentz import lorentz_norm_from_primitive

logger = structlog.get_logger(__name__)

UPPER = "upper"
LOWER = "lower"
UPPER_SIGNED = "upper_signed"
LOWER_SIGNED = "lower_signed"
NAMES = (UPPER, LOWER, UPPER_SIGNED, LOWER_SIGNED)


@dataclass
class DemocracyFunctions:
    """
    The four democracy functions on m = 1..m_max.

    When ``exact`` is False the upper sequences are lower bounds for the
    suprema and the lower sequences are upper bounds for the infima.
    """

    m: List[int]
    upper: List[float]
    lower: List[float]
    upper_signed: List[float]
    lower_signed: List[float]
    exact: bool
    witnesses: Dict[str, List[SpVec]] = field(default_factory=dict)

    def sequence(self, name: str) -> List[float]:
        return {
            UPPER: self.upper,
            LOWER: self.lower,
            UPPER_SIGNED: self.upper_signed,
            LOWER_SIGNED: self.lower_signed,
        }[name]


def _candidate_sets(
    m: int, universe: int, bounded: bool, family: TestFamily
) -> Iterator[Tuple[int, ...]]:
    if universe <= family.exhaustive_subsets:
        yield from combinations(range(1, universe + 1), m)
        return
    seen = set()
    structured = [
        tuple(range(1, m + 1)),
        tuple(range(2, m + 2)),
        tuple(range(m + 1, 2 * m + 1)),
        tuple(range(1, 2 * m, 2)),
        tuple(range(2, 2 * m + 1, 2)),
    ]
    span = min(2 * m, universe) if bounded else 2 * m
    rng = family.rng(f"democracy:{m}")
    drawn = [
        tuple(sorted(int(i) for i in rng.choice(span, size=m, replace=False) + 1))
        for _ in range(max(family.n_random // 4, 1))
    ]
    for chosen in structured + drawn:
        if chosen not in seen and not (bounded and chosen[-1] > universe):
            seen.add(chosen)
            yield chosen


def _running(
    values: Sequence[float], witnesses: Sequence[SpVec], upper: bool
) -> Tuple[List[float], List[SpVec]]:
    """Running max from the left (sup over |A| <= m) or min from the right (inf over |A| >= m)."""
    order = range(len(values)) if upper else range(len(values) - 1, -1, -1)
    out_values = [0.0] * len(values)
    out_witnesses: List[SpVec] = [SpVec()] * len(values)
    best: Optional[Tuple[float, SpVec]] = None
    for k in order:
        if best is None or (values[k] > best[0] if upper else values[k] < best[0]):
            best = (values[k], witnesses[k])
        out_values[k], out_witnesses[k] = best
    return out_values, out_witnesses


def democracy_functions(
    model: ModelLike, m_max: int, family: Optional[TestFamily] = None
) -> DemocracyFunctions:
    """
    phi_u, phi_l, phi^eps_u and phi^eps_l for m = 1..m_max.

    Args:
        model: Basis model or bare space
        m_max: Largest cardinality
        family: Search budget for non-symmetric models

    Returns:
        DemocracyFunctions, exact on symmetric spaces.
    """
    basis = as_model(model)
    family = family or TestFamily()
    if m_max < 1:
        raise ParameterError(f"m_max must be >= 1, got {m_max}")
    if basis.dimension is not None and m_max > basis.dimension:
        raise ParameterError(f"m_max={m_max} exceeds the dimension {basis.dimension}")
    ms = list(range(1, m_max + 1))
    if basis.symmetric:
        witnesses = [SpVec.indicator(range(1, m + 1)) for m in ms]
        values = [basis.norm(w) for w in witnesses]
        return DemocracyFunctions(
            m=ms,
            upper=list(values),
            lower=list(values),
            upper_signed=list(values),
            lower_signed=list(values),
            exact=True,
            witnesses={name: list(witnesses) for name in NAMES},
        )

    bounded = basis.dimension is not None
    universe = m_max if basis.dimension is None else basis.dimension
    per_m: Dict[str, List[Tuple[float, SpVec]]] = {name: [] for name in (UPPER, LOWER)}
    signed_m: Dict[str, List[Tuple[float, SpVec]]] = {name: [] for name in (UPPER, LOWER)}
    for m in ms:
        plain: List[Tuple[float, SpVec]] = []
        signed: List[Tuple[float, SpVec]] = []
        for chosen in _candidate_sets(m, universe, bounded, family):
            ones = SpVec.indicator(chosen)
            plain.append((basis.norm(ones), ones))
            patterns = (
                [SignPattern.all_plus(chosen)]
                if basis.lattice_unconditional
                else family.sign_patterns(chosen)
            )
            for eps in patterns:
                vector = eps.indicator()
                signed.append((basis.norm(vector), vector))
        per_m[UPPER].append(max(plain, key=lambda item: item[0]))
        per_m[LOWER].append(min(plain, key=lambda item: item[0]))
        signed_m[UPPER].append(max(signed, key=lambda item: item[0]))
        signed_m[LOWER].append(min(signed, key=lambda item: item[0]))

    sequences: Dict[str, List[float]] = {}
    witnesses: Dict[str, List[SpVec]] = {}
    for name, table, upper in (
        (UPPER, per_m[UPPER], True),
        (LOWER, per_m[LOWER], False),
        (UPPER_SIGNED, signed_m[UPPER], True),
        (LOWER_SIGNED, signed_m[LOWER], False),
    ):
        values, attained = _running([v for v, _ in table], [w for _, w in table], upper)
        sequences[name] = values
        witnesses[name] = attained
    logger.debug("democracy_functions_searched", model=basis.label, m_max=m_max)
    return DemocracyFunctions(
        m=ms,
        upper=sequences[UPPER],
        lower=sequences[LOWER],
        upper_signed=sequences[UPPER_SIGNED],
        lower_signed=sequences[LOWER_SIGNED],
        exact=False,
        witnesses=witnesses,
    )


@dataclass
class SandwichReport:
    """Worst margins of the two Lorentz embeddings over a sample family."""

    samples: int
    upper_constant: float  # 4 A_p^2
    upper_margin: float  # min over f of 4A_p^2 ||f||_{d_{1,p}(w_u)} - ||f||
    upper_witness: Optional[SpVec]
    lower_constant: float  # Lambda_u
    lower_margin: float  # min over f of Lambda_u ||f|| - ||f||_{d_{1,inf}(w_l)}
    lower_witness: Optional[SpVec]
    exact_democracy: bool

    @property
    def holds(self) -> bool:
        return self.upper_margin >= 0.0 and self.lower_margin >= 0.0


def embedding_sandwich_check(
    model: ModelLike,
    samples: Sequence[SpVec],
    lambda_u: float,
    family: Optional[TestFamily] = None,
    tol: float = 1e-9,
) -> SandwichReport:
    """
    d_{1,p}(w_u) embeds into X and X embeds into d_{1,inf}(w_l), sampled.

    w_u and w_l are the discrete derivatives of phi^eps_u and phi^eps_l, so
    the Lorentz norms use those sequences as primitives.

    Args:
        model: Basis model or bare space
        samples: Coefficient vectors to test
        lambda_u: Truncation constant, e.g. from estimate_constant
        family: Budget for the democracy functions
        tol: Relative slack granted to both inequalities
    """
    basis = as_model(model)
    p = basis.p_exponent
    upper_constant = 4.0 * geom_constants(p).A_p ** 2
    longest = max((len(f) for f in samples), default=1)
    phi = democracy_functions(basis, max(longest, 1), family)
    upper_primitive = np.array(phi.upper_signed)
    lower_primitive = np.array(phi.lower_signed)

    upper_margin = np.inf
    lower_margin = np.inf
    upper_witness: Optional[SpVec] = None
    lower_witness: Optional[SpVec] = None
    for f in samples:
        if not f:
            continue
        size = basis.norm(f)
        embedded = lorentz_norm_from_primitive(f.values, 1.0, p, upper_primitive)
        margin = upper_constant * embedded * (1 + tol) - size
        if margin < upper_margin:
            upper_margin, upper_witness = margin, f
        weak = lorentz_norm_from_primitive(f.values, 1.0, np.inf, lower_primitive)
        margin = lambda_u * size * (1 + tol) - weak
        if margin < lower_margin:
            lower_margin, lower_witness = margin, f
    logger.debug(
        "sandwich_checked",
        model=basis.label,
        samples=len(samples),
        upper_margin=float(upper_margin),
        lower_margin=float(lower_margin),
    )
    return SandwichReport(
        samples=len(samples),
        upper_constant=upper_constant,
        upper_margin=float(upper_margin),
        upper_witness=upper_witness,
        lower_constant=lambda_u,
        lower_margin=float(lower_margin),
        lower_witness=lower_witness,
        exact_democracy=phi.exact,
    )
