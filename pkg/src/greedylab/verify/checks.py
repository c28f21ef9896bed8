"""
The check catalogue.

Every check evaluates one inequality of the theory on one basis model and
returns a CheckResult holding the worst instance. Two regimes exist:

- per-vector checks compare two quantities computed directly from the same
  vectors (or from analytic constants), so they are sound on every model;
- constant-chain checks put estimated constants on the right-hand side, and
  estimates are only lower bounds. They run only on symmetric lattices, where
  every estimate is exact, and are skipped with that reason elsewhere.
"""

import math
import threading
from dataclasses import dataclass
from itertools import combinations, islice
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from greedylab.basis.approximation import sigma, sigma_tilde
from greedylab.basis.greedy import all_greedy_sets, is_greedy_set
from greedylab.basis.models import BasisModel, LatticeModel
from greedylab.constants.democracy import democracy_functions, embedding_sandwich_check
from greedylab.constants.estimators import EstimateTable, estimate_all
from greedylab.constants.families import TestFamily
from greedylab.errors import (
    BudgetExceededError,
    ConvergenceError,
    GreedyLabError,
    NotGreedySetError,
    ParameterError,
)
from greedylab.foundations.contracts import CheckResult, CheckStatus, ConstantKind, RenormKind
from greedylab.foundations.geometry import GeomConstants, eta_p
from greedylab.foundations.vectors import SignPattern, SpVec
from greedylab.foundations.weights import POTENTIAL
from greedylab.gallery.kt import kt_qg_bound_check, random_samples
from greedylab.renorm import RenormedSpace, renorm_isometry_check
from greedylab.spaces.norms import KTSpace, LorentzSpace

logger = structlog.get_logger(__name__)

K = ConstantKind

CHAIN_REGIME = "constant chains need a symmetric lattice, where every estimate is exact"


@dataclass
class SuiteConfig:
    """Budgets of the verification suite."""

    tol: float = 1e-9  # Relative slack granted to every inequality
    samples: int = 64  # Vectors per per-vector check
    families: int = 32  # Random families for the convexity checks
    family_size: int = 4  # |J| of each convexity family
    multiplier_cap: int = 64  # Multipliers tried per vector
    lebesgue_support: int = 8  # Largest support of the Lebesgue-inequality vectors
    lebesgue_vectors: int = 12
    lebesgue_m: int = 3  # Largest m of sigma_m
    renorm_samples: int = 12
    kt_n_max: int = 10_000  # Grid end of the C[s, r] profile
    workers: Optional[int] = None

    def __post_init__(self) -> None:
        if self.tol < 0:
            raise ParameterError(f"tol must be >= 0, got {self.tol}")
        if min(self.samples, self.families, self.family_size, self.renorm_samples) < 1:
            raise ParameterError("sample and family counts must be >= 1")


class CheckContext:
    """What a check needs about one model: budgets, samples and cached estimates."""

    def __init__(self, model: BasisModel, family: TestFamily, config: SuiteConfig):
        self.model = model
        self.family = family
        self.config = config
        self._lock = threading.Lock()
        self._table = EstimateTable(model=model.label)
        self._vectors: Optional[List[SpVec]] = None

    @property
    def label(self) -> str:
        return self.model.label

    @property
    def dimension(self) -> int:
        bound = self.model.dimension
        return self.family.dimension if bound is None else min(bound, self.family.dimension)

    @property
    def geometry(self) -> GeomConstants:
        return self.model.geometry

    @property
    def exact_regime(self) -> bool:
        return self.model.symmetric and self.model.lattice_unconditional

    def estimates(self, kinds: Sequence[ConstantKind]) -> EstimateTable:
        """The shared table, extended with any kind not estimated yet."""
        with self._lock:
            missing = [
                k for k in kinds if k not in self._table and k not in self._table.unsupported
            ]
            if missing:
                extra = estimate_all(self.model, self.family, missing, workers=1)
                self._table.estimates.update(extra.estimates)
                self._table.unsupported.update(extra.unsupported)
            return self._table

    def vectors(self) -> List[SpVec]:
        with self._lock:
            if self._vectors is None:
                pool = self.family.vectors(self.dimension)
                self._vectors = pool[: self.config.samples]
            return self._vectors

    def rng(self, tag: str) -> np.random.Generator:
        return self.family.rng(f"verify:{tag}:{self.label}")


class _Worst:
    """Tracks the instance with the smallest margin rhs - lhs."""

    def __init__(self, check_id: str, space: str, tol: float):
        self.check_id = check_id
        self.space = space
        self.tol = tol
        self.instances = 0
        self.failures = 0
        self.margin = math.inf
        self.lhs = 0.0
        self.rhs = 0.0
        self.witness = ""

    def record(self, lhs: float, rhs: float, witness: Callable[[], str]) -> None:
        self.instances += 1
        if lhs > rhs + self.tol * max(rhs, 1.0):
            self.failures += 1
        margin = rhs - lhs
        if margin < self.margin:
            self.margin, self.lhs, self.rhs = margin, lhs, rhs
            self.witness = witness()

    def result(self) -> CheckResult:
        if self.instances == 0:
            return skipped(self.check_id, self.space, "no instances to evaluate")
        return CheckResult(
            check_id=self.check_id,
            space=self.space,
            lhs=self.lhs,
            rhs=self.rhs,
            margin=self.margin,
            status=CheckStatus.FAIL if self.failures else CheckStatus.PASS,
            witness_ref=self.witness,
            instances=self.instances,
        )


def skipped(check_id: str, space: str, reason: str) -> CheckResult:
    return CheckResult(
        check_id=check_id, space=space, status=CheckStatus.SKIPPED, reason=reason
    )


@dataclass(frozen=True)
class Check:
    check_id: str
    summary: str
    per_vector: bool  # False: the right-hand side holds estimated constants
    run: Callable[[CheckContext], CheckResult]


def _random_vector(rng: np.random.Generator, dimension: int, density: float = 0.6) -> SpVec:
    keep = rng.random(dimension) < density
    keep[rng.integers(0, dimension)] = True
    return SpVec.from_dense(np.where(keep, rng.standard_normal(dimension), 0.0))


def _combination(parts: Sequence[Tuple[SpVec, float]]) -> SpVec:
    total = SpVec.zero()
    for vector, scalar in parts:
        total = total + vector * scalar
    return total


# --- per-vector checks ---


def _convexity(ctx: CheckContext) -> CheckResult:
    """||sum (1-b_j) g_j + b_j h_j|| <= A_p max_A ||sum_{J minus A} g_j + sum_A h_j||."""
    worst = _Worst("convexity", ctx.label, ctx.config.tol)
    a_p = ctx.geometry.A_p
    rng = ctx.rng("convexity")
    size = ctx.config.family_size
    for _ in range(ctx.config.families):
        g = [_random_vector(rng, ctx.dimension) for _ in range(size)]
        h = [_random_vector(rng, ctx.dimension) for _ in range(size)]
        b = rng.random(size)
        mixed = _combination(
            [(g[j], 1.0 - b[j]) for j in range(size)] + [(h[j], b[j]) for j in range(size)]
        )
        vertices = 0.0
        for k in range(size + 1):
            for chosen in combinations(range(size), k):
                vertex = _combination(
                    [(h[j], 1.0) if j in chosen else (g[j], 1.0) for j in range(size)]
                )
                vertices = max(vertices, ctx.model.norm(vertex))
        worst.record(
            ctx.model.norm(mixed),
            a_p * vertices,
            lambda: f"b={np.round(b, 6).tolist()};g0={g[0].serialize()};h0={h[0].serialize()}",
        )
    return worst.result()


def _convexity_scalars(ctx: CheckContext) -> CheckResult:
    """||sum a_j f_j|| <= B_p max_A ||sum_A f_j|| for |a_j| <= 1."""
    worst = _Worst("convexity_scalars", ctx.label, ctx.config.tol)
    b_p = ctx.geometry.B_p
    rng = ctx.rng("convexity_scalars")
    size = ctx.config.family_size
    for _ in range(ctx.config.families):
        f = [_random_vector(rng, ctx.dimension) for _ in range(size)]
        a = rng.uniform(-1.0, 1.0, size)
        partial = 0.0
        for k in range(1, size + 1):
            for chosen in combinations(range(size), k):
                partial = max(partial, ctx.model.norm(_combination([(f[j], 1.0) for j in chosen])))
        worst.record(
            ctx.model.norm(_combination(list(zip(f, a.tolist())))),
            b_p * partial,
            lambda: f"a={np.round(a, 6).tolist()};f0={f[0].serialize()}",
        )
    return worst.result()


def _lebesgue(ctx: CheckContext) -> CheckResult:
    """sigma~_r(f) <= 2^(1/p) A_p eta_p(1) max(1, phi^eps_u(m) / phi^eps_l(r - m)) sigma_m(f)."""
    if not ctx.exact_regime:
        return skipped("lebesgue", ctx.label, "needs a symmetric lattice, where C_qg = 1")
    config = ctx.config
    p = ctx.model.p_exponent
    constant = 2.0 ** (1.0 / p) * ctx.geometry.A_p * eta_p(p, 1.0)
    support = min(ctx.dimension, config.lebesgue_support)
    phi = democracy_functions(ctx.model, support, ctx.family)
    worst = _Worst("lebesgue", ctx.label, config.tol)
    vectors = [f for f in ctx.family.vectors(support) if len(f) > 1][: config.lebesgue_vectors]
    for f in vectors:
        for m in range(1, min(config.lebesgue_m, len(f) - 1) + 1):
            best_m = sigma(ctx.model, f, m).value
            for r in range(m + 1, len(f) + 1):
                ratio = max(1.0, phi.upper_signed[m - 1] / phi.lower_signed[r - m - 1])
                worst.record(
                    sigma_tilde(ctx.model, f, r).value,
                    constant * ratio * best_m,
                    lambda: f"f={f.serialize()};m={m};r={r}",
                )
    return worst.result()


def _greedy_quotient(model: BasisModel, g: SpVec, size: float) -> float:
    """max ||S_G g|| / ||g|| over every greedy set G of g."""
    return max(model.norm(g.restrict(chosen)) for chosen in all_greedy_sets(g)) / size


def _qgunc(ctx: CheckContext) -> CheckResult:
    """
    ||1_{eps,A}|| / ||g|| <= 2^(1/p) C_qg for g = 1_{eps,A} + f, supp(f) disjoint from A.

    With B the coordinates of f above one, B and A + B are greedy sets of g
    and the inequality follows from them alone. On symmetric lattices C_qg is
    the shared estimate; elsewhere it is replaced by the exact per-instance
    quotient max_G ||S_G g|| / ||g|| over the greedy sets of g.
    """
    worst = _Worst("qgunc", ctx.label, ctx.config.tol)
    factor = 2.0 ** (1.0 / ctx.model.p_exponent)
    c_qg = ctx.estimates([K.C_QG]).value(K.C_QG) if ctx.exact_regime else None
    rng = ctx.rng("qgunc")
    d = ctx.dimension
    for _ in range(ctx.config.samples):
        k = int(rng.integers(1, d + 1))
        chosen = sorted(int(i) for i in rng.choice(d, size=k, replace=False) + 1)
        signs = SignPattern.from_bits(chosen, int(rng.integers(0, 2**k)))
        rest = [i for i in range(1, d + 1) if i not in chosen]
        head = signs.indicator()
        g = head + SpVec({i: 2.0 * float(rng.standard_normal()) for i in rest})
        big = [i for i in rest if abs(g[i]) > 1.0]
        for used in (chosen + big, big):
            if not is_greedy_set(g, used):
                raise NotGreedySetError(sorted(used), f"of {g.serialize()}")
        size = ctx.model.norm(g)
        constant = c_qg if c_qg is not None else _greedy_quotient(ctx.model, g, size)
        worst.record(
            ctx.model.norm(head) / size,
            factor * constant,
            lambda: f"g={g.serialize()};A={chosen}",
        )
    result = worst.result()
    if c_qg is None and result.status != CheckStatus.SKIPPED:
        result = result.model_copy(update={"reason": "C_qg taken per instance over greedy sets"})
    return result


def _kt_parameters(model: BasisModel) -> Optional[Tuple[float, float]]:
    """(p, q) when the model is the unit vector system of KT[d_{1,q}(pot:1/p), pot:1/p]."""
    if not isinstance(model, LatticeModel) or model.block is not None:
        return None
    space = model.space
    if not isinstance(space, KTSpace) or not isinstance(space.inner, LorentzSpace):
        return None
    inner = space.inner
    w = space.weight
    if inner.p != 1.0 or inner.weight != w or w.kind != POTENTIAL or not w.parameter < 1:
        return None
    return 1.0 / w.parameter, inner.q


def _goalineq(ctx: CheckContext) -> CheckResult:
    """||S_A f||_w <= 2(1 + C[s, r]) max(||f||_{1,inf,w}, ||f||_w) over greedy A."""
    parameters = _kt_parameters(ctx.model)
    if parameters is None:
        return skipped("goalineq", ctx.label, "applies to KT[d_{1,q}(pot:a), pot:a], 0 < a < 1")
    p, q = parameters
    samples = random_samples(ctx.config.samples, ctx.dimension, seed=ctx.family.seed)
    try:
        report = kt_qg_bound_check(p, q, samples, ctx.config.kt_n_max)
    except ConvergenceError as exc:
        return skipped("goalineq", ctx.label, str(exc))
    lhs = report.worst_ratio
    return CheckResult(
        check_id="goalineq",
        space=ctx.label,
        lhs=lhs,
        rhs=report.bound_constant,
        margin=report.bound_constant - lhs,
        status=CheckStatus.PASS if report.passed else CheckStatus.FAIL,
        witness_ref=report.witness.serialize() if report.witness is not None else "",
        reason=f"r={report.r}, C[s,r]={report.c_sr:.6g}",
        instances=report.instances,
    )


def _sandwich(ctx: CheckContext) -> CheckResult:
    """d_{1,p}(w_u) embeds into X and X into d_{1,inf}(w_l), with constants 4 A_p^2 and Lambda_u."""
    table = ctx.estimates([K.LAMBDA_U])
    lambda_u = table.value(K.LAMBDA_U)
    samples = [f for f in ctx.vectors() if f]
    report = embedding_sandwich_check(ctx.model, samples, lambda_u, ctx.family, ctx.config.tol)
    if report.upper_margin <= report.lower_margin:
        witness = report.upper_witness
        lhs = ctx.model.norm(witness) if witness is not None else 0.0
        rhs = lhs + report.upper_margin
    else:
        witness = report.lower_witness
        rhs = lambda_u * ctx.model.norm(witness) if witness is not None else 0.0
        lhs = rhs - report.lower_margin
    reason = None if report.exact_democracy else "democracy functions and Lambda_u are searched"
    return CheckResult(
        check_id="sandwich",
        space=ctx.label,
        lhs=lhs,
        rhs=rhs,
        margin=rhs - lhs,
        status=CheckStatus.PASS if report.holds else CheckStatus.FAIL,
        witness_ref=witness.serialize() if witness is not None else "",
        reason=reason,
        instances=report.samples,
    )


def _renorm(kind: RenormKind) -> Callable[[CheckContext], CheckResult]:
    check_id = f"renorm_{kind.value}"

    def run(ctx: CheckContext) -> CheckResult:
        if kind == RenormKind.ALMOST_A and not ctx.model.lattice_unconditional:
            reason = "almost_a is checked on lattice-unconditional bases"
            return skipped(check_id, ctx.label, reason)
        renormed = RenormedSpace(ctx.model, kind, seed=ctx.family.seed)
        samples = [f for f in ctx.vectors() if f][: ctx.config.renorm_samples]
        report = renorm_isometry_check(renormed, samples, ctx.config.tol)
        reason = None
        if not report.complete:
            reason = (
                f"{report.skipped} of {report.samples} samples past the enumeration caps: "
                f"{report.skip_reason}"
            )
        if report.instances == 0:
            return skipped(check_id, ctx.label, reason or "no instances to evaluate")
        if report.violations:
            status = CheckStatus.FAIL
        elif report.complete:
            status = CheckStatus.PASS
        else:
            status = CheckStatus.SKIPPED
        witness = report.witness.serialize() if report.witness is not None else ""
        return CheckResult(
            check_id=check_id,
            space=ctx.label,
            lhs=report.worst_lhs,
            rhs=report.worst_rhs,
            margin=report.worst_margin,
            status=status,
            witness_ref=f"{witness};{report.note}" if report.note else witness,
            reason=reason,
            instances=report.instances,
        )

    return run


# --- constant chains ---

Bounds = List[Tuple[ConstantKind, float]]


def _chain(
    check_id: str,
    kinds: Sequence[ConstantKind],
    bounds: Callable[[Dict[ConstantKind, float], float, GeomConstants], Bounds],
    needs_banach: bool = False,
) -> Callable[[CheckContext], CheckResult]:
    """Compare estimated constants with analytic expressions in other estimates."""

    def run(ctx: CheckContext) -> CheckResult:
        if not ctx.exact_regime:
            return skipped(check_id, ctx.label, CHAIN_REGIME)
        p = ctx.model.p_exponent
        if needs_banach and p < 1:
            return skipped(check_id, ctx.label, f"needs a Banach space, p_exponent={p:g}")
        table = ctx.estimates(kinds)
        for kind in kinds:
            if kind in table.unsupported:
                return skipped(check_id, ctx.label, table.unsupported[kind])
        values = {kind: table.value(kind) for kind in kinds}
        worst = _Worst(check_id, ctx.label, ctx.config.tol)
        for kind, rhs in bounds(values, p, ctx.geometry):
            estimate = table.estimates[kind]
            worst.record(estimate.value, rhs, lambda: f"{kind.value}:{estimate.witness.describe()}")
        return worst.result()

    return run


def _root(p: float) -> float:
    return 2.0 ** (1.0 / p)


def _esp_sup_unc(ctx: CheckContext) -> CheckResult:
    """||M_gamma f|| <= A_p K_su ||f|| for multipliers 0 <= gamma_n <= 1."""
    if not ctx.exact_regime:
        return skipped("esp_sup_unc", ctx.label, CHAIN_REGIME)
    k_su = ctx.estimates([K.K_SU]).value(K.K_SU)
    rhs = ctx.geometry.A_p * k_su
    worst = _Worst("esp_sup_unc", ctx.label, ctx.config.tol)
    for f in ctx.vectors():
        if not f:
            continue
        size = ctx.model.norm(f)
        indices = f.indices.tolist()
        multipliers = ctx.family.multipliers(indices, f"esp:{f.serialize()}")
        for gamma in islice(multipliers, ctx.config.multiplier_cap):
            moduli = {i: abs(gamma[i]) for i in indices}
            image = f.multiply(moduli)
            worst.record(
                ctx.model.norm(image) / size,
                rhs,
                lambda: f"f={f.serialize()};Mf={image.serialize()}",
            )
    return worst.result()


def _ucc5(ctx: CheckContext) -> CheckResult:
    """||1_{eps,A}|| <= C ||sum b_n eps_n x_n|| for 1 <= b_n <= s < 1 + 1 / (A_p K_sc)."""
    if not ctx.exact_regime:
        return skipped("ucc5", ctx.label, CHAIN_REGIME)
    k_sc = ctx.estimates([K.K_SC]).value(K.K_SC)
    p = ctx.model.p_exponent
    a_p = ctx.geometry.A_p
    s = 1.0 + 0.5 / (a_p * k_sc)
    constant = (1.0 - (a_p * k_sc * (s - 1.0)) ** p) ** (-1.0 / p)
    rng = ctx.rng("ucc5")
    levels = np.array([1.0, (1.0 + s) / 2.0, s])
    worst = _Worst("ucc5", ctx.label, ctx.config.tol)
    for chosen in ctx.family.index_sets(ctx.dimension):
        for pattern in ctx.family.sign_patterns(chosen)[:4]:
            unit = pattern.indicator()
            top = ctx.model.norm(unit)
            drawn = unit.multiply({i: float(rng.choice(levels)) for i in chosen})
            for scaled in (pattern.indicator(s), drawn):
                worst.record(
                    top / ctx.model.norm(scaled),
                    constant,
                    lambda: f"num={unit.serialize()};den={scaled.serialize()}",
                )
    return worst.result()


def _build_catalogue() -> Dict[str, Check]:
    chains: List[Tuple[str, str, Sequence[ConstantKind], Callable[..., Bounds], bool]] = [
        (
            "sup_vs_lat",
            "K_u <= B_p K_su",
            (K.K_U, K.K_SU),
            lambda v, p, g: [(K.K_U, g.B_p * v[K.K_SU])],
            False,
        ),
        (
            "ucc4",
            "K_pu <= A_p K_sc K_lc",
            (K.K_PU, K.K_SC, K.K_LC),
            lambda v, p, g: [(K.K_PU, g.A_p * v[K.K_SC] * v[K.K_LC])],
            False,
        ),
        (
            "qg_to_lucc",
            "K_lc <= C_qg eta_p(C_qg)",
            (K.K_LC, K.C_QG),
            lambda v, p, g: [(K.K_LC, v[K.C_QG] * eta_p(p, v[K.C_QG]))],
            False,
        ),
        (
            "qg5",
            "Lambda_u <= C_qg^2 eta_p(C_qg)",
            (K.LAMBDA_U, K.C_QG),
            lambda v, p, g: [(K.LAMBDA_U, v[K.C_QG] ** 2 * eta_p(p, v[K.C_QG]))],
            False,
        ),
        (
            "qg6",
            "Lambda_t <= C_qg (1 + C_qg^p eta_p^p(C_qg))^(1/p) and C_qg <= 2^(1/p) C_ql Lambda_t",
            (K.LAMBDA_T, K.C_QG, K.C_QL),
            lambda v, p, g: [
                (
                    K.LAMBDA_T,
                    v[K.C_QG] * (1.0 + (v[K.C_QG] * eta_p(p, v[K.C_QG])) ** p) ** (1.0 / p),
                ),
                (K.C_QG, _root(p) * v[K.C_QL] * v[K.LAMBDA_T]),
            ],
            False,
        ),
        (
            "pablo",
            "Delta_s <= B_p Gamma",
            (K.DELTA_S, K.GAMMA),
            lambda v, p, g: [(K.DELTA_S, g.B_p * v[K.GAMMA])],
            False,
        ),
        (
            "ag3_gamma",
            "C_ag <= A_p Gamma Lambda_t",
            (K.C_AG, K.GAMMA, K.LAMBDA_T),
            lambda v, p, g: [(K.C_AG, g.A_p * v[K.GAMMA] * v[K.LAMBDA_T])],
            False,
        ),
        (
            "ag3_qg",
            "C_qg <= 2^(1/p) C_ag",
            (K.C_QG, K.C_AG),
            lambda v, p, g: [(K.C_QG, _root(p) * v[K.C_AG])],
            False,
        ),
        (
            "ag_estimates_iv",
            "C_ag <= (C_qg^p + Delta_sb^p)^(1/p)",
            (K.C_AG, K.C_QG, K.DELTA_SB),
            lambda v, p, g: [(K.C_AG, (v[K.C_QG] ** p + v[K.DELTA_SB] ** p) ** (1.0 / p))],
            True,
        ),
        (
            "chg",
            "C_ag <= C_g <= C_ag K_su",
            (K.C_G, K.C_AG, K.K_SU),
            lambda v, p, g: [(K.C_AG, v[K.C_G]), (K.C_G, v[K.C_AG] * v[K.K_SU])],
            False,
        ),
        (
            "chg2_iii",
            "C_g <= min(A_p^2 Gamma K_su, A_p Gamma K_u)",
            (K.C_G, K.GAMMA, K.K_SU, K.K_U),
            lambda v, p, g: [
                (
                    K.C_G,
                    min(
                        g.A_p**2 * v[K.GAMMA] * v[K.K_SU],
                        g.A_p * v[K.GAMMA] * v[K.K_U],
                    ),
                )
            ],
            False,
        ),
        (
            "qg7",
            "C_ql <= (1 + Lambda_u^p)^(1/p) and K_pu <= A_p Lambda_u (1 + Lambda_u^p)^(1/p)",
            (K.C_QL, K.K_PU, K.LAMBDA_U),
            lambda v, p, g: [
                (K.C_QL, (1.0 + v[K.LAMBDA_U] ** p) ** (1.0 / p)),
                (K.K_PU, g.A_p * v[K.LAMBDA_U] * (1.0 + v[K.LAMBDA_U] ** p) ** (1.0 / p)),
            ],
            False,
        ),
        (
            "qg9",
            "Lambda_u <= C_qg Lambda_t",
            (K.LAMBDA_U, K.C_QG, K.LAMBDA_T),
            lambda v, p, g: [(K.LAMBDA_U, v[K.C_QG] * v[K.LAMBDA_T])],
            False,
        ),
    ]
    catalogue = [
        Check("convexity", "||sum (1-b_j) g_j + b_j h_j|| <= A_p max_A ||...||", True, _convexity),
        Check("convexity_scalars", "||sum a_j f_j|| <= B_p max_A ||sum_A f_j||", True,
              _convexity_scalars),
        Check("lebesgue", "sigma~_r <= C max(1, phi(m)/phi(r-m)) sigma_m", True, _lebesgue),
        Check("qgunc", "||1_{eps,A}|| <= 2^(1/p) C_qg ||1_{eps,A} + f||", True, _qgunc),
        Check("goalineq", "||S_A f||_w <= 2(1 + C[s,r]) max(...)", True, _goalineq),
        Check("sandwich", "d_{1,p}(w_u) -> X -> d_{1,inf}(w_l)", True, _sandwich),
        Check("esp_sup_unc", "||M_gamma|| <= A_p K_su", False, _esp_sup_unc),
        Check("ucc5", "||1_{eps,A}|| <= C ||sum b_n eps_n x_n||", False, _ucc5),
    ]
    catalogue += [
        Check(check_id, summary, False, _chain(check_id, kinds, bounds, banach))
        for check_id, summary, kinds, bounds, banach in chains
    ]
    catalogue += [
        Check(f"renorm_{kind.value}", f"isometric property of the {kind.value} renorming", True,
              _renorm(kind))
        for kind in RenormKind
    ]
    return {check.check_id: check for check in catalogue}


CATALOGUE: Dict[str, Check] = _build_catalogue()


def run_check(check: Check, ctx: CheckContext) -> CheckResult:
    """Run one check, turning budget and domain errors into skipped results."""
    try:
        result = check.run(ctx)
    except BudgetExceededError as exc:
        result = skipped(check.check_id, ctx.label, f"budget exceeded: {exc}")
    except GreedyLabError as exc:
        result = skipped(check.check_id, ctx.label, str(exc))
    logger.debug(
        "check_evaluated",
        check=check.check_id,
        space=ctx.label,
        status=result.status.value,
        margin=result.margin,
    )
    return result
