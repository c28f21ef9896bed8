"""
KT-method examples: the space max(||f||_X, ||f||_w) built on a Lorentz space.

On X = l_{1,q} (q > 1) with constant weight the unit vector system is not
quasi-greedy: spreading each spike of the harmonic sequence into a long flat
block of opposite sign keeps the partial sums bounded, while the spikes alone
form a greedy sum with partial sums of order log N. On d_{1,q}(w) with a
weight whose primitive has both the LRP and the URP it is quasi-greedy, with
the bound 2(1 + C[s, r]) for the constant of the lemma behind it.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from greedylab.basis.greedy import all_greedy_sets
from greedylab.errors import BudgetExceededError, ConvergenceError, ParameterError
from greedylab.foundations.vectors import SpVec
from greedylab.foundations.weights import WeightSpec
from greedylab.spaces.lorentz import lorentz_norm
from greedylab.spaces.norms import KTSpace, LorentzSpace, SwSpace
from greedylab.spaces.runlength import RunLengthVector, runlength_norm

logger = structlog.get_logger(__name__)

R_SCAN = (1.1, 1.25, 1.5, 2.0)
HEAD_TERMS = 2**16  # Terms of the C[s, r] series summed exactly
PROFILE_POINTS = 48  # Geometric grid of n on which the sup is taken
STABILITY = 0.02  # Relative growth over the last doubling accepted as stable
POWER_EXPONENT_CAP = 48  # Largest log2 block length of the power schedule


class BlockSchedule(str, Enum):
    """Block lengths m_k of the KT witness."""

    LINEAR = "linear"  # m_k = N + k - 1
    POWER = "power"  # m_k = 2^(j + k - 1), 2^j the first power of two >= N


def kt_space(q: float, weight: Optional[WeightSpec] = None) -> KTSpace:
    """KT[d_{1,q}(w), w], with w = const:1 by default."""
    w = weight or WeightSpec.constant(1.0)
    return KTSpace(LorentzSpace(1.0, q, w), w)


@dataclass
class KTWitness:
    """g and its greedy part h as run-length vectors, with both quasi-norms."""

    q: float
    N: int
    schedule: BlockSchedule
    f: RunLengthVector  # harmonic coefficients 1/k, k <= N
    g: RunLengthVector
    h: RunLengthVector  # S_B g for the spike positions B
    spikes: np.ndarray  # the greedy set B, 1-based positions in g
    norm_g: float
    norm_h: float
    ratio: float
    digest: str

    def recheck(self) -> float:
        space = kt_space(self.q)
        return runlength_norm(space, self.h) / runlength_norm(space, self.g)


def block_lengths(N: int, schedule: BlockSchedule = BlockSchedule.LINEAR) -> List[int]:
    """
    Increasing block lengths with m_k >= N, so that a_k / m_k <= 1/N for a_k = 1/k.

    Raises:
        BudgetExceededError: When a power-schedule block would pass 2^POWER_EXPONENT_CAP.
    """
    schedule = BlockSchedule(schedule)
    if schedule == BlockSchedule.LINEAR:
        return [N + k - 1 for k in range(1, N + 1)]
    start = (N - 1).bit_length()
    if start + N - 1 > POWER_EXPONENT_CAP:
        raise BudgetExceededError(
            f"Power schedule for N={N} needs blocks of 2^{start + N - 1} coordinates"
        )
    return [2 ** (start + k - 1) for k in range(1, N + 1)]


def kt_not_qg_witness(
    q: float, N: int, schedule: BlockSchedule = BlockSchedule.LINEAR
) -> KTWitness:
    """
    Blocked witness that the unit vector system of KT[l_{1,q}, 1] is not quasi-greedy.

    Block k carries m_k copies of a_k / m_k followed by the spike -a_k, with
    a_k = 1/k and m_k from block_lengths. Flat entries are at most 1/N, so the
    spikes form a greedy set of g. The power schedule keeps the blocks on a
    subsequence of 2^k and is only feasible for small N.

    Args:
        q: Outer Lorentz index, q > 1
        N: Number of blocks
        schedule: Block length rule

    Returns:
        KTWitness with ratio ||h|| / ||g||.
    """
    if not q > 1:
        raise ParameterError(f"The KT witness needs q > 1, got {q}")
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")
    g_runs: List[Tuple[float, int]] = []
    h_runs: List[Tuple[float, int]] = []
    spikes = np.empty(N, dtype=np.int64)
    position = 0
    for k, m in enumerate(block_lengths(N, schedule), start=1):
        a = 1.0 / k
        g_runs += [(a / m, m), (-a, 1)]
        h_runs += [(0.0, m), (-a, 1)]
        position += m + 1
        spikes[k - 1] = position
    g = RunLengthVector.from_runs(g_runs)
    h = RunLengthVector.from_runs(h_runs)
    space = kt_space(q)
    norm_g = runlength_norm(space, g)
    norm_h = runlength_norm(space, h)
    witness = KTWitness(
        q=q,
        N=N,
        schedule=BlockSchedule(schedule),
        f=RunLengthVector.from_runs([(1.0 / k, 1) for k in range(1, N + 1)]),
        g=g,
        h=h,
        spikes=spikes,
        norm_g=norm_g,
        norm_h=norm_h,
        ratio=norm_h / norm_g,
        digest=g.digest(),
    )
    logger.debug("kt_witness_built", q=q, N=N, length=g.length, ratio=witness.ratio)
    return witness


@dataclass
class URPConstant:
    """Truncated sup of s_n^(r-1) sum_j s_j^(-r) s_{n+j-1} / (n+j-1) over a grid of n."""

    weight: str
    r: float
    n: List[int]
    profile: List[float]
    value: float  # sup of the profile
    tail_share: float  # largest fraction of a profile value coming from the tail integral
    stabilized: bool


def _tail(s_head: float, exponent: float, start: int, n: int, r: float) -> float:
    """Tail of the series past ``start`` with s extrapolated as s_head (x / start)^exponent."""
    from scipy.integrate import quad

    def term(x: float) -> float:
        s_j = s_head * (x / start) ** exponent
        s_shift = s_head * ((n + x - 1.0) / start) ** exponent
        return s_j ** (-r) * s_shift / (n + x - 1.0)

    value, _ = quad(term, start + 0.5, np.inf, limit=200)
    return float(value)


def kt_urp_constant(w: WeightSpec, r: float, n_max: int = 10_000) -> URPConstant:
    """
    C[s, r] for the primitive s of w, on a geometric grid of n up to n_max.

    The series is summed exactly over HEAD_TERMS terms and closed by an
    integral of the power-law extrapolation of s.
    """
    if not r > 1:
        raise ParameterError(f"C[s, r] needs r > 1, got {r}")
    grid = np.unique(np.geomspace(1, n_max, PROFILE_POINTS).round().astype(np.int64))
    s = np.asarray(w.primitive(n_max + HEAD_TERMS))
    j = np.arange(1, HEAD_TERMS + 1)
    head_weights = s[:HEAD_TERMS] ** (-r)
    exponent = math.log2(s[HEAD_TERMS - 1] / s[HEAD_TERMS // 2 - 1])
    profile: List[float] = []
    tail_share = 0.0
    for n in grid.tolist():
        shifted = s[n + j - 2] / (n + j - 1)
        head = float(np.sum(head_weights * shifted))
        tail = _tail(float(s[HEAD_TERMS - 1]), exponent, HEAD_TERMS, n, r)
        total = s[n - 1] ** (r - 1.0) * (head + tail)
        profile.append(float(total))
        tail_share = max(tail_share, tail / (head + tail))
    values = np.array(profile)
    half = int(np.searchsorted(grid, n_max // 2, side="right"))
    earlier = float(np.max(values[: max(half, 1)]))
    value = float(np.max(values))
    return URPConstant(
        weight=w.label,
        r=r,
        n=grid.tolist(),
        profile=profile,
        value=value,
        tail_share=tail_share,
        stabilized=value <= (1.0 + STABILITY) * earlier,
    )


@dataclass
class KTBoundReport:
    """Checks ||S_A f||_w <= 2(1 + C[s, r]) max(||f||_{1,inf,w}, ||f||_w) over greedy A."""

    p: float
    q: float
    r: float
    c_sr: float
    bound_constant: float
    samples: int
    instances: int = 0
    violations: int = 0
    worst_ratio: float = 0.0  # max of lhs / max(...)
    witness: Optional[SpVec] = None
    scan: List[URPConstant] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0


def random_samples(count: int, dimension: int, seed: int = 0) -> List[SpVec]:
    """Seeded Gaussian vectors with random support sizes up to ``dimension``."""
    rng = np.random.default_rng(seed)
    return [
        SpVec.from_dense(rng.standard_normal(int(rng.integers(1, dimension + 1))))
        for _ in range(count)
    ]


def kt_qg_bound_check(
    p: float, q: float, samples: Sequence[SpVec], n_max: int = 10_000
) -> KTBoundReport:
    """
    Quasi-greedy bound on KT[d_{1,q}(w), w] with w = pot:1/p.

    Raises:
        ConvergenceError: When no r in R_SCAN gives a stable C[s, r].
    """
    if not 1 < p < math.inf:
        raise ParameterError(f"p must lie in (1, inf), got {p}")
    w = WeightSpec.potential(1.0 / p)
    scan: List[URPConstant] = []
    chosen: Optional[URPConstant] = None
    for r in R_SCAN:
        estimate = kt_urp_constant(w, r, n_max)
        scan.append(estimate)
        if estimate.stabilized and math.isfinite(estimate.value):
            chosen = estimate
            break
    if chosen is None:
        raise ConvergenceError(f"No r in {R_SCAN} gives a stable C[s, r] for {w.label}")

    bound = 2.0 * (1.0 + chosen.value)
    partial_sums = SwSpace(w)
    report = KTBoundReport(
        p=p, q=q, r=chosen.r, c_sr=chosen.value, bound_constant=bound, samples=len(samples),
        scan=scan,
    )
    for f in samples:
        if not f:
            continue
        weak = lorentz_norm(f.values, 1.0, math.inf, w)
        scale = max(weak, partial_sums.norm(f))
        for chosen_set in all_greedy_sets(f):
            lhs = partial_sums.norm(f.restrict(chosen_set))
            report.instances += 1
            ratio = lhs / scale
            if ratio > report.worst_ratio:
                report.worst_ratio, report.witness = ratio, f
            if lhs > bound * scale * (1 + 1e-9):
                report.violations += 1
    logger.info(
        "kt_bound_checked",
        p=p,
        q=q,
        r=chosen.r,
        c_sr=chosen.value,
        instances=report.instances,
        violations=report.violations,
    )
    return report


def t_eta(f: SpVec, eta: Sequence[int]) -> RunLengthVector:
    """Spread coefficient k of f uniformly over a block of eta[k-1] coordinates."""
    if f and f.max_index > len(eta):
        raise ParameterError(f"Schedule of length {len(eta)} is too short for index {f.max_index}")
    dense = f.to_dense(len(eta))
    return RunLengthVector.from_runs([(a / m, m) for a, m in zip(dense.tolist(), eta)])


@dataclass
class TEtaReport:
    q: float
    samples: int
    max_ratio: float
    bounded: bool  # q >= 1: every ratio <= 1
    witness: Optional[SpVec] = None
    witness_ratio: float = 0.0


def _escape_candidates(length: int) -> List[SpVec]:
    out = []
    for k in range(1, length + 1):
        out.append(SpVec.indicator(range(1, k + 1)))
        out.append(SpVec.from_dense(1.0 / np.arange(1, k + 1)))
        out.append(SpVec.unit(k))
    return out


def t_eta_check(
    q: float, eta: Sequence[int], samples: Optional[Sequence[SpVec]] = None
) -> TEtaReport:
    """
    Ratios ||T_eta f||_{1,q} / ||f||_{1,q}.

    For q >= 1 every ratio should stay at most 1. For q < 1 prefix indicators,
    harmonic vectors and unit vectors are searched for a ratio above 2; a
    unit vector spread over k coordinates tends to 2^(1/q).

    Args:
        q: Outer Lorentz index
        eta: Strictly increasing block lengths
        samples: Vectors to test; defaults to the prefix, harmonic and unit family
    """
    lengths = [int(m) for m in eta]
    if not lengths or lengths[0] < 1 or any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise ParameterError("eta must be a strictly increasing sequence of positive integers")
    space = LorentzSpace(1.0, q, WeightSpec.constant(1.0))
    family = list(samples) if samples is not None else _escape_candidates(len(lengths))
    report = TEtaReport(q=q, samples=len(family), max_ratio=0.0, bounded=True)
    for f in family:
        if not f:
            continue
        ratio = runlength_norm(space, t_eta(f, lengths)) / space.norm(f)
        if ratio > report.max_ratio:
            report.max_ratio = ratio
        if q < 1 and ratio > 2.0 and report.witness is None:
            report.witness, report.witness_ratio = f, ratio
    report.bounded = report.max_ratio <= 1.0 + 1e-9
    logger.debug("t_eta_checked", q=q, samples=len(family), max_ratio=report.max_ratio)
    return report
