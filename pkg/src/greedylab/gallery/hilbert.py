"""
A democratic, M-bounded basis of a 2n-dimensional Hilbert space that is not
superdemocratic and has basis constant of order sqrt(n).

H_n = X_1 + X + X_2 with dim X_s = n - 1 and X = R^2. Two isometries T_s of
R^n carry the diagonal a = sum e_j onto a_1 = (sqrt(n - 1/4), 1/2) and
a_2 = (sqrt(n - 1/4), -1/2) inside X, and the standard basis onto the
vectors e_j^s = T_s(e_j). Basis index (s, j) is stored at position
(s - 1) n + j.
"""

import math
from dataclasses import dataclass
from itertools import product
from typing import List, Optional

import numpy as np
import structlog

from greedylab.basis.models import MatrixModel
from greedylab.errors import BudgetExceededError, ParameterError
from greedylab.foundations.vectors import SpVec

logger = structlog.get_logger(__name__)

MAX_BLOCK = 32
EXHAUSTIVE_DIMENSION = 16  # Enumerate all index sets up to this dimension
SAMPLED_SETS = 4000


def _diagonal_frame(n: int) -> np.ndarray:
    """Orthonormal basis of R^n whose first column is a / sqrt(n)."""
    seed = np.eye(n)
    seed[:, 0] = 1.0
    frame, _ = np.linalg.qr(seed)
    if frame[0, 0] < 0:
        frame[:, 0] = -frame[:, 0]
    return frame


class HilbertBlockBasis(MatrixModel):
    """The basis (e_j^s) of H_n with its dual functionals psi_j^s."""

    def __init__(self, n: int):
        if not 2 <= n <= MAX_BLOCK:
            raise ParameterError(f"Hilbert block parameter must lie in 2..{MAX_BLOCK}, got {n}")
        self.n = n
        height = math.sqrt(n - 0.25)
        self.a1 = np.array([height, 0.5])
        self.a2 = np.array([height, -0.5])
        dim = 2 * n
        source = _diagonal_frame(n)
        columns = np.zeros((dim, dim))
        for s, (pair, free) in enumerate(
            ((self.a1, range(0, n - 1)), (self.a2, range(n + 1, 2 * n)))
        ):
            # Orthonormal frame of H_n^s: a_s / sqrt(n), then the unit vectors of X_s.
            target = np.zeros((dim, n))
            target[n - 1 : n + 1, 0] = pair / math.sqrt(n)
            for k, row in enumerate(free, start=1):
                target[row, k] = 1.0
            columns[:, s * n : (s + 1) * n] = target @ source.T
        super().__init__(columns, name=f"hilbert_block:n={n}")

    def index(self, s: int, j: int) -> int:
        return (s - 1) * self.n + j

    @property
    def theta(self) -> List[int]:
        return list(range(1, 2 * self.n + 1))

    def block_sum(self, s: int) -> np.ndarray:
        """sum_j e_j^s as an ambient vector; equals a_s placed in X."""
        return self.columns[:, (s - 1) * self.n : s * self.n].sum(axis=1)

    def embedded_pair(self, s: int) -> np.ndarray:
        out = np.zeros(2 * self.n)
        out[self.n - 1 : self.n + 1] = self.a1 if s == 1 else self.a2
        return out


@dataclass
class HilbertReport:
    n: int
    exhaustive: bool
    sets_checked: int
    min_ratio: float  # min ||1_A||^2 / |A|
    max_ratio: float  # max ||1_A||^2 / |A|
    democracy_holds: bool  # 1 <= ratio <= 2 on every set checked
    signed_theta_norm: float  # ||1_{eps,Theta_n}|| with eps_{s,j} = (-1)^s
    pair_norms: List[float]  # ||a_1||, ||a_2||, ||a_1 - a_2||
    block_sum_error: float  # max_s ||sum_j e_j^s - a_s||
    dual_norms_squared_min: float
    dual_norms_squared_max: float
    projection_lower_bound: Optional[float] = None  # ||S_A|| for |A_1| = floor(n/2)
    projection_target: Optional[float] = None  # sqrt(k - k^2/n)
    projection_claimed: Optional[float] = None  # (sqrt 2 / 3) sqrt n


def _index_sets(dim: int, rng: np.random.Generator) -> np.ndarray:
    if dim <= EXHAUSTIVE_DIMENSION:
        masks = np.array(list(product((0.0, 1.0), repeat=dim)))[1:]
    else:
        masks = (rng.random((SAMPLED_SETS, dim)) < rng.random((SAMPLED_SETS, 1))).astype(float)
        masks = masks[masks.sum(axis=1) > 0]
    return masks


def hilbert_block_report(
    n: int, with_operator_norms: bool = False, seed: int = 0
) -> HilbertReport:
    """
    Democracy, M-boundedness and the basis-constant witness of H_n.

    Args:
        n: Block parameter, 2 <= n <= 32
        with_operator_norms: Also bound ||S_A|| for the set with |A_1| = floor(n/2)
        seed: Seed for the sampled index sets when 2n exceeds EXHAUSTIVE_DIMENSION

    Returns:
        HilbertReport.
    """
    if n > MAX_BLOCK:
        raise BudgetExceededError(f"Hilbert block n={n} exceeds the cap {MAX_BLOCK}")
    basis = HilbertBlockBasis(n)
    dim = 2 * n
    masks = _index_sets(dim, np.random.default_rng(seed))
    squares = np.sum((masks @ basis.columns.T) ** 2, axis=1)
    ratios = squares / masks.sum(axis=1)

    signed = SpVec({i: (-1.0 if i <= n else 1.0) for i in basis.theta})
    duals_squared = basis.dual_norms() ** 2
    report = HilbertReport(
        n=n,
        exhaustive=dim <= EXHAUSTIVE_DIMENSION,
        sets_checked=int(masks.shape[0]),
        min_ratio=float(np.min(ratios)),
        max_ratio=float(np.max(ratios)),
        democracy_holds=bool(np.all(ratios >= 1 - 1e-10) and np.all(ratios <= 2 + 1e-10)),
        signed_theta_norm=basis.norm(signed),
        pair_norms=[
            float(np.linalg.norm(basis.a1)),
            float(np.linalg.norm(basis.a2)),
            float(np.linalg.norm(basis.a1 - basis.a2)),
        ],
        block_sum_error=max(
            float(np.linalg.norm(basis.block_sum(s) - basis.embedded_pair(s))) for s in (1, 2)
        ),
        dual_norms_squared_min=float(np.min(duals_squared)),
        dual_norms_squared_max=float(np.max(duals_squared)),
    )
    if with_operator_norms:
        k = n // 2
        chosen = [basis.index(1, j) for j in range(1, k + 1)]
        report.projection_lower_bound = basis.projection_norm(chosen, seed=seed)
        report.projection_target = math.sqrt(k - k * k / n)
        report.projection_claimed = math.sqrt(2.0) / 3.0 * math.sqrt(n)
    logger.debug(
        "hilbert_block_report",
        n=n,
        sets=report.sets_checked,
        min_ratio=report.min_ratio,
        max_ratio=report.max_ratio,
    )
    return report
