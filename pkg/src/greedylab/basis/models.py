"""
Basis models.

A lattice model is the unit vector system of a sequence space, optionally
transformed block by block by a fixed invertible matrix (alternating signs,
the two-block basis of a direct sum). A matrix model is an explicit finite
basis of Euclidean space, given by its columns, with dual functionals read
off the inverse matrix.
"""

from abc import ABC, abstractmethod
from typing import Iterable, Optional, Union

import numpy as np
import structlog

from greedylab.errors import ParameterError
from greedylab.foundations.geometry import GeomConstants, geom_constants
from greedylab.foundations.vectors import SpVec
from greedylab.spaces.norms import SequenceSpace

logger = structlog.get_logger(__name__)

BIORTHOGONALITY_TOL = 1e-10
POWER_STEPS = 200
POWER_TOL = 1e-8


class BasisModel(ABC):
    """A basis together with the quasi-norm of the space it spans."""

    @property
    @abstractmethod
    def label(self) -> str:
        pass

    @property
    @abstractmethod
    def p_exponent(self) -> float:
        pass

    @property
    @abstractmethod
    def lattice_unconditional(self) -> bool:
        """True when ||sum a_n x_n|| is monotone in the moduli |a_n|."""
        pass

    @property
    @abstractmethod
    def symmetric(self) -> bool:
        pass

    @property
    def dimension(self) -> Optional[int]:
        """Number of basis vectors, or None for an unbounded index range."""
        return None

    @abstractmethod
    def norm(self, coefficients: SpVec) -> float:
        """Quasi-norm of sum_n a_n x_n for the coefficient vector (a_n)."""
        pass

    @property
    def geometry(self) -> GeomConstants:
        return geom_constants(self.p_exponent)

    def check_support(self, coefficients: SpVec) -> None:
        d = self.dimension
        if d is not None and coefficients.max_index > d:
            raise ParameterError(
                f"Coefficient index {coefficients.max_index} exceeds dimension {d} of {self.label}"
            )

    def __str__(self) -> str:
        return self.label


class LatticeModel(BasisModel):
    """
    Unit vector system of a sequence space, or a block transform of it.

    With a block matrix T of size b, coefficients n = kb+1..kb+b are mapped to
    the ambient coordinates kb+1..kb+b by T.
    """

    def __init__(
        self,
        space: SequenceSpace,
        block: Optional[np.ndarray] = None,
        name: Optional[str] = None,
    ):
        self.space = space
        self.name = name
        if block is None:
            self.block: Optional[np.ndarray] = None
            self._inverse: Optional[np.ndarray] = None
        else:
            matrix = np.atleast_2d(np.asarray(block, dtype=np.float64))
            if matrix.shape[0] != matrix.shape[1]:
                raise ParameterError(f"Block transform must be square, got {matrix.shape}")
            if abs(np.linalg.det(matrix)) < 1e-12:
                raise ParameterError("Block transform must be invertible")
            matrix.setflags(write=False)
            self.block = matrix
            self._inverse = np.linalg.inv(matrix)

    @property
    def _signed_identity(self) -> bool:
        if self.block is None:
            return True
        return bool(np.array_equal(np.abs(self.block), np.eye(self.block.shape[0])))

    @property
    def label(self) -> str:
        if self.block is None:
            return self.space.label
        return f"{self.name or 'block'}[{self.space.label}]"

    @property
    def p_exponent(self) -> float:
        return self.space.p_exponent

    @property
    def lattice_unconditional(self) -> bool:
        return self._signed_identity and self.space.lattice_unconditional

    @property
    def symmetric(self) -> bool:
        return self._signed_identity and self.space.symmetric

    def _apply(self, f: SpVec, matrix: Optional[np.ndarray]) -> SpVec:
        if matrix is None or not f:
            return f
        b = matrix.shape[0]
        zero_based = f.indices - 1
        blocks = zero_based // b
        indices = []
        values = []
        for block_id in np.unique(blocks).tolist():
            mask = blocks == block_id
            local = np.zeros(b)
            local[zero_based[mask] % b] = f.values[mask]
            indices.append(np.arange(block_id * b + 1, block_id * b + b + 1))
            values.append(matrix @ local)
        return SpVec._from_sorted(np.concatenate(indices), np.concatenate(values))

    def synthesize(self, coefficients: SpVec) -> SpVec:
        """Ambient coordinates of sum_n a_n x_n."""
        return self._apply(coefficients, self.block)

    def coordinates(self, ambient: SpVec) -> SpVec:
        """Coefficients x_n^*(f) of an ambient vector."""
        return self._apply(ambient, self._inverse)

    def norm(self, coefficients: SpVec) -> float:
        return self.space.norm(self.synthesize(coefficients))


class MatrixModel(BasisModel):
    """Explicit basis of R^d (columns) with Euclidean ambient norm."""

    def __init__(self, columns: np.ndarray, name: str = "matrix"):
        matrix = np.asarray(columns, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ParameterError(f"Basis matrix must be square, got shape {matrix.shape}")
        duals = np.linalg.inv(matrix)
        error = float(np.max(np.abs(duals @ matrix - np.eye(matrix.shape[0]))))
        if error > BIORTHOGONALITY_TOL:
            raise ParameterError(f"Dual functionals fail biorthogonality by {error:.3g}")
        matrix.setflags(write=False)
        duals.setflags(write=False)
        self.columns = matrix
        self.duals = duals
        self.name = name

    @property
    def label(self) -> str:
        return f"{self.name}(d={self.columns.shape[0]})"

    @property
    def p_exponent(self) -> float:
        return 1.0

    @property
    def lattice_unconditional(self) -> bool:
        return False

    @property
    def symmetric(self) -> bool:
        return False

    @property
    def dimension(self) -> int:
        return int(self.columns.shape[0])

    def synthesize(self, coefficients: SpVec) -> np.ndarray:
        self.check_support(coefficients)
        return self.columns[:, coefficients.indices - 1] @ coefficients.values

    def coordinates(self, ambient: np.ndarray) -> SpVec:
        vector = np.asarray(ambient, dtype=np.float64)
        if vector.shape != (self.dimension,):
            raise ParameterError(f"Ambient vector must have shape ({self.dimension},)")
        return SpVec.from_dense(self.duals @ vector)

    def norm(self, coefficients: SpVec) -> float:
        if not coefficients:
            return 0.0
        return float(np.linalg.norm(self.synthesize(coefficients)))

    def dual_norms(self) -> np.ndarray:
        """Euclidean norms of the dual functionals."""
        return np.linalg.norm(self.duals, axis=1)

    def projection_matrix(self, indices: Iterable[int]) -> np.ndarray:
        """Matrix of S_A acting on ambient vectors."""
        chosen = sorted(set(int(i) for i in indices))
        if chosen and (chosen[0] < 1 or chosen[-1] > self.dimension):
            raise ParameterError(f"Index set {chosen} outside 1..{self.dimension}")
        cols = [i - 1 for i in chosen]
        return self.columns[:, cols] @ self.duals[cols, :]

    def projection_norm(self, indices: Iterable[int], seed: int = 0) -> float:
        """
        Operator norm of S_A by power iteration on its Gram form.

        Args:
            indices: The set A
            seed: Seed of the starting vector

        Returns:
            Largest singular value of the projection matrix.
        """
        projection = self.projection_matrix(indices)
        gram = projection.T @ projection
        vector = np.random.default_rng(seed).standard_normal(self.dimension)
        vector /= np.linalg.norm(vector)
        estimate = 0.0
        for _ in range(POWER_STEPS):
            image = gram @ vector
            size = float(np.linalg.norm(image))
            if size == 0.0:
                return 0.0
            vector = image / size
            if abs(size - estimate) <= POWER_TOL * max(size, 1.0):
                estimate = size
                break
            estimate = size
        else:
            logger.debug("power_iteration_budget_spent", steps=POWER_STEPS, model=self.label)
        return float(np.sqrt(estimate))


ModelLike = Union[BasisModel, SequenceSpace]


def as_model(model: ModelLike) -> BasisModel:
    """Wrap a bare space as its unit vector system."""
    if isinstance(model, BasisModel):
        return model
    if isinstance(model, SequenceSpace):
        return LatticeModel(model)
    raise ParameterError(f"Expected a basis model or a space, got {type(model).__name__}")
