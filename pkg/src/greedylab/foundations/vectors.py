"""
Finitely supported coefficient sequences and sign patterns.

SpVec is the universal vector model: an immutable map from positive indices
to nonzero finite reals, stored as sorted numpy arrays so that norms and
rearrangements vectorize. SignPattern carries the sign families that appear
in indicator sums 1_{eps,A}.
"""

import math
import re
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

import numpy as np

from greedylab.errors import ParameterError, SpaceParseError

EntriesLike = Union[Mapping[int, float], Iterable[Tuple[int, float]]]

_TERM = re.compile(r"\s*([^@,\s]+)\s*@\s*([^,\s]+)\s*")


def _format_coefficient(value: float) -> str:
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


class SpVec:
    """
    Immutable finitely supported real sequence indexed from 1.

    Exact zeros are never stored, so ``len(f)`` is the support size and
    coordinate access off the support returns 0.0 exactly.
    """

    __slots__ = ("_indices", "_values", "_lookup", "_hash")

    def __init__(self, entries: EntriesLike = ()):
        pairs = entries.items() if isinstance(entries, Mapping) else entries
        collected: Dict[int, float] = {}
        for raw_index, raw_value in pairs:
            if isinstance(raw_index, bool) or int(raw_index) != raw_index:
                raise ParameterError(f"Index must be an integer, got {raw_index!r}")
            index = int(raw_index)
            value = float(raw_value)
            if index < 1:
                raise ParameterError(f"Indices start at 1, got {index}")
            if not math.isfinite(value):
                raise ParameterError(f"Coefficient at index {index} is not finite: {value}")
            if index in collected:
                raise ParameterError(f"Duplicate index {index}")
            collected[index] = value
        ordered = sorted((i, v) for i, v in collected.items() if v != 0.0)
        self._set_arrays(
            np.array([i for i, _ in ordered], dtype=np.int64),
            np.array([v for _, v in ordered], dtype=np.float64),
        )

    def _set_arrays(self, indices: np.ndarray, values: np.ndarray) -> None:
        indices.setflags(write=False)
        values.setflags(write=False)
        self._indices = indices
        self._values = values
        self._lookup: Optional[Dict[int, float]] = None
        self._hash: Optional[int] = None

    @classmethod
    def _from_sorted(cls, indices: np.ndarray, values: np.ndarray) -> "SpVec":
        """Build from sorted unique indices without validation, dropping zeros."""
        keep = values != 0.0
        vec = cls.__new__(cls)
        vec._set_arrays(
            np.ascontiguousarray(indices[keep], dtype=np.int64),
            np.ascontiguousarray(values[keep], dtype=np.float64),
        )
        return vec

    @classmethod
    def from_arrays(cls, indices: Iterable[int], values: Iterable[float]) -> "SpVec":
        """Build from parallel index and value sequences."""
        return cls(zip(indices, values))

    @classmethod
    def from_dense(cls, values: Iterable[float], offset: int = 1) -> "SpVec":
        """Build from a dense array whose first entry sits at ``offset``."""
        arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, float)
        if arr.ndim != 1:
            raise ParameterError(f"Dense input must be one-dimensional, got shape {arr.shape}")
        if offset < 1:
            raise ParameterError(f"Offset must be >= 1, got {offset}")
        if not np.all(np.isfinite(arr)):
            raise ParameterError("Dense input contains non-finite values")
        return cls._from_sorted(np.arange(offset, offset + arr.size, dtype=np.int64), arr)

    @classmethod
    def unit(cls, index: int, value: float = 1.0) -> "SpVec":
        return cls({index: value})

    @classmethod
    def indicator(cls, indices: Iterable[int], value: float = 1.0) -> "SpVec":
        """Constant-coefficient vector ``value * 1_A``."""
        return cls({i: value for i in indices})

    @classmethod
    def zero(cls) -> "SpVec":
        return cls()

    # --- access ---

    @property
    def indices(self) -> np.ndarray:
        """Sorted support indices (read-only array)."""
        return self._indices

    @property
    def values(self) -> np.ndarray:
        """Coefficients aligned with ``indices`` (read-only array)."""
        return self._values

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(self._indices.tolist())

    @property
    def max_index(self) -> int:
        return int(self._indices[-1]) if self._indices.size else 0

    def _table(self) -> Dict[int, float]:
        if self._lookup is None:
            self._lookup = dict(zip(self._indices.tolist(), self._values.tolist()))
        return self._lookup

    def __getitem__(self, index: int) -> float:
        return self._table().get(int(index), 0.0)

    def __len__(self) -> int:
        return int(self._indices.size)

    def __bool__(self) -> bool:
        return self._indices.size > 0

    def __iter__(self) -> Iterator[int]:
        return iter(self._indices.tolist())

    def items(self) -> List[Tuple[int, float]]:
        return list(zip(self._indices.tolist(), self._values.tolist()))

    def to_dense(self, length: Optional[int] = None) -> np.ndarray:
        """Dense array of coordinates 1..length (defaults to the last support index)."""
        n = self.max_index if length is None else length
        if self.max_index > n:
            raise ParameterError(f"Support reaches index {self.max_index} beyond length {n}")
        dense = np.zeros(n, dtype=np.float64)
        dense[self._indices - 1] = self._values
        return dense

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._values))) if self._values.size else 0.0

    def min_abs(self) -> float:
        return float(np.min(np.abs(self._values))) if self._values.size else 0.0

    # --- coordinate operators ---

    def restrict(self, indices: Iterable[int]) -> "SpVec":
        """Coordinate projection S_A."""
        wanted = np.fromiter(indices, dtype=np.int64)
        mask = np.isin(self._indices, wanted)
        return SpVec._from_sorted(self._indices[mask], self._values[mask])

    def without(self, indices: Iterable[int]) -> "SpVec":
        """Complementary projection S_{A^c}."""
        dropped = np.fromiter(indices, dtype=np.int64)
        mask = ~np.isin(self._indices, dropped)
        return SpVec._from_sorted(self._indices[mask], self._values[mask])

    def multiply(self, gamma: Mapping[int, float], default: float = 1.0) -> "SpVec":
        """Multiplier M_gamma; coordinates outside gamma's domain use ``default``."""
        factors = np.array([gamma.get(i, default) for i in self._indices.tolist()], dtype=float)
        return SpVec._from_sorted(self._indices, self._values * factors)

    def shift(self, offset: int) -> "SpVec":
        """Translate the support by ``offset`` positions."""
        if self._indices.size and self._indices[0] + offset < 1:
            raise ParameterError(f"Shift by {offset} moves the support below index 1")
        return SpVec._from_sorted(self._indices + offset, self._values)

    def abs(self) -> "SpVec":
        return SpVec._from_sorted(self._indices, np.abs(self._values))

    # --- arithmetic ---

    def _combine(self, other: "SpVec", sign: float) -> "SpVec":
        if not isinstance(other, SpVec):
            return NotImplemented
        indices = np.concatenate([self._indices, other._indices])
        values = np.concatenate([self._values, sign * other._values])
        merged, inverse = np.unique(indices, return_inverse=True)
        sums = np.zeros(merged.size, dtype=np.float64)
        np.add.at(sums, inverse, values)
        return SpVec._from_sorted(merged, sums)

    def __add__(self, other: "SpVec") -> "SpVec":
        return self._combine(other, 1.0)

    def __sub__(self, other: "SpVec") -> "SpVec":
        return self._combine(other, -1.0)

    def __neg__(self) -> "SpVec":
        return SpVec._from_sorted(self._indices, -self._values)

    def __mul__(self, scalar: float) -> "SpVec":
        if isinstance(scalar, SpVec):
            return NotImplemented
        factor = float(scalar)
        if not math.isfinite(factor):
            raise ParameterError(f"Scalar must be finite, got {scalar}")
        return SpVec._from_sorted(self._indices, self._values * factor)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "SpVec":
        if float(scalar) == 0.0:
            raise ParameterError("Division of a vector by zero")
        return self * (1.0 / float(scalar))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpVec):
            return NotImplemented
        return bool(
            np.array_equal(self._indices, other._indices)
            and np.array_equal(self._values, other._values)
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._indices.tobytes(), self._values.tobytes()))
        return self._hash

    def allclose(self, other: "SpVec", tol: float = 1e-9) -> bool:
        """Coordinatewise comparison with absolute tolerance."""
        diff = self - other
        return diff.max_abs() <= tol

    # --- literal grammar ---

    def serialize(self) -> str:
        """Vector literal ``"<coef>@<index>,..."`` in increasing index order."""
        return ",".join(
            f"{_format_coefficient(v)}@{i}"
            for i, v in zip(self._indices.tolist(), self._values.tolist())
        )

    @classmethod
    def parse(cls, text: str) -> "SpVec":
        """Parse a vector literal; the empty literal is the zero vector."""
        if not text.strip():
            return cls()
        entries: List[Tuple[int, float]] = []
        position = 0
        for chunk in text.split(","):
            match = _TERM.fullmatch(chunk)
            if match is None:
                raise SpaceParseError("Expected '<coef>@<index>'", text, position)
            coef_text, index_text = match.groups()
            try:
                value = float(coef_text)
            except ValueError:
                raise SpaceParseError(
                    f"Invalid coefficient {coef_text!r}", text, position + match.start(1)
                ) from None
            if not index_text.isdigit():
                raise SpaceParseError(
                    f"Invalid index {index_text!r}", text, position + match.start(2)
                )
            entries.append((int(index_text), value))
            position += len(chunk) + 1
        seen = [i for i, _ in entries]
        if len(set(seen)) != len(seen):
            raise SpaceParseError("Duplicate index in vector literal", text, 0)
        return cls(entries)

    def __repr__(self) -> str:
        return f"SpVec({self.serialize()!r})"


def nonincreasing_rearrangement(f: SpVec) -> List[float]:
    """
    Absolute coefficients sorted in decreasing order.

    Args:
        f: Finitely supported vector

    Returns:
        List of length |supp(f)|.
    """
    return decreasing_magnitudes(f.values).tolist()


def decreasing_magnitudes(values: np.ndarray) -> np.ndarray:
    """Array form of the nonincreasing rearrangement."""
    return np.sort(np.abs(np.asarray(values, dtype=np.float64)))[::-1]


class SignPattern:
    """Immutable assignment of signs +1/-1 to a finite index set."""

    __slots__ = ("_signs",)

    def __init__(self, signs: Mapping[int, int]):
        checked: Dict[int, int] = {}
        for index, sign in signs.items():
            if int(index) < 1:
                raise ParameterError(f"Indices start at 1, got {index}")
            if sign not in (1, -1):
                raise ParameterError(f"Sign at index {index} must be +1 or -1, got {sign}")
            checked[int(index)] = int(sign)
        self._signs = dict(sorted(checked.items()))

    @classmethod
    def all_plus(cls, indices: Iterable[int]) -> "SignPattern":
        return cls({i: 1 for i in indices})

    @classmethod
    def alternating(cls, indices: Iterable[int]) -> "SignPattern":
        """Signs +,-,+,... along increasing index order."""
        return cls({i: (1 if k % 2 == 0 else -1) for k, i in enumerate(sorted(indices))})

    @classmethod
    def block_alternating(cls, indices: Iterable[int], block: int) -> "SignPattern":
        """Constant signs on consecutive runs of ``block`` indices, alternating between runs."""
        if block < 1:
            raise ParameterError(f"Block length must be positive, got {block}")
        return cls(
            {i: (1 if (k // block) % 2 == 0 else -1) for k, i in enumerate(sorted(indices))}
        )

    @classmethod
    def from_vector(cls, f: SpVec) -> "SignPattern":
        """Signs of the coefficients of f on its support."""
        return cls({i: (1 if v > 0 else -1) for i, v in f.items()})

    @classmethod
    def from_bits(cls, indices: Iterable[int], bits: int) -> "SignPattern":
        """Bit k of ``bits`` set means a minus sign on the k-th smallest index."""
        return cls({i: (-1 if (bits >> k) & 1 else 1) for k, i in enumerate(sorted(indices))})

    @property
    def domain(self) -> Tuple[int, ...]:
        return tuple(self._signs)

    def __getitem__(self, index: int) -> int:
        return self._signs[index]

    def __len__(self) -> int:
        return len(self._signs)

    def items(self) -> List[Tuple[int, int]]:
        return list(self._signs.items())

    def restrict(self, indices: Iterable[int]) -> "SignPattern":
        keep = set(indices)
        return SignPattern({i: s for i, s in self._signs.items() if i in keep})

    def indicator(self, scale: float = 1.0) -> SpVec:
        """The sum ``scale * sum_{n in A} eps_n e_n``."""
        return SpVec({i: scale * s for i, s in self._signs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignPattern):
            return NotImplemented
        return self._signs == other._signs

    def __hash__(self) -> int:
        return hash(tuple(self._signs.items()))

    def __repr__(self) -> str:
        body = ",".join(f"{i}:{'+' if s > 0 else '-'}" for i, s in self._signs.items())
        return f"SignPattern({body})"
