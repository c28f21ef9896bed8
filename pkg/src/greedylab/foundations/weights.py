"""
Weights and their primitive sequences.

A WeightSpec generates a positive weight w = (w_n) and its primitive
s_n = w_1 + ... + w_n. Potential weights u_alpha have w_n = n^(alpha - 1),
so that s_n grows like n^alpha; explicit weights list finitely many values
followed by a constant tail.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from greedylab.errors import ParameterError

CONSTANT = "const"
POTENTIAL = "pot"
EXPLICIT = "expl"


def _format_number(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


@dataclass(frozen=True)
class WeightSpec:
    """Description of a positive weight sequence."""

    kind: str  # const, pot or expl
    parameter: float = 1.0  # constant value c, or exponent alpha for pot
    explicit: Tuple[float, ...] = field(default_factory=tuple)  # leading values for expl
    tail: float = 1.0  # value after the explicit list

    def __post_init__(self) -> None:
        if self.kind == CONSTANT:
            if not self.parameter > 0:
                raise ParameterError(f"Constant weight must be positive, got {self.parameter}")
        elif self.kind == POTENTIAL:
            if not 0 < self.parameter <= 1:
                raise ParameterError(f"Potential exponent must lie in (0, 1], got {self.parameter}")
        elif self.kind == EXPLICIT:
            if not self.explicit:
                raise ParameterError("Explicit weight needs at least one value")
            if any(not v > 0 for v in self.explicit) or not self.tail > 0:
                raise ParameterError(f"Explicit weight values must be positive: {self.label}")
        else:
            raise ParameterError(f"Unknown weight kind: {self.kind}")

    @classmethod
    def constant(cls, value: float = 1.0) -> "WeightSpec":
        return cls(CONSTANT, float(value))

    @classmethod
    def potential(cls, alpha: float) -> "WeightSpec":
        return cls(POTENTIAL, float(alpha))

    @classmethod
    def from_values(cls, values: Sequence[float], tail: float) -> "WeightSpec":
        return cls(EXPLICIT, 1.0, tuple(float(v) for v in values), float(tail))

    @property
    def label(self) -> str:
        """Canonical grammar text, e.g. ``pot:0.5``."""
        if self.kind == EXPLICIT:
            body = ",".join(_format_number(v) for v in self.explicit)
            return f"expl:[{body};tail={_format_number(self.tail)}]"
        return f"{self.kind}:{_format_number(self.parameter)}"

    @property
    def is_nonincreasing(self) -> bool:
        if self.kind in (CONSTANT, POTENTIAL):
            return True
        values = np.append(np.asarray(self.explicit), self.tail)
        return bool(np.all(np.diff(values) <= 0))

    def weights(self, n: int) -> np.ndarray:
        """w_1..w_n as a read-only array."""
        return _weights(self, int(n))

    def primitive(self, n: int) -> np.ndarray:
        """s_1..s_n as a read-only array."""
        return _primitive(self, int(n))

    def weight_at(self, n: int) -> float:
        if n < 1:
            raise ParameterError(f"Weight index must be >= 1, got {n}")
        if self.kind == CONSTANT:
            return self.parameter
        if self.kind == POTENTIAL:
            return float(n) ** (self.parameter - 1.0)
        return self.explicit[n - 1] if n <= len(self.explicit) else self.tail

    def primitive_at(self, n: int) -> float:
        if n <= 0:
            return 0.0
        if self.kind == CONSTANT:
            return self.parameter * n
        return float(self.primitive(n)[-1])

    @staticmethod
    def discrete_derivative(primitive: Sequence[float]) -> np.ndarray:
        """Delta(t)_n = t_n - t_{n-1} with t_0 = 0."""
        t = np.asarray(primitive, dtype=np.float64)
        return np.diff(t, prepend=0.0)


@lru_cache(maxsize=64)
def _weights(spec: WeightSpec, n: int) -> np.ndarray:
    if n < 0:
        raise ParameterError(f"Length must be non-negative, got {n}")
    if spec.kind == CONSTANT:
        out = np.full(n, spec.parameter, dtype=np.float64)
    elif spec.kind == POTENTIAL:
        out = np.arange(1, n + 1, dtype=np.float64) ** (spec.parameter - 1.0)
    else:
        out = np.full(n, spec.tail, dtype=np.float64)
        head = min(n, len(spec.explicit))
        out[:head] = spec.explicit[:head]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=64)
def _primitive(spec: WeightSpec, n: int) -> np.ndarray:
    if spec.kind == CONSTANT:
        out = spec.parameter * np.arange(1, n + 1, dtype=np.float64)
    else:
        out = np.cumsum(_weights(spec, n))
    out.setflags(write=False)
    return out
