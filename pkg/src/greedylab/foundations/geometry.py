"""
Geometric constants of p-Banach spaces.

A_p and B_p quantify how far p-convex combinations drift from the p-norm
triangle inequality; eta_p is the auxiliary function governing how
quasi-greedy constants propagate to constant-coefficient estimates.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import structlog

from greedylab.errors import ConvergenceError, ParameterError

logger = structlog.get_logger(__name__)

# Brackets on the logit scale of t; the optimum moves towards t = 0 as u -> 0.
_ETA_BRACKETS: Tuple[Tuple[float, float], ...] = ((-45.0, 0.0), (-12.0, 12.0), (0.0, 45.0))


@dataclass(frozen=True)
class GeomConstants:
    """Convexity constants of a p-Banach space over the real field."""

    p: float
    A_p: float
    B_p: float


def _check_exponent(p: float) -> float:
    p = float(p)
    if not (0.0 < p <= 1.0) or math.isnan(p):
        raise ParameterError(f"Convexity exponent must lie in (0, 1], got {p}")
    return p


def geom_constants(p: float) -> GeomConstants:
    """
    Compute A_p = (2^p - 1)^(-1/p) and B_p = 2^(1/p) A_p.

    Args:
        p: Convexity exponent in (0, 1]

    Returns:
        GeomConstants for the real field.
    """
    p = _check_exponent(p)
    a_p = math.exp(-math.log(math.expm1(p * math.log(2.0))) / p)
    return GeomConstants(p=p, A_p=a_p, B_p=2.0 ** (1.0 / p) * a_p)


def _log_objective(x: float, p: float, c: float) -> float:
    # t = 1 / (1 + e^{-x}) keeps t strictly inside (0, 1).
    log_t = -float(np.logaddexp(0.0, -x))
    t = math.exp(log_t)
    first = math.log(-math.expm1(p * log_t))
    second = math.log(-math.expm1(-p * math.log1p(c * t)))
    return -(first + second) / p


def eta_p(p: float, u: float, tol: float = 1e-9) -> float:
    """
    Evaluate eta_p(u) = min_{0<t<1} (1-t^p)^(-1/p) (1-(1+t/(A_p u))^(-p))^(-1/p).

    The minimization runs in log space over a logit reparametrization of t,
    restarted on three brackets; the smallest converged value wins.

    Args:
        p: Convexity exponent in (0, 1]
        u: Positive argument (a quasi-greedy constant in applications)
        tol: Relative tolerance of the minimizer

    Returns:
        eta_p(u), always >= 1.
    """
    from scipy.optimize import minimize_scalar

    p = _check_exponent(p)
    u = float(u)
    if not (u > 0.0) or not math.isfinite(u):
        raise ParameterError(f"eta_p needs a positive finite argument, got {u}")

    c = 1.0 / (geom_constants(p).A_p * u)
    best = math.inf
    failures = 0
    for low, high in _ETA_BRACKETS:
        result = minimize_scalar(
            _log_objective,
            bounds=(low, high),
            args=(p, c),
            method="bounded",
            options={"xatol": tol, "maxiter": 500},
        )
        if not result.success or not math.isfinite(result.fun):
            failures += 1
            continue
        best = min(best, float(result.fun))

    if not math.isfinite(best):
        raise ConvergenceError(f"eta_p minimization failed for p={p}, u={u}")
    if failures:
        logger.debug("eta_bracket_failed", p=p, u=u, failures=failures)
    return max(1.0, math.exp(best))
