from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field


class ConstantKind(str, Enum):
    """Named basis constants estimated by search."""

    K_SU = "K_su"  # Suppression unconditional
    K_U = "K_u"  # Lattice unconditional
    K_SC = "K_sc"  # Suppression unconditional for constant coefficients
    K_LC = "K_lc"  # Lower unconditional for constant coefficients
    K_PU = "K_pu"  # Lattice partially unconditional
    C_QG = "C_qg"  # Quasi-greedy
    C_QL = "C_ql"  # Quasi-greedy for largest coefficients
    C_AG = "C_ag"  # Almost greedy
    C_G = "C_g"  # Greedy
    DELTA = "Delta"  # Democracy
    DELTA_D = "Delta_d"  # Disjoint democracy
    DELTA_S = "Delta_s"  # Super-democracy
    DELTA_SD = "Delta_sd"  # Disjoint super-democracy
    GAMMA = "Gamma"  # Symmetry for largest coefficients
    LAMBDA_U = "Lambda_u"  # Restricted truncation U
    LAMBDA_T = "Lambda_t"  # Truncation T
    DELTA_B = "Delta_b"  # Bidemocracy
    DELTA_SB = "Delta_sb"  # Sign bidemocracy


class SearchMode(str, Enum):
    """How best m-term errors are searched."""

    EXACT = "exact"  # Exhaustive within the binomial cap
    HEURISTIC = "heuristic"  # Structured plus random candidates, an upper bound


class CheckStatus(str, Enum):
    """Outcome of a single inequality check."""

    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class RenormKind(str, Enum):
    """Renormings that make greedy-type constants equal to one."""

    CHAIN0 = "chain0"  # sup over nested greedy pairs
    TRUNC1 = "trunc1"  # sup of truncations over strictly greedy sets
    ALMOST_A = "almost_a"  # inf over admissible (A, z) pairs


class ReportFormat(str, Enum):
    """Serialization formats for reports."""

    TEXT = "text"
    CSV = "csv"
    JSON = "json"


class CheckResult(BaseModel):
    """Outcome of evaluating one inequality on one space."""

    check_id: str = Field(..., description="Catalogue key of the inequality")
    space: str = Field(..., description="Canonical label of the space or model")
    lhs: float = Field(0.0, description="Largest left-hand side observed")
    rhs: float = Field(0.0, description="Right-hand side at the worst instance")
    margin: float = Field(0.0, description="rhs - lhs at the worst instance")
    status: CheckStatus
    witness_ref: str = Field("", description="Vector literal or note locating the worst instance")
    reason: Optional[str] = Field(None, description="Unmet precondition when skipped")
    instances: int = Field(0, ge=0, description="Number of instances evaluated")
