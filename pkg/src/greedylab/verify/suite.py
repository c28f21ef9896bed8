"""
Run the check catalogue over several models.

Checks are independent and run in a thread pool. Each model gets one
CheckContext, so its constant estimates are computed once and shared by the
chain checks that need them. Results are sorted by (check id, space) and do
not depend on the number of workers.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import structlog

from greedylab.basis.models import ModelLike, as_model
from greedylab.constants.families import TestFamily
from greedylab.errors import ParameterError
from greedylab.foundations.contracts import CheckResult, CheckStatus
from greedylab.verify.checks import CATALOGUE, CheckContext, SuiteConfig, run_check

logger = structlog.get_logger(__name__)


def select_checks(names: Optional[Sequence[str]] = None) -> List[str]:
    """Catalogue ids in order; unknown names raise ParameterError."""
    if not names:
        return sorted(CATALOGUE)
    unknown = sorted(set(names) - set(CATALOGUE))
    if unknown:
        raise ParameterError(f"Unknown check ids: {', '.join(unknown)}")
    return sorted(set(names))


def run_suite(
    spaces: Sequence[ModelLike],
    family: Optional[TestFamily] = None,
    checks: Optional[Sequence[str]] = None,
    config: Optional[SuiteConfig] = None,
) -> List[CheckResult]:
    """
    Evaluate the selected checks on every model.

    Args:
        spaces: Basis models or bare spaces
        family: Search family shared by the constant estimates
        checks: Catalogue ids; all of them by default
        config: Suite budgets

    Returns:
        One CheckResult per (check, model), sorted by check id then space label.
        Failures are results, never exceptions.
    """
    family = family or TestFamily()
    config = config or SuiteConfig()
    selected = select_checks(checks)
    contexts = [CheckContext(as_model(space), family, config) for space in spaces]
    jobs = [(CATALOGUE[check_id], ctx) for ctx in contexts for check_id in selected]

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        results = list(pool.map(lambda job: run_check(*job), jobs))

    results.sort(key=lambda r: (r.check_id, r.space))
    counts = {status.value: sum(r.status == status for r in results) for status in CheckStatus}
    logger.info("suite_finished", spaces=len(contexts), checks=len(selected), **counts)
    return results


def failed(results: Sequence[CheckResult]) -> bool:
    return any(r.status == CheckStatus.FAIL for r in results)
