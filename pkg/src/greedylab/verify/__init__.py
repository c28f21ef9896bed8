"""Inequality checks across spaces and the margin report."""

from greedylab.verify.checks import CATALOGUE, Check, CheckContext, SuiteConfig, run_check
from greedylab.verify.report import CSV_COLUMNS, report_emit
from greedylab.verify.suite import failed, run_suite, select_checks

__all__ = [
    "CATALOGUE",
    "CSV_COLUMNS",
    "Check",
    "CheckContext",
    "SuiteConfig",
    "failed",
    "report_emit",
    "run_check",
    "run_suite",
    "select_checks",
]
