"""Serialization of check results as CSV, JSON or aligned text."""

import csv
import io
import json
from typing import List, Sequence, Union

from greedylab.errors import ParameterError
from greedylab.foundations.contracts import CheckResult, ReportFormat

CSV_COLUMNS = ("check_id", "space", "lhs", "rhs", "margin", "status", "witness_ref")


def _number(value: float) -> str:
    return repr(float(value))


def _csv(results: Sequence[CheckResult]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in results:
        writer.writerow(
            [
                r.check_id,
                r.space,
                _number(r.lhs),
                _number(r.rhs),
                _number(r.margin),
                r.status.value,
                r.witness_ref,
            ]
        )
    return buffer.getvalue()


def _json(results: Sequence[CheckResult]) -> str:
    payload = [r.model_dump(mode="json") for r in results]
    return json.dumps(payload, indent=2) + "\n"


def _text(results: Sequence[CheckResult]) -> str:
    if not results:
        return "no results\n"
    rows: List[List[str]] = [["check", "space", "lhs", "rhs", "margin", "status"]]
    for r in results:
        status = r.status.value if r.reason is None else f"{r.status.value} ({r.reason})"
        rows.append(
            [r.check_id, r.space, f"{r.lhs:.6g}", f"{r.rhs:.6g}", f"{r.margin:.3g}", status]
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]) - 1)]
    lines = [
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths)) + "  " + row[-1]
        for row in rows
    ]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def report_emit(
    results: Sequence[CheckResult], fmt: Union[ReportFormat, str] = ReportFormat.TEXT
) -> str:
    """
    Serialize results with a fixed field order.

    Args:
        results: Check results, already in report order
        fmt: csv, json or text

    Returns:
        The report; an empty CSV report is the header line alone.
    """
    try:
        fmt = ReportFormat(fmt)
    except ValueError:
        raise ParameterError(f"Unknown report format: {fmt}") from None
    if fmt == ReportFormat.CSV:
        return _csv(results)
    if fmt == ReportFormat.JSON:
        return _json(results)
    return _text(results)
