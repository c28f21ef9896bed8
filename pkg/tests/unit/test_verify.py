"""
Tests for the check catalogue, the suite runner and the report formats.
"""

import json

import pytest

from greedylab.basis import as_model
from greedylab.constants import TestFamily
from greedylab.errors import BudgetExceededError, ParameterError
from greedylab.foundations.contracts import CheckResult, CheckStatus
from greedylab.gallery import kt_space
from greedylab.spaces import LpSpace, VpSpace
from greedylab.verify import (
    CATALOGUE,
    CSV_COLUMNS,
    Check,
    CheckContext,
    SuiteConfig,
    failed,
    report_emit,
    run_check,
    run_suite,
    select_checks,
)
from greedylab.verify.checks import CHAIN_REGIME

SMALL = SuiteConfig(
    samples=8, families=4, renorm_samples=3, lebesgue_vectors=3, lebesgue_support=5
)


# --- catalogue ---


def test_catalogue_contents():
    assert len(CATALOGUE) == 24
    assert {"convexity", "qgunc", "sandwich", "qg5", "renorm_almost_a"} <= set(CATALOGUE)
    assert CATALOGUE["convexity"].per_vector
    assert not CATALOGUE["qg5"].per_vector
    for check_id, check in CATALOGUE.items():
        assert check.check_id == check_id
        assert check.summary


def test_select_checks():
    assert select_checks() == sorted(CATALOGUE)
    assert select_checks(["qg5", "chg", "qg5"]) == ["chg", "qg5"]
    with pytest.raises(ParameterError, match="nope"):
        select_checks(["qg5", "nope"])


def test_suite_config_validation():
    with pytest.raises(ParameterError):
        SuiteConfig(tol=-1.0)
    with pytest.raises(ParameterError):
        SuiteConfig(samples=0)


def test_exact_regime(small_family):
    assert CheckContext(as_model(LpSpace(0.5)), small_family, SMALL).exact_regime
    assert not CheckContext(as_model(VpSpace(0.5)), small_family, SMALL).exact_regime


def test_run_check_turns_budget_errors_into_skips(small_family):
    def explode(ctx):
        raise BudgetExceededError("too many sets")

    ctx = CheckContext(as_model(LpSpace(1.0)), small_family, SMALL)
    result = run_check(Check("explode", "always over budget", True, explode), ctx)
    assert result.status == CheckStatus.SKIPPED
    assert result.reason.startswith("budget exceeded")


def test_qgunc_uses_the_shared_estimate_on_symmetric_lattices(small_family):
    ctx = CheckContext(as_model(LpSpace(0.5)), small_family, SMALL)
    result = run_check(CATALOGUE["qgunc"], ctx)
    assert result.status == CheckStatus.PASS
    assert result.reason is None
    # lattice unconditional: C_qg = 1 and the factor is 2^(1/p)
    assert result.rhs == pytest.approx(4.0)
    assert result.lhs <= result.rhs


def test_qgunc_takes_the_quotient_per_instance_elsewhere(small_family):
    ctx = CheckContext(as_model(kt_space(2.0)), small_family, SMALL)
    assert not ctx.exact_regime
    result = run_check(CATALOGUE["qgunc"], ctx)
    assert result.status == CheckStatus.PASS
    assert result.instances == SMALL.samples
    assert result.reason == "C_qg taken per instance over greedy sets"
    assert result.rhs >= 2.0 ** (1.0 / ctx.model.p_exponent)


def test_renorm_check_reports_samples_past_the_caps():
    # the first family vector is the all-ones block, a 25-way tie
    family = TestFamily(dimension=25, n_random=0)
    config = SuiteConfig(samples=1, renorm_samples=1)
    ctx = CheckContext(as_model(LpSpace(1.0)), family, config)
    result = run_check(CATALOGUE["renorm_chain0"], ctx)
    assert result.status == CheckStatus.SKIPPED
    assert result.reason.startswith("1 of 1 samples past the enumeration caps")


# --- suite ---


def test_chain_checks_skip_outside_symmetric_lattices(small_family):
    checks = ["qg5", "sup_vs_lat", "esp_sup_unc", "ucc5"]
    results = run_suite([VpSpace(0.5)], small_family, checks, SMALL)
    assert [r.check_id for r in results] == sorted(checks)
    for r in results:
        assert r.status == CheckStatus.SKIPPED
        assert r.reason == CHAIN_REGIME


def test_per_vector_checks_hold_on_differences_space(small_family):
    checks = ["convexity", "convexity_scalars", "qgunc"]
    results = run_suite([VpSpace(0.5)], small_family, checks, SMALL)
    for r in results:
        assert r.status == CheckStatus.PASS, r.check_id
        assert r.instances > 0
        assert r.margin >= -SMALL.tol * max(r.rhs, 1.0)


def test_full_catalogue_on_quasi_banach_lp(small_family):
    results = run_suite([LpSpace(0.5)], small_family, config=SMALL)
    assert len(results) == len(CATALOGUE)
    assert not failed(results)
    statuses = {r.check_id: r.status for r in results}
    assert statuses["goalineq"] == CheckStatus.SKIPPED
    assert statuses["ag_estimates_iv"] == CheckStatus.SKIPPED
    assert statuses["qg5"] == CheckStatus.PASS
    assert statuses["renorm_almost_a"] == CheckStatus.PASS


def test_suite_is_sorted_and_worker_independent(small_family):
    spaces = [VpSpace(1.0), LpSpace(1.0)]
    checks = ["qgunc", "convexity"]
    serial = run_suite(spaces, small_family, checks, SuiteConfig(samples=8, families=4, workers=1))
    pooled = run_suite(spaces, small_family, checks, SuiteConfig(samples=8, families=4, workers=4))
    assert [(r.check_id, r.space) for r in serial] == [
        ("convexity", "lp:1"),
        ("convexity", "vp:1"),
        ("qgunc", "lp:1"),
        ("qgunc", "vp:1"),
    ]
    assert serial == pooled


# --- reports ---


def _sample_results():
    return [
        CheckResult(
            check_id="qgunc",
            space="lp:1",
            lhs=1.0,
            rhs=2.0,
            margin=1.0,
            status=CheckStatus.PASS,
            witness_ref="1@1",
            instances=3,
        ),
        CheckResult(check_id="qg5", space="vp:1", status=CheckStatus.SKIPPED, reason="why"),
    ]


def test_empty_reports():
    assert report_emit([], "csv") == ",".join(CSV_COLUMNS) + "\n"
    assert report_emit([], "text") == "no results\n"
    assert json.loads(report_emit([], "json")) == []


def test_csv_report():
    lines = report_emit(_sample_results(), "csv").splitlines()
    assert lines[0] == "check_id,space,lhs,rhs,margin,status,witness_ref"
    assert lines[1] == "qgunc,lp:1,1.0,2.0,1.0,pass,1@1"
    assert lines[2] == "qg5,vp:1,0.0,0.0,0.0,skipped,"


def test_json_report():
    payload = json.loads(report_emit(_sample_results(), "json"))
    assert payload[0]["check_id"] == "qgunc"
    assert payload[1]["status"] == "skipped"
    assert payload[1]["reason"] == "why"


def test_text_report():
    text = report_emit(_sample_results())
    lines = text.splitlines()
    assert lines[0].split() == ["check", "space", "lhs", "rhs", "margin", "status"]
    assert lines[2].endswith("skipped (why)")


def test_unknown_report_format():
    with pytest.raises(ParameterError):
        report_emit([], "xml")
