"""
Full-scale acceptance runs. Deselect with -m "not slow".
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from greedylab.constants import TestFamily, estimate_all
from greedylab.foundations.contracts import CheckStatus, RenormKind
from greedylab.foundations.weights import WeightSpec
from greedylab.gallery import (
    escape_growth,
    garling_l1_escape,
    hilbert_block_report,
    kt_not_qg_witness,
    kt_qg_bound_check,
    kt_space,
    lplq_succ_not_lucc_report,
    random_samples,
    t_eta_check,
    vp_alternating_report,
)
from greedylab.renorm import RenormedSpace, renorm_isometry_check
from greedylab.spaces import LpSpace, VpSpace
from greedylab.spaces.garling import garling_brute_force, garling_norm
from greedylab.spaces.regularity import hardy_check, prefix_family, weight_report
from greedylab.verify import SuiteConfig, run_suite

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
def test_symmetric_lattices_have_unit_constants(p):
    table = estimate_all(LpSpace(p), TestFamily(dimension=10), workers=4)
    for kind, estimate in table.estimates.items():
        assert estimate.value == pytest.approx(1.0, abs=1e-9), kind


def test_convexity_lemmas():
    kt = kt_space(2.0, WeightSpec.potential(0.5))
    config = SuiteConfig(families=1000, family_size=8, workers=4)
    results = run_suite(
        [LpSpace(0.5), VpSpace(0.5), kt], checks=["convexity", "convexity_scalars"], config=config
    )
    assert len(results) == 6
    assert all(r.status == CheckStatus.PASS for r in results)


def test_lebesgue_inequality():
    config = SuiteConfig(lebesgue_support=10, lebesgue_vectors=1000, workers=2)
    family = TestFamily(dimension=10, n_random=1000)
    results = run_suite([LpSpace(1.0), LpSpace(0.5)], family, ["lebesgue"], config)
    assert all(r.status == CheckStatus.PASS for r in results)


def test_hilbert_example():
    small = hilbert_block_report(4)
    assert small.democracy_holds and small.exhaustive
    assert small.pair_norms == pytest.approx([2.0, 2.0, 1.0], abs=1e-10)
    assert small.signed_theta_norm == pytest.approx(1.0, abs=1e-10)
    large = hilbert_block_report(8, with_operator_norms=True)
    assert large.projection_lower_bound >= math.sqrt(2.0) / 3.0 * math.sqrt(8)


def test_lplq_example():
    report = lplq_succ_not_lucc_report(0.5, 2.0, m_max=64)
    for m, f_norm, h_norm in zip(report.m, report.f_norms, report.h_norms):
        assert f_norm == pytest.approx(m**0.5, rel=1e-12)
        assert h_norm == pytest.approx(m**2.0, rel=1e-12)
    assert report.ratios_increasing
    assert report.h_ratios == pytest.approx([m**1.5 for m in report.m], rel=1e-12)
    assert report.h_ratios_increasing
    assert report.sandwich_holds


def test_alternating_example():
    report = vp_alternating_report(0.5, m_max=1024)
    assert report.lower_bounded
    assert 0 < report.upper_ratio_min <= report.upper_ratio_max < math.inf


def test_kt_witness_growth():
    sizes = [2**k for k in range(6, 17, 2)]
    ratios = [kt_not_qg_witness(2.0, N).ratio for N in sizes]
    assert ratios == sorted(ratios)
    assert ratios[-1] / ratios[0] >= 1.5


def test_kt_quasi_greedy_bound():
    report = kt_qg_bound_check(2.0, 2.0, random_samples(1000, 64))
    assert report.passed
    assert report.instances > 1000


def test_t_eta():
    eta = list(range(1, 65))
    banach = t_eta_check(2.0, eta, random_samples(1000, 64))
    assert banach.max_ratio <= 1.0 + 1e-9
    quasi = t_eta_check(0.5, list(range(1, 10_001, 100)))
    assert quasi.witness is not None and quasi.witness_ratio > 2.0


@pytest.mark.parametrize("kind", list(RenormKind))
def test_renormings_on_lp(kind):
    samples = random_samples(1000, 6, seed=1)
    report = renorm_isometry_check(RenormedSpace(LpSpace(0.5), kind), samples)
    assert report.violations == 0


@pytest.mark.parametrize("kind", [RenormKind.CHAIN0, RenormKind.TRUNC1])
def test_chain_renormings_on_kt(kind):
    space = kt_space(2.0, WeightSpec.potential(0.5))
    report = renorm_isometry_check(RenormedSpace(space, kind), random_samples(1000, 6, seed=2))
    assert report.violations == 0


def test_garling_norm_matches_brute_force():
    rng = np.random.default_rng(11)
    w = WeightSpec.potential(0.5)
    for _ in range(1000):
        values = rng.standard_normal(int(rng.integers(1, 13)))
        p = float(rng.choice([0.25, 0.5, 1.0]))
        assert garling_norm(values, p, w) == pytest.approx(
            garling_brute_force(values, p, w), rel=1e-9
        )


def test_garling_escape():
    report = garling_l1_escape(0.25, 6)
    assert report.l1_masses[-1] == Fraction(6)
    assert report.bounded
    assert escape_growth(report) <= 2.0 * report.C


def test_weight_predicates():
    potential = weight_report(WeightSpec.potential(0.5))
    assert potential.urp and potential.lrp
    constant = weight_report(WeightSpec.constant(1.0))
    assert not constant.urp and constant.lrp
    family = prefix_family(12)
    assert hardy_check(WeightSpec.potential(0.5), 2.0, family).stabilizes
    assert hardy_check(WeightSpec.constant(1.0), 2.0, family).strictly_increasing
