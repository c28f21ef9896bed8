"""
Tests for the reconstructed examples and their quantitative signatures.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from greedylab.errors import BudgetExceededError, ParameterError
from greedylab.foundations.vectors import SpVec
from greedylab.foundations.weights import WeightSpec
from greedylab.gallery import (
    BlockSchedule,
    HilbertBlockBasis,
    alternating_basis,
    block_lengths,
    escape_growth,
    garling_gamma_lower_bound,
    garling_l1_escape,
    hilbert_block_report,
    kt_not_qg_witness,
    kt_urp_constant,
    lplq_basis,
    lplq_succ_not_lucc_report,
    lplq_vectors,
    random_samples,
    t_eta,
    t_eta_check,
    vp_alternating_report,
)
from greedylab.spaces import GarlingSpace
from greedylab.spaces.runlength import RunLengthVector


# --- alternating basis of v_p ---


def test_alternating_signs_give_constant_vector():
    basis = alternating_basis(1.0)
    assert basis.synthesize(SpVec.parse("1@1,-1@2,1@3")) == SpVec.indicator([1, 2, 3])
    assert basis.norm(SpVec.parse("1@1,-1@2,1@3")) == pytest.approx(2.0)


def test_alternating_report_half():
    report = vp_alternating_report(0.5, m_max=6)
    assert report.m == [1, 2, 3, 4, 5, 6]
    assert report.interval_norms[0] == pytest.approx(4.0)
    # jumps 1, 2, 2, 2, 1
    assert report.interval_norms[3] == pytest.approx((2 + 3 * math.sqrt(2)) ** 2)
    assert report.democracy_bound == pytest.approx(4.0)
    assert report.lower_signed == pytest.approx([4.0] * 6)
    assert report.lower_bounded
    # spread indicators pay two unit jumps per coordinate
    assert report.upper == pytest.approx([4.0 * m * m for m in report.m])
    assert report.upper_ratio_min == pytest.approx(4.0)
    assert report.upper_ratio_max == pytest.approx(4.0)
    assert report.democracy_estimate >= 1.0
    assert report.discrepancy
    assert report.witnesses["upper"] == SpVec.indicator(range(1, 12, 2))


def test_alternating_report_banach_case():
    report = vp_alternating_report(1.0, m_max=3)
    assert report.democracy_bound == pytest.approx(report.quoted_constant)
    assert not report.discrepancy
    with pytest.raises(ParameterError):
        vp_alternating_report(1.0, m_max=0)


# --- l_p + l_q ---


def test_lplq_vectors():
    f, g, h = lplq_vectors(2)
    assert f == SpVec.parse("-1@1,2@2,-1@3,2@4")
    assert g == SpVec.parse("-1@1,1@2,-1@3,1@4")
    assert h == SpVec.parse("-1@1,-1@3")
    basis = lplq_basis(1.0, 2.0)
    # f_m sits in the l_q summand only
    assert basis.synthesize(f) == SpVec.parse("1@2,1@4")


def test_lplq_report():
    report = lplq_succ_not_lucc_report(1.0, 2.0, m_max=16)
    assert report.m == [1, 2, 4, 8, 16]
    assert report.f_norms == pytest.approx([math.sqrt(m) for m in report.m])
    assert report.g_norms == pytest.approx([m / 2 for m in report.m])
    assert report.h_norms == pytest.approx([float(m) for m in report.m])
    assert report.ratios_increasing
    assert report.h_ratios == pytest.approx([math.sqrt(m) for m in report.m])
    assert report.h_ratios_increasing
    assert report.sandwich_lower == pytest.approx(0.25)
    assert report.sandwich_upper == pytest.approx(math.sqrt(2))
    # opposite signs on a pair cancel the l_q part and leave 1/2 in l_p
    assert report.observed_min == pytest.approx(0.25)
    assert report.sandwich_holds


def test_lplq_rejects_bad_exponents():
    with pytest.raises(ParameterError):
        lplq_succ_not_lucc_report(2.0, 1.0)
    with pytest.raises(ParameterError):
        lplq_succ_not_lucc_report(1.0, 2.0, m_max=0)


# --- Hilbert block basis ---


def test_hilbert_block_report_small():
    n = 4
    report = hilbert_block_report(n)
    assert report.exhaustive
    assert report.sets_checked == 2 ** (2 * n) - 1
    assert report.democracy_holds
    assert 1.0 - 1e-10 <= report.min_ratio <= report.max_ratio <= 2.0 + 1e-10
    assert report.signed_theta_norm == pytest.approx(1.0)
    assert report.pair_norms == pytest.approx([2.0, 2.0, 1.0])
    assert report.block_sum_error == pytest.approx(0.0, abs=1e-12)
    cosine = (n - 0.5) / n
    expected = 1.0 - 1.0 / n + 1.0 / (n * (1.0 - cosine**2))
    assert report.dual_norms_squared_min == pytest.approx(expected)
    assert report.dual_norms_squared_max == pytest.approx(expected)
    assert report.projection_lower_bound is None


def test_hilbert_projection_norm_grows():
    report = hilbert_block_report(8, with_operator_norms=True)
    assert report.projection_target == pytest.approx(math.sqrt(2))
    assert report.projection_claimed == pytest.approx(4.0 / 3.0)
    assert report.projection_lower_bound >= report.projection_claimed


def test_hilbert_block_basis_layout():
    basis = HilbertBlockBasis(3)
    assert basis.dimension == 6
    assert basis.index(2, 1) == 4
    assert basis.theta == [1, 2, 3, 4, 5, 6]
    np.testing.assert_allclose(np.linalg.norm(basis.columns, axis=0), np.ones(6))
    with pytest.raises(ParameterError):
        HilbertBlockBasis(1)
    with pytest.raises(BudgetExceededError):
        hilbert_block_report(33)


# --- KT spaces ---


def test_kt_witness_structure():
    N = 4
    witness = kt_not_qg_witness(2.0, N)
    assert witness.g.length == N * N + N * (N + 1) // 2
    assert witness.spikes.tolist() == [5, 11, 18, 26]
    assert witness.digest == witness.g.digest()
    assert witness.recheck() == pytest.approx(witness.ratio)


def test_kt_witness_ratio_grows():
    small = kt_not_qg_witness(2.0, 8)
    large = kt_not_qg_witness(2.0, 64)
    # the spikes alone have partial sums up to the harmonic number
    assert large.norm_h == pytest.approx(sum(1.0 / k for k in range(1, 65)))
    assert large.norm_g >= 1.0
    assert large.ratio > small.ratio > 0
    with pytest.raises(ParameterError):
        kt_not_qg_witness(1.0, 8)
    with pytest.raises(ParameterError):
        kt_not_qg_witness(2.0, 0)


def test_kt_block_lengths_dominate_n():
    for schedule in BlockSchedule:
        lengths = block_lengths(6, schedule)
        assert len(lengths) == 6
        assert all(b > a for a, b in zip(lengths, lengths[1:]))
        assert all((1.0 / k) / m <= 1.0 / 6 for k, m in enumerate(lengths, start=1))
    assert block_lengths(4, BlockSchedule.POWER) == [4, 8, 16, 32]
    assert block_lengths(5, "power") == [8, 16, 32, 64, 128]
    with pytest.raises(BudgetExceededError):
        block_lengths(64, BlockSchedule.POWER)


def test_kt_witness_power_schedule():
    witness = kt_not_qg_witness(2.0, 4, BlockSchedule.POWER)
    linear = kt_not_qg_witness(2.0, 4)
    assert witness.schedule == BlockSchedule.POWER
    assert witness.g.length == 64
    assert witness.spikes.tolist() == [5, 14, 31, 64]
    assert witness.norm_h == pytest.approx(linear.norm_h)
    assert witness.recheck() == pytest.approx(witness.ratio)
    with pytest.raises(BudgetExceededError):
        kt_not_qg_witness(2.0, 2**16, BlockSchedule.POWER)


def test_kt_urp_constant():
    estimate = kt_urp_constant(WeightSpec.potential(0.5), 1.5, n_max=200)
    assert estimate.weight == "pot:0.5"
    assert len(estimate.profile) == len(estimate.n)
    assert estimate.n[0] == 1
    assert math.isfinite(estimate.value) and estimate.value > 0
    assert 0.0 <= estimate.tail_share < 1.0
    with pytest.raises(ParameterError):
        kt_urp_constant(WeightSpec.potential(0.5), 1.0)


def test_random_samples_are_seeded():
    first = random_samples(5, 4, seed=3)
    assert first == random_samples(5, 4, seed=3)
    assert all(0 < len(f) and f.max_index <= 4 for f in first)


def test_t_eta_spreads_coefficients():
    spread = t_eta(SpVec.parse("2@1,3@2"), [1, 3])
    assert spread == RunLengthVector((2.0, 1.0), (1, 3))
    with pytest.raises(ParameterError):
        t_eta(SpVec.parse("1@3"), [1, 2])


def test_t_eta_check():
    eta = [1, 2, 3, 4, 5, 6]
    banach = t_eta_check(2.0, eta)
    assert banach.samples == 18
    assert banach.bounded
    assert banach.max_ratio <= 1.0 + 1e-9
    quasi = t_eta_check(0.5, eta)
    assert not quasi.bounded
    # e_5 spread over five coordinates: (5^(-1/2) sum_{n<=5} n^(-1/2))^2
    expected = (sum(n**-0.5 for n in range(1, 6)) / math.sqrt(5)) ** 2
    assert quasi.witness == SpVec.unit(5)
    assert quasi.witness_ratio == pytest.approx(expected)
    assert quasi.witness_ratio > 2.0
    with pytest.raises(ParameterError):
        t_eta_check(2.0, [2, 2])


# --- Garling spaces ---


def test_garling_escape():
    N = 4
    report = garling_l1_escape(0.25, N)
    assert len(report.lengths) == N
    assert all(m >= 1 for m in report.lengths)
    assert report.concatenation_norm <= 1.0 + 1e-9
    floor = (1.0 - report.epsilon) ** (1.0 / report.p)
    assert all(lam >= floor * (1 - 1e-9) for lam in report.lambdas)
    assert report.l1_masses == [Fraction(k) for k in range(1, N + 1)]
    assert report.bounded
    assert escape_growth(report) <= 2.0 * report.C
    assert report.h.length == sum(report.lengths)


def test_garling_escape_validation():
    with pytest.raises(ParameterError):
        garling_l1_escape(1.0)
    with pytest.raises(ParameterError):
        garling_l1_escape(0.5, N=0)


def test_garling_gamma_witness():
    result = garling_gamma_lower_bound(0.5, 16)
    assert result.weight == "pot:0.5"
    assert result.target == pytest.approx(4.0)
    assert result.denominator_norm <= 1.0 + 1e-9
    assert result.ratio > 1.0
    assert result.attained_share == pytest.approx(result.ratio / 4.0)
    space = GarlingSpace(0.5, WeightSpec.potential(0.5))
    assert result.witness.recheck(space) == pytest.approx(result.ratio)


def test_garling_gamma_needs_decaying_weight():
    with pytest.raises(ParameterError):
        garling_gamma_lower_bound(0.5, 4, WeightSpec.constant(1.0))
    with pytest.raises(ParameterError):
        garling_gamma_lower_bound(0.5, 0)
