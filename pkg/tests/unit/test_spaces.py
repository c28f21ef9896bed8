"""
Tests for the quasi-norm zoo, the grammar, run-length evaluation and weight regularity.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from greedylab.errors import (
BudgetExceededError,
ParameterError,
SpaceParseError,
UnsupportedError,
)
from greedylab.foundations.vectors import SpVec
from greedylab.foundations.weights import WeightSpec
from greedylab.spaces import (
C0Space,
DirectSum,
GarlingSpace,
KTSpace,
LorentzSpace,
LpSpace,
MarcinkiewiczSpace,
MixedNormSpace,
RunLengthVector,
SwSpace,
VpSpace,
certify_exponent,
doubling_constant,
fundamental_lorentz,
hardy_check,
norm,
parse_space,
parse_weight,
runlength_norm,
weight_report,
)
from greedylab.spaces.garling import (
garling_brute_force,
garling_norm,
garling_runs_power,
garling_shift_profile,
trailing_max,
)
from greedylab.spaces.regularity import prefix_family
from greedylab.spaces.runlength import exact_unit_mass, power_sum


@st.composite
def coefficient_arrays(draw, max_size: int = 9):
    """Short coefficient arrays with entries of both signs."""
    return draw(
        arrays(
            dtype=np.float64,
            shape=st.integers(1, max_size),
            elements=st.floats(min_value=-10.0, max_value=10.0, allow_nan=False),
        )
    )


# --- norms ---


def test_lp_norms():
    f = SpVec.parse("3@1,-4@5")
    assert norm(LpSpace(1.0), f) == 7.0
    assert norm(LpSpace(2.0), f) == pytest.approx(5.0)
    assert norm(LpSpace(math.inf), f) == 4.0
    assert norm(LpSpace(0.5), SpVec.indicator([1, 2])) == pytest.approx(4.0)
    assert norm(C0Space(), f) == 4.0
    assert norm(LpSpace(0.5), SpVec.zero()) == 0.0


def test_lp_flags():
    assert LpSpace(0.5).p_exponent == 0.5
    assert LpSpace(2.0).p_exponent == 1.0
    assert LpSpace(0.5).symmetric
    assert LpSpace(0.5).lattice_unconditional
    with pytest.raises(ParameterError):
        LpSpace(0.0)


def test_norm_needs_spvec():
    with pytest.raises(ParameterError):
        norm(LpSpace(1.0), np.ones(3))


@given(coefficient_arrays())
@settings(max_examples=40)
def test_lorentz_diagonal_is_lq(values):
    """d_{q,q} with the unit constant weight coincides with l_q."""
    f = SpVec.from_dense(values)
    lorentz = LorentzSpace(1.5, 1.5, WeightSpec.constant(1.0))
    assert lorentz.norm(f) == pytest.approx(LpSpace(1.5).norm(f), rel=1e-9, abs=1e-12)


def test_lorentz_is_rearrangement_invariant():
    space = LorentzSpace(1.0, 2.0, WeightSpec.potential(0.5))
    assert space.norm(SpVec.parse("1@1,3@2,2@7")) == pytest.approx(
        space.norm(SpVec.parse("3@1,-2@2,1@3"))
    )


def test_lorentz_fundamental_function():
    w = WeightSpec.potential(0.5)
    space = LorentzSpace(1.0, 2.0, w)
    for m in (1, 4, 9):
        assert fundamental_lorentz(1.0, 2.0, w, m) == pytest.approx(
            space.norm(SpVec.indicator(range(1, m + 1)))
        )
    assert fundamental_lorentz(1.0, math.inf, w, 4) == pytest.approx(w.primitive_at(4))


def test_lorentz_exponent_for_decreasing_profile():
    assert LorentzSpace(2.0, 1.0, WeightSpec.constant(1.0)).p_exponent == 1.0


def test_lorentz_rejects_non_doubling_weight():
    with pytest.raises(ParameterError):
        LorentzSpace(1.0, 2.0, WeightSpec.from_values([0.001], tail=1000.0))


def test_marcinkiewicz():
    space = MarcinkiewiczSpace(WeightSpec.constant(1.0))
    # sup over leading rearrangements of the running average
    assert space.norm(SpVec.parse("4@1,2@2,0.5@3")) == 4.0
    assert space.norm(SpVec.indicator(range(1, 6))) == 1.0


def test_garling_with_constant_weight_is_lp():
    f = SpVec.parse("3@1,-4@2,1@5")
    assert GarlingSpace(2.0, WeightSpec.constant(1.0)).norm(f) == pytest.approx(
        LpSpace(2.0).norm(f)
    )
    assert not GarlingSpace(1.0, WeightSpec.potential(0.5)).symmetric


def test_garling_prefers_large_late_coefficients_early():
    space = GarlingSpace(1.0, WeightSpec.potential(0.5))
    # the single coordinate 4 can take the top weight w_1 = 1
    assert space.norm(SpVec.parse("1@1,4@2")) == pytest.approx(max(1 + 4 / math.sqrt(2), 4))


def test_garling_rejects_increasing_weight():
    with pytest.raises(ParameterError):
        GarlingSpace(1.0, WeightSpec.from_values([1.0], tail=2.0))


@given(coefficient_arrays(max_size=8), st.sampled_from([0.5, 1.0, 2.0]))
@settings(max_examples=40, deadline=None)
def test_garling_dynamic_program_matches_brute_force(values, p):
    """The dynamic program finds the best increasing map."""
    w = WeightSpec.potential(0.4)
    assert garling_norm(values, p, w) == pytest.approx(
        garling_brute_force(values, p, w), rel=1e-9, abs=1e-12
    )


def test_garling_brute_force_cap():
    with pytest.raises(BudgetExceededError):
        garling_brute_force(np.ones(21), 1.0, WeightSpec.constant(1.0))


def test_garling_shift_profile_starts_at_norm():
    w = WeightSpec.potential(0.5)
    magnitudes, lengths = [2.0, 1.0, 3.0], [2, 3, 1]
    profile = garling_shift_profile(magnitudes, lengths, 1.0, w, max_shift=4)
    assert profile[0] == pytest.approx(garling_runs_power(magnitudes, lengths, 1.0, w))
    assert np.all(np.diff(profile) <= 1e-12)


@given(
    arrays(np.float64, st.integers(1, 30), elements=st.floats(-5, 5, allow_nan=False)),
    st.integers(1, 12),
)
@settings(max_examples=50)
def test_trailing_max(values, window):
    expected = [values[max(0, i - window + 1) : i + 1].max() for i in range(values.size)]
    np.testing.assert_array_equal(trailing_max(values, window), expected)


def test_vp():
    assert VpSpace(1.0).norm(SpVec.parse("1@1,1@2")) == 2.0
    assert VpSpace(1.0).norm(SpVec.parse("1@1,-1@2,1@3,-1@4")) == 8.0
    # a gap drops back to zero between runs
    assert VpSpace(1.0).norm(SpVec.parse("1@1,1@3")) == 4.0
    assert VpSpace(0.5).norm(SpVec.parse("1@1,-1@2,1@3,-1@4")) == pytest.approx(
        (2 + 3 * math.sqrt(2)) ** 2
    )
    assert not VpSpace(0.5).lattice_unconditional
    with pytest.raises(ParameterError):
        VpSpace(2.0)


def test_sw_and_kt():
    w = WeightSpec.constant(1.0)
    f = SpVec.parse("1@1,-1@2,1@3")
    assert SwSpace(w).norm(f) == 1.0
    kt = KTSpace(LpSpace(1.0), w)
    assert kt.norm(f) == 3.0
    assert kt.norm(SpVec.parse("0.1@1,0.1@2")) == pytest.approx(0.2)
    assert kt.sw == SwSpace(w)
    assert not kt.lattice_unconditional


def test_direct_sum_interleaves():
    space = DirectSum((LpSpace(1.0), C0Space()))
    f = SpVec.parse("1@1,5@2,3@3")
    first, second = space.split(f)
    assert first == SpVec.parse("1@1,3@2")
    assert second == SpVec.parse("5@1")
    assert space.norm(f) == 5.0
    assert space.embed(1, SpVec.parse("2@1")) == SpVec.parse("2@2")
    with pytest.raises(ParameterError):
        DirectSum((LpSpace(1.0),))


def test_direct_sum_flags():
    mixed = DirectSum((LpSpace(0.5), VpSpace(1.0)))
    assert mixed.p_exponent == 0.5
    assert not mixed.lattice_unconditional


def test_mixed_norm():
    space = MixedNormSpace(1.0, 2.0, (1, 2))
    assert space.norm(SpVec.parse("1@1,3@2,4@3")) == pytest.approx(6.0)
    assert space.dimension == 3
    with pytest.raises(ParameterError):
        space.norm(SpVec.unit(4))
    assert MixedNormSpace.besov(1.0, 2.0, 3).blocks == (1, 2, 3)
    assert MixedNormSpace(2.0, 0.5, (2,)).p_exponent == 0.5


def test_doubling_constant():
    assert doubling_constant(WeightSpec.constant(1.0), 64) == pytest.approx(2.0)
    assert doubling_constant(WeightSpec.potential(0.5), 64) <= 2.0


def test_certified_exponent_of_lp_half():
    assert certify_exponent(LpSpace(0.5)) == 0.5


# --- grammar ---


@pytest.mark.parametrize(
    "text",
    [
        "lp:0.5",
        "c0",
        "lorentz:p=1,q=2,w=pot:0.5",
        "lorentz:p=1,q=inf,w=const:1",
        "marcin:w=pot:0.5",
        "garling:p=1,w=pot:0.5",
        "vp:0.5",
        "sw:w=const:1",
        "kt(lp:1 ; w=pot:0.5)",
        "dsum(lp:1,c0)",
        "mixed:q=1,p=2,blocks=1,2,3",
    ],
)
def test_canonical_labels_round_trip(text):
    assert parse_space(text).label == text


def test_whitespace_is_allowed():
    assert parse_space(" lorentz : p=1 , q=2 , w=pot:0.5 ").label == "lorentz:p=1,q=2,w=pot:0.5"


def test_nested_spaces():
    space = parse_space(
        "dsum(kt(lorentz:p=1,q=2,w=pot:0.5 ; w=pot:0.5),mixed:q=1,p=2,blocks=2,2)"
    )
    assert isinstance(space, DirectSum)
    assert isinstance(space.parts[0], KTSpace)
    assert space.parts[1].blocks == (2, 2)


def test_parse_is_cached():
    assert parse_space("lp:0.5") is parse_space("lp:0.5")


@pytest.mark.parametrize(
    ("text", "position"),
    [("lq:1", 0), ("lp:", 3), ("lp:1 x", 5), ("kt(lp:1 w=const:1)", 8), ("", 0)],
)
def test_parse_errors_report_position(text, position):
    with pytest.raises(SpaceParseError) as excinfo:
        parse_space(text)
    assert excinfo.value.position == position


def test_invalid_parameters_are_parameter_errors():
    with pytest.raises(ParameterError):
        parse_space("vp:2")
    with pytest.raises(ParameterError):
        parse_space("dsum(lp:1)")


def test_parse_weight():
    assert parse_weight("pot:0.5") == WeightSpec.potential(0.5)
    assert parse_weight("expl:[1, 2;tail=3]") == WeightSpec.from_values([1, 2], 3)
    with pytest.raises(SpaceParseError):
        parse_weight("pot:")
    with pytest.raises(SpaceParseError):
        parse_weight("log:1")


# --- run-length vectors ---


def test_runlength_basic_properties():
    rle = RunLengthVector.from_runs([(1.0, 3), (-0.5, 2)])
    assert rle.length == 5
    assert rle.l1_mass() == 4.0
    assert rle.to_spvec() == SpVec.parse("1@1,1@2,1@3,-0.5@4,-0.5@5")
    assert len(rle.digest()) == 64
    assert rle.digest() == RunLengthVector.from_runs([(1.0, 3), (-0.5, 2)]).digest()
    assert rle.digest() != RunLengthVector.from_runs([(1.0, 2), (-0.5, 3)]).digest()


def test_invalid_runs():
    with pytest.raises(ParameterError):
        RunLengthVector((1.0,), (1, 2))
    with pytest.raises(ParameterError):
        RunLengthVector((1.0,), (-1,))
    with pytest.raises(BudgetExceededError):
        RunLengthVector((1.0,), (3_000_000,)).to_spvec()


@pytest.mark.parametrize(
    "text",
    [
        "lp:1",
        "lp:0.5",
        "lorentz:p=2,q=1,w=const:1",
        "lorentz:p=1,q=inf,w=const:1",
        "sw:w=const:1",
        "garling:p=1,w=pot:0.5",
        "kt(lp:2 ; w=const:1)",
    ],
)
def test_runlength_matches_materialized_norm(text):
    space = parse_space(text)
    rle = RunLengthVector.from_runs([(0.5, 4), (-2.0, 3), (0.25, 6), (1.0, 1)])
    assert runlength_norm(space, rle) == pytest.approx(space.norm(rle.to_spvec()), rel=1e-9)


def test_long_runs_use_asymptotic_sums():
    space = LorentzSpace(2.0, 1.0, WeightSpec.constant(1.0))
    rle = RunLengthVector.from_runs([(1.0, 20_000)])
    assert runlength_norm(space, rle) == pytest.approx(space.norm(rle.to_spvec()), rel=1e-9)


def test_power_sum():
    exact = float(np.sum(np.arange(1, 10_001, dtype=np.float64) ** -0.5))
    assert power_sum(1, 10_000, -0.5) == pytest.approx(exact, rel=1e-10)
    assert power_sum(5, 4, 1.0) == 0.0
    with pytest.raises(ParameterError):
        power_sum(0, 3, 1.0)


def test_exact_unit_mass():
    assert exact_unit_mass([1, 2, 3]) == Fraction(3)


def test_unsupported_spaces():
    rle = RunLengthVector.from_runs([(1.0, 2)])
    with pytest.raises(UnsupportedError):
        runlength_norm(VpSpace(1.0), rle)
    with pytest.raises(UnsupportedError):
        runlength_norm(LorentzSpace(1.0, 2.0, WeightSpec.potential(0.5)), rle)


# --- weight regularity ---


def test_potential_weight_regularity():
    report = weight_report(WeightSpec.potential(0.5), N=4096)
    assert report.doubling
    assert report.urp and report.urp_b <= 11
    assert report.lrp and report.lrp_b <= 5


def test_constant_weight_regularity():
    report = weight_report(WeightSpec.constant(1.0), N=4096)
    assert not report.urp
    assert report.urp_b is None
    assert report.lrp_b == 2
    assert report.regular
    # 1/s_n = 1/n has harmonic Dini averages
    assert not report.reciprocal_regular


def test_report_needs_range():
    with pytest.raises(ParameterError):
        weight_report(WeightSpec.constant(1.0), N=8)


def test_hardy_check_on_prefixes():
    report = hardy_check(WeightSpec.constant(1.0), 2.0, prefix_family(10))
    assert len(report.ratios) == 11
    assert report.ratios[0] == pytest.approx(1.0)
    assert report.max_ratio < math.sqrt(2) + 1e-9
    assert report.strictly_increasing
    assert report.stabilizes


def test_hardy_check_preconditions():
    with pytest.raises(ParameterError):
        hardy_check(WeightSpec.constant(1.0), 1.0, prefix_family(2))
    with pytest.raises(ParameterError):
        hardy_check(WeightSpec.from_values([1.0], tail=2.0), 2.0, prefix_family(2))
