"""
Tests for the three renormings and their isometric-property checks.
"""

import pytest

from greedylab.constants import estimate_constant
from greedylab.errors import CollisionError, ParameterError
from greedylab.foundations.contracts import ConstantKind, RenormKind
from greedylab.foundations.vectors import SpVec
from greedylab.renorm import RenormedSpace, admissible_pairs, renorm_eval, renorm_isometry_check
from greedylab.spaces import LpSpace, VpSpace

SAMPLES = [
    SpVec.parse("3@1,-1@2,2@3"),
    SpVec.parse("1@1,1@2,1@3"),
    SpVec.parse("2@1,0.5@4"),
]


def test_renormed_space_construction():
    r = RenormedSpace(LpSpace(1.0), "almost_a")
    assert r.kind == RenormKind.ALMOST_A
    assert r.label == "almost_a[lp:1]"
    with pytest.raises(ParameterError):
        RenormedSpace(LpSpace(1.0), RenormKind.CHAIN0, budget=-1)
    with pytest.raises(ValueError):
        RenormedSpace(LpSpace(1.0), "bogus")


def test_chain0_is_the_norm_on_l1():
    """On a 1-unconditional basis the largest greedy difference is f itself."""
    r = RenormedSpace(LpSpace(1.0), RenormKind.CHAIN0)
    assert renorm_eval(r, SpVec.parse("3@1,2@2")) == 5.0


def test_chain0_sees_gaps_in_differences_space():
    r = RenormedSpace(VpSpace(1.0), RenormKind.CHAIN0)
    # S_{1,3} of the constant vector has two runs
    assert renorm_eval(r, SpVec.parse("1@1,1@2,1@3")) == 4.0


def test_trunc1_on_l1():
    r = RenormedSpace(LpSpace(1.0), RenormKind.TRUNC1)
    assert renorm_eval(r, SpVec.parse("3@1,1@2")) == 4.0


def test_almost_a_on_l1():
    r = RenormedSpace(LpSpace(1.0), RenormKind.ALMOST_A)
    for f in SAMPLES:
        assert renorm_eval(r, f) == pytest.approx(LpSpace(1.0).norm(f))


def test_almost_a_shrinks_as_the_budget_grows():
    space = VpSpace(0.5)
    for f in SAMPLES:
        values = [
            renorm_eval(RenormedSpace(space, RenormKind.ALMOST_A, budget=b), f) for b in range(4)
        ]
        assert values[0] == pytest.approx(space.norm(f))
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def test_chain0_dominates_the_base_norm(small_family):
    for space in (VpSpace(0.5), LpSpace(0.5)):
        r = RenormedSpace(space, RenormKind.CHAIN0)
        for f in SAMPLES:
            assert renorm_eval(r, f) >= space.norm(f) - 1e-12
    # lattice unconditional: no greedy difference outgrows f
    space = LpSpace(0.5)
    c_qg = estimate_constant(ConstantKind.C_QG, space, small_family).value
    r = RenormedSpace(space, RenormKind.CHAIN0)
    for f in SAMPLES:
        value = renorm_eval(r, f)
        assert value == pytest.approx(space.norm(f))
        assert value <= 2.0 ** (1.0 / 0.5) * c_qg * space.norm(f)


def test_admissible_pairs():
    r = RenormedSpace(LpSpace(1.0), RenormKind.ALMOST_A, budget=2)
    pairs = admissible_pairs(r, SpVec.parse("2@1,1@3"))
    assert pairs.level == 2.0
    assert pairs.fresh_start == 4
    assert pairs.subsets[0] == ()
    assert (1, 3) in pairs.subsets
    assert len(list(pairs.signs(2))) == 4
    with pytest.raises(ParameterError):
        admissible_pairs(r, SpVec.parse("2@1"), level=1.0)
    with pytest.raises(CollisionError):
        admissible_pairs(r, SpVec.parse("1@1,1@3"), fresh_start=2)
    with pytest.raises(CollisionError):
        renorm_eval(r, SpVec.parse("1@1,1@3"), fresh_start=3)


@pytest.mark.parametrize("kind", [RenormKind.CHAIN0, RenormKind.TRUNC1])
def test_chain_renormings_are_isometric(kind):
    r = RenormedSpace(VpSpace(0.5), kind)
    report = renorm_isometry_check(r, SAMPLES)
    assert report.instances > 0
    assert report.passed
    assert report.worst_margin >= -1e-9 * max(report.worst_rhs, 1.0)


def test_almost_a_is_isometric_on_lattice_base():
    r = RenormedSpace(LpSpace(0.5), RenormKind.ALMOST_A)
    report = renorm_isometry_check(r, SAMPLES + [SpVec.zero()])
    assert report.samples == 4
    assert report.instances > 0
    assert report.passed
    assert report.kind == RenormKind.ALMOST_A
    assert report.space == "lp:0.5"


@pytest.mark.parametrize("kind", list(RenormKind))
def test_samples_past_the_caps_are_counted(kind):
    # a 25-way tie has more greedy sets of size one than the level cap allows
    tie = SpVec.indicator(range(1, 26))
    r = RenormedSpace(LpSpace(0.5), kind, budget=1)
    report = renorm_isometry_check(r, [tie])
    assert report.samples == 1
    assert report.instances == 0
    assert report.skipped == 1
    assert "cap" in report.skip_reason
    assert not report.complete
    assert not report.passed


def test_skipped_sample_fails_an_otherwise_clean_report():
    tie = SpVec.indicator(range(1, 26))
    r = RenormedSpace(VpSpace(0.5), RenormKind.CHAIN0)
    report = renorm_isometry_check(r, SAMPLES + [tie])
    assert report.instances > 0
    assert report.violations == 0
    assert report.skipped == 1
    assert not report.passed
