"""
Tests for search families, constant estimates and democracy functions.
"""

import math

import pytest

from greedylab.basis import as_model
from greedylab.constants import (
    NormCache,
    TestFamily,
    democracy_functions,
    dual_fundamental,
    embedding_sandwich_check,
    estimate_all,
    estimate_constant,
)
from greedylab.errors import ParameterError, UnsupportedError
from greedylab.foundations.contracts import ConstantKind
from greedylab.foundations.vectors import SpVec
from greedylab.spaces import C0Space, LpSpace, VpSpace


# --- search families ---


def test_family_index_sets():
    family = TestFamily(dimension=3)
    sets = family.index_sets(3)
    assert len(sets) == 7
    assert (1, 2, 3) in sets


def test_family_sign_patterns():
    family = TestFamily(exhaustive_signs=2, n_random=4)
    assert len(family.sign_patterns([1, 2])) == 4
    larger = family.sign_patterns([1, 2, 3, 4])
    assert len(larger) == len(set(larger))
    assert larger[0].items() == [(1, 1), (2, 1), (3, 1), (4, 1)]


def test_family_is_deterministic():
    first = TestFamily(n_random=4).vectors(6)
    assert first == TestFamily(n_random=4).vectors(6)
    assert first != TestFamily(n_random=4, seed=1).vectors(6)
    assert first[0] == SpVec.indicator(range(1, 7))


def test_family_validation():
    with pytest.raises(ParameterError):
        TestFamily(dimension=0)
    with pytest.raises(ParameterError):
        TestFamily(levels=(0.5, 1.0))


def test_norm_cache_counts_distinct_vectors():
    cache = NormCache(as_model(LpSpace(1.0)))
    assert cache(SpVec.parse("1@1,2@2")) == 3.0
    assert cache(SpVec.parse("1@1,2@2")) == 3.0
    assert len(cache) == 1


# --- constant estimates ---


def test_every_constant_of_l1_is_one(small_family):
    """The unit vector basis of l_1 is greedy, democratic and bidemocratic with constant 1."""
    table = estimate_all(LpSpace(1.0), small_family)
    assert not table.unsupported
    assert set(table.estimates) == set(ConstantKind)
    for kind, estimate in table.estimates.items():
        assert estimate.value == pytest.approx(1.0, rel=1e-12), kind


def test_differences_space_is_not_quasi_greedy(small_family):
    estimate = estimate_constant(ConstantKind.C_QG, VpSpace(1.0), small_family)
    # 1_{1,3,5} against 1_{1..5}
    assert estimate.value >= 3.0 - 1e-12
    assert estimate.witness.recheck(VpSpace(1.0)) == pytest.approx(estimate.value)


def test_differences_space_super_democracy(small_family):
    estimate = estimate_constant(ConstantKind.DELTA_S, VpSpace(1.0), small_family)
    # alternating signs on five indices against a constant block of five
    assert estimate.value >= 5.0 - 1e-12


def test_witnesses_recheck(small_family):
    space = LpSpace(0.5)
    table = estimate_all(space, small_family, kinds=[ConstantKind.K_SU, ConstantKind.DELTA])
    for estimate in table.estimates.values():
        assert estimate.witness.recheck(space) == pytest.approx(estimate.value)
        assert estimate.witness.describe().startswith("num=")
    assert ConstantKind.DELTA in table
    # ||1_A|| = |A|^2 in l_{1/2}
    assert table.value(ConstantKind.DELTA) == pytest.approx(1.0)


def test_results_do_not_depend_on_workers(small_family):
    kinds = [ConstantKind.K_SU, ConstantKind.C_QG, ConstantKind.DELTA]
    serial = estimate_all(VpSpace(1.0), small_family, kinds=kinds, workers=1)
    parallel = estimate_all(VpSpace(1.0), small_family, kinds=kinds, workers=3)
    for kind in kinds:
        assert serial.value(kind) == parallel.value(kind)


def test_bidemocracy_needs_a_dual_fundamental_function(small_family):
    table = estimate_all(VpSpace(1.0), small_family, kinds=[ConstantKind.DELTA_B])
    assert ConstantKind.DELTA_B in table.unsupported
    with pytest.raises(UnsupportedError):
        estimate_constant(ConstantKind.DELTA_SB, VpSpace(1.0), small_family)


def test_dual_fundamental():
    assert dual_fundamental(LpSpace(2.0), 4) == pytest.approx(2.0)
    assert dual_fundamental(LpSpace(0.5), 4) == 1.0
    assert dual_fundamental(LpSpace(1.0), 4) == 1.0
    assert dual_fundamental(C0Space(), 4) == 4.0
    with pytest.raises(UnsupportedError):
        dual_fundamental(VpSpace(1.0), 2)


# --- democracy functions ---


def test_democracy_functions_on_symmetric_space():
    phi = democracy_functions(LpSpace(1.0), 4)
    assert phi.exact
    assert phi.m == [1, 2, 3, 4]
    assert phi.upper == phi.lower == phi.upper_signed == [1.0, 2.0, 3.0, 4.0]
    assert phi.witnesses["upper"][2] == SpVec.indicator([1, 2, 3])
    with pytest.raises(ParameterError):
        democracy_functions(LpSpace(1.0), 0)


def test_democracy_functions_on_differences_space(small_family):
    phi = democracy_functions(VpSpace(1.0), 4, small_family)
    assert not phi.exact
    # ||1_A|| counts two jumps per run of A
    assert phi.upper == [2.0, 4.0, 4.0, 4.0]
    assert phi.lower == [2.0, 2.0, 2.0, 2.0]
    assert phi.upper_signed == [2.0, 4.0, 6.0, 8.0]
    assert phi.lower_signed == [2.0, 2.0, 2.0, 2.0]
    assert phi.sequence("upper_signed") == phi.upper_signed


def test_sandwich_on_l1(small_family):
    samples = small_family.vectors(5)
    report = embedding_sandwich_check(LpSpace(1.0), samples, lambda_u=1.0)
    assert report.samples == len(samples)
    assert report.upper_constant == pytest.approx(4.0)
    assert report.exact_democracy
    assert report.holds
    # the weak norm of 1_{[1..5]} equals its l_1 norm
    assert report.lower_margin == pytest.approx(0.0, abs=1e-9 * 5 + 1e-12)


def test_sandwich_constant_grows_for_small_p():
    report = embedding_sandwich_check(LpSpace(0.5), [SpVec.indicator([1, 2])], lambda_u=1.0)
    assert report.upper_constant == pytest.approx(4.0 * (math.sqrt(2) + 1) ** 4)
    assert report.holds


def test_greedy_constant_flags_searched_sigma():
    family = TestFamily(dimension=3, exhaustive_subsets=3, exhaustive_signs=3, n_random=2)
    lattice = estimate_constant(ConstantKind.C_G, LpSpace(1.0), family)
    assert lattice.sigma_exact
    assert "sigma searched" not in lattice.witness.note
    estimate = estimate_constant(ConstantKind.C_G, VpSpace(1.0), family)
    assert estimate.value >= 1.0 - 1e-12
    assert estimate.sigma_exact == ("sigma searched" not in estimate.witness.note)
