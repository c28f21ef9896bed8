"""
Tests for basis models, the thresholding greedy algorithm and best m-term errors.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from greedylab.basis import (
    LatticeModel,
    MatrixModel,
    SigmaConfig,
    all_greedy_sets,
    as_model,
    coefficients_of,
    enumerate_greedy_sets,
    greedy_order,
    greedy_projection,
    greedy_set,
    greedy_trace,
    is_greedy_set,
    magnitude_levels,
    nested_greedy_pairs,
    residual,
    sigma,
    sigma_tilde,
    strictly_greedy_sets,
    truncation_T,
    truncation_U,
)
from greedylab.errors import BudgetExceededError, NotGreedySetError, ParameterError
from greedylab.foundations.contracts import SearchMode
from greedylab.foundations.vectors import SpVec
from greedylab.spaces import LpSpace, VpSpace


@st.composite
def level_vectors(draw):
    """Vectors on 1..8 whose moduli repeat, so that ties are common."""
    size = draw(st.integers(1, 8))
    moduli = draw(st.lists(st.sampled_from([1.0, 2.0, 3.0]), min_size=size, max_size=size))
    signs = draw(st.lists(st.sampled_from([1.0, -1.0]), min_size=size, max_size=size))
    return SpVec.from_dense([m * s for m, s in zip(moduli, signs)])


# --- greedy ordering and greedy sets ---


def test_greedy_order_breaks_ties_by_index():
    f = SpVec.parse("1@3,2@1,-2@2,1@5")
    assert greedy_order(LpSpace(1.0), f) == [1, 2, 3, 5]
    assert greedy_order(LpSpace(1.0), SpVec.zero()) == []


def test_greedy_projection_and_residual():
    f = SpVec.parse("1@1,-3@2,2@4")
    assert greedy_set(f, 2) == frozenset({2, 4})
    assert greedy_projection(LpSpace(1.0), f, 2) == SpVec.parse("-3@2,2@4")
    assert residual(LpSpace(1.0), f, 2) == SpVec.parse("1@1")
    with pytest.raises(ParameterError):
        greedy_set(f, 4)


def test_greedy_trace():
    trace = greedy_trace(LpSpace(1.0), SpVec.parse("3@1,2@2,1@3"))
    assert trace.ordering == [1, 2, 3]
    assert trace.greedy_sets == [frozenset({1}), frozenset({1, 2}), frozenset({1, 2, 3})]
    assert trace.residual_norms == [6.0, 3.0, 1.0, 0.0]


def test_is_greedy_set():
    f = SpVec.parse("2@1,2@2,1@3")
    assert is_greedy_set(f, {1})
    assert not is_greedy_set(f, {1}, strict=True)
    assert is_greedy_set(f, {1, 2}, strict=True)
    assert not is_greedy_set(f, {3})
    assert not is_greedy_set(f, {4})
    assert is_greedy_set(f, set())


def test_enumerate_greedy_sets_splits_boundary_level():
    f = SpVec.parse("2@1,2@2,1@3")
    assert enumerate_greedy_sets(f, 1) == [frozenset({1}), frozenset({2})]
    assert enumerate_greedy_sets(f, 2) == [frozenset({1, 2})]
    assert enumerate_greedy_sets(f, 0) == [frozenset()]
    assert len(list(all_greedy_sets(f))) == 5
    assert magnitude_levels(f) == [(2.0, (1, 2)), (1.0, (3,))]
    assert strictly_greedy_sets(f) == [frozenset(), frozenset({1, 2}), frozenset({1, 2, 3})]


def test_enumerate_greedy_sets_cap():
    with pytest.raises(BudgetExceededError):
        enumerate_greedy_sets(SpVec.indicator(range(1, 22)), 1)


def test_nested_greedy_pairs():
    f = SpVec.parse("2@1,2@2,1@3")
    pairs = list(nested_greedy_pairs(f))
    assert len(pairs) == 14
    assert all(inner <= outer for inner, outer in pairs)
    with pytest.raises(BudgetExceededError):
        list(nested_greedy_pairs(f, cap=3))


@given(level_vectors(), st.integers(0, 8))
@settings(max_examples=60)
def test_enumerated_sets_are_greedy(f, m):
    """Every enumerated set has the right size and passes the magnitude test."""
    m = min(m, len(f))
    sets = enumerate_greedy_sets(f, m)
    assert greedy_set(f, m) in sets
    for chosen in sets:
        assert len(chosen) == m
        assert is_greedy_set(f, chosen)


def test_truncations():
    f = SpVec.parse("3@1,-2@2,1@3")
    assert truncation_U(LpSpace(1.0), f, {1, 2}) == SpVec.parse("2@1,-2@2")
    assert truncation_T(LpSpace(1.0), f, {1, 2}) == SpVec.parse("2@1,-2@2,1@3")
    assert truncation_U(LpSpace(1.0), f, set()) == SpVec.zero()
    with pytest.raises(NotGreedySetError):
        truncation_U(LpSpace(1.0), f, {3})


# --- basis models ---


def test_lattice_model_of_a_space():
    model = as_model(LpSpace(0.5))
    assert isinstance(model, LatticeModel)
    assert model.label == "lp:0.5"
    assert model.lattice_unconditional and model.symmetric
    assert model.dimension is None
    assert model.norm(SpVec.indicator([1, 2])) == pytest.approx(4.0)
    with pytest.raises(ParameterError):
        as_model("lp:1")


def test_block_transform():
    model = LatticeModel(LpSpace(2.0), block=[[1.0, 1.0], [1.0, -1.0]], name="haar")
    assert model.label == "haar[lp:2]"
    assert not model.lattice_unconditional
    assert model.synthesize(SpVec.unit(1)) == SpVec.parse("1@1,1@2")
    assert model.coordinates(SpVec.parse("1@1,1@2")).allclose(SpVec.unit(1))
    assert model.norm(SpVec.unit(3)) == pytest.approx(math.sqrt(2))


def test_signed_identity_block_keeps_flags():
    model = LatticeModel(LpSpace(1.0), block=np.diag([1.0, -1.0]))
    assert model.lattice_unconditional
    assert model.symmetric


def test_invalid_blocks():
    with pytest.raises(ParameterError):
        LatticeModel(LpSpace(1.0), block=np.ones((2, 3)))
    with pytest.raises(ParameterError):
        LatticeModel(LpSpace(1.0), block=np.ones((2, 2)))


def test_matrix_model():
    model = MatrixModel(np.array([[1.0, 1.0], [0.0, 1.0]]), name="tri")
    assert model.label == "tri(d=2)"
    assert model.dimension == 2
    assert model.norm(SpVec.parse("1@1,1@2")) == pytest.approx(math.sqrt(5))
    np.testing.assert_allclose(model.dual_norms(), [math.sqrt(2), 1.0])
    assert model.projection_norm({1}) == pytest.approx(math.sqrt(2), rel=1e-6)
    assert model.projection_norm({1, 2}) == pytest.approx(1.0, rel=1e-6)
    with pytest.raises(ParameterError):
        model.norm(SpVec.unit(3))
    with pytest.raises(ParameterError):
        MatrixModel(np.ones((2, 3)))


def test_coefficients_of_ambient_array():
    model = MatrixModel(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert coefficients_of(model, np.array([3.0, 1.0])) == SpVec.parse("2@1,1@2")
    assert greedy_order(model, np.array([3.0, 1.0])) == [1, 2]
    assert coefficients_of(LpSpace(1.0), np.array([0.0, 2.0])) == SpVec.parse("2@2")


# --- best m-term errors ---


def test_sigma_on_lattice_model():
    f = SpVec.parse("3@1,2@2,1@3")
    best = sigma_tilde(LpSpace(1.0), f, 1)
    assert best.value == 3.0
    assert best.is_exact
    assert best.witness == frozenset({1})
    assert best.approximant == SpVec.parse("3@1")
    assert sigma(LpSpace(1.0), f, 1).value == 3.0
    assert sigma(LpSpace(1.0), f, 3).value == 0.0


def test_sigma_heuristic_is_an_upper_bound():
    f = SpVec.parse("3@1,2@2,1@3,0.5@4")
    exact = sigma_tilde(LpSpace(1.0), f, 2)
    heuristic = sigma_tilde(LpSpace(1.0), f, 2, mode=SearchMode.HEURISTIC)
    assert not heuristic.is_exact
    assert heuristic.value >= exact.value - 1e-12
    assert heuristic.value == pytest.approx(1.5)


def test_sigma_exact_budget():
    with pytest.raises(BudgetExceededError):
        sigma_tilde(
            LpSpace(1.0), SpVec.parse("3@1,2@2,1@3"), 1, config=SigmaConfig(binomial_cap=2)
        )
    with pytest.raises(ParameterError):
        sigma(LpSpace(1.0), SpVec.unit(1), -1)


def test_sigma_beats_projections_on_differences_space():
    """Subtracting a non-coefficient multiple can beat every projection."""
    f = SpVec.parse("1@1,2@2,1@3")
    space = VpSpace(1.0)
    assert space.norm(f) == 4.0
    assert sigma_tilde(space, f, 1).value == pytest.approx(4.0)
    best = sigma(space, f, 1)
    assert best.value == pytest.approx(2.0, abs=1e-7)
    assert best.witness == frozenset({2})
    assert best.approximant.allclose(SpVec.parse("1@2"), tol=1e-6)


@given(level_vectors(), st.integers(0, 8))
@settings(max_examples=25, deadline=None)
def test_sigma_is_below_projections_and_nonincreasing(f, m):
    m = min(m, len(f))
    space = VpSpace(0.5)
    tilde = sigma_tilde(space, f, m).value
    best = sigma(space, f, m, config=SigmaConfig(refine_top=1, sweeps=2, grid_support=0))
    assert best.value <= tilde + 1e-9 * max(tilde, 1.0)
    if m < len(f):
        assert sigma_tilde(space, f, m + 1).value <= tilde + 1e-12


def test_sigma_on_symmetric_lattice_is_the_greedy_residual():
    f = SpVec.parse("3@1,2@2,1@3")
    assert sigma(LpSpace(2.0), f, 1).value == pytest.approx(math.sqrt(5.0))
    g = SpVec.parse("0.5@1,-4@2,2@3,-1@4,3@5")
    space = LpSpace(0.5)
    for m in range(len(g) + 1):
        greedy_residual = space.norm(g.without(greedy_set(g, m)))
        assert sigma(space, g, m).value == pytest.approx(greedy_residual)
    values = [sigma(space, g, m).value for m in range(len(g) + 1)]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_truncation_T_composes_along_strictly_greedy_sets():
    f = SpVec.parse("3@1,-2@2,2@3,1@4,-0.5@5")
    space = LpSpace(1.0)
    prefixes = strictly_greedy_sets(f)
    for i, inner in enumerate(prefixes):
        once = truncation_T(space, f, inner)
        for outer in prefixes[i:]:
            assert truncation_T(space, once, outer).allclose(truncation_T(space, f, outer))
