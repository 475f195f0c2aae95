import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentineq.moments import sample_moments, t_values
from momentineq.randomization import apply_reflection, randomization_test, sample_reflections
from momentineq.statistics import (
    FINITE,
    INFINITE,
    ZERO,
    FiniteSet,
    NonNegativeOrthant,
    StatValue,
    check_copositivity_sufficient,
    evaluate,
    evaluate_finite,
    evaluate_t_plus,
    make_spec,
    reflected_t_values,
    reflection_values,
    t_star_transform,
)

from oracles import angular_grid_tplus, direct_ratio, direct_tmax

ROOT8 = 2 * math.sqrt(2)


def random_data(seed, n=None, p=None):
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(4, 30))
    p = p or int(rng.integers(1, 10))
    scale = rng.uniform(0.2, 3.0, p)
    return rng.standard_normal((n, p)) * scale + rng.normal(0, 0.5, p)


seeds = st.integers(0, 2**32 - 1)


# -- finite direction sets -------------------------------------------------------

def test_single_column_example():
    T = evaluate([[1.0], [3.0]], make_spec("tmax", 1))
    assert T.tag == FINITE
    assert T.value == pytest.approx(ROOT8, rel=1e-15)
    assert T.maximizer.tolist() == [1.0]


def test_negative_means_give_zero():
    X = np.array([[-1.0, -3.0], [-1.5, -1.0], [-0.5, -2.0]])  # mu_hat = (-1, -2)
    for name in ("tmax", "tmax-iota", "tplus"):
        T = evaluate(X, make_spec(name, 2))
        assert (T.tag, T.value) == (ZERO, 0.0)


def test_constant_positive_column_is_infinite():
    X = np.column_stack([np.full(5, 2.0), np.arange(5.0) - 1])
    for name in ("tmax", "tmax-iota", "tplus"):
        T = evaluate(X, make_spec(name, 2))
        assert T.tag == INFINITE and T.value == np.inf
        assert T.condition_violated


def test_constant_negative_column_does_not_matter():
    X = np.column_stack([np.full(5, -2.0), [0.5, 1.0, -0.2, 2.0, 0.3]])
    T = evaluate(X, make_spec("tmax", 2))
    assert T.tag == FINITE
    assert T.value == pytest.approx(direct_tmax(X[:, 1:]))


def test_ties_go_to_lowest_index():
    x = np.array([1.0, 2.0, 0.5, 1.5])
    T = evaluate(np.column_stack([x, x, x]), make_spec("tmax", 3))
    assert T.maximizer.tolist() == [1.0, 0.0, 0.0]


@pytest.mark.parametrize("directions, msg", [
    (np.zeros((0, 3)), "empty"),
    ([[1.0, -0.5]], "non-negative"),
    ([[0.0, 0.0]], "nonzero"),
    ([[1.0, np.inf]], "finite"),
])
def test_finite_set_validation(directions, msg):
    with pytest.raises(ValueError, match=msg):
        FiniteSet(directions)


def test_dimension_mismatch():
    m = sample_moments(np.eye(3))
    with pytest.raises(ValueError):
        evaluate_finite(m, FiniteSet.coordinates(2))


def test_make_spec():
    assert make_spec("tmax", 4).directions.shape == (4, 4)
    assert make_spec("tmax-iota", 4).directions.shape == (5, 4)
    assert isinstance(make_spec("tplus", 4), NonNegativeOrthant)
    with pytest.raises(ValueError):
        make_spec("sum", 4)


def test_restrict_drops_vanished_directions():
    U = FiniteSet(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 1.0]]))
    sub = U.restrict([1, 2])
    assert sub.directions.tolist() == [[1.0, 0.0], [1.0, 1.0]]
    assert FiniteSet.coordinates(3).restrict([]) is None


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_coordinate_set_reproduces_tmax(seed):
    X = random_data(seed)
    T = evaluate_finite(sample_moments(X), FiniteSet.coordinates(X.shape[1]))
    assert T.value == pytest.approx(direct_tmax(X), rel=1e-12)
    if T.tag == FINITE:
        assert T.value == pytest.approx(direct_ratio(X, T.maximizer), rel=1e-12)


def test_identical_centered_columns_expanding_the_set_does_not_help():
    rng = np.random.default_rng(11)
    z = rng.standard_normal(20)
    mu = np.array([0.3, -0.4, 0.8, 0.1])
    X = mu + z[:, None]
    m = sample_moments(X)
    tmax = evaluate_finite(m, FiniteSet.coordinates(4))
    U = FiniteSet(np.vstack([np.eye(4), np.ones(4), [1.0, 0.0, 2.0, 0.5]]))
    assert evaluate_finite(m, U).value == tmax.value
    assert tmax.value == pytest.approx(math.sqrt(20) * (0.8 + z.mean()) / z.std(), rel=1e-12)


# -- the orthant statistic -----------------------------------------------------

def test_tplus_single_column_equals_t():
    T = evaluate_t_plus([[1.0], [3.0]])
    assert T.value == pytest.approx(ROOT8, rel=1e-14)


def test_tplus_matches_angular_grid_example():
    # interior maximizer at theta ~ 1.3255; value frozen from the grid oracle
    X = np.array([[0.544, 0.878], [-0.286, -0.709], [-1.692, 1.172],
                  [0.317, 0.406], [-0.484, 1.426], [1.243, 0.078]])
    T = evaluate_t_plus(X)
    assert T.tag == FINITE
    assert T.value == pytest.approx(1.9523807257306287, rel=1e-9)
    lam = T.maximizer / np.linalg.norm(T.maximizer)
    assert math.atan2(lam[1], lam[0]) == pytest.approx(1.3255454437835792, abs=1e-4)


def test_tplus_infinite_when_ones_lie_in_the_cone():
    # n < p with generic data: ones is an exact non-negative combination
    rng = np.random.default_rng(2)
    X = np.abs(rng.standard_normal((5, 40)))
    T = evaluate_t_plus(X)
    assert T.tag == INFINITE


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_tplus_matches_grid_for_two_columns(seed):
    X = random_data(seed, n=6, p=2)
    if np.all(X.mean(axis=0) <= 0):
        assert evaluate_t_plus(X).tag == ZERO
        return
    T = evaluate_t_plus(X)
    assert T.value == pytest.approx(angular_grid_tplus(X), rel=1e-4)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_ordering_tplus_iota_tmax(seed):
    X = random_data(seed)
    p = X.shape[1]
    tp, ti, tm = (evaluate(X, make_spec(s, p)) for s in ("tplus", "tmax-iota", "tmax"))
    assert tp.value >= ti.value * (1 - 1e-12)
    assert ti.value >= tm.value * (1 - 1e-12)


@settings(max_examples=100, deadline=None)
@given(seeds, st.data())
def test_tplus_scale_invariance(seed, data):
    X = random_data(seed)
    D = np.array(data.draw(st.lists(st.floats(1e-2, 1e2), min_size=X.shape[1], max_size=X.shape[1])))
    a, b = evaluate_t_plus(X), evaluate_t_plus(X * D)
    assert a.tag == b.tag
    if a.tag == FINITE:
        assert b.value == pytest.approx(a.value, rel=1e-8)
        assert np.allclose(b.maximizer * D / np.sum(b.maximizer * D), a.maximizer / a.maximizer.sum(), atol=1e-6)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_tplus_maximizer_attains_value(seed):
    X = random_data(seed)
    T = evaluate_t_plus(X)
    if T.tag == FINITE:
        assert np.all(T.maximizer >= 0)
        assert X.mean(axis=0) @ T.maximizer > 0
        assert T.value == pytest.approx(direct_ratio(X, T.maximizer), rel=1e-10)


# -- monotone transform ----------------------------------------------------------

def test_t_star_examples():
    assert t_star_transform(0.0, 9) == 0.0
    assert t_star_transform(np.inf, 4) == 2.0
    assert t_star_transform(math.sqrt(7), 7) == pytest.approx(math.sqrt(3.5), rel=1e-15)


@given(st.floats(0, 1e6), st.floats(0, 1e6), st.integers(1, 10_000))
def test_t_star_is_increasing(a, b, n):
    lo, hi = sorted((a, b))
    assert t_star_transform(lo, n) <= t_star_transform(hi, n) <= math.sqrt(n)


def test_t_star_vectorized():
    out = t_star_transform(np.array([0.0, 1.0, np.inf]), 4)
    assert out.tolist() == [0.0, pytest.approx(1 / math.sqrt(1.25)), 2.0]


# -- batched reflections agree with direct evaluation ---------------------------

@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from(["tmax", "tmax-iota", "tplus"]), st.booleans())
def test_reflection_values_match_direct_evaluation(seed, name, masked):
    rng = np.random.default_rng(seed)
    X = random_data(seed)
    n, p = X.shape
    spec = make_spec(name, p)
    signs = np.vstack([np.ones(n), rng.choice([-1.0, 1.0], size=(7, n))])
    mask = rng.random((8, p)) < 0.6 if masked else None
    got = reflection_values(X, spec, signs, mask=mask)
    for k, s in enumerate(signs):
        Y = apply_reflection(X, s)
        if masked:
            cols = np.flatnonzero(mask[k])
            sub = spec.restrict(cols)
            want = 0.0 if sub is None else evaluate(Y[:, cols], sub).value
        else:
            want = evaluate(Y, spec).value
        assert got[k] == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_reflected_t_values_match_direct():
    X = random_data(5)
    signs = np.array([[1.0] * X.shape[0], [(-1.0) ** i for i in range(X.shape[0])]])
    t = reflected_t_values(X, signs)
    for k, s in enumerate(signs):
        assert np.allclose(t[k], t_values(sample_moments(apply_reflection(X, s))), rtol=1e-10)


def test_iota_cannot_raise_rejections_when_its_mean_is_negative():
    # with iota'mu_hat <= 0 the observed t_max^iota equals t_max, while every
    # reflected t_max^iota is at least t_max, so its p-value is never smaller
    rng = np.random.default_rng(12)
    mu = np.r_[np.full(5, 0.4), np.full(45, -3.0)]
    for rep in range(5):
        X = rng.standard_t(4, size=(30, 50)) / math.sqrt(2) + mu
        assert X.mean(axis=0).sum() < 0
        plan = sample_reflections(30, 200, seed=rep)
        a = randomization_test(X, make_spec("tmax", 50), plan)
        b = randomization_test(X, make_spec("tmax-iota", 50), plan)
        assert b.statistic.value == a.statistic.value
        assert np.all(b.values >= a.values)
        assert b.p_value >= a.p_value


# -- diagnostics -----------------------------------------------------------------

def test_copositivity_positive():
    rng = np.random.default_rng(0)
    z = rng.standard_normal(50)
    X = z[:, None] + 0.1 * rng.standard_normal((50, 4))
    assert check_copositivity_sufficient(sample_moments(X)).status == "positive"


def test_copositivity_submatrix():
    rng = np.random.default_rng(0)
    z = rng.standard_normal(50)
    X = z[:, None] + 0.1 * rng.standard_normal((50, 4))
    X[:, 2] = -z + 0.1 * rng.standard_normal(50)
    out = check_copositivity_sufficient(sample_moments(X))
    assert out.status == "submatrix-positive"
    assert out.removed == (2,)


def test_copositivity_unknown():
    X = np.array([[1.0, -1.0], [-1.0, 1.0], [2.0, -2.0]])
    assert check_copositivity_sufficient(sample_moments(X)).status == "unknown"


def test_statvalue_dict():
    assert StatValue.infinite().to_dict()["value"] == "inf"
    assert StatValue.zero().to_dict()["condition_violated"] is False
