import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from momentineq.moments import check_data, quadratic_form, sample_moments, t_values


def data_matrices(min_n=2, max_n=12, max_p=6):
    shape = st.tuples(st.integers(min_n, max_n), st.integers(1, max_p))
    elems = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
    return shape.flatmap(lambda s: arrays(np.float64, s, elements=elems))


def test_two_point_example():
    m = sample_moments([[1.0], [3.0]])
    assert m.mu_hat.tolist() == [2.0]
    assert m.sigma_hat.tolist() == [[1.0]]
    assert t_values(m)[0] == pytest.approx(2 * math.sqrt(2), rel=1e-15)


def test_constant_column_has_zero_variance():
    m = sample_moments(np.full((5, 1), 3.7))
    assert m.mu_hat[0] == pytest.approx(3.7)
    assert m.sigma_hat[0, 0] == pytest.approx(0.0, abs=1e-24)


def test_duplicated_column_gives_constant_covariance():
    x = np.array([0.3, -1.2, 2.5, 0.1])
    S = sample_moments(np.column_stack([x, x])).sigma_hat
    assert np.all(S == S[0, 0])


def test_divisor_is_n():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((7, 3))
    assert np.allclose(sample_moments(X).sigma_hat, np.cov(X, rowvar=False, bias=True), atol=1e-14)


@pytest.mark.parametrize("col, expected", [(5.0, np.inf), (-5.0, -np.inf), (0.0, 0.0)])
def test_degenerate_t_values_follow_sign_of_mean(col, expected):
    X = np.column_stack([np.full(4, col), [1.0, 2.0, 0.0, 1.0]])
    t = t_values(sample_moments(X))
    assert t[0] == expected
    assert np.isfinite(t[1])


def test_zero_means_give_zero_t():
    X = np.array([[1.0, -2.0], [-1.0, 2.0]])
    assert t_values(sample_moments(X)).tolist() == [0.0, 0.0]


def test_quadratic_form_examples():
    rng = np.random.default_rng(1)
    m = sample_moments(rng.standard_normal((10, 3)))
    assert quadratic_form(m, np.eye(3)[1]) == pytest.approx(m.sigma_diag[1])
    assert quadratic_form(m, np.zeros(3)) == 0.0
    I2 = sample_moments(np.array([[1.0, 1.0], [-1.0, 1.0], [1.0, -1.0], [-1.0, -1.0]]))
    assert np.allclose(I2.sigma_hat, np.eye(2))
    assert quadratic_form(I2, [1.0, 1.0]) == pytest.approx(2.0)


@pytest.mark.parametrize("bad", [
    [[1.0, 2.0]],                      # one row
    np.zeros((3, 0)),                  # no columns
    [[1.0], [np.nan]],                 # non-finite
    [[1.0], [np.inf]],
    np.zeros((2, 2, 2)),               # not a matrix
])
def test_check_data_rejects(bad):
    with pytest.raises(ValueError):
        check_data(bad)


def test_vector_input_is_one_column():
    assert check_data([1.0, 2.0, 3.0]).shape == (3, 1)


def test_moments_are_read_only():
    m = sample_moments(np.eye(3))
    with pytest.raises(ValueError):
        m.mu_hat[0] = 1.0


@settings(max_examples=150, deadline=None)
@given(data_matrices(), st.data())
def test_covariance_is_symmetric_psd(X, data):
    m = sample_moments(X)
    assert np.array_equal(m.sigma_hat, m.sigma_hat.T)
    assert np.array_equal(m.sigma_diag, np.diag(m.sigma_hat))
    v = data.draw(arrays(np.float64, m.p, elements=st.floats(-10, 10)))
    scale = max(1.0, float(np.max(np.abs(X))) ** 2)
    assert v @ m.sigma_hat @ v >= -1e-10 * (v @ v) * scale
    assert quadratic_form(m, np.abs(v)) >= -1e-10 * (v @ v) * scale


@settings(max_examples=100, deadline=None)
@given(data_matrices(), st.floats(1e-3, 1e3), st.data())
def test_t_values_invariant_to_column_scaling(X, c, data):
    j = data.draw(st.integers(0, X.shape[1] - 1))
    t0 = t_values(sample_moments(X))[j]
    Y = X.copy()
    Y[:, j] *= c
    t1 = t_values(sample_moments(Y))[j]
    if np.isfinite(t0) and abs(t0) > 1e-6:
        assert t1 == pytest.approx(t0, rel=1e-6)
    else:
        assert np.sign(t1) == np.sign(t0) or abs(t1) < 1e-6


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.integers(1, 5), elements=st.floats(-1e3, 1e3)), st.integers(2, 9))
def test_identical_rows_have_zero_covariance(row, n):
    X = np.tile(row, (n, 1))
    m = sample_moments(X)
    assert np.allclose(m.sigma_hat, 0.0, atol=1e-20 + 1e-24 * float(row @ row))
