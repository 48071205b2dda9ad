"""Polynomial arithmetic, parsing, restriction, and univariate root isolation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convtraj.errors import BadInputError, IdenticallyZeroError
from convtraj.poly import (
    Polynomial,
    UnivariatePolynomial,
    parse_polynomial,
    polynomial_to_text,
    real_roots_in_interval,
)

SQRT2 = float(np.sqrt(2.0))


def small_polys(dimension):
    """Polynomials with a few integer-ish terms, exact in float arithmetic."""
    exps = st.tuples(*[st.integers(0, 3)] * dimension)
    coef = st.integers(-8, 8).map(lambda k: k / 2.0)
    return st.dictionaries(exps, coef, min_size=0, max_size=4).map(
        lambda d: Polynomial(dimension, d)
    )


# -- construction and text ----------------------------------------------------


def test_parse_text_round_trip():
    for text in ("x1^2 - 2*x2 + 3", "288*x1^2*x2 - 0.5", "-x1", "0", "x1*x2^3"):
        p = parse_polynomial(text, dimension=2)
        q = parse_polynomial(polynomial_to_text(p), dimension=2)
        assert q.allclose(p, tol=0.0)


def test_parse_rejects_out_of_range_variables():
    with pytest.raises(BadInputError):
        parse_polynomial("x5", dimension=2)
    with pytest.raises(BadInputError):
        parse_polynomial("x0", dimension=2)


def test_zero_polynomial_text_and_flags():
    z = Polynomial.zero(2)
    assert polynomial_to_text(z) == "0"
    assert z.is_zero
    assert z.total_degree() == 0
    assert z.max_abs_coeff() == 0.0


def test_basic_accessors():
    p = parse_polynomial("3*x1^2*x2 - x2 + 4", dimension=2)
    assert p.total_degree() == 3
    assert p.max_abs_coeff() == 4.0
    assert p.evaluate([1.0, 2.0]) == 3 * 2 - 2 + 4


@given(small_polys(2), small_polys(2))
@settings(max_examples=40, deadline=None)
def test_ring_operations_match_pointwise(p, q):
    rng = np.random.default_rng(0)
    X = rng.uniform(-1.5, 1.5, size=(5, 2))
    for x in X:
        assert np.isclose((p + q).evaluate(x), p.evaluate(x) + q.evaluate(x), atol=1e-9)
        assert np.isclose((p - q).evaluate(x), p.evaluate(x) - q.evaluate(x), atol=1e-9)
        assert np.isclose((p * q).evaluate(x), p.evaluate(x) * q.evaluate(x), atol=1e-8)


@given(small_polys(3))
@settings(max_examples=30, deadline=None)
def test_eval_many_matches_evaluate(p):
    rng = np.random.default_rng(1)
    X = rng.uniform(-2.0, 2.0, size=(7, 3))
    vals = p.eval_many(X)
    assert vals.shape == (7,)
    for x, v in zip(X, vals):
        assert np.isclose(v, p.evaluate(x), atol=1e-9)


def test_partial_derivatives_exact():
    p = parse_polynomial("x1^3 + 2*x1*x2^2 - x2", dimension=2)
    gx, gy = p.gradient()
    assert gx.allclose(parse_polynomial("3*x1^2 + 2*x2^2", dimension=2))
    assert gy.allclose(parse_polynomial("4*x1*x2 - 1", dimension=2))


@given(small_polys(2))
@settings(max_examples=30, deadline=None)
def test_compose_affine_is_pointwise_substitution(p):
    rng = np.random.default_rng(2)
    A = rng.uniform(-1.0, 1.0, size=(2, 3))
    b = rng.uniform(-1.0, 1.0, size=2)
    pc = p.compose_affine(A, b)
    assert pc.dimension == 3
    for u in rng.uniform(-1.0, 1.0, size=(5, 3)):
        assert np.isclose(pc.evaluate(u), p.evaluate(A @ u + b), atol=1e-8)


def test_restrict_to_simplex_barycentric_convention():
    p = parse_polynomial("x1 + 2*x2", dimension=2)
    # edge: one parameter, q(0) = p(v0), q(1) = p(v1)
    q = p.restrict_to_simplex([(0.0, 0.0), (1.0, 1.0)])
    assert q.dimension == 1
    assert np.isclose(q.evaluate([0.0]), 0.0)
    assert np.isclose(q.evaluate([1.0]), 3.0)
    # triangle: unit weight on vertex i+1 recovers p(v_{i+1})
    tri = p.restrict_to_simplex([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
    assert tri.dimension == 2
    assert np.isclose(tri.evaluate([0.0, 0.0]), 0.0)
    assert np.isclose(tri.evaluate([1.0, 0.0]), 1.0)
    assert np.isclose(tri.evaluate([0.0, 1.0]), 2.0)
    # interior point agrees with the affine substitution
    lam = np.array([0.3, 0.25])
    x = (1 - lam.sum()) * np.array([0.0, 0.0]) + lam[0] * np.array([1.0, 0.0])
    x = x + lam[1] * np.array([0.0, 1.0])
    assert np.isclose(tri.evaluate(lam), p.evaluate(x))


def test_to_univariate():
    uv = parse_polynomial("3 - x1 + 2*x1^3", dimension=1).to_univariate()
    assert np.isclose(uv(2.0), 17.0)


# -- univariate polynomials and roots -----------------------------------------


def test_univariate_ascending_coefficients_and_derivative():
    q = UnivariatePolynomial([1.0, 2.0, 3.0])  # 1 + 2x + 3x^2
    assert q(0.0) == 1.0
    assert q(1.0) == 6.0
    assert q(2.0) == 17.0
    dq = q.derivative()
    assert np.isclose(dq(0.0), 2.0)
    assert np.isclose(dq(1.0), 8.0)
    xs = np.array([0.0, 1.0, 2.0])
    assert np.allclose(q.eval_many(xs), [1.0, 6.0, 17.0])


def test_roots_simple_sign_change():
    q = UnivariatePolynomial([-2.0, 0.0, 1.0])  # x^2 - 2
    roots = real_roots_in_interval(q, 0.0, 2.0)
    assert len(roots) == 1
    assert abs(roots[0].x - SQRT2) <= 1e-9
    assert roots[0].sign_change


def test_roots_three_distinct():
    import numpy.polynomial.polynomial as npoly

    q = UnivariatePolynomial(list(npoly.polyfromroots([0.25, 0.5, 0.75])))
    roots = real_roots_in_interval(q, 0.0, 1.0)
    assert [round(r.x, 9) for r in roots] == [0.25, 0.5, 0.75]
    assert all(r.sign_change for r in roots)


def test_roots_touch_point_flagged():
    # (x - 0.5)^2 + 1e-13: grazes zero without crossing
    q = UnivariatePolynomial([0.25 + 1e-13, -1.0, 1.0])
    roots = real_roots_in_interval(q, 0.0, 1.0)
    assert len(roots) == 1
    assert abs(roots[0].x - 0.5) <= 1e-6
    assert not roots[0].sign_change


def test_roots_open_interval_excludes_endpoints():
    q = UnivariatePolynomial([0.0, 1.0, -1.0])  # x(1 - x)
    assert real_roots_in_interval(q, 0.0, 1.0) == []


def test_roots_zero_polynomial_raises():
    with pytest.raises(IdenticallyZeroError):
        real_roots_in_interval(UnivariatePolynomial([0.0]), 0.0, 1.0)
