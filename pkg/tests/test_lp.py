"""Revised simplex: known optima, duality, warm restarts, failure modes."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convtraj.errors import InfeasibleError, UnboundedError
from convtraj.lp import lp_solve, resolve_rhs, solve_standard


def test_known_standard_form_optimum():
    # min -x1 - x2 s.t. x1 + 2 x2 <= 4, 3 x1 + x2 <= 6 (slacks appended)
    A = np.array([[1.0, 2.0, 1.0, 0.0], [3.0, 1.0, 0.0, 1.0]])
    b = np.array([4.0, 6.0])
    c = np.array([-1.0, -1.0, 0.0, 0.0])
    sol = solve_standard(A, b, c)
    assert np.allclose(sol.x, [1.6, 1.2, 0.0, 0.0])
    assert np.isclose(sol.value, -2.8)
    assert np.allclose(sol.duals, [-0.4, -0.2])
    # strong duality at the reported solution
    assert np.isclose(sol.value, sol.duals @ b)


def test_resolve_rhs_matches_cold_solve():
    A = np.array([[1.0, 2.0, 1.0, 0.0], [3.0, 1.0, 0.0, 1.0]])
    c = np.array([-1.0, -1.0, 0.0, 0.0])
    base = solve_standard(A, np.array([4.0, 6.0]), c)
    for b_new in ([2.0, 6.0], [5.0, 1.0], [0.5, 0.5]):
        warm = resolve_rhs(A, np.array(b_new), c, base.basis)
        cold = solve_standard(A, np.array(b_new), c)
        assert np.isclose(warm.value, cold.value, atol=1e-9)
        assert np.allclose(A @ warm.x, b_new, atol=1e-9)
        assert warm.x.min() >= -1e-9


def test_free_variable_wrapper():
    # min x1 + x2 s.t. x >= (1, 2)
    x, value, u = lp_solve(np.ones(2), np.eye(2), np.array([1.0, 2.0]))
    assert np.allclose(x, [1.0, 2.0])
    assert np.isclose(value, 3.0)
    assert np.allclose(u, [1.0, 1.0])
    # multipliers certify optimality: B^T u = c, u >= 0, complementary slack
    B, a, c = np.eye(2), np.array([1.0, 2.0]), np.ones(2)
    assert np.allclose(B.T @ u, c, atol=1e-9)
    assert u.min() >= -1e-9
    assert np.allclose(u * (B @ x - a), 0.0, atol=1e-9)


def test_infeasible_raises():
    with pytest.raises(InfeasibleError):
        solve_standard(np.array([[1.0, 0.0], [1.0, 0.0]]), np.array([1.0, 2.0]), np.zeros(2))


def test_unbounded_raises():
    with pytest.raises(UnboundedError):
        solve_standard(np.array([[0.0, 1.0]]), np.array([0.0]), np.array([-1.0, 0.0]))


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_random_feasible_lp_invariants(seed):
    """Constructed-feasible instances with c >= 0 (so the LP is bounded)."""
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 5))
    n = int(rng.integers(m + 1, 9))
    A = rng.integers(-4, 5, size=(m, n)) / 2.0
    A[np.all(A == 0.0, axis=1), 0] = 1.0  # keep every row nonzero
    x0 = rng.uniform(0.0, 2.0, size=n)
    b = A @ x0
    c = rng.uniform(0.0, 2.0, size=n)
    sol = solve_standard(A, b, c)
    scale = 1.0 + np.abs(b).sum()
    assert np.allclose(A @ sol.x, b, atol=1e-7 * scale)
    assert sol.x.min() >= -1e-9
    assert sol.value <= c @ x0 + 1e-7 * (1.0 + abs(sol.value))
    # dual feasibility and strong duality
    rc = c - A.T @ sol.duals
    assert rc.min() >= -1e-6
    assert np.isclose(sol.value, sol.duals @ b, atol=1e-6 * (1.0 + abs(sol.value)))
