"""Dense revised simplex for the small LPs behind the hull search.

All problems here have few rows (the lifted dimension plus one) and possibly
many columns (one per sample point), so we keep an explicit basis, solve the
m x m systems directly, and price all columns with one matrix product.

Entry points:
  solve_standard  min c.x  s.t. Ax = b, x >= 0   (two-phase)
  resolve_rhs     same problem after changing b, warm-started from an optimal
                  basis via the dual simplex
  lp_solve        min c.x  s.t. Bx >= a, x free  (split + slack wrapper)

Optimal solutions come with row duals; callers can check the duality gap,
which we keep below 1e-9 * (1 + |value|) on the instances in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InfeasibleError, NumericalError, UnboundedError

_PIVOT_TOL = 1e-10
_RCOST_TOL = 1e-9
_FEAS_TOL = 1e-9
_BLAND_TRIGGER = 60  # degenerate iterations before switching to Bland's rule
_MAX_ITER = 50_000


@dataclass
class LpSolution:
    x: np.ndarray
    value: float
    duals: np.ndarray  # one multiplier per row of Ax = b
    basis: List[int]


def _basis_solve(A: np.ndarray, b: np.ndarray, basis: Sequence[int]):
    Bmat = A[:, basis]
    try:
        xB = np.linalg.solve(Bmat, b)
    except np.linalg.LinAlgError:
        raise NumericalError("singular basis matrix")
    return xB


def _primal_simplex(
    A: np.ndarray,
    b: np.ndarray,
    c: np.ndarray,
    basis: List[int],
    max_iter: int = _MAX_ITER,
) -> Tuple[List[int], np.ndarray, np.ndarray]:
    """Run the primal simplex from a primal-feasible basis.

    Returns (basis, xB, duals).  Raises UnboundedError when a column with
    negative reduced cost has no blocking row.
    """
    m, n = A.shape
    bland = False
    stall = 0
    last_obj = np.inf
    for _ in range(max_iter):
        Bmat = A[:, basis]
        try:
            xB = np.linalg.solve(Bmat, b)
            y = np.linalg.solve(Bmat.T, c[basis])
        except np.linalg.LinAlgError:
            raise NumericalError("singular basis matrix")
        rc = c - A.T @ y
        rc[basis] = 0.0

        obj = float(c[basis] @ xB)
        if obj < last_obj - 1e-13 * (1.0 + abs(obj)):
            stall = 0
            bland = False
        else:
            stall += 1
            if stall > _BLAND_TRIGGER:
                bland = True
        last_obj = obj

        if bland:
            candidates = np.nonzero(rc < -_PIVOT_TOL)[0]
            if candidates.size == 0:
                return basis, xB, y
            j = int(candidates[0])
        else:
            j = int(np.argmin(rc))
            if rc[j] >= -_RCOST_TOL:
                return basis, xB, y

        d = np.linalg.solve(Bmat, A[:, j])
        pos = d > _PIVOT_TOL
        if not np.any(pos):
            raise UnboundedError("objective unbounded below")
        ratios = np.full(m, np.inf)
        ratios[pos] = np.maximum(xB[pos], 0.0) / d[pos]
        rmin = ratios.min()
        ties = np.nonzero(ratios <= rmin + 1e-12)[0]
        if bland and ties.size > 1:
            r = int(min(ties, key=lambda i: basis[i]))
        else:
            r = int(ties[np.argmax(d[ties])])  # largest pivot among ties
        basis[r] = j
    raise NumericalError("simplex iteration limit exceeded")


def solve_standard(
    A,
    b,
    c,
    *,
    basis: Optional[Sequence[int]] = None,
    max_iter: int = _MAX_ITER,
) -> LpSolution:
    """min c.x s.t. Ax = b, x >= 0.

    A warm-start basis is used directly when it is primal feasible; otherwise
    phase 1 with artificial variables finds one.  Redundant rows discovered in
    phase 1 are dropped (their duals are reported as 0).
    """
    A = np.ascontiguousarray(A, dtype=float)
    b = np.asarray(b, dtype=float).copy()
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    if b.shape != (m,) or c.shape != (n,):
        raise NumericalError("inconsistent LP shapes")

    if basis is not None and len(basis) == m:
        try:
            xB = _basis_solve(A, b, list(basis))
            if xB.min() >= -_FEAS_TOL:
                fbasis, xB, y = _primal_simplex(A, b, c, list(basis), max_iter)
                return _package(A, b, c, fbasis, xB, y, np.arange(m))
        except NumericalError:
            pass

    # phase 1: flip rows to b >= 0, append artificials
    sign = np.where(b < 0, -1.0, 1.0)
    A1 = np.hstack([A * sign[:, None], np.eye(m)])
    b1 = b * sign
    c1 = np.concatenate([np.zeros(n), np.ones(m)])
    basis1 = list(range(n, n + m))
    basis1, xB, _ = _primal_simplex(A1, b1, c1, basis1, max_iter)
    if float(c1[basis1] @ xB) > _FEAS_TOL * (1.0 + float(np.abs(b).sum())):
        raise InfeasibleError("constraints have no nonnegative solution")

    # drive artificials out of the basis; rows that keep one are dependent
    for pos in range(m):
        if basis1[pos] < n:
            continue
        Bmat = A1[:, basis1]
        Binv_row = np.linalg.solve(Bmat.T, np.eye(m)[pos])
        row = Binv_row @ A1[:, :n]
        pivots = np.nonzero(np.abs(row) > 1e-8)[0]
        for j in pivots:
            if j not in basis1:
                basis1[pos] = int(j)
                break

    if any(v >= n for v in basis1):
        # rows still carried by an artificial basic are dependent; drop them
        drop_positions = [i for i in range(m) if basis1[i] >= n]
        A = np.delete(A, drop_positions, axis=0)
        b = np.delete(b, drop_positions)
        row_ids = np.delete(np.arange(m), drop_positions)
        basis2 = [basis1[i] for i in range(m) if basis1[i] < n]
        m = A.shape[0]
    else:
        row_ids = np.arange(m)
        basis2 = list(basis1)

    fbasis, xB, y = _primal_simplex(A, b, c, basis2, max_iter)
    return _package(A, b, c, fbasis, xB, y, row_ids, full_rows=len(sign))


def _package(A, b, c, basis, xB, y, row_ids, full_rows=None) -> LpSolution:
    n = A.shape[1]
    x = np.zeros(n)
    x[basis] = np.maximum(xB, 0.0)
    if full_rows is None:
        duals = y
    else:
        duals = np.zeros(full_rows)
        duals[row_ids] = y
    return LpSolution(x=x, value=float(c @ x), duals=duals, basis=list(basis))


def resolve_rhs(
    A,
    b_new,
    c,
    basis: Sequence[int],
    max_iter: int = _MAX_ITER,
) -> LpSolution:
    """Re-solve min c.x, Ax = b_new, x >= 0 from a basis that was optimal for
    a previous right-hand side (so it stays dual feasible).  Dual simplex until
    primal feasibility; falls back to solve_standard if the basis is stale.
    """
    A = np.ascontiguousarray(A, dtype=float)
    b = np.asarray(b_new, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    basis = list(basis)
    if len(basis) != m:
        return solve_standard(A, b, c)

    for _ in range(2000):
        Bmat = A[:, basis]
        try:
            xB = np.linalg.solve(Bmat, b)
            y = np.linalg.solve(Bmat.T, c[basis])
        except np.linalg.LinAlgError:
            return solve_standard(A, b, c)
        if xB.min() >= -_FEAS_TOL:
            # primal feasible again; polish with the primal simplex in case
            # dual feasibility drifted numerically
            fbasis, xB2, y2 = _primal_simplex(A, b, c, basis, max_iter)
            return _package(A, b, c, fbasis, xB2, y2, np.arange(m))
        r = int(np.argmin(xB))
        Binv_row = np.linalg.solve(Bmat.T, np.eye(m)[r])
        alpha = Binv_row @ A
        alpha[basis] = 0.0
        rc = c - A.T @ y
        rc[basis] = 0.0
        cand = np.nonzero(alpha < -_PIVOT_TOL)[0]
        if cand.size == 0:
            raise InfeasibleError("no nonnegative solution for the new right-hand side")
        ratios = np.maximum(rc[cand], 0.0) / (-alpha[cand])
        j = int(cand[np.argmin(ratios)])
        basis[r] = j
    return solve_standard(A, b, c, max_iter=max_iter)  # stale basis, cold start


def lp_solve(c, B, a, *, max_iter: int = _MAX_ITER) -> Tuple[np.ndarray, float, np.ndarray]:
    """min c.x s.t. Bx >= a with x free.

    Returns (x, value, u) where u >= 0 are the inequality multipliers with
    B^T u = c and u.(Bx - a) = 0 at the reported solution.
    """
    B = np.asarray(B, dtype=float)
    a = np.asarray(a, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = B.shape
    # x = p - q with p, q >= 0, slack s >= 0: Bp - Bq - s = a
    A = np.hstack([B, -B, -np.eye(m)])
    cc = np.concatenate([c, -c, np.zeros(m)])
    sol = solve_standard(A, a, cc, max_iter=max_iter)
    x = sol.x[:n] - sol.x[n : 2 * n]
    u = sol.duals
    return x, float(c @ x), u
