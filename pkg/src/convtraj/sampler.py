"""Trajectory and parametric curve sampling.

Numerical trajectories come from an embedded Dormand-Prince 4(5) pair with
adaptive step control, a quartic dense-output interpolant (used to cap the
spatial gap between consecutive samples), and explicit termination reasons:
reaching t_end, a stationary point, blow-up, or orbit closure.

The Butcher tableau and the interpolant coefficients are the standard
published Dormand-Prince values, pinned here for reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import BadInputError, DegenerateSpanError, IntegrationError
from .poly import Polynomial
from .systems import TrigCurve, VectorField, trig_points

# Dormand-Prince 4(5) tableau (FSAL, 7 stages).
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# Dense output: y(t + theta h) = y + h K^T P (theta, theta^2, theta^3, theta^4).
_P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)


@dataclass
class ReductionInfo:
    basis: np.ndarray  # (original_dimension, reduced_dimension), orthonormal columns
    offset: np.ndarray
    original_dimension: int


@dataclass
class CurveSample:
    """Ordered samples of a curve, with the parameter values that produced
    them.  eps_estimate is half the largest consecutive gap (including the
    wrap-around gap for closed curves)."""

    dimension: int
    points: np.ndarray  # (m, dimension)
    params: np.ndarray  # (m,), strictly increasing
    closed: bool = False
    eps_estimate: float = 0.0
    termination: str = "parametric"
    reduction: Optional[ReductionInfo] = None


def estimate_epsilon(points: np.ndarray, closed: bool) -> float:
    """Half the maximum distance between consecutive samples."""
    points = np.asarray(points, dtype=float)
    if len(points) < 2:
        return 0.0
    gaps = np.linalg.norm(np.diff(points, axis=0), axis=1)
    max_gap = float(gaps.max()) if len(gaps) else 0.0
    if closed:
        max_gap = max(max_gap, float(np.linalg.norm(points[-1] - points[0])))
    return 0.5 * max_gap


def sample_parametric(curve: TrigCurve, N: int) -> CurveSample:
    """Sample a trigonometric curve at t = k/N for k = 0..N-1."""
    if N < 3:
        raise BadInputError("need at least 3 parametric samples")
    ts = np.arange(N, dtype=float) / N
    pts = trig_points(curve, ts)
    return CurveSample(
        dimension=curve.dimension,
        points=pts,
        params=ts,
        closed=True,
        eps_estimate=estimate_epsilon(pts, closed=True),
        termination="parametric",
    )


def _initial_step(phi: VectorField, y0: np.ndarray, t_end: float) -> float:
    f0 = phi(y0)
    scale = np.linalg.norm(f0)
    if scale == 0.0:
        return t_end * 1e-6
    return min(t_end * 1e-3, 1e-2 * (1.0 + np.linalg.norm(y0)) / scale)


def integrate(
    phi: VectorField,
    y0,
    t_end: float,
    rel_tol: float = 1e-8,
    abs_tol: float = 1e-10,
    max_step: float = np.inf,
    *,
    max_gap: Optional[float] = None,
    stall_tol: float = 1e-10,
    blowup_bound: float = 1e8,
    detect_cycle: bool = False,
    min_period: Optional[float] = None,
    max_points: int = 2_000_000,
) -> CurveSample:
    """Integrate x' = phi(x) from y0 and return the sampled trajectory.

    Termination reasons: "t_end", "stationary" (field norm below stall_tol),
    "blowup" (state norm above blowup_bound), "cycle" (returned near y0 with
    aligned velocity after min_period).  A step-size underflow raises
    IntegrationError.  When max_gap is set, accepted steps are refined with
    the dense-output interpolant so consecutive samples are at most max_gap
    apart.
    """
    y0 = np.asarray(y0, dtype=float)
    if y0.shape != (phi.dimension,):
        raise BadInputError("start point dimension mismatch")
    if t_end <= 0:
        raise BadInputError("t_end must be positive")

    t = 0.0
    y = y0.copy()
    k1 = phi(y)
    ts: List[float] = [0.0]
    ys: List[np.ndarray] = [y.copy()]
    termination = "t_end"
    h = min(_initial_step(phi, y0, t_end), max_step)
    first_step = None
    f0_norm = np.linalg.norm(k1)
    if f0_norm < stall_tol:
        return CurveSample(phi.dimension, np.array(ys), np.array(ts), False, 0.0, "stationary")

    while t < t_end:
        h = min(h, t_end - t, max_step)
        if h < 1e-14 * max(1.0, abs(t)):
            raise IntegrationError(f"step size underflow at t={t:.6g}")
        K = np.empty((7, phi.dimension))
        K[0] = k1
        for s in range(1, 7):
            K[s] = phi(y + h * (_A[s] @ K[:s]))
        y_new = y + h * (_B @ K)
        err_vec = h * (_E @ K)
        tol_vec = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = np.sqrt(np.mean((err_vec / tol_vec) ** 2))
        if err > 1.0:
            h *= max(0.2, 0.9 * err ** -0.2)
            continue
        # accepted
        if first_step is None:
            first_step = h
        if max_gap is not None:
            gap = np.linalg.norm(y_new - y)
            if gap > max_gap:
                pieces = int(np.ceil(gap / max_gap))
                thetas = np.arange(1, pieces) / pieces
                Q = _P @ np.column_stack([thetas, thetas**2, thetas**3, thetas**4]).T
                dense = y[None, :] + h * (K.T @ Q).T
                for theta, yd in zip(thetas, dense):
                    ts.append(t + theta * h)
                    ys.append(yd)
        t += h
        y = y_new
        ts.append(t)
        ys.append(y.copy())
        k1 = K[6]  # FSAL: stage 7 was evaluated at y_new
        fn = np.linalg.norm(k1)
        if fn < stall_tol:
            termination = "stationary"
            break
        if np.linalg.norm(y) > blowup_bound:
            termination = "blowup"
            break
        if detect_cycle:
            mp = min_period if min_period is not None else 25.0 * (first_step or h)
            recent_gap = np.linalg.norm(ys[-1] - ys[-2]) if len(ys) > 1 else 0.0
            close = np.linalg.norm(y - y0) <= max(2.0 * recent_gap, 1e-12)
            if t > mp and close and f0_norm > 0 and fn > 0:
                aligned = float(k1 @ phi(y0)) / (fn * f0_norm)
                if aligned > 0.9:
                    termination = "cycle"
                    break
        if len(ys) > max_points:
            raise IntegrationError("sample budget exceeded")
        h = min(h * min(5.0, 0.9 * err ** -0.2 if err > 0 else 5.0), max_step)

    points = np.array(ys)
    params = np.array(ts)
    closed = termination == "cycle"
    return CurveSample(
        dimension=phi.dimension,
        points=points,
        params=params,
        closed=closed,
        eps_estimate=estimate_epsilon(points, closed),
        termination=termination,
    )


def _dp_keep(points: np.ndarray, lo: int, hi: int, tol: float, keep: np.ndarray) -> None:
    # Douglas-Peucker on points[lo..hi]; endpoints already kept.
    stack = [(lo, hi)]
    while stack:
        i, j = stack.pop()
        if j <= i + 1:
            continue
        chord = points[j] - points[i]
        length = np.linalg.norm(chord)
        seg = points[i + 1 : j] - points[i]
        if length == 0.0:
            dist = np.linalg.norm(seg, axis=1)
        else:
            u = chord / length
            dist = np.linalg.norm(seg - np.outer(seg @ u, u), axis=1)
        m = int(np.argmax(dist))
        if dist[m] > tol:
            k = i + 1 + m
            keep[k] = True
            stack.append((i, k))
            stack.append((k, j))


def decimate_curve(sample: CurveSample, tol: float) -> CurveSample:
    """Drop samples that sit within tol of the chord between their kept
    neighbours (Douglas-Peucker).  Endpoints survive, so terminal states are
    preserved, and the decimated polyline stays within tol of the original;
    eps_estimate grows by tol to keep the approximation bound honest.

    This matters for trajectories that spiral into an equilibrium: the
    nearly straight tail otherwise produces swarms of degenerate sliver
    facets whose normals are pure noise.
    """
    if tol <= 0:
        raise BadInputError("decimation tolerance must be positive")
    pts = np.asarray(sample.points, dtype=float)
    m = len(pts)
    if m <= 2:
        return sample
    keep = np.zeros(m, dtype=bool)
    keep[0] = keep[-1] = True
    if sample.closed:
        # anchor the cycle at its two most distant-from-start points
        far = int(np.argmax(np.linalg.norm(pts - pts[0], axis=1)))
        keep[far] = True
        _dp_keep(pts, 0, far, tol, keep)
        _dp_keep(pts, far, m - 1, tol, keep)
    else:
        _dp_keep(pts, 0, m - 1, tol, keep)
    idx = np.nonzero(keep)[0]
    return CurveSample(
        dimension=sample.dimension,
        points=pts[idx],
        params=sample.params[idx],
        closed=sample.closed,
        eps_estimate=sample.eps_estimate + tol,
        termination=sample.termination,
        reduction=sample.reduction,
    )


# -- affine span reduction ----------------------------------------------------


def affine_span_reduce(
    sample: CurveSample, rank_tol: float = 1e-9
) -> Tuple[CurveSample, np.ndarray, np.ndarray]:
    """Project samples onto an orthonormal basis of their affine span.

    Returns (reduced sample, basis, offset) with basis of shape (n, r); the
    projection is an isometry of the span, so pairwise distances survive.
    Raises DegenerateSpanError when the span has dimension < 2.
    """
    pts = np.asarray(sample.points, dtype=float)
    offset = pts.mean(axis=0)
    centered = pts - offset
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    if svals.size == 0 or svals[0] == 0.0:
        raise DegenerateSpanError("all samples coincide")
    rank = int(np.sum(svals > rank_tol * svals[0]))
    if rank < 2:
        raise DegenerateSpanError("affine span of the samples has dimension < 2")
    basis = vt[:rank].T  # (n, r), orthonormal columns
    reduced_pts = centered @ basis
    info = ReductionInfo(basis=basis, offset=offset, original_dimension=sample.dimension)
    reduced = CurveSample(
        dimension=rank,
        points=reduced_pts,
        params=sample.params.copy(),
        closed=sample.closed,
        eps_estimate=sample.eps_estimate,
        termination=sample.termination,
        reduction=info,
    )
    return reduced, basis, offset


def reduce_field(phi: VectorField, basis: np.ndarray, offset: np.ndarray) -> VectorField:
    """Push a field through an affine chart x = offset + basis @ u: the reduced
    field is basis^T phi(offset + basis u), valid when phi is tangent to the
    affine span along trajectories."""
    basis = np.asarray(basis, dtype=float)
    offset = np.asarray(offset, dtype=float)
    n, r = basis.shape
    if phi.dimension != n:
        raise BadInputError("field dimension mismatch")
    substituted = [p.compose_affine(basis, offset) for p in phi.components]
    comps = []
    for j in range(r):
        acc = Polynomial.zero(r)
        for i in range(n):
            if basis[i, j] != 0.0:
                acc = acc + float(basis[i, j]) * substituted[i]
        comps.append(acc)
    return VectorField(r, tuple(comps))
