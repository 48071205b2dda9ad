"""Trajectory integration, gap estimates, decimation, and span reduction."""

import numpy as np
import pytest

from conftest import dist_to_polyline
from convtraj.errors import BadInputError, DegenerateSpanError
from convtraj.poly import parse_polynomial
from convtraj.sampler import (
    CurveSample,
    affine_span_reduce,
    decimate_curve,
    estimate_epsilon,
    integrate,
    reduce_field,
    sample_parametric,
)
from convtraj.systems import TrigCurve, field_from_polynomials


def _field(*texts):
    n = len(texts)
    return field_from_polynomials([parse_polynomial(t, dimension=n) for t in texts])


def test_estimate_epsilon_definition():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]])
    assert estimate_epsilon(pts, closed=False) == 1.0
    assert estimate_epsilon(pts, closed=True) == 1.5  # wrap gap is 3
    assert estimate_epsilon(pts[:1], closed=False) == 0.0


def test_integrate_circle_detects_cycle():
    phi = _field("-x2", "x1")
    s = integrate(phi, [1.0, 0.0], 100.0, max_gap=0.05, detect_cycle=True)
    assert s.termination == "cycle"
    assert s.closed
    gaps = np.linalg.norm(np.diff(s.points, axis=0), axis=1)
    assert gaps.max() <= 0.05 + 1e-12
    radii = np.linalg.norm(s.points, axis=1)
    assert np.abs(radii - 1.0).max() <= 1e-6


def test_integrate_blowup_terminates_gracefully():
    s = integrate(_field("x1^2", "0"), [1.0, 0.0], 10.0)
    assert s.termination == "blowup"
    assert len(s.points) > 1


def test_integrate_stationary_termination():
    s = integrate(_field("-x1", "-x2"), [1.0, 1.0], 60.0)
    assert s.termination == "stationary"
    assert np.linalg.norm(s.points[-1]) <= 1e-8


def test_sample_parametric_contract():
    curve = TrigCurve(
        A=np.array([[1.0, 0.0], [0.0, 1.0]]),
        B=np.array([[0.0, 0.5], [0.5, 0.0]]),
        C=np.zeros(2),
    )
    s = sample_parametric(curve, 64)
    assert len(s.points) == 64
    assert s.closed
    assert np.all(np.diff(s.params) > 0)
    assert s.eps_estimate == estimate_epsilon(s.points, closed=True)
    with pytest.raises(BadInputError):
        sample_parametric(curve, 2)


# -- decimation ----------------------------------------------------------------


def _wobble_sample():
    t = np.linspace(0, 1, 200)
    pts = np.stack([t, 0.001 * np.sin(40 * np.pi * t)], axis=1)
    return CurveSample(
        dimension=2,
        points=pts,
        params=t,
        closed=False,
        eps_estimate=estimate_epsilon(pts, False),
        termination="t_end",
    )


def test_decimate_flattens_subresolution_wiggles():
    s = _wobble_sample()
    dec = decimate_curve(s, 0.01)
    assert len(dec.points) == 2  # wiggle amplitude is below the tolerance
    assert np.allclose(dec.points[0], s.points[0])
    assert np.allclose(dec.points[-1], s.points[-1])
    assert dec.eps_estimate == s.eps_estimate + 0.01


def test_decimate_keeps_curve_within_tolerance():
    rng = np.random.default_rng(3)
    t = np.linspace(0, 1, 300)
    pts = np.stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)], axis=1)
    pts += rng.normal(scale=1e-3, size=pts.shape)
    s = CurveSample(
        dimension=2,
        points=pts,
        params=t,
        closed=False,
        eps_estimate=estimate_epsilon(pts, False),
        termination="t_end",
    )
    tol = 0.02
    dec = decimate_curve(s, tol)
    assert 2 < len(dec.points) < len(s.points)
    for p in s.points:
        assert dist_to_polyline(p, dec.points) <= tol + 1e-9
    # kept parameters are a subsequence of the originals
    assert np.all(np.isin(dec.params, s.params))
    with pytest.raises(BadInputError):
        decimate_curve(s, 0.0)


# -- affine span reduction -----------------------------------------------------


def _embedded_circle(noise=0.0):
    rng = np.random.default_rng(4)
    t = np.linspace(0, 1, 120, endpoint=False)
    flat = np.stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)], axis=1)
    Q, _ = np.linalg.qr(rng.normal(size=(5, 2)))
    off = rng.normal(size=5)
    pts = flat @ Q.T + off
    if noise:
        pts += rng.normal(scale=noise, size=pts.shape)
    return CurveSample(
        dimension=5,
        points=pts,
        params=t,
        closed=True,
        eps_estimate=estimate_epsilon(pts, True),
        termination="parametric",
    )


def test_affine_span_reduce_is_isometric_and_invertible():
    s = _embedded_circle()
    red, basis, offset = affine_span_reduce(s)
    assert red.dimension == 2
    assert red.reduction is not None
    assert red.reduction.original_dimension == 5
    # pairwise distances survive the projection
    d0 = np.linalg.norm(s.points[:20, None] - s.points[None, :20], axis=2)
    d1 = np.linalg.norm(red.points[:20, None] - red.points[None, :20], axis=2)
    assert np.allclose(d0, d1, atol=1e-9)
    # the chart reconstructs the original samples
    assert np.allclose(s.points, offset + red.points @ basis.T, atol=1e-9)


def test_affine_span_reduce_degenerate_inputs():
    t = np.linspace(0, 1, 30)
    line = np.stack([t, t, t], axis=1)
    s = CurveSample(3, line, t, False, estimate_epsilon(line, False), "t_end")
    with pytest.raises(DegenerateSpanError):
        affine_span_reduce(s)
    same = np.zeros((10, 3))
    s2 = CurveSample(3, same, np.arange(10.0), False, 0.0, "t_end")
    with pytest.raises(DegenerateSpanError):
        affine_span_reduce(s2)


def test_reduce_field_chart_identity():
    phi = _field("x2*x3", "-x1", "x1 + x3^2")
    rng = np.random.default_rng(5)
    Q, _ = np.linalg.qr(rng.normal(size=(3, 2)))
    offset = rng.normal(size=3)
    red = reduce_field(phi, Q, offset)
    assert red.dimension == 2
    for u in rng.uniform(-1, 1, size=(6, 2)):
        assert np.allclose(red(u), Q.T @ phi(offset + Q @ u), atol=1e-10)
    with pytest.raises(BadInputError):
        reduce_field(phi, np.eye(4)[:, :2], np.zeros(4))
