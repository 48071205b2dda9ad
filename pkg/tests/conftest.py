"""Shared fixtures and small geometry helpers for the test suite."""

import time

import numpy as np
import pytest

from convtraj.pipeline import run_example

_CACHE = {}
_SECONDS = {}


@pytest.fixture(scope="session")
def preset():
    """Memoized preset runner: each (name, overrides) pipeline runs once."""

    def get(name, **overrides):
        key = (name, tuple(sorted(overrides.items())))
        if key not in _CACHE:
            t0 = time.monotonic()
            _CACHE[key] = run_example(name, **overrides)
            _SECONDS[key] = time.monotonic() - t0
        return _CACHE[key]

    return get


@pytest.fixture(scope="session")
def preset_seconds():
    """Wall time of the memoized run; call after the matching preset() call."""

    def get(name, **overrides):
        return _SECONDS[(name, tuple(sorted(overrides.items())))]

    return get


def point_sets_match(A, B, tol=1e-7):
    """True when every row of A is within tol of some row of B and vice versa."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if len(A) == 0 or len(B) == 0:
        return len(A) == len(B)
    if A.shape[1] != B.shape[1]:
        return False
    d = np.linalg.norm(A[:, None, :] - B[None, :, :], axis=2)
    return float(d.min(axis=1).max()) <= tol and float(d.min(axis=0).max()) <= tol


def dist_to_polyline(p, verts):
    """Distance from point p to the polyline through verts."""
    p = np.asarray(p, dtype=float)
    verts = np.asarray(verts, dtype=float)
    best = np.inf
    for a, b in zip(verts[:-1], verts[1:]):
        ab = b - a
        denom = float(ab @ ab)
        t = 0.0 if denom == 0.0 else float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
        best = min(best, float(np.linalg.norm(p - (a + t * ab))))
    return best


def stadium_points(n=400):
    """Closed 2d curve: two unit semicircle caps joined by straight sides."""
    P = 4.0 + 2.0 * np.pi
    ss = np.arange(n) / n * P
    pts = np.empty((n, 2))
    for i, s in enumerate(ss):
        if s < 2.0:
            pts[i] = (1.0 - s, 1.0)
        elif s < 2.0 + np.pi:
            a = s - 2.0
            pts[i] = (-1.0 - np.sin(a), np.cos(a))
        elif s < 4.0 + np.pi:
            pts[i] = (-1.0 + (s - 2.0 - np.pi), -1.0)
        else:
            a = s - 4.0 - np.pi
            pts[i] = (1.0 + np.sin(a), -np.cos(a))
    return pts
