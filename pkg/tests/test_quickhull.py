"""Exact incremental hull: counts, invariants, agreement with the LP route."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import point_sets_match
from convtraj.errors import BadInputError, DegenerateSpanError
from convtraj.hull import convex_hull_molp
from convtraj.quickhull import quickhull_oracle


def test_cube_counts_and_interior_point():
    cube = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)], dtype=float)
    h = quickhull_oracle(cube)
    assert (h.vertex_count, h.facet_count, h.edge_count) == (8, 6, 12)
    assert h.validate() == []
    h2 = quickhull_oracle(np.vstack([cube, [[0.5, 0.5, 0.5]]]))
    assert (h2.vertex_count, h2.facet_count) == (8, 6)


def test_input_validation():
    with pytest.raises(BadInputError):
        quickhull_oracle(np.zeros((7, 5)))  # dimension > 4
    with pytest.raises(BadInputError):
        quickhull_oracle(np.eye(3)[:2])  # too few points
    coplanar = np.array([[0.0, 0, 0], [1.0, 0, 0], [0.0, 1, 0], [1.0, 1, 0], [0.3, 0.3, 0]])
    with pytest.raises(DegenerateSpanError):
        quickhull_oracle(coplanar)


@given(st.integers(0, 10_000))
@settings(max_examples=20, deadline=None)
def test_3d_cloud_invariants(seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(int(rng.integers(5, 40)), 3))
    h = quickhull_oracle(pts)
    assert h.validate() == []
    # Euler relation for a 3-polytope
    assert h.vertex_count - h.edge_count + h.facet_count == 2
    # vertices are input points; all inputs are contained
    d = np.linalg.norm(h.vertices[:, None, :] - pts[None, :, :], axis=2)
    assert d.min(axis=1).max() <= 1e-9
    slack = pts @ h.facet_normals.T - h.facet_offsets
    assert slack.max() <= h.eps + 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_agrees_with_lp_route(n):
    """The two hull constructions share no code path; vertex sets must match."""
    rng = np.random.default_rng(100 + n)
    for _ in range(5):
        m = int(rng.integers(n + 2, 35))
        pts = rng.normal(size=(m, n))
        hq = quickhull_oracle(pts)
        hb = convex_hull_molp(pts, 1e-9)
        assert point_sets_match(hq.vertices, hb.vertices, tol=1e-7)
