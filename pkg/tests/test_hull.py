"""Outer-approximation hull: exact counts, containment, degeneracy handling."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convtraj.errors import BadInputError, DegenerateSpanError, NumericalError
from convtraj.hull import convex_hull_molp, dedup_points

SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.5, 0.5]])


def test_square_with_interior_point():
    h = convex_hull_molp(SQUARE, 1e-9)
    assert h.vertex_count == 4
    assert h.facet_count == 4
    assert h.edge_count == 4
    assert h.validate() == []


def test_cube_counts():
    cube = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)], dtype=float)
    h = convex_hull_molp(cube, 1e-9)
    assert (h.vertex_count, h.facet_count, h.edge_count) == (8, 6, 12)
    assert h.validate() == []


def test_4d_simplex_and_cross_polytope():
    simplex = np.vstack([np.zeros(4), np.eye(4)])
    h = convex_hull_molp(simplex, 1e-9)
    assert (h.vertex_count, h.facet_count, h.edge_count) == (5, 5, 10)
    assert h.validate() == []
    cross = np.vstack([np.eye(4), -np.eye(4)])
    h = convex_hull_molp(cross, 1e-9)
    assert (h.vertex_count, h.facet_count, h.edge_count) == (8, 16, 24)
    assert h.validate() == []


def test_facets_are_unit_outward_halfspaces():
    h = convex_hull_molp(SQUARE, 1e-9)
    assert np.allclose(np.linalg.norm(h.facet_normals, axis=1), 1.0)
    # every input point satisfies all facet inequalities within eps
    slack = SQUARE @ h.facet_normals.T - h.facet_offsets
    assert slack.max() <= h.eps + 1e-12


@given(st.integers(0, 10_000), st.integers(2, 4))
@settings(max_examples=25, deadline=None)
def test_random_cloud_containment_and_validation(seed, n):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(n + 2, 30))
    pts = rng.normal(size=(m, n))
    h = convex_hull_molp(pts, 1e-9)
    assert h.validate() == []
    slack = pts @ h.facet_normals.T - h.facet_offsets
    assert slack.max() <= h.eps + 1e-12
    # vertices are a subset of the input cloud
    d = np.linalg.norm(h.vertices[:, None, :] - pts[None, :, :], axis=2)
    assert d.min(axis=1).max() <= 1e-7


def test_input_validation():
    with pytest.raises(BadInputError):
        convex_hull_molp(np.zeros(5), 1e-9)  # not 2d
    with pytest.raises(BadInputError):
        convex_hull_molp(np.zeros((5, 1)), 1e-9)  # dimension < 2
    with pytest.raises(BadInputError):
        convex_hull_molp(np.eye(3)[:2], 1e-9)  # too few points
    coplanar = np.array([[0.0, 0, 0], [1.0, 0, 0], [0.0, 1, 0], [1.0, 1, 0], [0.5, 0.5, 0]])
    with pytest.raises(DegenerateSpanError):
        convex_hull_molp(coplanar, 1e-9)


def test_oversized_eps_fails_loudly():
    # a tolerance larger than the body prunes every candidate facet
    with pytest.raises(NumericalError):
        convex_hull_molp(SQUARE, 10.0)


def test_dedup_points():
    pts = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0], [1.0 + 1e-14, 1.0]])
    assert dedup_points(pts, 1e-12).shape == (2, 2)


def test_trig_preset_hull_counts(preset):
    h = preset("trig123").hull
    assert (h.vertex_count, h.facet_count, h.edge_count) == (70, 102, 170)
    assert h.validate() == []
