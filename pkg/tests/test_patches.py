"""Boundary stratification: facet merging, polygon arcs, threshold scan."""

import numpy as np

from conftest import stadium_points
from convtraj.hull import convex_hull_molp
from convtraj.patches import (
    PatchMetricCache,
    delta_plateau_scan,
    detect_arcs_edges_2d,
    detect_patches,
    hausdorff_facets,
)
from convtraj.sampler import CurveSample, estimate_epsilon


def _octahedron_hull():
    octa = np.array(
        [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], dtype=float
    )
    return convex_hull_molp(octa, 1e-9)


def test_octahedron_facets_stay_separate_then_merge():
    h = _octahedron_hull()
    for delta in (0.1, 0.5, 1.0):
        assert dict(detect_patches(h, delta).counts) == {2: 8}
    for delta in (2.0, 4.0):
        assert dict(detect_patches(h, delta).counts) == {0: 1}


def test_metric_cache_reproduces_uncached_runs():
    h = _octahedron_hull()
    cache = PatchMetricCache(h)
    for delta in (0.3, 1.0, 3.0):
        assert detect_patches(h, delta, cache).counts == detect_patches(h, delta).counts


def test_stadium_arcs_and_edges():
    pts = stadium_points(400)
    sample = CurveSample(
        dimension=2,
        points=pts,
        params=np.arange(400) / 400.0,
        closed=True,
        eps_estimate=estimate_epsilon(pts, True),
        termination="parametric",
    )
    h = convex_hull_molp(pts, 1e-9)
    assert h.vertex_count == h.facet_count == 248
    # two straight sides, two curved caps; stable across a range of thresholds
    for delta in (0.077, 0.1, 0.3):
        rep = detect_arcs_edges_2d(sample, h, delta)
        assert dict(rep.counts) == {0: 2, 1: 2}
        assert len(rep.arcs) == 2


def test_hausdorff_facets_hand_values():
    seg = np.array([[0.0, 0.0], [1.0, 0.0]])
    assert np.isclose(hausdorff_facets(seg, seg + [0.0, 1.0]), 1.0)
    assert np.isclose(hausdorff_facets(np.array([[0.0, 0.0], [2.0, 0.0]]), np.array([[0.0, 0.0]])), 2.0)
    tri = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert hausdorff_facets(tri, tri[::-1]) <= 1e-6  # same set, reordered


def test_plateau_scan_choice_is_reproducible():
    h = _octahedron_hull()
    delta, report, scan = delta_plateau_scan(h, 0.5)
    assert delta > 0
    assert len(scan) == 37  # the full threshold grid is reported
    assert all(d > 0 and isinstance(c, dict) for d, c in scan)
    assert detect_patches(h, delta).counts == report.counts


def test_trig_preset_plateau(preset):
    res = preset("trig123")
    rep = res.patches
    assert dict(rep.counts) == {1: 4, 2: 2}
    # the chosen threshold reproduces the same stratification when reapplied
    assert detect_patches(res.hull, rep.delta).counts == rep.counts
