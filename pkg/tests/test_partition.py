"""Inward/outward classification of edges and faces against the field."""

import numpy as np

from convtraj.partition import classify_edge, classify_face
from convtraj.poly import parse_polynomial
from convtraj.systems import field_from_polynomials


def _field(*texts):
    n = len(texts)
    return field_from_polynomials([parse_polynomial(t, dimension=n) for t in texts])


CHORD = np.array([[-0.6, 0.8], [0.6, 0.8]])
UP = np.array([0.0, 1.0])
ROTATION = _field("2*x2", "-2*x1")


def test_edge_breakpoint_and_signs():
    e = classify_edge(ROTATION, CHORD, UP)
    assert not e.tangent
    assert np.allclose(e.breakpoints, [0.5], atol=1e-9)
    assert e.segment_signs == [1, -1]
    assert np.allclose(e.breakpoint_points[0], [0.0, 0.8], atol=1e-9)
    assert e.outward


def test_edge_classification_invariant_under_field_scaling():
    base = classify_edge(ROTATION, CHORD, UP)
    for c in (0.5, 3.0, 40.0):
        scaled = field_from_polynomials([p * c for p in ROTATION.components])
        e = classify_edge(scaled, CHORD, UP)
        assert np.allclose(e.breakpoints, base.breakpoints, atol=1e-9)
        assert e.segment_signs == base.segment_signs


def test_edge_tangent_field_detected_symbolically():
    phi = _field("x1", "0")
    e = classify_edge(phi, np.array([[0.0, 0.0], [1.0, 0.0]]), UP)
    assert e.tangent
    assert e.breakpoints == []
    assert e.segment_signs == [0]
    assert not e.outward


def test_face_constant_outward_field():
    phi = _field("1", "0", "0")
    simplex = np.array([[0.0, 0, 0], [1.0, 0, 0], [0.0, 1, 0]])
    f = classify_face(phi, simplex, np.array([1.0, 0.0, 0.0]), grid_res=32)
    assert not f.tangent
    assert len(f.regions) == 1
    assert f.regions[0].sign == 1
    assert f.outward
    assert len(f.zero_points) == 0


def test_face_conic_zero_set_location():
    # restricted to the face, field . normal is x^2 + y^2 - 1/4
    phi = _field("0", "0", "x1^2 + x2^2 - 0.25")
    simplex = np.array([[-1.0, -1.0, 0.0], [2.0, -1.0, 0.0], [-1.0, 2.0, 0.0]])
    f = classify_face(phi, simplex, np.array([0.0, 0.0, 1.0]), grid_res=64)
    assert sorted(r.sign for r in f.regions) == [-1, 1]
    zp = np.asarray(f.zero_points)
    assert len(zp) > 50
    # marching points track the radius-1/2 circle to grid accuracy
    assert np.abs(np.linalg.norm(zp[:, :2], axis=1) - 0.5).max() <= 2.0 / 64
    for r in f.regions:
        assert np.sign(r.witness_value) == r.sign


def test_trig_preset_partition_summary(preset):
    part = preset("trig123").partition
    assert part.forward_closed is False
    assert part.outward_count == 68
    witnesses = part.outward_witnesses()
    assert witnesses
    for _, value in witnesses:
        assert value > 0


def test_segment_signs_match_field_at_midpoints(preset):
    res = preset("trig123")
    phi = res.field
    checked = 0
    for e in res.partition.edges:
        for mid, sgn in zip(e.segment_midpoints, e.segment_signs):
            if sgn == 0:
                continue
            g = float(phi(np.asarray(mid)) @ e.normal)
            assert int(np.sign(g)) == sgn
            checked += 1
    assert checked > 0


def test_quartic_level_curve_edge_zero_crossings(preset):
    # the straight bottom edge: field . normal vanishes at the midpoint and
    # symmetrically near both ends, alternating sign in between
    res = preset("trott")
    [edge] = res.partition.edges
    xs = sorted(p[0] for p in edge.breakpoint_points)
    a = 0.4052937596229429
    assert len(xs) == 3
    assert abs(xs[0] + a) <= 1e-4
    assert abs(xs[1]) <= 1e-4
    assert abs(xs[2] - a) <= 1e-4
    assert edge.segment_signs == [-1, 1, -1, 1]
