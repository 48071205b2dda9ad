"""End-to-end checks of the documented guarantees, one test per guarantee."""

import time

import numpy as np

from conftest import point_sets_match
from convtraj.hull import convex_hull_molp
from convtraj.patches import hausdorff_facets
from convtraj.pipeline import vertex_sample_indices
from convtraj.poly import parse_polynomial
from convtraj.presets import preset_spec_kwargs
from convtraj.quickhull import quickhull_oracle
from convtraj.sampler import sample_parametric
from convtraj.systems import crn_field, weakly_reversible


def test_quartic_level_curve_edge_and_arc(preset, preset_seconds):
    res = preset("trott")
    assert preset_seconds("trott") < 30.0
    counts = dict(res.patches.counts)
    assert counts.get(1, 0) == 1  # one straight edge
    assert counts.get(0, 0) == 1  # one curved arc
    assert len(res.patches.arcs) == 1
    [edge] = res.partition.edges
    a, b = 0.4052937596229429, -0.7125251813139792
    assert point_sets_match(edge.endpoints, [[a, b], [-a, b]], tol=1e-3)
    assert res.partition.forward_closed is False
    xs = [p[0] for p in edge.breakpoint_points]
    assert min(abs(x - 0.239173943) for x in xs) <= 1e-3


def test_closed_trig_curve_hull_counts():
    curve = preset_spec_kwargs("trig123")["curve"]
    t0 = time.monotonic()
    sample = sample_parametric(curve, 100)
    hull = convex_hull_molp(sample.points, 1e-9)
    assert time.monotonic() - t0 < 10.0
    assert hull.vertex_count == 70
    assert hull.facet_count == 102
    assert hull.edge_count == 170
    assert int(np.count_nonzero(hull.incidence)) == 340
    assert int(np.count_nonzero(hull.adjacency)) == 340


def test_trig_surface_stratification_and_signs(preset):
    res = preset("trig123")
    counts = dict(res.patches.counts)
    assert counts.get(2, 0) == 2
    assert counts.get(1, 0) == 4
    part = res.partition
    k_of = {p.component_id: p.k for p in res.patches.patches}
    edge_groups, face_groups = {}, {}
    for e in part.edges:
        edge_groups.setdefault(e.component_id, []).append(e)
    for f in part.faces:
        face_groups.setdefault(f.component_id, []).append(f)
    # both triangle strata carry inward and outward regions
    tri_comps = [c for c, k in k_of.items() if k == 2]
    assert len(tri_comps) == 2
    for c in tri_comps:
        signs = {r.sign for f in face_groups[c] for r in f.regions}
        assert {1, -1} <= signs
    # of the four curve strata, two are identically tangent and two mixed
    edge_comps = [c for c, k in k_of.items() if k == 1]
    assert len(edge_comps) == 4
    tangent_comps = [c for c in edge_comps if all(e.tangent for e in edge_groups[c])]
    mixed_comps = [c for c in edge_comps if c not in tangent_comps]
    assert len(tangent_comps) == 2
    assert len(mixed_comps) == 2
    for c in mixed_comps:
        signs = {s for e in edge_groups[c] for s in e.segment_signs}
        assert {1, -1} <= signs
    # zero sets on the triangles trace the lines y = 0 and x = +-1/2
    for c in tri_comps:
        hits = set()
        for f in face_groups[c]:
            tol = 2.0 / f.grid_res
            for p in np.asarray(f.zero_points):
                d = (abs(p[1]), abs(p[0] - 0.5), abs(p[0] + 0.5))
                assert min(d) <= tol
                hits.add(int(np.argmin(d)))
        assert hits == {0, 1, 2}
    assert part.forward_closed is False


def test_vandevusse_reduction_and_single_outward_patch(preset):
    net = preset_spec_kwargs("vandevusse")["network"]
    phi = crn_field(net)
    printed = ["-x1 - 20*x1^2", "x1 - x2", "x2", "10*x1^2"]
    for comp, text in zip(phi.components, printed):
        assert comp.allclose(parse_polynomial(text, dimension=4), tol=1e-12)
    res = preset("vandevusse")
    assert res.report.reduced_dimension == 3
    red = res.sample.reduction
    last = red.offset + red.basis @ res.sample.points[-1]
    assert np.linalg.norm(last - [0.0, 0.0, 0.1522, 0.4238]) <= 5e-3
    assert dict(res.patches.counts) == {1: 2}
    all_comps = {p.component_id for p in res.patches.patches}
    outward_comps = {e.component_id for e in res.partition.edges if e.outward}
    assert len(all_comps) == 2
    assert len(outward_comps) == 1
    assert res.partition.forward_closed is False


def test_weakly_reversible_network_leaks_through_an_edge(preset):
    net = preset_spec_kwargs("weakly-reversible")["network"]
    assert weakly_reversible(net)
    res = preset("weakly-reversible")
    part = res.partition
    k_of = {p.component_id: p.k for p in res.patches.patches}
    verts_of = {
        p.component_id: {i for f in p.faces for i in f.classification_ids()}
        for p in res.patches.patches
    }
    face_groups = {}
    for f in part.faces:
        face_groups.setdefault(f.component_id, []).append(f)

    def sign_set(comp):
        return {r.sign for f in face_groups.get(comp, []) for r in f.regions}

    # a triangular 2-face stratum where the field never points outward
    triangles = [c for c, k in k_of.items() if k == 2 and len(verts_of[c]) == 3]
    assert any(sign_set(c) == {-1} for c in triangles)
    # and a curve stratum that leaks
    outward_edge_comps = {
        e.component_id for e in part.edges if e.outward and k_of.get(e.component_id) == 1
    }
    assert outward_edge_comps
    assert part.forward_closed is False


def test_moment_curve_face_parameter_patterns(preset):
    res = preset("smilansky-3-4")
    counts = dict(res.patches.counts)
    assert counts.get(3, 0) == 0
    idx = vertex_sample_indices(res.sample, res.hull)
    params = res.sample.params

    def face_params(face):
        return sorted(params[idx[v]] % 1.0 for v in face.classification_ids())

    n_edges = 0
    for patch in res.patches.patches:
        if patch.k != 1:
            continue
        for face in patch.faces:
            s, t = face_params(face)
            gap = (t - s) % 1.0
            assert (0.25 - 0.01 < gap < 1.0 / 3.0 + 0.01) or (
                2.0 / 3.0 - 0.01 < gap < 0.75 + 0.01
            )
            n_edges += 1
    assert n_edges > 0
    shapes = set()
    for patch in res.patches.patches:
        if patch.k != 2:
            continue
        for face in patch.faces:
            ps = face_params(face)
            m = len(ps)
            assert m in (3, 4)  # triangles and quadrilaterals only
            gaps = [(ps[(i + 1) % m] - ps[i]) % 1.0 for i in range(m)]
            assert all(abs(g - 1.0 / m) <= 0.01 for g in gaps)
            shapes.add(m)
    assert shapes == {3, 4}


def test_degree14_twenty_triangle_patches(preset):
    res = preset("degree14")
    assert dict(res.patches.counts).get(2, 0) == 20
    k2 = [p for p in res.patches.patches if p.k == 2]
    assert len(k2) == 20
    for patch in k2:
        ids = {i for f in patch.faces for i in f.classification_ids()}
        assert len(ids) == 3


def test_dual_hull_routes_agree_on_random_clouds():
    rng = np.random.default_rng(20260825)
    failures = 0
    for _ in range(200):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(n + 2, 40))
        pts = rng.normal(size=(m, n))
        hb = convex_hull_molp(pts, 1e-9)
        hq = quickhull_oracle(pts)
        if not point_sets_match(hb.vertices, hq.vertices, tol=1e-7):
            failures += 1
    assert failures == 0


def test_triangle_faces_converge_with_refinement(preset):
    Ns = (100, 200, 400, 800)
    tris_by_N = {}
    for N in Ns:
        res = preset("trig123", n_samples=N)
        tris = []
        for patch in res.patches.patches:
            if patch.k != 2:
                continue
            ids = sorted({i for f in patch.faces for i in f.classification_ids()})
            tris.append(res.hull.vertices[ids])
        assert len(tris) == 2
        tris.sort(key=lambda V: float(V[:, 2].mean()))
        tris_by_N[N] = tris
    for which in (0, 1):
        ds = [
            hausdorff_facets(tris_by_N[a][which], tris_by_N[b][which])
            for a, b in zip(Ns[:-1], Ns[1:])
        ]
        assert all(x > y for x, y in zip(ds, ds[1:]))


def test_skew_symmetric_linear_system_is_forward_closed(preset):
    res = preset("skew-linear")
    assert res.partition.forward_closed is True
    assert res.partition.outward_count == 0
    assert res.report.witnesses == []
    assert res.report.forward_closed is True
