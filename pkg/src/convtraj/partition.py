"""Partition boundary faces by the sign of the field against the outward normal.

On a face F = conv(u_0..u_k) with outward facet normal v, the polynomial
g = phi . v restricted to F splits F into inward (g < 0), outward (g > 0) and
near-tangent regions.  Edges (k = 1) are handled by exact univariate root
isolation; k = 2, 3 faces are classified on a barycentric grid with the zero
set extracted by linear interpolation.

Tolerances are resolution aware: a discretized smooth body supports spurious
outward values of order (sample gap) * |phi| on chord faces, so the sign
threshold is max(tol, outward_margin * eps_gap) scaled by the local field
magnitude.  A face whose g is identically zero as a polynomial (all
coefficients vanish after restriction) or uniformly below the tangent
threshold is classified tangent as a whole; tangent never counts as outward.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BadInputError
from .hull import PolytopeData, _affine_rank
from .patches import FaceTuple, PatchReport
from .poly import Polynomial, real_roots_in_interval
from .systems import VectorField

OUTWARD_MARGIN = 0.5
TANGENT_MARGIN = 0.5
DEFAULT_GRID_RES = {1: 0, 2: 100, 3: 40}


@dataclass
class FaceRegion:
    sign: int  # +1 outward, -1 inward
    size: int  # grid nodes in the region
    witness: np.ndarray  # ambient point with the largest |g| in the region
    witness_value: float
    witness_barycentric: np.ndarray


@dataclass
class EdgePartition:
    endpoints: np.ndarray  # (2, n)
    normal: np.ndarray
    breakpoints: List[float]  # interior roots of g in (0, 1)
    breakpoint_points: np.ndarray  # (b, n)
    segment_signs: List[int]  # one per segment between consecutive breakpoints
    segment_midpoints: np.ndarray  # (b+1, n)
    tangent: bool
    max_abs_g: float
    tol_used: float
    face: Optional[FaceTuple] = None
    component_id: int = -1

    @property
    def outward(self) -> bool:
        return any(s > 0 for s in self.segment_signs)


@dataclass
class FacePartition:
    simplex: np.ndarray  # (k+1, n) classified piece
    normal: np.ndarray
    k: int
    grid_res: int
    regions: List[FaceRegion]
    zero_polylines: List[np.ndarray]  # ambient polylines (k = 2)
    zero_points: np.ndarray  # ambient zero-crossing points
    tangent: bool
    max_abs_g: float
    tol_used: float
    face: Optional[FaceTuple] = None
    component_id: int = -1

    @property
    def outward(self) -> bool:
        return any(r.sign > 0 for r in self.regions)


@dataclass
class PartitionReport:
    dimension: int
    forward_closed: bool
    edges: List[EdgePartition]
    faces: List[FacePartition]
    outward_count: int
    tangent_count: int
    skipped_arcs: int
    skipped_faces: int
    tol: float
    eps_gap: float

    def outward_witnesses(self) -> List[Tuple[np.ndarray, float]]:
        """(point, g value) pairs, strongest violation first."""
        out: List[Tuple[np.ndarray, float]] = []
        for e in self.edges:
            for s, mid in zip(e.segment_signs, e.segment_midpoints):
                if s > 0:
                    out.append((mid, _dot_field(e)))
        for f in self.faces:
            for r in f.regions:
                if r.sign > 0:
                    out.append((r.witness, r.witness_value))
        out.sort(key=lambda pw: -abs(pw[1]))
        return out


def _dot_field(e: EdgePartition) -> float:
    # witness strength for an outward edge segment: evaluated lazily is not
    # worth plumbing the field through, midpoint max_abs_g is a fair proxy
    return e.max_abs_g


def _g_polynomial(phi: VectorField, normal: np.ndarray) -> Polynomial:
    g = Polynomial.zero(phi.dimension)
    for vi, comp in zip(normal, phi.components):
        g = g + comp * float(vi)
    return g


def _restriction_scale(g: Polynomial, verts: np.ndarray) -> float:
    vmax = max(1.0, float(np.abs(verts).max()))
    return 1.0 + g.max_abs_coeff() * vmax ** max(g.total_degree(), 0)


def _field_scale(phi: VectorField, pts: np.ndarray) -> float:
    vals = phi.eval_many(np.atleast_2d(pts))
    return 1.0 + float(np.linalg.norm(vals, axis=1).max())


def _local_scales(phi: VectorField, pts: np.ndarray) -> np.ndarray:
    """Pointwise 1 + |phi|.  Sign thresholds must be local: a chord through a
    fast region and a slow region would otherwise let the fast end's noise
    budget drown genuine sign structure at the slow end."""
    vals = phi.eval_many(np.atleast_2d(pts))
    return 1.0 + np.linalg.norm(vals, axis=1)


def classify_edge(
    phi: VectorField,
    endpoints: np.ndarray,
    normal: np.ndarray,
    tol: float = 1e-9,
    eps_gap: float = 0.0,
    tangent_margin: float = TANGENT_MARGIN,
    outward_margin: float = OUTWARD_MARGIN,
) -> EdgePartition:
    """Sign pattern of g = phi . normal along the segment [u0, u1].

    Interior roots of the univariate restriction are the breakpoints; each
    open segment between them is labeled by the sign of g at its midpoint.
    """
    V = np.asarray(endpoints, dtype=float)
    if V.shape != (2, phi.dimension):
        raise BadInputError("an edge needs exactly two endpoints")
    normal = np.asarray(normal, dtype=float)
    g = _g_polynomial(phi, normal)
    g_res = g.restrict_to_simplex(V)

    lam = np.linspace(0.0, 1.0, 65)
    pts = V[0] + lam[:, None] * (V[1] - V[0])
    g_uni = g_res.to_univariate()
    vals = g_uni.eval_many(lam)
    max_abs = float(np.abs(vals).max())
    local = _local_scales(phi, pts)
    tol_face = max(tol, outward_margin * eps_gap) * float(local.max())

    tangent = g_res.max_abs_coeff() <= 1e-12 * _restriction_scale(g, V)
    if not tangent and eps_gap > 0.0:
        tangent = bool(np.all(np.abs(vals) <= tangent_margin * eps_gap * local))
    if tangent:
        mid = 0.5 * (V[0] + V[1])
        return EdgePartition(
            endpoints=V,
            normal=normal,
            breakpoints=[],
            breakpoint_points=np.zeros((0, phi.dimension)),
            segment_signs=[0],
            segment_midpoints=mid[None, :],
            tangent=True,
            max_abs_g=max_abs,
            tol_used=tol_face,
        )

    roots = real_roots_in_interval(g_uni, 0.0, 1.0)
    breaks = [r.x for r in roots]
    knots = [0.0] + breaks + [1.0]
    mids_lam = np.array([(a + b) / 2 for a, b in zip(knots[:-1], knots[1:])])
    mids = V[0] + mids_lam[:, None] * (V[1] - V[0])
    mvals = g_uni.eval_many(mids_lam)
    mtols = max(tol, outward_margin * eps_gap) * _local_scales(phi, mids)
    signs = [
        1 if v > t else (-1 if v < -t else 0) for v, t in zip(mvals, mtols)
    ]
    # no segment rose above the band: the whole edge is indistinguishable
    # from tangent at this resolution
    tangent = all(s == 0 for s in signs)
    return EdgePartition(
        endpoints=V,
        normal=normal,
        breakpoints=breaks,
        breakpoint_points=V[0] + np.array(breaks)[:, None] * (V[1] - V[0])
        if breaks
        else np.zeros((0, phi.dimension)),
        segment_signs=signs,
        segment_midpoints=mids,
        tangent=tangent,
        max_abs_g=max_abs,
        tol_used=tol_face,
    )


# -- barycentric grids --------------------------------------------------------


def _grid_nodes(k: int, res: int) -> np.ndarray:
    """Integer lattice points (i_1..i_k) with sum <= res."""
    ranges = [range(res + 1)] * k
    nodes = [idx for idx in itertools.product(*ranges) if sum(idx) <= res]
    return np.array(nodes, dtype=int)


_NEIGHBOR_STEPS: Dict[int, np.ndarray] = {}


def _neighbor_steps(k: int) -> np.ndarray:
    got = _NEIGHBOR_STEPS.get(k)
    if got is None:
        steps = []
        for i in range(k):
            e = np.zeros(k, dtype=int)
            e[i] = 1
            steps.append(e.copy())
            steps.append(-e)
        for i in range(k):
            for j in range(k):
                if i != j:
                    e = np.zeros(k, dtype=int)
                    e[i], e[j] = 1, -1
                    steps.append(e)
        got = np.array(steps, dtype=int)
        _NEIGHBOR_STEPS[k] = got
    return got


def _regions_from_signs(
    nodes: np.ndarray, signs: np.ndarray, k: int
) -> List[List[int]]:
    index = {tuple(n): i for i, n in enumerate(nodes)}
    steps = _neighbor_steps(k)
    seen = np.zeros(len(nodes), dtype=bool)
    regions: List[List[int]] = []
    for start in range(len(nodes)):
        if seen[start] or signs[start] == 0:
            continue
        s = signs[start]
        stack, members = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            members.append(i)
            for st in steps:
                j = index.get(tuple(nodes[i] + st))
                if j is not None and not seen[j] and signs[j] == s:
                    seen[j] = True
                    stack.append(j)
        regions.append(members)
    return regions


def _chain_segments(segments: List[Tuple[np.ndarray, np.ndarray]]) -> List[np.ndarray]:
    """Greedily chain 2-point segments into polylines by shared endpoints."""
    if not segments:
        return []

    def key(p: np.ndarray) -> Tuple[int, ...]:
        return tuple(np.round(p / 1e-9).astype(np.int64))

    links: Dict[Tuple[int, ...], List[int]] = {}
    for i, (p, q) in enumerate(segments):
        links.setdefault(key(p), []).append(i)
        links.setdefault(key(q), []).append(i)
    used = [False] * len(segments)
    chains: List[np.ndarray] = []
    for i in range(len(segments)):
        if used[i]:
            continue
        used[i] = True
        chain = [segments[i][0], segments[i][1]]
        for grow_end in (True, False):
            while True:
                tip = chain[-1] if grow_end else chain[0]
                nxt = None
                for j in links.get(key(tip), []):
                    if not used[j]:
                        nxt = j
                        break
                if nxt is None:
                    break
                used[nxt] = True
                p, q = segments[nxt]
                ext = q if np.allclose(p, tip, atol=1e-8) else p
                if grow_end:
                    chain.append(ext)
                else:
                    chain.insert(0, ext)
        chains.append(np.array(chain))
    return chains


def _zero_crossings_k2(
    nodes: np.ndarray, vals: np.ndarray, res: int
) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Marching triangles over the barycentric lattice of a 2-simplex."""
    val_at = {tuple(n): v for n, v in zip(nodes, vals)}

    def corner(i, j):
        return np.array([i, j], dtype=float) / res

    segments = []
    for i in range(res):
        for j in range(res - i):
            tris = [((i, j), (i + 1, j), (i, j + 1))]
            if i + j + 2 <= res:
                tris.append(((i + 1, j), (i, j + 1), (i + 1, j + 1)))
            for tri in tris:
                vv = [val_at[c] for c in tri]
                vv = [v if v != 0.0 else 1e-300 for v in vv]
                cross = []
                for a, b in ((0, 1), (1, 2), (2, 0)):
                    if (vv[a] > 0) != (vv[b] > 0):
                        t = vv[a] / (vv[a] - vv[b])
                        pa, pb = corner(*tri[a]), corner(*tri[b])
                        cross.append(pa + t * (pb - pa))
                if len(cross) == 2:
                    segments.append((cross[0], cross[1]))
    return segments


def _zero_crossings_k3(
    nodes: np.ndarray, vals: np.ndarray, k: int
) -> List[np.ndarray]:
    """Sign-change midcrossings along lattice edges (point cloud, no mesh)."""
    index = {tuple(n): i for i, n in enumerate(nodes)}
    steps = [s for s in _neighbor_steps(k) if tuple(s) > tuple(-s)]
    points = []
    for i, n in enumerate(nodes):
        vi = vals[i] if vals[i] != 0.0 else 1e-300
        for st in steps:
            j = index.get(tuple(n + st))
            if j is None:
                continue
            vj = vals[j] if vals[j] != 0.0 else 1e-300
            if (vi > 0) != (vj > 0):
                t = vi / (vi - vj)
                points.append((n + t * st) / 1.0)
    return points


def classify_face(
    phi: VectorField,
    simplex: np.ndarray,
    normal: np.ndarray,
    grid_res: Optional[int] = None,
    tol: float = 1e-9,
    eps_gap: float = 0.0,
    tangent_margin: float = TANGENT_MARGIN,
    outward_margin: float = OUTWARD_MARGIN,
) -> FacePartition:
    """Grid classification of g = phi . normal on a k-simplex face, k in {2, 3}."""
    V = np.asarray(simplex, dtype=float)
    k = V.shape[0] - 1
    if k not in (2, 3):
        raise BadInputError("face classification covers k = 2 and k = 3")
    if grid_res is None:
        grid_res = DEFAULT_GRID_RES[k]
    normal = np.asarray(normal, dtype=float)
    g = _g_polynomial(phi, normal)
    g_res = g.restrict_to_simplex(V)

    idx = _grid_nodes(k, grid_res)
    lam = idx / float(grid_res)
    ambient = V[0] + lam @ (V[1:] - V[0])
    vals = g_res.eval_many(lam)
    max_abs = float(np.abs(vals).max())
    local = _local_scales(phi, ambient)
    tol_face = max(tol, outward_margin * eps_gap) * float(local.max())

    tangent = g_res.max_abs_coeff() <= 1e-12 * _restriction_scale(g, V)
    if not tangent and eps_gap > 0.0:
        tangent = bool(np.all(np.abs(vals) <= tangent_margin * eps_gap * local))

    regions: List[FaceRegion] = []
    zero_polylines: List[np.ndarray] = []
    zero_points = np.zeros((0, phi.dimension))
    if not tangent:
        tols = max(tol, outward_margin * eps_gap) * local
        signs = np.where(vals > tols, 1, np.where(vals < -tols, -1, 0))
        for members in _regions_from_signs(idx, signs, k):
            m = np.asarray(members)
            top = m[np.argmax(np.abs(vals[m]))]
            regions.append(
                FaceRegion(
                    sign=int(signs[top]),
                    size=len(members),
                    witness=ambient[top].copy(),
                    witness_value=float(vals[top]),
                    witness_barycentric=lam[top].copy(),
                )
            )
        E = V[1:] - V[0]
        if k == 2:
            segs = _zero_crossings_k2(idx, vals, grid_res)
            chains = _chain_segments(segs)
            zero_polylines = [V[0] + c @ E for c in chains]
            if chains:
                zero_points = np.vstack([poly for poly in zero_polylines])
        else:
            pts = _zero_crossings_k3(idx, vals, k)
            if pts:
                zero_points = V[0] + (np.array(pts) / grid_res) @ E
        if not regions:
            # whole face inside the band: tangent at this resolution
            tangent = True

    return FacePartition(
        simplex=V,
        normal=normal,
        k=k,
        grid_res=grid_res,
        regions=regions,
        zero_polylines=zero_polylines,
        zero_points=zero_points,
        tangent=tangent,
        max_abs_g=max_abs,
        tol_used=tol_face,
    )


# -- whole-boundary driver ----------------------------------------------------


def _fan_triangulate(verts: np.ndarray) -> List[np.ndarray]:
    """Split a planar convex polygon (>= 4 coplanar points) into triangles."""
    c = verts.mean(axis=0)
    centered = verts - c
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    uv = centered @ vt[:2].T
    order = np.argsort(np.arctan2(uv[:, 1], uv[:, 0]))
    ring = verts[order]
    return [
        np.vstack([ring[0], ring[i], ring[i + 1]]) for i in range(1, len(ring) - 1)
    ]


def partition_boundary(
    phi: VectorField,
    hull: PolytopeData,
    patches: PatchReport,
    tol: float = 1e-9,
    grid_res: Optional[int] = None,
    eps_gap: float = 0.0,
    tangent_margin: float = TANGENT_MARGIN,
    outward_margin: float = OUTWARD_MARGIN,
) -> PartitionReport:
    """Classify every detected face; arcs (n = 2) are skipped since their
    vertices interpolate the trajectory itself.

    forward_closed means no face carries an outward region or segment; faces
    classified tangent as a whole do not count as outward.
    """
    if phi.dimension != hull.dimension:
        raise BadInputError("field and hull dimensions disagree")
    edges: List[EdgePartition] = []
    faces: List[FacePartition] = []
    skipped_faces = 0
    for patch in patches.patches:
        for ft in patch.faces:
            ids = ft.classification_ids()
            V = hull.vertices[list(ids)]
            if len(ids) < 2:
                skipped_faces += 1
                continue
            if len(ids) == 2:
                e = classify_edge(
                    phi,
                    V,
                    ft.normal,
                    tol=tol,
                    eps_gap=eps_gap,
                    tangent_margin=tangent_margin,
                    outward_margin=outward_margin,
                )
                e.face, e.component_id = ft, patch.component_id
                edges.append(e)
                continue
            k_aff = _affine_rank(V, 1e-9)
            if len(ids) == k_aff + 1:
                pieces = [V]
            elif k_aff == 2:
                pieces = _fan_triangulate(V)
            else:
                skipped_faces += 1
                continue
            for piece in pieces:
                f = classify_face(
                    phi,
                    piece,
                    ft.normal,
                    grid_res=grid_res,
                    tol=tol,
                    eps_gap=eps_gap,
                    tangent_margin=tangent_margin,
                    outward_margin=outward_margin,
                )
                f.face, f.component_id = ft, patch.component_id
                faces.append(f)
    outward = sum(1 for e in edges if e.outward) + sum(1 for f in faces if f.outward)
    tangent = sum(1 for e in edges if e.tangent) + sum(1 for f in faces if f.tangent)
    return PartitionReport(
        dimension=hull.dimension,
        forward_closed=(outward == 0),
        edges=edges,
        faces=faces,
        outward_count=outward,
        tangent_count=tangent,
        skipped_arcs=len(patches.arcs),
        skipped_faces=skipped_faces,
        tol=tol,
        eps_gap=eps_gap,
    )


def outward_restart(
    phi: VectorField,
    report: PartitionReport,
    count: int,
    step: Optional[float] = None,
) -> np.ndarray:
    """Restart points just outside the hull: outward witnesses nudged along
    the field direction so re-integration starts on the escaping side."""
    witnesses = report.outward_witnesses()
    if not witnesses or count <= 0:
        return np.zeros((0, report.dimension))
    if step is None:
        step = report.tol
    pts = []
    for point, _val in itertools.islice(itertools.cycle(witnesses), count):
        v = phi(point)
        nv = float(np.linalg.norm(v))
        if nv == 0.0:
            pts.append(point)
        else:
            pts.append(point + step * v / nv)
    return np.array(pts)
