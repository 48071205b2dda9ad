"""Stratify the hull boundary into patches.

For n = 2 the boundary polygon splits into arcs (chains of short edges) and
edges (isolated long ones).  For n >= 3 we build a graph on hull facets whose
edges demand delta-close unit normals, a shared ridge, and delta-close facets
in Hausdorff distance; connected components are the patches.  Within each
facet, vertices are grouped by delta-proximity single linkage and one
representative per cluster is chosen so that the representatives span an
actual face of the hull (verified through support flushness); the face
dimension k of a component is the largest representative-set dimension seen.

The geometry needed by the facet graph (normal distances, shared-ridge ranks,
facet-to-facet Hausdorff distances, per-facet vertex distances) is cached
independently of delta, so scanning a whole grid of thresholds costs little
more than one run.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BadInputError, ConvtrajError
from .hull import PolytopeData, _affine_rank
from .quickhull import quickhull_oracle
from .sampler import CurveSample


@dataclass(frozen=True)
class FaceTuple:
    """Representative face (u_0, ..., u_k; v) attached to one hull facet."""

    vertex_ids: Tuple[int, ...]
    normal: np.ndarray
    source_facet: int
    k: int
    padded: bool = False
    unpadded_ids: Optional[Tuple[int, ...]] = None

    def classification_ids(self) -> Tuple[int, ...]:
        return self.unpadded_ids if self.unpadded_ids is not None else self.vertex_ids


@dataclass
class Patch:
    k: int
    faces: List[FaceTuple]
    component_id: int


@dataclass
class PatchReport:
    dimension: int
    counts: Dict[int, int]
    patches: List[Patch]
    delta: float
    arcs: List[List[int]] = field(default_factory=list)
    flagged_facets: List[int] = field(default_factory=list)
    suspicious: bool = False

    def count(self, k: int) -> int:
        return self.counts.get(k, 0)


# -- facet-to-facet geometry -----------------------------------------------------


class _FacetMetric:
    """Point-to-facet distance with the facet preprocessed once.

    The facet polytope is reduced to an orthonormal chart of its affine hull;
    inside the chart the distance recurses over the facet's own faces.
    """

    def __init__(self, vertices: np.ndarray):
        self.V = np.asarray(vertices, dtype=float)
        self.o = self.V.mean(axis=0)
        centered = self.V - self.o
        _, svals, vt = np.linalg.svd(centered, full_matrices=False)
        if svals.size == 0 or svals[0] <= 0:
            self.rank = 0
            return
        self.rank = int(np.sum(svals > 1e-9 * svals[0]))
        self.Q = vt[: self.rank].T  # (n, r)
        self.local = centered @ self.Q  # (m, r)
        self._sub: Optional[List["_FacetMetric"]] = None
        self._planes = None
        if self.rank == 1:
            t = self.local[:, 0]
            self.t_lo, self.t_hi = float(t.min()), float(t.max())
        elif self.rank >= 2:
            try:
                P = quickhull_oracle(self.local)
                self._planes = (P.facet_normals, P.facet_offsets)
                subs = []
                for f in range(P.facet_count):
                    W = P.vertices[P.facet_vertex_ids(f)]
                    w, h = P.facet_normals[f], P.facet_offsets[f]
                    # flatten onto the supporting hyperplane so the child's
                    # affine rank strictly drops (terminates the recursion
                    # even when the input is a thin pancake)
                    subs.append(_FacetMetric(W - np.outer(W @ w - h, w)))
                self._sub = subs
            except ConvtrajError:
                # nearly flat in the chart; fall back to the dominant segment
                self.rank = 1
                t = self.local[:, 0]
                self.t_lo, self.t_hi = float(t.min()), float(t.max())

    def distance(self, q: np.ndarray) -> float:
        d = np.asarray(q, dtype=float) - self.o
        if self.rank == 0:
            return float(np.linalg.norm(d))
        u = d @ self.Q[:, : self.rank] if self.rank == 1 else d @ self.Q
        perp2 = max(float(d @ d) - float(u @ u), 0.0)
        if self.rank == 1:
            t = min(max(float(u[0]), self.t_lo), self.t_hi)
            flat2 = (float(u[0]) - t) ** 2
            return float(np.sqrt(perp2 + flat2))
        W, g = self._planes
        slack = W @ u - g
        if slack.max() <= 1e-12:
            return float(np.sqrt(perp2))
        flat = min(sub.distance(u) for sub in self._sub)
        return float(np.sqrt(perp2 + flat * flat))


def hausdorff_facets(F1: np.ndarray, F2: np.ndarray) -> float:
    """Hausdorff distance between two convex vertex sets; both directed
    suprema are attained at vertices, so the computation is exact up to the
    point-to-polytope projections."""
    m1, m2 = _FacetMetric(np.asarray(F1, float)), _FacetMetric(np.asarray(F2, float))
    d12 = max(m2.distance(v) for v in np.asarray(F1, float))
    d21 = max(m1.distance(v) for v in np.asarray(F2, float))
    return max(d12, d21)


class PatchMetricCache:
    """Delta-independent geometry shared by facet-graph constructions."""

    def __init__(self, hull: PolytopeData):
        self.hull = hull
        F = hull.facet_count
        n = hull.dimension
        N = hull.facet_normals
        self.normal_dist = np.linalg.norm(N[:, None, :] - N[None, :, :], axis=2)
        self.facet_verts = [hull.facet_vertex_ids(f) for f in range(F)]
        inc = hull.incidence.astype(np.float32)
        common = inc @ inc.T
        self.ridge = np.zeros((F, F), dtype=bool)
        ii, jj = np.nonzero(np.triu(common >= n - 1 - 0.5, 1))
        for a, b in zip(ii, jj):
            shared = np.intersect1d(self.facet_verts[a], self.facet_verts[b])
            if _affine_rank(hull.vertices[shared], 1e-9) == n - 2:
                self.ridge[a, b] = self.ridge[b, a] = True
        self._metrics: List[Optional[_FacetMetric]] = [None] * F
        self._hausdorff: Dict[Tuple[int, int], float] = {}
        self._support_memo: Dict[Tuple[int, ...], bool] = {}
        self._pair_dists: List[Optional[np.ndarray]] = [None] * F

    def metric(self, f: int) -> _FacetMetric:
        if self._metrics[f] is None:
            V = self.hull.vertices[self.facet_verts[f]]
            w = self.hull.facet_normals[f]
            h = self.hull.facet_offsets[f]
            # flatten onto the facet plane; vertices sit within the hull's
            # incidence tolerance of it, and an exactly flat input keeps the
            # chart rank at n-1
            self._metrics[f] = _FacetMetric(V - np.outer(V @ w - h, w))
        return self._metrics[f]

    def hausdorff(self, a: int, b: int) -> float:
        key = (a, b) if a < b else (b, a)
        got = self._hausdorff.get(key)
        if got is None:
            Va = self.hull.vertices[self.facet_verts[a]]
            Vb = self.hull.vertices[self.facet_verts[b]]
            ma, mb = self.metric(a), self.metric(b)
            got = max(max(mb.distance(v) for v in Va), max(ma.distance(v) for v in Vb))
            self._hausdorff[key] = got
        return got

    def vertex_dists(self, f: int) -> np.ndarray:
        if self._pair_dists[f] is None:
            V = self.hull.vertices[self.facet_verts[f]]
            self._pair_dists[f] = np.linalg.norm(V[:, None, :] - V[None, :, :], axis=2)
        return self._pair_dists[f]

    def spans_face(self, ids: Tuple[int, ...], tol: float = 1e-8) -> bool:
        """Support flushness: the mean normal of all facets incident to every
        id is maximized exactly on `ids` among the hull vertices."""
        key = tuple(sorted(ids))
        got = self._support_memo.get(key)
        if got is not None:
            return got
        hull = self.hull
        rows = hull.incidence[:, key].all(axis=1)
        ok = False
        if rows.any():
            w = hull.facet_normals[rows].mean(axis=0)
            vals = hull.vertices @ w
            sel = np.zeros(len(vals), dtype=bool)
            sel[list(key)] = True
            scale = 1.0 + float(np.abs(vals).max())
            lo = vals[sel].min()
            ok = bool(
                vals[sel].max() - lo <= tol * scale
                and (not np.any(~sel) or vals[~sel].max() <= lo - tol * scale)
            )
        self._support_memo[key] = ok
        return ok


def facet_graph(
    hull: PolytopeData, delta: float, cache: Optional[PatchMetricCache] = None
) -> Tuple[np.ndarray, PatchMetricCache]:
    """Adjacency of hull facets under the three patch predicates."""
    if hull.dimension < 3:
        raise BadInputError("facet graph needs dimension >= 3")
    if cache is None:
        cache = PatchMetricCache(hull)
    F = hull.facet_count
    adj = np.zeros((F, F), dtype=bool)
    ii, jj = np.nonzero(np.triu(cache.ridge & (cache.normal_dist <= delta), 1))
    for a, b in zip(ii, jj):
        if cache.hausdorff(int(a), int(b)) <= delta:
            adj[a, b] = adj[b, a] = True
    return adj, cache


# -- clusters and representatives -------------------------------------------------


def _single_linkage(dists: np.ndarray, delta: float) -> List[List[int]]:
    m = len(dists)
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(m):
        for j in range(i + 1, m):
            if dists[i, j] <= delta:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: Dict[int, List[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: min(g))


def proximity_clusters(
    hull: PolytopeData,
    facet_id: int,
    delta: float,
    cache: Optional[PatchMetricCache] = None,
    max_combinations: int = 512,
) -> Tuple[Tuple[int, ...], List[List[int]], bool]:
    """Cluster the facet's vertices at threshold delta and pick one
    representative per cluster such that the representatives span a face of
    the hull.

    Returns (representative ids, clusters as lists of vertex ids, face_ok).
    The default representative of a cluster minimizes the in-cluster distance
    sum; when that combination fails the face test, nearby combinations are
    tried in order of that same objective.
    """
    if cache is None:
        cache = PatchMetricCache(hull)
    ids = cache.facet_verts[facet_id]
    D = cache.vertex_dists(facet_id)
    local_clusters = _single_linkage(D, delta)
    clusters = [[int(ids[i]) for i in cl] for cl in local_clusters]

    # order each cluster's members by intra-cluster distance sum
    ordered: List[List[int]] = []
    for cl in local_clusters:
        sums = [(float(D[np.ix_([i], cl)].sum()), i) for i in cl]
        sums.sort()
        ordered.append([int(ids[i]) for _, i in sums])

    best = tuple(members[0] for members in ordered)
    if cache.spans_face(best):
        return best, clusters, True
    for combo in itertools.islice(itertools.product(*ordered), max_combinations):
        if cache.spans_face(tuple(combo)):
            return tuple(combo), clusters, True
    return best, clusters, False


# -- patch detection (n >= 3) -----------------------------------------------------


def _components(adj: np.ndarray) -> List[List[int]]:
    F = len(adj)
    seen = np.zeros(F, dtype=bool)
    comps = []
    for s in range(F):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            f = stack.pop()
            comp.append(f)
            for g in np.nonzero(adj[f])[0]:
                if not seen[g]:
                    seen[g] = True
                    stack.append(int(g))
        comps.append(sorted(comp))
    return comps


def detect_patches(
    hull: PolytopeData,
    delta: float,
    cache: Optional[PatchMetricCache] = None,
    rank_tol: float = 1e-6,
) -> PatchReport:
    """Group facets into patches and classify each patch's face dimension k.

    k of a representative set is its affine dimension (for simplicial data
    that equals |U| - 1; planar quadrilateral faces still count as k = 2).
    Facets whose representatives fail the face test are flagged and excluded
    from the component's k vote; short tuples are padded from an existing
    cluster up to the component k and marked as padded.
    """
    adj, cache = facet_graph(hull, delta, cache)
    comps = _components(adj)
    patches: List[Patch] = []
    flagged: List[int] = []
    counts: Dict[int, int] = {}
    for cid, comp in enumerate(comps):
        per_facet = []
        for f in comp:
            reps, clusters, ok = proximity_clusters(hull, f, delta, cache)
            if not ok:
                flagged.append(f)
                per_facet.append((f, reps, clusters, None))
                continue
            k = _affine_rank(hull.vertices[list(reps)], rank_tol)
            per_facet.append((f, reps, clusters, k))
        ks = [k for *_ignored, k in per_facet if k is not None]
        if not ks:
            continue
        k_comp = max(ks)
        faces = []
        for f, reps, clusters, k in per_facet:
            if k is None:
                continue
            padded = False
            reps_out = list(reps)
            if k < k_comp:
                # pad from clusters that have spare members: second-closest
                # member to the existing representative
                for cl in sorted(clusters, key=len, reverse=True):
                    if len(reps_out) >= k_comp + 1:
                        break
                    spare = [v for v in cl if v not in reps_out]
                    if not spare:
                        continue
                    rep_here = next(v for v in reps_out if v in cl)
                    vv = hull.vertices
                    spare.sort(key=lambda v: float(np.linalg.norm(vv[v] - vv[rep_here])))
                    reps_out.append(spare[0])
                    padded = True
                # all clusters exhausted: fall back to the facet's own vertices
                vv = hull.vertices
                facet_ids = [int(v) for v in np.nonzero(hull.incidence[f])[0]]
                while len(reps_out) < k_comp + 1:
                    spare = [v for v in facet_ids if v not in reps_out]
                    if not spare:
                        break
                    spare.sort(
                        key=lambda v: min(
                            float(np.linalg.norm(vv[v] - vv[r])) for r in reps_out
                        )
                    )
                    reps_out.append(spare[0])
                    padded = True
            faces.append(
                FaceTuple(
                    vertex_ids=tuple(reps_out),
                    normal=hull.facet_normals[f].copy(),
                    source_facet=f,
                    k=k_comp,
                    padded=padded,
                    unpadded_ids=tuple(reps) if padded else None,
                )
            )
        patches.append(Patch(k=k_comp, faces=faces, component_id=cid))
        counts[k_comp] = counts.get(k_comp, 0) + 1
    return PatchReport(
        dimension=hull.dimension,
        counts=counts,
        patches=patches,
        delta=delta,
        flagged_facets=flagged,
    )


# -- n = 2 ------------------------------------------------------------------------


def detect_arcs_edges_2d(
    sample: CurveSample, hull: PolytopeData, delta: float
) -> PatchReport:
    """Split the hull polygon's edges into arcs (chains of short edges) and
    isolated long edges.

    Two polygon edges are adjacent when they share a vertex and both have
    length <= delta; isolated nodes are the edges of the body, remaining
    components are arcs reported as ordered vertex runs.
    """
    if hull.dimension != 2:
        raise BadInputError("arc/edge split is the planar case")
    V = hull.vertices
    center = V.mean(axis=0)
    order = np.argsort(np.arctan2(V[:, 1] - center[1], V[:, 0] - center[0]))
    m = len(order)
    edges = [(int(order[i]), int(order[(i + 1) % m])) for i in range(m)]
    lengths = np.array([np.linalg.norm(V[a] - V[b]) for a, b in edges])
    short = lengths <= delta

    suspicious = not bool(short.any())
    adj_next = [
        short[i] and short[(i + 1) % m] for i in range(m)
    ]  # edge i adjacent to edge i+1 (they share a vertex)

    assigned = np.full(m, -1)
    comps: List[List[int]] = []
    for i in range(m):
        if assigned[i] >= 0:
            continue
        comp = [i]
        assigned[i] = len(comps)
        j = i
        while adj_next[j]:
            j = (j + 1) % m
            if assigned[j] >= 0:
                break
            comp.append(j)
            assigned[j] = assigned[i]
        j = i
        while adj_next[(j - 1) % m]:
            j = (j - 1) % m
            if assigned[j] >= 0:
                break
            comp.insert(0, j)
            assigned[j] = assigned[i]
        comps.append(comp)

    def facet_of(a: int, b: int) -> int:
        both = np.nonzero(hull.incidence[:, a] & hull.incidence[:, b])[0]
        return int(both[0]) if len(both) else -1

    def outward_normal(a: int, b: int) -> np.ndarray:
        d = V[b] - V[a]
        w = np.array([d[1], -d[0]])
        w /= np.linalg.norm(w)
        if w @ (V[a] - center) < 0:
            w = -w
        return w

    arcs: List[List[int]] = []
    edge_faces: List[FaceTuple] = []
    for comp in comps:
        if len(comp) == 1 and not short[comp[0]]:
            a, b = edges[comp[0]]
            edge_faces.append(
                FaceTuple((a, b), outward_normal(a, b), facet_of(a, b), k=1)
            )
        elif len(comp) == 1:
            # short but isolated between long edges: counts as an edge
            a, b = edges[comp[0]]
            edge_faces.append(
                FaceTuple((a, b), outward_normal(a, b), facet_of(a, b), k=1)
            )
        else:
            run = [edges[i][0] for i in comp] + [edges[comp[-1]][1]]
            arcs.append(run)

    patches = [Patch(k=1, faces=edge_faces, component_id=0)] if edge_faces else []
    counts = {0: len(arcs), 1: len(edge_faces)}
    return PatchReport(
        dimension=2,
        counts=counts,
        patches=patches,
        delta=delta,
        arcs=arcs,
        suspicious=suspicious,
    )


# -- threshold scan ----------------------------------------------------------------


def delta_plateau_scan(
    hull: PolytopeData,
    base_delta: float,
    sample: Optional[CurveSample] = None,
    factors: Optional[np.ndarray] = None,
    cache: Optional[PatchMetricCache] = None,
) -> Tuple[float, PatchReport, List[Tuple[float, Dict[int, int]]]]:
    """Scan a geometric grid of thresholds and pick a stable classification.

    Runs of constant patch structure are keyed on the k >= level counts,
    starting at level 1: zero-patches are isolated contact points whose
    count is the most sampling-sensitive, so they never break a plateau.
    A run is stable when it spans at least a factor 2 in delta, shows some
    structure at its level, and is not the trivial state where every facet
    sits in its own top-k component.  The grid under-measures a run by up
    to one step on each side, so candidate boundaries are sharpened by
    bisection before the factor-2 test.  If no level-1 run is stable the
    signature coarsens to k >= 2 and so on: flatter strata settle at scales
    where the lower ones still churn.  Within a level the smallest stable
    scale wins (it preserves the most detail); with nothing stable at any
    level the widest level-1 run is returned.

    base_delta is typically the maximum consecutive sample gap.
    """
    if factors is None:
        factors = np.geomspace(0.25, 16.0, 37)
    deltas = base_delta * np.asarray(factors, dtype=float)
    if hull.dimension == 2:
        if sample is None:
            raise BadInputError("planar scan needs the curve sample")

        def build(d: float) -> PatchReport:
            return detect_arcs_edges_2d(sample, hull, d)

    else:
        if cache is None:
            cache = PatchMetricCache(hull)

        def build(d: float) -> PatchReport:
            return detect_patches(hull, d, cache)

    reports = [build(float(d)) for d in deltas]
    scan = [(float(d), r.counts) for d, r in zip(deltas, reports)]

    def ksig(r: PatchReport, level: int):
        return tuple(sorted((k, c) for k, c in r.counts.items() if k >= level))

    def _unmerged(r: PatchReport) -> bool:
        # Below the merging scale nearly every unflagged facet is its own
        # top-k component; such states describe the triangulation, not the
        # boundary structure.
        top = r.counts.get(hull.dimension - 1, 0)
        unflagged = hull.facet_count - len(r.flagged_facets)
        return top >= 0.8 * max(1, unflagged)

    def _runs(sigs) -> List[Tuple[int, int]]:
        out = []
        i = 0
        while i < len(sigs):
            j = i
            while j + 1 < len(sigs) and sigs[j + 1] == sigs[i]:
                j += 1
            out.append((i, j))
            i = j + 1
        return out

    def refine(i: int, j: int, level: int) -> Tuple[float, float]:
        # Bisect (geometrically) into the neighbouring grid cells to find
        # where the run's signature actually starts and stops.
        target = ksig(reports[i], level)
        lo = float(deltas[i])
        if i > 0:
            a, b = float(deltas[i - 1]), float(deltas[i])
            while b / a > 1.001:
                m = math.sqrt(a * b)
                if ksig(build(m), level) == target:
                    b = m
                else:
                    a = m
            lo = b
        hi = float(deltas[j])
        if j + 1 < len(deltas):
            a, b = float(deltas[j]), float(deltas[j + 1])
            while b / a > 1.001:
                m = math.sqrt(a * b)
                if ksig(build(m), level) == target:
                    a = m
                else:
                    b = m
            hi = a
        return lo, hi

    step2 = float(deltas[1] / deltas[0]) ** 2 if len(deltas) > 1 else 1.0
    for level in range(1, max(hull.dimension - 1, 1) + 1):
        sigs = [ksig(r, level) for r in reports]
        for i, j in _runs(sigs):
            if not sigs[i] or _unmerged(reports[i]):
                continue
            span = float(deltas[j] / deltas[i])
            if span * step2 < 2.0:
                continue
            lo, hi = refine(i, j, level)
            if hi / lo >= 2.0:
                mid = math.sqrt(lo * hi)
                return float(mid), build(mid), scan
    sigs = [ksig(r, 1) for r in reports]
    i, j = max(_runs(sigs), key=lambda ij: deltas[ij[1]] / deltas[ij[0]])
    mid = i + (j - i) // 2
    return float(deltas[mid]), reports[mid], scan
