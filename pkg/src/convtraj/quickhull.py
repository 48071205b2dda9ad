"""Independent hull construction: incremental quickhull with exact predicates.

This is the second, algorithmically unrelated route to the hull, kept apart
from the outer-approximation code on purpose so the two can cross-check each
other.  All orientation decisions are made on a deterministic exact rational
perturbation of the input (magnitude ~2^-77, far below every tolerance in
the package), so the perturbed points are in general position and no
predicate is ever zero.  A float filter with a conservative error bound
answers the generic cases fast; the exact path runs only near degeneracies.
The perturbed hull is simplicial; near-coplanar facet groups are merged back
at a tolerance and refitted to recover the real facet structure.

Dimensions 2 through 4.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BadInputError, DegenerateSpanError, NumericalError
from .hull import PolytopeData, assemble_polytope, dedup_points

_REF = -1  # query id for the interior reference point


def _float_det(M: np.ndarray) -> float:
    k = len(M)
    if k == 2:
        return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if k == 3:
        return (
            M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
            - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
            + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
        )
    return float(np.linalg.det(M))


def _fraction_det(rows: List[List[Fraction]]) -> Fraction:
    k = len(rows)
    if k == 1:
        return rows[0][0]
    if k == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = Fraction(0)
    for j in range(k):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * _fraction_det(minor)
        acc += term if j % 2 == 0 else -term
    return acc


class _Arithmetic:
    """Float-filtered exact orientation tests on perturbed points."""

    def __init__(self, pts: np.ndarray, seed: int):
        self.pts = pts
        m, n = pts.shape
        self.n = n
        rng = random.Random(0x5EED ^ seed)
        self._eta = [
            [Fraction(rng.getrandbits(64) - 2**63, 2**140) for _ in range(n)] for _ in range(m)
        ]
        self._exact_cache: Dict[int, Tuple[Fraction, ...]] = {}
        self.ref_float: Optional[np.ndarray] = None
        self._ref_exact: Optional[Tuple[Fraction, ...]] = None

    def exact(self, i: int) -> Tuple[Fraction, ...]:
        if i == _REF:
            return self._ref_exact
        got = self._exact_cache.get(i)
        if got is None:
            got = tuple(
                Fraction(float(x)) + e for x, e in zip(self.pts[i], self._eta[i])
            )
            self._exact_cache[i] = got
        return got

    def set_reference(self, ids: Sequence[int]):
        """Interior point = centroid of an exact full-dimensional simplex."""
        cols = [self.exact(i) for i in ids]
        k = Fraction(len(cols))
        self._ref_exact = tuple(sum(c[j] for c in cols) / k for j in range(self.n))
        self.ref_float = np.array([float(x) for x in self._ref_exact])

    def _coords_float(self, i: int) -> np.ndarray:
        return self.ref_float if i == _REF else self.pts[i]

    def orientation(self, ids: Sequence[int], q: int) -> int:
        """Sign of det(p1-p0, ..., p_{n-1}-p0, q-p0) on the perturbed points."""
        p0 = self._coords_float(ids[0])
        M = np.empty((self.n, self.n))
        for r, i in enumerate(ids[1:]):
            M[r] = self._coords_float(i) - p0
        M[-1] = self._coords_float(q) - p0
        det = _float_det(M)
        bound = 1e-12 * float(np.prod(np.linalg.norm(M, axis=1)))
        if abs(det) > bound:
            return 1 if det > 0 else -1
        e0 = self.exact(ids[0])
        rows = []
        for i in list(ids[1:]) + [q]:
            ei = self.exact(i)
            rows.append([ei[j] - e0[j] for j in range(self.n)])
        d = _fraction_det(rows)
        if d == 0:
            raise NumericalError("exact orientation is zero despite perturbation")
        return 1 if d > 0 else -1

    def independent_points(self, limit: int) -> Tuple[List[int], int]:
        """Greedy exact search for affinely independent points (unperturbed),
        so flat input is detected as flat."""
        n = self.n
        ids = [0]
        basis: List[List[Fraction]] = []
        pivots: List[int] = []
        base = [Fraction(float(x)) for x in self.pts[0]]
        for i in range(1, limit):
            v = [Fraction(float(x)) - b for x, b in zip(self.pts[i], base)]
            for row, piv in zip(basis, pivots):
                if v[piv]:
                    f = v[piv] / row[piv]
                    v = [a - f * b for a, b in zip(v, row)]
            piv = next((j for j in range(n) if v[j]), None)
            if piv is None:
                continue
            basis.append(v)
            pivots.append(piv)
            ids.append(i)
            if len(basis) == n:
                break
        return ids, len(basis)


class _Facet:
    __slots__ = ("verts", "neighbors", "outside", "alive")

    def __init__(self, verts: Tuple[int, ...]):
        self.verts = verts
        self.neighbors: List[int] = [-1] * len(verts)
        self.outside: List[int] = []
        self.alive = True


def _wire_neighbors(facets: Dict[int, _Facet], ids: Sequence[int]):
    """Link facets among `ids` that share a ridge (all-but-one vertex set)."""
    seen: Dict[frozenset, Tuple[int, int]] = {}
    for fid in ids:
        f = facets[fid]
        vs = frozenset(f.verts)
        for pos, v in enumerate(f.verts):
            key = vs - {v}
            if key in seen:
                gid, gpos = seen.pop(key)
                f.neighbors[pos] = gid
                facets[gid].neighbors[gpos] = fid
            else:
                seen[key] = (fid, pos)


def _facet_plane(pts: np.ndarray, verts: Sequence[int], ref: np.ndarray):
    """Outward unit normal and offset of the hyperplane through the facet's
    (unperturbed) vertices."""
    V = pts[list(verts)]
    diffs = V[1:] - V[0]
    _, _, vt = np.linalg.svd(diffs, full_matrices=True)
    w = vt[-1]
    gamma = float(w @ V[0])
    if w @ ref - gamma > 0:
        w, gamma = -w, -gamma
    return w, gamma


def quickhull_oracle(
    points,
    *,
    seed: int = 0,
    merge_tol: Optional[float] = None,
    inc_tol: Optional[float] = None,
    dedup_tol: float = 1e-12,
    rank_tol: float = 1e-6,
) -> PolytopeData:
    """Exact incremental hull of the points (dimensions 2-4).

    Output satisfies the same contract as the outer-approximation hull;
    eps reflects the observed containment slack of the merged facet planes.
    """
    pts = dedup_points(np.asarray(points, dtype=float), dedup_tol)
    if pts.ndim != 2:
        raise BadInputError("points must be a 2d array")
    m, n = pts.shape
    if not 2 <= n <= 4:
        raise BadInputError("supported dimensions are 2 through 4")
    if m < n + 1:
        raise BadInputError("need at least n+1 points")
    scale = 1.0 + float(np.abs(pts).max())
    if merge_tol is None:
        merge_tol = 1e-8 * scale
    if inc_tol is None:
        inc_tol = 1e-7 * scale

    ar = _Arithmetic(pts, seed)
    ids0, rank = ar.independent_points(m)
    if rank < n:
        raise DegenerateSpanError("points do not affinely span the space")
    ar.set_reference(ids0)

    facets: Dict[int, _Facet] = {}
    next_id = 0

    def new_facet(verts: Tuple[int, ...]) -> int:
        nonlocal next_id
        if ar.orientation(verts, _REF) > 0:
            verts = (verts[1], verts[0]) + verts[2:]
        f = _Facet(verts)
        facets[next_id] = f
        next_id += 1
        return next_id - 1

    initial = [new_facet(tuple(v for v in ids0 if v != skip)) for skip in ids0]
    _wire_neighbors(facets, initial)

    in_simplex = set(ids0)
    for p in range(m):
        if p in in_simplex:
            continue
        for fid in initial:
            if ar.orientation(facets[fid].verts, p) > 0:
                facets[fid].outside.append(p)
                break

    pending = [fid for fid in initial if facets[fid].outside]
    while pending:
        fid = pending.pop()
        f = facets.get(fid)
        if f is None or not f.alive or not f.outside:
            continue
        w, gamma = _facet_plane(pts, f.verts, ar.ref_float)
        apex = max(f.outside, key=lambda p: float(w @ pts[p]) - gamma)

        visible = {fid}
        stack = [fid]
        while stack:
            g = facets[stack.pop()]
            for nb in g.neighbors:
                if nb in visible or not facets[nb].alive:
                    continue
                if ar.orientation(facets[nb].verts, apex) > 0:
                    visible.add(nb)
                    stack.append(nb)

        horizon = []  # (ridge verts, outside facet id, position on that side)
        for vid in visible:
            g = facets[vid]
            for pos, nb in enumerate(g.neighbors):
                if nb in visible:
                    continue
                ridge = tuple(v for i, v in enumerate(g.verts) if i != pos)
                horizon.append((ridge, nb, facets[nb].neighbors.index(vid)))

        created = []
        for ridge, nb, nb_pos in horizon:
            nid = new_facet(ridge + (apex,))
            apex_pos = facets[nid].verts.index(apex)
            facets[nid].neighbors[apex_pos] = nb
            facets[nb].neighbors[nb_pos] = nid
            created.append(nid)
        _wire_neighbors(facets, created)

        orphans: List[int] = []
        for vid in visible:
            orphans.extend(facets[vid].outside)
            facets[vid].alive = False
            facets[vid].outside = []
        for p in orphans:
            if p == apex:
                continue
            for nid in created:
                if ar.orientation(facets[nid].verts, p) > 0:
                    facets[nid].outside.append(p)
                    break
        for nid in created:
            if facets[nid].outside:
                pending.append(nid)

    alive_ids = [fid for fid, f in facets.items() if f.alive]

    # merge near-coplanar neighbor groups and refit one plane per group
    planes = {fid: _facet_plane(pts, facets[fid].verts, ar.ref_float) for fid in alive_ids}
    parent = {fid: fid for fid in alive_ids}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for fid in alive_ids:
        wf, gf = planes[fid]
        for nb in facets[fid].neighbors:
            if nb <= fid or not facets[nb].alive:
                continue
            wn, gn = planes[nb]
            if np.max(np.abs(wf - wn)) <= merge_tol and abs(gf - gn) <= merge_tol * scale:
                ra, rb = find(fid), find(nb)
                if ra != rb:
                    parent[ra] = rb

    groups: Dict[int, List[int]] = {}
    for fid in alive_ids:
        groups.setdefault(find(fid), []).append(fid)

    normals, offsets = [], []
    for members in groups.values():
        vids = sorted({v for fid in members for v in facets[fid].verts})
        w, gamma = _facet_plane(pts, vids, ar.ref_float)
        # refit through the centroid of the incident vertices
        gamma = float(w @ pts[vids].mean(axis=0))
        normals.append(w)
        offsets.append(gamma)
    normals = np.array(normals)
    offsets = np.array(offsets)

    cand_ids = sorted({v for fid in alive_ids for v in facets[fid].verts})
    cand = pts[cand_ids]

    slack = float((normals @ pts.T - offsets[:, None]).max()) if len(normals) else 0.0
    eps_out = max(slack, 1e-12)
    return assemble_polytope(cand, normals, offsets, eps_out, inc_tol, rank_tol)
