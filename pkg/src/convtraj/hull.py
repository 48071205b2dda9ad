"""Convex hulls of point clouds via outer approximation of a lifted problem.

The hull of points V in R^n is read off the polyhedron
P = conv{(v, -sum(v)) : v in V} + R^{n+1}_{>=0}: vertices of P are exactly the
lifted hull vertices, and every supporting halfspace {mu.y >= nu} of P with
mu >= 0, sum(mu) = 1 projects to the hull halfspace
(mu_z * ones - mu_xy).x <= -nu.  The uniform-mu "slice" facet projects to a
zero normal and is dropped.

Benson-style refinement: start from the coordinate-wise lower corner of the
lifted points (which contains P and shares its recession cone R^{n+1}_{>=0}),
repeatedly probe from the approximation vertex that is deepest outside P along
the all-ones direction, and cut with the supporting hyperplane produced by the
probe LP's duals.  Stop when every vertex is within eps.  The vertex set of
the refined approximation is maintained by an incremental double description
update with tight sets kept as packed 64-bit words.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BadInputError, DegenerateSpanError, NumericalError
from .lp import resolve_rhs, solve_standard


# -- hull output container and shared bookkeeping ------------------------------


@dataclass(frozen=True)
class PolytopeData:
    """V- and H-representation of a polytope plus incidence/adjacency.

    Facet i is {x : facet_normals[i] . x <= facet_offsets[i]} with a unit
    outward normal; incidence[i, j] says vertex j lies on facet i; adjacency
    marks vertex pairs joined by an edge.  eps is the tolerance the hull was
    computed to (containment of input points is guaranteed within eps).
    """

    dimension: int
    vertices: np.ndarray  # (V, n)
    facet_normals: np.ndarray  # (F, n)
    facet_offsets: np.ndarray  # (F,)
    incidence: np.ndarray  # (F, V) bool
    adjacency: np.ndarray  # (V, V) bool
    eps: float

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def facet_count(self) -> int:
        return len(self.facet_normals)

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self.adjacency)) // 2

    def edges(self) -> List[Tuple[int, int]]:
        ii, jj = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(ii.tolist(), jj.tolist()))

    def facet_vertex_ids(self, f: int) -> np.ndarray:
        return np.nonzero(self.incidence[f])[0]

    def validate(self, strict_eps: Optional[float] = None) -> List[str]:
        """Check the structural invariants; returns a list of violations."""
        tol = self.eps if strict_eps is None else strict_eps
        bad = []
        n = self.dimension
        norms = np.linalg.norm(self.facet_normals, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            bad.append("facet normals not unit length")
        slack = self.facet_normals @ self.vertices.T - self.facet_offsets[:, None]
        if slack.size and slack.max() > tol:
            bad.append(f"vertex outside a facet halfspace by {slack.max():.3g}")
        for f in range(self.facet_count):
            ids = self.facet_vertex_ids(f)
            if len(ids) < n:
                bad.append(f"facet {f} has {len(ids)} incident vertices")
        if n == 3 and self.vertex_count >= 4:
            euler = self.vertex_count - self.edge_count + self.facet_count
            if euler != 2:
                bad.append(f"Euler relation V-E+F = {euler} != 2")
        return bad


def _unit_rows(W: np.ndarray, g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(W, axis=1)
    return W / norms[:, None], g / norms


def dedup_points(points: np.ndarray, tol: float) -> np.ndarray:
    """Greedy tolerance dedup; keeps the first point of each cluster."""
    pts = np.asarray(points, dtype=float)
    if len(pts) == 0:
        return pts
    kept = np.empty_like(pts)
    k = 0
    for p in pts:
        if k and np.min(np.linalg.norm(kept[:k] - p, axis=1)) <= tol:
            continue
        kept[k] = p
        k += 1
    return kept[:k].copy()


def build_incidence(
    normals: np.ndarray, offsets: np.ndarray, vertices: np.ndarray, tol: float
) -> np.ndarray:
    if len(normals) == 0 or len(vertices) == 0:
        return np.zeros((len(normals), len(vertices)), dtype=bool)
    return np.abs(normals @ vertices.T - offsets[:, None]) <= tol


def _affine_rank(points: np.ndarray, rel_tol: float = 1e-6) -> int:
    if len(points) <= 1:
        return 0
    centered = points - points.mean(axis=0)
    svals = np.linalg.svd(centered, compute_uv=False)
    if svals[0] == 0.0:
        return 0
    return int(np.sum(svals > rel_tol * svals[0]))


def _linear_rank(rows: np.ndarray, rel_tol: float = 1e-6) -> int:
    if len(rows) == 0:
        return 0
    svals = np.linalg.svd(rows, compute_uv=False)
    if svals[0] == 0.0:
        return 0
    return int(np.sum(svals > rel_tol * svals[0]))


def prune_representation(
    vertices: np.ndarray,
    normals: np.ndarray,
    offsets: np.ndarray,
    inc_tol: float,
    rank_tol: float = 1e-6,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Drop facets without a flush (n-1)-dimensional vertex set and vertices
    not pinned by n independent facet normals; iterate to a fixed point.

    Returns (vertices, normals, offsets, incidence).
    """
    n = vertices.shape[1]
    while True:
        inc = build_incidence(normals, offsets, vertices, inc_tol)
        keep_f = np.ones(len(normals), dtype=bool)
        for f in range(len(normals)):
            ids = np.nonzero(inc[f])[0]
            if len(ids) < n or _affine_rank(vertices[ids], rank_tol) < n - 1:
                keep_f[f] = False
        inc_f = inc[keep_f]
        normals_f = normals[keep_f]
        keep_v = np.ones(len(vertices), dtype=bool)
        for v in range(len(vertices)):
            if _linear_rank(normals_f[inc_f[:, v]], rank_tol) < n:
                keep_v[v] = False
        if keep_f.all() and keep_v.all():
            return vertices, normals, offsets, inc
        vertices = vertices[keep_v]
        normals = normals[keep_f]
        offsets = offsets[keep_f]
        if len(vertices) == 0 or len(normals) == 0:
            raise NumericalError("hull pruning removed everything")


def polygon_adjacency(vertices: np.ndarray) -> np.ndarray:
    """Adjacency of a convex polygon's vertices: consecutive in angular order."""
    V = len(vertices)
    adj = np.zeros((V, V), dtype=bool)
    if V < 2:
        return adj
    center = vertices.mean(axis=0)
    ang = np.arctan2(vertices[:, 1] - center[1], vertices[:, 0] - center[0])
    order = np.argsort(ang)
    for a, b in zip(order, np.roll(order, -1)):
        adj[a, b] = adj[b, a] = True
    return adj


def adjacency_from_incidence(
    normals: np.ndarray, incidence: np.ndarray, dimension: int, rank_tol: float = 1e-6
) -> np.ndarray:
    """Vertex pairs lying on n-1 independent common facets form edges."""
    F, V = incidence.shape
    adj = np.zeros((V, V), dtype=bool)
    common = incidence.T.astype(np.float32) @ incidence.astype(np.float32)
    need = dimension - 1
    ii, jj = np.nonzero(np.triu(common >= need - 0.5, 1))
    for a, b in zip(ii, jj):
        shared = incidence[:, a] & incidence[:, b]
        if _linear_rank(normals[shared], rank_tol) >= need:
            adj[a, b] = adj[b, a] = True
    return adj


def assemble_polytope(
    vertices: np.ndarray,
    normals: np.ndarray,
    offsets: np.ndarray,
    eps: float,
    inc_tol: float,
    rank_tol: float = 1e-6,
) -> PolytopeData:
    """Prune, then attach incidence and adjacency.  Normals must be unit."""
    vertices, normals, offsets, inc = prune_representation(
        vertices, normals, offsets, inc_tol, rank_tol
    )
    n = vertices.shape[1]
    if n == 2:
        adj = polygon_adjacency(vertices)
    else:
        adj = adjacency_from_incidence(normals, inc, n, rank_tol)
    return PolytopeData(
        dimension=n,
        vertices=vertices,
        facet_normals=normals,
        facet_offsets=offsets,
        incidence=inc,
        adjacency=adj,
        eps=eps,
    )


# -- vector LP formulation ------------------------------------------------------


@dataclass(frozen=True)
class MolpProblem:
    """min Mx over {Bx >= a}: the vector optimization problem whose upper
    image carries the hull (objectives = lifted coordinates, x = hull weights)."""

    M: np.ndarray
    B: np.ndarray
    a: np.ndarray


def hull_molp(points: np.ndarray) -> MolpProblem:
    pts = np.asarray(points, dtype=float)
    m, n = pts.shape
    lifted = np.hstack([pts, -pts.sum(axis=1, keepdims=True)])
    M = lifted.T  # (n+1) x m
    B = np.vstack([np.eye(m), np.ones((1, m)), -np.ones((1, m))])
    a = np.concatenate([np.zeros(m), [1.0, -1.0]])
    return MolpProblem(M=M, B=B, a=a)


# -- incremental vertex enumeration --------------------------------------------


class OuterApprox:
    """Pointed polyhedron {y : W y <= g} tracked in both representations.

    Generators are vertices and extreme rays with per-generator tight sets
    packed into uint64 words; adding a halfspace classifies generators by
    signed slack, removes cut-off ones, and creates crossings on edges found
    by the standard two-part adjacency test (shared tight count >= D-1, then
    no third generator's tight set contains the intersection).
    """

    def __init__(self, dimension: int, ztol: float = 1e-11):
        self.D = dimension
        self.ztol = ztol
        self._rows = 0
        self._hcount = 0
        cap, wcap = 64, 2
        self._coords = np.zeros((cap, dimension))
        self._is_vertex = np.zeros(cap, dtype=bool)
        self._alive = np.zeros(cap, dtype=bool)
        self._tight = np.zeros((cap, wcap), dtype=np.uint64)
        self._W = np.zeros((64, dimension))
        self._g = np.zeros(64)

    # construction ------------------------------------------------------------

    @classmethod
    def from_corner(cls, lower: np.ndarray, ztol: float = None) -> "OuterApprox":
        """The orthant corner {y >= lower}: one vertex, D axis rays."""
        lower = np.asarray(lower, dtype=float)
        D = len(lower)
        if ztol is None:
            ztol = 1e-11 * (1.0 + float(np.abs(lower).max()))
        approx = cls(D, ztol)
        for i in range(D):
            w = np.zeros(D)
            w[i] = -1.0
            approx._store_halfspace(w, -lower[i])
        approx._add_generator(lower, True, tight_ids=list(range(D)))
        for i in range(D):
            approx._add_generator(np.eye(D)[i], False, tight_ids=[j for j in range(D) if j != i])
        return approx

    @classmethod
    def from_box(cls, lower: np.ndarray, upper: np.ndarray, ztol: float = None) -> "OuterApprox":
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        D = len(lower)
        if np.any(upper <= lower):
            raise BadInputError("box must have positive extent")
        if ztol is None:
            ztol = 1e-11 * (1.0 + float(np.abs(np.concatenate([lower, upper])).max()))
        approx = cls(D, ztol)
        for i in range(D):
            w = np.zeros(D)
            w[i] = -1.0
            approx._store_halfspace(w, -lower[i])
        for i in range(D):
            w = np.zeros(D)
            w[i] = 1.0
            approx._store_halfspace(w, upper[i])
        for corner in range(2**D):
            y = np.array([upper[i] if corner >> i & 1 else lower[i] for i in range(D)])
            tight = [i + D if corner >> i & 1 else i for i in range(D)]
            approx._add_generator(y, True, tight_ids=tight)
        return approx

    def copy(self) -> "OuterApprox":
        other = OuterApprox(self.D, self.ztol)
        other._rows = self._rows
        other._hcount = self._hcount
        other._coords = self._coords.copy()
        other._is_vertex = self._is_vertex.copy()
        other._alive = self._alive.copy()
        other._tight = self._tight.copy()
        other._W = self._W.copy()
        other._g = self._g.copy()
        return other

    # views ---------------------------------------------------------------------

    def vertex_coords(self) -> np.ndarray:
        mask = self._alive[: self._rows] & self._is_vertex[: self._rows]
        return self._coords[: self._rows][mask].copy()

    def ray_coords(self) -> np.ndarray:
        mask = self._alive[: self._rows] & ~self._is_vertex[: self._rows]
        return self._coords[: self._rows][mask].copy()

    def vertex_row_ids(self) -> np.ndarray:
        mask = self._alive[: self._rows] & self._is_vertex[: self._rows]
        return np.nonzero(mask)[0]

    def halfspaces(self) -> Tuple[np.ndarray, np.ndarray]:
        return self._W[: self._hcount].copy(), self._g[: self._hcount].copy()

    def coords_of(self, row: int) -> np.ndarray:
        return self._coords[row].copy()

    # internals ------------------------------------------------------------------

    def _ensure_rows(self, extra: int):
        need = self._rows + extra
        cap = len(self._coords)
        if need <= cap:
            return
        new_cap = max(need, cap * 2)
        grow = new_cap - cap
        self._coords = np.vstack([self._coords, np.zeros((grow, self.D))])
        self._is_vertex = np.concatenate([self._is_vertex, np.zeros(grow, dtype=bool)])
        self._alive = np.concatenate([self._alive, np.zeros(grow, dtype=bool)])
        self._tight = np.vstack([self._tight, np.zeros((grow, self._tight.shape[1]), np.uint64)])

    def _ensure_hs(self, extra: int):
        need = self._hcount + extra
        if need > len(self._W):
            grow = max(need, len(self._W) * 2) - len(self._W)
            self._W = np.vstack([self._W, np.zeros((grow, self.D))])
            self._g = np.concatenate([self._g, np.zeros(grow)])
        words_needed = (need + 63) // 64
        if words_needed > self._tight.shape[1]:
            grow_w = max(words_needed, self._tight.shape[1] * 2) - self._tight.shape[1]
            self._tight = np.hstack(
                [self._tight, np.zeros((len(self._tight), grow_w), np.uint64)]
            )

    def _store_halfspace(self, w: np.ndarray, gamma: float) -> int:
        self._ensure_hs(1)
        h = self._hcount
        self._W[h] = w
        self._g[h] = gamma
        self._hcount += 1
        return h

    def _pack_ids(self, ids: Sequence[int]) -> np.ndarray:
        words = np.zeros(self._tight.shape[1], dtype=np.uint64)
        for i in ids:
            words[i // 64] |= np.uint64(1) << np.uint64(i % 64)
        return words

    def _tight_words_for(self, y: np.ndarray, is_vertex: bool) -> np.ndarray:
        vals = self._W[: self._hcount] @ y
        if is_vertex:
            vals = vals - self._g[: self._hcount]
        flags = np.abs(vals) <= self.ztol
        packed = np.packbits(flags, bitorder="little")
        words = np.zeros(self._tight.shape[1], dtype=np.uint64)
        chunk = packed[: self._tight.shape[1] * 8]
        buf = np.zeros(self._tight.shape[1] * 8, dtype=np.uint8)
        buf[: len(chunk)] = chunk
        words[:] = buf.view(np.uint64)
        return words

    def _add_generator(self, y, is_vertex, tight_ids=None, tight_words=None) -> int:
        self._ensure_rows(1)
        r = self._rows
        self._coords[r] = y
        self._is_vertex[r] = is_vertex
        self._alive[r] = True
        if tight_words is not None:
            self._tight[r] = tight_words
        else:
            self._tight[r] = self._pack_ids(tight_ids or [])
        self._rows += 1
        return r

    # the core update ----------------------------------------------------------

    def add_halfspace(self, w, gamma: float) -> dict:
        """Intersect with {y : w.y <= gamma} and restore the generator set.

        Returns a summary dict: applied, created, removed.
        """
        w = np.asarray(w, dtype=float)
        active = np.nonzero(self._alive[: self._rows])[0]
        coords = self._coords[active]
        vals = coords @ w - np.where(self._is_vertex[active], gamma, 0.0)
        pos = vals > self.ztol
        neg = vals < -self.ztol
        P_rows = active[pos]
        N_rows = active[neg]
        Z_rows = active[~pos & ~neg]

        if len(P_rows) == 0:
            if len(Z_rows) == 0:
                return {"applied": False, "created": 0, "removed": 0}
            # supporting hyperplane: record it and mark the touching generators
            h = self._store_halfspace(w, gamma)
            word, bit = h // 64, np.uint64(1) << np.uint64(h % 64)
            self._tight[Z_rows, word] |= bit
            return {"applied": True, "created": 0, "removed": 0}

        h = self._store_halfspace(w, gamma)
        word, bit = h // 64, np.uint64(1) << np.uint64(h % 64)
        self._tight[Z_rows, word] |= bit

        val_of = dict(zip(active.tolist(), vals.tolist()))
        tight_alive = self._tight[active]
        need = self.D - 1
        created = 0
        new_gens = []
        for p in P_rows:
            Tp = self._tight[p]
            if len(N_rows) == 0:
                break
            commons = tight_alive[np.searchsorted(active, N_rows)] & Tp
            counts = np.bitwise_count(commons).sum(axis=1)
            for q, T in zip(N_rows[counts >= need], commons[counts >= need]):
                containing = np.all((tight_alive & T) == T, axis=1)
                if int(containing.sum()) != 2:
                    continue
                sp, sq = val_of[int(p)], val_of[int(q)]
                pv, qv = self._is_vertex[p], self._is_vertex[q]
                if pv and qv:
                    lam = -sq / (sp - sq)
                    y = lam * self._coords[p] + (1 - lam) * self._coords[q]
                    new_is_vertex = True
                elif pv and not qv:
                    t = sp / (-sq)
                    y = self._coords[p] + t * self._coords[q]
                    new_is_vertex = True
                elif not pv and qv:
                    t = -sq / sp
                    y = self._coords[q] + t * self._coords[p]
                    new_is_vertex = True
                else:
                    y = sp * self._coords[q] - sq * self._coords[p]
                    y = y / np.linalg.norm(y)
                    new_is_vertex = False
                new_gens.append((y, new_is_vertex))
                created += 1

        self._alive[P_rows] = False
        for y, is_v in new_gens:
            words = self._tight_words_for(y, is_v)
            words[word] |= bit
            self._add_generator(y, is_v, tight_words=words)
        return {"applied": True, "created": created, "removed": int(len(P_rows))}


def incremental_vertex_enumeration(
    approx: OuterApprox, normal, offset: float, flat_eps: Optional[float] = None
) -> dict:
    """Add one halfspace to the approximation in place.

    With flat_eps set, a halfspace within flat_eps (componentwise, in the
    stored normalization) of an existing one is skipped and reported flat.
    """
    normal = np.asarray(normal, dtype=float)
    if flat_eps is not None and approx._hcount > 0:
        W, g = approx._W[: approx._hcount], approx._g[: approx._hcount]
        close = np.max(np.abs(W - normal), axis=1) <= flat_eps
        close &= np.abs(g - offset) <= flat_eps * (1.0 + np.abs(g))
        if np.any(close):
            return {"applied": False, "flat": True, "created": 0, "removed": 0}
    info = approx.add_halfspace(normal, float(offset))
    info["flat"] = False
    return info


# -- the boundary probe LP ------------------------------------------------------


class _DirectionProbe:
    """min t such that p + t*ones lies in the lifted hull body.

    Standard form over weights lam (one per lifted point), split t, and D
    surplus variables; only the right-hand side changes between probes, so
    the previous optimal basis warm-starts a dual simplex re-solve.
    """

    def __init__(self, lifted: np.ndarray):
        m, D = lifted.shape
        self.D = D
        A = np.zeros((D + 1, m + 2 + D))
        A[:D, :m] = lifted.T
        A[:D, m] = -1.0
        A[:D, m + 1] = 1.0
        A[:D, m + 2 :] = np.eye(D)
        A[D, :m] = 1.0
        self.A = A
        c = np.zeros(m + 2 + D)
        c[m] = 1.0
        c[m + 1] = -1.0
        self.c = c
        self.basis: Optional[List[int]] = None
        self.lifted = lifted

    def probe(self, p: np.ndarray) -> Tuple[float, np.ndarray, float]:
        """Returns (t_star, mu, nu) with the cut mu.y >= nu valid for the body."""
        b = np.concatenate([p, [1.0]])
        if self.basis is None:
            sol = solve_standard(self.A, b, self.c)
        else:
            sol = resolve_rhs(self.A, b, self.c, self.basis)
        self.basis = sol.basis
        mu = np.maximum(-sol.duals[: self.D], 0.0)
        s = mu.sum()
        if s <= 0:
            raise NumericalError("degenerate probe duals")
        mu /= s
        # exact support offset over the lifted points, so the cut is valid
        # regardless of dual drift
        nu = float((self.lifted @ mu).min())
        t_star = nu - float(mu @ p)
        return t_star, mu, nu


# -- driver ----------------------------------------------------------------------


def convex_hull_molp(
    points,
    eps: float = 1e-9,
    *,
    on_iteration: Optional[Callable[[int, OuterApprox, float], None]] = None,
    inc_tol: Optional[float] = None,
    snap_tol: Optional[float] = None,
    merge_tol: Optional[float] = None,
    dedup_tol: float = 1e-12,
    rank_tol: float = 1e-6,
    max_iterations: Optional[int] = None,
) -> PolytopeData:
    """Convex hull of the points to tolerance eps.

    Input must affinely span R^n (reduce to the span first otherwise).  The
    returned representation is irredundant: facets are flush supporting
    hyperplanes, vertices are extreme.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise BadInputError("points must be a 2d array")
    pts = dedup_points(pts, dedup_tol)
    m, n = pts.shape
    if n < 2:
        raise BadInputError("need dimension >= 2")
    if m < n + 1:
        raise BadInputError("need at least n+1 points")
    if _affine_rank(pts, 1e-9) < n:
        raise DegenerateSpanError("points do not affinely span the space")

    lifted = np.hstack([pts, -pts.sum(axis=1, keepdims=True)])
    D = n + 1
    scale = 1.0 + float(np.abs(lifted).max())
    approx = OuterApprox.from_corner(lifted.min(axis=0), ztol=1e-11 * scale)
    probe = _DirectionProbe(lifted)

    # t* of a vertex depends only on the body, not on the approximation, so
    # each probe is done once and queued; dead or treated rows are skipped
    # lazily when popped
    t_cache: dict = {}
    treated: set = set()
    heap: list = []
    scanned = 0
    limit = max_iterations if max_iterations is not None else 40 * m + 1000
    iteration = 0
    while iteration < limit:
        iteration += 1
        while scanned < approx._rows:
            r = scanned
            scanned += 1
            if approx._alive[r] and approx._is_vertex[r]:
                t, mu, nu = probe.probe(approx.coords_of(r))
                t_cache[r] = (t, mu, nu)
                heapq.heappush(heap, (-t, r))
        while heap and (not approx._alive[heap[0][1]] or heap[0][1] in treated):
            heapq.heappop(heap)
        if not heap or -heap[0][0] < eps:
            break
        best_t, best_row = -heap[0][0], heap[0][1]
        _, mu, nu = t_cache[best_row]
        treated.add(best_row)
        incremental_vertex_enumeration(approx, -mu, -nu, flat_eps=eps)
        if on_iteration is not None:
            on_iteration(iteration, approx, best_t)
    else:
        raise NumericalError("hull refinement did not converge")

    return _extract_hull(
        pts,
        approx,
        eps,
        scale,
        inc_tol=inc_tol,
        snap_tol=snap_tol,
        merge_tol=merge_tol,
        rank_tol=rank_tol,
    )


def _extract_hull(
    pts: np.ndarray,
    approx: OuterApprox,
    eps: float,
    scale: float,
    *,
    inc_tol: Optional[float],
    snap_tol: Optional[float],
    merge_tol: Optional[float],
    rank_tol: float,
) -> PolytopeData:
    """Slice the refined approximation back down to hull data in R^n."""
    m, n = pts.shape
    if inc_tol is None:
        inc_tol = max(1e3 * eps, 1e-10) * scale
    if snap_tol is None:
        snap_tol = max(1e4 * eps, 1e-7) * scale
    if merge_tol is None:
        merge_tol = max(10 * eps, 1e-10) * scale

    Y = approx.vertex_coords()
    raw = Y[:, :n]
    # snap each projected vertex to the nearest input point when close enough;
    # true hull vertices are input points, so this removes the eps-level noise
    snapped = raw.copy()
    for i, q in enumerate(raw):
        d = np.linalg.norm(pts - q, axis=1)
        j = int(np.argmin(d))
        if d[j] <= snap_tol:
            snapped[i] = pts[j]
    verts = dedup_points(np.unique(snapped, axis=0), max(10 * eps, 1e-12) * scale)

    W, g = approx.halfspaces()
    mu = -W
    nu = -g
    w_hull = mu[:, n : n + 1] * np.ones((1, n)) - mu[:, :n]
    g_hull = -nu
    norms = np.linalg.norm(w_hull, axis=1)
    keep = norms > 1e-6
    w_hull, g_hull = _unit_rows(w_hull[keep], g_hull[keep])

    # merge near-duplicate facet planes
    rows = np.hstack([w_hull, g_hull[:, None]])
    kept_ids: List[int] = []
    for i in range(len(rows)):
        if kept_ids and np.min(np.abs(rows[kept_ids] - rows[i]).max(axis=1)) <= merge_tol:
            continue
        kept_ids.append(i)
    w_hull, g_hull = w_hull[kept_ids], g_hull[kept_ids]

    return assemble_polytope(verts, w_hull, g_hull, eps, inc_tol, rank_tol)
