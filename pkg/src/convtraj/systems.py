"""Polynomial dynamical systems and the constructions that produce them.

Covers Hamiltonian fields in the plane, fields tangent to algebraic curves
given by cutting equations (signed Jacobian minors), mass-action fields of
reaction networks via the weighted digraph Laplacian, kinetic realizability
tests, and finite trigonometric curves used for parametric sampling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import BadInputError
from .poly import Polynomial

Violation = Tuple[int, Tuple[int, ...], float]


@dataclass(frozen=True)
class VectorField:
    """Polynomial vector field x' = phi(x) on R^dimension."""

    dimension: int
    components: Tuple[Polynomial, ...]

    def __post_init__(self):
        if len(self.components) != self.dimension:
            raise BadInputError("component count must equal dimension")
        for p in self.components:
            if p.dimension != self.dimension:
                raise BadInputError("component dimension mismatch")

    def __call__(self, x: Sequence[float]) -> np.ndarray:
        return np.array([p.evaluate(x) for p in self.components])

    def eval_many(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return np.column_stack([p.eval_many(X) for p in self.components])

    def max_degree(self) -> int:
        return max(p.total_degree() for p in self.components)


def field_from_polynomials(components: Sequence[Polynomial]) -> VectorField:
    return VectorField(len(components), tuple(components))


def hamiltonian_field(h: Polynomial) -> VectorField:
    """Planar field (dh/dy, -dh/dx); its orbits follow level sets of h."""
    if h.dimension != 2:
        raise BadInputError("Hamiltonian construction needs a 2-variable polynomial")
    return VectorField(2, (h.partial_derivative(1), -h.partial_derivative(0)))


def _poly_det(M: List[List[Polynomial]]) -> Polynomial:
    n = len(M)
    if n == 1:
        return M[0][0]
    dim = M[0][0].dimension
    out = Polynomial.zero(dim)
    for j in range(n):
        minor = [[M[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = M[0][j] * _poly_det(minor)
        out = out + (term if j % 2 == 0 else -term)
    return out


def jacobian_minor_field(cutting: Sequence[Polynomial]) -> VectorField:
    """Field tangent to the common zero set of n-1 cutting polynomials.

    Component i is (-1)^(i+1) times the Jacobian of the cutting equations with
    column i removed, so grad(f_j) . phi = 0 for every j.
    """
    if not cutting:
        raise BadInputError("need at least one cutting polynomial")
    n = cutting[0].dimension
    if len(cutting) != n - 1:
        raise BadInputError(f"need exactly {n - 1} cutting polynomials in dimension {n}")
    for f in cutting:
        if f.dimension != n:
            raise BadInputError("cutting polynomial dimension mismatch")
    J = [[f.partial_derivative(j) for j in range(n)] for f in cutting]
    comps = []
    for i in range(n):
        minor = [[row[j] for j in range(n) if j != i] for row in J]
        det = _poly_det(minor)
        comps.append(det if i % 2 == 0 else -det)
    return VectorField(n, tuple(comps))


def linear_field(A: np.ndarray) -> VectorField:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise BadInputError("linear field needs a square matrix")
    n = A.shape[0]
    comps = []
    for i in range(n):
        coeffs = {}
        for j in range(n):
            if A[i, j] != 0.0:
                e = [0] * n
                e[j] = 1
                coeffs[tuple(e)] = float(A[i, j])
        comps.append(Polynomial(n, coeffs))
    return VectorField(n, tuple(comps))


# -- reaction networks -------------------------------------------------------


@dataclass(frozen=True)
class ReactionNetwork:
    """Mass-action network: complexes are nonnegative integer vectors over the
    species, edges are directed reactions (source, target, rate)."""

    species_count: int
    complexes: Tuple[Tuple[int, ...], ...]
    edges: Tuple[Tuple[int, int, float], ...]

    def __post_init__(self):
        seen = set()
        for a in self.complexes:
            if len(a) != self.species_count or any(k < 0 for k in a):
                raise BadInputError(f"bad complex {a}")
            if a in seen:
                raise BadInputError(f"duplicate complex {a}")
            seen.add(a)
        m = len(self.complexes)
        for i, j, rate in self.edges:
            if not (0 <= i < m and 0 <= j < m) or i == j:
                raise BadInputError(f"bad edge ({i}, {j})")
            if rate <= 0:
                raise BadInputError(f"edge ({i}, {j}) must have a positive rate")


def laplacian(net: ReactionNetwork) -> np.ndarray:
    """Weighted digraph Laplacian: entry (i, j) is the rate of edge i->j and
    each diagonal entry makes its row sum to zero."""
    m = len(net.complexes)
    L = np.zeros((m, m))
    for i, j, rate in net.edges:
        L[i, j] += rate
        L[i, i] -= rate
    return L


def crn_field(net: ReactionNetwork) -> VectorField:
    """Mass-action field (x^a_1, ..., x^a_m) . Lambda . (a_1; ...; a_m)."""
    n = net.species_count
    L = laplacian(net)
    m = len(net.complexes)
    monomials = [Polynomial.monomial(a, 1.0) for a in net.complexes]
    comps = [Polynomial.zero(n) for _ in range(n)]
    for i in range(m):
        for j in range(m):
            w = L[i, j]
            if w == 0.0:
                continue
            for s in range(n):
                if net.complexes[j][s]:
                    comps[s] = comps[s] + (w * net.complexes[j][s]) * monomials[i]
    return VectorField(n, tuple(comps))


def weakly_reversible(net: ReactionNetwork) -> bool:
    """True when every weakly connected component of the reaction digraph is
    strongly connected (every edge lies on a directed cycle)."""
    m = len(net.complexes)
    fwd: Dict[int, List[int]] = {i: [] for i in range(m)}
    bwd: Dict[int, List[int]] = {i: [] for i in range(m)}
    und: Dict[int, List[int]] = {i: [] for i in range(m)}
    for i, j, _ in net.edges:
        fwd[i].append(j)
        bwd[j].append(i)
        und[i].append(j)
        und[j].append(i)

    def reach(start: int, adj: Dict[int, List[int]]) -> set:
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    visited = set()
    for i in range(m):
        if i in visited:
            continue
        comp = reach(i, und)
        visited |= comp
        if len(comp) == 1:
            continue  # isolated complex, no edges to check
        if reach(i, fwd) & comp != comp or reach(i, bwd) & comp != comp:
            return False
    return True


# -- kinetic realizability ---------------------------------------------------


def hars_toth_realizable(phi: VectorField) -> Tuple[bool, List[Violation]]:
    """Check the mass-action realizability criterion: every monomial of
    phi_i with a negative coefficient must be divisible by x_i.

    Returns (verdict, violations) where each violation is
    (component index, exponent tuple, coefficient).
    """
    violations: List[Violation] = []
    for i, p in enumerate(phi.components):
        for e in sorted(p.coeffs):
            c = p.coeffs[e]
            if c < 0 and e[i] == 0:
                violations.append((i, e, c))
    return (not violations, violations)


def hamiltonian_realizable(h: Polynomial) -> Tuple[bool, List[Violation]]:
    """Check whether the Hamiltonian field of h is mass-action realizable:
    h must be of the form x y a(x, y) - b(x) + c(y) with b, c having
    nonnegative coefficients.  Mixed terms are unconstrained; pure powers of x
    (the constant term counts as one) need coefficient <= 0 and pure powers of
    y need coefficient >= 0."""
    if h.dimension != 2:
        raise BadInputError("needs a 2-variable polynomial")
    violations: List[Violation] = []
    for e in sorted(h.coeffs):
        c = h.coeffs[e]
        ex, ey = e
        if ex > 0 and ey > 0:
            continue
        if ey == 0:  # pure power of x, including the constant term
            if c > 0:
                violations.append((0, e, c))
        else:  # pure power of y
            if c < 0:
                violations.append((1, e, c))
    return (not violations, violations)


# -- trigonometric curves ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class TrigCurve:
    """Finite trigonometric curve x_j(t) = sum_k A[j,k] cos(2 pi k t)
    + B[j,k] sin(2 pi k t) + C[j], periodic with period 1."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        B = np.atleast_2d(np.asarray(self.B, dtype=float))
        C = np.atleast_1d(np.asarray(self.C, dtype=float))
        if A.shape != B.shape or C.shape != (A.shape[0],):
            raise BadInputError("trig curve coefficient shapes are inconsistent")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def dimension(self) -> int:
        return self.A.shape[0]

    @property
    def degree(self) -> int:
        return self.A.shape[1]


def trig_point(curve: TrigCurve, t: float) -> np.ndarray:
    return trig_points(curve, np.array([float(t)]))[0]


def trig_points(curve: TrigCurve, ts: np.ndarray) -> np.ndarray:
    """Evaluate the curve at parameters ts (taken modulo 1)."""
    ts = np.asarray(ts, dtype=float) % 1.0
    k = np.arange(1, curve.degree + 1)
    ang = 2.0 * np.pi * ts[:, None] * k[None, :]
    return np.cos(ang) @ curve.A.T + np.sin(ang) @ curve.B.T + curve.C[None, :]


# -- network text format -----------------------------------------------------
#
#   species <n>
#   complex <i>: e1 e2 ... en
#   edge <i> <j> <rate>
#
# Complex ids are 1-based in the file and 0-based in ReactionNetwork.


def parse_network(text: str) -> ReactionNetwork:
    species = None
    complexes: Dict[int, Tuple[int, ...]] = {}
    edges: List[Tuple[int, int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "species":
                species = int(parts[1])
            elif parts[0] == "complex":
                if species is None:
                    raise BadInputError("species line must come first")
                idx = int(parts[1].rstrip(":"))
                vec = tuple(int(v) for v in parts[2:])
                if len(vec) != species:
                    raise BadInputError(f"complex {idx} has {len(vec)} entries, expected {species}")
                complexes[idx] = vec
            elif parts[0] == "edge":
                edges.append((int(parts[1]) - 1, int(parts[2]) - 1, float(parts[3])))
            else:
                raise BadInputError(f"unknown directive {parts[0]!r}")
        except (ValueError, IndexError) as exc:
            raise BadInputError(f"network line {lineno}: cannot parse {raw!r}") from exc
    if species is None or not complexes:
        raise BadInputError("network needs a species line and at least one complex")
    ids = sorted(complexes)
    if ids != list(range(1, len(ids) + 1)):
        raise BadInputError("complex ids must be 1..m without gaps")
    return ReactionNetwork(
        species_count=species,
        complexes=tuple(complexes[i] for i in ids),
        edges=tuple(edges),
    )


def network_to_text(net: ReactionNetwork) -> str:
    lines = [f"species {net.species_count}"]
    for i, a in enumerate(net.complexes, start=1):
        lines.append(f"complex {i}: " + " ".join(str(v) for v in a))
    for i, j, rate in net.edges:
        lines.append(f"edge {i + 1} {j + 1} {rate:.17g}")
    return "\n".join(lines) + "\n"
