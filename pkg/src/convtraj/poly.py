"""Sparse multivariate polynomials with double precision coefficients.

A polynomial is a mapping from exponent tuples to coefficients.  Coefficients
with magnitude below COEFF_PRUNE_TOL are dropped after every arithmetic
operation, so "zero" always means an empty term dictionary.  Evaluation sums
terms in a fixed lexicographic order with compensated summation, which makes
results reproducible across runs.

Also provides dense univariate polynomials and real root isolation on an
interval (sign-change subdivision on monotone pieces, with even-multiplicity
touch points recovered from the derivative chain).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BadInputError, DegenerateSpanError, IdenticallyZeroError

COEFF_PRUNE_TOL = 1e-14
DEFAULT_ROOT_TOL = 1e-12

Exponent = Tuple[int, ...]


@dataclass(frozen=True)
class Term:
    exponents: Exponent
    coefficient: float


def _prune(coeffs: Dict[Exponent, float]) -> Dict[Exponent, float]:
    return {e: float(c) for e, c in coeffs.items() if abs(c) >= COEFF_PRUNE_TOL}


class Polynomial:
    """Sparse polynomial in `dimension` variables."""

    __slots__ = ("dimension", "coeffs", "_arrays")

    def __init__(self, dimension: int, coeffs: Optional[Dict[Exponent, float]] = None):
        if dimension < 1:
            raise BadInputError("polynomial dimension must be >= 1")
        self.dimension = int(dimension)
        cleaned: Dict[Exponent, float] = {}
        for e, c in (coeffs or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != dimension or any(k < 0 for k in e):
                raise BadInputError(f"bad exponent tuple {e} for dimension {dimension}")
            cleaned[e] = cleaned.get(e, 0.0) + float(c)
        object.__setattr__(self, "coeffs", _prune(cleaned))
        object.__setattr__(self, "_arrays", None)

    def __setattr__(self, name, value):  # immutable after construction
        if name in ("dimension", "coeffs") and hasattr(self, "coeffs"):
            raise AttributeError("Polynomial is immutable")
        object.__setattr__(self, name, value)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dimension: int) -> "Polynomial":
        return cls(dimension, {})

    @classmethod
    def constant(cls, dimension: int, value: float) -> "Polynomial":
        return cls(dimension, {tuple([0] * dimension): float(value)})

    @classmethod
    def variable(cls, dimension: int, index: int) -> "Polynomial":
        if not 0 <= index < dimension:
            raise BadInputError(f"variable index {index} out of range for dimension {dimension}")
        e = [0] * dimension
        e[index] = 1
        return cls(dimension, {tuple(e): 1.0})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coefficient: float = 1.0) -> "Polynomial":
        return cls(len(exponents), {tuple(exponents): coefficient})

    # -- basic queries -----------------------------------------------------

    def terms(self) -> List[Term]:
        return [Term(e, self.coeffs[e]) for e in sorted(self.coeffs)]

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def total_degree(self) -> int:
        if not self.coeffs:
            return 0
        return max(sum(e) for e in self.coeffs)

    def max_abs_coeff(self) -> float:
        if not self.coeffs:
            return 0.0
        return max(abs(c) for c in self.coeffs.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.dimension == other.dimension
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.dimension, tuple(sorted(self.coeffs.items()))))

    def allclose(self, other: "Polynomial", tol: float = 1e-9) -> bool:
        if self.dimension != other.dimension:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(abs(self.coeffs.get(e, 0.0) - other.coeffs.get(e, 0.0)) <= tol for e in keys)

    # -- arithmetic --------------------------------------------------------

    def _check_same(self, other: "Polynomial"):
        if self.dimension != other.dimension:
            raise BadInputError("polynomial dimensions differ")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(self.dimension, other)
        self._check_same(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0.0) + c
        return Polynomial(self.dimension, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.dimension, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(self.dimension, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Polynomial(self.dimension, {e: c * other for e, c in self.coeffs.items()})
        self._check_same(other)
        out: Dict[Exponent, float] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0.0) + c1 * c2
        return Polynomial(self.dimension, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise BadInputError("negative polynomial power")
        result = Polynomial.constant(self.dimension, 1.0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- calculus ----------------------------------------------------------

    def partial_derivative(self, index: int) -> "Polynomial":
        """Derivative with respect to variable `index` (0-based)."""
        if not 0 <= index < self.dimension:
            raise BadInputError(f"variable index {index} out of range")
        out: Dict[Exponent, float] = {}
        for e, c in self.coeffs.items():
            k = e[index]
            if k == 0:
                continue
            e2 = list(e)
            e2[index] = k - 1
            out[tuple(e2)] = out.get(tuple(e2), 0.0) + c * k
        return Polynomial(self.dimension, out)

    def gradient(self) -> List["Polynomial"]:
        return [self.partial_derivative(i) for i in range(self.dimension)]

    # -- evaluation --------------------------------------------------------

    def evaluate(self, x: Sequence[float]) -> float:
        """Evaluate at a point; term order is fixed (lexicographic) and the
        sum is compensated, so the result does not depend on dict history."""
        if len(x) != self.dimension:
            raise BadInputError("point dimension mismatch")
        vals = []
        for e in sorted(self.coeffs):
            v = self.coeffs[e]
            for xi, k in zip(x, e):
                if k:
                    v *= xi ** k
            vals.append(v)
        return math.fsum(vals)

    def _get_arrays(self):
        cached = self._arrays
        if cached is None:
            exps = sorted(self.coeffs)
            E = np.array(exps, dtype=np.int64).reshape(len(exps), self.dimension)
            c = np.array([self.coeffs[e] for e in exps], dtype=float)
            cached = (E, c)
            object.__setattr__(self, "_arrays", cached)
        return cached

    def eval_many(self, X: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an (m, dimension) array of points."""
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        if single:
            X = X[None, :]
        if not self.coeffs:
            out = np.zeros(X.shape[0])
            return out[0] if single else out
        E, c = self._get_arrays()
        powers = X[:, None, :] ** E[None, :, :]
        out = powers.prod(axis=2) @ c
        return out[0] if single else out

    # -- substitution ------------------------------------------------------

    def compose_affine(self, A: np.ndarray, b: np.ndarray) -> "Polynomial":
        """Return q(y) = p(A y + b) where A is (dimension, r)."""
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float)
        if A.shape[0] != self.dimension or b.shape != (self.dimension,):
            raise BadInputError("affine substitution shape mismatch")
        r = A.shape[1]
        lin: List[Polynomial] = []
        for i in range(self.dimension):
            coeffs: Dict[Exponent, float] = {tuple([0] * r): float(b[i])}
            for j in range(r):
                e = [0] * r
                e[j] = 1
                coeffs[tuple(e)] = float(A[i, j])
            lin.append(Polynomial(r, coeffs))
        power_cache: List[Dict[int, Polynomial]] = [
            {0: Polynomial.constant(r, 1.0)} for _ in range(self.dimension)
        ]

        def power(i: int, k: int) -> Polynomial:
            cache = power_cache[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * lin[i]
            return cache[k]

        out = Polynomial.zero(r)
        for e, c in sorted(self.coeffs.items()):
            term = Polynomial.constant(r, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def restrict_to_simplex(self, vertices: Sequence[Sequence[float]]) -> "Polynomial":
        """Restrict to the simplex spanned by k+1 affinely independent points.

        The result is a polynomial in barycentric coordinates lam_1..lam_k,
        with lam_0 = 1 - sum(lam_j) substituted, i.e. the restriction of p to
        u(lam) = u_0 + sum_j lam_j (u_j - u_0).
        """
        V = np.asarray(vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != self.dimension or V.shape[0] < 2:
            raise BadInputError("simplex vertices must be a (k+1, n) array with k >= 1")
        diffs = V[1:] - V[0]
        scale = max(1.0, float(np.abs(V).max()))
        if np.linalg.matrix_rank(diffs, tol=1e-12 * scale) < diffs.shape[0]:
            raise DegenerateSpanError("simplex vertices are affinely dependent")
        return self.compose_affine(diffs.T, V[0])

    def to_univariate(self) -> "UnivariatePolynomial":
        if self.dimension != 1:
            raise BadInputError("only 1-variable polynomials convert to univariate form")
        deg = self.total_degree()
        c = np.zeros(deg + 1)
        for e, v in self.coeffs.items():
            c[e[0]] = v
        return UnivariatePolynomial(c)

    # -- text form ---------------------------------------------------------

    def to_text(self) -> str:
        return polynomial_to_text(self)

    def __repr__(self):
        return f"Polynomial({self.dimension}, {self.to_text()!r})"


# -- text syntax -----------------------------------------------------------
#
# Terms look like `coef * x1^e1 x2^e2` and are joined by + and -.  The
# coefficient and the `*` are optional, exponent 1 may be omitted, and for up
# to four variables the aliases x, y, z, w stand for x1..x4.

_ALIASES = {"x": 1, "y": 2, "z": 3, "w": 4}
_VAR_RE = re.compile(r"(x\d+|[xyzw])(?:\^(\d+))?")
_COEF_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


def parse_polynomial(text: str, dimension: Optional[int] = None) -> Polynomial:
    """Parse the textual polynomial syntax; dimension is inferred if omitted."""
    s = text.strip()
    if not s:
        raise BadInputError("empty polynomial text")
    # protect exponents of scientific notation before splitting on signs
    s = re.sub(r"([eE])\+", r"\1#P", s)
    s = re.sub(r"([eE])-", r"\1#M", s)
    s = s.replace("-", "+-").replace(" ", "")
    chunks = [c for c in s.split("+") if c]
    parsed: List[Tuple[float, Dict[int, int]]] = []
    max_var = 0
    for chunk in chunks:
        chunk = chunk.replace("e#P", "e+").replace("E#P", "E+")
        chunk = chunk.replace("e#M", "e-").replace("E#M", "E-")
        sign = 1.0
        if chunk.startswith("-"):
            sign = -1.0
            chunk = chunk[1:]
        m = _COEF_RE.match(chunk)
        if m and m.group(0):
            coef = float(m.group(0))
            rest = chunk[m.end():]
        else:
            coef = 1.0
            rest = chunk
        rest = rest.lstrip("*")
        exps: Dict[int, int] = {}
        pos = 0
        while pos < len(rest):
            vm = _VAR_RE.match(rest, pos)
            if not vm:
                raise BadInputError(f"cannot parse polynomial term {chunk!r}")
            name = vm.group(1)
            var = _ALIASES[name] if name in _ALIASES else int(name[1:])
            if var < 1:
                raise BadInputError(f"bad variable {name!r}")
            exp = int(vm.group(2)) if vm.group(2) else 1
            exps[var] = exps.get(var, 0) + exp
            max_var = max(max_var, var)
            pos = vm.end()
            if pos < len(rest) and rest[pos] == "*":
                pos += 1
        parsed.append((sign * coef, exps))
    n = dimension if dimension is not None else max(max_var, 1)
    if max_var > n:
        raise BadInputError(f"polynomial uses x{max_var} but dimension is {n}")
    coeffs: Dict[Exponent, float] = {}
    for coef, exps in parsed:
        e = tuple(exps.get(i + 1, 0) for i in range(n))
        coeffs[e] = coeffs.get(e, 0.0) + coef
    return Polynomial(n, coeffs)


def _format_coef(c: float) -> str:
    if c == int(c) and abs(c) < 1e15:
        return str(int(c))
    return repr(c)


def polynomial_to_text(p: Polynomial) -> str:
    if not p.coeffs:
        return "0"
    keys = sorted(p.coeffs, key=lambda e: (-sum(e), tuple(-k for k in e)))
    parts = []
    for e in keys:
        c = p.coeffs[e]
        vars_txt = " ".join(
            f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k > 0
        )
        mag = _format_coef(abs(c))
        if vars_txt:
            body = vars_txt if mag == "1" else f"{mag}*{vars_txt}"
        else:
            body = mag
        parts.append(("- " if c < 0 else "+ ") + body)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]


# -- univariate polynomials and root isolation ------------------------------


class UnivariatePolynomial:
    """Dense univariate polynomial, coefficients in ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[float]):
        c = np.atleast_1d(np.asarray(list(coeffs), dtype=float))
        scale = np.abs(c).max() if c.size else 0.0
        if scale > 0.0:
            nz = np.nonzero(np.abs(c) > COEFF_PRUNE_TOL * scale)[0]
            c = c[: nz[-1] + 1] if nz.size else np.zeros(1)
        else:
            c = np.zeros(1)
        self.coeffs = c

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs) <= tol))

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in self.coeffs[::-1]:
            acc = acc * x + c
        return acc

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        acc = np.zeros_like(xs)
        for c in self.coeffs[::-1]:
            acc = acc * xs + c
        return acc

    def derivative(self) -> "UnivariatePolynomial":
        if self.degree == 0:
            return UnivariatePolynomial([0.0])
        k = np.arange(1, len(self.coeffs))
        return UnivariatePolynomial(self.coeffs[1:] * k)

    def max_abs_coeff(self) -> float:
        return float(np.abs(self.coeffs).max())

    def __repr__(self):
        return f"UnivariatePolynomial({list(self.coeffs)})"


@dataclass(frozen=True)
class RootInfo:
    x: float
    sign_change: bool  # False marks an even-multiplicity touch point


_MAX_BISECT_DEPTH = 60


def _bisect_root(q: UnivariatePolynomial, lo: float, hi: float, flo: float, tol: float) -> float:
    for _ in range(_MAX_BISECT_DEPTH):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fmid = q(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def real_roots_in_interval(
    q: UnivariatePolynomial,
    a: float,
    b: float,
    tol: float = DEFAULT_ROOT_TOL,
    zero_tol: Optional[float] = None,
) -> List[RootInfo]:
    """Isolate the real roots of q on the open interval (a, b).

    Critical points of q split (a, b) into monotone pieces; a sign change on a
    piece is refined by bisection, and a critical point where |q| is tiny is
    reported as an even-multiplicity touch (sign_change=False).  Roots closer
    than tol are merged.  Raises IdenticallyZeroError for the zero polynomial.
    """
    if not (b > a):
        raise BadInputError("empty interval for root isolation")
    if q.is_zero(tol=0.0):
        raise IdenticallyZeroError("cannot isolate roots of the zero polynomial")
    if zero_tol is None:
        zero_tol = 1e-10 * max(1.0, q.max_abs_coeff())
    if q.degree == 0:
        return []

    crit: List[float] = []
    if q.degree >= 2:
        dq = q.derivative()
        if not dq.is_zero(tol=0.0):
            try:
                crit = [r.x for r in real_roots_in_interval(dq, a, b, tol=tol, zero_tol=None)]
            except IdenticallyZeroError:
                crit = []
    knots = [a] + sorted(crit) + [b]

    roots: List[RootInfo] = []

    def push(x: float, flips: bool):
        for i, r in enumerate(roots):
            if abs(r.x - x) <= tol:
                if flips and not r.sign_change:
                    roots[i] = RootInfo(r.x, True)
                return
        roots.append(RootInfo(x, flips))

    for lo, hi in zip(knots[:-1], knots[1:]):
        if hi - lo <= tol:
            continue
        flo, fhi = q(lo), q(hi)
        if flo == 0.0 and lo > a:
            push(lo, True)
        if (flo > 0) != (fhi > 0) and flo != 0.0 and fhi != 0.0:
            push(_bisect_root(q, lo, hi, flo, tol), True)
        elif flo == 0.0 and fhi != 0.0 and lo > a:
            pass  # handled by push above
    for c in crit:
        if a < c < b and abs(q(c)) <= zero_tol:
            push(c, False)
    # open interval: endpoints themselves are not reported
    roots = [r for r in roots if a + tol < r.x < b - tol]
    roots.sort(key=lambda r: r.x)
    merged: List[RootInfo] = []
    for r in roots:
        if merged and abs(merged[-1].x - r.x) <= tol:
            if r.sign_change and not merged[-1].sign_change:
                merged[-1] = RootInfo(merged[-1].x, True)
        else:
            merged.append(r)
    return merged
