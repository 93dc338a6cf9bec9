"""Lattice polytopes in halfspace form, Riemann sums and Euler-Maclaurin corrections.

A polytope is ``{x : <u_i, x> <= c_i}`` with primitive integer normals.  The
corrected sum applies ``prod_i w_i / (1 - exp(-w_i))`` with ``w_i -> N^-1 d/dh_i``
to ``F(h) = int_{P_h} f``, where ``P_h`` moves facet ``i`` out by ``h_i``.

Two routes compute the facet derivatives of ``F``:

* polynomial ``f`` on a simple polytope: every vertex is an affine function
  of ``h``, so ``F`` is built as an exact polynomial in ``h`` and the
  derivatives are read off its coefficients;
* anything else: 4th-order central differences of ``F`` evaluated by
  Gauss-Jacobi simplex quadrature over a pulling triangulation.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import roots_jacobi

from .errors import DomainError, GeometryError, UnsupportedError
from .functions import PolynomialFunction, TestFunction
from .polynomials import RationalPolynomial, multi_indices
from .special import todd_coefficients

MAX_EM_ORDER = 4
SIMPLEX_NODES = 20


# ---------------------------------------------------------------------------
# small dense linear algebra over any commutative ring (Fractions, polynomials)


def _det(rows: Sequence[Sequence]):
    n = len(rows)
    if n == 0:
        return 1
    total = None
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = reduce(lambda a, b: a * b, (rows[i][perm[i]] for i in range(n)))
        term = -term if inversions % 2 else term
        total = term if total is None else total + term
    return total


def _cramer(A: Sequence[Sequence[int]], b: Sequence, det_a: int):
    n = len(A)
    out = []
    for j in range(n):
        rows = [[b[i] if k == j else A[i][k] for k in range(n)] for i in range(n)]
        out.append(_det(rows) * Fraction(1, det_a))
    return out


def _parse_rational(v) -> Fraction:
    if isinstance(v, float):
        return Fraction(v)
    return Fraction(v)


# ---------------------------------------------------------------------------


class HPolytope:
    """Bounded, nonempty ``{x in R^n : <u_i, x> <= c_i}`` with primitive integer ``u_i``."""

    def __init__(self, facets: Iterable[tuple[Sequence[int], object]], *, validate: bool = True):
        normals, offsets = [], []
        for u, c in facets:
            u = tuple(int(v) for v in u)
            normals.append(u)
            offsets.append(_parse_rational(c))
        if not normals:
            raise GeometryError("a polytope needs facets")
        self.n = len(normals[0])
        if any(len(u) != self.n for u in normals):
            raise GeometryError("all normals must share one dimension")
        self.normals: tuple[tuple[int, ...], ...] = tuple(normals)
        self.offsets: tuple[Fraction, ...] = tuple(offsets)
        if validate:
            for u in self.normals:
                if not any(u):
                    raise GeometryError("zero normal")
                if math.gcd(*u) != 1:
                    raise GeometryError(f"normal {u} is not primitive")
            if len(self.vertices) < self.n + 1:
                raise GeometryError("polytope is empty or not full-dimensional")
            if not self._bounded():
                raise GeometryError("polytope is unbounded")

    # -- construction helpers ------------------------------------------------
    @classmethod
    def interval(cls, lo=0, hi=1) -> "HPolytope":
        return cls([((-1,), -Fraction(lo)), ((1,), Fraction(hi))])

    @classmethod
    def box(cls, lows: Sequence, highs: Sequence) -> "HPolytope":
        n = len(lows)
        facets = []
        for i in range(n):
            e = [0] * n
            e[i] = -1
            facets.append((tuple(e), -Fraction(lows[i])))
            e = [0] * n
            e[i] = 1
            facets.append((tuple(e), Fraction(highs[i])))
        return cls(facets)

    @classmethod
    def unit_cube(cls, n: int) -> "HPolytope":
        return cls.box([0] * n, [1] * n)

    @classmethod
    def standard_simplex(cls, n: int, scale=1) -> "HPolytope":
        """``{x >= 0, x_1 + ... + x_n <= scale}``."""
        facets = []
        for i in range(n):
            e = [0] * n
            e[i] = -1
            facets.append((tuple(e), 0))
        facets.append(((1,) * n, Fraction(scale)))
        return cls(facets)

    @classmethod
    def from_dict(cls, data: Mapping) -> "HPolytope":
        facets = [(f["u"], Fraction(str(f["c"]))) for f in data["facets"]]
        P = cls(facets)
        if "n" in data and int(data["n"]) != P.n:
            raise GeometryError("declared dimension does not match the normals")
        return P

    def to_dict(self) -> dict:
        return {"n": self.n, "facets": [{"u": list(u), "c": str(c)} for u, c in zip(self.normals, self.offsets)]}

    @classmethod
    def load(cls, path) -> "HPolytope":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def __repr__(self):
        return f"HPolytope({list(zip(self.normals, map(str, self.offsets)))})"

    def __eq__(self, other):
        return isinstance(other, HPolytope) and (self.normals, self.offsets) == (other.normals, other.offsets)

    def __hash__(self):
        return hash((self.normals, self.offsets))

    @property
    def r(self) -> int:
        return len(self.normals)

    # -- geometry -----------------------------------------------------------
    @cached_property
    def _vertex_data(self) -> tuple[list[tuple[Fraction, ...]], list[frozenset[int]]]:
        return _vertices_exact(self.normals, self.offsets)

    @property
    def vertices(self) -> list[tuple[Fraction, ...]]:
        return self._vertex_data[0]

    @property
    def active_sets(self) -> list[frozenset[int]]:
        return self._vertex_data[1]

    def _bounded(self) -> bool:
        # the recession cone {<u_i, y> <= 0} is pointed here, so a nonzero
        # ray would sit on n-1 independent constraint hyperplanes
        n = self.n
        for subset in itertools.combinations(range(self.r), n - 1):
            rows = [list(self.normals[i]) for i in subset]
            for ray in _null_directions(rows, n):
                for sgn in (1, -1):
                    y = [sgn * v for v in ray]
                    if all(sum(a * b for a, b in zip(u, y)) <= 0 for u in self.normals):
                        return False
        return True

    def is_lattice(self) -> bool:
        return all(v.denominator == 1 for p in self.vertices for v in p)

    def is_simple(self) -> bool:
        return all(len(a) == self.n for a in self.active_sets)

    @cached_property
    def triangulation(self) -> list[tuple[int, ...]]:
        pts = np.array([[float(v) for v in p] for p in self.vertices])
        return _pulling_triangulation(pts, self.active_sets, self.n, self.r)

    def volume(self) -> Fraction:
        total = Fraction(0)
        for simplex in self.triangulation:
            v0 = self.vertices[simplex[0]]
            rows = [[a - b for a, b in zip(self.vertices[j], v0)] for j in simplex[1:]]
            total += abs(_det(rows))
        return total / math.factorial(self.n)

    def width_scale(self) -> float:
        """Smallest extent of the polytope measured along a facet normal."""
        widths = []
        for u, c in zip(self.normals, self.offsets):
            low = min(sum(a * b for a, b in zip(u, p)) for p in self.vertices)
            widths.append(float(c - low) / math.sqrt(sum(a * a for a in u)))
        return min(widths)

    def dilate(self, N) -> "HPolytope":
        return HPolytope(zip(self.normals, [c * Fraction(N) for c in self.offsets]))

    def perturbed(self, h: Sequence) -> "PerturbedPolytope":
        return PerturbedPolytope(self, tuple(h))

    def transform(self, A: Sequence[Sequence[int]]) -> "HPolytope":
        """Image under the unimodular map ``x -> A x``."""
        A = [list(map(int, row)) for row in A]
        det = _det(A)
        if abs(det) != 1:
            raise GeometryError("transformation must be unimodular")
        n = self.n
        # normals transform by A^{-T}; A^{-1} = adj(A)/det is integral
        inv = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [[A[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
                inv[i][j] = (-1) ** (i + j) * _det(minor) * det if n > 1 else det
        facets = []
        for u, c in zip(self.normals, self.offsets):
            new_u = tuple(sum(inv[k][i] * u[k] for k in range(n)) for i in range(n))
            facets.append((new_u, c))
        return HPolytope(facets)


def _null_directions(rows: list[list[int]], n: int) -> list[list[Fraction]]:
    """A spanning direction of the null space when ``rows`` has rank ``n - 1``."""
    if not rows:
        return [[Fraction(1)]] if n == 1 else []
    # generalized cross product: components are signed maximal minors
    m = len(rows)
    if m != n - 1:
        return []
    y = []
    for j in range(n):
        minor = [[row[k] for k in range(n) if k != j] for row in rows]
        y.append((-1) ** j * _det(minor))
    if not any(y):
        return []
    return [[Fraction(v) for v in y]]


def _vertices_exact(normals, offsets):
    n = len(normals[0])
    found: dict[tuple[Fraction, ...], set[int]] = {}
    for subset in itertools.combinations(range(len(normals)), n):
        A = [normals[i] for i in subset]
        det_a = _det(A)
        if det_a == 0:
            continue
        v = tuple(_cramer(A, [offsets[i] for i in subset], det_a))
        if v in found:
            continue
        vals = [sum(a * b for a, b in zip(u, v)) for u in normals]
        if all(val <= c for val, c in zip(vals, offsets)):
            found[v] = {i for i, (val, c) in enumerate(zip(vals, offsets)) if val == c}
    verts = sorted(found)
    return verts, [frozenset(found[v]) for v in verts]


def _vertices_float(normals: np.ndarray, offsets: np.ndarray, tol: float):
    n = normals.shape[1]
    pts, actives = [], []
    for subset in itertools.combinations(range(normals.shape[0]), n):
        A = normals[list(subset)]
        if abs(np.linalg.det(A)) < 0.5:  # integer matrices: singular iff det == 0
            continue
        v = np.linalg.solve(A, offsets[list(subset)])
        vals = normals @ v
        if np.all(vals <= offsets + tol):
            if any(np.max(np.abs(v - p)) <= tol for p in pts):
                continue
            pts.append(v)
            actives.append(frozenset(np.nonzero(np.abs(vals - offsets) <= tol)[0].tolist()))
    order = sorted(range(len(pts)), key=lambda i: tuple(pts[i]))
    return np.array([pts[i] for i in order]), [actives[i] for i in order]


def _affine_dim(points: np.ndarray) -> int:
    if len(points) <= 1:
        return 0
    diffs = points[1:] - points[0]
    scale = max(1.0, float(np.max(np.abs(points))))
    return int(np.linalg.matrix_rank(diffs, tol=1e-9 * scale))


def _pulling_triangulation(points: np.ndarray, actives, n: int, r: int) -> list[tuple[int, ...]]:
    """Cone from the lowest-index vertex over every facet that misses it, recursively."""

    def recurse(ids: frozenset[int], key: frozenset[int], dim: int):
        if dim == 0:
            return [(min(ids),)]
        apex = min(ids)
        seen = set()
        out = []
        for i in range(r):
            if i in key:
                continue
            sub = frozenset(v for v in ids if i in actives[v])
            if not sub or apex in sub or sub in seen:
                continue
            if _affine_dim(points[sorted(sub)]) != dim - 1:
                continue
            seen.add(sub)
            for s in recurse(sub, key | {i}, dim - 1):
                out.append((apex,) + s)
        return out

    simplices = recurse(frozenset(range(len(points))), frozenset(), n)
    if not simplices:
        raise GeometryError("could not triangulate a degenerate polytope")
    return simplices


@dataclass(frozen=True)
class PerturbedPolytope:
    """``P`` with facet ``i`` moved to ``<u_i, x> <= c_i + h_i``."""

    base: HPolytope
    h: tuple

    def __post_init__(self):
        if len(self.h) != self.base.r:
            raise GeometryError("one offset per facet required")

    @property
    def offsets(self) -> tuple:
        return tuple(c + _parse_rational(v) for c, v in zip(self.base.offsets, self.h))

    def exact(self) -> HPolytope:
        try:
            return HPolytope(zip(self.base.normals, self.offsets), validate=True)
        except GeometryError as exc:
            raise GeometryError(f"perturbation {self.h} degenerates the polytope: {exc}") from exc


# ---------------------------------------------------------------------------
# lattice points and Riemann sums


def lattice_points(P: HPolytope, N: int = 1) -> np.ndarray:
    """Integer points of ``N P`` as an ``(m, n)`` array in lexicographic order."""
    if N < 1:
        raise DomainError("N must be a positive integer")
    verts = P.vertices
    lo = [math.floor(min(v[i] for v in verts) * N) for i in range(P.n)]
    hi = [math.ceil(max(v[i] for v in verts) * N) for i in range(P.n)]
    axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    grid = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=-1)
    U = np.array(P.normals, dtype=np.int64)
    bounds = np.array([math.floor(c * N) for c in P.offsets], dtype=np.int64)
    keep = np.all(grid @ U.T <= bounds, axis=1)
    return grid[keep]


def riemann_sum(f: TestFunction, P: HPolytope, N: int) -> float:
    """``N^-n sum_{k in Z^n cap N P} f(k/N)``."""
    pts = lattice_points(P, N)
    if len(pts) == 0:
        return 0.0
    return math.fsum(f(pts / N)) / N**P.n


# ---------------------------------------------------------------------------
# integrals over (perturbed) polytopes


@lru_cache(maxsize=8)
def _simplex_rule(n: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Collapsed Gauss-Jacobi rule on ``{t >= 0, sum t <= 1}``; weights sum to ``1/n!``."""
    axes, wts = [], []
    for j in range(n):
        x, w = roots_jacobi(q, n - 1 - j, 0)
        axes.append((x + 1) / 2)
        wts.append(w / 2 ** (n - j))
    U = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=-1)
    W = np.ones(())
    for w in wts:
        W = np.multiply.outer(W, w)
    W = W.ravel()
    T = np.empty_like(U)
    remaining = np.ones(U.shape[0])
    for j in range(n):
        T[:, j] = U[:, j] * remaining
        remaining = remaining * (1 - U[:, j])
    return T, W


def _simplex_integral_poly(poly: RationalPolynomial, verts: Sequence[Sequence[RationalPolynomial]], r: int):
    """Exact ``int_simplex poly`` with vertex coordinates polynomial in ``r`` parameters."""
    n = poly.nvars
    R = r + n
    lift = [[c.embed(R, list(range(r))) for c in v] for v in verts]
    t = [RationalPolynomial.variable(r + j, R) for j in range(n)]
    edges = [[lift[j + 1][i] - lift[0][i] for i in range(n)] for j in range(n)]
    images = []
    for i in range(n):
        img = lift[0][i]
        for j in range(n):
            img = img + t[j] * edges[j][i]
        images.append(img)
    g = poly.substitute(images)
    collapsed: dict[tuple[int, ...], Fraction] = {}
    for exp, c in g.items():
        a = exp[r:]
        w = Fraction(math.prod(math.factorial(x) for x in a), math.factorial(sum(a) + n))
        key = exp[:r]
        collapsed[key] = collapsed.get(key, 0) + c * w
    integral = RationalPolynomial(r, collapsed)
    det = _det([[verts[j + 1][i] - verts[0][i] for i in range(n)] for j in range(n)])
    sign = 1 if det.coefficient((0,) * r) > 0 else -1
    return integral * det.scale(sign)


def _const(v, r=0) -> RationalPolynomial:
    return RationalPolynomial.constant(v, r)


def _polytope_integral_exact(poly: RationalPolynomial, P: HPolytope) -> Fraction:
    total = RationalPolynomial(0)
    for simplex in P.triangulation:
        verts = [[_const(x) for x in P.vertices[j]] for j in simplex]
        total = total + _simplex_integral_poly(poly, verts, 0)
    return total.coefficient(())


def _polytope_integral_float(f: TestFunction, normals: np.ndarray, offsets: np.ndarray, q: int) -> float:
    n = normals.shape[1]
    scale = max(1.0, float(np.max(np.abs(offsets))))
    pts, actives = _vertices_float(normals, offsets, 1e-11 * scale)
    if len(pts) < n + 1 or _affine_dim(pts) < n:
        raise GeometryError("perturbed polytope is empty or degenerate")
    simplices = _pulling_triangulation(pts, actives, n, normals.shape[0])
    T, W = _simplex_rule(n, q)
    chunks = []
    for s in simplices:
        v0 = pts[s[0]]
        E = pts[list(s[1:])] - v0
        vol = abs(np.linalg.det(E))
        chunks.append(vol * (W @ f(v0 + T @ E)))
    return math.fsum(chunks)


def dilated_integral(f: TestFunction, P: HPolytope, h: Sequence | None = None, *, nodes: int = SIMPLEX_NODES) -> float:
    """``int_{P_h} f(x) dx``; exact rational arithmetic for polynomial ``f``."""
    if P.n > 3:
        raise UnsupportedError("integration is implemented for n <= 3")
    h = tuple(h) if h is not None else (0,) * P.r
    if isinstance(f, PolynomialFunction):
        return float(dilated_integral_exact(f, P, h))
    offsets = np.array([float(c) + float(v) for c, v in zip(P.offsets, h)])
    return _polytope_integral_float(f, np.array(P.normals, dtype=float), offsets, nodes)


def dilated_integral_exact(f: PolynomialFunction, P: HPolytope, h: Sequence | None = None) -> Fraction:
    h = tuple(h) if h is not None else (0,) * P.r
    Q = P if not any(h) else PerturbedPolytope(P, h).exact()
    return _polytope_integral_exact(f.poly, Q)


def integral_polynomial_in_h(f: PolynomialFunction, P: HPolytope) -> RationalPolynomial:
    """``F(h) = int_{P_h} f`` as an exact polynomial in the facet offsets (simple ``P`` only)."""
    if not P.is_simple():
        raise UnsupportedError("vertices are affine in h only for simple polytopes")
    r, n = P.r, P.n
    hvars = [RationalPolynomial.variable(i, r) for i in range(r)]
    vertex_polys = []
    for v, act in zip(P.vertices, P.active_sets):
        S = sorted(act)
        A = [P.normals[i] for i in S]
        det_a = _det(A)
        b = [hvars[i] + P.offsets[i] for i in S]
        vertex_polys.append(_cramer(A, b, det_a))
    total = RationalPolynomial(r)
    for simplex in P.triangulation:
        total = total + _simplex_integral_poly(f.poly, [vertex_polys[j] for j in simplex], r)
    return total


# ---------------------------------------------------------------------------
# Euler-Maclaurin


def _central_weights(m: int) -> tuple[list[int], list[Fraction]]:
    """4th-order accurate central stencil for the ``m``-th derivative."""
    K = (m + 1) // 2 + 1
    offsets = list(range(-K, K + 1))
    size = len(offsets)
    # solve sum_j w_j s_j^p / p! = delta_{p m}, p = 0..size-1, exactly
    A = [[Fraction(s) ** p / math.factorial(p) for s in offsets] for p in range(size)]
    rhs = [Fraction(int(p == m)) for p in range(size)]
    return offsets, _solve_dense(A, rhs)


def _solve_dense(A, b):
    n = len(A)
    M = [list(row) + [bv] for row, bv in zip(A, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


class EulerMaclaurin:
    """Facet-derivative table of ``F(h) = int_{P_h} f`` up to total order ``M``.

    Building the table is the expensive step; evaluating the corrected sum
    for many ``N`` afterwards is cheap.
    """

    def __init__(self, f: TestFunction, P: HPolytope, M: int, *, check_lattice: bool = True, nodes: int = SIMPLEX_NODES):
        if not 0 <= M <= MAX_EM_ORDER:
            raise UnsupportedError(f"truncation order must be in 0..{MAX_EM_ORDER}")
        if check_lattice and not P.is_lattice():
            raise GeometryError("Euler-Maclaurin corrections need a lattice polytope")
        self.f, self.P, self.M, self.nodes = f, P, M, nodes
        self.todd = todd_coefficients(M)
        self.exact = isinstance(f, PolynomialFunction) and P.is_simple()
        self.derivatives = self._exact_table() if self.exact else self._difference_table()

    def _gammas(self):
        for gamma in multi_indices(self.P.r, self.M):
            coef = math.prod(self.todd[g] for g in gamma)
            if coef:
                yield gamma, coef

    def _exact_table(self):
        F = integral_polynomial_in_h(self.f, self.P)
        table = {}
        for gamma, _ in self._gammas():
            table[gamma] = F.coefficient(gamma) * math.prod(math.factorial(g) for g in gamma)
        return table

    def _difference_table(self):
        P = self.P
        normals = np.array(P.normals, dtype=float)
        base = np.array([float(c) for c in P.offsets])
        scale = P.width_scale()
        cache: dict[tuple, float] = {}

        def F(h):
            key = tuple(h)
            if key not in cache:
                if isinstance(self.f, PolynomialFunction):
                    cache[key] = float(dilated_integral_exact(self.f, P, [Fraction(v) for v in h]))
                else:
                    cache[key] = _polytope_integral_float(self.f, normals, base + np.array(h), self.nodes)
            return cache[key]

        eps = np.finfo(float).eps
        table = {}
        for gamma, _ in self._gammas():
            order = sum(gamma)
            if order == 0:
                table[gamma] = F([0.0] * P.r)
                continue
            delta = scale * max(1e-3, eps ** (1.0 / (order + 4)))
            stencils = [(i, _central_weights(g)) for i, g in enumerate(gamma) if g]
            acc = []
            for combo in itertools.product(*[list(zip(*s[1])) for s in stencils]):
                h = [0.0] * P.r
                weight = 1.0
                for (i, _), (off, w) in zip(stencils, combo):
                    h[i] = off * delta
                    weight *= float(w)
                if weight:
                    acc.append(weight * F(h))
            table[gamma] = math.fsum(acc) / delta**order
        return table

    def terms(self, N) -> dict[tuple[int, ...], float]:
        if self.exact:
            N = Fraction(N)
            return {g: c * self.derivatives[g] / N ** sum(g) for g, c in self._gammas()}
        return {g: float(c) * self.derivatives[g] / float(N) ** sum(g) for g, c in self._gammas()}

    def value(self, N):
        """Corrected sum; a :class:`~fractions.Fraction` on the exact route with integer ``N``."""
        terms = self.terms(N)
        if self.exact:
            return sum(terms.values(), Fraction(0))
        return math.fsum(terms.values())

    __call__ = value


def euler_maclaurin_sum(f: TestFunction, P: HPolytope, N: int, M: int) -> float:
    """``sum_{|gamma| <= M} N^-|gamma| prod_i b_{gamma_i} d^gamma_h int_{P_h} f |_{h=0}``."""
    return float(EulerMaclaurin(f, P, M).value(N))


@dataclass
class EhrhartCheck:
    coefficients: list[Fraction]  # ascending powers of N
    counts: dict[int, int]
    fitted_on: list[int]
    held_out: list[int]
    passed: bool

    def count(self, N: int) -> Fraction:
        return sum(c * Fraction(N) ** i for i, c in enumerate(self.coefficients))


def ehrhart_check(P: HPolytope, N_list: Sequence[int]) -> EhrhartCheck:
    """Interpolate the first ``n+1`` lattice counts by a degree-``n`` polynomial; test the rest."""
    N_list = sorted(set(int(N) for N in N_list))
    if len(N_list) < P.n + 2:
        raise DomainError("need n + 2 values of N (n + 1 to fit, at least one held out)")
    if not P.is_lattice():
        raise GeometryError("Ehrhart polynomiality needs a lattice polytope")
    counts = {N: len(lattice_points(P, N)) for N in N_list}
    fit, held = N_list[: P.n + 1], N_list[P.n + 1 :]
    A = [[Fraction(N) ** p for p in range(P.n + 1)] for N in fit]
    coeffs = _solve_dense(A, [Fraction(counts[N]) for N in fit])
    check = EhrhartCheck(coeffs, counts, fit, held, True)
    check.passed = all(check.count(N) == counts[N] for N in held)
    return check
