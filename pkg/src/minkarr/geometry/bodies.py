"""Convex bodies with the origin in their interior.

Every body exposes its gauge (the possibly asymmetric norm whose unit ball it
is).  Polytope paths are exact over ``Fraction``; a Euclidean ball factor makes
``norm`` a float, although ``compare_norm`` stays exact by comparing squares.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property
from typing import List, Sequence

import numpy as np

from ..rational import Vec, dot, is_zero, norm2_sq, q, qvec, rank, scale
from . import hull
from .lp import linprog


class GeometryError(ValueError):
    pass


class DimensionMismatch(GeometryError):
    pass


class DegenerateBody(GeometryError):
    """The origin is not an interior point of the body."""


class UnsupportedRepresentation(GeometryError):
    pass


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class ConvexBody:
    dim: int

    def norm(self, x: Sequence):
        raise NotImplementedError

    def compare_norm(self, x: Sequence, c) -> int:
        """Exact sign of ``norm(x) - c``."""
        raise NotImplementedError

    def norm_batch(self, X: np.ndarray) -> np.ndarray:
        raise UnsupportedRepresentation(f"{type(self).__name__} has no vectorised norm")

    def negate(self) -> "ConvexBody":
        raise NotImplementedError

    def is_symmetric(self) -> bool:
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        """True when ``norm`` returns exact rationals."""
        return True

    def contains(self, x: Sequence) -> bool:
        return self.compare_norm(x, 1) <= 0

    def _check(self, x: Sequence) -> Vec:
        x = qvec(x)
        if len(x) != self.dim:
            raise DimensionMismatch(f"vector of length {len(x)} for a {self.dim}-dimensional body")
        return x


class HPolytope(ConvexBody):
    """``{x : a_i . x <= b_i}`` with every ``b_i > 0``.

    ``vertices`` may be supplied when known; otherwise they are enumerated on
    demand (brute force, so only for modest facet counts).
    """

    def __init__(self, facets, vertices=None, check_bounded: bool = True):
        facets = [(qvec(a), q(b)) for a, b in facets]
        if not facets:
            raise GeometryError("an H-polytope needs at least one facet")
        self.dim = len(facets[0][0])
        for a, b in facets:
            if len(a) != self.dim:
                raise DimensionMismatch("facet normals of differing lengths")
            if b <= 0:
                raise DegenerateBody("origin must be strictly inside every facet (b_i > 0)")
            if is_zero(a):
                raise GeometryError("zero facet normal")
        self.normals = tuple(a for a, _ in facets)
        self.offsets = tuple(b for _, b in facets)
        # gauge rows: norm(x) = max(0, max_i g_i . x)
        self.gauge_rows = tuple(tuple(x / b for x in a) for a, b in facets)
        if check_bounded and not _positively_spans(self.gauge_rows, self.dim):
            raise GeometryError("facet normals do not positively span R^d: polytope is unbounded")
        self._given_vertices = None if vertices is None else [qvec(v) for v in vertices]

    @property
    def facets(self):
        return list(zip(self.normals, self.offsets))

    @cached_property
    def vertices(self) -> List[Vec]:
        if self._given_vertices is not None:
            return list(self._given_vertices)
        return hull.enumerate_vertices(self.normals, self.offsets)

    @cached_property
    def _G(self) -> np.ndarray:
        return np.array([[float(x) for x in g] for g in self.gauge_rows])

    def norm(self, x):
        x = self._check(x)
        return max(max(dot(g, x) for g in self.gauge_rows), Fraction(0))

    def compare_norm(self, x, c) -> int:
        return _sign(self.norm(x) - q(c))

    def norm_batch(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.maximum((X @ self._G.T).max(axis=1), 0.0)

    def negate(self):
        verts = None if self._given_vertices is None else [tuple(-t for t in v) for v in self._given_vertices]
        return HPolytope([(tuple(-t for t in a), b) for a, b in self.facets], verts, check_bounded=False)

    def is_symmetric(self) -> bool:
        rows = set(self.gauge_rows)
        return all(tuple(-t for t in g) in rows for g in rows)

    @cached_property
    def is_box(self) -> bool:
        return all(sum(1 for t in g if t != 0) == 1 for g in self.gauge_rows)

    def interval_bounds(self):
        """Per-axis ``(lo, hi)`` for axis-aligned boxes."""
        lo = [None] * self.dim
        hi = [None] * self.dim
        for a, b in self.facets:
            k = next(i for i, t in enumerate(a) if t != 0)
            lim = b / a[k]
            if a[k] > 0:
                hi[k] = lim if hi[k] is None else min(hi[k], lim)
            else:
                lo[k] = lim if lo[k] is None else max(lo[k], lim)
        return list(zip(lo, hi))

    def __repr__(self):
        return f"HPolytope(dim={self.dim}, facets={len(self.normals)})"


def _positively_spans(rows, d) -> bool:
    # bounded iff every +-e_k is a nonnegative combination of the normals
    cols = list(zip(*rows))
    for k in range(d):
        for s in (1, -1):
            target = [0] * d
            target[k] = s
            if not linprog([0] * len(rows), A_eq=cols, b_eq=target).success:
                return False
    return True


def _facets_from_points(pts, d):
    if d == 1:
        lo, hi = min(p[0] for p in pts), max(p[0] for p in pts)
        return [((Fraction(1),), hi), ((Fraction(-1),), -lo)]
    if d == 2:
        h = hull.hull_2d(pts)
        if len(h) < 3:
            raise DegenerateBody("vertices do not span the plane")
        out = []
        for i, p in enumerate(h):
            r = h[(i + 1) % len(h)]
            n = (r[1] - p[1], p[0] - r[0])
            out.append((n, dot(n, p)))
        return out
    if d == 3:
        return hull.facets_3d(pts)
    raise UnsupportedRepresentation("V to H conversion is implemented for dim <= 3")


class VPolytope(ConvexBody):
    """Convex hull of rational points, origin in the interior."""

    def __init__(self, vertices):
        pts = [qvec(v) for v in vertices]
        if not pts:
            raise GeometryError("a V-polytope needs vertices")
        self.dim = len(pts[0])
        if any(len(p) != self.dim for p in pts):
            raise DimensionMismatch("vertices of differing lengths")
        self.points = list(dict.fromkeys(pts))
        if self.dim <= 3:
            facets = _facets_from_points(self.points, self.dim)
            if any(b <= 0 for _, b in facets):
                raise DegenerateBody("origin is not interior to the vertex hull")
            self._h = HPolytope(facets, check_bounded=False)
        else:
            self._h = None
            if not _origin_strictly_inside(self.points, self.dim):
                raise DegenerateBody("origin is not interior to the vertex hull")

    @cached_property
    def vertices(self) -> List[Vec]:
        if self.dim <= 3:
            return hull.extreme_points(self.points)
        return list(self.points)

    def h_form(self) -> HPolytope:
        if self._h is None:
            raise UnsupportedRepresentation("no H-form available above dimension 3")
        return HPolytope(self._h.facets, self.vertices, check_bounded=False)

    def norm(self, x):
        x = self._check(x)
        if self._h is not None:
            return self._h.norm(x)
        return _lp_gauge(self.points, x)

    def compare_norm(self, x, c) -> int:
        return _sign(self.norm(x) - q(c))

    def norm_batch(self, X):
        if self._h is None:
            raise UnsupportedRepresentation("vectorised norm needs an H-form (dim <= 3)")
        return self._h.norm_batch(X)

    def negate(self):
        return VPolytope([tuple(-t for t in v) for v in self.points])

    def is_symmetric(self) -> bool:
        vs = set(self.vertices)
        return all(tuple(-t for t in v) in vs for v in vs)

    def __repr__(self):
        return f"VPolytope(dim={self.dim}, vertices={len(self.points)})"


def _lp_gauge(points, x) -> Fraction:
    # min sum(mu) s.t. sum mu_i p_i = x, mu >= 0
    cols = [list(c) for c in zip(*points)]
    res = linprog([1] * len(points), A_eq=cols, b_eq=list(x))
    if not res.success:
        raise GeometryError("gauge LP failed; is the origin interior?")
    return res.fun


def _origin_strictly_inside(points, d) -> bool:
    if rank(points) < d:
        return False
    # maximise t s.t. mu_i >= t, sum mu_i p_i = 0, sum mu_i = 1
    n = len(points)
    c = [0] * n + [-1]
    A_ub = []
    for i in range(n):
        row = [0] * (n + 1)
        row[i] = -1
        row[n] = 1
        A_ub.append(row)
    A_eq = [list(col) + [0] for col in zip(*points)] + [[1] * n + [0]]
    b_eq = [0] * d + [1]
    res = linprog(c, A_ub, [0] * n, A_eq, b_eq)
    return res.success and -res.fun > 0


class Ball(ConvexBody):
    """Euclidean ball of rational radius centred at the origin."""

    def __init__(self, radius=1, dim: int = 2):
        self.radius = q(radius)
        if self.radius <= 0:
            raise GeometryError("radius must be positive")
        if dim < 1:
            raise GeometryError("dimension must be positive")
        self.dim = dim

    @property
    def exact(self):
        return False

    def norm(self, x):
        x = self._check(x)
        return math.sqrt(norm2_sq(x)) / float(self.radius)

    def compare_norm(self, x, c) -> int:
        x = self._check(x)
        c = q(c)
        if c < 0:
            return 1
        return _sign(norm2_sq(x) - (c * self.radius) ** 2)

    def norm_batch(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.linalg.norm(X, axis=1) / float(self.radius)

    def negate(self):
        return self

    def is_symmetric(self):
        return True

    def __repr__(self):
        return f"Ball(r={self.radius}, dim={self.dim})"


class Product(ConvexBody):
    """Cartesian product; its gauge is the max of the factor gauges on coordinate blocks."""

    def __init__(self, factors: Sequence[ConvexBody]):
        self.factors = tuple(factors)
        if not self.factors:
            raise GeometryError("product of an empty list")
        self.dim = sum(f.dim for f in self.factors)
        self.blocks = []
        s = 0
        for f in self.factors:
            self.blocks.append((s, s + f.dim))
            s += f.dim

    def split(self, x):
        return [tuple(x[a:b]) for a, b in self.blocks]

    @property
    def exact(self):
        return all(f.exact for f in self.factors)

    def norm(self, x):
        x = self._check(x)
        return max(f.norm(part) for f, part in zip(self.factors, self.split(x)))

    def compare_norm(self, x, c) -> int:
        x = self._check(x)
        return max(f.compare_norm(part, c) for f, part in zip(self.factors, self.split(x)))

    def norm_batch(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.max([f.norm_batch(X[:, a:b]) for f, (a, b) in zip(self.factors, self.blocks)], axis=0)

    def negate(self):
        return Product([f.negate() for f in self.factors])

    def is_symmetric(self):
        return all(f.is_symmetric() for f in self.factors)

    def __repr__(self):
        return f"Product({', '.join(map(repr, self.factors))})"


class SymmetricCore(ConvexBody):
    """Norm-only handle for ``K ∩ -K``: its gauge is ``max(|x|_K, |-x|_K)``."""

    explicit = False

    def __init__(self, body: ConvexBody):
        self.body = body
        self.dim = body.dim

    @property
    def exact(self):
        return self.body.exact

    def norm(self, x):
        x = self._check(x)
        return max(self.body.norm(x), self.body.norm(tuple(-t for t in x)))

    def compare_norm(self, x, c):
        x = self._check(x)
        return max(self.body.compare_norm(x, c), self.body.compare_norm(tuple(-t for t in x), c))

    def norm_batch(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.maximum(self.body.norm_batch(X), self.body.norm_batch(-X))

    def negate(self):
        return self

    def is_symmetric(self):
        return True


class CentralSymmetral(ConvexBody):
    """Norm-only handle for ``(K - K)/2``, evaluated by an exact LP."""

    explicit = False

    def __init__(self, body: ConvexBody):
        if not isinstance(body, (HPolytope, VPolytope)):
            raise UnsupportedRepresentation("implicit central symmetral needs a polytope")
        self.body = body
        self.dim = body.dim

    def norm(self, x):
        x = self._check(x)
        K = self.body
        if isinstance(K, VPolytope) or K._given_vertices is not None:
            verts = K.vertices
            diffs = [tuple((a - b) / 2 for a, b in zip(u, v)) for u, v in itertools.permutations(verts, 2)]
            return _lp_gauge(diffs, x)
        # min t s.t. x = (a - b)/2 with a, b in tK; substitute b = a - 2x
        d = self.dim
        A_ub, b_ub = [], []
        for g in K.gauge_rows:
            A_ub.append(list(g) + [-1])
            b_ub.append(0)
            A_ub.append(list(g) + [-1])
            b_ub.append(2 * dot(g, x))
        res = linprog([0] * d + [1], A_ub, b_ub, free=True)
        return res.fun

    def compare_norm(self, x, c):
        return _sign(self.norm(x) - q(c))

    def negate(self):
        return self

    def is_symmetric(self):
        return True


def translate(K: ConvexBody, t: Sequence) -> ConvexBody:
    """The body ``K + t`` (origin must stay interior)."""
    t = qvec(t)
    if len(t) != K.dim:
        raise DimensionMismatch("translation vector has the wrong length")
    if is_zero(t):
        return K
    if isinstance(K, HPolytope):
        verts = None if K._given_vertices is None else [tuple(a + b for a, b in zip(v, t)) for v in K._given_vertices]
        return HPolytope([(a, b + dot(a, t)) for a, b in K.facets], verts)
    if isinstance(K, VPolytope):
        return VPolytope([tuple(a + b for a, b in zip(v, t)) for v in K.points])
    if isinstance(K, Product):
        return Product([translate(f, part) for f, part in zip(K.factors, K.split(t))])
    raise UnsupportedRepresentation(f"cannot translate {type(K).__name__}")


def scale_body(K: ConvexBody, s) -> ConvexBody:
    s = q(s)
    if s <= 0:
        raise GeometryError("scale must be positive")
    if isinstance(K, HPolytope):
        verts = None if K._given_vertices is None else [scale(s, v) for v in K._given_vertices]
        return HPolytope([(a, b * s) for a, b in K.facets], verts, check_bounded=False)
    if isinstance(K, VPolytope):
        return VPolytope([scale(s, v) for v in K.points])
    if isinstance(K, Ball):
        return Ball(K.radius * s, K.dim)
    if isinstance(K, Product):
        return Product([scale_body(f, s) for f in K.factors])
    raise UnsupportedRepresentation(f"cannot scale {type(K).__name__}")


def polytope_vertices(K: ConvexBody) -> List[Vec]:
    if isinstance(K, (HPolytope, VPolytope)):
        return K.vertices
    raise UnsupportedRepresentation(f"{type(K).__name__} has no vertex list")


# ---- named bodies ---------------------------------------------------------

def interval(lo=-1, hi=1) -> HPolytope:
    lo, hi = q(lo), q(hi)
    return HPolytope([((1,), hi), ((-1,), -lo)], [(lo,), (hi,)])


def cube(d: int, half_side=1) -> HPolytope:
    """``[-s, s]^d`` as an axis-aligned box."""
    s = q(half_side)
    facets = []
    for k in range(d):
        for sign in (1, -1):
            a = [0] * d
            a[k] = sign
            facets.append((a, s))
    verts = [tuple(s * t for t in signs) for signs in itertools.product((1, -1), repeat=d)]
    return HPolytope(facets, verts)


def simplex(d: int) -> HPolytope:
    """Simplex with vertices e_1..e_d and -(1,..,1); its centroid is the origin."""
    verts = [tuple(1 if i == k else 0 for i in range(d)) for k in range(d)]
    verts.append(tuple([-1] * d))
    facets = [([1] * d, 1)]
    for k in range(d):
        facets.append(([-d if i == k else 1 for i in range(d)], 1))
    return HPolytope(facets, verts)


def cross_polytope(d: int) -> HPolytope:
    facets = [(list(s), 1) for s in itertools.product((1, -1), repeat=d)]
    verts = []
    for k in range(d):
        for sign in (1, -1):
            verts.append(tuple(sign if i == k else 0 for i in range(d)))
    return HPolytope(facets, verts)


def triangle() -> HPolytope:
    """The triangle (1,0), (0,1), (-1,-1), centroid at the origin."""
    return simplex(2)
