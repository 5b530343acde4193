"""Exact convex hulls and triangulations for low-dimensional rational polytopes."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import List, Sequence, Tuple

from ..rational import det, dot, rank, solve, sub

Point = tuple


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_2d(points: Sequence[Point]) -> List[Point]:
    """Counter-clockwise extreme points (Andrew's monotone chain, collinear dropped)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: List[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross2(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross2(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _cross3(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _orient3(a, b, c, p):
    # > 0 when p lies on the side the normal (b-a)x(c-a) points to
    return dot(_cross3(sub(b, a), sub(c, a)), sub(p, a))


def hull_3d(points: Sequence[Point]) -> List[Tuple[Point, Point, Point]]:
    """Triangulated boundary of the 3-D hull, outward oriented (incremental, exact).

    Coplanar facets come back split into several triangles.
    """
    pts = list(dict.fromkeys(points))
    if len(pts) < 4:
        raise ValueError("need at least 4 points for a 3-D hull")
    a = pts[0]
    b = next((p for p in pts if p != a), None)
    c = next((p for p in pts if rank([sub(b, a), sub(p, a)]) == 2), None)
    if c is None:
        raise ValueError("points are collinear")
    dpt = next((p for p in pts if _orient3(a, b, c, p) != 0), None)
    if dpt is None:
        raise ValueError("points are coplanar")
    if _orient3(a, b, c, dpt) > 0:
        b, c = c, b
    faces = [(a, b, c), (a, dpt, b), (b, dpt, c), (c, dpt, a)]
    for p in pts:
        if p in (a, b, c, dpt):
            continue
        visible = [f for f in faces if _orient3(*f, p) > 0]
        if not visible:
            continue
        edges = {}
        for f in visible:
            for e in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0])):
                edges[e] = edges.get(e, 0) + 1
        horizon = [e for e in edges if (e[1], e[0]) not in edges]
        vis = set(visible)
        faces = [f for f in faces if f not in vis]
        faces.extend((e[0], e[1], p) for e in horizon)
    return faces


def facets_3d(points: Sequence[Point]):
    """Distinct facet planes ``(a, b)`` with ``a.x <= b`` (b normalised to +-1 or 0)."""
    seen = {}
    for f in hull_3d(points):
        n = _cross3(sub(f[1], f[0]), sub(f[2], f[0]))
        off = dot(n, f[0])
        key = _plane_key(n, off)
        seen.setdefault(key, (n, off))
    return list(seen.values())


def _plane_key(n, off):
    if off != 0:
        s = abs(off)
        return (tuple(x / s for x in n), off / s)
    k = next(x for x in n if x != 0)
    s = abs(k)
    return (tuple(x / s for x in n), Fraction(0))


def extreme_points(points: Sequence[Point]) -> List[Point]:
    """Vertices of conv(points) in dimension 1, 2 or 3 (exact)."""
    pts = list(dict.fromkeys(points))
    d = len(pts[0])
    if d == 1:
        return [min(pts), max(pts)] if len(pts) > 1 else pts
    if d == 2:
        return hull_2d(pts)
    if d == 3:
        planes = facets_3d(pts)
        out = []
        for p in pts:
            tight = [n for n, off in planes if dot(n, p) == off]
            if len(tight) >= 3 and rank(tight) == 3:
                out.append(p)
        return out
    raise ValueError("extreme point computation is implemented for dim <= 3")


def enumerate_vertices(normals: Sequence[Point], offsets: Sequence, limit: int = 300_000) -> List[Point]:
    """Vertices of {x : a_i.x <= b_i} by brute force over d-subsets of facets."""
    d = len(normals[0])
    m = len(normals)
    if math.comb(m, d) > limit:
        raise ValueError(f"vertex enumeration over C({m},{d}) subsets exceeds limit")
    found = {}
    for idx in itertools.combinations(range(m), d):
        x = solve([normals[i] for i in idx], [offsets[i] for i in idx])
        if x is None or x in found:
            continue
        if all(dot(a, x) <= b for a, b in zip(normals, offsets)):
            found[x] = None
    return list(found)


def triangulate(vertices: Sequence[Point]) -> List[Tuple[Point, ...]]:
    """Split conv(vertices) into full-dimensional simplices.

    Dimensions 1-3 are exact; higher dimensions take the combinatorics from a
    Qhull Delaunay triangulation of the (exact) vertices, after which volumes
    are still evaluated with exact determinants.
    """
    verts = list(dict.fromkeys(vertices))
    d = len(verts[0])
    if d == 1:
        lo, hi = min(verts), max(verts)
        return [(lo, hi)]
    if d == 2:
        h = hull_2d(verts)
        return [(h[0], h[i], h[i + 1]) for i in range(1, len(h) - 1)]
    if d == 3:
        tris = hull_3d(verts)
        c = tuple(sum(p[k] for p in verts) / len(verts) for k in range(3))
        return [(c, *t) for t in tris]
    if len(verts) == d + 1:
        return [tuple(verts)]
    import numpy as np
    from scipy.spatial import Delaunay

    tri = Delaunay(np.array([[float(x) for x in v] for v in verts]))
    return [tuple(verts[i] for i in s) for s in tri.simplices]


def simplex_volume(s: Sequence[Point]) -> Fraction:
    d = len(s[0])
    return abs(det([sub(p, s[0]) for p in s[1:]])) / math.factorial(d)


def volume_and_centroid(vertices: Sequence[Point]):
    total = Fraction(0)
    d = len(vertices[0])
    acc = [Fraction(0)] * d
    for s in triangulate(vertices):
        v = simplex_volume(s)
        if not v:
            continue
        total += v
        for k in range(d):
            acc[k] += v * sum(p[k] for p in s) / (d + 1)
    return total, tuple(x / total for x in acc)
