"""Randomised constructions: sampling proposes, the exact verifier disposes.

Every point set returned here has been rechecked in exact arithmetic; floats
only drive the search for candidates.
"""
from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Sequence

import numpy as np

from .arrangement import Arrangement
from .geometry import (
    Ball,
    ConvexBody,
    GeometryError,
    HPolytope,
    Product,
    UnsupportedRepresentation,
    VPolytope,
    centroid,
    polytope_vertices,
)
from .geometry import hull
from .rational import Vec, dot, is_zero, norm2_sq, q, qvec, rational_sphere_point, scale, sub

log = logging.getLogger(__name__)

MIN_ACCEPTANCE = 1e-6


class SamplingError(GeometryError):
    pass


class RetriesExhausted(GeometryError):
    pass


@dataclass(frozen=True)
class RandomConfig:
    seed: int = 0
    max_retries: int = 10
    oversample_factor: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "oversample_factor", q(self.oversample_factor))
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")
        if self.oversample_factor < 1:
            raise ValueError("oversample_factor must be >= 1")

    def rng(self, stream: int = 0) -> np.random.Generator:
        # independent substream per index; results do not depend on scheduling
        return np.random.default_rng([self.seed & (2**64 - 1), stream])


# ---- uniform sampling -----------------------------------------------------

@functools.lru_cache(maxsize=64)
def _simplices(K):
    simp = hull.triangulate(polytope_vertices(K))
    vols = [hull.simplex_volume(s) for s in simp]
    keep = [(s, v) for s, v in zip(simp, vols) if v]
    arr = np.array([[[float(t) for t in p] for p in s] for s, _ in keep])
    w = np.array([float(v) for _, v in keep])
    return arr, w / w.sum()


def _bounding_box(K):
    if isinstance(K, Ball):
        r = float(K.radius)
        return np.full(K.dim, -r), np.full(K.dim, r)
    verts = np.array([[float(t) for t in v] for v in polytope_vertices(K)])
    return verts.min(axis=0), verts.max(axis=0)


def _rejection(K, n, rng, lo, hi, acceptance=None):
    if acceptance is None:
        probe = rng.uniform(lo, hi, size=(20000, K.dim))
        acceptance = float(np.mean(K.norm_batch(probe) <= 1.0))
    if acceptance < MIN_ACCEPTANCE:
        raise SamplingError(f"rejection acceptance {acceptance:.2e} is too low for dimension {K.dim}")
    out = []
    have = 0
    batch = max(64, int(1.2 * n / acceptance) + 16)
    while have < n:
        X = rng.uniform(lo, hi, size=(batch, K.dim))
        X = X[K.norm_batch(X) <= 1.0]
        out.append(X)
        have += len(X)
    return np.concatenate(out)[:n]


def _sample_float(K: ConvexBody, n: int, rng) -> np.ndarray:
    if n == 0:
        return np.zeros((0, K.dim))
    if isinstance(K, Product):
        return np.hstack([_sample_float(f, n, rng) for f in K.factors])
    if isinstance(K, Ball):
        lo, hi = _bounding_box(K)
        d = K.dim
        acc = math.pi ** (d / 2) / math.gamma(d / 2 + 1) / 2**d
        return _rejection(K, n, rng, lo, hi, acc)
    if isinstance(K, (HPolytope, VPolytope)):
        try:
            simp, w = _simplices(K)
        except (ValueError, UnsupportedRepresentation):
            lo, hi = _bounding_box(K)
            return _rejection(K, n, rng, lo, hi)
        idx = rng.choice(len(w), size=n, p=w)
        bary = rng.dirichlet(np.ones(K.dim + 1), size=n)
        return np.einsum("nk,nkd->nd", bary, simp[idx])
    raise SamplingError(f"cannot sample {type(K).__name__}")


def sample_uniform_float(K: ConvexBody, n: int, cfg: RandomConfig, stream: int = 0) -> np.ndarray:
    """Vectorised uniform samples; no exact membership recheck."""
    return _sample_float(K, n, cfg.rng(stream))


def sample_uniform(K: ConvexBody, n: int, cfg: RandomConfig, stream: int = 0) -> List[Vec]:
    """``n`` uniform points of K as exact rationals, each verified to lie in K.

    Products are sampled factorwise, polytopes through a volume-weighted
    triangulation (Dirichlet weights in each simplex), balls by rejection.
    """
    rng = cfg.rng(stream)
    out: List[Vec] = []
    while len(out) < n:
        X = _sample_float(K, n - len(out), rng)
        for row in X:
            p = tuple(Fraction(float(t)) for t in row)
            if K.contains(p):
                out.append(p)
    return out


# ---- random strict constructions ------------------------------------------

def translate_target(d: int) -> int:
    """``max(1, floor((2/sqrt 3)^d / 4))``."""
    return max(1, math.floor((2 / math.sqrt(3)) ** d / 4))


def _drop_close(K: ConvexBody, pts: Sequence[Vec], threshold) -> List[int]:
    """Indices kept after deleting the higher index of every close pair (either order)."""
    alive = list(range(len(pts)))
    dead = set()
    for i in range(len(pts)):
        if i in dead:
            continue
        for j in range(i + 1, len(pts)):
            if j in dead:
                continue
            w = sub(pts[i], pts[j])
            if K.compare_norm(w, threshold) <= 0 or K.compare_norm(tuple(-t for t in w), threshold) <= 0:
                dead.add(j)
    return [i for i in alive if i not in dead]


def strict_translate_arrangement(K: ConvexBody, cfg: RandomConfig = RandomConfig()) -> Arrangement:
    """Translates ``-x_i + K`` of well separated uniform points.

    Samples ``ceil(2 m * oversample)`` points with ``m = translate_target(d)``,
    drops one member of every pair at K-distance <= 1, and retries on a fresh
    substream until at least ``m`` survive.  Every translate contains the origin,
    so the family is pairwise intersecting, and survivors are pairwise > 1 apart
    in both orders, so it is strict.
    """
    m = translate_target(K.dim)
    n = math.ceil(2 * m * cfg.oversample_factor)
    for attempt in range(cfg.max_retries):
        pts = sample_uniform(K, n, cfg, stream=attempt)
        keep = _drop_close(K, pts, 1)
        log.debug("attempt %d: %d of %d points survive (need %d)", attempt, len(keep), n, m)
        if len(keep) >= m:
            return Arrangement.translates(K, [tuple(-t for t in pts[i]) for i in keep])
    raise RetriesExhausted(f"fewer than {m} survivors after {cfg.max_retries} attempts")


def shortness_delta(d: int) -> float:
    """``delta`` with ``exp(delta d) = (d+4)/(d+1)``."""
    return math.log((d + 4) / (d + 1)) / d


def boundary_sample_size(d: int) -> int:
    k = 0.5 * (2 / math.sqrt(3)) ** d * 3 / (math.e**2 * (d + 4))
    return max(1, math.floor(k))


def to_boundary(K: ConvexBody, x: Sequence) -> Vec:
    """Exact rational point on bd K in the direction of ``x``.

    Polytope gauges are rational, so this is ``x / |x|_K``.  Ball blocks are
    snapped to a nearby rational point of the sphere.
    """
    x = qvec(x)
    if is_zero(x):
        raise GeometryError("zero vector has no boundary direction")
    if isinstance(K, Ball):
        return scale(K.radius, rational_sphere_point([float(t) for t in x], 10**9))
    if K.exact:
        return scale(1 / K.norm(x), x)
    if isinstance(K, Product):
        parts = K.split(x)
        norms = [f.norm(p) for f, p in zip(K.factors, parts)]
        top = max(range(len(norms)), key=lambda i: float(norms[i]))
        t = norms[top] if isinstance(norms[top], Fraction) else Fraction(norms[top]).limit_denominator(10**12)
        out = []
        for i, (f, p) in enumerate(zip(K.factors, parts)):
            if i == top:
                out.append(to_boundary(f, p))
            else:
                y = scale(1 / t, p)
                if f.compare_norm(y, 1) > 0:
                    y = to_boundary(f, p)
                out.append(y)
        return tuple(c for b in out for c in b)
    raise UnsupportedRepresentation(f"boundary projection for {type(K).__name__}")


def pairwise_far(K: ConvexBody, pts: Sequence[Vec]) -> bool:
    """``|p_i - p_j|_K > 1`` for every ordered pair of distinct indices."""
    for i in range(len(pts)):
        for j in range(len(pts)):
            if i != j and K.compare_norm(sub(pts[i], pts[j]), 1) <= 0:
                return False
    return True


def boundary_strict_points(K: ConvexBody, cfg: RandomConfig = RandomConfig()) -> List[Vec]:
    """Points on bd K that are pairwise more than 1 apart in the K-gauge.

    K must have its centroid at the origin.  Samples are discarded when short
    (``|x| <= 1 - delta``) or when they close a pair (distance
    ``<= 1 + (d+1) delta``); survivors are pushed to the boundary and the
    separation is rechecked exactly.
    """
    c = centroid(K)
    if not is_zero(c):
        raise GeometryError("body must have its centroid at the origin; translate by -centroid(K) first")
    d = K.dim
    delta = Fraction(shortness_delta(d))
    n = math.ceil(boundary_sample_size(d) * cfg.oversample_factor)
    for attempt in range(cfg.max_retries):
        pts = sample_uniform(K, n, cfg, stream=attempt)
        pts = [p for p in pts if K.compare_norm(p, 1 - delta) > 0]
        keep = _drop_close(K, pts, 1 + (d + 1) * delta)
        bd = [to_boundary(K, pts[i]) for i in keep]
        # exact recheck; the float-derived delta should never trip this
        final = _drop_close(K, bd, 1)
        if len(final) < len(bd):
            log.warning("exact recheck removed %d boundary points", len(bd) - len(final))
        out = [bd[i] for i in final]
        if out:
            return out
    raise RetriesExhausted(f"no boundary points survived after {cfg.max_retries} attempts")


def hadwiger_arrangement(K: ConvexBody, points: Sequence[Vec]) -> Arrangement:
    """``{K - p_i}`` for boundary points pairwise > 1 apart: strict and pairwise intersecting."""
    return Arrangement.translates(K, [tuple(-t for t in p) for p in points])


# ---- centroid of a projection ---------------------------------------------

class ProjectionResult(NamedTuple):
    u: tuple
    u_exact: tuple
    residual: float


class ToleranceNotReached(GeometryError):
    pass


def projection_centroid_exact(points: Sequence[Vec], u: Sequence) -> Vec:
    """Centroid of the orthogonal projection of conv(points) onto ``u``-perp.

    Exact for rational ``u``: the projected body is mapped to a coordinate
    hyperplane by dropping the coordinate where ``u`` is largest (a linear
    bijection, which preserves centroids) and lifted back afterwards.
    """
    u = qvec(u)
    d = len(u)
    uu = norm2_sq(u)
    proj = [sub(p, scale(dot(p, u) / uu, u)) for p in points]
    k = max(range(d), key=lambda i: abs(u[i]))
    rest = [i for i in range(d) if i != k]
    img = list({tuple(p[i] for i in rest) for p in proj})
    if d == 2:
        lo, hi = min(img), max(img)
        c2 = ((lo[0] + hi[0]) / 2,)
    elif d == 3:
        c2 = _polygon_centroid(hull.hull_2d(img))
    else:
        raise UnsupportedRepresentation("projection centroid is implemented for d in {2, 3}")
    out = [Fraction(0)] * d
    for i, v in zip(rest, c2):
        out[i] = v
    out[k] = -sum(u[i] * out[i] for i in rest) / u[k]
    return tuple(out)


def _polygon_centroid(poly):
    a = Fraction(0)
    cx = Fraction(0)
    cy = Fraction(0)
    for i in range(len(poly)):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % len(poly)]
        cr = x0 * y1 - x1 * y0
        a += cr
        cx += (x0 + x1) * cr
        cy += (y0 + y1) * cr
    return (cx / (3 * a), cy / (3 * a))


def _projection_centroid_float(V: np.ndarray, u: np.ndarray) -> np.ndarray:
    u = u / np.linalg.norm(u)
    P = V - np.outer(V @ u, u)
    if V.shape[1] == 2:
        w = np.array([-u[1], u[0]])
        s = P @ w
        return 0.5 * (s.max() + s.min()) * w
    from scipy.spatial import ConvexHull

    # orthonormal basis of u-perp
    a = np.eye(3)[np.argmin(np.abs(u))]
    e1 = np.cross(u, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    Y = np.column_stack([P @ e1, P @ e2])
    h = ConvexHull(Y)
    poly = Y[h.vertices]
    x0, y0 = poly[:, 0], poly[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    cr = x0 * y1 - x1 * y0
    A = cr.sum()
    c = np.array([((x0 + x1) * cr).sum(), ((y0 + y1) * cr).sum()]) / (3 * A)
    return c[0] * e1 + c[1] * e2


def _exact_residual(verts, u) -> float:
    c = projection_centroid_exact(verts, tuple(Fraction(float(t)) for t in u))
    return math.sqrt(norm2_sq(c))


def centroid_projection_direction(
    K: ConvexBody, tol: float = 1e-9, starts: int = 64, seed: int = 0
) -> ProjectionResult:
    """A direction ``u`` whose orthogonal shadow of K has its centroid at the origin.

    In the plane the signed shadow midpoint is an odd function of the angle,
    so a grid scan brackets a root that ``brentq`` then pins down.  In space
    a multi-start 2-parameter root search runs on the float centroid map.  The
    returned residual is always recomputed exactly at the (float, hence
    rational) direction.
    """
    from scipy import optimize

    if K.dim not in (2, 3):
        raise UnsupportedRepresentation("projection search is implemented for dimensions 2 and 3")
    verts = polytope_vertices(K)
    V = np.array([[float(t) for t in v] for v in verts])
    d = K.dim

    first = np.eye(d)[-1]
    r0 = _exact_residual(verts, first)
    if r0 <= tol:
        return ProjectionResult(tuple(first), tuple(Fraction(float(t)) for t in first), r0)

    if d == 2:
        def signed(phi):
            u = np.array([math.cos(phi), math.sin(phi)])
            w = np.array([-u[1], u[0]])
            return float(_projection_centroid_float(V, u) @ w)

        grid = np.linspace(0.0, math.pi, 361)
        vals = [signed(p) for p in grid]
        for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
            if fa == 0:
                phi = a
                break
            if fa * fb < 0:
                phi = optimize.brentq(signed, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
                break
        else:
            raise ToleranceNotReached("no sign change found on the angle grid")
        u = np.array([math.cos(phi), math.sin(phi)])
        r = _exact_residual(verts, u)
        if r <= tol:
            return ProjectionResult(tuple(u), tuple(Fraction(float(t)) for t in u), r)
        raise ToleranceNotReached(f"residual {r:.3e} > {tol:.1e}")

    rng = np.random.default_rng(seed)
    cands = rng.normal(size=(starts, 3))
    cands /= np.linalg.norm(cands, axis=1)[:, None]
    scores = [np.linalg.norm(_projection_centroid_float(V, u)) for u in cands]
    best = None
    for idx in np.argsort(scores):
        u0 = cands[idx]
        a = np.eye(3)[np.argmin(np.abs(u0))]
        e1 = np.cross(u0, a)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(u0, e1)

        def chart(ab):
            u = u0 + ab[0] * e1 + ab[1] * e2
            return u / np.linalg.norm(u)

        def resid(ab):
            c = _projection_centroid_float(V, chart(ab))
            return [c @ e1, c @ e2]

        sol = optimize.root(resid, [0.0, 0.0], method="hybr", options={"xtol": 1e-15})
        u = chart(sol.x)
        r = _exact_residual(verts, u)
        if best is None or r < best.residual:
            best = ProjectionResult(tuple(u), tuple(Fraction(float(t)) for t in u), r)
        if r <= tol:
            return best
    raise ToleranceNotReached(f"best residual {best.residual:.3e} > {tol:.1e}")


# ---- concentration of the distance ----------------------------------------

class FEstimate(NamedTuple):
    estimate: float
    stderr: float


def concentration_bound(t: float, d: int) -> float:
    """``(t^2 (4 - t^2) / 4)^(d/2)``."""
    return (t * t * (4 - t * t) / 4) ** (d / 2)


def estimate_F(K: ConvexBody, t: float, N: int, cfg: RandomConfig = RandomConfig()) -> FEstimate:
    """Monte Carlo estimate of ``P(|X - Y|_K <= t)`` for independent uniform X, Y in K."""
    if not 0 < t < math.sqrt(2):
        raise ValueError("t must lie in (0, sqrt 2)")
    if N < 1:
        raise ValueError("N must be positive")
    rng = cfg.rng(0)
    X = _sample_float(K, N, rng)
    Y = _sample_float(K, N, rng)
    hits = K.norm_batch(X - Y) <= t
    p = float(hits.mean())
    return FEstimate(p, math.sqrt(p * (1 - p) / N))


# ---- bow-and-arrow ----------------------------------------------------------

def bow_and_arrow(K: ConvexBody, a: Sequence, b: Sequence):
    """Both sides of the normalisation inequality for ``|a|_K >= |b|_K > 0``.

    Returns ``(lhs, rhs)`` with ``lhs = |â - b̂|_K`` and
    ``rhs = (|a - b|_K - |a|_K + |b|_K) / |b|_K``; exact for polytopal K.
    """
    a, b = qvec(a), qvec(b)
    na, nb = K.norm(a), K.norm(b)
    if not na >= nb > 0:
        raise ValueError("requires |a|_K >= |b|_K > 0")
    lhs = K.norm(sub(scale(1 / na, a), scale(1 / nb, b)))
    rhs = (K.norm(sub(a, b)) - na + nb) / nb
    return lhs, rhs


def bow_and_arrow_symmetric(K: ConvexBody, a: Sequence, b: Sequence):
    """Symmetric-norm variant: ``|â - b̂| >= (|a - b| - abs(|a| - |b|)) / |b|``, any nonzero a, b."""
    if not K.is_symmetric():
        raise GeometryError("the symmetric variant needs an o-symmetric body")
    a, b = qvec(a), qvec(b)
    na, nb = K.norm(a), K.norm(b)
    lhs = K.norm(sub(scale(1 / na, a), scale(1 / nb, b)))
    rhs = (K.norm(sub(a, b)) - abs(na - nb)) / nb
    return lhs, rhs
