"""Operations on convex bodies: gauges, asymmetry, volumes, symmetrisations."""
from __future__ import annotations

import itertools
import logging
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..rational import Vec, dot, is_zero, qvec, scale, sub
from . import hull
from .bodies import (
    Ball,
    CentralSymmetral,
    ConvexBody,
    DimensionMismatch,
    GeometryError,
    HPolytope,
    Product,
    SymmetricCore,
    UnsupportedRepresentation,
    VPolytope,
    polytope_vertices,
)
from .lp import feasible

log = logging.getLogger(__name__)

EXPLICIT_MAX_DIM = 3


def norm(K: ConvexBody, x: Sequence):
    """Gauge ``inf{t > 0 : x in tK}``; exact ``Fraction`` unless a ball factor is involved."""
    return K.norm(x)


def normalize(K: ConvexBody, x: Sequence):
    """``x / |x|_K``, a point on the boundary of K."""
    x = qvec(x)
    if is_zero(x):
        raise GeometryError("cannot normalise the zero vector")
    n = K.norm(x)
    if isinstance(n, Fraction):
        return scale(1 / n, x)
    return tuple(float(t) / n for t in x)


def product(bodies: Sequence[ConvexBody]) -> Product:
    if not bodies:
        raise GeometryError("product of an empty list")
    return Product(list(bodies))


def is_symmetric(K: ConvexBody) -> bool:
    return K.is_symmetric()


def theta(K: ConvexBody):
    """Asymmetry ``min{t : -K ⊆ tK}`` about the origin.

    For polytopes this is the largest ``|-v|_K`` over the vertices v.
    """
    if isinstance(K, Product):
        return max(theta(f) for f in K.factors)
    if K.is_symmetric():
        return Fraction(1)
    if isinstance(K, (HPolytope, VPolytope)):
        try:
            verts = polytope_vertices(K)
        except ValueError as e:
            raise UnsupportedRepresentation(f"theta needs vertex access: {e}") from None
        return max(K.norm(tuple(-t for t in v)) for v in verts)
    raise UnsupportedRepresentation(f"theta is not available for {type(K).__name__}")


def symmetric_core(K: ConvexBody) -> ConvexBody:
    """``K ∩ -K``; explicit whenever K has an H-form, else a norm-only handle."""
    if K.is_symmetric():
        return K
    if isinstance(K, Product):
        return Product([symmetric_core(f) for f in K.factors])
    H = None
    if isinstance(K, HPolytope):
        H = K
    elif isinstance(K, VPolytope) and K.dim <= EXPLICIT_MAX_DIM:
        H = K.h_form()
    if H is not None:
        facets = {}
        for g in H.gauge_rows:
            facets[g] = None
            facets[tuple(-t for t in g)] = None
        return HPolytope([(g, 1) for g in facets], check_bounded=False)
    return SymmetricCore(K)


def central_symmetral(K: ConvexBody) -> ConvexBody:
    """``(K - K)/2``; explicit V-polytope up to dimension 3, norm-only handle above."""
    if K.is_symmetric():
        return K
    if isinstance(K, Product):
        return Product([central_symmetral(f) for f in K.factors])
    if isinstance(K, (HPolytope, VPolytope)):
        if K.dim <= EXPLICIT_MAX_DIM:
            verts = polytope_vertices(K)
            pts = {tuple((a - b) / 2 for a, b in zip(u, v)) for u, v in itertools.product(verts, repeat=2)}
            return VPolytope(hull.extreme_points(list(pts)))
        log.info("central symmetral in dim %d returned as a norm-only handle", K.dim)
        return CentralSymmetral(K)
    raise UnsupportedRepresentation(f"central symmetral of {type(K).__name__}")


def is_explicit(K: ConvexBody) -> bool:
    return not isinstance(K, (SymmetricCore, CentralSymmetral)) and all(
        is_explicit(f) for f in getattr(K, "factors", ())
    )


def _ball_volume(K: Ball) -> float:
    d = K.dim
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * float(K.radius) ** d


def volume(K: ConvexBody, samples: int = 200_000, seed: int = 0):
    """Exact for polytopes and their products, closed form for balls.

    Norm-only handles fall back to Monte Carlo; see :func:`volume_estimate`.
    """
    if isinstance(K, Product):
        out = 1
        for f in K.factors:
            out = out * volume(f, samples, seed)
        return out
    if isinstance(K, Ball):
        return _ball_volume(K)
    if isinstance(K, (HPolytope, VPolytope)):
        return hull.volume_and_centroid(polytope_vertices(K))[0]
    est, se = volume_estimate(K, samples, seed)
    log.info("Monte Carlo volume %.6g +- %.2g", est, se)
    return est


def volume_estimate(K: ConvexBody, samples: int, seed: int = 0, box: float = None):
    """Monte Carlo volume with its standard error, sampling a centred box."""
    if box is None:
        box = _bounding_radius(K)
    rng = np.random.default_rng(seed)
    X = rng.uniform(-box, box, size=(samples, K.dim))
    inside = _norm_batch_any(K, X) <= 1.0
    p = inside.mean()
    cube = (2 * box) ** K.dim
    return p * cube, cube * math.sqrt(max(p * (1 - p), 0.0) / samples)


def _norm_batch_any(K, X):
    try:
        return K.norm_batch(X)
    except UnsupportedRepresentation:
        return np.array([float(K.norm(tuple(Fraction(v) for v in row))) for row in X])


def _bounding_radius(K: ConvexBody) -> float:
    if isinstance(K, Ball):
        return float(K.radius)
    if isinstance(K, (SymmetricCore,)):
        return _bounding_radius(K.body)
    if isinstance(K, CentralSymmetral):
        return _bounding_radius(K.body)
    if isinstance(K, Product):
        return max(_bounding_radius(f) for f in K.factors)
    verts = polytope_vertices(K)
    return max(float(abs(t)) for v in verts for t in v)


def centroid(K: ConvexBody) -> Vec:
    """Exact centroid by simplicial decomposition (blockwise for products)."""
    if isinstance(K, Product):
        return tuple(t for f in K.factors for t in centroid(f))
    if isinstance(K, (Ball, SymmetricCore, CentralSymmetral)):
        return tuple(Fraction(0) for _ in range(K.dim))
    if isinstance(K, (HPolytope, VPolytope)):
        return hull.volume_and_centroid(polytope_vertices(K))[1]
    raise UnsupportedRepresentation(f"centroid of {type(K).__name__}")


# ---- homothet intersection ------------------------------------------------

def homothets_intersect(K: ConvexBody, lam_i, v_i, lam_j, v_j) -> bool:
    """Exact test whether ``v_i + lam_i K`` and ``v_j + lam_j K`` meet (touching counts)."""
    lam_i, lam_j = Fraction(lam_i), Fraction(lam_j)
    v_i, v_j = qvec(v_i), qvec(v_j)
    if len(v_i) != K.dim or len(v_j) != K.dim:
        raise DimensionMismatch("translation vectors do not match the body dimension")
    if isinstance(K, Product):
        return all(
            homothets_intersect(f, lam_i, a, lam_j, b)
            for f, a, b in zip(K.factors, K.split(v_i), K.split(v_j))
        )
    if isinstance(K, Ball):
        r = K.radius
        return sum((a - b) ** 2 for a, b in zip(v_i, v_j)) <= ((lam_i + lam_j) * r) ** 2
    if isinstance(K, HPolytope) and K.is_box:
        for (lo, hi), a, b in zip(K.interval_bounds(), v_i, v_j):
            if a + lam_i * hi < b + lam_j * lo or b + lam_j * hi < a + lam_i * lo:
                return False
        return True
    if isinstance(K, (HPolytope, VPolytope)) and K.dim == 2:
        return _intersect_support_2d(K, lam_i, v_i, lam_j, v_j)
    return homothets_intersect_lp(K, lam_i, v_i, lam_j, v_j)


def _intersect_support_2d(K, lam_i, v_i, lam_j, v_j) -> bool:
    # w = v_j - v_i must lie in lam_i K + lam_j (-K); in the plane that sum is
    # cut out by the edge normals of K and of -K.
    H = K if isinstance(K, HPolytope) else K.h_form()
    verts = polytope_vertices(K)
    w = sub(v_j, v_i)
    for a in H.normals:
        for n in (a, tuple(-t for t in a)):
            h_pos = max(dot(n, v) for v in verts)
            h_neg = max(-dot(n, v) for v in verts)
            if dot(n, w) > lam_i * h_pos + lam_j * h_neg:
                return False
    return True


def homothets_intersect_lp(K: ConvexBody, lam_i, v_i, lam_j, v_j) -> bool:
    """Rational LP feasibility of ``{z in lam_i K, z - w in lam_j K}``, ``w = v_j - v_i``."""
    lam_i, lam_j = Fraction(lam_i), Fraction(lam_j)
    w = sub(qvec(v_j), qvec(v_i))
    if isinstance(K, VPolytope) and K.dim > EXPLICIT_MAX_DIM:
        # w = lam_i sum(alpha_k u_k) - lam_j sum(beta_k u_k), simplex weights
        verts = K.points
        n = len(verts)
        A_eq = []
        for k in range(K.dim):
            A_eq.append([lam_i * u[k] for u in verts] + [-lam_j * u[k] for u in verts])
        A_eq.append([1] * n + [0] * n)
        A_eq.append([0] * n + [1] * n)
        return feasible(A_eq=A_eq, b_eq=list(w) + [1, 1], nvars=2 * n) is not None
    if isinstance(K, VPolytope):
        K = K.h_form()
    if not isinstance(K, HPolytope):
        raise UnsupportedRepresentation(f"LP intersection test for {type(K).__name__}")
    A_ub, b_ub = [], []
    for a, b in K.facets:
        A_ub.append(list(a))
        b_ub.append(lam_i * b)
        A_ub.append(list(a))
        b_ub.append(lam_j * b + dot(a, w))
    return feasible(A_ub=A_ub, b_ub=b_ub, free=True, nvars=K.dim) is not None
