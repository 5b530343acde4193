"""Deterministic lower-bound witnesses."""
from __future__ import annotations

import itertools
import json
import math
from fractions import Fraction
from importlib import resources
from typing import List, Sequence

from .arrangement import Arrangement
from .geometry import Ball, GeometryError, Product, cube, interval
from .rational import rational_sphere_point

PHI = (1 + math.sqrt(5)) / 2
NAMED_WITNESSES = {"circles8": "circles8.json", "triangles10": "triangles10.json"}


def cube_grid_witness(d: int) -> Arrangement:
    """``3^d`` unit translates of ``[-1,1]^d`` centred on ``{-1,0,1}^d``."""
    if d < 1:
        raise GeometryError("dimension must be positive")
    centers = itertools.product((-1, 0, 1), repeat=d)
    return Arrangement.translates(cube(d), centers)


def _icosahedron_raw():
    # (0, ±1, ±φ) and its cyclic permutations
    out = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            base = (0.0, s1 * 1.0, s2 * PHI)
            for r in range(3):
                out.append(base[-r:] + base[:-r] if r else base)
    return out


def icosahedron_witness() -> List[tuple]:
    """The 12 icosahedron vertices on the unit sphere, as floats."""
    s = math.sqrt(1 + PHI * PHI)
    return [tuple(t / s for t in p) for p in _icosahedron_raw()]


def icosahedron_symbolic_check() -> dict:
    """Exact algebraic facts about the icosahedron witness, via sympy.

    Returns the minimum squared pairwise distance of the unnormalised vertices
    ``(0, ±1, ±φ)``, their common squared radius, and whether the normalised
    minimum distance exceeds 1.
    """
    import sympy as sp

    phi = (1 + sp.sqrt(5)) / 2
    pts = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            base = (sp.Integer(0), sp.Integer(s1), s2 * phi)
            for r in range(3):
                pts.append(base[-r:] + base[:-r] if r else base)
    radius_sq = {sp.nsimplify(sp.expand(sum(c**2 for c in p))) for p in pts}
    dists = {sp.nsimplify(sp.expand(sum((a - b) ** 2 for a, b in zip(p, r)))) for p, r in itertools.combinations(pts, 2)}
    min_sq = min(dists, key=lambda e: float(e))
    (rad_sq,) = radius_sq
    ratio = sp.simplify(min_sq / rad_sq)
    closed_form = 2 / sp.sqrt(phi + 2)
    min_dist = sp.sqrt(ratio)
    return {
        "count": len(pts),
        "min_dist_sq": min_sq,
        "radius_sq": rad_sq,
        "ratio": ratio,
        "radius_sq_is_phi_plus_2": sp.simplify(rad_sq - (phi + 2)) == 0,
        "min_dist_equals_closed_form": sp.simplify(min_dist - closed_form) == 0,
        "strict": bool(sp.simplify(ratio - 1) > 0),
        "min_dist": min_dist,
    }


def icosahedron_rational_points(max_den: int = 10**6) -> List[tuple]:
    """Rational points exactly on the unit sphere next to the icosahedron vertices.

    Antipodal vertices map to exact negatives, keeping those pairs at distance
    exactly 2 (touching translates).
    """
    out = {}
    for p in icosahedron_witness():
        key = tuple(round(t, 9) for t in p)
        anti = tuple(round(-t, 9) + 0.0 for t in p)
        if anti in out:
            out[key] = tuple(-t for t in out[anti])
        else:
            out[key] = rational_sphere_point(p, max_den)
    return list(out.values())


def translate_arrangement(K, points) -> Arrangement:
    """``{-p + K}``: a strict arrangement whenever the points are pairwise > 1 apart."""
    return Arrangement.translates(K, [tuple(-t for t in p) for p in points])


def icosahedron_arrangement() -> Arrangement:
    return translate_arrangement(Ball(1, 3), icosahedron_rational_points())


def cube_product_amplifier(k: int, points: Sequence[Sequence]) -> List[tuple]:
    """Lift boundary points of K to ``C^k x K`` by prefixing every sign vector."""
    if k < 0:
        raise GeometryError("k must be nonnegative")
    out = []
    for s in itertools.product((-1, 1), repeat=k):
        for p in points:
            out.append(tuple(Fraction(t) for t in s) + tuple(p))
    return out


def amplified_icosahedron_arrangement(k: int = 1) -> Arrangement:
    body = Product([cube(k), Ball(1, 3)]) if k else Ball(1, 3)
    return translate_arrangement(body, cube_product_amplifier(k, icosahedron_rational_points()))


def load_named_witness(name: str) -> Arrangement:
    try:
        fname = NAMED_WITNESSES[name]
    except KeyError:
        raise KeyError(f"unknown witness {name!r}; available: {sorted(NAMED_WITNESSES)}") from None
    text = resources.files("minkarr").joinpath("data", fname).read_text()
    return Arrangement.from_json(json.loads(text))


def product_of_translate_arrangements(parts: Sequence[Arrangement]) -> Arrangement:
    """Cartesian product of translate-only arrangements (one homothet per tuple of centres)."""
    for A in parts:
        if any(h.lam != 1 for h in A.homothets):
            raise GeometryError("product construction needs translate-only factors")
    body = Product([A.body for A in parts])
    centers = [sum((h.v for h in combo), ()) for combo in itertools.product(*(A.homothets for A in parts))]
    return Arrangement.translates(body, centers)


def triangle_product_witness(d: int) -> Arrangement:
    """``10^{floor(d/2)}`` translates of a product of triangles.

    For odd ``d`` a segment factor carrying the single centre 0 fills the last
    coordinate, so the ambient dimension is ``d`` and the count is unchanged.
    """
    if d < 2:
        raise GeometryError("need d >= 2")
    base = load_named_witness("triangles10")
    parts = [base] * (d // 2)
    if d % 2:
        parts.append(Arrangement.translates(interval(), [(0,)]))
    if len(parts) == 1:
        return base
    return product_of_translate_arrangements(parts)
