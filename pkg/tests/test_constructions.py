import itertools
import math
from fractions import Fraction as F

import pytest
import sympy as sp

from minkarr.arrangement import Arrangement, verify_kappa_witness
from minkarr.constructions import (
    PHI,
    amplified_icosahedron_arrangement,
    cube_grid_witness,
    cube_product_amplifier,
    icosahedron_arrangement,
    icosahedron_rational_points,
    icosahedron_symbolic_check,
    icosahedron_witness,
    load_named_witness,
    product_of_translate_arrangements,
    triangle_product_witness,
)
from minkarr.geometry import Ball, GeometryError, Product, cube, interval, simplex, triangle


@pytest.mark.parametrize("d,count", [(1, 3), (2, 9), (3, 27)])
def test_cube_grid(d, count):
    A = cube_grid_witness(d)
    r = verify_kappa_witness(A)
    assert r.count == count and r.ok
    assert not r.strict


def test_cube_grid_rejects_bad_dimension():
    with pytest.raises(GeometryError):
        cube_grid_witness(0)


def test_icosahedron_float_witness():
    pts = icosahedron_witness()
    assert len(pts) == 12
    for p in pts:
        assert math.isclose(math.hypot(*p), 1.0, rel_tol=1e-12)
    dmin = min(math.dist(p, q) for p, q in itertools.combinations(pts, 2))
    assert dmin == pytest.approx(2 / math.sqrt(1 + PHI**2), rel=1e-12)
    assert dmin == pytest.approx(1.05146, abs=1e-5)


def test_icosahedron_symbolic_facts():
    s = icosahedron_symbolic_check()
    assert s["count"] == 12
    assert s["radius_sq_is_phi_plus_2"] and s["min_dist_equals_closed_form"] and s["strict"]
    # squared ratio of edge to circumradius equals 4/(phi+2), an exact algebraic identity
    phi = (1 + sp.sqrt(5)) / 2
    assert sp.simplify(s["ratio"] - 4 / (phi + 2)) == 0


def test_icosahedron_rational_points_are_exact():
    pts = icosahedron_rational_points()
    assert len(pts) == 12
    assert all(sum(t * t for t in p) == 1 for p in pts)
    r = verify_kappa_witness(icosahedron_arrangement(), mode="strict")
    assert r.ok and r.count == 12


def test_amplifier_examples():
    pts = icosahedron_rational_points()
    assert cube_product_amplifier(0, pts) == [tuple(p) for p in pts]
    four = cube_product_amplifier(2, [(F(1),)])
    assert len(four) == 4
    C = cube(3)
    for a, b in itertools.combinations(four, 2):
        assert C.norm(tuple(x - y for x, y in zip(a, b))) == 2


def test_amplified_icosahedron_is_strict_at_d4():
    A = amplified_icosahedron_arrangement(1)
    assert A.body.dim == 4
    r = verify_kappa_witness(A, mode="strict")
    assert r.ok and r.count == 24 == 3 * 2 ** (4 - 1)


def test_amplifier_distances_are_blockwise_max():
    pts = icosahedron_rational_points()[:4]
    lifted = cube_product_amplifier(1, pts)
    K = Product([cube(1), Ball(1, 3)])
    for a, b in itertools.combinations(lifted, 2):
        w = tuple(x - y for x, y in zip(a, b))
        cube_part = abs(w[0])
        ball_sq = sum(t * t for t in w[1:])
        # compare |w|_K against 1 independently of Product.compare_norm
        expected = 1 if (cube_part > 1 or ball_sq > 1) else (0 if (cube_part == 1 or ball_sq == 1) else -1)
        assert K.compare_norm(w, 1) == expected


def test_named_witnesses():
    A = load_named_witness("circles8")
    assert len(A) == 8 and verify_kappa_witness(A, mode="strict").ok
    B = load_named_witness("triangles10")
    assert len(B) == 10 and verify_kappa_witness(B).ok
    with pytest.raises(KeyError):
        load_named_witness("squares12")


def test_triangle_witness_matches_lattice_configuration():
    # independent construction: centres i*u + j*w (i + j <= 3) with u, w one third of two edges
    a, b, c = [tuple(F(t) for t in v) for v in [(1, 0), (0, 1), (-1, -1)]]
    u = tuple((x - y) / 3 for x, y in zip(c, b))
    w = tuple((x - y) / 3 for x, y in zip(c, a))
    centres = [tuple(i * p + j * q for p, q in zip(u, w)) for i in range(4) for j in range(4 - i)]
    A = Arrangement.translates(triangle(), centres)
    r = verify_kappa_witness(A)
    assert r.ok and r.count == 10


@pytest.mark.parametrize("d,count,dim", [(2, 10, 2), (3, 10, 3), (4, 100, 4)])
def test_triangle_product(d, count, dim):
    A = triangle_product_witness(d)
    assert len(A) == count and A.body.dim == dim
    assert verify_kappa_witness(A).ok


def test_product_of_translate_arrangements_needs_translates():
    half = Arrangement(simplex(2), ((F(1, 2), (0, 0)),))
    with pytest.raises(GeometryError):
        product_of_translate_arrangements([half, half])
    seg = Arrangement.translates(interval(), [(-1,), (0,), (1,)])
    P = product_of_translate_arrangements([seg, seg])
    assert len(P) == 9 and verify_kappa_witness(P).ok
