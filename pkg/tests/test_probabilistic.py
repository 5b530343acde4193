import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from minkarr.arrangement import verify_kappa_witness
from minkarr.geometry import (
    Ball,
    GeometryError,
    Product,
    VPolytope,
    cross_polytope,
    cube,
    simplex,
    translate,
    triangle,
)
from minkarr.probabilistic import (
    RandomConfig,
    SamplingError,
    boundary_sample_size,
    boundary_strict_points,
    bow_and_arrow,
    bow_and_arrow_symmetric,
    centroid_projection_direction,
    concentration_bound,
    estimate_F,
    hadwiger_arrangement,
    pairwise_far,
    sample_uniform,
    sample_uniform_float,
    shortness_delta,
    strict_translate_arrangement,
    translate_target,
)


def test_sample_uniform_membership_and_determinism():
    cfg = RandomConfig(seed=42)
    pts = sample_uniform(cube(2), 4, cfg)
    assert len(pts) == 4
    assert all(max(abs(t) for t in p) <= 1 for p in pts)
    assert sample_uniform(cube(2), 4, cfg) == pts
    assert sample_uniform(cube(2), 4, RandomConfig(seed=43)) != pts
    assert sample_uniform(triangle(), 0, cfg) == []


def test_ball_samples_are_centred():
    X = sample_uniform_float(Ball(1, 2), 1000, RandomConfig(seed=5))
    assert np.all(np.hypot(X[:, 0], X[:, 1]) <= 1)
    sigma = 0.5 / math.sqrt(1000)  # per-coordinate std of the unit disc is 1/2
    assert np.all(np.abs(X.mean(axis=0)) < 5 * sigma)


def test_triangle_samples_have_uniform_moments():
    X = sample_uniform_float(triangle(), 200_000, RandomConfig(seed=1))
    # centroid 0 and E[x^2] = (sum of v_i^2 over vertices)/12 for a centred triangle
    assert np.allclose(X.mean(axis=0), 0, atol=0.01)
    assert X[:, 0].var() == pytest.approx((1 + 0 + 1) / 12, rel=0.02)


def test_high_dimensional_ball_rejection_refuses():
    with pytest.raises(SamplingError):
        sample_uniform(Ball(1, 40), 1, RandomConfig())


def test_config_validation():
    with pytest.raises(ValueError):
        RandomConfig(max_retries=0)
    with pytest.raises(ValueError):
        RandomConfig(oversample_factor=F(1, 2))


@pytest.mark.parametrize("K", [Ball(1, 2), cube(3), simplex(4), cross_polytope(3), Product([triangle(), triangle()])], ids=repr)
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_strict_translates_always_verify(K, seed):
    A = strict_translate_arrangement(K, RandomConfig(seed=seed, oversample_factor=4))
    r = verify_kappa_witness(A, mode="strict")
    assert r.ok and r.count >= translate_target(K.dim)


def test_strict_translates_disc_oversampled():
    A = strict_translate_arrangement(Ball(1, 2), RandomConfig(seed=0, oversample_factor=8))
    assert len(A) >= 1
    assert translate_target(2) == 1


def test_strict_translates_deterministic():
    cfg = RandomConfig(seed=11, oversample_factor=6)
    a = strict_translate_arrangement(cube(3), cfg)
    b = strict_translate_arrangement(cube(3), cfg)
    assert a.homothets == b.homothets


def test_shortness_delta():
    assert shortness_delta(2) == pytest.approx(math.log(2) / 2)
    for d in range(1, 20):
        assert math.exp(shortness_delta(d) * d) == pytest.approx((d + 4) / (d + 1))
    assert boundary_sample_size(2) == 1


@pytest.mark.parametrize("K", [cube(2), simplex(3), cross_polytope(4), Ball(1, 3), Product([triangle(), Ball(1, 2)])], ids=repr)
def test_boundary_points_are_on_boundary_and_far(K):
    pts = boundary_strict_points(K, RandomConfig(seed=3, oversample_factor=16))
    assert pts
    for p in pts:
        assert K.compare_norm(p, 1) == 0
    assert pairwise_far(K, pts)
    assert verify_kappa_witness(hadwiger_arrangement(K, pts), mode="strict").ok


def test_boundary_points_triangle_product_d6():
    K = Product([triangle()] * 3)
    pts = boundary_strict_points(K, RandomConfig(seed=0, oversample_factor=32))
    assert len(pts) >= 2


def test_boundary_points_require_centroid_at_origin():
    with pytest.raises(GeometryError):
        boundary_strict_points(translate(simplex(2), (F(1, 10), 0)), RandomConfig())


def _projected_centroid_oracle(vertices, u):
    """Centroid of the orthogonal projection onto u-perp, via scipy hull and the shoelace formula."""
    V = np.array([[float(t) for t in v] for v in vertices])
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    if V.shape[1] == 2:
        e = np.array([-u[1], u[0]])
        s = V @ e
        return abs((s.min() + s.max()) / 2)
    a = np.eye(3)[np.argmin(np.abs(u))]
    e1 = np.cross(u, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    P = np.stack([V @ e1, V @ e2], 1)
    h = P[ConvexHull(P).vertices]
    x, y = h[:, 0], h[:, 1]
    cr = x * np.roll(y, -1) - np.roll(x, -1) * y
    area = cr.sum() / 2
    c = np.array([((x + np.roll(x, -1)) * cr).sum(), ((y + np.roll(y, -1)) * cr).sum()]) / (6 * area)
    return float(np.linalg.norm(c))


def test_projection_direction_symmetric_body():
    res = centroid_projection_direction(cube(3))
    assert res.residual == 0


def test_projection_direction_triangle_has_sign_change():
    K = triangle()
    res = centroid_projection_direction(K, tol=1e-9)
    assert res.residual <= 1e-9
    assert _projected_centroid_oracle(K.vertices, res.u) <= 1e-9
    # signed 1-D projection midpoint changes sign along an angle grid
    V = np.array([[float(t) for t in v] for v in K.vertices])
    mids = []
    for a in np.linspace(0, np.pi, 181):
        e = np.array([np.cos(a), np.sin(a)])
        s = V @ e
        mids.append((s.min() + s.max()) / 2)
    mids = np.array(mids)
    assert np.any(mids <= 0) and np.any(mids >= 0)


def test_projection_direction_translated_tetrahedron():
    K = translate(simplex(3), (F(1, 10), 0, 0))
    res = centroid_projection_direction(K, tol=1e-9)
    assert res.residual <= 1e-9
    assert _projected_centroid_oracle(K.vertices, res.u) <= 1e-8
    # a coarse sphere grid contains directions of larger residual, so the result is not vacuous
    rng = np.random.default_rng(0)
    grid = rng.normal(size=(200, 3))
    assert max(_projected_centroid_oracle(K.vertices, g) for g in grid) > 1e-3


def test_estimate_F_examples():
    cfg = RandomConfig(seed=0)
    est = estimate_F(Ball(1, 2), 1.0, 100_000, cfg)
    assert concentration_bound(1.0, 2) == pytest.approx(0.75)
    assert est.estimate + 3 * est.stderr <= 0.75
    t = math.sqrt(2) - 1e-9
    assert concentration_bound(t, 3) == pytest.approx(1.0)
    assert estimate_F(cube(3), t, 10_000, cfg).estimate <= 1
    assert estimate_F(cube(3), 1e-4, 10_000, cfg).estimate < 1e-3
    with pytest.raises(ValueError):
        estimate_F(cube(2), 1.5, 10, cfg)
    with pytest.raises(ValueError):
        estimate_F(cube(2), 0.0, 10, cfg)


def test_estimate_F_deterministic():
    cfg = RandomConfig(seed=7)
    assert estimate_F(simplex(3), 1.0, 5000, cfg) == estimate_F(simplex(3), 1.0, 5000, cfg)


BODIES = [triangle(), simplex(3), VPolytope([(2, 0), (0, 1), (-1, -1)]), cube(2), cross_polytope(3)]
coord = st.fractions(min_value=-4, max_value=4, max_denominator=25)


@pytest.mark.parametrize("K", BODIES, ids=repr)
@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_bow_and_arrow_property(K, data):
    a = tuple(data.draw(coord) for _ in range(K.dim))
    b = tuple(data.draw(coord) for _ in range(K.dim))
    na, nb = K.norm(a), K.norm(b)
    if nb == 0 or na == 0:
        return
    if na < nb:
        a, b = b, a
    lhs, rhs = bow_and_arrow(K, a, b)
    assert lhs >= rhs
    if K.is_symmetric():
        lhs, rhs = bow_and_arrow_symmetric(K, b, a)
        assert lhs >= rhs


def test_bow_and_arrow_rejects_wrong_order():
    with pytest.raises(ValueError):
        bow_and_arrow(cube(2), (F(1, 2), 0), (1, 0))
    with pytest.raises(GeometryError):
        bow_and_arrow_symmetric(triangle(), (1, 0), (0, 1))


def test_bow_and_arrow_is_tight_for_parallel_vectors():
    K = triangle()
    rng = random.Random(0)
    for _ in range(50):
        b = (F(rng.randint(-9, 9), 7), F(rng.randint(1, 9), 7))
        t = F(rng.randint(7, 30), 7)
        lhs, rhs = bow_and_arrow(K, tuple(t * c for c in b), b)
        assert lhs == rhs == 0
