import itertools
import time
from fractions import Fraction as F

import numpy as np
import pytest

from minkarr.arrangement import Arrangement, Homothet, verify_kappa_witness
from minkarr.constructions import cube_grid_witness, load_named_witness
from minkarr.geometry import Ball, GeometryError, cube, triangle
from minkarr.search import EPS_SEARCH, SearchConfig, energy, search_arrangement


def test_energy_of_verified_witnesses_is_zero():
    assert energy(load_named_witness("circles8"), "strict") == 0
    assert energy(load_named_witness("triangles10"), "nonstrict") == 0
    assert energy(cube_grid_witness(2), "nonstrict") == 0


def test_energy_of_coincident_centres_is_positive():
    A = Arrangement.translates(Ball(1, 2), [(0, 0), (0, 0)])
    assert energy(A, "strict") > 0
    # tangent-at-the-centre translates satisfy the closed condition but miss the strict margin
    B = Arrangement.translates(cube(2), [(0, 0), (1, 0)])
    assert energy(B, "nonstrict") == 0
    assert energy(B, "strict") == pytest.approx(2 * EPS_SEARCH)


def test_energy_of_perturbed_grid_matches_direct_recomputation():
    rng = np.random.default_rng(0)
    A = cube_grid_witness(2)
    hs = [Homothet(1, tuple(F(float(t)) + F(float(e)) for t, e in zip(h.v, rng.uniform(-1e-3, 1e-3, 2)))) for h in A.homothets]
    B = Arrangement(A.body, tuple(hs))
    V = [np.array([float(t) for t in h.v]) for h in hs]
    expected = 0.0
    for i, j in itertools.permutations(range(len(V)), 2):
        expected += max(0.0, 1.0 - np.abs(V[i] - V[j]).max())
    for i, j in itertools.combinations(range(len(V)), 2):
        expected += max(0.0, np.abs(V[i] - V[j]).max() - 2.0)
    e = energy(B, "nonstrict")
    assert e == pytest.approx(expected, abs=1e-9)
    assert 0 < e < 0.1


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(3, lambda_range=(1.0, 0.5))
    with pytest.raises(ValueError):
        SearchConfig(3, lambda_range=(0.0, 1.0))
    with pytest.raises(ValueError):
        SearchConfig(3, steps=0)
    with pytest.raises(ValueError):
        SearchConfig(3, restarts=0)
    with pytest.raises(ValueError):
        SearchConfig(3, mode="loose")


def test_search_rejects_non_planar_bodies():
    with pytest.raises(GeometryError):
        search_arrangement(cube(3), SearchConfig(3))


def test_small_disc_search_is_fast():
    t0 = time.monotonic()
    A = search_arrangement(Ball(1, 2), SearchConfig(3, seed=0))
    assert time.monotonic() - t0 < 1.0
    r = verify_kappa_witness(A, mode="strict")
    assert r.ok and r.count == 3
    assert verify_kappa_witness(A, mode="minkowski").ok


def test_search_is_seed_deterministic():
    cfg = SearchConfig(5, seed=4)
    a = search_arrangement(triangle(), cfg)
    b = search_arrangement(triangle(), cfg)
    assert a is not None and a.homothets == b.homothets


def test_search_workers_give_same_result():
    cfg = SearchConfig(4, seed=2, restarts=3)
    a = search_arrangement(triangle(), cfg)
    b = search_arrangement(triangle(), SearchConfig(4, seed=2, restarts=3, workers=2))
    assert a.homothets == b.homothets


def test_search_reports_miss():
    cfg = SearchConfig(30, restarts=1, steps=50)
    assert search_arrangement(Ball(1, 2), cfg) is None


def test_search_finds_eight_discs():
    A = search_arrangement(Ball(1, 2), SearchConfig(8, seed=1))
    assert A is not None
    assert verify_kappa_witness(A, mode="strict").ok
    assert verify_kappa_witness(A, mode="minkowski").ok


def test_search_finds_ten_triangles():
    A = search_arrangement(triangle(), SearchConfig(10, mode="nonstrict", translates_only=True, seed=1))
    assert A is not None
    assert all(h.lam == 1 for h in A.homothets)
    assert verify_kappa_witness(A).ok
