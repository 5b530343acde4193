"""Stochastic search for large pairwise intersecting Minkowski arrangements in the plane.

The annealer works in floats on a hinge energy.  Nothing is certified by
float: a candidate is snapped to rationals and handed to the exact verifier.
For polygons, a candidate is first polished by a linear program.  Once each
ordered pair's active facet is fixed, every constraint is linear in the
centres and ratios, and the LP's vertex solutions have small denominators.
This matters for rigid configurations, where no slack exists at all.
"""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np
from scipy import optimize

from .arrangement import Arrangement, Homothet, verify_kappa_witness
from .geometry import Ball, ConvexBody, GeometryError, HPolytope, VPolytope, polytope_vertices
from .rational import dot, rationalize

log = logging.getLogger(__name__)

EPS_SEARCH = 1e-6
ROUNDOFF = 1e-12  # float slack for closed (non-strict) conditions
STRICT = "strict"
NONSTRICT = "nonstrict"
DENOMINATORS = (10**6, 10**8, 10**10, 10**12)


@dataclass
class SearchConfig:
    target_count: int
    mode: str = STRICT
    translates_only: bool = False
    lambda_range: Tuple[float, float] = (0.02, 1.0)
    steps: int = 4000
    restarts: int = 20
    initial_temperature: float = 0.05
    cooling_rate: float = 0.999
    seed: int = 0
    time_limit: Optional[float] = None
    workers: int = 1

    def __post_init__(self):
        lo, hi = self.lambda_range
        if not (0 < lo <= hi):
            raise ValueError("lambda_range must satisfy 0 < lo <= hi")
        if self.steps < 1 or self.restarts < 1:
            raise ValueError("steps and restarts must be at least 1")
        if self.mode not in (STRICT, NONSTRICT):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.target_count < 1:
            raise ValueError("target_count must be positive")


@dataclass
class _Model:
    """Float view of a planar body: gauge rows and support data, or a disc."""

    radius: Optional[float] = None
    G: Optional[np.ndarray] = None
    normals: Optional[np.ndarray] = None
    h_pos: Optional[np.ndarray] = None
    h_neg: Optional[np.ndarray] = None

    @classmethod
    def of(cls, K: ConvexBody) -> "_Model":
        if K.dim != 2:
            raise GeometryError("search works in the plane only")
        if isinstance(K, Ball):
            return cls(radius=float(K.radius))
        if isinstance(K, (HPolytope, VPolytope)):
            H = K if isinstance(K, HPolytope) else K.h_form()
            verts = polytope_vertices(K)
            ns = []
            for a in H.normals:
                for n in (a, tuple(-t for t in a)):
                    if n not in ns:
                        ns.append(n)
            hp = [max(dot(n, v) for v in verts) for n in ns]
            hn = [max(-dot(n, v) for v in verts) for n in ns]
            N = np.array([[float(t) for t in n] for n in ns])
            scale = np.linalg.norm(N, axis=1)
            return cls(
                G=np.array([[float(t) for t in r] for r in H.gauge_rows]),
                normals=N / scale[:, None],
                h_pos=np.array([float(t) for t in hp]) / scale,
                h_neg=np.array([float(t) for t in hn]) / scale,
            )
        raise GeometryError(f"search does not support {type(K).__name__}")

    @property
    def is_disc(self) -> bool:
        return self.radius is not None

    def norms(self, D: np.ndarray) -> np.ndarray:
        """Gauge of every vector in an (..., 2) array."""
        if self.is_disc:
            return np.sqrt((D**2).sum(-1)) / self.radius
        return np.maximum((D @ self.G.T).max(-1), 0.0)

    def overlap_excess(self, D: np.ndarray, L: np.ndarray) -> np.ndarray:
        """How far ``v_i - v_j`` lies outside ``lam_j K - lam_i K`` (<= 0 when the homothets meet)."""
        if self.is_disc:
            return np.sqrt((D**2).sum(-1)) - (L[:, None] + L[None, :]) * self.radius
        # w = v_j - v_i = -D_ij must satisfy <n, w> <= lam_i h(n) + lam_j h(-n)
        proj = -(D @ self.normals.T)
        cap = L[:, None, None] * self.h_pos + L[None, :, None] * self.h_neg
        return (proj - cap).max(-1)


def _hinges(model: _Model, V: np.ndarray, L: np.ndarray, eps: float, strict: bool):
    m = len(L)
    D = V[:, None, :] - V[None, :, :]
    off = ~np.eye(m, dtype=bool)
    margin = eps if strict else -ROUNDOFF
    c = np.maximum(L[None, :] + margin - model.norms(D), 0.0)[off]
    iu = np.triu_indices(m, 1)
    x = np.maximum(model.overlap_excess(D, L)[iu] + margin, 0.0)
    return c, x


def energy(A: Arrangement, mode: str = STRICT, eps: float = EPS_SEARCH) -> float:
    """Sum of positive violations of the float relaxation, with margin ``eps`` in strict mode.

    In non-strict mode the centre and intersection conditions are closed, so
    no margin is imposed; violations below ``ROUNDOFF`` are float noise and
    are ignored.  Rigid configurations can only reach zero that way.
    """
    if mode not in (STRICT, NONSTRICT):
        raise ValueError(f"unknown mode {mode!r}")
    model = _Model.of(A.body)
    V = np.array([[float(t) for t in h.v] for h in A.homothets], dtype=float).reshape(-1, 2)
    L = np.array([float(h.lam) for h in A.homothets])
    c, x = _hinges(model, V, L, eps, mode == STRICT)
    return float(c.sum() + x.sum())


class _Problem:
    def __init__(self, K: ConvexBody, cfg: SearchConfig):
        self.K = K
        self.cfg = cfg
        self.model = _Model.of(K)
        self.m = cfg.target_count
        self.strict = cfg.mode == STRICT
        lo, hi = cfg.lambda_range
        self.log_lo, self.log_hi = math.log(lo), math.log(hi)
        self.fixed = cfg.translates_only or lo == hi
        self.lam_fixed = 1.0 if cfg.translates_only else lo

    def unpack(self, x: np.ndarray):
        V = x[: 2 * self.m].reshape(self.m, 2)
        if self.fixed:
            return V, np.full(self.m, self.lam_fixed)
        return V, np.exp(np.clip(x[2 * self.m :], self.log_lo, self.log_hi))

    def energy(self, x, eps=EPS_SEARCH) -> float:
        c, i = _hinges(self.model, *self.unpack(x), eps, self.strict)
        return float(c.sum() + i.sum())

    def smooth(self, x, eps) -> float:
        c, i = _hinges(self.model, *self.unpack(x), eps, self.strict)
        return float((c**2).sum() + (i**2).sum())

    def initial(self, rng) -> np.ndarray:
        hi = math.exp(self.log_hi)
        r = hi * np.sqrt(rng.random(self.m))
        a = rng.random(self.m) * 2 * math.pi
        V = np.stack([r * np.cos(a), r * np.sin(a)], 1)
        if self.fixed:
            return V.ravel()
        s = rng.uniform(self.log_lo, self.log_hi, self.m)
        return np.concatenate([V.ravel(), s])


def _anneal(P: _Problem, x: np.ndarray, rng) -> np.ndarray:
    cfg = P.cfg
    T = cfg.initial_temperature
    E = P.energy(x)
    best, best_E = x.copy(), E
    step_v = math.exp(P.log_hi) * 0.2
    for _ in range(cfg.steps):
        if best_E == 0:
            break
        i = rng.integers(P.m)
        y = x.copy()
        y[2 * i : 2 * i + 2] += rng.normal(0, step_v * max(T / cfg.initial_temperature, 0.02), 2)
        if not P.fixed:
            y[2 * P.m + i] += rng.normal(0, 0.3 * max(T / cfg.initial_temperature, 0.02))
        F = P.energy(y)
        if F <= E or rng.random() < math.exp(-(F - E) / max(T, 1e-12)):
            x, E = y, F
            if E < best_E:
                best, best_E = x.copy(), E
        T *= cfg.cooling_rate
    return best


def _local(P: _Problem, x: np.ndarray) -> np.ndarray:
    # target a wider margin than the acceptance margin so snapping has room
    eps = 20 * EPS_SEARCH
    for _ in range(3):
        res = optimize.minimize(P.smooth, x, args=(eps,), method="L-BFGS-B", options={"maxiter": 2000, "gtol": 1e-14, "ftol": 1e-20})
        x = res.x
        if P.energy(x) == 0:
            break
    return x


def _lp_polish(P: _Problem, x: np.ndarray) -> Optional[np.ndarray]:
    """Re-solve a polygon candidate as an LP with the active facets frozen.

    Variables are the centres, the ratios (unless fixed) and a common slack
    ``t`` that is maximised (capped at 1).  The first centre is pinned to 0.
    """
    model, m = P.model, P.m
    V, L = P.unpack(x)
    nv = 2 * m
    nl = 0 if P.fixed else m
    n = nv + nl + 1
    t_idx = n - 1
    rows, rhs = [], []

    def lam_coef(row, j, c):
        if P.fixed:
            return c * P.lam_fixed  # moves to the right-hand side
        row[nv + j] += c
        return 0.0

    G = model.G
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            k = int(np.argmax(G @ (V[i] - V[j])))
            # lam_j + t <= G_k (v_i - v_j)
            row = np.zeros(n)
            row[2 * i : 2 * i + 2] -= G[k]
            row[2 * j : 2 * j + 2] += G[k]
            row[t_idx] = 1.0 if P.strict else 0.0
            rows.append(row)
            rhs.append(-lam_coef(row, j, 1.0))
    for i in range(m):
        for j in range(i + 1, m):
            for nrm, hp, hn in zip(model.normals, model.h_pos, model.h_neg):
                # <n, v_j - v_i> - lam_i h(n) - lam_j h(-n) + t <= 0
                row = np.zeros(n)
                row[2 * j : 2 * j + 2] += nrm
                row[2 * i : 2 * i + 2] -= nrm
                row[t_idx] = 1.0 if P.strict else 0.0
                r = -lam_coef(row, i, -hp) - lam_coef(row, j, -hn)
                rows.append(row)
                rhs.append(r)
    bounds = [(None, None)] * nv
    bounds[0] = bounds[1] = (0.0, 0.0)
    lo, hi = math.exp(P.log_lo), math.exp(P.log_hi)
    bounds += [(lo, hi)] * nl + [(0.0, 1.0)]
    c = np.zeros(n)
    c[t_idx] = -1.0
    res = optimize.linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs), bounds=bounds, method="highs")
    if res.status != 0:
        return None
    if P.strict and res.x[-1] <= 0:
        return None
    y = res.x[:-1].copy()
    y[nv:] = np.log(y[nv:])  # back to the annealer's log-ratio coordinates
    return y


def _snap(P: _Problem, x: np.ndarray) -> Optional[Arrangement]:
    V, L = P.unpack(x)
    V = V - V[0]
    for den in DENOMINATORS:
        hs = []
        for v, lam in zip(V, L):
            lam_q = Fraction(1) if P.cfg.translates_only else rationalize(float(lam), den)
            if P.fixed and not P.cfg.translates_only:
                lam_q = rationalize(P.lam_fixed, den)
            hs.append(Homothet(lam_q, (rationalize(v[0], den), rationalize(v[1], den))))
        A = Arrangement(P.K, tuple(hs))
        rep = verify_kappa_witness(A, mode="strict" if P.strict else "minkowski", require_intersecting=True)
        if rep.ok:
            return A
        log.debug("snap with denominator %d failed: %s", den, rep.first_violation)
    return None


def _restart(K: ConvexBody, cfg: SearchConfig, r: int) -> Tuple[Optional[Arrangement], float]:
    P = _Problem(K, cfg)
    rng = np.random.default_rng([cfg.seed, r])
    x = P.initial(rng)
    x = _anneal(P, x, rng)
    x = _local(P, x)
    E = P.energy(x, eps=EPS_SEARCH if P.strict else 0.0)
    candidates = []
    if not P.model.is_disc and E < 1e-3:
        y = _lp_polish(P, x)
        if y is not None:
            candidates.append(y)
    if E == 0 or (not P.strict and E < 1e-9):
        candidates.append(x)
    for c in candidates:
        A = _snap(P, c)
        if A is not None:
            return A, 0.0
    return None, E


def search_arrangement(K: ConvexBody, cfg: SearchConfig) -> Optional[Arrangement]:
    """Look for ``cfg.target_count`` homothets satisfying the requested conditions.

    Restarts are seeded independently, so they give the same result whether
    run serially or in worker processes.  The lowest-index success wins.
    Returns None when every restart misses or the time limit runs out.
    """
    _Model.of(K)
    t0 = time.monotonic()
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            futs = [ex.submit(_restart, K, cfg, r) for r in range(cfg.restarts)]
            results = [f.result() for f in futs]
        for r, (A, E) in enumerate(results):
            if A is not None:
                log.info("restart %d succeeded", r)
                return A
        return None
    for r in range(cfg.restarts):
        if cfg.time_limit is not None and time.monotonic() - t0 > cfg.time_limit:
            log.info("time limit reached after %d restarts", r)
            break
        A, E = _restart(K, cfg, r)
        if A is not None:
            log.info("restart %d succeeded", r)
            return A
        log.info("restart %d missed, residual energy %.3g", r, E)
    return None

