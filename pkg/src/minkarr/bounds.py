"""Explicit, non-asymptotic upper and lower bounds with auditable inputs.

Every :class:`BoundReport` can be re-evaluated from its ``inputs`` alone via
:func:`recompute`; the stored value is produced by that same code path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .geometry import ConvexBody, central_symmetral, symmetric_core, theta, volume
from .geometry.io import number_to_json

Num = Union[Fraction, float, int]

PROOF_LEVEL = "proof-level, non-asymptotic"


@dataclass
class BoundReport:
    name: str
    value: Num
    inputs: dict
    formula_id: str
    kind: str = "upper"
    note: str = PROOF_LEVEL
    extra: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return isinstance(self.value, (Fraction, int))

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, (Fraction, int, float)) and not isinstance(v, bool):
                return number_to_json(v)
            return v

        return {
            "name": self.name,
            "kind": self.kind,
            "formula_id": self.formula_id,
            "value": enc(self.value),
            "inputs": {k: enc(v) for k, v in self.inputs.items()},
            "extra": {k: enc(v) for k, v in self.extra.items()},
            "note": self.note,
        }


def log_steps(d: int, theta_value: Num) -> int:
    """``N = 1 + ceil((log d + log theta) / log(1 + 1/d))``.

    For rational theta the ceiling is found exactly as the least ``n >= 0`` with
    ``(1 + 1/d)^n >= d * theta``.  Float theta uses the float quotient with a
    guard band: an N within a few ulps of an integer is bumped by one, which only
    overshoots (safe for an upper bound).
    """
    if d < 1:
        raise ValueError("d must be positive")
    if isinstance(theta_value, (Fraction, int)):
        target = d * Fraction(theta_value)
        ratio = 1 + Fraction(1, d)
        n, acc = 0, Fraction(1)
        while acc < target:
            acc *= ratio
            n += 1
        return 1 + n
    x = (math.log(d) + math.log(theta_value)) / math.log1p(1 / d)
    c = math.ceil(x)
    if abs(x - round(x)) <= 4 * math.ulp(max(abs(x), 1.0)):
        c = round(x) + 1
    return 1 + max(c, 0)


def _volume_ratio(K: ConvexBody):
    if K.is_symmetric():
        return Fraction(1)
    return volume(central_symmetral(K)) / volume(symmetric_core(K))


def _packing_value(lam, d, ratio):
    return (lam + 1) ** d * ratio


def packing_upper(K: ConvexBody, lam) -> BoundReport:
    """``(lam+1)^d vol((K-K)/2) / vol(K ∩ -K)``; just ``(lam+1)^d`` for symmetric K."""
    lam = Fraction(lam) if isinstance(lam, (int, Fraction)) else lam
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    ratio = _volume_ratio(K)
    d = K.dim
    return BoundReport(
        name="packing_upper",
        value=_packing_value(lam, d, ratio),
        inputs={"d": d, "lambda": lam, "volume_ratio": ratio},
        formula_id="packing:(lam+1)^d*ratio",
    )


def _kappa_value(d, ratio, N):
    lam = 2 * (1 + Fraction(1, d))
    return _packing_value(lam, d, ratio) * (N + 1)


def kappa_upper(K: ConvexBody) -> BoundReport:
    """``P(K, 2(1+1/d)) (N+1)`` with ``N`` from the logarithmic cut at ``delta = 1/d``."""
    d = K.dim
    th = theta(K)
    N = log_steps(d, th)
    ratio = _volume_ratio(K)
    return BoundReport(
        name="kappa_upper",
        value=_kappa_value(d, ratio, N),
        inputs={"d": d, "theta": th, "N": N, "volume_ratio": ratio, "delta": Fraction(1, d)},
        formula_id="kappa:packing(2(1+1/d))*(N+1)",
        extra={"lambda": 2 * (1 + Fraction(1, d))},
    )


def _centroid_kappa_value(d, N):
    return (3 + Fraction(2, d)) ** d * math.comb(2 * d, d) * (N + 1)


def centroid_kappa_upper(d: int) -> BoundReport:
    """Body-free bound for the centroid: theta <= d and the volume ratio <= C(2d, d)."""
    N = log_steps(d, Fraction(d))
    return BoundReport(
        name="centroid_kappa_upper",
        value=_centroid_kappa_value(d, N),
        inputs={"d": d, "theta": Fraction(d), "N": N, "binom_2d_d": math.comb(2 * d, d)},
        formula_id="centroid:(3+2/d)^d*C(2d,d)*(N+1)",
    )


def kappa_upper_symmetric(d: int) -> Fraction:
    return _kappa_value(d, Fraction(1), log_steps(d, Fraction(1)))


def _chain_parts(d):
    D = math.floor(kappa_upper_symmetric(d))
    I_real = d * (1 + 2 ** (1 / d)) ** d
    return D, I_real, math.floor(I_real)


def chain_upper(d: int) -> BoundReport:
    """Length bound for a chain of balls: ``1 + |D| |I|`` with both factors floored."""
    D, I_real, I = _chain_parts(d)
    return BoundReport(
        name="chain_upper",
        value=1 + D * I,
        inputs={"d": d, "D_bound": D, "I_bound": I},
        formula_id="chain:1+floor(kappa_sym)*floor(d(1+2^(1/d))^d)",
        extra={"I_real": I_real, "N_increasing": d},
    )


def two_over_sqrt3_power(d: int):
    """``(2/sqrt 3)^d``: exact rational ``2^d / 3^(d/2)`` for even d, float otherwise."""
    if d % 2 == 0:
        return Fraction(2**d, 3 ** (d // 2))
    return (2 / math.sqrt(3)) ** d


def hadwiger_lower(d: int) -> BoundReport:
    """Both forms of the lower bound on h'(K): the stated one and the one the proof yields."""
    base = two_over_sqrt3_power(d)
    statement = base / (4 * d * d) if isinstance(base, Fraction) else base / (4 * d * d)
    proof = float(base) * 9 / (4 * math.e**2 * (d + 4) ** 2)
    return BoundReport(
        name="hadwiger_lower",
        value=statement,
        inputs={"d": d},
        formula_id="hlower:(2/sqrt3)^d/(4d^2)",
        kind="lower",
        note="statement value holds for sufficiently large d; proof value holds for every d",
        extra={"two_over_sqrt3_pow_d": base, "proof_value": proof},
    )


def proof_statement_crossover(max_d: int = 64):
    """Smallest d at which the proof value exceeds the statement value, or None."""
    for d in range(1, max_d + 1):
        r = hadwiger_lower(d)
        if r.extra["proof_value"] > float(r.value):
            return d
    return None


def recompute(report: BoundReport) -> Num:
    """Re-evaluate ``report.value`` from ``report.inputs`` only."""
    i = report.inputs
    if report.name == "packing_upper":
        return _packing_value(i["lambda"], i["d"], i["volume_ratio"])
    if report.name == "kappa_upper":
        assert i["N"] == log_steps(i["d"], i["theta"])
        return _kappa_value(i["d"], i["volume_ratio"], i["N"])
    if report.name == "centroid_kappa_upper":
        return _centroid_kappa_value(i["d"], log_steps(i["d"], i["theta"]))
    if report.name == "chain_upper":
        D, _, I = _chain_parts(i["d"])
        return 1 + D * I
    if report.name == "hadwiger_lower":
        return hadwiger_lower(i["d"]).value
    raise KeyError(report.name)
