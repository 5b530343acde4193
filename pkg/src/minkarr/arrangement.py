"""Homothet families and exact verification of the Minkowski conditions.

With the reference point moved to the origin, the centre of ``v + lam K`` is
``v``, and for distinct ``i, j``:

* Minkowski:        ``|v_i - v_j|_K >= lam_j``  (centre i not in the interior of j)
* strict Minkowski: ``|v_i - v_j|_K >  lam_j``  (centre i not in j at all)
* intersecting:     ``(v_i + lam_i K) ∩ (v_j + lam_j K) != ∅`` (closed sets)
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .geometry import ConvexBody, DimensionMismatch, GeometryError, homothets_intersect, translate
from .geometry.io import FormatError, _rat, _vec, body_from_json, body_to_json, number_to_json, vec_to_json
from .rational import q, qvec, sub

MINKOWSKI = "minkowski"
STRICT = "strict"
INTERSECTING = "intersecting"
_ORDER = {MINKOWSKI: 0, STRICT: 1, INTERSECTING: 2}


@dataclass(frozen=True)
class Homothet:
    lam: Fraction
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "lam", q(self.lam))
        object.__setattr__(self, "v", qvec(self.v))
        if self.lam <= 0:
            raise GeometryError("homothety ratio must be positive")


@dataclass(frozen=True)
class Arrangement:
    body: ConvexBody
    homothets: Tuple[Homothet, ...] = ()

    def __post_init__(self):
        hs = tuple(h if isinstance(h, Homothet) else Homothet(*h) for h in self.homothets)
        object.__setattr__(self, "homothets", hs)
        for h in hs:
            if len(h.v) != self.body.dim:
                raise DimensionMismatch(f"homothet translation of length {len(h.v)} in dimension {self.body.dim}")

    def __len__(self):
        return len(self.homothets)

    @classmethod
    def with_reference_point(cls, body: ConvexBody, p: Sequence, homothets) -> "Arrangement":
        """Re-express ``{v_i + lam_i K}`` with reference point ``p`` in the frame of ``K - p``.

        The homothet ``v + lam K`` equals ``(v + lam p) + lam (K - p)``, whose
        centre (the image of ``p``) becomes the new translation vector.
        """
        p = qvec(p)
        K = translate(body, tuple(-t for t in p))
        out = []
        for h in homothets:
            h = h if isinstance(h, Homothet) else Homothet(*h)
            out.append(Homothet(h.lam, tuple(a + h.lam * b for a, b in zip(h.v, p))))
        return cls(K, tuple(out))

    @classmethod
    def translates(cls, body: ConvexBody, centers) -> "Arrangement":
        return cls(body, tuple(Homothet(1, c) for c in centers))

    def to_json(self) -> dict:
        return {
            "body": body_to_json(self.body),
            "homothets": [{"lambda": number_to_json(h.lam), "v": vec_to_json(h.v)} for h in self.homothets],
        }

    @classmethod
    def from_json(cls, obj) -> "Arrangement":
        try:
            body = body_from_json(obj["body"])
            hs = [Homothet(_rat(h["lambda"]), _vec(h["v"], body.dim)) for h in obj.get("homothets", [])]
        except (KeyError, TypeError) as e:
            raise FormatError(f"malformed arrangement JSON: {e!r}") from None
        if "reference_point" in obj:
            return cls.with_reference_point(body, _vec(obj["reference_point"], body.dim), hs)
        return cls(body, tuple(hs))

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)


@dataclass
class VerificationReport:
    count: int
    minkowski: bool
    strict: bool
    pairwise_intersecting: bool
    first_violation: Optional[Tuple[int, int, str]] = None
    violations: dict = field(default_factory=dict)
    mode: str = MINKOWSKI
    require_intersecting: bool = True

    @property
    def ok(self) -> bool:
        """The requested conditions all hold."""
        flag = self.strict if self.mode == STRICT else self.minkowski
        return flag and (self.pairwise_intersecting or not self.require_intersecting)

    def to_json(self) -> dict:
        fv = None
        if self.first_violation is not None:
            i, j, cond = self.first_violation
            fv = {"i": i, "j": j, "condition": cond}
        return {
            "count": self.count,
            "mode": self.mode,
            "ok": self.ok,
            "minkowski": self.minkowski,
            "strict": self.strict,
            "pairwise_intersecting": self.pairwise_intersecting,
            "first_violation": fv,
            "violations": {k: list(v) for k, v in sorted(self.violations.items())},
        }


def _center_checks(K, hs, i, j):
    """Return (minkowski_ok, strict_ok) for centre i against homothet j."""
    s = K.compare_norm(sub(hs[i].v, hs[j].v), hs[j].lam)
    return s >= 0, s > 0


def _first_ordered(A: Arrangement, strict: bool):
    K, hs = A.body, A.homothets
    for i in range(len(hs)):
        for j in range(len(hs)):
            if i != j:
                ok, sok = _center_checks(K, hs, i, j)
                if not (sok if strict else ok):
                    return (i, j)
    return None


def is_minkowski(A: Arrangement) -> bool:
    return _first_ordered(A, strict=False) is None


def is_strict_minkowski(A: Arrangement) -> bool:
    return _first_ordered(A, strict=True) is None


def _pair_intersects(A, pair):
    i, j = pair
    a, b = A.homothets[i], A.homothets[j]
    return homothets_intersect(A.body, a.lam, a.v, b.lam, b.v)


def first_non_intersecting(A: Arrangement, threads: int = 1):
    pairs = [(i, j) for i in range(len(A)) for j in range(i + 1, len(A))]
    if threads > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(lambda p: _pair_intersects(A, p), pairs))
    else:
        results = []
        for p in pairs:
            r = _pair_intersects(A, p)
            results.append(r)
            if not r:
                break
    for p, r in zip(pairs, results):
        if not r:
            return p
    return None


def is_pairwise_intersecting(A: Arrangement, threads: int = 1) -> bool:
    return first_non_intersecting(A, threads) is None


def verify_kappa_witness(
    A: Arrangement, mode: str = MINKOWSKI, require_intersecting: bool = True, threads: int = 1
) -> VerificationReport:
    """Run every check and report the lexicographically first violation.

    ``mode`` selects which centre condition ``ok`` refers to; all three flags
    are always computed.
    """
    if mode not in (MINKOWSKI, STRICT):
        raise ValueError(f"unknown mode {mode!r}")
    mk = _first_ordered(A, strict=False)
    st = _first_ordered(A, strict=True)
    it = first_non_intersecting(A, threads)
    violations = {}
    if mk is not None:
        violations[MINKOWSKI] = mk
    if st is not None:
        violations[STRICT] = st
    if it is not None:
        violations[INTERSECTING] = it
    first = None
    if violations:
        cond, (i, j) = min(violations.items(), key=lambda kv: (kv[1], _ORDER[kv[0]]))
        first = (i, j, cond)
    return VerificationReport(
        count=len(A),
        minkowski=mk is None,
        strict=st is None,
        pairwise_intersecting=it is None,
        first_violation=first,
        violations=violations,
        mode=mode,
        require_intersecting=require_intersecting,
    )


def verify_chain(K: ConvexBody, points: Sequence, radii: Sequence) -> bool:
    """Every later point lies on the boundary sphere of every earlier ball.

    ``radii[-1]`` is never consulted, so it may be omitted.
    """
    if not K.is_symmetric():
        raise GeometryError("chain condition is defined for o-symmetric bodies")
    pts = [qvec(p) for p in points]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if K.compare_norm(sub(pts[j], pts[i]), radii[i]) != 0:
                return False
    return True
