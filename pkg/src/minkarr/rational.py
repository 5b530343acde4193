"""Rational vector helpers shared by every exact code path."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]
Vec = tuple  # tuple of Fraction


def q(x) -> Fraction:
    """Coerce ints, Fractions, "p/q" strings and floats (exactly) to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            raise ValueError(f"rational strings must look like 'p/q', got {x!r}")
        return Fraction(s)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(x)
    try:
        # numpy scalars
        return q(x.item())
    except AttributeError:
        raise TypeError(f"cannot convert {type(x).__name__} to Fraction") from None


def qvec(xs: Iterable) -> Vec:
    return tuple(q(x) for x in xs)


def fmt(x: Fraction) -> str:
    return str(x)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a: Sequence, b: Sequence) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def scale(t, a: Sequence) -> Vec:
    return tuple(t * x for x in a)


def neg(a: Sequence) -> Vec:
    return tuple(-x for x in a)


def norm2_sq(a: Sequence):
    return sum((x * x for x in a), Fraction(0))


def is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def det(rows: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    m = [list(map(q, r)) for r in rows]
    n = len(m)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        piv = m[c][c]
        out *= piv
        for r in range(c + 1, n):
            f = m[r][c] / piv
            if f:
                row_r, row_c = m[r], m[c]
                for k in range(c, n):
                    row_r[k] -= f * row_c[k]
    return out * sign


def solve(a: Sequence[Sequence], b: Sequence):
    """Solve a square system exactly; returns None when singular."""
    n = len(a)
    m = [list(map(q, row)) + [q(bi)] for row, bi in zip(a, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return None
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(m[r][n] for r in range(n))


def rank(rows: Sequence[Sequence]) -> int:
    m = [list(map(q, r)) for r in rows]
    if not m:
        return 0
    ncol = len(m[0])
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def rationalize(x: float, max_den: int) -> Fraction:
    """Best rational approximation with bounded denominator (continued fractions)."""
    return Fraction(x).limit_denominator(max_den)


def rational_sphere_point(direction: Sequence[float], max_den: int = 10**6) -> Vec:
    """A point with rational coordinates lying exactly on the unit sphere.

    Rational points are dense on S^{d-1}: inverse stereographic projection maps
    rational points of R^{d-1} onto it.  The pole is chosen opposite the largest
    coordinate so the projection stays well conditioned.
    """
    u = [float(c) for c in direction]
    n = math.sqrt(sum(c * c for c in u))
    if n == 0:
        raise ValueError("zero direction")
    u = [c / n for c in u]
    d = len(u)
    if d == 1:
        return (Fraction(1 if u[0] > 0 else -1),)
    k = max(range(d), key=lambda i: abs(u[i]))
    s = -1 if u[k] > 0 else 1  # pole at s*e_k, opposite to u
    rest = [i for i in range(d) if i != k]
    # stereographic projection from pole s*e_k onto the hyperplane x_k = 0
    t = [rationalize(u[i] / (1 - s * u[k]), max_den) for i in rest]
    tt = sum((x * x for x in t), Fraction(0))
    out = [Fraction(0)] * d
    for i, ti in zip(rest, t):
        out[i] = 2 * ti / (tt + 1)
    out[k] = s * (tt - 1) / (tt + 1)
    return tuple(out)


def to_float(a: Sequence) -> tuple:
    return tuple(float(x) for x in a)
