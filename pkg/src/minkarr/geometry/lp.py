"""Exact rational linear programming.

Dense two-phase tableau simplex over :class:`fractions.Fraction` with Bland's
anti-cycling rule, so termination is guaranteed and every answer is a
certificate rather than a floating point approximation.  Problem sizes in this
package are tiny (tens of rows), which is the regime where this is adequate.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..rational import q

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[tuple] = None
    fun: Optional[Fraction] = None

    @property
    def success(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    # rows: constraint rows [coeffs..., rhs]; basis[i] is the basic column of row i
    def __init__(self, rows, basis, ncols):
        self.rows = rows
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r, c):
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            inv = 1 / piv
            row = [x * inv for x in row]
            self.rows[r] = row
        nz = [k for k, x in enumerate(row) if x]
        for i, other in enumerate(self.rows):
            if i != r:
                f = other[c]
                if f:
                    for k in nz:
                        other[k] -= f * row[k]
        self.basis[r] = c

    def reduced_costs(self, cost):
        # z_j - c_j style: reduced[j] = c_j - c_B B^-1 A_j
        red = list(cost) + [Fraction(0)]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for k in range(self.ncols + 1):
                    if row[k]:
                        red[k] -= cb * row[k]
        return red

    def run(self, cost, allowed):
        """Minimise ``cost`` over the current basis; Bland's rule."""
        while True:
            red = self.reduced_costs(cost)
            enter = next((j for j in range(self.ncols) if allowed[j] and red[j] < 0), None)
            if enter is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], enter)


def linprog(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: bool = False,
) -> LPResult:
    """Minimise ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x == b_eq``.

    Variables are nonnegative unless ``free`` is set, in which case each one
    is split into a difference of two nonnegative parts internally.
    """
    n = len(c)
    c = [q(v) for v in c]
    A_ub = [[q(v) for v in row] for row in A_ub]
    A_eq = [[q(v) for v in row] for row in A_eq]
    b_ub = [q(v) for v in b_ub]
    b_eq = [q(v) for v in b_eq]
    for row in (*A_ub, *A_eq):
        if len(row) != n:
            raise ValueError("constraint row length does not match objective")

    if free:
        c = c + [-v for v in c]
        A_ub = [row + [-v for v in row] for row in A_ub]
        A_eq = [row + [-v for v in row] for row in A_eq]
    nv = len(c)
    n_ub = len(A_ub)

    # standard form: [A | slack] x = b, b >= 0, then one artificial per row
    rows = []
    for i, row in enumerate(A_ub):
        slack = [Fraction(0)] * n_ub
        slack[i] = Fraction(1)
        rows.append((row + slack, b_ub[i]))
    for i, row in enumerate(A_eq):
        rows.append((row + [Fraction(0)] * n_ub, b_eq[i]))
    m = len(rows)
    ns = nv + n_ub
    ncols = ns + m
    tab_rows = []
    for i, (coeffs, rhs) in enumerate(rows):
        if rhs < 0:
            coeffs = [-v for v in coeffs]
            rhs = -rhs
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        tab_rows.append(coeffs + art + [rhs])
    tab = _Tableau(tab_rows, [ns + i for i in range(m)], ncols)

    phase1 = [Fraction(0)] * ns + [Fraction(1)] * m
    tab.run(phase1, [True] * ncols)
    infeas = sum((row[-1] for row, b in zip(tab.rows, tab.basis) if b >= ns), Fraction(0))
    if infeas > 0:
        return LPResult(INFEASIBLE)

    # drive remaining (zero-valued) artificials out of the basis
    keep = []
    for i in range(m):
        if tab.basis[i] >= ns:
            col = next((j for j in range(ns) if tab.rows[i][j] != 0), None)
            if col is None:
                continue  # redundant equality
            tab.pivot(i, col)
        keep.append(i)
    tab.rows = [tab.rows[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]

    cost = c + [Fraction(0)] * n_ub + [Fraction(0)] * m
    allowed = [True] * ns + [False] * m
    status = tab.run(cost, allowed)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)

    x = [Fraction(0)] * ncols
    for row, b in zip(tab.rows, tab.basis):
        x[b] = row[-1]
    x = x[:nv]
    if free:
        x = [x[i] - x[n + i] for i in range(n)]
    fun = sum((ci * xi for ci, xi in zip(c[:n], x)), Fraction(0))
    return LPResult(OPTIMAL, tuple(x), fun)


def feasible(A_ub=(), b_ub=(), A_eq=(), b_eq=(), free=False, nvars=None) -> Optional[tuple]:
    """Return a feasible point or ``None``."""
    if nvars is None:
        nvars = len(A_ub[0]) if A_ub else len(A_eq[0])
    res = linprog([0] * nvars, A_ub, b_ub, A_eq, b_eq, free=free)
    return res.x if res.success else None
