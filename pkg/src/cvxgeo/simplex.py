"""Exact two-phase simplex over the rationals.

Solves ``min c.x  s.t.  A x = b, x >= 0`` with :class:`fractions.Fraction`
entries and Bland's rule, so it always terminates and never rounds.  An
infeasible problem comes back with a Farkas vector ``y`` such that
``y.A <= 0`` componentwise and ``y.b > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    farkas: tuple[Fraction, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.rows = rows
        self.basis = basis

    def pivot(self, r: int, col: int) -> None:
        prow = self.rows[r]
        p = prow[col]
        if p != 1:
            prow = self.rows[r] = [v / p for v in prow]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[col]
                if f:
                    self.rows[i] = [a - f * b for a, b in zip(row, prow)]
        self.basis[r] = col

    def reduced_costs(self, cost: Sequence[Fraction], ncols: int) -> list[Fraction]:
        red = list(cost[:ncols])
        for row, bcol in zip(self.rows, self.basis):
            cb = cost[bcol]
            if cb:
                for j in range(ncols):
                    if row[j]:
                        red[j] -= cb * row[j]
        return red

    def optimize(self, cost: Sequence[Fraction], allowed: int) -> bool:
        """Run Bland's rule on columns ``< allowed``; False means unbounded."""
        while True:
            red = self.reduced_costs(cost, allowed)
            enter = next((j for j in range(allowed) if red[j] < 0), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter)


def solve_lp(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimise ``c.x`` subject to ``A x = b``, ``x >= 0`` exactly."""
    m = len(A)
    n = len(c)
    c = [Fraction(v) for v in c]
    signs = [1] * m
    rows = []
    for i in range(m):
        if len(A[i]) != n:
            raise ValueError("constraint row length does not match objective")
        row = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            signs[i] = -1
            row = [-v for v in row]
            rhs = -rhs
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        rows.append(row + art + [rhs])

    tab = _Tableau(rows, [n + i for i in range(m)])
    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    tab.optimize(phase1, n + m)
    infeas = sum(row[-1] for row, bcol in zip(tab.rows, tab.basis) if bcol >= n)
    if infeas > 0:
        red = tab.reduced_costs(phase1, n + m)
        y = tuple(signs[i] * (1 - red[n + i]) for i in range(m))
        return LPResult(INFEASIBLE, farkas=y)

    # drive zero-level artificials out of the basis, dropping redundant rows
    keep = []
    for i in range(len(tab.rows)):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if col is None:
                continue
            tab.pivot(i, col)
        keep.append(i)
    tab = _Tableau([tab.rows[i][:n] + [tab.rows[i][-1]] for i in keep], [tab.basis[i] for i in keep])

    if not tab.optimize(c, n):
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for row, bcol in zip(tab.rows, tab.basis):
        x[bcol] = row[-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, x=tuple(x), value=value)


def find_feasible(A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Feasibility of ``A x = b, x >= 0``; returns a point or a Farkas vector."""
    n = len(A[0]) if A else 0
    return solve_lp([0] * n, A, b)
