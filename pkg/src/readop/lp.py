"""Small dense two-phase simplex over exact scalars (Bland's rule)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .scalar import ONE, ZERO, Scalar


class Infeasible(Exception):
    pass


class Unbounded(Exception):
    pass


@dataclass
class LPResult:
    x: list[Scalar]
    objective: Scalar
    pivots: int


def _pivot(tab: list[list[Scalar]], basis: list[int], r: int, c: int) -> None:
    row = tab[r]
    p = row[c]
    inv = p.reciprocal()
    tab[r] = row = [v * inv if v else v for v in row]
    for k, other in enumerate(tab):
        if k == r:
            continue
        f = other[c]
        if f:
            tab[k] = [a - f * b if b else a for a, b in zip(other, row)]
    basis[r] = c


def _run(tab: list[list[Scalar]], basis: list[int], allowed: int, max_pivots: int) -> int:
    """Minimise the objective stored in the last row (reduced costs form)."""
    m = len(tab) - 1
    count = 0
    while True:
        obj = tab[-1]
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return count
        best = None
        leave = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise Unbounded("objective is unbounded below")
        _pivot(tab, basis, leave, enter)
        count += 1
        if count > max_pivots:
            raise RuntimeError("simplex pivot limit reached")


def linprog_exact(
    cost: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    max_pivots: int = 100_000,
) -> LPResult:
    """Minimise ``cost @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    n = len(cost)
    cost = [Scalar(v) for v in cost]
    rows: list[tuple[list[Scalar], Scalar, bool]] = []
    for a, b in zip(A_ub, b_ub):
        rows.append(([Scalar(v) for v in a], Scalar(b), True))
    for a, b in zip(A_eq, b_eq):
        rows.append(([Scalar(v) for v in a], Scalar(b), False))
    m = len(rows)
    n_slack = sum(1 for r in rows if r[2])
    width = n + n_slack + m + 1  # structural, slack, artificial, rhs
    tab: list[list[Scalar]] = []
    basis: list[int] = []
    slack = n
    for i, (a, b, is_ub) in enumerate(rows):
        row = a + [ZERO] * (width - n)
        if is_ub:
            row[slack] = ONE
        flip = b < 0
        if flip:
            row = [-v for v in row]
            b = -b
        row[-1] = b
        if is_ub and not flip:
            basis.append(slack)
        else:
            row[n + n_slack + i] = ONE
            basis.append(n + n_slack + i)
        if is_ub:
            slack += 1
        tab.append(row)
    art_start = n + n_slack
    pivots = 0
    # phase one: minimise the sum of artificials
    phase1 = [ZERO] * width
    for i in range(m):
        if basis[i] >= art_start:
            for j in range(width):
                if j < art_start or j == width - 1:
                    phase1[j] = phase1[j] - tab[i][j]
    tab.append(phase1)
    if any(b >= art_start for b in basis):
        pivots += _run(tab, basis, art_start, max_pivots)
        if tab[-1][-1] < 0:
            raise Infeasible("constraints are infeasible")
        for i in range(m):
            if basis[i] >= art_start:
                col = next((j for j in range(art_start) if tab[i][j]), None)
                if col is not None:
                    _pivot(tab, basis, i, col)
    # phase two
    obj = [ZERO] * width
    for j in range(n):
        obj[j] = cost[j]
    for i in range(m):
        cb = cost[basis[i]] if basis[i] < n else ZERO
        if cb:
            obj = [o - cb * t for o, t in zip(obj, tab[i])]
    tab[-1] = obj
    pivots += _run(tab, basis, art_start, max_pivots)
    x = [ZERO] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i][-1]
    value = ZERO
    for cj, xj in zip(cost, x):
        value = value + cj * xj
    return LPResult(x, value, pivots)
