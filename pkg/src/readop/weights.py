"""Power-of-two weight matrix A[N, j] and the seminorms built from it.

Exponents follow a greedy chase: ``m(N, 0) = N`` and ``m(N, j+1)`` moves one
step towards the target ``N + floor(g*(N+1)*log2(j+1))``, never more than one
unit per index.  Once the exponent has caught up with the target and the
target only moves by steps of at most one, the two coincide for good, so large
indices are answered in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import BudgetExhausted
from .scalar import ZERO, Scalar
from .vectors import SparseVector


@dataclass(frozen=True)
class WeightConfig:
    """``growth`` scales the logarithmic target; 1 is the default family."""

    growth: int = 1

    def __post_init__(self):
        if self.growth < 1:
            raise ValueError("growth must be a positive integer")

    def target(self, N: int, j: int) -> int:
        """floor(growth*(N+1)*log2(j+1)) computed on integers."""
        return ((j + 1) ** (self.growth * (N + 1))).bit_length() - 1


@dataclass
class _Row:
    prefix: list[int]  # m(N, j) for j < len(prefix)
    caught_up: int  # closed form valid from this index on


@dataclass
class WeightTable:
    config: WeightConfig = field(default_factory=WeightConfig)
    _rows: dict[int, _Row] = field(default_factory=dict, repr=False, compare=False)

    def _row(self, N: int) -> _Row:
        row = self._rows.get(N)
        if row is not None:
            return row
        if N < 0:
            raise ValueError("level must be non-negative")
        p = self.config.growth * (N + 1)
        prefix = [N]
        j = 0
        while True:
            t_next = self.config.target(N, j + 1)
            m = prefix[-1]
            prefix.append(m + 1 if m - N < t_next else m)
            j += 1
            # target steps are at most one once (j+2)^p < 2 (j+1)^p
            if prefix[-1] - N == t_next and (j + 2) ** p < 2 * (j + 1) ** p:
                break
        row = _Row(prefix, j)
        self._rows[N] = row
        return row

    def exponent(self, N: int, j: int) -> int:
        if j < 0:
            raise ValueError("index must be non-negative")
        row = self._row(N)
        if j < len(row.prefix):
            return row.prefix[j]
        return N + self.config.target(N, j)

    def catch_up_index(self, N: int) -> int:
        """Index from which the exponent equals its target exactly."""
        return self._row(N).caught_up

    def weight(self, N: int, j: int) -> Scalar:
        return Scalar.pow2(self.exponent(N, j))

    def ratio_exponent(self, N: int, j: int) -> int:
        """log2(A[N+1, j] / A[N, j])."""
        return self.exponent(N + 1, j) - self.exponent(N, j)


def chase_exponents(config: WeightConfig, N: int, count: int) -> list[int]:
    """Plain recurrence, used as an oracle for the closed form."""
    out = [N]
    for j in range(count - 1):
        m = out[-1]
        out.append(m + 1 if m - N < config.target(N, j + 1) else m)
    return out


def weight(N: int, j: int, table: WeightTable) -> Scalar:
    return table.weight(N, j)


def column_seminorm(col: Mapping[int, Scalar], N: int, table: WeightTable) -> Scalar:
    total = ZERO
    for i, v in col.items():
        if v:
            total = total + abs(v) * table.weight(N, i)
    return total


def product_seminorm(x: SparseVector, N: int, table: WeightTable) -> Scalar:
    """Sum of the column seminorms over columns 0..N."""
    total = ZERO
    for c, v in x.items():
        if c.j <= N:
            total = total + abs(v) * table.weight(N, c.i)
    return total


def graded_seminorm(x: SparseVector, N: int, table: WeightTable) -> Scalar:
    """Sum of the column seminorms over every occupied column."""
    total = ZERO
    for c, v in x.items():
        total = total + abs(v) * table.weight(N, c.i)
    return total


def ratio_decay_threshold(N: int, eps: Scalar, budget: int, table: WeightTable) -> int:
    """Smallest j0 with A[N,j]/A[N+1,j] <= eps on the whole range [j0, budget]."""
    eps = Scalar(eps)
    if not (ZERO < eps):
        raise ValueError("eps must be positive")
    j0 = None
    for j in range(budget, -1, -1):
        if Scalar.pow2(-table.ratio_exponent(N, j)) <= eps:
            j0 = j
        else:
            break
    if j0 is None:
        raise BudgetExhausted(f"A[{N},j]/A[{N + 1},j] > {eps} at j = {budget}")
    return j0
