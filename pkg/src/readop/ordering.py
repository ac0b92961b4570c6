"""Snake enumeration of N x N and its rank function.

The path starts at (0,0) and walks down column 0.  Each time it reaches a row
``b_n`` it makes a detour through columns 1..2n (first above row ``b_n``, then
below it) and comes back to column 0 one row lower.  Rows beyond the last
known ``b`` are only determined up to ``horizon_row``: the caller promises that
every later ``b`` exceeds it.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import HorizonExceeded
from .vectors import Coord


def validate_b(b: Sequence[int]) -> tuple[int, ...]:
    b = tuple(int(v) for v in b)
    if b and b[0] < 1:
        raise ValueError("b_1 must be at least 1")
    for lo, hi in zip(b, b[1:]):
        if not 2 * lo + 1 < hi:
            raise ValueError(f"b sequence violates 2*b_n+1 < b_(n+1) at ({lo}, {hi})")
    return b


def default_horizon(b: Sequence[int]) -> int:
    # any admissible next b is at least 2*b_n + 2
    return 2 * b[-1] + 1 if b else 0


class _Guards:
    """Lookup tables for the special rows of the successor function."""

    def __init__(self, b: tuple[int, ...]):
        self.at_b = {v: n for n, v in enumerate(b, 1)}
        self.at_2b1 = {2 * v + 1: n for n, v in enumerate(b, 1)}
        self.at_b1 = {v + 1: n for n, v in enumerate(b, 1)}
        self.at_2b = {2 * v: n for n, v in enumerate(b, 1)}


def _successor(c: Coord, g: _Guards) -> Coord:
    i, j = c
    even = j % 2 == 0
    hits = []
    n = g.at_b.get(i)
    if n is not None and even and j < 2 * n:
        hits.append(Coord(i, j + 1))
    n = g.at_2b1.get(i)
    if n is not None and not even and 0 < j <= 2 * n:
        hits.append(Coord(i, j + 1))
    if i == 0 and not even:
        hits.append(Coord(i, j + 1))
    n = g.at_b1.get(i)
    if n is not None and not even and j < 2 * n:
        hits.append(Coord(i, j - 1))
    n = g.at_2b.get(i)
    if n is not None and even and 0 < j <= 2 * n:
        hits.append(Coord(i, j - 1))
    if len(hits) > 1:
        raise AssertionError(f"successor cases overlap at {c}: {hits}")
    if hits:
        return hits[0]
    return Coord(i + 1, j) if even else Coord(i - 1, j)


def next_coord(c: Coord, b: Sequence[int], horizon_row: int | None = None) -> Coord:
    """Successor of ``c`` on the snake path defined by ``b``."""
    b = validate_b(b)
    h = _horizon(b, horizon_row)
    c = Coord(*c)
    if c.i > h:
        raise HorizonExceeded(f"successor of {c} depends on b values beyond row {h}", h)
    return _successor(c, _Guards(b))


def _horizon(b: tuple[int, ...], horizon_row: int | None) -> int:
    h = default_horizon(b)
    if horizon_row is not None:
        h = max(h, int(horizon_row))
    return h


def iterate_path(b: Sequence[int], horizon_row: int | None = None) -> Iterator[Coord]:
    """Yield the path coordinates by repeated application of the successor."""
    b = validate_b(b)
    h = _horizon(b, horizon_row)
    g = _Guards(b)
    c = Coord(0, 0)
    while True:
        yield c
        if c.i > h:
            raise HorizonExceeded(f"path leaves the horizon after {c}", h)
        c = _successor(c, g)


def path_prefix(count: int, b: Sequence[int], horizon_row: int | None = None) -> list[Coord]:
    out = []
    if count <= 0:
        return out
    for c in iterate_path(b, horizon_row):
        out.append(c)
        if len(out) == count:
            break
    return out


@dataclass(frozen=True)
class Run:
    """Consecutive path points inside one column."""

    col: int
    row: int  # first row visited
    step: int  # +1 walking down, -1 walking up
    length: int
    rank: int  # rank of the first point

    @property
    def row_lo(self) -> int:
        return self.row if self.step > 0 else self.row - self.length + 1

    @property
    def row_hi(self) -> int:
        return self.row + self.length - 1 if self.step > 0 else self.row

    def at(self, offset: int) -> Coord:
        return Coord(self.row + self.step * offset, self.col)


def detour_length(b: Sequence[int], n: int) -> int:
    """Number of path points strictly between (b_n, 0) and (b_n + 1, 0)."""
    bn = b[n - 1]
    inner = (2 * n - 2) * (bn - 2 * b[n - 2]) if n >= 2 else 0
    return inner + (bn + 1) + (2 * bn + 1) + (2 * n - 1) * bn


def _stage_runs(b: tuple[int, ...], n: int) -> list[tuple[int, int, int, int]]:
    """(col, first_row, step, length) for the detour of stage n."""
    bn = b[n - 1]
    top = 2 * b[n - 2] + 1 if n >= 2 else 0
    runs = []
    for col in range(1, 2 * n - 1):
        if col % 2:
            runs.append((col, bn, -1, bn - top + 1))
        else:
            runs.append((col, top, 1, bn - top + 1))
    runs.append((2 * n - 1, bn, -1, bn + 1))
    runs.append((2 * n, 0, 1, 2 * bn + 1))
    for col in range(2 * n - 1, 0, -1):
        if col % 2:
            runs.append((col, 2 * bn, -1, bn))
        else:
            runs.append((col, bn + 1, 1, bn))
    return runs


@dataclass(frozen=True)
class PathGeometry:
    """Run table of the snake path for a fixed ``b`` and horizon row."""

    b: tuple[int, ...]
    horizon_row: int
    runs: tuple[Run, ...] = field(repr=False, compare=False)
    _starts: tuple[int, ...] = field(repr=False, compare=False)
    _by_col: dict = field(repr=False, compare=False)
    _offsets: tuple[int, ...] = field(repr=False, compare=False)

    @classmethod
    def build(cls, b: Sequence[int], horizon_row: int | None = None) -> "PathGeometry":
        b = validate_b(b)
        h = _horizon(b, horizon_row)
        runs: list[Run] = []
        rank = 0
        row0 = 0
        offsets = [0]
        for n, bn in enumerate(b, 1):
            runs.append(Run(0, row0, 1, bn - row0 + 1, rank))
            rank += bn - row0 + 1
            for col, row, step, length in _stage_runs(b, n):
                runs.append(Run(col, row, step, length, rank))
                rank += length
            offsets.append(offsets[-1] + detour_length(b, n))
            row0 = bn + 1
        runs.append(Run(0, row0, 1, h - row0 + 1, rank))
        by_col: dict[int, list[tuple[int, int]]] = {}
        for idx, r in enumerate(runs):
            by_col.setdefault(r.col, []).append((r.row_lo, idx))
        for v in by_col.values():
            v.sort()
        return cls(
            b,
            h,
            tuple(runs),
            tuple(r.rank for r in runs),
            {k: (tuple(x[0] for x in v), tuple(x[1] for x in v)) for k, v in by_col.items()},
            tuple(offsets),
        )

    def with_horizon(self, horizon_row: int) -> "PathGeometry":
        return PathGeometry.build(self.b, max(horizon_row, self.horizon_row))

    @property
    def rank_limit(self) -> int:
        """One past the largest rank inside the horizon."""
        last = self.runs[-1]
        return last.rank + last.length

    def rank_to_coord(self, k: int) -> Coord:
        if k < 0:
            raise ValueError("negative rank")
        if k >= self.rank_limit:
            raise HorizonExceeded(
                f"rank {k} is beyond the horizon (largest valid rank {self.rank_limit - 1})",
                self.rank_limit - 1,
            )
        idx = bisect.bisect_right(self._starts, k) - 1
        r = self.runs[idx]
        return r.at(k - r.rank)

    def coord_to_rank(self, c: Coord) -> int:
        i, j = c
        if i < 0 or j < 0:
            raise ValueError(f"negative coordinate {c}")
        entry = self._by_col.get(j)
        if entry is not None:
            los, idxs = entry
            p = bisect.bisect_right(los, i) - 1
            if p >= 0:
                r = self.runs[idxs[p]]
                if r.row_lo <= i <= r.row_hi:
                    return r.rank + (i - r.row) * r.step
        raise HorizonExceeded(
            f"coordinate ({i},{j}) is not visited within the horizon "
            f"(largest valid rank {self.rank_limit - 1})",
            self.rank_limit - 1,
        )

    def pos_column0(self, x: int) -> int:
        """Rank of (x, 0) from the cumulative detour lengths."""
        if x < 0:
            raise ValueError("negative row")
        if x > self.horizon_row:
            raise HorizonExceeded(f"row {x} of column 0 is beyond horizon row {self.horizon_row}")
        crossed = bisect.bisect_left(self.b, x)
        return x + self._offsets[crossed]

    def column0_offset(self, stage: int) -> int:
        """Total detour length of stages 1..stage."""
        return self._offsets[stage]


def rank_to_coord(k: int, geom: PathGeometry) -> Coord:
    return geom.rank_to_coord(k)


def coord_to_rank(c: Coord, geom: PathGeometry) -> int:
    return geom.coord_to_rank(Coord(*c))


def pos_column0(x: int, geom: PathGeometry) -> int:
    return geom.pos_column0(x)
