"""Coordinates and finitely supported vectors in the product of copies of s."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from typing import NamedTuple

from .errors import FormatError
from .scalar import ZERO, Number, Scalar

VECTOR_MAGIC = "# readop-vector v1"
GAMMA_MAGIC = "# readop-rankmap v1"


class Coord(NamedTuple):
    """Basis position: row ``i`` inside copy ``j`` of s."""

    i: int
    j: int

    def __str__(self) -> str:
        return f"({self.i},{self.j})"

    @classmethod
    def parse(cls, text: str) -> "Coord":
        t = text.strip()
        if not (t.startswith("(") and t.endswith(")")):
            raise FormatError(f"bad coordinate: {text!r}")
        parts = t[1:-1].split(",")
        if len(parts) != 2:
            raise FormatError(f"bad coordinate: {text!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise FormatError(f"bad coordinate: {text!r}") from exc
        if i < 0 or j < 0:
            raise FormatError(f"negative coordinate: {text!r}")
        return cls(i, j)


class SparseVector(Mapping):
    """Immutable map ``Coord -> Scalar`` without zero entries."""

    __slots__ = ("_d",)

    def __init__(self, entries: Mapping | Iterable[tuple] = ()):
        d: dict[Coord, Scalar] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for c, v in items:
            c = c if isinstance(c, Coord) else Coord(*c)
            if c.i < 0 or c.j < 0:
                raise ValueError(f"negative coordinate {c}")
            v = Scalar(v)
            if v:
                d[c] = d[c] + v if c in d else v
                if not d[c]:
                    del d[c]
        self._d = d

    @classmethod
    def unit(cls, i: int, j: int = 0, value: Number = 1) -> "SparseVector":
        return cls({Coord(i, j): value})

    def __getitem__(self, c) -> Scalar:
        return self._d[c if isinstance(c, Coord) else Coord(*c)]

    def get(self, c, default=ZERO):
        return self._d.get(c if isinstance(c, Coord) else Coord(*c), default)

    def __iter__(self) -> Iterator[Coord]:
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SparseVector):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self == SparseVector(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._d.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{c}: {v}" for c, v in sorted(self._d.items()))
        return f"SparseVector({{{body}}})"

    def __add__(self, other: "SparseVector") -> "SparseVector":
        return vec_combine(1, self, 1, other)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return vec_combine(1, self, -1, other)

    def __neg__(self) -> "SparseVector":
        return self.scale(-1)

    def scale(self, a: Number) -> "SparseVector":
        a = Scalar(a)
        if not a:
            return SparseVector()
        out = SparseVector.__new__(SparseVector)
        out._d = {c: a * v for c, v in self._d.items()}
        return out

    def __mul__(self, a: Number) -> "SparseVector":
        return self.scale(a)

    __rmul__ = __mul__

    def columns(self) -> list[int]:
        return sorted({c.j for c in self._d})

    def to_text(self) -> str:
        lines = [VECTOR_MAGIC]
        lines += [f"{c} {v}" for c, v in sorted(self._d.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseVector":
        entries = []
        for n, raw in enumerate(text.splitlines()):
            line = raw.strip()
            if n == 0:
                if line != VECTOR_MAGIC:
                    raise FormatError(f"missing header {VECTOR_MAGIC!r}")
                continue
            if not line or line.startswith("#"):
                continue
            try:
                c, v = line.split()
                entries.append((Coord.parse(c), Scalar.parse(v)))
            except ValueError as exc:
                raise FormatError(f"line {n + 1}: {raw!r}") from exc
        return cls(entries)


def vec_combine(a: Number, x: SparseVector, b: Number, y: SparseVector) -> SparseVector:
    """``a*x + b*y`` with exact cancellation."""
    a, b = Scalar(a), Scalar(b)
    d: dict[Coord, Scalar] = {}
    if a:
        for c, v in x.items():
            d[c] = a * v
    if b:
        for c, v in y.items():
            w = b * v
            if c in d:
                s = d[c] + w
                if s:
                    d[c] = s
                else:
                    del d[c]
            else:
                d[c] = w
    out = SparseVector.__new__(SparseVector)
    out._d = d
    return out


def column_slice(x: SparseVector, j: int) -> dict[int, Scalar]:
    return {c.i: v for c, v in x.items() if c.j == j}


def rankmap_to_text(m: Mapping[int, Scalar]) -> str:
    lines = [GAMMA_MAGIC]
    lines += [f"{k} {Scalar(v)}" for k, v in sorted(m.items()) if v]
    return "\n".join(lines) + "\n"


def rankmap_from_text(text: str) -> dict[int, Scalar]:
    out: dict[int, Scalar] = {}
    for n, raw in enumerate(text.splitlines()):
        line = raw.strip()
        if n == 0:
            if line != GAMMA_MAGIC:
                raise FormatError(f"missing header {GAMMA_MAGIC!r}")
            continue
        if not line or line.startswith("#"):
            continue
        try:
            k, v = line.split()
            k_int = int(k)
            if k_int < 0:
                raise ValueError
            val = Scalar.parse(v)
        except ValueError as exc:
            raise FormatError(f"line {n + 1}: {raw!r}") from exc
        if val:
            out[k_int] = out.get(k_int, ZERO) + val
    return {k: v for k, v in out.items() if v}


def add_into(acc: dict, key, value: Scalar) -> None:
    """Accumulate ``value`` at ``key``, dropping exact zeros."""
    if not value:
        return
    if key in acc:
        s = acc[key] + value
        if s:
            acc[key] = s
        else:
            del acc[key]
    else:
        acc[key] = value
