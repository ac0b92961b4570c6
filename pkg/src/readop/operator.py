"""The weighted shift T, its orbit of e_0 and the orbit ("gamma") basis.

Ranks index the basis e_k along the snake path.  Every stage n owns the rank
interval [pos(delta_n), pos(delta_{n+1})).  Its lower part, up to pos(a_n), is
a pure weighted shift; its upper part echoes the start of the path:
T^j e_0 = eps_n e_j + T^(j - pos(a_n)) e_0.

Internally vectors are rank maps ``dict[int, Scalar]``; the public functions
accept and return :class:`SparseVector`.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .errors import ConstantTermPresent, HorizonExceeded, RankOutsideAlphaDomain
from .ordering import PathGeometry
from .scalar import ONE, ZERO, Scalar
from .vectors import SparseVector, add_into
from .weights import WeightConfig, WeightTable

RankMap = dict[int, Scalar]

STRICT = "strict"
TOY = "toy"


def nn_level(n: int) -> int:
    """Level sequence 0,1, 0,1,2, 0,1,2,3, ...; block k >= 1 holds 0..k."""
    if n < 0:
        raise ValueError("stage index must be non-negative")
    # block k starts at (k-1)(k+2)/2
    k = max(1, (math.isqrt(8 * n + 9) - 1) // 2)
    while (k - 1) * (k + 2) // 2 > n:
        k -= 1
    while k * (k + 3) // 2 <= n:
        k += 1
    return n - (k - 1) * (k + 2) // 2


def first_stage_with_level(N: int, start: int = 0) -> int:
    n = start
    while nn_level(n) != N:
        n += 1
    return n


@dataclass(frozen=True)
class StageParams:
    n: int
    level: int
    delta: int
    a: int
    delta_next: int
    D: Scalar
    eps: Scalar
    pos_delta: int
    pos_a: int
    pos_delta_next: int
    b: int | None = None
    s: int | None = None
    pos_b: int | None = None
    pos_s: int | None = None
    d_samples: int = 0

    @property
    def echo_length(self) -> int:
        return self.pos_delta_next - self.pos_a


@dataclass(frozen=True)
class StageSpec:
    """The free choices of one stage; positions are derived from them."""

    a: int
    D: Scalar = ONE
    b: int | None = None
    s: int | None = None
    d_samples: int = 0


@dataclass(frozen=True)
class OperatorModel:
    mode: str
    weights: WeightConfig
    stages: tuple[StageParams, ...]
    geometry: PathGeometry = field(compare=False, repr=False)
    table: WeightTable = field(compare=False, repr=False)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_specs(
        cls,
        specs: Sequence[StageSpec],
        mode: str = TOY,
        weights: WeightConfig | None = None,
    ) -> "OperatorModel":
        weights = weights or WeightConfig()
        table = WeightTable(weights)
        specs = list(specs)
        if not specs:
            raise ValueError("at least stage 0 is required")
        if specs[0].b is not None or specs[0].s is not None:
            raise ValueError("stage 0 takes no b or s")
        if any(sp.b is None or sp.s is None for sp in specs[1:]):
            raise ValueError("stages after 0 need both b and s")
        b = tuple(sp.b for sp in specs[1:])
        geom = PathGeometry.build(b, 0)
        stages: list[StageParams] = []
        delta = 1
        for n, sp in enumerate(specs):
            D = Scalar(sp.D)
            if not D.is_dyadic() or D < 1:
                raise ValueError(f"stage {n}: D must be a power of two >= 1, got {D}")
            if n == 0:
                if not delta < sp.a:
                    raise ValueError(f"stage 0 needs 1 < a_0, got a_0 = {sp.a}")
            else:
                if not delta < sp.b < 2 * sp.b < sp.s < sp.a:
                    raise ValueError(
                        f"stage {n}: need delta < b < 2b < s < a, got "
                        f"{delta}, {sp.b}, {sp.s}, {sp.a}"
                    )
            geom = geom.with_horizon(sp.a)
            pos_delta = geom.pos_column0(delta)
            delta_next = sp.a + pos_delta
            geom = geom.with_horizon(delta_next)
            if n + 1 < len(specs) and not delta_next < specs[n + 1].b:
                raise ValueError(
                    f"stage {n + 1}: b = {specs[n + 1].b} must exceed delta = {delta_next}"
                )
            level = nn_level(n)
            stages.append(
                StageParams(
                    n=n,
                    level=level,
                    delta=delta,
                    a=sp.a,
                    delta_next=delta_next,
                    D=D,
                    eps=table.weight(level, sp.a).reciprocal(),
                    pos_delta=pos_delta,
                    pos_a=geom.pos_column0(sp.a),
                    pos_delta_next=geom.pos_column0(delta_next),
                    b=sp.b,
                    s=sp.s,
                    pos_b=None if sp.b is None else geom.pos_column0(sp.b),
                    pos_s=None if sp.s is None else geom.pos_column0(sp.s),
                    d_samples=sp.d_samples,
                )
            )
            delta = delta_next
        return cls(mode, weights, tuple(stages), geom, table)

    def specs(self) -> list[StageSpec]:
        return [StageSpec(st.a, st.D, st.b, st.s, st.d_samples) for st in self.stages]

    def with_stage_D(self, n: int, D: Scalar, samples: int = 0) -> "OperatorModel":
        specs = self.specs()
        specs[n] = replace(specs[n], D=D, d_samples=samples)
        return OperatorModel.from_specs(specs, self.mode, self.weights)

    # -- bookkeeping --------------------------------------------------------

    @property
    def last(self) -> StageParams:
        return self.stages[-1]

    @property
    def rank_horizon(self) -> int:
        """Ranks below this value have a known orbit vector T^k e_0."""
        return self.last.pos_delta_next

    def stage_of(self, j: int) -> StageParams:
        """Stage whose rank interval contains j (rank 0 belongs to stage 0)."""
        if j < 0:
            raise ValueError("negative rank")
        if j >= self.rank_horizon:
            raise HorizonExceeded(
                f"rank {j} needs stage {len(self.stages)} (horizon {self.rank_horizon})",
                self.rank_horizon - 1,
            )
        starts = [st.pos_delta for st in self.stages]
        idx = max(0, bisect.bisect_right(starts, j) - 1)
        return self.stages[idx]

    def coord(self, k: int):
        return self.geometry.rank_to_coord(k)

    def rank(self, c) -> int:
        return self.geometry.coord_to_rank(c)

    def to_ranks(self, x: SparseVector) -> RankMap:
        return {self.geometry.coord_to_rank(c): v for c, v in x.items()}

    def from_ranks(self, m: Mapping[int, Scalar]) -> SparseVector:
        return SparseVector({self.geometry.rank_to_coord(k): v for k, v in m.items() if v})

    def weight(self, N: int, i: int) -> Scalar:
        return self.table.weight(N, i)

    def seminorm_ranks(self, x: Mapping[int, Scalar], N: int, graded: bool = True) -> Scalar:
        """Graded (all columns) or product (columns <= N) seminorm of a rank map."""
        total = ZERO
        for k, v in x.items():
            if v:
                c = self.geometry.rank_to_coord(k)
                if graded or c.j <= N:
                    total = total + abs(v) * self.table.weight(N, c.i)
        return total

    def classify_rank(self, j: int) -> tuple[str, int]:
        """Which of the five images of a basis vector applies at rank j."""
        if j == 0:
            return "origin", 0
        st = self.stage_of(j)
        if j < st.pos_a - 1:
            return "shift", st.n
        if j == st.pos_a - 1:
            return "wrap", st.n
        if j < st.pos_delta_next - 1:
            return "echo", st.n
        return "boundary", st.n

    # -- weights alpha ------------------------------------------------------

    def alpha(self, j: int) -> Scalar:
        st = self.stage_of(j)
        if not (st.pos_delta <= j < st.pos_a):
            raise RankOutsideAlphaDomain(f"rank {j} is not a pure shift rank")
        if st.n == 0:
            return Scalar.pow2(j - st.pos_delta) * st.eps
        prev = self.stages[st.n - 1]
        decay = (2 * prev.D).reciprocal()
        if j < st.pos_s:
            return st.eps * decay ** (j - st.pos_delta)
        top = st.eps * decay ** (st.pos_s - 1 - st.pos_delta)
        return top * Scalar.pow2(j - st.pos_s)

    # -- orbit of e_0 -------------------------------------------------------

    def orbit(self, j: int) -> RankMap:
        """T^j e_0 as a rank map, unfolding the echo recursion."""
        out: RankMap = {}
        while j > 0:
            st = self.stage_of(j)
            if j < st.pos_a:
                add_into(out, j, self.alpha(j))
                return out
            add_into(out, j, st.eps)
            j -= st.pos_a
        add_into(out, 0, ONE)
        return out

    def gamma_of_rank(self, j: int) -> RankMap:
        """Orbit-basis coordinates of e_j."""
        if j == 0:
            return {0: ONE}
        st = self.stage_of(j)
        if j < st.pos_a:
            return {j: self.alpha(j).reciprocal()}
        inv = st.eps.reciprocal()
        return {j: inv, j - st.pos_a: -inv}

    def to_gamma_ranks(self, x: Mapping[int, Scalar]) -> RankMap:
        out: RankMap = {}
        for j, v in x.items():
            for k, w in self.gamma_of_rank(j).items():
                add_into(out, k, v * w)
        return out

    def from_gamma_ranks(self, y: Mapping[int, Scalar]) -> RankMap:
        out: RankMap = {}
        for k, v in y.items():
            if not v:
                continue
            for j, w in self.orbit(k).items():
                add_into(out, j, v * w)
        return out

    def image_of_rank(self, j: int) -> RankMap:
        """T e_j from the explicit five-case table."""
        case, n = self.classify_rank(j)
        if case == "origin":
            return {1: self.alpha(1)}
        st = self.stages[n]
        if case == "shift":
            return {j + 1: self.alpha(j + 1) / self.alpha(j)}
        if case == "wrap":
            inv = self.alpha(j).reciprocal()
            out: RankMap = {}
            add_into(out, st.pos_a, inv * st.eps)
            add_into(out, 0, inv)
            return out
        if case == "echo":
            return {j + 1: ONE}
        if n + 1 >= len(self.stages):
            raise HorizonExceeded(
                f"T e_{j} needs stage {n + 1}, which is not constructed", j - 1
            )
        big = st.eps.reciprocal()
        out = {}
        add_into(out, st.pos_delta_next, big * self.alpha(st.pos_delta_next))
        add_into(out, st.pos_delta, -big * self.alpha(st.pos_delta))
        return out

    def apply_ranks(self, x: Mapping[int, Scalar]) -> RankMap:
        out: RankMap = {}
        for j, v in x.items():
            for k, w in self.image_of_rank(j).items():
                add_into(out, k, v * w)
        return out

    def shift_gamma(self, y: Mapping[int, Scalar], k: int) -> RankMap:
        out = {i + k: v for i, v in y.items() if v}
        if out and max(out) >= self.rank_horizon:
            raise HorizonExceeded(
                f"orbit index {max(out)} needs stage {len(self.stages)}",
                self.rank_horizon - 1,
            )
        return out

    def power_ranks(self, k: int, x: Mapping[int, Scalar]) -> RankMap:
        if k == 0:
            return dict(x)
        return self.from_gamma_ranks(self.shift_gamma(self.to_gamma_ranks(x), k))

    def polynomial_ranks(self, coeffs: Mapping[int, Scalar], x: Mapping[int, Scalar]) -> RankMap:
        """Sum c_i T^i x via a convolution in orbit coordinates."""
        if coeffs.get(0):
            raise ConstantTermPresent("polynomials here have no constant term")
        y = self.to_gamma_ranks(x)
        conv = convolve(coeffs, y)
        if conv and max(conv) >= self.rank_horizon:
            raise HorizonExceeded(
                f"orbit index {max(conv)} needs stage {len(self.stages)}",
                self.rank_horizon - 1,
            )
        return self.from_gamma_ranks(conv)


def convolve(c: Mapping[int, Scalar], y: Mapping[int, Scalar]) -> RankMap:
    out: RankMap = {}
    for i, ci in c.items():
        if not ci:
            continue
        for k, yk in y.items():
            add_into(out, i + k, ci * yk)
    return out


# -- public wrappers on SparseVector -----------------------------------------


def alpha(j: int, model: OperatorModel) -> Scalar:
    return model.alpha(j)


def t_power_e0(j: int, model: OperatorModel) -> SparseVector:
    return model.from_ranks(model.orbit(j))


def apply_T(x: SparseVector, model: OperatorModel) -> SparseVector:
    return model.from_ranks(model.apply_ranks(model.to_ranks(x)))


def to_gamma(x: SparseVector, model: OperatorModel) -> RankMap:
    return model.to_gamma_ranks(model.to_ranks(x))


def from_gamma(y: Mapping[int, Scalar], model: OperatorModel) -> SparseVector:
    return model.from_ranks(model.from_gamma_ranks(y))


def apply_T_power(k: int, x: SparseVector, model: OperatorModel) -> SparseVector:
    return model.from_ranks(model.power_ranks(k, model.to_ranks(x)))


def apply_polynomial(coeffs: Mapping[int, Scalar], x: SparseVector, model: OperatorModel) -> SparseVector:
    coeffs = {int(i): Scalar(v) for i, v in coeffs.items() if Scalar(v)}
    return model.from_ranks(model.polynomial_ranks(coeffs, model.to_ranks(x)))


def e0() -> SparseVector:
    return SparseVector.unit(0, 0)


def minus_e0(v: Mapping[int, Scalar]) -> RankMap:
    out = dict(v)
    add_into(out, 0, -ONE)
    return out
