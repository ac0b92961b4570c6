"""Inductive choice of the stage parameters and the per-stage projections.

All growth conditions compare powers of two, so each one is decided on integer
exponents.  Conditions quantified over infinitely many indices are closed by a
lower bound on the exponent gap of the weight family:

    m(N+2, k) - m(N+1, k) >= bit_length(k+1)   once both rows have caught up,

which follows from floor(x+y) >= floor(x) + floor(y).  The finite stretch
before that bound takes over is scanned exactly.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import NotInHead, NotQualifying, SampleFailure, SearchBudgetExhausted
from .operator import STRICT, OperatorModel, RankMap, StageSpec, nn_level
from .ordering import PathGeometry
from .scalar import ONE, ZERO, Scalar
from .vectors import SparseVector, add_into
from .weights import WeightConfig, WeightTable

CONDITION_IDS = ("pos_bn", "2bn", "cond1", "cond2", "cond3", "cond4", "alpha_a_n")
HOLDS, FAILS, UNCHECKED = "holds", "fails", "unchecked"


@dataclass(frozen=True)
class SearchConfig:
    window: int = 4096  # exact check after b_n, always performed
    scan_limit: int = 1 << 22  # longest exact scan before falling back to a certificate index
    a_budget: int = 1 << 80


@dataclass(frozen=True)
class ConditionCheck:
    cid: str
    status: str
    lhs: str
    rhs: str
    checked: str
    note: str = ""


@dataclass(frozen=True)
class ConditionReport:
    n: int
    checks: tuple[ConditionCheck, ...]

    def get(self, cid: str) -> ConditionCheck:
        for c in self.checks:
            if c.cid == cid:
                return c
        raise KeyError(cid)

    def status(self, cid: str) -> str:
        return self.get(cid).status

    @property
    def all_hold(self) -> bool:
        return all(c.status == HOLDS for c in self.checks)

    def failed(self) -> list[str]:
        return [c.cid for c in self.checks if c.status == FAILS]

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            line = f"{c.cid} {c.status} lhs={c.lhs} rhs={c.rhs} range={c.checked}"
            if c.note:
                line += f" note={c.note}"
            out.append(line)
        return out


@dataclass(frozen=True)
class HeadSpace:
    """Span of e_j for ranks below ``dim``; ``split`` is pos(a_n,0)."""

    n: int
    dim: int
    split: int


def head_space(n: int, model: OperatorModel) -> HeadSpace:
    st = model.stages[n]
    return HeadSpace(n, st.pos_delta_next, st.pos_a)


# -- exponent helpers ---------------------------------------------------------


def _p2(e: int) -> str:
    return str(Scalar.pow2(e))


def gap_certificate_start(table: WeightTable, N: int, R: int) -> int:
    """First k from which m(N+1,k) - m(N,k) >= R is guaranteed by the bit-length bound."""
    start = max(table.catch_up_index(N), table.catch_up_index(N + 1))
    return max(start, (1 << max(R - 1, 0)) - 1)


def _gap_ok(table: WeightTable, N: int, k: int, R: int) -> bool:
    return table.exponent(N + 1, k) - table.exponent(N, k) >= R


def _check_gap_from(
    table: WeightTable, N: int, R: int, start: int, cfg: SearchConfig
) -> tuple[str, str, int | None]:
    """Decide ``gap(k) >= R`` for all k >= start: (status, checked range, failing k)."""
    cert = gap_certificate_start(table, N, R)
    end = cert if cert - start <= cfg.scan_limit else start + cfg.window + 1
    for k in range(start, max(end, start)):
        if not _gap_ok(table, N, k, R):
            return FAILS, f"[{start},{k}]", k
    if end >= cert:
        return HOLDS, f"[{start},{max(cert, start)}) exact + certificate from {cert}", None
    return UNCHECKED, f"[{start},{end}) exact; certificate only from {cert}", None


# -- stage context ------------------------------------------------------------


@dataclass(frozen=True)
class _Context:
    n: int
    level: int
    prev_level: int | None
    pos_delta: int
    offset: int  # pos(x,0) = x + offset for Delta_n <= x < b_(n+1)
    d_exp: int  # log2 D_(n-1)
    a_prev: int | None
    b: int | None
    pos_b: int | None
    s: int | None
    pos_s: int | None

    def pos(self, x: int) -> int:
        return x + self.offset


def _context(table: WeightTable, prev: OperatorModel | None, b: int | None, s: int | None) -> _Context:
    if prev is None:
        return _Context(0, nn_level(0), None, 1, 0, 0, None, None, None, None, None)
    last = prev.last
    n = last.n + 1
    bs = tuple(st.b for st in prev.stages[1:]) + (b,)
    geom = PathGeometry.build(bs, 2 * b + 2)
    offset = geom.column0_offset(n)
    pos_delta = last.pos_delta_next
    return _Context(
        n,
        nn_level(n),
        last.level,
        pos_delta,
        offset,
        last.D.log2_exact(),
        last.a,
        b,
        geom.pos_column0(b),
        s,
        None if s is None else s + offset,
    )


def _cond1_exp(ctx: _Context, table: WeightTable, a: int) -> int:
    """log2 of the left side of the cond1 quotient; holds iff >= 0."""
    return (
        ctx.pos(a) - ctx.pos_s - 1
        - table.exponent(ctx.level, a)
        - (1 + ctx.d_exp) * (ctx.pos_s - ctx.pos_delta - 1)
    )


def _alpha_top_exp(ctx: _Context, table: WeightTable, a: int) -> int:
    """log2 alpha at rank pos(a,0)-1 for stage 0 (later stages coincide with cond1)."""
    return ctx.pos(a) - 1 - ctx.pos_delta - table.exponent(ctx.level, a)


def _monotone_ok(ctx: _Context, table: WeightTable, a: int) -> bool:
    if ctx.n == 0:
        return _alpha_top_exp(ctx, table, a) >= 0
    return (
        _cond1_exp(ctx, table, a) >= 0
        and table.exponent(ctx.prev_level, ctx.a_prev) <= table.exponent(ctx.level, a)
        and ctx.d_exp + table.exponent(ctx.prev_level, ctx.b) <= table.exponent(ctx.level, a)
    )


def _cond3_ok(ctx: _Context, table: WeightTable, a: int) -> bool:
    return (
        table.exponent(ctx.level, a) + 2 * ctx.pos_delta + table.exponent(0, 0)
        <= table.exponent(ctx.level + 1, a)
    )


# -- searches -----------------------------------------------------------------


def search_b(table: WeightTable, prev: OperatorModel, cfg: SearchConfig) -> int:
    """Smallest b >= 2 pos(Delta_n,0) with cond 2bn on [b, infinity), when scannable."""
    last = prev.last
    lo = 2 * last.pos_delta_next
    N = last.level + 1
    R = 2 * last.pos_delta_next + last.D.log2_exact()
    cert = gap_certificate_start(table, N, R)
    if cert - lo > cfg.scan_limit:
        return max(lo, cert)
    for k in range(cert - 1, lo - 1, -1):
        if not _gap_ok(table, N, k, R):
            return k + 1
    return lo


def search_a(ctx: _Context, table: WeightTable, cfg: SearchConfig) -> int:
    """Minimal a > s (or a > 1 at stage 0) passing every condition on a."""
    lo = (ctx.s if ctx.n else ctx.pos_delta) + 1
    if _monotone_ok(ctx, table, lo):
        first = lo
    else:
        step = 1
        hi = lo + step
        while not _monotone_ok(ctx, table, hi):
            step *= 2
            hi = lo + step
            if hi > cfg.a_budget:
                raise SearchBudgetExhausted(
                    f"stage {ctx.n}: no a <= {cfg.a_budget} satisfies cond1/cond2/cond4", "cond1"
                )
        bad = hi - step // 2 if step > 1 else lo
        while hi - bad > 1:
            mid = (bad + hi) // 2
            if _monotone_ok(ctx, table, mid):
                hi = mid
            else:
                bad = mid
        first = hi
    # cond3 is not monotone in a; it holds for good from a certificate index
    jump = gap_certificate_start(table, ctx.level, 2 * ctx.pos_delta + table.exponent(0, 0))
    a = first
    while not _cond3_ok(ctx, table, a):
        a += 1
        if a - first > cfg.scan_limit:
            a = max(a, jump)
    return a


def extend_stage(
    model: OperatorModel | None,
    cfg: SearchConfig = SearchConfig(),
    weights: WeightConfig | None = None,
) -> tuple[OperatorModel, ConditionReport]:
    """Append the next strict stage (stage 0 when ``model`` is None)."""
    if model is None:
        weights = weights or WeightConfig()
        table = WeightTable(weights)
        ctx = _context(table, None, None, None)
        a = search_a(ctx, table, cfg)
        new = OperatorModel.from_specs([StageSpec(a)], STRICT, weights)
    else:
        table = model.table
        b = search_b(table, model, cfg)
        s = 2 * b + 2
        ctx = _context(table, model, b, s)
        a = search_a(ctx, table, cfg)
        new = OperatorModel.from_specs(
            model.specs() + [StageSpec(a, ONE, b, s)], model.mode, model.weights
        )
    report = check_conditions(new, new.last.n, cfg)
    if not report.all_hold:
        bad = [c for c in report.checks if c.status != HOLDS][0]
        raise SearchBudgetExhausted(
            f"stage {new.last.n}: condition {bad.cid} is {bad.status} ({bad.checked})", bad.cid
        )
    return new, report


# -- condition report ---------------------------------------------------------


def check_conditions(model: OperatorModel, n: int, cfg: SearchConfig = SearchConfig()) -> ConditionReport:
    """Evaluate every growth condition of stage n exactly."""
    table = model.table
    st = model.stages[n]
    N = st.level
    checks: list[ConditionCheck] = []

    def add(cid, ok, lhs, rhs, checked="exact", note=""):
        status = ok if isinstance(ok, str) else (HOLDS if ok else FAILS)
        checks.append(ConditionCheck(cid, status, str(lhs), str(rhs), checked, note))

    m = table.exponent
    if n == 0:
        for cid in ("pos_bn", "2bn", "cond1", "cond2", "cond4"):
            add(cid, HOLDS, "-", "-", "not applicable", "stage 0 has no b_0, s_0")
    else:
        prev = model.stages[n - 1]
        d_exp = prev.D.log2_exact()
        lo = 2 * (st.pos_delta - 1)
        add("pos_bn", lo <= st.b <= st.pos_b, f"{lo}<={st.b}", st.pos_b)
        R = 2 * st.pos_delta + d_exp
        status, rng, bad = _check_gap_from(table, prev.level + 1, R, st.b, cfg)
        k = st.b if bad is None else bad
        lhs = 2 * st.pos_delta + m(prev.level + 1, k)
        rhs = m(prev.level + 2, k) - d_exp
        add(
            "2bn",
            status,
            _p2(lhs),
            _p2(rhs),
            rng,
            f"k={k} ratio={_p2(m(prev.level + 2, k) - m(prev.level + 1, k))}",
        )
        e1 = (
            st.pos_a - st.pos_s - 1
            - m(N, st.a)
            - (1 + d_exp) * (st.pos_s - st.pos_delta - 1)
        )
        add("cond1", e1 >= 0, _p2(e1), 1)
        add("cond2", m(prev.level, prev.a) <= m(N, st.a), _p2(m(prev.level, prev.a) - m(N, st.a)), 1)
        add("cond4", d_exp + m(prev.level, st.b) <= m(N, st.a), _p2(d_exp + m(prev.level, st.b) - m(N, st.a)), 1)
    lhs3 = m(N, st.a) + 2 * st.pos_delta + m(0, 0)
    add("cond3", lhs3 <= m(N + 1, st.a), _p2(lhs3), _p2(m(N + 1, st.a)))
    top = model.alpha(st.pos_a - 1)
    add("alpha_a_n", top >= 1, top, 1)
    order = {cid: i for i, cid in enumerate(CONDITION_IDS)}
    checks.sort(key=lambda c: order[c.cid])
    return ConditionReport(n, tuple(checks))


# -- projections --------------------------------------------------------------


def _head_ranks(model: OperatorModel, n: int, x: SparseVector) -> RankMap:
    cut = model.stages[n].pos_delta_next
    out: RankMap = {}
    for c, v in x.items():
        k = _rank_or_none(model, c)
        if k is None or k >= cut:
            raise NotInHead(f"{c} lies outside H_{n} (ranks < {cut})")
        out[k] = v
    return out


def _rank_or_none(model: OperatorModel, c) -> int | None:
    from .errors import HorizonExceeded

    try:
        return model.rank(c)
    except HorizonExceeded:
        return None


def tau_ranks(model: OperatorModel, n: int, x: Mapping[int, Scalar]) -> RankMap:
    """Drop the orbit coordinates of index >= pos(a_n,0), basis vector by basis vector."""
    st = model.stages[n]
    big = st.eps.reciprocal()
    out: RankMap = {}
    for j, v in x.items():
        if j >= st.pos_delta_next:
            raise NotInHead(f"rank {j} lies outside H_{n} (ranks < {st.pos_delta_next})")
        if j < st.pos_a:
            add_into(out, j, v)
        else:
            for k, w in model.orbit(j - st.pos_a).items():
                add_into(out, k, -big * v * w)
    return out


def tau(n: int, x: SparseVector, model: OperatorModel) -> SparseVector:
    return model.from_ranks(tau_ranks(model, n, _head_ranks(model, n, x)))


def pi_ranks(model: OperatorModel, n: int, x: Mapping[int, Scalar]) -> RankMap:
    cut = model.stages[n].pos_delta_next
    return {k: v for k, v in x.items() if k < cut}


def pi(n: int, x: SparseVector, model: OperatorModel) -> SparseVector:
    """Truncation to the ranks below pos(Delta_(n+1),0)."""
    cut = model.stages[n].pos_delta_next
    keep = {}
    for c, v in x.items():
        k = _rank_or_none(model, c)
        # coordinates outside the geometry horizon are visited after the cut
        if k is not None and k < cut:
            keep[c] = v
    return SparseVector(keep)


def k_membership_ranks(model: OperatorModel, n: int, y: Mapping[int, Scalar]) -> int:
    norm = model.seminorm_ranks(y, 0)
    tnorm = model.seminorm_ranks(tau_ranks(model, n, y), 0)
    if not tnorm:
        raise NotQualifying("tau_n(y) = 0")
    m = max(1, math.ceil(norm.as_fraction()))
    if not Scalar(m) <= 2 * tnorm:
        raise NotQualifying(f"no integer scale: |y|_0 = {norm}, |tau y|_0 = {tnorm}")
    return m


def k_membership(n: int, y: SparseVector, model: OperatorModel) -> int:
    """Least integer m >= 1 with y/m in K_n."""
    return k_membership_ranks(model, n, _head_ranks(model, n, y))


def in_K(model: OperatorModel, n: int, y: Mapping[int, Scalar]) -> bool:
    return model.seminorm_ranks(y, 0) <= 1 and 2 * model.seminorm_ranks(tau_ranks(model, n, y), 0) >= 1


# -- sampling K_n and estimating D_n -------------------------------------------


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 1729
    basis: int = 24
    mixtures: int = 24
    adversarial: int = 16
    max_terms: int = 4


def _normalized(model: OperatorModel, y: RankMap) -> RankMap | None:
    norm = model.seminorm_ranks(y, 0)
    if not norm:
        return None
    inv = norm.reciprocal()
    return {k: v * inv for k, v in y.items()}


def _small_rational(rng: random.Random) -> Scalar:
    num = rng.randint(1, 60) * rng.choice((-1, 1))
    return Scalar(num) / rng.randint(1, 60)


def _pick_ranks(rng: random.Random, lo: int, hi: int, count: int) -> list[int]:
    if hi - lo <= count:
        return list(range(lo, hi))
    picks = {lo, hi - 1}
    while len(picks) < count:
        picks.add(rng.randrange(lo, hi))
    return sorted(picks)


def sample_K(n: int, model: OperatorModel, cfg: SamplerConfig = SamplerConfig()) -> list[RankMap]:
    """Deterministic sample of K_n as rank maps (every element lies in K_n exactly)."""
    st = model.stages[n]
    c, dim = st.pos_a, st.pos_delta_next
    rng = random.Random(f"{cfg.seed}:{n}")
    out: list[RankMap] = []

    def keep(y):
        if y and in_K(model, n, y):
            out.append(y)

    for j in _pick_ranks(rng, 0, dim, cfg.basis):
        y = _normalized(model, {j: ONE})
        keep(y)
    drawn = 0
    target = len(out) + cfg.mixtures
    while len(out) < target and drawn < 8 * cfg.mixtures:
        drawn += 1
        g: RankMap = {}
        for _ in range(rng.randint(2, cfg.max_terms)):
            add_into(g, rng.randrange(0, dim), _small_rational(rng))
        if not any(k < c for k in g):
            add_into(g, rng.randrange(0, c), _small_rational(rng))
        keep(_normalized(model, model.from_gamma_ranks(g)))
    big = st.eps.reciprocal()
    for j in _pick_ranks(rng, c, dim, cfg.adversarial):
        # e_j + (A + delta) gamma_k with tau y = delta gamma_k carrying exactly half the norm
        k = j - c
        w = model.seminorm_ranks({j: ONE}, 0)
        g = model.seminorm_ranks(model.orbit(k), 0)
        mag = (w + big * g) / (3 * g)
        if big - mag > 0:
            delta = -mag
        else:
            delta = -(w - big * g) / g
        y: RankMap = {}
        add_into(y, j, ONE)
        for r, v in model.orbit(k).items():
            add_into(y, r, (big + delta) * v)
        keep(_normalized(model, y))
    return out


@dataclass(frozen=True)
class DEstimate:
    D: Scalar
    samples: int
    worst_mass: Scalar
    worst_high: Scalar
    certificates: tuple = field(default=(), repr=False, compare=False)


def estimate_D(n: int, model: OperatorModel, cfg: SamplerConfig = SamplerConfig()) -> DEstimate:
    """Power-of-two bound for the coefficient and overflow masses over a sample of K_n."""
    from .cyclicity import find_polynomial_ranks

    worst_c = ZERO
    worst_r = ZERO
    certs = []
    ys = sample_K(n, model, cfg)
    for y in ys:
        cert = find_polynomial_ranks(y, n, model)
        if cert.deviation > 1:
            raise SampleFailure(f"no polynomial found for a sample of K_{n} (deviation {cert.deviation})")
        worst_c = max(worst_c, cert.mass)
        worst_r = max(worst_r, cert.high_mass)
        certs.append(cert)
    bound = max(ONE, worst_c, worst_r)
    return DEstimate(bound.pow2_ceiling(), len(ys), worst_c, worst_r, tuple(certs))


def build_strict(
    stages: int = 2,
    cfg: SearchConfig = SearchConfig(),
    sampler: SamplerConfig | Sequence[SamplerConfig] = SamplerConfig(),
    weights: WeightConfig | None = None,
    progress=None,
) -> tuple[OperatorModel, list[ConditionReport]]:
    """Run the search for stages 0..stages-1, estimating each D before the next stage."""
    samplers = [sampler] * stages if isinstance(sampler, SamplerConfig) else list(sampler)
    model = None
    reports = []
    for i in range(stages):
        model, rep = extend_stage(model, cfg, weights)
        reports.append(rep)
        n = model.last.n
        if progress:
            progress(f"stage {n}: a={model.last.a} b={model.last.b} pos_delta_next={model.last.pos_delta_next}")
        est = estimate_D(n, model, samplers[i])
        model = model.with_stage_D(n, est.D, est.samples)
        if progress:
            progress(f"stage {n}: D={est.D} from {est.samples} samples")
    return model, reports


def toy_model(
    a: Sequence[int] = (4, 16, 64, 250),
    b: Sequence[int] = (6, 30, 120),
    s: Sequence[int] = (14, 62, 242),
    D: Sequence = (),
    weights: WeightConfig | None = None,
) -> OperatorModel:
    """Small hand-picked parameters that keep the equational structure."""
    from .operator import TOY

    D = list(D) + [ONE] * (len(a) - len(D))
    specs = [StageSpec(a[0], Scalar(D[0]))]
    specs += [StageSpec(a[i], Scalar(D[i]), b[i - 1], s[i - 1]) for i in range(1, len(a))]
    return OperatorModel.from_specs(specs, TOY, weights)
