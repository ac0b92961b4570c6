"""Polynomials that pull vectors of K_n back to e_0, and cyclicity certificates.

Vectors of H_n are handled in orbit coordinates, where T is the plain shift, so
P(T)y is the convolution c * y.  The target is the orbit index c = pos(a_n,0)
because gamma_c = eps_n e_c + e_0.  Writing y = L + t^j U with U(0) != 0, the
choice c(t) = t^(c-j) U^(-1) mod t^d gives

    c * y = t^c + t^(c-j) (U^(-1) mod t^d) L + (terms of index >= c + d),

so only the part below j and the overflow beyond the head remain.  Several
pivots j are tried; an exact L1 program over the same truncated system is the
fallback.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import (
    BoundViolated,
    HorizonExceeded,
    NotInTail,
    NotQualifying,
    ResidualTooLarge,
    Unresolved,
    ZeroVector,
)
from .lp import Infeasible, linprog_exact
from .operator import OperatorModel, RankMap, convolve, first_stage_with_level, minus_e0
from .scalar import ONE, ZERO, Scalar, scalar_sum
from .stages import k_membership_ranks, pi_ranks
from .vectors import SparseVector, add_into
from .weights import column_seminorm, product_seminorm

MAX_PIVOTS = 4


@dataclass(frozen=True)
class PolynomialCertificate:
    n: int
    level: int
    coeffs: dict
    mass: Scalar  # sum |c_i|
    deviation: Scalar  # graded norm of (c*y below the head size) - gamma_c
    low_norm: Scalar  # graded norm of the residual without the overflow terms
    high_mass: Scalar  # sum of |orbit coefficients| at indices >= pos(Delta_(n+1),0)
    residual: Scalar | None  # full graded residual, when stage n+1 exists
    pivot: int
    method: str

    @property
    def degree(self) -> int:
        return max(self.coeffs)

    def bound(self, D: Scalar) -> Scalar:
        """Residual bound low + high/D, valid once stage n+1 satisfies cond4."""
        return self.low_norm + self.high_mass / D


def _evaluate(
    model: OperatorModel, n: int, yg: Mapping[int, Scalar], coeffs: dict, pivot: int, method: str
) -> PolynomialCertificate:
    st = model.stages[n]
    dim = st.pos_delta_next
    conv = convolve(coeffs, yg)
    low = {k: v for k, v in conv.items() if k < dim}
    high = {k: v for k, v in conv.items() if k >= dim}
    level = st.level
    low_e = model.from_gamma_ranks(low)
    low_norm = model.seminorm_ranks(minus_e0(low_e), level)
    for k, v in model.orbit(st.pos_a).items():
        add_into(low_e, k, -v)
    deviation = model.seminorm_ranks(low_e, level)
    residual = None
    if n + 1 < len(model.stages):
        residual = model.seminorm_ranks(minus_e0(model.from_gamma_ranks(conv)), level)
    return PolynomialCertificate(
        n,
        level,
        dict(sorted(coeffs.items())),
        scalar_sum(abs(v) for v in coeffs.values()),
        deviation,
        low_norm,
        scalar_sum(abs(v) for v in high.values()),
        residual,
        pivot,
        method,
    )


def _division(yg: Mapping[int, Scalar], j: int, c: int, d: int) -> dict:
    u = [yg.get(j + i, ZERO) for i in range(d)]
    inv0 = u[0].reciprocal()
    v = [inv0]
    for m in range(1, d):
        acc = ZERO
        for i in range(1, m + 1):
            if u[i] and v[m - i]:
                acc = acc + u[i] * v[m - i]
        v.append(-acc * inv0)
    return {c - j + m: vm for m, vm in enumerate(v) if vm}


def _pivots(model: OperatorModel, yg: Mapping[int, Scalar], c: int) -> list[int]:
    below = sorted(k for k, v in yg.items() if k < c and v)
    if not below:
        raise NotQualifying("y has no orbit coordinate below pos(a_n,0)")
    weight = {k: abs(yg[k]) * model.seminorm_ranks(model.orbit(k), 0) for k in below}
    ranked = [below[0]] + sorted(below, key=lambda k: (-weight[k], k))
    out = []
    for k in ranked:
        if k not in out:
            out.append(k)
        if len(out) == MAX_PIVOTS:
            break
    return out


def _score(cert: PolynomialCertificate) -> tuple:
    return (cert.deviation > 1, max(cert.mass, cert.high_mass), cert.pivot)


def find_polynomial_ranks(
    y: Mapping[int, Scalar],
    n: int,
    model: OperatorModel,
    lp: str = "auto",
    mass_cap: Scalar | None = None,
) -> PolynomialCertificate:
    """``lp``: "never", "always", or "auto" (when division misses the bounds)."""
    st = model.stages[n]
    c, d = st.pos_a, st.pos_delta
    if any(k >= st.pos_delta_next for k in y):
        raise NotQualifying(f"y is not supported in H_{n}")
    yg = model.to_gamma_ranks(y)
    pivots = _pivots(model, yg, c)
    best = None
    for j in pivots:
        cert = _evaluate(model, n, yg, _division(yg, j, c, d), j, "division")
        if best is None or _score(cert) < _score(best):
            best = cert
    cap = st.D if mass_cap is None else Scalar(mass_cap)
    if lp == "always" or (
        lp == "auto" and (best.deviation > 1 or max(best.mass, best.high_mass) > cap)
    ):
        try:
            alt = lp_polynomial_ranks(y, n, model)
        except ValueError:
            alt = None
        if alt is not None and _score(alt) <= _score(best):
            best = alt
    if best.residual is not None and best.residual > 3:
        raise ResidualTooLarge(f"residual {best.residual} > 3 at stage {n}")
    return best


def find_polynomial(
    y: SparseVector, n: int, model: OperatorModel, lp: str = "auto"
) -> PolynomialCertificate:
    """Polynomial P without constant term with P(T)y close to e_0 in the N_n graded norm."""
    return find_polynomial_ranks(model.to_ranks(y), n, model, lp)


def _support_candidates(model: OperatorModel, yg: Mapping[int, Scalar], n: int, max_columns: int) -> list[int]:
    st = model.stages[n]
    c, d, dim = st.pos_a, st.pos_delta, st.pos_delta_next
    if dim - 1 <= max_columns:
        return list(range(1, dim))
    below = sorted(k for k, v in yg.items() if k < c and v)
    idx = sorted({c - j + m for j in below for m in range(d)})
    if len(idx) > max_columns:
        raise ValueError(f"linear program needs {len(idx)} coefficients (cap {max_columns})")
    return idx


def lp_polynomial_ranks(
    y: Mapping[int, Scalar], n: int, model: OperatorModel, max_columns: int = 64
) -> PolynomialCertificate:
    """Exact L1 program: minimise max(sum|c_i|, overflow mass) with deviation <= 1.

    The deviation is the graded N_n norm of (c*y restricted below the head
    size) - gamma_c read in the e basis; it is linear in c, so its bound becomes
    linear through split positive and negative parts.  Since
    |eps e_c|_{N_n} = 1, deviation <= 1 keeps the low residual below 2.
    """
    st = model.stages[n]
    c, dim = st.pos_a, st.pos_delta_next
    yg = model.to_gamma_ranks(y)
    if not any(k < c and v for k, v in yg.items()):
        raise NotQualifying("y has no orbit coordinate below pos(a_n,0)")
    idx = _support_candidates(model, yg, n, max_columns)
    ys = sorted(yg.items())
    # e-coordinates of the low part and orbit coefficients of the overflow, per c_i
    low_cols: dict[int, dict[int, Scalar]] = {}
    high_cols: dict[int, dict[int, Scalar]] = {}
    orbit_cache: dict[int, dict] = {}
    for t, i in enumerate(idx):
        for k, v in ys:
            m = i + k
            if m < dim:
                if m not in orbit_cache:
                    orbit_cache[m] = model.orbit(m)
                for p, w in orbit_cache[m].items():
                    add_into(low_cols.setdefault(p, {}), t, v * w)
            else:
                add_into(high_cols.setdefault(m, {}), t, v)
    target = model.orbit(c)
    lows = sorted(set(low_cols) | set(target))
    highs = sorted(high_cols)
    nc, nl, nh = len(idx), len(lows), len(highs)
    # variables: c+ c- | v+ v- | r+ r- | z
    ov, orr = 2 * nc, 2 * nc + 2 * nl
    nv = orr + 2 * nh + 1
    A_eq, b_eq = [], []
    for q, p in enumerate(lows):
        row = [ZERO] * nv
        for t, v in low_cols.get(p, {}).items():
            row[t], row[nc + t] = v, -v
        row[ov + q], row[ov + nl + q] = -ONE, ONE
        A_eq.append(row)
        b_eq.append(target.get(p, ZERO))  # v_p = (c*y)_p - (gamma_c)_p
    for h, m in enumerate(highs):
        row = [ZERO] * nv
        for t, v in high_cols[m].items():
            row[t], row[nc + t] = v, -v
        row[orr + h], row[orr + nh + h] = -ONE, ONE
        A_eq.append(row)
        b_eq.append(ZERO)
    mass = [ONE] * (2 * nc) + [ZERO] * (nv - 2 * nc - 1) + [-ONE]
    over = [ZERO] * orr + [ONE] * (2 * nh) + [-ONE]
    w = [model.weight(st.level, model.coord(p).i) for p in lows]
    low = [ZERO] * ov + w + w + [ZERO] * (2 * nh + 1)
    cost = [ZERO] * nv
    cost[-1] = ONE
    try:
        res = linprog_exact(cost, [mass, over, low], [0, 0, 1], A_eq, b_eq)
    except Infeasible as exc:
        raise ValueError("no polynomial on this support reaches deviation <= 1") from exc
    coeffs = {}
    for t, i in enumerate(idx):
        v = res.x[t] - res.x[nc + t]
        if v:
            coeffs[i] = v
    return _evaluate(model, n, yg, coeffs, min(k for k, v in yg.items() if v), "lp")


# -- heads, tails and certificates ---------------------------------------------


def _split(model: OperatorModel, x: SparseVector, n: int) -> tuple[RankMap, SparseVector]:
    cut = model.stages[n].pos_delta_next
    head: RankMap = {}
    tail = {}
    for c, v in x.items():
        try:
            k = model.rank(c)
        except HorizonExceeded:
            k = None
        if k is not None and k < cut:
            head[k] = v
        else:
            tail[c] = v
    return head, SparseVector(tail)


def _candidates(model: OperatorModel, N: int, need_next: bool) -> list[int]:
    limit = len(model.stages) - (1 if need_next else 0)
    return [st.n for st in model.stages[:limit] if st.level == N]


def _unresolved(model: OperatorModel, N: int, tried: list[int]) -> Unresolved:
    start = tried[-1] + 1 if tried else 0
    first = first_stage_with_level(N, start)
    msg = f"requires stage n with N_n={N} (first candidate n={first})"
    if first < len(model.stages):
        msg += f"; stage {first + 1} must be constructed as well"
    return Unresolved(msg)


def head_qualify(x: SparseVector, N: int, model: OperatorModel) -> tuple[int, int]:
    """First constructed stage n with level N whose head of x lies in some m K_n."""
    if not x:
        raise ZeroVector("x = 0")
    tried = _candidates(model, N, need_next=False)
    for n in tried:
        head, _ = _split(model, x, n)
        if not head:
            continue
        try:
            return n, k_membership_ranks(model, n, head)
        except NotQualifying:
            continue
    raise _unresolved(model, N, tried)


@dataclass(frozen=True)
class TailCheck:
    i: int
    j: int | None  # None for the aggregated vector
    lhs: Scalar
    rhs: Scalar

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs


def tail_bound_check(
    x_tail: SparseVector, n: int, model: OperatorModel, i_values, per_basis: bool = True
) -> list[TailCheck]:
    """Exact checks of |T^i x|_{N_n} <= |x|_{N_n+2} / D_n for x in the tail after stage n."""
    st = model.stages[n]
    xr = model.to_ranks(x_tail)
    bad = [k for k in xr if k < st.pos_delta_next]
    if bad:
        raise NotInTail(f"rank {min(bad)} lies in H_{n}")
    N = st.level
    inv = st.D.reciprocal()
    out = []
    for i in i_values:
        if not 1 <= i <= st.pos_delta_next:
            raise ValueError(f"i = {i} outside [1, {st.pos_delta_next}]")
        if per_basis:
            for j in sorted(xr):
                lhs = model.seminorm_ranks(model.power_ranks(i, {j: ONE}), N, graded=False)
                rhs = inv * model.seminorm_ranks({j: ONE}, N + 2, graded=False)
                out.append(TailCheck(i, j, lhs, rhs))
        lhs = model.seminorm_ranks(model.power_ranks(i, xr), N, graded=False)
        rhs = inv * model.seminorm_ranks(xr, N + 2, graded=False)
        out.append(TailCheck(i, None, lhs, rhs))
    return out


@dataclass(frozen=True)
class CyclicityReport:
    x: SparseVector
    N: int
    k0: int
    scale: Scalar  # x was multiplied by this before qualification
    n: int
    m: int
    certificate: PolynomialCertificate
    coeffs: dict  # polynomial Q with Q(T)x close to e_0
    tail_norm: Scalar
    final_norm: Scalar

    @property
    def passed(self) -> bool:
        return self.final_norm <= 4

    def lines(self) -> list[str]:
        cert = self.certificate
        out = [
            f"N = {self.N}",
            f"k0 = {self.k0}",
            f"scale = {self.scale}",
            f"stage = {self.n}",
            f"m = {self.m}",
            f"method = {cert.method}",
            f"pivot = {cert.pivot}",
            f"head_residual = {cert.residual}",
            f"tail_norm = {self.tail_norm}",
            f"final_norm = {self.final_norm}",
            f"verdict = {'PASS' if self.passed else 'FAIL'}",
            "coefficients:",
        ]
        out += [f"{i} {v}" for i, v in sorted(self.coeffs.items())]
        return out


def cyclic_certificate(x: SparseVector, N: int, model: OperatorModel) -> CyclicityReport:
    """Polynomial Q with |Q(T)x - e_0|_N <= 4, evaluated exactly on the whole of x."""
    if not x:
        raise ZeroVector("x = 0")
    k0 = min(x.columns())
    col = {c.i: v for c, v in x.items() if c.j == k0}
    scale = 2 / column_seminorm(col, 0, model.table)
    xs = x.scale(scale)
    tried = _candidates(model, N, need_next=True)
    for n in tried:
        head, tail = _split(model, xs, n)
        tail_norm = product_seminorm(tail, N + 2, model.table)
        if not head or tail_norm > 1:
            continue
        try:
            m = k_membership_ranks(model, n, head)
        except NotQualifying:
            continue
        y = {k: v / m for k, v in head.items()}
        cert = find_polynomial_ranks(y, n, model)
        factor = scale / m
        q = {i: v * factor for i, v in cert.coeffs.items()}
        try:
            image = model.polynomial_ranks(q, model.to_ranks(x))
        except HorizonExceeded as exc:
            raise Unresolved(f"x reaches beyond the constructed stages: {exc}") from exc
        final = model.seminorm_ranks(minus_e0(image), N, graded=False)
        if final > 4:
            raise BoundViolated(f"|Q(T)x - e_0|_{N} = {final} > 4 at stage {n}")
        return CyclicityReport(x, N, k0, scale, n, m, cert, q, tail_norm, final)
    raise _unresolved(model, N, tried)
