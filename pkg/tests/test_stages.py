import random

import pytest
from hypothesis import given, strategies as st

from readop.errors import NotInHead, NotQualifying
from readop.operator import OperatorModel, StageSpec, STRICT
from readop.scalar import ONE, Scalar
from readop.stages import (
    HOLDS,
    SamplerConfig,
    SearchConfig,
    check_conditions,
    extend_stage,
    gap_certificate_start,
    in_K,
    k_membership,
    k_membership_ranks,
    pi,
    sample_K,
    tau,
    tau_ranks,
)
from readop.vectors import Coord, SparseVector
from readop.weights import WeightTable

rationals = st.builds(lambda p, q: Scalar(p) / q, st.integers(-20, 20), st.integers(1, 10))


def test_gap_certificate_against_direct_scan():
    table = WeightTable()
    for N in range(4):
        for R in range(1, 12):
            start = gap_certificate_start(table, N, R)
            assert all(table.ratio_exponent(N, k) >= R for k in range(start, start + 20000))


def test_search_reproduces_the_packaged_stages(strict):
    m0, rep0 = extend_stage(None)
    assert m0.last.a == strict.stages[0].a == 4
    assert rep0.all_hold
    m1, rep1 = extend_stage(OperatorModel.from_specs(strict.specs()[:1], STRICT))
    got = m1.last
    want = strict.stages[1]
    assert (got.b, got.s, got.a, got.pos_a, got.pos_delta_next) == (want.b, want.s, want.a, want.pos_a, want.pos_delta_next)
    assert rep1.all_hold


def test_strict_conditions_hold_and_toy_conditions_fail(strict, toy):
    for st_ in strict.stages:
        assert check_conditions(strict, st_.n).all_hold
    failed = check_conditions(toy, 2).failed()
    assert "cond3" in failed and "2bn" in failed


def test_condition_detects_a_smaller_a(strict):
    st1 = strict.stages[1]
    bad = OperatorModel.from_specs(
        [StageSpec(4, Scalar(16)), StageSpec(st1.a // 2, Scalar(8), st1.b, st1.s)], STRICT
    )
    rep = check_conditions(bad, 1)
    assert not rep.all_hold


def test_two_bn_search_is_minimal(strict):
    # b_1 - 1 would already break the 2b_n condition
    st1 = strict.stages[1]
    bad = OperatorModel.from_specs(
        [StageSpec(4, Scalar(16)), StageSpec(st1.a, Scalar(8), st1.b - 1, 2 * st1.b)], STRICT
    )
    assert check_conditions(bad, 1).status("2bn") != HOLDS


def test_tau_on_stage0_basis(strict):
    # below pos(a_0,0) tau is the identity; the echo rank 4 maps to -e_0 / eps_0
    for j in range(4):
        assert tau_ranks(strict, 0, {j: ONE}) == {j: ONE}
    assert tau_ranks(strict, 0, {4: ONE}) == {0: Scalar(-4)}
    with pytest.raises(NotInHead):
        tau_ranks(strict, 0, {5: ONE})


@given(st.dictionaries(st.integers(0, 4), rationals, max_size=5))
def test_tau_is_a_projection_killing_high_orbit_vectors(strict, x):
    t = tau_ranks(strict, 0, x)
    assert tau_ranks(strict, 0, t) == t
    # gamma_4 = T^4 e_0 lies in the kernel
    assert tau_ranks(strict, 0, strict.orbit(4)) == {}


def test_pi_and_tau_on_vectors(strict):
    x = SparseVector([(Coord(0, 0), ONE), (Coord(0, 1), Scalar(3)), (Coord(10**6, 0), ONE)])
    assert pi(0, x, strict) == SparseVector([(Coord(0, 0), ONE)])
    assert tau(0, SparseVector.unit(4), strict) == SparseVector([(Coord(0, 0), Scalar(-4))])


def test_k_membership_examples(strict):
    assert k_membership(0, SparseVector.unit(0), strict) == 1
    assert k_membership(0, SparseVector.unit(0, value=Scalar(5) / 2), strict) == 3
    with pytest.raises(NotQualifying):
        k_membership_ranks(strict, 0, strict.orbit(4))
    assert in_K(strict, 0, {0: ONE})
    assert not in_K(strict, 0, {0: Scalar(2)})


def test_sampler_is_deterministic_and_lands_in_K(strict):
    cfg = SamplerConfig(seed=11, basis=5, mixtures=30, adversarial=5)
    a = sample_K(0, strict, cfg)
    assert a == sample_K(0, strict, cfg)
    assert a != sample_K(0, strict, SamplerConfig(seed=12, basis=5, mixtures=30, adversarial=5))
    assert all(in_K(strict, 0, y) for y in a)
    for y in sample_K(1, strict, SamplerConfig(seed=3, basis=4, mixtures=10, adversarial=4)):
        assert in_K(strict, 1, y)
