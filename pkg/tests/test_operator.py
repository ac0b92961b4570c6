import pytest
from hypothesis import given, strategies as st

from readop.errors import ConstantTermPresent, HorizonExceeded, RankOutsideAlphaDomain
from readop.operator import apply_T, apply_T_power, convolve, from_gamma, t_power_e0, to_gamma
from readop.scalar import ONE, Scalar
from readop.vectors import Coord, SparseVector

rationals = st.builds(lambda p, q: Scalar(p) / q, st.integers(-30, 30), st.integers(1, 12))


def rank_maps(hi):
    return st.dictionaries(st.integers(0, hi - 1), rationals, max_size=5).map(
        lambda d: {k: v for k, v in d.items() if v}
    )


def test_stage0_orbit_by_hand(strict):
    # A_0 row is 1, 2, 2, 4, 4 and a_0 = 4, so eps_0 = 1/4
    assert [strict.alpha(j) for j in (1, 2, 3)] == [Scalar(1) / 4, Scalar(1) / 2, ONE]
    assert strict.orbit(4) == {4: Scalar(1) / 4, 0: ONE}
    assert strict.stages[0].eps == Scalar(1) / 4
    assert strict.image_of_rank(3) == {4: Scalar(1) / 4, 0: ONE}
    # T e_4 = (gamma_5 - gamma_1) / eps_0
    assert strict.image_of_rank(4) == {5: 4 * strict.alpha(5), 1: -ONE}


def test_alpha_domain(strict):
    with pytest.raises(RankOutsideAlphaDomain):
        strict.alpha(4)


def test_public_wrappers(strict):
    e0 = SparseVector.unit(0)
    assert apply_T(e0, strict) == SparseVector([(Coord(1, 0), Scalar(1) / 4)])
    assert apply_T_power(4, e0, strict) == t_power_e0(4, strict)
    x = SparseVector([(Coord(2, 0), Scalar(3)), (Coord(0, 1), Scalar(-1))])
    assert from_gamma(to_gamma(x, strict), strict) == x


@given(data=st.data())
def test_gamma_round_trip_and_shift(strict, data):
    x = data.draw(rank_maps(strict.rank_horizon - 40))
    assert strict.from_gamma_ranks(strict.to_gamma_ranks(x)) == x
    k = data.draw(st.integers(0, 30))
    y = dict(x)
    for _ in range(k):
        y = strict.apply_ranks(y)
    assert strict.power_ranks(k, x) == y


@given(data=st.data())
def test_polynomial_is_linear_combination_of_powers(toy, data):
    x = data.draw(rank_maps(200))
    coeffs = data.draw(st.dictionaries(st.integers(1, 8), rationals, max_size=3))
    expected = {}
    for i, c in coeffs.items():
        for k, v in strict_power(toy, i, x).items():
            expected[k] = expected.get(k, Scalar(0)) + c * v
    assert toy.polynomial_ranks(coeffs, x) == {k: v for k, v in expected.items() if v}


def test_polynomials_have_no_constant_term(toy):
    with pytest.raises(ConstantTermPresent):
        toy.polynomial_ranks({0: ONE}, {0: ONE})


def strict_power(model, i, x):
    y = dict(x)
    for _ in range(i):
        y = model.apply_ranks(y)
    return y


def test_convolve():
    c = {0: Scalar(1), 2: Scalar(3)}
    y = {1: Scalar(2), 2: Scalar(-1)}
    assert convolve(c, y) == {1: Scalar(2), 2: Scalar(-1), 3: Scalar(6), 4: Scalar(-3)}


def test_horizon(strict):
    with pytest.raises(HorizonExceeded):
        strict.image_of_rank(strict.rank_horizon - 1)
    with pytest.raises(HorizonExceeded):
        strict.orbit(strict.rank_horizon + 5)


def test_stage_positions_are_consistent(strict, toy):
    for model in (strict, toy):
        for st_ in model.stages:
            assert st_.pos_delta_next == st_.pos_a + st_.pos_delta
            assert model.coord(st_.pos_a) == Coord(st_.a, 0)
            assert st_.eps == Scalar.pow2(-model.table.exponent(st_.level, st_.a))
