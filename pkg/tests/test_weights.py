from hypothesis import given, strategies as st

from readop.scalar import Scalar
from readop.vectors import Coord, SparseVector
from readop.weights import (
    WeightConfig,
    WeightTable,
    chase_exponents,
    column_seminorm,
    graded_seminorm,
    product_seminorm,
    ratio_decay_threshold,
)

TABLE = WeightTable()
rationals = st.builds(lambda p, q: Scalar(p) / q, st.integers(-50, 50), st.integers(1, 20))
vectors = st.dictionaries(st.tuples(st.integers(0, 60), st.integers(0, 4)), rationals, max_size=6).map(
    lambda d: SparseVector((Coord(*k), v) for k, v in d.items())
)


def test_closed_form_matches_recurrence():
    for growth in (1, 2):
        table = WeightTable(WeightConfig(growth))
        for N in range(8):
            chase = chase_exponents(table.config, N, 3000)
            assert [table.exponent(N, j) for j in range(3000)] == chase


def test_first_values():
    assert [TABLE.exponent(0, j) for j in range(5)] == [0, 1, 1, 2, 2]
    assert TABLE.weight(3, 0) == 8


@given(st.integers(0, 12), st.integers(0, 10**6))
def test_grid_monotonicity(N, j):
    m = TABLE.exponent(N, j)
    assert TABLE.exponent(N + 1, j) > m
    assert m <= TABLE.exponent(N, j + 1) <= m + 1


@given(vectors, vectors, st.integers(0, 5))
def test_seminorm_axioms(x, y, N):
    for f in (product_seminorm, graded_seminorm):
        assert f(x + y, N, TABLE) <= f(x, N, TABLE) + f(y, N, TABLE)
        assert f(x * Scalar(-3), N, TABLE) == 3 * f(x, N, TABLE)
        assert product_seminorm(x, N, TABLE) <= graded_seminorm(x, N, TABLE)
        assert f(x, N, TABLE) <= f(x, N + 1, TABLE)


def test_product_seminorm_ignores_high_columns():
    x = SparseVector([(Coord(0, 3), Scalar(5))])
    assert product_seminorm(x, 2, TABLE) == 0
    assert graded_seminorm(x, 2, TABLE) == 5 * TABLE.weight(2, 0)
    assert column_seminorm({0: Scalar(1), 1: Scalar(-1)}, 0, TABLE) == 3


def test_ratio_decay_threshold_is_sharp():
    eps = Scalar(1) / 64
    for N in range(4):
        j0 = ratio_decay_threshold(N, eps, 5000, TABLE)
        assert all(TABLE.ratio_exponent(N, j) >= 6 for j in range(j0, 5001))
        assert j0 == 0 or TABLE.ratio_exponent(N, j0 - 1) < 6
