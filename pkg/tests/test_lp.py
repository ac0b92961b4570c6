import random

import numpy as np
import pytest
from scipy.optimize import linprog

from readop.lp import Infeasible, Unbounded, linprog_exact
from readop.scalar import Scalar


def _random_lp(rng):
    n, m = rng.randint(2, 6), rng.randint(1, 5)
    cost = [rng.randint(-5, 5) for _ in range(n)]
    A = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]
    b = [rng.randint(-3, 8) for _ in range(m)]
    A_eq, b_eq = [], []
    if rng.random() < 0.4:
        A_eq = [[rng.randint(-3, 3) for _ in range(n)]]
        b_eq = [rng.randint(0, 4)]
    return cost, A, b, A_eq, b_eq


@pytest.mark.parametrize("seed", range(120))
def test_matches_highs(seed):
    rng = random.Random(seed)
    cost, A, b, A_eq, b_eq = _random_lp(rng)
    ref = linprog(cost, A_ub=A, b_ub=b, A_eq=A_eq or None, b_eq=b_eq or None, method="highs")
    try:
        res = linprog_exact(cost, A, b, A_eq, b_eq)
    except Infeasible:
        assert ref.status == 2
        return
    except Unbounded:
        assert ref.status == 3
        return
    assert ref.status == 0
    assert float(res.objective.as_fraction()) == pytest.approx(ref.fun, abs=1e-7)
    x = [v.as_fraction() for v in res.x]
    assert all(v >= 0 for v in x)
    assert all(sum(a * v for a, v in zip(row, x)) <= bb for row, bb in zip(A, b))
    assert all(sum(a * v for a, v in zip(row, x)) == bb for row, bb in zip(A_eq, b_eq))


def test_exact_fractional_optimum():
    # max x + y with 3x + y <= 2, x + 3y <= 2 -> x = y = 1/2
    res = linprog_exact([-1, -1], [[3, 1], [1, 3]], [2, 2])
    assert res.x == [Scalar(1) / 2, Scalar(1) / 2]
    assert res.objective == -1


def test_status_errors():
    with pytest.raises(Infeasible):
        linprog_exact([1], [[1]], [-1])
    with pytest.raises(Unbounded):
        linprog_exact([-1], [[-1]], [0])
