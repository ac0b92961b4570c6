import pytest

from readop.suites import SUITES, Group, Ranges, render_report, run_verification_suite
from readop.scalar import Scalar

SMALL = Ranges(jmax=300, Nmax=3, samples=20, order_count=5000, weight_Nmax=4, decay_budget=3000)


def test_group_keeps_the_tightest_witness():
    g = Group("s", "g")
    g.leq("a", Scalar(1), Scalar(4))
    g.leq("b", Scalar(3), Scalar(4))
    g.leq("c", Scalar(0), Scalar(4))
    assert g.passed and g.witness[0] == "b"
    g.leq("d", Scalar(5), Scalar(4))
    g.leq("e", Scalar(6), Scalar(4))
    assert not g.passed and g.failed == 2 and g.witness[0] == "d"


@pytest.mark.parametrize("name", list(SUITES))
def test_every_suite_passes_on_strict(strict, name):
    res = run_verification_suite(name, strict, SMALL)
    assert res.passed, "\n".join(res.lines())


def test_toy_inequalities_are_expected_failures(toy):
    res = run_verification_suite("prop8.2", toy, SMALL)
    assert not res.passed and res.expected_fail and res.ok
    assert res.verdict == "expected-fail (toy)"
    assert run_verification_suite("closed-form", toy, SMALL).passed


def test_reports_are_deterministic(strict):
    names = ["prop9.2", "gamma", "prop11.2"]
    a = render_report([run_verification_suite(n, strict, SMALL) for n in names], strict, SMALL, "h")
    b = render_report([run_verification_suite(n, strict, SMALL) for n in names], strict, SMALL, "h")
    assert a == b
    assert "overall suites=3 failed=0 verdict=pass" in a


def test_unknown_suite(strict):
    with pytest.raises(KeyError):
        run_verification_suite("prop99", strict)
