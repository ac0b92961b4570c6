"""Acceptance criteria AC1-AC13, one test each, with exact comparisons throughout.

Each test records a "ACk PASS/FAIL ..." line; the lines are printed in the
pytest terminal summary and immediately when running with ``-s``.
"""

import subprocess
import sys
import time

import pytest

from readop import params_io
from readop.cli import packaged_params, random_head_vector
from readop.cyclicity import cyclic_certificate, find_polynomial_ranks, lp_polynomial_ranks
from readop.operator import minus_e0
from readop.ordering import PathGeometry, iterate_path
from readop.scalar import ONE, Scalar
from readop.stages import SamplerConfig, in_K, sample_K
from readop.suites import Ranges, run_verification_suite, tail_pairs, _rng
from readop.vectors import Coord, SparseVector


@pytest.fixture
def verdict(acceptance_log):
    def record(ac: str, ok: bool, detail: str) -> None:
        line = f"{ac} {'PASS' if ok else 'FAIL'}  {detail}"
        acceptance_log.append(line)
        print(line)
        assert ok, line

    return record


def _suite(name, model, ranges=Ranges()):
    res = run_verification_suite(name, model, ranges)
    checks = sum(g.count for g in res.groups)
    return res, checks


def test_ac1_ordering_oracle(verdict):
    t0 = time.time()
    # rows beyond b_3 = 100 are declared free of further b values up to row 2*10^5
    geom = PathGeometry.build((6, 30, 100), horizon_row=200_000)
    limit = 200_000
    seen = set()
    ok = True
    for k, c in zip(range(limit + 1), iterate_path((6, 30, 100), 200_000)):
        ok &= geom.rank_to_coord(k) == c and geom.coord_to_rank(c) == k and c not in seen
        seen.add(c)
    elapsed = time.time() - t0
    ok &= len(seen) == limit + 1 and elapsed < 10
    verdict("AC1", ok, f"ranks 0..{limit} agree, distinct, round-trip; {elapsed:.1f}s")


def test_ac2_ordering_fixtures(verdict):
    geom = PathGeometry.build((6, 30))
    want = {(7, 0): 33, (30, 0): 56, (0, 1): 13, (0, 2): 14}
    got = {c: geom.coord_to_rank(Coord(*c)) for c in want}
    verdict("AC2", got == want, f"pos values {got}")


def test_ac3_position_recursion(verdict, strict, toy):
    res_s, n_s = _suite("eq-pos", strict)
    res_t, n_t = _suite("eq-pos", toy)
    ok = res_s.passed and res_t.passed and len(strict.stages) == 2 and len(toy.stages) == 4
    verdict("AC3", ok, f"strict stages 0-1 and toy stages 0-3 ({n_s + n_t} exact checks)")


def test_ac4_weight_grid(verdict, strict):
    t0 = time.time()
    res, checks = _suite("prop2.1", strict)
    elapsed = time.time() - t0
    verdict("AC4", res.passed and elapsed < 60, f"{checks} checks, N<=10, j<=5000; {elapsed:.1f}s")


def test_ac5_closed_form(verdict, strict, toy):
    res_s, n_s = _suite("closed-form", strict)
    res_t, n_t = _suite("closed-form", toy)
    # toy: every j up to the last horizon rank, which includes pos(Delta_3,0)
    ok = res_s.passed and res_t.passed and n_s == 5001 and n_t - 1 >= toy.stages[3].pos_delta
    verdict("AC5", ok, f"strict j<=5000, toy j<={n_t - 1}")


def test_ac6_five_cases(verdict, strict):
    res, checks = _suite("prop7.1", strict)
    census = {g.name: g.count for g in res.groups}
    verdict("AC6", res.passed, f"{checks} checks; {census}")


def test_ac7_continuity(verdict, strict):
    ranges = Ranges(jmax=5000, Nmax=6)
    res82, n82 = _suite("prop8.2", strict, ranges)
    res81, n81 = _suite("lemma8.1", strict, ranges)
    verdict("AC7", res82.passed and res81.passed, f"prop8.2 {n82} checks, lemma8.1 {n81} checks, N<=6")


def test_ac8_projections(verdict, strict):
    res91, n91 = _suite("lemma9.1", strict)
    res92, n92 = _suite("prop9.2", strict)
    h0 = [g for g in res92.groups if g.name.startswith("basis") and g.name.endswith("n=0")][0]
    combos = [g for g in res92.groups if g.name == "random combinations n=0"][0]
    ok = res91.passed and res92.passed and h0.count == strict.stages[0].pos_delta_next and combos.count == 100
    verdict("AC8", ok, f"lemma9.1 {n91} checks, prop9.2 {n92} checks (all of H_0, 100 combinations)")


def test_ac9_tails(verdict, strict):
    ranges = Ranges()
    res, checks = _suite("prop11.2", strict, ranges)
    pairs = tail_pairs(strict, 0, _rng(ranges, "prop11.2"), 2 * ranges.samples)
    st0, st1 = strict.stages[0], strict.stages[1]
    decay = any(st0.pos_delta_next <= j < st1.pos_s - st0.pos_delta_next for i, j in pairs)
    zero_col = any(strict.coord(j + i).j > st0.level for i, j in pairs)
    per_basis, aggregated = res.groups
    ok = res.passed and decay and zero_col and per_basis.count == 200 and aggregated.count == 20
    verdict("AC9", ok, f"{per_basis.count} pairs (decay zone {decay}, zero column {zero_col}), {aggregated.count} tails")


def test_ac10_read_lemma(verdict, strict):
    st0 = strict.stages[0]
    # held out from the estimate, which used seed 1729
    ys = sample_K(0, strict, SamplerConfig(seed=20261017, basis=5, mixtures=60, adversarial=10))[:50]
    worst_mass, worst_res = Scalar(0), Scalar(0)
    ok = len(ys) == 50
    for y in ys:
        cert = find_polynomial_ranks(y, 0, strict)
        residual = strict.seminorm_ranks(minus_e0(strict.polynomial_ranks(cert.coeffs, y)), st0.level)
        ok &= in_K(strict, 0, y) and cert.mass <= st0.D and residual <= 3 and residual == cert.residual
        worst_mass, worst_res = max(worst_mass, cert.mass), max(worst_res, residual)
    agree = 0
    for y in sample_K(0, strict, SamplerConfig(seed=77, basis=5, mixtures=40, adversarial=10)):
        div = find_polynomial_ranks(y, 0, strict, lp="never")
        if div.deviation > 1 or agree == 20:
            continue
        lp = lp_polynomial_ranks(y, 0, strict)
        ok &= lp.deviation <= 1 and lp.residual <= 3 and div.residual <= 3
        ok &= max(lp.mass, lp.high_mass) <= max(div.mass, div.high_mass)
        agree += 1
    ok &= agree == 20
    verdict(
        "AC10",
        ok,
        f"50 held-out samples: max mass {worst_mass} <= D_0 = {st0.D}, max residual "
        f"{float(worst_res.as_fraction()):.4f} <= 3; {agree} division/LP cross-checks",
    )


def test_ac11_end_to_end(verdict, strict):
    t0 = time.time()
    rep0 = cyclic_certificate(SparseVector.unit(0), 0, strict)
    ok = rep0.final_norm == ONE
    worst = Scalar(0)
    for seed in range(25):
        x = random_head_vector(strict, seed, strict.stages[0].pos_a)
        rep = cyclic_certificate(x, 0, strict)
        ok &= rep.final_norm <= 4
        worst = max(worst, rep.final_norm)
    elapsed = time.time() - t0
    ok &= elapsed < 60
    verdict("AC11", ok, f"e_0 residual {rep0.final_norm}; 25 random x, max final norm "
            f"{float(worst.as_fraction()):.6f} <= 4; {elapsed:.1f}s")


def test_ac12_gamma_round_trip(verdict, strict):
    res, checks = _suite("gamma", strict)
    counts = [g.count for g in res.groups]
    verdict("AC12", res.passed and counts == [200, 100], f"{counts[0]} round trips, {counts[1]} power checks")


def test_ac13_determinism(verdict, tmp_path):
    ok = True
    for mode in ("strict", "toy"):
        text = packaged_params(mode)
        pf = params_io.loads(text)
        again = params_io.loads(params_io.dumps(pf))
        ok &= params_io.dumps(pf) == text and again.model == pf.model and again.model.stages == pf.model.stages
    outs = []
    for k in range(2):
        out = tmp_path / f"report{k}.txt"
        proc = subprocess.run(
            [sys.executable, "-m", "readop", "verify", "all", "--quiet", "-o", str(out)],
            capture_output=True, text=True,
        )
        ok &= proc.returncode == 0
        outs.append(out.read_bytes())
    ok &= outs[0] == outs[1]
    verdict("AC13", ok, f"parameter files round-trip; two 'verify all' reports identical ({len(outs[0])} bytes)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
