import pytest

from readop.cli import EXIT_FAIL, EXIT_HORIZON, EXIT_OK, EXIT_USAGE, main, packaged_params

E0 = "# readop-vector v1\n(0,0) 1\n"


@pytest.fixture
def e0_file(tmp_path):
    p = tmp_path / "e0.vec"
    p.write_text(E0)
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_order_commands(capsys, tmp_path):
    assert run(capsys, "order", "rank", 33, "--b", "6,30")[:2] == (EXIT_OK, "(7,0)\n")
    assert run(capsys, "order", "coord", 30, 0, "--b", "6,30")[:2] == (EXIT_OK, "56\n")
    code, out, _ = run(capsys, "order", "path", "--count", 5, "--b", "6,30")
    assert out.splitlines() == ["rank,i,j", "0,0,0", "1,1,0", "2,2,0", "3,3,0", "4,4,0"]
    svg = tmp_path / "fig.svg"
    assert run(capsys, "order", "figure", "--count", 200, "--b", "6,30", "-o", svg)[0] == EXIT_OK
    assert svg.read_text().count("<polyline") == 1


def test_order_horizon_exit_code(capsys):
    code, _, err = run(capsys, "order", "rank", 10**7, "--b", "6,30")
    assert code == EXIT_HORIZON and "largest valid rank" in err


def test_op_commands(capsys, e0_file, tmp_path):
    assert run(capsys, "op", "apply", e0_file)[1] == "# readop-vector v1\n(1,0) 1/4\n"
    assert run(capsys, "op", "power", "--k", 4, e0_file)[1] == "# readop-vector v1\n(0,0) 1\n(4,0) 1/4\n"
    g = tmp_path / "g.txt"
    run(capsys, "op", "gamma", e0_file, "-o", g)
    assert run(capsys, "op", "gamma", "--inverse", g)[1] == E0
    assert run(capsys, "op", "alpha", 2)[1] == "1/2\n"


def test_cyclic_commands(capsys, e0_file, tmp_path):
    code, out, _ = run(capsys, "cyclic", e0_file, "--N", 0)
    assert code == EXIT_OK and "final_norm = 1\n" in out and "verdict = PASS" in out
    code, out, _ = run(capsys, "cyclic", "random", "--seed", 7, "--support-below", 4, "--N", 0)
    assert code == EXIT_OK and "verdict = PASS" in out
    code, _, err = run(capsys, "cyclic", e0_file, "--N", 3)
    assert code == EXIT_HORIZON
    assert "Unresolved: requires stage n with N_n=3 (first candidate n=8)" in err


def test_verify_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "eq-pos", "--quiet")
    assert code == EXIT_OK and "verdict=pass" in out
    code, out, _ = run(capsys, "verify", "prop8.2", "--mode", "toy", "--jmax", 200, "--Nmax", 2, "--quiet")
    assert code == EXIT_OK and "expected-fail (toy)" in out
    code, _, _ = run(capsys, "verify", "prop99")
    assert code == EXIT_USAGE


def test_verify_reports_params_hash(capsys, tmp_path):
    from readop.params_io import text_hash

    code, out, _ = run(capsys, "verify", "gamma", "--samples", 10, "--quiet")
    assert f"params_sha256 = {text_hash(packaged_params('strict'))}" in out


def test_params_commands(capsys, tmp_path, monkeypatch):
    toy = tmp_path / "toy.params"
    assert run(capsys, "params", "build", "--mode", "toy", "-o", toy)[0] == EXIT_OK
    code, out, _ = run(capsys, "params", "check", toy)
    assert code == EXIT_FAIL and "stage 2: cond3" in out
    s0 = tmp_path / "s0.params"
    code, _, err = run(capsys, "params", "build", "--mode", "strict", "--mixtures", 30, "-o", s0)
    assert code == EXIT_OK and "a = 4\n" in s0.read_text()
    assert run(capsys, "params", "check", s0)[0] == EXIT_OK
    assert run(capsys, "params", "show", s0)[1] == s0.read_text()
    # the environment variable selects the default parameter file
    monkeypatch.setenv("READOP_PARAMS", str(s0))
    code, out, _ = run(capsys, "op", "alpha", 3)
    assert out == "1\n"


def test_params_extend(capsys, tmp_path):
    s0 = tmp_path / "s0.params"
    run(capsys, "params", "build", "--mixtures", 30, "-o", s0)
    code, _, err = run(capsys, "params", "extend", s0, "--mixtures", 5)
    assert code == EXIT_OK and "stage 1: b=" in err
    assert "[stage 1]" in s0.read_text()
    # b_1 depends on the sampled D_0, so only the conditions are pinned here
    assert run(capsys, "params", "check", s0)[0] == EXIT_OK


def test_bad_inputs(capsys, tmp_path):
    bad = tmp_path / "bad.vec"
    bad.write_text("not a vector\n")
    assert run(capsys, "op", "apply", bad)[0] == EXIT_USAGE
    assert run(capsys, "op", "apply", tmp_path / "missing.vec")[0] == EXIT_USAGE
    assert run(capsys, "order", "rank", 3, "--b", "6,7")[0] == EXIT_USAGE
    assert run(capsys, "params", "show")[0] == EXIT_USAGE
