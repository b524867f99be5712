import json
import math

import pytest
from click.testing import CliRunner

from hypsum import cli as cli_mod
from hypsum.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


def test_eval_harmonic_tail(runner):
    res = runner.invoke(cli, ["eval", "--a", "1,1", "--b", "2", "--m", "5"])
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[0] == "m,direct,asymptotic,residual,predicted_order,theorem"
    fields = lines[1].split(",")
    assert fields[0] == "5"
    assert float(fields[1]) == pytest.approx(137.0 / 60.0, rel=1e-15)


def test_eval_dispatch_and_roundtrip(runner):
    res = runner.invoke(cli, ["eval", "--a", "0.5,0.7", "--b", "1.9", "--m", "100,200"])
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert len(lines) == 3
    from hypsum import SeriesParams, evaluate

    params = SeriesParams((0.5, 0.7), (1.9,))
    for line, m in zip(lines[1:], (100, 200)):
        f = line.split(",")
        rep = evaluate(params, m)
        assert f[5] == "T3"
        # 17 significant digits round-trip bit-exactly
        assert float(f[1]) == rep.direct
        assert float(f[2]) == rep.asymptotic
        assert float(f[3]) == rep.residual


def test_eval_json_schema(runner):
    res = runner.invoke(cli, ["eval", "--a", "0.5,0.7", "--b", "1.9",
                              "--m", "50", "--format", "json"])
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert set(doc) == {"metadata", "rows"}
    assert doc["metadata"]["a"] == [0.5, 0.7]
    assert doc["metadata"]["s"] == pytest.approx(0.7)
    row = doc["rows"][0]
    assert set(row) == {"m", "direct", "asymptotic", "residual",
                        "predicted_order", "theorem"}


def test_eval_deterministic(runner):
    args = ["eval", "--a", "0.4,0.6,0.8", "--b", "1.1,1.3", "--m", "100,400"]
    out1 = runner.invoke(cli, args).output
    out2 = runner.invoke(cli, args).output
    assert out1 == out2


def test_eval_scale_pochhammer_normalization(runner):
    # the special zero-balanced 5F4: dividing by pi^2/4 gives the bare
    # Pochhammer-form sum, whose pi^2/4 multiple matches the closed right side
    res = runner.invoke(cli, ["eval", "--a", "0.5,0.5,0.5,0.5,1.25",
                              "--b", "1,1,1,0.25", "--m", "1000",
                              "--scale", "pi2over4"])
    assert res.exit_code == 0
    direct = float(res.output.strip().splitlines()[1].split(",")[1])
    from hypsum.specfun import EULER_GAMMA, digamma

    m = 1000
    rhs = (digamma(float(m)) + EULER_GAMMA + 3.0 * math.log(2.0)
           + 0.25 / (m - 1.0) - 0.125 / ((m - 1.0) * (m - 2.0)))
    assert direct * math.pi ** 2 / 4.0 == pytest.approx(rhs, abs=1e-7)


def test_eval_parse_error_names_token(runner):
    res = runner.invoke(cli, ["eval", "--a", "0.5,oops", "--b", "1.9", "--m", "10"])
    assert res.exit_code == 2
    assert "oops" in res.output


def test_eval_shape_error_exits_2(runner):
    res = runner.invoke(cli, ["eval", "--a", "0.5,0.7,0.9", "--b", "1.9", "--m", "10"])
    assert res.exit_code == 2


def test_eval_convergence_error_exits_3(runner):
    res = runner.invoke(cli, ["eval", "--a", "0.5,0.7,-0.2", "--b", "0.8,0.9",
                              "--m", "10"])
    assert res.exit_code == 3
    assert "a_3" in res.output


def test_eval_tail_error_exits_3(runner):
    res = runner.invoke(cli, ["eval", "--a", "0.5,0.5,0.5", "--b", "1.5,1.5",
                              "--m", "10", "--no-accelerate", "--rel-tol", "1e-14"])
    assert res.exit_code == 3


def test_rel_tol_env_override(runner, monkeypatch):
    monkeypatch.setenv("HYPSUM_REL_TOL", "1e-10")
    res = runner.invoke(cli, ["eval", "--a", "0.5,0.7", "--b", "1.9",
                              "--m", "10", "--format", "json"])
    assert res.exit_code == 0
    assert json.loads(res.output)["metadata"]["rel_tol"] == 1e-10
    monkeypatch.setenv("HYPSUM_REL_TOL", "garbage")
    res = runner.invoke(cli, ["eval", "--a", "0.5,0.7", "--b", "1.9", "--m", "10"])
    assert res.exit_code == 2


def test_sweep_footer_and_slope(runner):
    res = runner.invoke(cli, ["sweep", "--a", "0.5,0.7", "--b", "1.9",
                              "--N", "3", "--m-start", "200", "--m-points", "6"])
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[-1].startswith("# slope=")
    slope = float(lines[-1].split("slope=")[1].split(",")[0])
    assert slope == pytest.approx(-4.7, abs=0.05)
    assert "predicted_order=4.7" in lines[-1]
    assert len(lines) == 2 + 6  # header + 6 rows + footer


def test_sweep_explicit_grid_validation(runner):
    res = runner.invoke(cli, ["sweep", "--a", "0.5,0.7", "--b", "1.9",
                              "--m", "100,200,400"])
    assert res.exit_code == 2
    res = runner.invoke(cli, ["sweep", "--a", "0.5,0.7", "--b", "1.9",
                              "--m", "100,200,400,300,800,1600"])
    assert res.exit_code == 2


def test_sweep_json_metadata(runner):
    res = runner.invoke(cli, ["sweep", "--a", "0.6,0.8,0.25", "--b", "0.9,0.75",
                              "--format", "json", "--m-start", "100",
                              "--m-points", "6"])
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["metadata"]["slope"] == pytest.approx(-3.0, abs=0.1)
    assert doc["metadata"]["predicted_order"] == 3.0
    assert len(doc["rows"]) == 6


def test_sweep_degenerate_fit_exits_4(runner, monkeypatch):
    from hypsum.errors import DegenerateFitError

    def boom(*args, **kwargs):
        raise DegenerateFitError("a residual difference is exactly zero")

    monkeypatch.setattr(cli_mod, "measure_order", boom)
    res = runner.invoke(cli, ["sweep", "--a", "0.5,0.7", "--b", "1.9",
                              "--m-start", "100", "--m-points", "6"])
    assert res.exit_code == 4


def test_verify_all_pass(runner):
    res = runner.invoke(cli, ["verify", "--suite", "corollary1",
                              "--suite", "integer-limit", "--suite", "eq15"])
    assert res.exit_code == 0
    assert res.output.count("PASS") == 3
    assert "FAIL" not in res.output


def test_verify_seeded_determinism(runner):
    args = ["verify", "--suite", "ak-cross", "--p", "3", "--k", "8",
            "--draws", "5", "--seed", "11"]
    out1 = runner.invoke(cli, args)
    out2 = runner.invoke(cli, args)
    assert out1.exit_code == 0
    assert out1.output == out2.output


def test_verify_fail_exits_5(runner, monkeypatch):
    from hypsum.suites import SuiteResult

    monkeypatch.setattr(cli_mod, "run_suites",
                        lambda *a, **k: [SuiteResult("x", False, 1.0, 0.1, "boom")])
    res = runner.invoke(cli, ["verify"])
    assert res.exit_code == 5
    assert "FAIL" in res.output


def test_verify_abc_validation(runner):
    res = runner.invoke(cli, ["verify", "--suite", "corollary2", "--abc", "0.3,0.5"])
    assert res.exit_code == 2
