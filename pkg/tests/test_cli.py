import json
import math
import shutil
import subprocess

import pytest

from pfaffell import __version__
from pfaffell.cli import main
from pfaffell.elliptic import TodaCurveData
from pfaffell.hirota import PolynomialTauModel


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def zero_model(tmp_path):
    path = tmp_path / "zero.json"
    PolynomialTauModel.zero("KP", 3).save(path)
    return str(path)


def test_identities_pass_and_schema(capsys):
    code, out, _ = run(capsys, "identities", "--suite", "all", "--samples", "5", "--seed", "7")
    rep = json.loads(out)
    assert code == 0
    assert rep["schema"] == 1 and rep["version"] == __version__
    assert rep["passed"] and rep["entries"] == []
    assert {"max_rel", "mean_rel", "count", "failed"} <= set(rep["summary"]["E8"])


def test_identities_zero_samples(capsys):
    code, out, _ = run(capsys, "identities", "--samples", "0")
    assert code == 0
    assert json.loads(out)["entries"] == []


def test_identities_verbose_and_output(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "identities", "--suite", "theta", "--samples", "2", "--verbose", "--output", str(target))
    assert code == 0 and out == ""
    rep = json.loads(target.read_text())
    assert len(rep["entries"]) == sum(v["count"] for v in rep["summary"].values())


def test_identities_failure_exit(capsys):
    code, out, _ = run(capsys, "identities", "--samples", "2", "--tol", "1e-300")
    assert code == 1
    assert not json.loads(out)["passed"]


@pytest.mark.parametrize(
    "args",
    [
        ["identities", "--tau-grid", "1,x"],
        ["identities", "--samples", "-1"],
        ["identities", "--tol", "0"],
        ["curve", "solve-kp", "--v", "2"],
        ["bogus"],
    ],
)
def test_usage_errors(capsys, args):
    with pytest.raises(SystemExit) as info:
        main(args)
    assert info.value.code == 2


def test_curve_kp(capsys):
    code, out, _ = run(capsys, "curve", "solve-kp", "--curve-r", "1", "--v", "2.2")
    assert code == 0
    assert json.loads(out)["result"]["t"] >= 1
    code, out, err = run(capsys, "curve", "solve-kp", "--curve-r", "1", "--v", "2.0")
    assert code == 3
    assert json.loads(out)["error"]["type"] == "DomainError"
    assert "threshold" in err


def test_curve_toda_round_trip(capsys):
    fwd = TodaCurveData.from_modulus(1.4, 0.3)
    code, out, _ = run(capsys, "curve", "solve-toda", "--R", repr(fwd.R), "--C", repr(fwd.C))
    res = json.loads(out)["result"]
    assert code == 0
    assert res["t"] == pytest.approx(1.4, abs=1e-8)
    assert res["eta"] == pytest.approx(0.3, abs=1e-8)


def test_residual_examples(capsys, zero_model):
    code, out, _ = run(capsys, "residual", "--model", zero_model, "--eq", "DMKP", "--z", "2", "--zeta", "3")
    assert code == 0 and json.loads(out)["report"]["rel_res"] == 0
    code, out, _ = run(capsys, "residual", "--model", zero_model, "--eq", "D1", "--z", "2", "--zeta", "3")
    rep = json.loads(out)["report"]
    assert code == 0
    assert math.isclose(rep["rel_res"], 1 / 36, rel_tol=1e-14)
    assert rep["pass"] is False
    code, out, _ = run(capsys, "residual", "--model", zero_model, "--eq", "THREE_TERM", "--zs", "2,3,5")
    assert code == 0 and json.loads(out)["report"]["abs_res"] == 0


def test_residual_toda_point(capsys, tmp_path):
    path = tmp_path / "toda.json"
    PolynomialTauModel.from_second_derivatives("Toda", 1, {(0, 2): 0.2, (1, 3): 2 * math.sinh(0.4)}).save(path)
    code, out, _ = run(capsys, "residual", "--model", str(path), "--eq", "SIMP2B", "--point", "t0=0.1+0.2j,t1=0.3")
    rep = json.loads(out)["report"]
    assert code == 0 and rep["rel_res"] < 1e-15
    assert rep["point"]["tbar"][0] == [0.10000000000000001, -0.20000000000000001]


def test_residual_errors(capsys, zero_model, tmp_path):
    code, _, err = run(capsys, "residual", "--model", zero_model, "--eq", "D1", "--z", "2", "--zeta", "2")
    assert code == 4 and "SingularArgs" in err
    code, _, err = run(capsys, "residual", "--model", zero_model, "--eq", "PFT3", "--z", "2", "--zetabar", "3")
    assert code == 4 and "VariantMismatch" in err
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"variant": "Toda", "M": 0, "terms": [{"t": [1], "tbar": [0], "coeff": [1, 0]}]}))
    assert run(capsys, "residual", "--model", str(bad), "--eq", "SIMP2A")[0] == 2
    assert run(capsys, "residual", "--model", str(tmp_path / "missing.json"), "--eq", "D1")[0] == 2
    assert run(capsys, "residual", "--model", zero_model, "--eq", "NOPE")[0] == 2
    assert run(capsys, "residual", "--model", zero_model, "--eq", "D1", "--z", "2")[0] == 2
    assert run(capsys, "residual", "--model", zero_model, "--eq", "D1", "--z", "2", "--zeta", "3", "--point", "q=1")[0] == 2


def test_determinism_in_process(capsys):
    args = ["identities", "--samples", "4", "--seed", "9", "--verbose"]
    first = run(capsys, *args)[1]
    assert run(capsys, *args)[1] == first
    assert run(capsys, "identities", "--samples", "4", "--seed", "10", "--verbose")[1] != first


def test_thread_cap_does_not_change_output(capsys, monkeypatch):
    args = ["identities", "--samples", "3", "--workers", "2", "--verbose"]
    monkeypatch.setenv("PFAFF_ELL_THREADS", "2")
    parallel = run(capsys, *args)[1]
    monkeypatch.setenv("PFAFF_ELL_THREADS", "1")
    assert run(capsys, *args)[1] == parallel


@pytest.mark.skipif(shutil.which("pfaffell") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["pfaffell", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert __version__ in proc.stdout
