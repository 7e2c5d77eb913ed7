import json
import subprocess
import sys

import numpy as np
import pytest

from rmt_exact import cli
from rmt_exact.errors import GammaResidue, OutOfRange
from rmt_exact.verify import reference_conductance


def _run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _json(capsys, *argv):
    code, out, err = _run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_schema_keys(capsys):
    r = _json(capsys, "hs-density", "--N", "2", "--n", "2")
    assert {"task", "params", "exact", "decimal", "mc"} <= set(r)
    assert r["task"] == "hs-density" and r["params"] == {"N": 2, "n": 2}
    assert r["exact"]["symbolic"] == "6*H(x-0) + -24*x*H(x-0) + 24*x^2*H(x-0)"


def test_real_prob_pi_over_four(capsys):
    r = _json(capsys, "real-prob", "--m", "2", "--N", "2", "--no-mc")
    assert r["exact"] == {"pi_half_power": 2, "rational": "1/4"}
    assert r["decimal"].startswith("0.78539816339744830961566084582")
    assert r["mc"] is None


def test_real_prob_with_sampling(capsys):
    r = _json(capsys, "real-prob", "--m", "2", "--N", "2", "--L", "2,2", "--samples", "2000")
    assert r["exact"]["rational"] == "20/27"
    assert r["decimal"].startswith("0.740740740740")
    assert r["mc"]["n"] == 2000 and isinstance(r["mc"]["passed"], bool)


def test_nested_mc_reports_serialize(capsys):
    r = _json(capsys, "entanglement", "--N", "2", "--n", "4", "--measure", "BH", "--samples", "2000")
    assert set(r["mc"]) == {"von_neumann_mean", "purity_mean", "von_neumann_variance"}
    assert all(isinstance(v["passed"], bool) for v in r["mc"].values())


def test_precision_controls_digits(capsys):
    r = _json(capsys, "real-prob", "--m", "2", "--N", "2", "--no-mc", "--precision", "10")
    assert r["decimal"] == "0.7853981634"


def test_conductance_matches_reference(capsys):
    r = _json(capsys, "conductance", "--beta", "1", "--N", "3", "--atilde", "0", "--no-mc")
    assert r["exact"]["symbolic"] == str(reference_conductance(0))
    assert r["params"]["atilde"] == "0/1"


def test_csv_header_and_breakpoints(capsys):
    code, out, _ = _run(capsys, "conductance", "--beta", "2", "--N", "2", "--n", "2",
                        "--no-mc", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "# P(t) = 2*t^3*H(t-0) + -12*(t-1)*H(t-1) + -4*(t-1)^3*H(t-1)"
    assert lines[2] == "# support [0, 2]"
    assert lines[3] == "t,P,breakpoint"
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[4:]])
    flagged = rows[rows[:, 2] == 1, 0]
    # term starts only; the support end is not a breakpoint
    assert set(flagged.tolist()) == {0.0, 1.0}
    assert rows[-1, 0] == 2.0
    assert np.all(np.diff(rows[:, 0]) > 0)
    # the density integrates to one on the printed grid
    assert abs(np.trapezoid(rows[:, 1], rows[:, 0]) - 1) < 1e-4


def test_csv_rejected_without_curve(capsys):
    code, _, err = _run(capsys, "fidelity", "--N", "2", "--n1", "2", "--n2", "2",
                        "--no-mc", "--format", "csv")
    assert code == 1 and err.startswith("ERROR:Validation:")


def test_output_file(tmp_path, capsys):
    target = tmp_path / "p.json"
    code, out, _ = _run(capsys, "real-prob", "--m", "2", "--N", "2", "--no-mc", "-o", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["task"] == "real-prob"


@pytest.mark.parametrize("argv", [
    ["conductance", "--beta", "3", "--N", "2", "--n", "2"],
    ["real-prob", "--m", "2", "--N", "3"],
    ["real-prob", "--m", "2", "--N", "2", "--L", "1,2"],
    ["conductance", "--beta", "2", "--N", "2", "--bogus"],
    ["no-such-command"],
])
def test_validation_exit_code(capsys, argv):
    code, out, err = _run(capsys, *argv)
    assert code == 1
    assert err.startswith("ERROR:")
    assert out == ""


def test_out_of_range_reports_its_kind(capsys):
    code, _, err = _run(capsys, "real-prob", "--m", "3", "--N", "2", "--no-mc")
    assert code == 1
    assert err.startswith(f"ERROR:{OutOfRange('x').code}:")


def test_internal_error_exit_code(capsys, monkeypatch):
    def boom(args):
        raise GammaResidue("leftover gamma factor")

    monkeypatch.setitem(cli.COMMANDS, "hs-density", boom)
    code, _, err = _run(capsys, "hs-density", "--N", "2", "--n", "2")
    assert code == 2
    assert "leftover gamma factor" in err


def test_verify_quick(capsys):
    r = _json(capsys, "verify", "--quick", "--no-mc")
    assert r["task"] == "verify" and r["passed"] is True
    assert all(c["passed"] for c in r["checks"])


def test_console_script_and_pipe():
    # the installed entry point runs and survives a closed pipe
    p = subprocess.run([sys.executable, "-m", "rmt_exact.cli", "real-prob", "--m", "2", "--N", "2",
                        "--no-mc"], capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["task"] == "real-prob"
    p = subprocess.run(f"{sys.executable} -m rmt_exact.cli conductance --beta 2 --N 2 --n 2 "
                       "--no-mc --format csv | head -1", shell=True, capture_output=True, text=True)
    assert p.stdout.startswith("# conductance") and "Error" not in p.stderr
