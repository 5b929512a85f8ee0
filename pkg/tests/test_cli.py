import json
import subprocess
import sys

import pytest

from speccartan import __version__
from speccartan.cli import main, render_json
from speccartan.scenarios import SCENARIOS, SCHEMA_VERSION, run_scenario, thread_cap


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_every_scenario_passes_small(name):
    rep = run_scenario(name, 3, 3, 11)
    assert rep["summary"]["all_passed"], [c for c in rep["checks"] if not c["passed"]][:1]


def test_report_layout():
    rep = run_scenario("sun-bound", 3, 4, 5)
    text = render_json(rep)
    assert text.splitlines()[1].strip() == f'"schema": "{SCHEMA_VERSION}",'
    obj = json.loads(text)
    assert obj["library_version"] == __version__
    assert obj["config"] == {"scenario": "sun-bound", "n": 3, "trials": 4, "seed": 5, "tol": {}}
    assert obj["summary"]["checks"] == 4 and obj["summary"]["worst_slack"] > 0
    assert all("inputs_digest" in c for c in obj["checks"])


def test_report_is_byte_identical_across_thread_counts():
    a = render_json(run_scenario("block-trace", 4, 6, 77, threads=1))
    b = render_json(run_scenario("block-trace", 4, 6, 77, threads=4))
    assert a == b


def test_failed_check_carries_replay_inputs():
    rep = run_scenario("entire-curve", 3, 2, 1, {"curve_tol": 1e-30})
    failed = [c for c in rep["checks"] if not c["passed"]]
    assert failed and all("W" in c["replay"] for c in failed)
    assert not rep["summary"]["all_passed"]


def test_unknown_tolerance_is_rejected():
    with pytest.raises(KeyError):
        run_scenario("sun-bound", 3, 1, 1, {"bogus": 1.0})


def test_thread_cap_env(monkeypatch):
    monkeypatch.setenv("SPECCARTAN_THREADS", "1")
    assert thread_cap() == 1
    monkeypatch.setenv("SPECCARTAN_THREADS", "many")
    with pytest.raises(ValueError):
        thread_cap()


def test_cli_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    args = ["run", "--scenario", "remark-1-3-counterexample", "--n", "3", "--trials", "2", "--seed", "9"]
    assert main(args + ["--out", str(out)]) == 0
    assert json.loads(out.read_text())["summary"]["all_passed"]
    assert main(["run", "--scenario", "entire-curve", "--n", "3", "--trials", "2", "--seed", "9",
                 "--tol", "curve_tol=1e-30", "--format", "text"]) == 1
    assert "FAIL" in capsys.readouterr().out
    assert main(["run", "--scenario", "nope", "--n", "3", "--trials", "1", "--seed", "1"]) == 2
    assert main(args + ["--out", str(tmp_path / "missing" / "r.json")]) == 2


def test_cli_rejects_malformed_arguments():
    with pytest.raises(SystemExit):
        main(["run", "--scenario", "sun-bound", "--n", "3", "--trials", "1", "--seed", "-1"])
    with pytest.raises(SystemExit):
        main(["run", "--scenario", "sun-bound", "--n", "3", "--trials", "1", "--seed", "1", "--tol", "x"])


def test_console_entry_point_is_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "speccartan.cli", "run", "--scenario", "rank-theorem", "--n", "4",
           "--trials", "10", "--seed", "18446744073709551615"]
    r1 = subprocess.run(cmd, capture_output=True, check=True)
    r2 = subprocess.run(cmd, capture_output=True, check=True, env={"SPECCARTAN_THREADS": "1", "PATH": ""})
    assert r1.stdout == r2.stdout and r1.stdout.startswith(b'{\n  "schema"')
