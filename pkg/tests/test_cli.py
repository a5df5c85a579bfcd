import io
import json
import os
import subprocess
import sys

import pytest

from combforge import __version__
from combforge.cli import EXIT_INPUT, EXIT_NUMERIC, EXIT_OK, RunConfig, dumps, run


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, (json.loads(buf.getvalue()) if buf.getvalue() else None), buf.getvalue()


def test_green_unit_interval():
    code, doc, _ = call("green", "--set", '{"bands":[[-1,1]]}')
    assert code == EXIT_OK
    assert doc["capacity"] == pytest.approx(0.5, abs=1e-10)
    assert {"version", "command", "inputs"} <= doc.keys()
    assert doc["version"] == __version__ and doc["command"] == "green"


def test_green_eval_and_csv(tmp_path):
    out = tmp_path / "d.csv"
    code, doc, _ = call("green", "--set", '{"bands":[[-1,-0.5],[0.5,1]]}', "--eval", "0", "2+1i", "--csv", str(out), "--grid", "16")
    assert code == EXIT_OK
    assert doc["comb"]["slits"][0][0] == pytest.approx(1.5707963267948966)
    assert doc["eval"][0]["green"] == pytest.approx(0.5493061443340549)
    rows = out.read_text().splitlines()
    assert rows[0] == "t,density" and len(rows) == 1 + 2 * 16


def test_set_from_file(tmp_path):
    f = tmp_path / "set.json"
    f.write_text('{"bands": [[0, 4]]}')
    code, doc, _ = call("green", "--set", str(f))
    assert code == EXIT_OK and doc["capacity"] == pytest.approx(1.0)


def test_cheby_outputs():
    code, doc, _ = call("cheby", "--set", '{"bands":[[-1,1]]}', "-n", "3")
    assert code == EXIT_OK and doc["L"] == pytest.approx(0.25)
    assert doc["coeffs"] == pytest.approx([0, -0.75, 0, 1], abs=1e-14)
    code, doc, _ = call("cheby", "-n", "1", "--weighted", "1", "0")
    assert doc["L"] == pytest.approx(0.1715728752538097)


def test_critpoly_with_negative_values_and_vcomb():
    code, doc, _ = call("critpoly", "--values", "-1,1", "--vcomb")
    assert code == EXIT_OK
    assert doc["coeffs"] == pytest.approx([-1, 0, 6, -4], abs=1e-10)
    assert doc["vcomb"]["strip"] == pytest.approx([0, 3 * 3.141592653589793])


def test_jacobi_modes():
    code, doc, _ = call("jacobi", "--p", "0.5,0.5", "--q", "-0.5,0.5")
    assert doc["discriminant"] == pytest.approx([-1.5, 0, 2])
    assert doc["bands"][1] == pytest.approx([0.5, 1.25**0.5])
    code, doc, _ = call("jacobi", "--from-heights", "0")
    assert doc["discriminant"] == pytest.approx([-1, 0, 2], abs=1e-9)


def test_comb_and_gen():
    assert call("comb", "--muckenhoupt", "1,1,1")[1]["sup"] == 1.0
    code, doc, _ = call("gen", "julia", "--depth", "3")
    comb = json.dumps(doc["comb"])
    assert call("comb", "--comb", comb, "--widom")[1]["widom"] == pytest.approx(1.5)
    cantor = json.dumps(call("gen", "cantor", "--depth", "2")[1]["comb"])
    res = call("comb", "--comb", cantor, "--widom")[1]
    assert res["widom"] is None and res["infinite"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["green", "--set", "{not json"],
        ["green", "--set", '{"bands":[[1,0]]}'],
        ["cheby", "--set", '{"bands":[[-1,1]]}', "-n", "0"],
        ["critpoly", "--values", "1,2,3"],
        ["jacobi", "--p", "1,-1", "--q", "0,0"],
        ["green", "--set", '{"bands":[[-1,1]]}', "--grid", "8"],
        ["bogus"],
        ["green", "--set", '{"bands":[[-1,1]]}', "--unknown"],
    ],
)
def test_input_errors_exit_2(argv, capsys):
    assert run(argv) == EXIT_INPUT


def test_non_convergence_exit_3(monkeypatch):
    monkeypatch.setenv("COMBFORGE_MAX_NODES", "64")
    assert run(["green", "--set", '{"bands":[[-1,-0.999],[0.5,1]]}']) == EXIT_NUMERIC


def test_out_file(tmp_path):
    out = tmp_path / "r.json"
    assert run(["comb", "--muckenhoupt", "1,4", "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["sup"] == 1.5625


def test_dumps_round_trips_doubles():
    x = 0.1 + 0.2
    assert json.loads(dumps({"x": x}))["x"] == x
    assert dumps([float("inf"), 1.0, 2]) == "[null, 1.0, 2]"


def test_run_config_invariants():
    with pytest.raises(ValueError):
        RunConfig("green", {}, tol=0.0)
    with pytest.raises(ValueError):
        RunConfig("green", {}, grid=8)


def test_console_script_is_deterministic():
    argv = [sys.executable, "-m", "combforge", "green", "--set", '{"bands":[[-2,-1],[0,0.5],[1,3]]}']
    outs = {subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)}
    assert len(outs) == 1
