import io
import json
import os
from pathlib import Path

import pytest

from hopf_chern.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, parse_gen, run
from hopf_chern.group_cochain import WORKERS_ENV
from hopf_chern.hopf import D, X, Y

DATA = Path(__file__).resolve().parents[1] / "data" / "two_diffeos.json"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_chern_text_fixture():
    code, out, _ = call("chern", "--n", "1", "--class", "1", "--level", "1",
                        "--tuple", str(DATA), "--out", "text")
    assert code == EXIT_OK and out.strip() == "-2/(1 + 2*x1) dx1"


def test_chern_json_and_latex(tmp_path):
    tex = tmp_path / "c.tex"
    code, out, _ = call("chern", "--n", "1", "--class", "c1", "--level", "1",
                        "--tuple", str(DATA), "--latex", str(tex))
    rep = json.loads(out)
    assert code == EXIT_OK and rep["value"] == "-2/(1 + 2*x1) dx1"
    assert rep["config"]["seed"] == 0 and list(rep) == sorted(rep)
    assert tex.read_text().strip() == r"-\frac{2}{1 + 2 x_{1}} dx_{1}"


@pytest.mark.parametrize("argv", [
    ("verify", "cocycle", "--n", "1", "--class", "bogus"),
    ("verify", "cocycle", "--n", "1", "--class", "1,1"),
    ("chern", "--n", "1", "--class", "1", "--level", "2", "--tuple", str(DATA)),
    ("hopf", "probe", "--n", "2"),
    ("cyclic", "verify", "--suite", "nonsense", "--n", "1"),
    ("frobnicate",),
    (),
])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == EXIT_USAGE and "usage error" in err and out == ""


def test_verify_cocycle_n1():
    code, out, _ = call("verify", "cocycle", "--n", "1", "--class", "1", "--mode", "symbolic")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["ok"] and "wall_time" not in json.dumps(rep)


def test_timing_flag_adds_wall_time():
    code, out, _ = call("verify", "cocycle", "--n", "1", "--class", "1", "--timing")
    assert code == EXIT_OK and "wall_time" in json.loads(out)


def test_hopf_probe_and_verify():
    code, out, _ = call("hopf", "probe", "--gen", "X1", "--n", "2")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["ok"] and "δ^1_{12} ⊗ Y_1^2" in rep["probed"]
    code, _, _ = call("hopf", "verify", "--suite", "sdelta", "--n", "1")
    assert code == EXIT_OK


def test_cyclic_verify():
    for suite in ("tau", "bB", "relative"):
        code, out, _ = call("cyclic", "verify", "--suite", suite, "--q", "2", "--n", "1")
        assert code == EXIT_OK, out


def test_extract_emits_tensor(tmp_path):
    target = tmp_path / "tensor.json"
    code, out, _ = call("extract", "--n", "1", "--class", "c1", "--emit", str(target))
    rep = json.loads(out)
    assert code == EXIT_OK and rep["phi_check"]["ok"]
    emitted = json.loads(target.read_text())
    (comp,) = emitted["components"]
    assert comp["q"] == 1 and comp["tensor"]["terms"][0]["coefficient"] == "1"


def test_suite_exit_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert call("suite", "--n", "1", "--report", str(a))[0] == EXIT_OK
    assert call("suite", "--n", "1", "--report", str(b))[0] == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["ok"] and rep["config"]["seed"] == 0


def test_failed_check_exits_one(monkeypatch):
    import hopf_chern.suites as suites
    monkeypatch.setitem(suites.SUITES, "sdelta", lambda n, seed=0: {"ok": False, "witness": "w"})
    code, out, _ = call("hopf", "verify", "--suite", "sdelta", "--n", "1")
    assert code == EXIT_FAIL and json.loads(out)["witness"] == "w"


def test_workers_flag(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)
    call("--workers", "1", "verify", "cocycle", "--n", "1", "--class", "1")
    assert os.environ[WORKERS_ENV] == "1"


def test_generator_syntax():
    assert parse_gen("X2") == X(2)
    assert parse_gen("Y1_2") == Y(1, 2) == parse_gen("Y12")
    assert parse_gen("D1_12") == D(1, 1, 2)
