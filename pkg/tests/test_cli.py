import json
import subprocess
import sys

import pytest

from functcat.cli import EXIT_CHECK, EXIT_OK, EXIT_SEMANTIC, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def verdict(doc, name):
    return next(v for v in doc["verdicts"] if v["name"] == name)


def test_idempotency_text(capsys):
    code, out, _ = run(capsys, "idempotency", "z6.cat", "--bundle", "P23", "--max-k", "6")
    assert code == EXIT_OK
    assert "level = 2" in out.splitlines()


def test_idempotency_strong(capsys):
    code, doc = run_json(capsys, "idempotency", "z6", "--bundle", "P123", "--max-k", "6")
    assert code == EXIT_OK
    assert verdict(doc, "level")["value"] == 6
    assert verdict(doc, "strongly idempotent")["value"] is True


def test_ext_json(capsys):
    code, doc = run_json(capsys, "ext", "z6.cat", "--from", "S1", "--to", "S4", "--max-i", "3")
    assert code == EXIT_OK
    assert list(doc) == ["instance", "command", "params", "verdicts", "timings"]
    assert verdict(doc, "ext")["value"] == [0, 0, 0, 1]
    assert doc["timings"] == {}
    assert doc["params"] == {"src": "S1", "dst": "S4", "max_i": 3}


def test_timings_flag(capsys):
    code, doc = run_json(capsys, "describe", "a2", "--timings")
    assert code == EXIT_OK and "total_seconds" in doc["timings"]


def test_describe(capsys):
    code, doc = run_json(capsys, "describe", "a3h")
    assert code == EXIT_OK
    assert verdict(doc, "global dimension")["value"] == 1
    assert verdict(doc, "hom dimensions")["value"]["1->3"] == 1


def test_trace_ideal(capsys):
    code, doc = run_json(capsys, "trace-ideal", "z6", "--bundle", "P23")
    assert code == EXIT_OK
    assert verdict(doc, "I(c,-) dimension vectors")["value"]["1"] == [0, 1, 0, 0, 0, 0]
    assert verdict(doc, "zero objects of C/I")["value"] == ["2", "3"]


def test_resolve(capsys):
    code, doc = run_json(capsys, "resolve", "z6", "--module", "S1", "--length", "6")
    assert code == EXIT_OK
    assert verdict(doc, "length")["value"] == 5
    code, doc = run_json(capsys, "resolve", "z6", "--module", "S6", "--length", "6", "--injective")
    assert verdict(doc, "terms")["value"] == [["6"], ["5"], ["4"], ["3"], ["2"], ["1"]]


def test_recollement_and_endo(capsys):
    code, doc = run_json(capsys, "recollement-check", "a2", "--bundle", "P2")
    assert code == EXIT_OK
    code, doc = run_json(capsys, "endo-report", "a3h", "--bundle", "P2")
    assert code == EXIT_OK
    assert verdict(doc, "quasi-hereditary flag")["value"] is True


def test_examples(capsys):
    code, out, _ = run(capsys, "examples")
    assert code == EXIT_OK
    assert "FAIL" not in out
    assert out.strip().splitlines()[-1].endswith("expectations hold")


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "describe", "nowhere.cat")[0] == EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    bad = tmp_path / "bad.cat"
    bad.write_text("field Q\nvertex 1\nverteks 2\n")
    code, _, err = run(capsys, "describe", str(bad))
    assert code == EXIT_USAGE and "line 3" in err
    assert run(capsys, "ext", "z6", "--from", "S9", "--to", "S1")[0] == EXIT_SEMANTIC
    assert run(capsys, "idempotency", "z6", "--bundle", "nope")[0] == EXIT_SEMANTIC
    loop = tmp_path / "loop.cat"
    loop.write_text("field Q\nvertex 1\narrow l: 1 -> 1\n")
    assert run(capsys, "describe", str(loop))[0] == EXIT_SEMANTIC
    assert run(capsys, "idempotency", "z6", "--bundle", "P23", "--max-k", "0")[0] == EXIT_USAGE
    assert EXIT_CHECK not in (EXIT_OK, EXIT_USAGE, EXIT_SEMANTIC)


def test_seed_override(capsys, monkeypatch):
    _, base = run_json(capsys, "recollement-check", "z6", "--bundle", "P23")
    monkeypatch.setenv("FUNCTCAT_SEED", "7")
    code, other = run_json(capsys, "recollement-check", "z6", "--bundle", "P23")
    assert code == EXIT_OK
    assert [v["passed"] for v in other["verdicts"]] == [v["passed"] for v in base["verdicts"]]


def test_json_determinism(capsys):
    first = run(capsys, "examples", "--json")[1]
    second = run(capsys, "examples", "--json")[1]
    assert first == second


@pytest.mark.parametrize("argv", [["--help"], ["ext", "--help"]])
def test_help(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_OK


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "functcat", "describe", "a2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "[PASS] associativity" in proc.stdout
