import json
import subprocess
import sys

import jsonschema
import pytest

from maxrank.cli import DEFAULT_SEED, BadInput, CliConfig, main, parse_range, resolve_seed
from maxrank.oracle import SWEEP_SCHEMA, VERDICT_SCHEMA


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_exit(capsys, *argv):
    """Like run, for argparse failures that raise SystemExit."""
    with pytest.raises(SystemExit) as info:
        main(list(argv))
    return info.value.code


def test_predict_with_override(capsys):
    code, out, _ = run(capsys, "predict", "3; 4,1; 2,0", "--t", "3")
    assert code == 0
    assert "expected h0=1 h1=0" in out
    assert "override: h0=2 h1=1" in out and "Example 3ma1.1" in out


def test_predict_without_override_json(capsys):
    code, out, _ = run(capsys, "predict", "4; 5,1; 5,1", "--t", "3", "--json")
    doc = json.loads(out)
    assert code == 0
    assert (doc["expected"]["h0"], doc["expected"]["h1"]) == (5, 0)
    assert doc["override"] is None
    assert doc["critical_value"]["k"] == 3


def test_bad_input_exits_three(capsys):
    assert run(capsys, "predict", "bad", "--t", "3")[0] == 3
    assert run(capsys, "predict", "3; 3,1", "--t", "3")[0] == 3
    assert run(capsys, "predict", "3; 2,0", "--t", "0")[0] == 3
    assert run(capsys, "verify", "4; 5,1; 5,1", "--t", "2", "--trials", "0")[0] == 3
    assert run(capsys, "verify", "4; 5,1", "--t", "2", "--prime", "12")[0] == 3
    assert run(capsys, "verify", "4; 5,1", "--t", "2", "--ceiling", "10")[0] == 3
    assert run(capsys, "verify", "4; 5,1", "--t", "9", "--ceiling", "100")[0] == 3
    assert run(capsys, "verify", "4; 5,1", "--t", "2", "--seed", "abc")[0] == 3
    assert run(capsys, "sweep", "rq", "--m-max", "0")[0] == 3
    assert run(capsys, "sweep", "nn1", "--n", "5..3")[0] == 3
    assert run(capsys, "sweep", "ma2", "--n", "4")[0] == 3
    assert run(capsys, "sweep", "qma2", "--n", "5")[0] == 3
    assert run_exit(capsys, "predict") == 3
    assert run_exit(capsys, "sweep", "bogus") == 3
    assert run_exit(capsys, "verify", "3; 2,0", "--t", "x") == 3


def test_verify_exception_and_max_rank(capsys):
    code, out, _ = run(capsys, "verify", "3; 2,0; 2,0", "--t", "2")
    assert code == 0 and "CertifiedException" in out and "computed h0=1 h1=1" in out
    code, out, _ = run(capsys, "verify", "4; 5,1; 5,1", "--t", "2", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "CertifiedMaxRank"
    assert min(s["h0"] for s in doc["samples"]) == 0
    jsonschema.validate(doc, VERDICT_SCHEMA)


def test_verify_inconclusive_exits_two(capsys):
    code, out, _ = run(capsys, "verify", "3; 5,2; 2,0", "--t", "3", "--trials", "1")
    assert code == 2 and "Inconclusive" in out


def test_verify_mismatch_exits_one(capsys, monkeypatch):
    from maxrank import oracle

    real = oracle.verdict

    def flagged(*args, **kwargs):
        v = real(*args, **kwargs)
        v.mismatch = True
        return v

    monkeypatch.setattr(oracle, "verdict", flagged)
    assert run(capsys, "verify", "3; 2,0; 2,0", "--t", "2")[0] == 1


def test_json_output_is_byte_identical(capsys):
    args = ["verify", "3; 4,1; 2,0", "--t", "3", "--json", "--seed", "17"]
    first = run(capsys, *args)[1]
    second = run(capsys, *args)[1]
    assert first == second
    third = run(capsys, *args[:-1], "18")[1]
    assert third != first


def test_seed_resolution(monkeypatch):
    monkeypatch.delenv("MAXRANK_SEED", raising=False)
    assert resolve_seed(None) == DEFAULT_SEED
    assert resolve_seed("5") == 5
    monkeypatch.setenv("MAXRANK_SEED", "77")
    assert resolve_seed(None) == 77
    assert resolve_seed("5") == 5
    assert isinstance(resolve_seed("random"), int)
    with pytest.raises(BadInput):
        resolve_seed("x")


def test_env_seed_reaches_reports(capsys, monkeypatch):
    monkeypatch.setenv("MAXRANK_SEED", "123")
    doc = json.loads(run(capsys, "verify", "3; 2,0", "--t", "2", "--json")[1])
    assert doc["seed"] == 123


def test_config_invariants():
    CliConfig()
    for bad in ({"prime": 9}, {"trials": 0}, {"ceiling": 63}, {"prec4_variant": "loose"}, {"jobs": 0}):
        with pytest.raises(BadInput):
            CliConfig(**bad)


def test_ranges():
    assert list(parse_range("3..5")) == [3, 4, 5]
    assert list(parse_range("4")) == [4]
    for bad in ("a..b", "5..3", ""):
        with pytest.raises(BadInput):
            parse_range(bad)


def test_sweep_rq(capsys):
    code, out, _ = run(capsys, "sweep", "rq", "--m-max", "10000", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["counts"] == {"checked": 10000, "pass": 10000, "violations": 0}


def test_sweep_nn1(capsys):
    code, out, _ = run(capsys, "sweep", "nn1", "--samples", "10000", "--n", "3..8", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["counts"]["pass"] == 10000


def test_sweep_theorem(capsys):
    code, out, _ = run(capsys, "sweep", "theorem", "--n", "4", "--k", "2..3", "--d-max", "6", "--json")
    doc = json.loads(out)
    assert code == 0
    jsonschema.validate(doc, SWEEP_SCHEMA)
    assert doc["counts"]["fail"] == doc["counts"]["inconclusive"] == doc["counts"]["exceptions"] == 0
    assert all(c["status"] == "CertifiedMaxRank" for e in doc["entries"] for c in e["checks"])


def test_sweep_extremal_kinds_report_violations(capsys):
    # small bounds keep this quick; the exhaustive runs live in the acceptance suite
    code, out, _ = run(capsys, "sweep", "rma1", "--n", "5", "--k", "3", "--d-max", "9", "--s-max", "2")
    assert code == 0 and "violations=0" in out
    code, out, _ = run(capsys, "sweep", "ma2", "--n", "5", "--k", "3", "--d-max", "9", "--s-max", "2", "--json")
    doc = json.loads(out)
    assert code == 1 and doc["counts"]["violations"] > 0
    assert any(f["eps"] == "5; 6,1; 6,1" for f in doc["failures"])
    code, out, _ = run(
        capsys, "sweep", "qma2", "--k", "5", "--d-max", "10", "--s-max", "3", "--prec4-variant", "interpolation"
    )
    assert code == 0
    code, _, _ = run(capsys, "sweep", "hor2", "--n", "5", "--k", "3", "--d-max", "8", "--s-max", "2")
    assert code == 1


def test_catalog_command(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0 and "Remark a3 (1)" in out
    doc = json.loads(run(capsys, "catalog", "--json")[1])
    assert len(doc["entries"]) == 17


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "maxrank.cli", "predict", "3; 2,0; 2,0", "--t", "2", "--json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["override"]["h0"] == 1
