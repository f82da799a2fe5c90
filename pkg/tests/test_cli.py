import json
import subprocess
import sys

import pytest

from qci.algebra import QciAlgebra, is_symmetric
from qci.campaigns import ExperimentSpec, Report, run_campaign, run_case
from qci.cli import main
from qci.errors import SpecParse


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_example_exterior(capsys):
    code, out, _ = run(capsys, "example", "exterior", "--c", "3", "--p", "5")
    data = json.loads(out)
    assert code == 0
    assert data["q"] == [[1, 4, 4], [4, 1, 4], [4, 4, 1]]


def test_example_root_of_unity_and_truncated(capsys):
    code, out, _ = run(capsys, "example", "root-of-unity", "--c", "2", "--a", "3", "--q", "4", "--p", "5")
    assert code == 0 and is_symmetric(QciAlgebra.from_json(json.loads(out)))
    code, out, _ = run(capsys, "example", "truncated", "--c", "1", "--a", "4")
    A = QciAlgebra.from_json(json.loads(out))
    assert A.a == (4,) and A.dim == 4


def test_example_bad_params(capsys):
    code, _, err = run(capsys, "example", "root-of-unity", "--c", "2", "--a", "3", "--q", "2", "--p", "5")
    assert code == 2 and "BadParams" in err


def test_algebra_from_stdin_file_and_inline(capsys, monkeypatch, tmp_path):
    alg = '{"p": 5, "c": 2, "a": [2, 2], "q": [[1, 4], [4, 1]]}'
    code, out, _ = run(capsys, "nakayama", "--algebra", "-", stdin=alg, monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["gamma"] == [4, 4]
    path = tmp_path / "a.json"
    path.write_text(alg)
    code, out, _ = run(capsys, "ext", "--algebra", str(path), "--window", "4")
    assert json.loads(out)["dims"] == [1, 2, 3, 4, 5]
    code, out, _ = run(capsys, "double", "--algebra", alg)
    assert code == 0 and json.loads(out)["c"] == 4


def test_decompose_and_hochschild(capsys):
    alg = '{"p": 7, "c": 3, "a": [2, 2, 2], "q": [[1, 3, 2], [5, 1, 6], [4, 6, 1]]}'
    code, out, _ = run(capsys, "decompose", "--algebra", alg)
    assert code == 0 and len(json.loads(out)["splits"]) == 6
    code, out, _ = run(capsys, "decompose", "--algebra", alg, "--split", "1,3", "--format", "table")
    assert code == 0 and out.strip() == "split {1,3}: ok"
    code, out, _ = run(capsys, "hochschild", "--algebra", '{"p": 5, "a": [2], "q": [[1]]}', "--window", "3")
    assert json.loads(out)["dims"] == [2, 1, 1, 1]


def test_ext_with_module_file(capsys, tmp_path):
    alg = '{"p": 5, "a": [3], "q": [[1]]}'
    mod = {"dim": 2, "actions": [[[0, 0], [1, 0]]], "degrees": [[0], [1]]}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(mod))
    code, out, _ = run(capsys, "ext", "--algebra", alg, "--module", str(path), "--target", "trivial", "--window", "3")
    assert code == 0 and json.loads(out)["dims"] == [1, 1, 1, 1]


def test_bad_input_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "nakayama", "--algebra", "{not json")
    assert code == 2 and "SpecParse" in err
    code, _, _ = run(capsys, "nakayama", "--algebra", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, _ = run(capsys, "nakayama", "--algebra", '{"p": 6, "a": [2], "q": [[1]]}')
    assert code == 2
    code, _, _ = run(capsys, "decompose", "--algebra", '{"p": 5, "a": [2, 2], "q": [[1, 1], [1, 1]]}', "--split", "1,2")
    assert code == 2
    code, _, _ = run(capsys, "verify")
    assert code == 2


def test_verify_report_shape(capsys):
    code, out, _ = run(capsys, "verify", "--campaign", "nakayama", "--corpus", "4", "--seed", "3")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0
    assert lines[0]["spec"]["campaign"] == "nakayama" and lines[0]["spec"]["seed"] == 3
    assert [c["case"] for c in lines[1:-1]] == [0, 1, 2, 3]
    for case in lines[1:-1]:
        assert set(case["provenance"]) == {"p", "q_orders", "roots_of_unity", "symmetric"}
    assert lines[-1]["summary"]["verdict"] == "PASS"


def test_verify_from_spec_file(capsys, tmp_path):
    spec = {"campaign": "ext-symmetry", "window": 10, "corpus": 6, "seed": 1,
            "algebra": {"p": 5, "c": 3, "a": [2, 2, 2], "q": [[1, 4, 4], [4, 1, 4], [4, 4, 1]]}}
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run(capsys, "verify", "--spec", str(path), "--format", "table")
    assert code == 0 and out.strip().endswith("violation(s) in 6 case(s)") and "verdict PASS" in out


def test_kunneth_verb(capsys):
    alg = '{"p": 5, "c": 2, "a": [2, 2], "q": [[1, 4], [4, 1]]}'
    code, out, _ = run(capsys, "kunneth", "--algebra", alg, "--corpus", "3")
    summary = json.loads(out.splitlines()[-1])["summary"]
    assert code == 0 and summary["cases"] == 3 and summary["verdict"] == "PASS"


def test_exit_code_follows_verdict(capsys, monkeypatch):
    import qci.cli as cli

    class Failing(Report):
        @property
        def verdict(self):
            return "FAIL"

    monkeypatch.setattr(cli, "run_campaign", lambda spec, jobs=1: Failing(spec, []))
    code, _, _ = run(capsys, "verify", "--campaign", "double", "--corpus", "1")
    assert code == 1


def test_spec_validation():
    with pytest.raises(SpecParse):
        ExperimentSpec("bogus")
    with pytest.raises(SpecParse):
        ExperimentSpec("nakayama", window=0)
    with pytest.raises(SpecParse):
        ExperimentSpec("nakayama", corpus=0)
    with pytest.raises(SpecParse):
        ExperimentSpec.from_json({"campaign": "nakayama", "colour": 1})


def test_resource_limit_is_recorded_not_fatal():
    spec = ExperimentSpec("hochschild", algebra={"p": 5, "a": [4, 4], "q": [[1, 1], [1, 1]]}, corpus=1, budget_dim=2)
    case = run_case(spec, 0)
    assert case["status"] == "resource-limit"
    assert run_campaign(spec).verdict == "PASS"


def test_parallel_run_matches_serial():
    spec = ExperimentSpec("decompose", corpus=6, seed=2)
    assert run_campaign(spec, jobs=2).to_jsonl() == run_campaign(spec).to_jsonl()


def test_console_script_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "qci.cli", "example", "exterior", "--c", "2"], capture_output=True, text=True, check=True
    )
    assert json.loads(out.stdout)["a"] == [2, 2]
