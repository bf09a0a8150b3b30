import json

import pytest
from jsonschema import validate
from pydantic import ValidationError as ModelError

import main
from fs_ops import read_log
from paths import canon, resolve_output
from schemas import CommandConfig
from taxonomy import build_schema


def run(capsys, *argv):
    code = main.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_case_one(capsys):
    code, out, err = run(capsys, "classify", "-p", "10,4,1,2")
    assert code == 0
    doc = json.loads(out)
    validate(instance=doc, schema=build_schema("classify"))
    assert doc["case"] == {"index": 1, "branch": None}
    assert doc["hole"] is False
    assert doc["candidates"][0]["provenance"] == "A1"
    assert doc["genericity_relation"] is not None
    assert "[warn]" in err


def test_classify_reports_holes(capsys):
    code, out, _ = run(capsys, "classify", "-p", "4,3,2,1/2")
    assert code == 0
    doc = json.loads(out)
    assert doc["hole"] is True
    assert doc["gaps"] == [["4", "5"]]


def test_degenerate_input_exits_3(capsys):
    code, out, err = run(capsys, "classify", "-p", "3,3,1,1")
    assert code == 3
    assert out == ""
    assert "[ERROR]" in err


def test_bad_params_exit_2(capsys):
    code, out, err = run(capsys, "classify", "-p", "1,2,0.5,1")
    assert code == 2
    assert out == ""
    assert "[ERROR]" in err


def test_argparse_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main.main(["induce"])
    assert e.value.code == 2


def test_induce_document(capsys):
    code, out, _ = run(capsys, "induce", "-p", "10,4,1,2")
    assert code == 0
    doc = json.loads(out)
    assert doc["route"] == ["b>a", "c>a"]
    assert doc["trace"]["outcome"] == "symmetric"
    assert doc["generalized"] == [{"reduced_pair": "a", "start": 0, "stop": 4, "ordinary": 2}]


def test_symmetrize_document(capsys):
    code, out, _ = run(capsys, "symmetrize", "-p", "10,4,1,2")
    assert code == 0
    doc = json.loads(out)
    assert doc["params_after"] == ["5", "4", "1", "2"]
    assert doc["generalized_iterations"] == 1
    assert doc["matrix"]["provenance"] == "A1"


def test_orbit_document(capsys):
    code, out, _ = run(capsys, "orbit", "-p", "10,4,1,2", "-x", "0", "--edges")
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "exhausted"
    assert doc["size"] == 16
    assert doc["points"][:3] == ["0", "1", "2"]
    assert all(len(e) == 3 for e in doc["edges"])


def test_render_ascii_from_saved_trace(capsys, tmp_path):
    code, out, _ = run(capsys, "induce", "-p", "10,4,1,2")
    assert code == 0
    trace_file = tmp_path / "induce.json"
    trace_file.write_text(out, encoding="utf-8")
    code, text, _ = run(capsys, "render", "--trace", str(trace_file), "--format", "ascii")
    assert code == 0
    assert "  2 c>a  [0.000, 10.000]" in text.splitlines()


def test_render_rejects_malformed_trace(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"initial": 3}', encoding="utf-8")
    code, out, _ = run(capsys, "render", "--trace", str(bad))
    assert code == 2
    assert out == ""


def test_output_file_and_quiet(capsys, tmp_path):
    target = tmp_path / "doc.json"
    code, out, err = run(capsys, "symmetrize", "-p", "10,4,1,2", "--output", str(target), "--quiet")
    assert code == 0
    assert out == ""
    assert err == ""
    assert json.loads(target.read_text(encoding="utf-8"))["result"] == "symmetric"


def test_runs_are_logged(capsys, tmp_path):
    run(capsys, "classify", "-p", "10,4,1,2")
    run(capsys, "classify", "-p", "3,3,1,1")
    run(capsys, "orbit", "-p", "10,4,1,2", "-x", "0", "--no-log")
    records = read_log(tmp_path / "runs.jsonl")
    assert [r["command"] for r in records] == ["classify", "classify"]
    assert [r["exit_code"] for r in records] == [0, 3]
    assert all("ts" in r and "latency_ms" in r for r in records)


def test_log_command_lists_past_runs(capsys, tmp_path):
    run(capsys, "classify", "-p", "10,4,1,2")
    run(capsys, "classify", "-p", "3,3,1,1")
    run(capsys, "symmetrize", "-p", "10,4,1,2")
    code, out, err = run(capsys, "log", "--command", "classify", "--no-log")
    assert code == 0
    doc = json.loads(out)
    validate(instance=doc, schema=build_schema("log"))
    assert doc["filter"] == "classify"
    assert [r["result"] for r in doc["records"]] == ["ok", "degenerate"]
    assert "[warn] 2 run(s)" in err

    code, out, _ = run(capsys, "log", "--last", "1")
    assert [r["command"] for r in json.loads(out)["records"]] == ["symmetrize"]
    assert read_log(tmp_path / "runs.jsonl", "log")[-1]["records"] == 1


def test_config_rejects_unknown_modes():
    with pytest.raises(ModelError):
        CommandConfig(subcommand="induce", side="up")
    with pytest.raises(ModelError):
        CommandConfig(subcommand="induce", stop="never")
    with pytest.raises(ModelError):
        CommandConfig(subcommand="log", last=0)
    assert CommandConfig(subcommand="induce", side="left").side == "left"


def test_verify_small_batch(capsys):
    code, out, _ = run(capsys, "verify", "--samples", "20", "--seed", "7")
    assert code == 0
    doc = json.loads(out)
    assert doc["samples"] == 20
    assert doc["agreements"] == 20
    assert doc["mismatches"] == []
    assert doc["passed"] is True


def test_verify_zero_samples_is_vacuous(capsys):
    code, out, err = run(capsys, "verify", "--samples", "0")
    assert code == 0
    assert json.loads(out)["passed"] is True
    assert "vacuous" in err


def test_verify_height_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("IISYM_HEIGHT", "1")
    code, out, err = run(capsys, "verify", "--samples", "1")
    assert code == 2
    assert out == ""


def test_scan_thin_token(capsys):
    code, out, _ = run(capsys, "scan", "-p", "thin", "--max-generalized", "8")
    assert code == 0
    report = json.loads(out)["report"]
    assert report["verdict"] == "thin"
    assert report["self_similar_period"] == 6
    assert report["period_rounds"] == 2


def test_thin_check_passes(capsys):
    code, out, _ = run(capsys, "thin-check", "--periods", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert doc["charpoly"] == [-1, 5, -4, -1, 1]
    assert doc["lambda"]["minimal_poly"] == [1, -4, 0, 1]
    assert [leg["case"]["index"] for leg in doc["case_route"]] == [4, 2, 4]


def test_canon_expands_and_joins(tmp_path, monkeypatch):
    monkeypatch.setenv("RUNS_HOME", str(tmp_path))
    assert canon("$RUNS_HOME/logs/../runs.jsonl") == (tmp_path / "runs.jsonl").resolve()
    assert canon("doc.json", base=tmp_path) == (tmp_path / "doc.json").resolve()
    assert resolve_output(tmp_path / "abs.json", tmp_path / "elsewhere") == (tmp_path / "abs.json").resolve()
    assert canon("nested/doc.json").is_absolute()
