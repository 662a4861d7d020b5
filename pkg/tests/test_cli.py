import csv
import io
import json

import pytest

from grassver.cli import main
from grassver.reports import check_record, format_check_line


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_verify_geometry_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "geometry",
                       "--q", "2", "--n", "4", "--k", "2")
    assert code == 0
    assert "PASS geometry:enumeration (2,4,2)" in out
    assert "PASS geometry:cover-counts" in out
    assert "3/3 checks passed" in out


def test_verify_algebra_full(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "algebra",
                       "--q", "2", "--n", "4", "--k", "2")
    assert code == 0
    assert "PASS algebra:REL-1 (2,4,2)" in out
    assert "PASS algebra:REL-8-variant-resolution" in out


def test_verify_algebra_records_names_winning_variant(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "algebra",
                       "--q", "2", "--n", "4", "--k", "2",
                       "--format", "records")
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines() if line]
    assert all(r["record"] == "check" for r in recs)
    res = [r for r in recs if r["check"] == "REL-8-variant-resolution"]
    assert len(res) == 1
    assert res[0]["pass"] is True
    assert res[0]["detail"]["holds"] == "REL-8"


def test_verify_algebra_columns_mode(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "algebra",
                       "--q", "2", "--n", "5", "--k", "2",
                       "--mode", "columns", "--i", "2")
    assert code == 0
    assert "PASS algebra:REL-1-columns" in out
    assert "PASS algebra:REL-8P-columns" in out


def test_verify_graph_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "graph",
                       "--q", "2", "--n", "7", "--k", "3", "--i", "2")
    assert code == 0
    for name in ("orbit-sizes", "structure-constants", "edge-types"):
        assert f"PASS graph:{name} (2,7,3,2)" in out


def test_verify_usage_error_exit_2(capsys):
    code, _, err = run(capsys, "verify", "--suite", "all",
                       "--q", "2", "--n", "4", "--k", "5")
    assert code == 2
    assert "error:" in err


def test_verify_nonprime_q_exit_2(capsys):
    code, _, err = run(capsys, "verify", "--suite", "geometry",
                       "--q", "6", "--n", "4", "--k", "2")
    assert code == 2
    assert "prime" in err


def test_unknown_flag_exit_2(capsys):
    code, _, _ = run(capsys, "verify", "--frobnicate")
    assert code == 2


def test_missing_subcommand_exit_2(capsys):
    code, _, _ = run(capsys)
    assert code == 2


def test_env_defaults(capsys, monkeypatch):
    monkeypatch.setenv("GRASSVER_Q", "2")
    monkeypatch.setenv("GRASSVER_N", "4")
    monkeypatch.setenv("GRASSVER_K", "2")
    monkeypatch.setenv("GRASSVER_SUITE", "geometry")
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "(2,4,2)" in out


def test_explicit_flags_beat_env(capsys, monkeypatch):
    monkeypatch.setenv("GRASSVER_Q", "7")
    code, out, _ = run(capsys, "verify", "--suite", "geometry",
                       "--q", "3", "--n", "4", "--k", "2")
    assert code == 0
    assert "(3,4,2)" in out


def test_out_file(tmp_path, capsys):
    path = tmp_path / "checks.csv"
    code, out, _ = run(capsys, "verify", "--suite", "geometry",
                       "--q", "2", "--n", "4", "--k", "2",
                       "--format", "csv", "--out", str(path))
    assert code == 0
    assert out == ""
    rows = list(csv.reader(io.StringIO(path.read_text())))
    assert rows[0] == ["suite", "check", "instance", "pass", "seconds"]
    assert all(r[3] == "1" for r in rows[1:])
    assert len(rows) == 4


def test_tables_text_and_exit(capsys):
    code, out, _ = run(capsys, "tables", "--q", "2", "--n", "7",
                       "--k", "3", "--i", "2")
    assert code == 0
    assert "structure constants" in out
    assert "edge-type triples" in out
    assert "MISMATCH" not in out


def test_tables_csv(capsys):
    code, out, _ = run(capsys, "tables", "--q", "2", "--n", "7",
                       "--k", "3", "--i", "2", "--format", "csv")
    assert code == 0
    assert "structure-constants,2,7,3,2,A+|A+,27,27,1" in out


def test_enumerate_text(capsys):
    code, out, _ = run(capsys, "enumerate", "--q", "2", "--n", "4",
                       "--k", "2")
    assert code == 0
    assert "67 subspaces" in out
    assert "120 slash, 120 backslash" in out


def test_enumerate_records(capsys):
    code, out, _ = run(capsys, "enumerate", "--q", "2", "--n", "4",
                       "--k", "2", "--format", "records")
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines() if line]
    strata = [r for r in recs if r["record"] == "stratum"]
    assert all(r["size"] == r["closed_form"] for r in strata)
    summary = recs[-1]
    assert summary["record"] == "enumeration-summary"
    assert summary["total"] == 67


def test_check_record_and_line_format():
    rec = check_record("algebra", "REL-1", (2, 4, 2), True, 0.1234)
    line = format_check_line(rec)
    assert line == "PASS algebra:REL-1 (2,4,2) 0.12s"
    rec = check_record("graph", "orbit-sizes", (2, 7, 3, 2), False, 1.0,
                       {"why": "x"})
    assert format_check_line(rec).startswith("FAIL graph:orbit-sizes")
    assert rec["detail"] == {"why": "x"}


@pytest.mark.slow
def test_verify_all_default_bundle(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "PASS geometry:enumeration (2,4,2)" in out
    assert "PASS geometry:enumeration (3,4,2)" in out
    assert "PASS graph:orbit-sizes (2,7,3,2)" in out
    assert "PASS entries:entry-table (2,7,3,2)" in out
