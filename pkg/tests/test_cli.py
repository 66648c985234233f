"""Tests for the command-line front end."""

import dataclasses
import json

import pytest

import qtorus.cli as cli
from qtorus.catalog import identity_names, verify_identity
from qtorus.scripts import braid_script
from qtorus.words import render_script


def run_cli(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def parse_jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line]


def normalized(text):
    """Report lines with elapsed_ms zeroed, re-serialized canonically."""
    rows = []
    for row in parse_jsonl(text):
        if "elapsed_ms" in row:
            row["elapsed_ms"] = 0
        rows.append(json.dumps(row, sort_keys=True, separators=(",", ":")))
    return rows


# ---------------------------------------------------------------- verify


def test_verify_two_items_jsonl(capsys):
    code, out, err = run_cli(
        ["verify", "--identity", "mult1,two_site_set", "--precision", "10"], capsys
    )
    assert code == 0 and err == ""
    rows = parse_jsonl(out)
    assert len(rows) == 3  # two reports plus the summary line
    assert rows[0]["identity"] == "mult1"
    assert rows[1]["identity"] == "two_site_set"
    assert rows[2] == {
        "schema_version": 1,
        "summary": {"total": 2, "passed": 2, "failed": 0, "status": "PASS"},
    }
    for row in rows[:2]:
        assert set(row) == {
            "schema_version",
            "identity",
            "params",
            "status",
            "per_monomial",
            "certificate_summary",
            "elapsed_ms",
        }
        # canonical serialization: sorted keys, no spaces
        line = out.splitlines()[rows.index(row)]
        assert line == json.dumps(row, sort_keys=True, separators=(",", ":"))


def test_verify_repeatable_flag_dedupes_and_orders(capsys):
    code, out, _ = run_cli(
        [
            "verify",
            "--identity", "two_site_set",
            "--identity", "mult1,two_site_set",
            "--precision", "10",
        ],
        capsys,
    )
    assert code == 0
    rows = parse_jsonl(out)
    assert [r["identity"] for r in rows[:-1]] == ["mult1", "two_site_set"]


def test_verify_all_is_default_and_explicit(capsys, tmp_path):
    # 'all' resolves to the catalog in order; defaults run everything
    out_a = tmp_path / "a.jsonl"
    code = cli.main(
        ["verify", "--identity", "all", "--precision", "8", "--sites", "6",
         "--output", str(out_a)]
    )
    assert code == 0
    rows = parse_jsonl(out_a.read_text())
    assert [r["identity"] for r in rows[:-1]] == identity_names()
    assert rows[-1]["summary"]["total"] == len(identity_names())


def test_verify_spec_example_exits_zero(capsys, tmp_path):
    out_path = tmp_path / "full.jsonl"
    code = cli.main(
        ["verify", "--identity", "all", "--sites", "6", "--precision", "14",
         "--output", str(out_path)]
    )
    assert code == 0
    rows = parse_jsonl(out_path.read_text())
    assert rows[-1]["summary"]["status"] == "PASS"
    assert all(r["status"] == "PASS" for r in rows[:-1])


def test_verify_json_format_single_object(capsys):
    code, out, _ = run_cli(
        ["verify", "--identity", "mult1", "--format", "json"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"reports", "schema_version", "summary"}
    assert doc["reports"][0]["identity"] == "mult1"
    assert doc["summary"]["status"] == "PASS"
    assert out == json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def test_verify_text_format(capsys):
    code, out, _ = run_cli(
        ["verify", "--identity", "pentagon,braid_script", "--window", "2", "--format", "text"],
        capsys,
    )
    assert code == 0
    assert out.startswith("pentagon: PASS\n  params: N=2 W=2 K=2\n")
    assert "  monomials: 9/9 match\n    1: 1\n" in out
    assert "braid_script: PASS" in out
    assert "certificate: mode=replay scripts=" in out
    assert out.rstrip("\n").endswith("summary: total=2 passed=2 failed=0 PASS")


def test_report_text_marks_mismatches():
    report = verify_identity("mult1", window=2)
    row = dict(report.per_monomial[1], match=False, rhs="0")
    broken = dataclasses.replace(
        report,
        status="FAIL",
        per_monomial=[report.per_monomial[0], row],
    )
    text = broken.to_text()
    assert text.startswith("mult1: FAIL")
    assert "monomials: 1/2 match" in text
    assert f"    {row['target']}: MISMATCH lhs={row['lhs']} rhs=0" in text


def test_verify_output_file_leaves_stdout_empty(capsys, tmp_path):
    path = tmp_path / "r.jsonl"
    code, out, err = run_cli(
        ["verify", "--identity", "mult1", "--output", str(path)], capsys
    )
    assert code == 0 and out == "" and err == ""
    assert parse_jsonl(path.read_text())[-1]["summary"]["status"] == "PASS"


def test_verify_deterministic_across_runs(capsys):
    argv = ["verify", "--identity", "seven_term,rewrite_walk",
            "--precision", "10", "--seed", "5"]
    _, out1, _ = run_cli(argv, capsys)
    _, out2, _ = run_cli(argv, capsys)
    assert normalized(out1) == normalized(out2)


def test_verify_jobs_preserve_order_and_bytes(capsys):
    argv = ["verify", "--identity", "all", "--precision", "8", "--sites", "6",
            "--seed", "9"]
    _, seq, _ = run_cli(argv + ["--jobs", "1"], capsys)
    _, par, _ = run_cli(argv + ["--jobs", "3"], capsys)
    assert normalized(seq) == normalized(par)


def test_verify_forced_fail_exits_one(capsys, monkeypatch):
    def failing(name, **kw):
        return dataclasses.replace(verify_identity(name, **kw), status="FAIL")

    monkeypatch.setattr(cli, "verify_identity", failing)
    code, out, _ = run_cli(["verify", "--identity", "mult1"], capsys)
    assert code == 1
    rows = parse_jsonl(out)
    assert rows[-1]["summary"] == {
        "total": 1, "passed": 0, "failed": 1, "status": "FAIL"
    }


def test_verify_unknown_identity_exits_two(capsys):
    code, out, err = run_cli(["verify", "--identity", "octagon"], capsys)
    assert code == 2 and out == ""
    assert "octagon" in err


def test_verify_bad_params_exit_two(capsys):
    code, _, err = run_cli(
        ["verify", "--identity", "seven_term", "--precision", "100"], capsys
    )
    assert code == 2 and "error" in err
    code, _, _ = run_cli(
        ["verify", "--identity", "seven_term", "--sites", "1"], capsys
    )
    assert code == 2
    code, _, _ = run_cli(["verify", "--identity", "mult1", "--jobs", "0"], capsys)
    assert code == 2


def test_verify_rejects_unknown_flag():
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--tolerance", "1e-6"])
    assert exc.value.code == 2


# ---------------------------------------------------------------- list


def test_list_outputs_catalog(capsys):
    code, out, err = run_cli(["list"], capsys)
    assert code == 0 and err == ""
    rows = parse_jsonl(out)
    assert [r["name"] for r in rows] == identity_names()
    assert all(set(r) == {"name", "description", "defaults"} for r in rows)


# ---------------------------------------------------------------- replay


def test_replay_script_file(capsys, tmp_path):
    path = tmp_path / "braid.txt"
    path.write_text(render_script(braid_script(1, 3)))
    code, out, err = run_cli(["replay", str(path)], capsys)
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert doc["ok"] is True
    assert doc["name"] == "braid(1)"
    assert doc["steps"] == doc["steps_applied"] == 8
    assert doc["error"] is None


def test_replay_wrong_end_exits_one(capsys, tmp_path):
    text = render_script(braid_script(1, 3))
    lines = text.splitlines()
    end_idx = next(i for i, ln in enumerate(lines) if ln.startswith("end:"))
    lines[end_idx] = "end: s1+ s1-"
    path = tmp_path / "bad_end.txt"
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run_cli(["replay", str(path)], capsys)
    assert code == 1
    doc = json.loads(out)
    assert doc["ok"] is False and doc["error"]


def test_replay_unparsable_file_exits_two(capsys, tmp_path):
    path = tmp_path / "junk.txt"
    path.write_text("script: x\nstart: s1+\n@0 nosuchrel fwd\nend: s1+\n")
    code, out, err = run_cli(["replay", str(path)], capsys)
    assert code == 2 and out == "" and "error" in err


def test_replay_missing_file_exits_two(capsys, tmp_path):
    code, _, err = run_cli(["replay", str(tmp_path / "absent.txt")], capsys)
    assert code == 2 and err
