"""End-to-end command-line behavior, exit codes and reproducibility."""

from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from gaugeorbits import cli

DATA = Path(__file__).parent / "data"


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr().out
    return code, out


def test_howe_s3(capsys):
    code, out = run_cli(["howe", "S3"], capsys)
    assert code == 0
    data = json.loads(out)
    assert len(data["classes"]) == 4
    assert data["t_min"] == 0 and data["t_max"] == 3
    assert data["version"]


def test_howe_su2_and_u1(capsys):
    code, out = run_cli(["howe", "SU2"], capsys)
    data = json.loads(out)
    assert [c["label"] for c in data["classes"]] == ["Full", "Torus", "Center"]
    assert data["hasse_edges"] == [[0, 1], [1, 2]]
    code, out = run_cli(["howe", "U1"], capsys)
    data = json.loads(out)
    assert len(data["classes"]) == 1


def test_howe_unknown_group(capsys):
    code, _ = run_cli(["howe", "E8"], capsys)
    assert code == 2


def test_classify_fixture(capsys):
    code, out = run_cli(
        ["classify", "--group", "S3", "--input", str(DATA / "s3_rotation_loop.json")],
        capsys,
    )
    assert code == 0
    data = json.loads(out)
    assert data["label"] == "{e,(123),(132)}"
    assert data["holonomy_generators"] == ["(123)"]
    assert data["reduced_generators"] == ["(123)"]
    assert data["centralizer"]["members"] == ["e", "(123)", "(132)"]


def test_classify_trivial_is_minimal(tmp_path, capsys):
    payload = {
        "graph": {"vertices": ["m"], "base": "m",
                  "edges": [{"name": "a", "from": "m", "to": "m"}]},
        "values": {"a": "e"},
    }
    path = tmp_path / "t.json"
    path.write_text(json.dumps(payload))
    code, out = run_cli(["classify", "--group", "S3", "--input", str(path)], capsys)
    assert code == 0
    assert json.loads(out)["class_id"] == 0


def test_classify_malformed_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _ = run_cli(["classify", "--group", "S3", "--input", str(path)], capsys)
    assert code == 2


def test_classify_bad_values(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"graph": {"vertices": ["m"], "base": "m",
                                          "edges": []}, "values": {"zz": "e"}}))
    code, _ = run_cli(["classify", "--group", "S3", "--input", str(path)], capsys)
    assert code == 2


def test_census_exact_cli(tmp_path, capsys):
    out_file = tmp_path / "report.json"
    csv_file = tmp_path / "report.csv"
    code, _ = run_cli(
        ["census", "--group", "S3", "--loops", "2", "--exact",
         "--out", str(out_file), "--csv", str(csv_file)],
        capsys,
    )
    assert code == 0
    data = json.loads(out_file.read_text())
    assert data["total"] == 36
    assert data["classes"][3]["fraction"] == [1, 2]
    rows = csv_file.read_text().strip().splitlines()
    assert len(rows) == 5 and rows[0].startswith("class_id")


def test_census_requires_mode_choice(capsys):
    code, _ = run_cli(["census", "--group", "S3", "--loops", "1"], capsys)
    assert code == 2
    code, _ = run_cli(
        ["census", "--group", "S3", "--loops", "1", "--exact", "--samples", "10"],
        capsys,
    )
    assert code == 2
    code, _ = run_cli(
        ["census", "--group", "S3", "--loops", "1", "--samples", "10"], capsys
    )
    assert code == 2  # missing seed


def test_census_budget_error(capsys):
    code, _ = run_cli(
        ["census", "--group", "S3", "--loops", "12", "--exact"], capsys
    )
    assert code == 2


def test_census_bytes_reproducible(tmp_path):
    args = ["census", "--group", "SU2", "--loops", "2", "--samples", "4000",
            "--seed", "7"]
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(args + ["--out", str(f1)]) == 0
    assert cli.main(args + ["--out", str(f2)]) == 0
    assert f1.read_bytes() == f2.read_bytes()
    f3 = tmp_path / "c.json"
    env = dict(os.environ, GAUGEORBITS_WORKERS="4")
    subprocess.run(
        [sys.executable, "-m", "gaugeorbits.cli", *args, "--out", str(f3)],
        env=env,
        check=True,
    )
    assert f1.read_bytes() == f3.read_bytes()


def test_construct_cli(tmp_path, capsys):
    out_file = tmp_path / "ext.json"
    report_file = tmp_path / "report.json"
    code, _ = run_cli(
        ["construct", "--group", "SU2", "--input", str(DATA / "su2_trivial.json"),
         "--target-type", "2", "--out", str(out_file),
         "--report", str(report_file)],
        capsys,
    )
    assert code == 0
    report = json.loads(report_file.read_text())
    assert report["type_ok"] and report["restrictions_ok"]
    assert report["achieved_label"] == "Center"
    written = json.loads(out_file.read_text())
    assert len(written["values"]) == 4  # two tails + two loops


def test_construct_unreachable_target(tmp_path, capsys):
    code, _ = run_cli(
        ["construct", "--group", "S3",
         "--input", str(DATA / "s3_rotation_loop.json"),
         "--target-type", "0", "--out", str(tmp_path / "x.json")],
        capsys,
    )
    assert code == 2
    assert not (tmp_path / "x.json").exists()  # no partial output


def test_construct_target_out_of_range(tmp_path, capsys):
    code, _ = run_cli(
        ["construct", "--group", "SU2", "--input", str(DATA / "su2_trivial.json"),
         "--target-type", "9", "--out", str(tmp_path / "x.json")],
        capsys,
    )
    assert code == 2


def test_slice_check_cli(capsys):
    code, out = run_cli(
        ["slice-check", "--group", "SU2", "--base", str(DATA / "su2_pair_base.json"),
         "--trials", "10", "--noise", "0.001", "--seed", "3"],
        capsys,
    )
    assert code == 0
    data = json.loads(out)
    assert data["passed"] and data["openness_radius"] > 0
    assert data["retraction_max"] < 1e-6


def test_verify_s3(capsys):
    code, out = run_cli(["verify", "S3"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["ok"] and data["failures"] == []
    assert len(data["checks"]) >= 15


def test_verify_unknown_group(capsys):
    code, _ = run_cli(["verify", "E8"], capsys)
    assert code == 2


def test_group_table_file_via_cli(tmp_path, capsys):
    table = tmp_path / "k4.txt"
    table.write_text(
        "group K4 4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n"
    )
    code, out = run_cli(["howe", str(table)], capsys)
    assert code == 0
    assert len(json.loads(out)["classes"]) == 1  # abelian


def test_console_script_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "gaugeorbits.cli", "howe", "U1"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["t_min"] == 0
