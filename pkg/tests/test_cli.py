import json

import pytest

from gcfibers.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_faces_f3(capsys):
    code, out, _ = run(capsys, "faces", "--lambda", "1,0,-1")
    assert code == 0
    assert "f-vector: (7, 11, 6, 1)" in out
    assert sum(1 for line in out.splitlines() if "dim=0" in line) == 7
    assert sum(1 for line in out.splitlines() if "dim=3" in line) == 1


def test_faces_interval(capsys):
    code, out, _ = run(capsys, "faces", "--lambda", "1,0")
    assert code == 0
    assert "f-vector: (2, 1)" in out


def test_faces_json_roundtrip(capsys):
    code, out, _ = run(capsys, "faces", "--lambda", "1,1,0,0", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["lambda"]["multiplicities"] == [2, 2]
    assert len(payload["faces"]) == sum(payload["f_vector"])


def test_lagrangian_counts(capsys):
    code, out, _ = run(capsys, "lagrangian", "--lambda", "1,1,0,0,0,0")
    assert code == 0
    assert "4 proper + 1 improper" in out
    code, out, _ = run(capsys, "lagrangian", "--lambda", "3,2,1,0")
    assert "3 proper + 1 improper" in out
    code, out, _ = run(capsys, "lagrangian", "--lambda", "1,0")
    assert "0 proper + 1 improper" in out


def test_fiber_su3_by_equalities(capsys):
    eq = ",".join(f"u{i}{j}=0" for i in range(1, 4) for j in range(1, 5 - i)
                  if (i, j) != (3, 3))
    code, out, _ = run(capsys, "fiber", "--lambda", "3,3,0,-3,-3",
                       "--face-by-equalities", eq)
    assert code == 0
    assert "S^3-bundle over S^5" in out
    assert "dim 8" in out and "Lagrangian: True" in out


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--lambda", "1,0,-1", "--face", "all",
                       "--samples", "5", "--seed", "7")
    assert code == 0
    assert "PASS: 25 faces" in out


def test_verify_json_deterministic(capsys):
    args = ("verify", "--lambda", "1,1,0", "--face", "all", "--samples", "4",
            "--seed", "3", "--format", "json")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_verify_jobs_matches_serial(capsys):
    base = ("verify", "--lambda", "1,0,-1", "--face", "all", "--samples", "3",
            "--seed", "5", "--format", "json")
    _, serial, _ = run(capsys, *base)
    _, parallel, _ = run(capsys, *base, "--jobs", "2")
    assert serial == parallel


def test_render_ascii(capsys):
    code, out, _ = run(capsys, "render", "--lambda", "4,4,3,2,1",
                       "--face", "improper", "--format", "ascii")
    assert code == 0
    assert out.splitlines()[0] == "+===+===+"


def test_render_svg_with_overlay(capsys):
    code, out, _ = run(capsys, "render", "--lambda", "1,0,-1",
                       "--face", "improper", "--format", "svg",
                       "--overlay", "w2", "--shade-l-blocks")
    assert code == 0
    assert out.startswith("<svg ")


def test_polytope_export(capsys):
    code, out, _ = run(capsys, "polytope", "--lambda", "1,0,-1",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["variables"] == ["u[1][1]", "u[1][2]", "u[2][1]"]
    assert len(payload["inequalities"]) == 6


def test_bad_lambda_exit_code(capsys):
    code, _, err = run(capsys, "faces", "--lambda", "1,2,3")
    assert code == 2
    assert "error:" in err


def test_unknown_face_id(capsys):
    code, _, err = run(capsys, "fiber", "--lambda", "1,0", "--face", "beef")
    assert code == 2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "hrep.json"
    code, out, _ = run(capsys, "polytope", "--lambda", "1,0",
                       "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["variables"] == ["u[1][1]"]


def test_face_by_id(capsys):
    code, out, _ = run(capsys, "faces", "--lambda", "1,0,-1", "--format", "json")
    payload = json.loads(out)
    some_id = payload["faces"][0]["face_id"]
    code, out, _ = run(capsys, "fiber", "--lambda", "1,0,-1", "--face", some_id)
    assert code == 0 and some_id in out
