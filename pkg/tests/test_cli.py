# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

import io
import json
from pathlib import Path

import pytest

from ainfinity.cli.__main__ import main

DATA = Path(__file__).parent.parent / "data_curated"


def run(capsys, *args: str):
    code = main(list(args))
    return code, capsys.readouterr().out


def test_no_command_prints_usage(capsys):
    code, _ = run(capsys)
    assert code == 2


def test_faces(capsys):
    code, out = run(capsys, "faces", "3", "--dim", "1")
    assert code == 0
    assert sorted(out.split()) == sorted(["1|23", "23|1", "2|13", "13|2", "3|12", "12|3"])


def test_faces_json(capsys):
    code, out = run(capsys, "faces", "2", "--format", "json")
    assert code == 0
    records = json.loads(out)
    assert {r["face"] for r in records} == {"1|2", "2|1", "12"}
    assert {r["face"]: r["dimension"] for r in records}["12"] == 1


def test_faces_rejects_empty_polytopes(capsys):
    code, _ = run(capsys, "faces", "0")
    assert code == 2


def test_coproduct(capsys):
    code, out = run(capsys, "coproduct", "24|1|3", "123")
    assert code == 0
    assert out.splitlines() == ["1|2 (x) 24|13 + 1 (x) 24|1|3", "0"]


def test_coproduct_reads_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("1|2\n\n2|1\n"))
    code, out = run(capsys, "coproduct", "-")
    assert code == 0
    assert out.splitlines() == ["1 (x) 1|2", "1 (x) 2|1"]


def test_coproduct_rejects_bad_faces(capsys):
    code, _ = run(capsys, "coproduct", "1||2")
    assert code == 2


def test_output_file(capsys, tmp_path):
    target = tmp_path / "faces.txt"
    code, out = run(capsys, "faces", "2", "-o", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text(encoding="utf-8").split() == ["1|2", "12", "2|1"]


def test_cup(capsys):
    code, out = run(capsys, "cup", str(DATA / "omega_algebra.json"))
    assert code == 0
    lines = out.splitlines()
    assert any(line.startswith("1|2: ") and "m2(m2(x)1)" in line for line in lines)


def test_biderivative(capsys):
    code, out = run(capsys, "biderivative", str(DATA / "omega_example.json"), "--expansion")
    assert code == 0
    assert "expansion:" in out
    assert "(2,1) -> (1,1): mu" in out


def test_biderivative_json(capsys):
    code, out = run(capsys, "biderivative", str(DATA / "omega_example.json"),
                    "--format", "json", "-N", "2")
    assert code == 0
    document = json.loads(out)
    assert document["window"] == 2
    assert any(group["from"] == [1, 1] and group["to"] == [1, 1] for group in document["arrows"])


def test_biderivative_at_window_four(capsys):
    code, out = run(capsys, "biderivative", str(DATA / "omega_example.json"), "-N", "4")
    assert code == 0
    assert "(2,1) -> (1,1): mu" in out
    assert any(line.startswith("(4,1) -> (1,1): ") for line in out.splitlines())


def test_relations(capsys):
    code, out = run(capsys, "relations", "--bidegree", "2,2", "-N", "4")
    assert code == 0
    assert out.startswith("(2,2): ")
    assert "w{2,1} w{1,2}" in out


def test_relations_json(capsys):
    code, out = run(capsys, "relations", "-N", "2", "--format", "json")
    assert code == 0
    bidegrees = [r["bidegree"] for r in json.loads(out)]
    assert [2, 2] in bidegrees
    assert [1, 1] in bidegrees


def test_relations_window_insufficient(capsys):
    code, _ = run(capsys, "relations", "--bidegree", "3,3", "-N", "2")
    assert code == 1


@pytest.mark.parametrize("bidegree", ["3", "a,b", "2;2"])
def test_relations_rejects_bad_bidegrees(capsys, bidegree):
    code, _ = run(capsys, "relations", "--bidegree", bidegree)
    assert code == 2


@pytest.mark.parametrize("name", ["z2", "sweedler", "exterior"])
def test_check_builtin(capsys, name):
    code, out = run(capsys, "check", name)
    assert code == 0
    assert out.startswith("pass:")


def test_check_file(capsys):
    code, out = run(capsys, "check", str(DATA / "z2.json"), "--format", "json")
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_check_perturbed(capsys):
    code, out = run(capsys, "check", "z2", "--perturb", "Delta", "--seed", "11")
    assert code == 1
    assert out.startswith("fail: bidegree (2,2) violated")


def test_check_unknown_operation(capsys):
    code, _ = run(capsys, "check", "z2", "--perturb", "nu")
    assert code == 2


def test_check_missing_input(capsys, tmp_path):
    code, _ = run(capsys, "check", str(tmp_path / "missing.json"))
    assert code == 2


def test_check_malformed_input(capsys, tmp_path):
    target = tmp_path / "broken.json"
    target.write_text('{"dims": ', encoding="utf-8")
    code, _ = run(capsys, "check", str(target))
    assert code == 2


def test_check_with_a_diagonal_table(capsys):
    code, out = run(capsys, "check", "z2", "--diagonal", str(DATA / "diagonal_template.json"))
    assert code == 0
    assert out.startswith("pass:")


def test_selftest(capsys):
    code, out = run(capsys, "selftest", "faces", "trees", "level-coproduct")
    assert code == 0
    assert out.splitlines() == ["ok   faces", "ok   trees", "ok   level-coproduct"]


def test_selftest_unknown_case(capsys):
    code, _ = run(capsys, "selftest", "nothing")
    assert code == 2
