# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

import io
import json
from decimal import Decimal
from fractions import Fraction

import pytest

from ainfinity.err import InvalidData
from ainfinity.exporter import ReportExporter
from ainfinity.util import (fraction_to_str, load_json_array,
                            load_json_document, parse_fraction, parse_pair,
                            sign_of_permutation)


@pytest.mark.parametrize("value, expected", [
    ("1/2", Fraction(1, 2)), ("-3", Fraction(-3)), (4, Fraction(4)),
    (Decimal("0.25"), Fraction(1, 4)), ("0.5", Fraction(1, 2)),
])
def test_parse_fraction(value, expected):
    assert parse_fraction(value) == expected


@pytest.mark.parametrize("value", ["x", "1/0", True, None])
def test_parse_fraction_rejects(value):
    with pytest.raises(InvalidData):
        parse_fraction(value)


def test_fraction_to_str():
    assert fraction_to_str(Fraction(3)) == "3"
    assert fraction_to_str(Fraction(-2, 6)) == "-1/3"


def test_parse_pair():
    assert parse_pair("3,2") == (3, 2)
    for text in ["3", "0,1", "a,1"]:
        with pytest.raises(InvalidData):
            parse_pair(text)


def test_sign_of_permutation():
    assert sign_of_permutation((1, 2, 3)) == 1
    assert sign_of_permutation((2, 1, 3)) == -1
    assert sign_of_permutation((3, 1, 2)) == 1


def test_json_loaders(tmp_path):
    target = tmp_path / "data.json"
    target.write_text(json.dumps([{"a": 1.5}, {"b": "1/3"}]), encoding="utf-8")
    assert load_json_array(target) == [{"a": Decimal("1.5")}, {"b": "1/3"}]
    assert load_json_document(target)[1] == {"b": "1/3"}

    target.write_text("[1, ", encoding="utf-8")
    with pytest.raises(InvalidData):
        load_json_array(target)
    target.write_text("", encoding="utf-8")
    with pytest.raises(InvalidData):
        load_json_document(target)


def test_text_exporter():
    stream = io.StringIO()
    with ReportExporter("test", stream=stream) as out:
        out.save("first", {"ignored": True})
        out.save("second")
        out.save("third")
    assert stream.getvalue() == "first\nsecond\nthird\n"


def test_json_exporter():
    stream = io.StringIO()
    with ReportExporter("test", "json", stream=stream) as out:
        out.save("first", {"n": 1})
        out.save("second")
    assert json.loads(stream.getvalue()) == [{"n": 1}, "second"]

    stream = io.StringIO()
    with ReportExporter("test", "json", stream=stream) as out:
        out.save_document("text", {"window": 3})
    assert json.loads(stream.getvalue()) == {"window": 3}


def test_json_exporter_skips_output_on_errors():
    stream = io.StringIO()
    with pytest.raises(RuntimeError):
        with ReportExporter("test", "json", stream=stream) as out:
            out.save("first")
            raise RuntimeError("boom")
    assert stream.getvalue() == ""


def test_exporter_writes_files(tmp_path):
    target = tmp_path / "out.txt"
    with ReportExporter("test", target=target) as out:
        out.save("line")
    assert target.read_text(encoding="utf-8") == "line\n"
