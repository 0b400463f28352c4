# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

import platform
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import IO, Any, Iterator, List, Tuple, Union

from .err import InvalidData

# Restrict C backend from other runtimes than CPython
# this was causing problems in PyPy actually.
if platform.python_implementation() == "CPython":
    import ijson
else:
    import ijson.backends.yajl2_cffi as ijson

from ijson.common import JSONError


Scalar = Union[int, str, Decimal, Fraction]


def IJsonIterator(buffer: IO) -> Iterator[Any]:
    """Takes a file-like object with a json array, and yields elements from that array.
    Provided buffer will be automatically closed.

    Non-integer numbers come out as Decimals, so no precision is lost on the way
    to exact rationals.
    """
    try:
        yield from ijson.items(buffer, "item")  # type: ignore
    finally:
        buffer.close()


def load_json_array(path: Path) -> List[Any]:
    """Reads a whole JSON array from the provided file."""
    try:
        return list(IJsonIterator(path.open(mode="rb")))
    except JSONError as e:
        raise InvalidData(f"{path}: malformed JSON ({e})") from e


def load_json_document(path: Path) -> Any:
    """Reads a JSON document (usually an object) from the provided file."""
    try:
        with path.open(mode="rb") as f:
            return next(ijson.items(f, ""))  # type: ignore
    except (JSONError, StopIteration) as e:
        raise InvalidData(f"{path}: malformed JSON ({e})") from e


def parse_fraction(value: Scalar) -> Fraction:
    """Parses "p/q" strings, integers and decimals into an exact Fraction."""
    if isinstance(value, bool):
        raise InvalidData(f"not a rational number: {value!r}")
    try:
        return Fraction(value)  # type: ignore
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise InvalidData(f"not a rational number: {value!r}") from e


def fraction_to_str(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else \
        f"{value.numerator}/{value.denominator}"


def parse_pair(text: str) -> Tuple[int, int]:
    """Parses "j,i" into a pair of positive integers."""
    left, sep, right = text.partition(",")
    if not sep:
        raise InvalidData(f"expected a pair like '2,2', got {text!r}")
    try:
        pair = int(left), int(right)
    except ValueError as e:
        raise InvalidData(f"expected a pair like '2,2', got {text!r}") from e
    if min(pair) < 1:
        raise InvalidData(f"pair entries must be positive, got {text!r}")
    return pair


def sign_of_permutation(seq: Tuple[int, ...]) -> int:
    """Returns +1 or -1, the sign of a permutation given as a sequence of distinct values."""
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign
