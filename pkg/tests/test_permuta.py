# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

import pytest
from hypothesis import given

from ainfinity.err import InvalidFace, InvalidLeafSequence, InvalidTree
from ainfinity.permuta import (FaceTensorSum, LeveledTree, OrderedPartition,
                               enumerate_faces, face_for_leaf_sequence,
                               face_leaf_sequence, leaf_sequence,
                               level_coproduct, orientation,
                               partition_to_tree, tree_to_partition)

from .strategies import leaf_sequences, ordered_partitions


def face(text: str) -> OrderedPartition:
    return OrderedPartition.parse(text)


@pytest.mark.parametrize("n, counts", [
    (1, {0: 1}),
    (2, {0: 2, 1: 1}),
    (3, {0: 6, 1: 6, 2: 1}),
    (4, {0: 24, 1: 36, 2: 14, 3: 1}),
])
def test_face_counts(n, counts):
    for dim, count in counts.items():
        assert len(enumerate_faces(n, dim)) == count
    assert len(enumerate_faces(n)) == sum(counts.values())


def test_enumerate_faces_is_sorted():
    faces = enumerate_faces(3, 1)
    assert faces == sorted(faces, key=lambda f: f.blocks)
    assert {str(f) for f in faces} == {"1|23", "23|1", "2|13", "13|2", "3|12", "12|3"}


def test_parse_and_render():
    p = face("24|1|3")
    assert p.n == 4
    assert p.blocks == ((2, 4), (1,), (3,))
    assert p.dimension == 1
    assert p.levels == 3
    assert str(p) == "24|1|3"
    assert face("2,4|1|3") == p


@pytest.mark.parametrize("text", ["", "1||2", "12|2", "13", "1|a"])
def test_parse_rejects_malformed_faces(text):
    with pytest.raises(InvalidFace):
        face(text)


def test_top_cell():
    top = OrderedPartition.top_cell(3)
    assert str(top) == "123"
    assert top.is_top_cell
    assert top.dimension == 2


def test_invalid_tree():
    with pytest.raises(InvalidTree):
        LeveledTree(3, (1, 3))
    with pytest.raises(InvalidTree):
        LeveledTree(1, ())


@given(ordered_partitions())
def test_tree_correspondence(p):
    t = partition_to_tree(p)
    assert t.leaf_count == p.n + 1
    assert t.levels == p.levels
    assert tree_to_partition(t) == p


@given(ordered_partitions())
def test_level_coproduct_shape(p):
    result = level_coproduct(p)
    assert len(result) == p.levels - 1
    for k, (upper, lower, coef) in enumerate(result, start=1):
        assert coef == 1
        assert lower.n == p.n
        assert lower.levels == k + 1
        assert upper.levels == p.levels - k
        assert lower.dimension + upper.dimension >= p.dimension


def test_level_coproduct_of_a_vertex():
    expected = FaceTensorSum([
        (face("3|1|2"), face("3|124"), 1),
        (face("1|2"), face("3|4|12"), 1),
        (face("1"), face("3|4|1|2"), 1),
    ])
    assert level_coproduct(face("3|4|1|2")) == expected


def test_level_coproduct_of_a_top_cell_is_empty():
    assert not level_coproduct(OrderedPartition.top_cell(4))


def test_level_coproduct_rendering():
    assert level_coproduct(face("24|1|3")).render() == "1|2 (x) 24|13 + 1 (x) 24|1|3"


@pytest.mark.parametrize("text, expected", [
    ("123", (4,)),
    ("13|2", (2, 2)),
    ("2|13", (1, 2, 1)),
    ("1|2|3", (2, 1, 1)),
    ("3|1|2", (1, 1, 2)),
])
def test_leaf_sequences(text, expected):
    assert face_leaf_sequence(face(text)) == expected


@given(leaf_sequences())
def test_face_for_leaf_sequence(s):
    e = face_for_leaf_sequence(s)
    assert e.n == sum(s) - 1
    assert e.levels == (1 if len(s) == 1 else 2)
    assert leaf_sequence(partition_to_tree(e)) == s


@pytest.mark.parametrize("s", [(), (1,), (1, 1, 1), (0, 2), (3, -1)])
def test_face_for_leaf_sequence_rejects(s):
    with pytest.raises(InvalidLeafSequence):
        face_for_leaf_sequence(s)


def test_face_for_leaf_sequence_examples():
    assert str(face_for_leaf_sequence((1, 2))) == "2|1"
    assert str(face_for_leaf_sequence((2, 1))) == "1|2"
    assert str(face_for_leaf_sequence((3, 2))) == "124|3"
    assert str(face_for_leaf_sequence((1, 1, 2))) == "3|12"


def test_orientation():
    assert orientation(face("1|2")) == 1
    assert orientation(face("2|1")) == -1
    assert orientation(face("123")) == 1
    assert orientation(face("3|12")) == 1
    assert orientation(face("2|13")) == -1
