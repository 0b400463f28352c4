# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

"""Faces of permutahedra and their planar leveled trees.

A face of P_n is an ordered partition B_1|...|B_k of {1..n}. Its tree has n+1
leaves; the gap g between leaves g and g+1 closes at level j iff g belongs to B_j
(level 1 sits next to the leaves).
"""

from dataclasses import dataclass
from itertools import permutations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from sympy.utilities.iterables import multiset_partitions

from .const import TENSOR, TENSOR_ASCII
from .err import InvalidFace, InvalidLeafSequence, InvalidTree
from .util import sign_of_permutation

Block = Tuple[int, ...]
LeafSequence = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class OrderedPartition:
    n: int
    blocks: Tuple[Block, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidFace(f"ground set must be non-empty, got n={self.n}")
        seen: List[int] = []
        for block in self.blocks:
            if not block:
                raise InvalidFace(f"empty block in {self.blocks}")
            if list(block) != sorted(set(block)):
                raise InvalidFace(f"block {block} is not strictly increasing")
            seen.extend(block)
        if sorted(seen) != list(range(1, self.n + 1)):
            raise InvalidFace(f"blocks {self.blocks} do not partition {{1..{self.n}}}")

    @classmethod
    def parse(cls, text: str) -> "OrderedPartition":
        """Parses "24|1|3" or the comma form "2,4|1|3"."""
        text = text.strip()
        if not text:
            raise InvalidFace("empty face")
        blocks: List[Block] = []
        for chunk in text.split("|"):
            chunk = chunk.strip()
            if not chunk:
                raise InvalidFace(f"empty block in {text!r}")
            try:
                if "," in chunk:
                    block = tuple(int(i) for i in chunk.split(","))
                else:
                    block = tuple(int(c) for c in chunk)
            except ValueError as e:
                raise InvalidFace(f"invalid face {text!r}") from e
            blocks.append(block)
        n = sum(len(b) for b in blocks)
        return cls(n, tuple(blocks))

    @classmethod
    def top_cell(cls, n: int) -> "OrderedPartition":
        return cls(n, (tuple(range(1, n + 1)),))

    @property
    def levels(self) -> int:
        return len(self.blocks)

    @property
    def dimension(self) -> int:
        return self.n - len(self.blocks)

    @property
    def is_top_cell(self) -> bool:
        return len(self.blocks) == 1

    def render(self) -> str:
        if self.n <= 9:
            return "|".join("".join(map(str, b)) for b in self.blocks)
        return "|".join(",".join(map(str, b)) for b in self.blocks)

    def __str__(self) -> str:
        return self.render()


def face_dimension(p: OrderedPartition) -> int:
    return p.dimension


def enumerate_faces(n: int, dim: Optional[int] = None) -> List[OrderedPartition]:
    """All ordered partitions of {1..n}, optionally only those of the given dimension,
    sorted lexicographically by their blocks."""
    if n < 1:
        raise InvalidFace(f"permutahedron index must be positive, got n={n}")

    faces: List[OrderedPartition] = []
    for partition in multiset_partitions(list(range(1, n + 1))):
        if dim is not None and n - len(partition) != dim:
            continue
        blocks = [tuple(sorted(b)) for b in partition]
        for arrangement in permutations(blocks):
            faces.append(OrderedPartition(n, arrangement))

    faces.sort(key=lambda f: f.blocks)
    return faces


@dataclass(frozen=True)
class LeveledTree:
    leaf_count: int
    level_of: Tuple[int, ...]
    """Level of every gap; level_of[g-1] is the level of the gap after leaf g."""

    def __post_init__(self) -> None:
        if self.leaf_count < 2 or len(self.level_of) != self.leaf_count - 1:
            raise InvalidTree(f"a tree with {self.leaf_count} leaves needs "
                              f"{self.leaf_count - 1} gap levels")
        used = set(self.level_of)
        if used != set(range(1, len(used) + 1)):
            raise InvalidTree(f"tree has an empty level: {self.level_of}")

    @property
    def levels(self) -> int:
        return max(self.level_of)

    def render(self) -> str:
        return "[" + " ".join(map(str, self.level_of)) + "]"


def partition_to_tree(p: OrderedPartition) -> LeveledTree:
    level_of = [0] * p.n
    for level, block in enumerate(p.blocks, start=1):
        for gap in block:
            level_of[gap - 1] = level
    return LeveledTree(p.n + 1, tuple(level_of))


def tree_to_partition(t: LeveledTree) -> OrderedPartition:
    blocks = [
        tuple(g for g, lvl in enumerate(t.level_of, start=1) if lvl == level)
        for level in range(1, t.levels + 1)
    ]
    if any(not b for b in blocks):
        raise InvalidTree(f"tree has an empty level: {t.level_of}")
    return OrderedPartition(t.leaf_count - 1, tuple(blocks))


def leaf_sequence(t: LeveledTree) -> LeafSequence:
    """Leaf counts of the corollas pruned off below the first level, left to right."""
    runs: List[int] = [1]
    for lvl in t.level_of:
        if lvl == 1:
            runs[-1] += 1
        else:
            runs.append(1)
    return tuple(runs)


def face_leaf_sequence(p: OrderedPartition) -> LeafSequence:
    return leaf_sequence(partition_to_tree(p))


def face_for_leaf_sequence(s: Sequence[int]) -> OrderedPartition:
    """e_s: the corolla for a one-term sequence, else the 2-level face whose
    first level makes up the corollas of s."""
    s = tuple(s)
    if not s or any(i < 1 for i in s):
        raise InvalidLeafSequence(f"leaf sequences are vectors of positive integers, got {s}")
    if all(i == 1 for i in s):
        raise InvalidLeafSequence(f"{s} is not a leaf sequence")

    if len(s) == 1:
        return OrderedPartition.top_cell(s[0] - 1)

    inner: List[int] = []
    outer: List[int] = []
    gap = 0
    for run_index, run in enumerate(s):
        for _ in range(run - 1):
            gap += 1
            inner.append(gap)
        if run_index != len(s) - 1:
            gap += 1
            outer.append(gap)
    return OrderedPartition(gap, (tuple(inner), tuple(outer)))


def orientation(p: OrderedPartition) -> int:
    """Sign of the permutation obtained by concatenating the blocks of the face."""
    return sign_of_permutation(tuple(i for b in p.blocks for i in b))


class FaceTensorSum:
    """Formal integer combination of pairs of faces, kept in insertion order."""

    def __init__(self, terms: Iterable[Tuple[OrderedPartition, OrderedPartition, int]] = ()) -> None:
        self.terms: Dict[Tuple[OrderedPartition, OrderedPartition], int] = {}
        for left, right, coef in terms:
            self.add(left, right, coef)

    def add(self, left: OrderedPartition, right: OrderedPartition, coef: int = 1) -> None:
        key = (left, right)
        value = self.terms.get(key, 0) + coef
        if value:
            self.terms[key] = value
        else:
            self.terms.pop(key, None)

    def __iter__(self) -> Iterator[Tuple[OrderedPartition, OrderedPartition, int]]:
        for (left, right), coef in self.terms.items():
            yield left, right, coef

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FaceTensorSum) and self.terms == other.terms

    def render(self, ascii: bool = True) -> str:
        if not self.terms:
            return "0"
        tensor = f" {TENSOR_ASCII if ascii else TENSOR} "
        parts: List[str] = []
        for left, right, coef in self:
            body = f"{left}{tensor}{right}"
            if coef == 1:
                parts.append(("+ " if parts else "") + body)
            elif coef == -1:
                parts.append(("- " if parts else "-") + body)
            elif coef > 0:
                parts.append(("+ " if parts else "") + f"{coef}*{body}")
            else:
                parts.append(("- " if parts else "-") + f"{-coef}*{body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render(ascii=False)

    def __repr__(self) -> str:
        return f"FaceTensorSum({self.render()!r})"


def _relabel(gaps: Dict[int, int]) -> Tuple[int, ...]:
    """Turns {old_gap: level} into a level tuple over the gaps sorted increasingly."""
    return tuple(gaps[g] for g in sorted(gaps))


def level_coproduct(p: OrderedPartition) -> FaceTensorSum:
    """Δ_ℓ: sum over the cuts between consecutive levels of e'_k ⊗ e''_k.

    e''_k keeps every leaf and collapses everything above level k into one root level;
    e'_k is what sits above the cut, its gaps relabeled onto an initial segment.
    """
    result = FaceTensorSum()
    tree = partition_to_tree(p)
    total = tree.levels

    for cut in range(1, total):
        lower = tuple(lvl if lvl <= cut else cut + 1 for lvl in tree.level_of)
        upper = _relabel({g: lvl - cut for g, lvl in enumerate(tree.level_of) if lvl > cut})

        e_upper = tree_to_partition(LeveledTree(len(upper) + 1, upper))
        e_lower = tree_to_partition(LeveledTree(tree.leaf_count, lower))
        result.add(e_upper, e_lower)

    return result
