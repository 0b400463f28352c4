# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

from typing import List

from hypothesis import strategies as st

from ainfinity.permuta import OrderedPartition


@st.composite
def ordered_partitions(draw: st.DrawFn, max_n: int = 6) -> OrderedPartition:
    n = draw(st.integers(1, max_n))
    order = draw(st.permutations(range(1, n + 1)))
    cuts = sorted(draw(st.sets(st.integers(1, n - 1)))) if n > 1 else []

    blocks: List[tuple] = []
    start = 0
    for cut in cuts + [n]:
        blocks.append(tuple(sorted(order[start:cut])))
        start = cut
    return OrderedPartition(n, tuple(blocks))


@st.composite
def leaf_sequences(draw: st.DrawFn, max_len: int = 4, max_entry: int = 4) -> tuple:
    seq = draw(st.lists(st.integers(1, max_entry), min_size=1, max_size=max_len))
    if all(i == 1 for i in seq):
        seq[draw(st.integers(0, len(seq) - 1))] = draw(st.integers(2, max_entry))
    return tuple(seq)
