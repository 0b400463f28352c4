# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

from itertools import product
from typing import Tuple

import pytest

from ainfinity.err import InvalidMonomial, NotBlockTransverse
from ainfinity.monomat import (BlockStructure, MatrixMonomial, MonomialSum,
                               arrow, btp_decompose, cross_cech, cross_wedge,
                               gamma, in_window, monomial_as_expression,
                               parse_monomial, sum_of, upsilon, upsilon_op)
from ainfinity.prop_expr import Generator, Term, normalize

REGISTRY = {g.name: g for g in (
    Generator("mu", 1, 2),
    Generator("Delta", 2, 1),
    Generator("nu", 1, 2, 1),
    Generator("h2", 2, 1),
    Generator("h4", 4, 1),
    Generator("k2", 2, 3),
    Generator("k4", 4, 3),
)}


def mono(text: str) -> MatrixMonomial:
    parsed = parse_monomial(text, REGISTRY)
    assert len(parsed) == 1
    return parsed.monomials()[0]


def msum(text: str) -> MonomialSum:
    return parse_monomial(text, REGISTRY)


def test_shape_and_arities():
    a = mono("[h2 k2; h4 k4]")
    assert a.shape == (2, 2)
    assert a.x == (1, 3)
    assert a.y == (2, 4)
    assert arrow(a) == ((4, 2), (2, 6))
    assert in_window(a, 6)
    assert not in_window(a, 5)


@pytest.mark.parametrize("text", ["[mu Delta; mu mu]", "[mu; Delta]", "[1 Delta]", "[]"])
def test_malformed_monomials(text):
    with pytest.raises(InvalidMonomial):
        msum(text)


@pytest.mark.parametrize("text", [
    "[mu mu; mu mu]",
    "[(mu Delta) 1]",
    "[mu; mu]",
    "(mu(x)mu)s{2,2}(Delta(x)Delta)",
])
def test_render(text):
    assert msum(text).render(ascii=True) == text


def test_parse_expands_sums_multilinearly():
    s = msum("[(mu(mu(x)1) - mu(1(x)mu)) mu]")
    assert len(s) == 2
    assert s == msum("[mu(mu(x)1) mu]") - msum("[mu(1(x)mu) mu]")


def test_cross_products():
    assert cross_wedge(msum("mu"), msum("mu")) == msum("[mu; mu]")
    assert not cross_wedge(msum("mu"), msum("Delta"))
    assert cross_cech(msum("Delta"), msum("Delta")) == msum("[Delta Delta]")
    assert not cross_cech(msum("Delta"), msum("mu"))
    assert cross_wedge(msum("[mu 1]"), msum("[mu 1]")) == msum("[mu 1; mu 1]")
    assert not cross_wedge(msum("[mu 1]"), msum("[Delta Delta]"))
    assert cross_wedge(msum("[mu 1]"), msum("[mu 1]").scale(0)) == MonomialSum()


def test_cross_products_are_bilinear():
    left = msum("mu") + msum("nu").scale(2)
    assert cross_wedge(left, msum("mu")) == msum("[mu; mu]") + msum("[nu; mu]").scale(2)


def test_block_transverse_pairs():
    assert btp_decompose(mono("mu"), mono("Delta")) is None
    assert btp_decompose(mono("Delta"), mono("mu")) == BlockStructure((1,), (1,))
    assert btp_decompose(mono("[mu; mu]"), mono("[Delta Delta]")) == BlockStructure((2,), (2,))
    with pytest.raises(NotBlockTransverse):
        gamma(mono("mu"), mono("Delta"))


def test_gamma_examples():
    assert gamma(mono("Delta"), mono("mu")) == msum("Delta mu")
    assert gamma(mono("mu"), mono("[mu mu]")) == msum("mu(mu(x)mu)")
    assert gamma(mono("[mu; mu]"), mono("[Delta Delta]")) == msum("(mu(x)mu)s{2,2}(Delta(x)Delta)")


def test_upsilon_vanishes_off_block_transverse_pairs():
    assert not upsilon(mono("mu"), mono("Delta"))
    assert upsilon_op(mono("mu"), mono("Delta")) == msum("Delta mu")


@pytest.mark.parametrize("a, b, c", [
    ("mu", "[mu 1]", "[mu 1 mu]"),
    ("nu", "[nu 1]", "[nu 1 nu]"),
    ("[nu; mu]", "[nu nu; mu mu]", "[Delta Delta Delta Delta]"),
])
def test_upsilon_is_associative(a, b, c):
    left = upsilon(upsilon(msum(a), msum(b)), msum(c))
    right = upsilon(msum(a), upsilon(msum(b), msum(c)))
    assert left
    assert left == right


def generator_entry(y: int, x: int) -> Term:
    if (y, x) == (1, 1):
        return Term(1)
    return Term(x, ((0, Generator(f"g{{{y},{x}}}", y, x)),))


def generator_monomial(x: Tuple[int, ...], y: Tuple[int, ...]) -> MatrixMonomial:
    return MatrixMonomial(tuple(tuple(generator_entry(yi, xj) for xj in x) for yi in y))


SIDES = [v for n in (1, 2) for v in product((1, 2, 3), repeat=n)]
GENERATOR_MONOMIALS = [generator_monomial(x, y) for x in SIDES for y in SIDES]


def composable(a: MatrixMonomial, b: MatrixMonomial) -> bool:
    return a.q == sum(b.y) and b.p == sum(a.x)


def test_upsilon_is_associative_on_all_small_generator_monomials():
    triples = 0
    for b in GENERATOR_MONOMIALS:
        before = [a for a in GENERATOR_MONOMIALS if composable(a, b)]
        after = [c for c in GENERATOR_MONOMIALS if composable(b, c)]
        for a in before:
            ab = upsilon(a, b)
            for c in after:
                left = upsilon(ab, c)
                right = upsilon(a, upsilon(b, c))
                assert left, (a.render(True), b.render(True), c.render(True))
                assert left == right, (a.render(True), b.render(True), c.render(True))
                triples += 1
    assert triples


def test_operator_of_a_column():
    e = monomial_as_expression(mono("[mu; mu]"))
    assert e.arity == (2, 4)
    assert normalize(e) == normalize(monomial_as_expression(mono("mu(x)mu")))


def test_sum_of():
    parts = [msum("mu"), msum("nu"), msum("mu").scale(-1)]
    assert sum_of(parts) == msum("nu")
    assert not sum_of([])
