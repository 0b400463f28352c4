# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

import random

import pytest
from sympy import QQ
from sympy.polys.matrices.sdm import SDM

from ainfinity.ainfty import group_algebra_z2
from ainfinity.err import (ArityMismatch, InvalidData, MissingGenerator,
                           ShapeMismatch)
from ainfinity.prop_expr import (Generator, GeneratorRegistry,
                                 NumericInstance, PropExpression, compose,
                                 eval_expression, normalize, parse_expression,
                                 random_equality_check, random_instance,
                                 tensor)

MU = Generator("mu", 1, 2)
DELTA = Generator("Delta", 2, 1)
D = Generator("d", 1, 1, -1, differential=True)
REGISTRY = {g.name: g for g in (MU, DELTA, D)}


def parse(text: str) -> PropExpression:
    return parse_expression(text, REGISTRY)


def as_dod(matrix: SDM) -> dict:
    return {r: dict(cols) for r, cols in matrix.to_dod().items()}


@pytest.mark.parametrize("text", [
    "mu(mu(x)1)",
    "mu(1(x)mu)",
    "Delta mu",
    "(Delta(x)1)Delta",
    "(mu(x)mu)s{2,2}(Delta(x)Delta)",
    "2*mu(mu(x)1) - 1/2*mu(1(x)mu)",
])
def test_parse_renders_back(text):
    assert normalize(parse(text)).render(ascii=True) == text


def test_unicode_tensor_matches_ascii():
    assert parse("mu(mu⊗1)") == parse("mu(mu(x)1)")
    assert parse("mu(mu(x)1)").render() == "mu(mu⊗1)"


def test_arities():
    e = parse("(mu(x)mu)s{2,2}(Delta(x)Delta)")
    assert e.arity == (2, 2)
    assert parse("mu(mu(x)1)").arity == (1, 3)
    assert PropExpression.identity(3).arity == (3, 3)


@pytest.mark.parametrize("text", ["nu(mu(x)1)", "2 mu", "mu)", "mu +", "mu(x)", "3*"])
def test_parse_rejects_malformed_text(text):
    with pytest.raises(InvalidData):
        parse(text)


def test_arity_mismatches():
    with pytest.raises(ArityMismatch):
        parse("mu mu")
    with pytest.raises(ArityMismatch):
        compose(PropExpression.generator(MU), PropExpression.generator(MU))
    with pytest.raises(ArityMismatch):
        PropExpression.generator(MU) + PropExpression.generator(DELTA)


@pytest.mark.parametrize("args", [("f", 1, 1), ("1", 1, 2), ("g", 0, 2), ("", 2, 1)])
def test_invalid_generators(args):
    with pytest.raises(InvalidData):
        Generator(*args)


def test_registry_rejects_conflicting_declarations():
    reg = GeneratorRegistry()
    reg.add(MU)
    reg.add(MU)
    assert "mu" in reg
    with pytest.raises(InvalidData):
        reg.add(Generator("mu", 1, 3))
    assert reg.parse("mu") == PropExpression.generator(MU)


def test_interchange_sign_for_odd_maps():
    f = Generator("f", 1, 2, 1)
    g = Generator("g", 1, 2, 1)
    ef, eg = PropExpression.generator(f), PropExpression.generator(g)
    one, two = PropExpression.identity(1), PropExpression.identity(2)

    staggered = compose(tensor(one, eg), tensor(ef, two))
    assert normalize(staggered) == normalize(tensor(ef, eg)).scale(-1)


def test_interchange_without_sign_for_even_maps():
    ef, eg = PropExpression.generator(MU), PropExpression.generator(MU)
    one, two = PropExpression.identity(1), PropExpression.identity(2)

    staggered = compose(tensor(one, eg), tensor(ef, two))
    assert normalize(staggered) == normalize(tensor(ef, eg))


def test_square_of_the_tensor_differential_vanishes():
    assert not normalize(parse("(d(x)1)(1(x)d) + (1(x)d)(d(x)1)"))
    assert not normalize(parse("d(x)1 + 1(x)d") - parse("1(x)d + d(x)1"))


def test_normalize_is_idempotent():
    e = parse("(1(x)mu)(mu(x)1(x)1) - (mu(x)1)(1(x)1(x)mu) + (mu(x)mu)(1(x)Delta mu(x)1)")
    once = normalize(e)
    assert normalize(once) == once


def test_permutations_parse_and_render():
    assert parse("perm{2,1}").arity == (2, 2)
    assert parse("perm{2,1}").render() == "perm{2,1}"
    with pytest.raises(InvalidData):
        PropExpression.permutation([0, 0])


def test_permutation_matching_a_shuffle_normalizes_to_the_shuffle():
    assert normalize(parse("perm{1,3,2,4}")) == normalize(PropExpression.shuffle(2, 2))
    assert normalize(parse("(1(x)perm{2,1}(x)1)(Delta(x)Delta)")) == \
        normalize(parse("s{2,2}(Delta(x)Delta)"))


def test_swap_is_an_involution():
    assert normalize(parse("perm{2,1} perm{2,1}")) == PropExpression.identity(2)
    assert normalize(parse("mu perm{2,1}")) != normalize(parse("mu"))


def test_crossings_slide_below_generators():
    assert normalize(parse("perm{2,1}(mu(x)mu)")) == normalize(parse("(mu(x)mu)perm{3,4,1,2}"))
    assert normalize(parse("(Delta(x)Delta)perm{2,1}")) == \
        normalize(parse("perm{3,4,1,2}(Delta(x)Delta)"))


@pytest.mark.parametrize("text", [
    "(mu(x)mu)s{2,2}(Delta(x)Delta)",
    "(mu(x)mu(x)mu)s{2,3}(Delta(x)Delta(x)Delta)",
    "(1(x)mu(x)1)s{2,2}(Delta(x)Delta)",
    "perm{2,3,1}(mu(x)1(x)1)",
])
def test_normalize_is_idempotent_with_crossings(text):
    once = normalize(parse(text))
    assert normalize(once) == once


def graded_line() -> NumericInstance:
    """e0 in degree 0, e1 in degree 1 and d(e1) = e0."""
    inst = NumericInstance({0: 1, 1: 1})
    inst.set_matrix(D, SDM({0: {1: QQ(1)}}, (2, 2), QQ))
    return inst


def test_koszul_sign_of_moves():
    inst = graded_line()
    assert as_dod(eval_expression(parse("1(x)d"), inst)) == {0: {1: 1}, 2: {3: -1}}
    assert as_dod(eval_expression(parse("d(x)1"), inst)) == {0: {2: 1}, 1: {3: 1}}
    assert eval_expression(parse("(d(x)1)(1(x)d) + (1(x)d)(d(x)1)"), inst).is_zero_matrix()


def test_shuffle_signs():
    odd = NumericInstance({1: 1})
    even = NumericInstance({0: 1})
    assert as_dod(eval_expression(PropExpression.shuffle(2, 2), odd)) == {0: {0: -1}}
    assert as_dod(eval_expression(PropExpression.shuffle(2, 2), even)) == {0: {0: 1}}


def test_shuffle_permutes_middle_factors():
    inst = NumericInstance({0: 2})
    matrix = as_dod(eval_expression(PropExpression.shuffle(2, 2), inst))
    # e_a⊗e_b⊗e_c⊗e_d ↦ e_a⊗e_c⊗e_b⊗e_d
    for col in range(16):
        a, b, c, d = inst.index_to_tuple(col, 4)
        assert matrix[inst.tuple_to_index((a, c, b, d))] == {col: 1}


def test_identity_evaluates_to_identity():
    inst = NumericInstance({0: 2})
    assert as_dod(eval_expression(PropExpression.identity(3), inst)) == {i: {i: 1} for i in range(8)}


def test_group_algebra_is_associative_and_coassociative():
    inst = group_algebra_z2().instance()
    reg = inst.generators
    for text in ["mu(mu(x)1) - mu(1(x)mu)", "(Delta(x)1)Delta - (1(x)Delta)Delta",
                 "Delta mu - (mu(x)mu)s{2,2}(Delta(x)Delta)"]:
        assert eval_expression(parse_expression(text, reg), inst).is_zero_matrix(), text


def test_missing_generator():
    with pytest.raises(MissingGenerator):
        eval_expression(parse("mu"), NumericInstance({0: 1}))


def test_instance_validation():
    inst = NumericInstance({0: 1, 1: 1})
    with pytest.raises(ShapeMismatch):
        inst.set_matrix(MU, SDM({}, (2, 2), QQ))
    with pytest.raises(ShapeMismatch):
        # maps e1 to e0, which breaks degree 0
        inst.set_matrix(Generator("m", 1, 2), SDM({0: {1: QQ(1)}}, (2, 4), QQ))


def test_random_instances_are_differential():
    rng = random.Random(7)
    for _ in range(10):
        inst = random_instance([D, MU], rng, 2)
        assert eval_expression(parse("d d"), inst).is_zero_matrix()


def test_random_equality_check():
    verdict = random_equality_check(parse("mu(mu(x)1)"), parse("mu(1(x)mu)"))
    assert verdict.distinct
    assert verdict.witness is not None

    same = random_equality_check(parse("mu(mu(x)1)"), parse("mu(mu(x)1)"), trials=5)
    assert not same.distinct
    assert same.trials == 5
    assert "indistinguishable" in same.describe()

    with pytest.raises(ArityMismatch):
        random_equality_check(parse("mu"), parse("Delta"))
