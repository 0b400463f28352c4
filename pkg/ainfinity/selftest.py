# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

"""Replays the worked examples of the theory against the library."""

import logging
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional

from .ainfty import (CLASSICAL_INPUTS, check, circledcirc, extract_relation,
                     group_algebra_z2, perturb, structure_relations)
from .bider import fixed_point, is_stable, omega_from_generators
from .cochain import Cochain, cup_level
from .const import DIFFERENTIAL, Color
from .err import AInfinityError, InvalidData
from .monomat import (BlockStructure, MonomialSum, arrow, btp_decompose,
                      gamma, in_window, parse_monomial, tp_entry)
from .permuta import (FaceTensorSum, LeveledTree, OrderedPartition,
                      enumerate_faces, face_dimension, face_for_leaf_sequence,
                      face_leaf_sequence, level_coproduct, partition_to_tree)
from .prop_expr import Generator, PropExpression, normalize, parse_expression


class SelfTestFailure(AInfinityError, RuntimeError):
    pass


class CaseResult(NamedTuple):
    name: str
    passed: bool
    message: str = ""


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise SelfTestFailure(message)


def _face(text: str) -> OrderedPartition:
    return OrderedPartition.parse(text)


MU = Generator("mu", 1, 2)
DELTA = Generator("Delta", 2, 1)
THETA = Generator("theta", 2, 2, 1)
D = Generator(DIFFERENTIAL, 1, 1, -1, differential=True)
EXAMPLE_REGISTRY: Dict[str, Generator] = {g.name: g for g in (MU, DELTA, THETA, D)}


def _missing_monomials(haystack: MonomialSum, texts: Iterable[str],
                       registry: Dict[str, Generator]) -> List[str]:
    missing: List[str] = []
    for text in texts:
        for m, _ in parse_monomial(text, registry):
            if m not in haystack:
                missing.append(m.render(ascii=True))
    return missing


def _missing_terms(haystack: PropExpression, texts: Iterable[str],
                   registry: Dict[str, Generator]) -> List[str]:
    missing: List[str] = []
    for text in texts:
        for term, _ in normalize(parse_expression(text, registry)):
            if term not in haystack.terms:
                missing.append(term.render(ascii=True))
    return missing


# Cases

def case_faces() -> None:
    faces = enumerate_faces(3)
    _expect(len(faces) == 13, f"P_3 has 13 faces, got {len(faces)}")
    by_dim = [sum(1 for f in faces if f.dimension == k) for k in range(3)]
    _expect(by_dim == [6, 6, 1], f"P_3 face counts by dimension: {by_dim}")
    edges = {str(f) for f in enumerate_faces(3, 1)}
    _expect(edges == {"1|23", "23|1", "2|13", "13|2", "3|12", "12|3"},
            f"edges of the hexagon: {sorted(edges)}")
    _expect([str(f) for f in enumerate_faces(1)] == ["1"], "P_1 is a point")
    _expect([str(f) for f in enumerate_faces(4, 3)] == ["1234"], "P_4 has one top cell")


def case_dimensions() -> None:
    for text, expected in (("123", 2), ("3|2|1", 0), ("24|1|3", 1)):
        got = face_dimension(_face(text))
        _expect(got == expected, f"dim {text} = {got}, expected {expected}")


def case_trees() -> None:
    tree = partition_to_tree(_face("24|1|3"))
    _expect(tree == LeveledTree(5, (2, 1, 3, 1)), f"tree of 24|1|3 is {tree.render()}")
    _expect(tree.levels == 3, "tree of 24|1|3 has 3 levels")
    corolla = partition_to_tree(_face("12"))
    _expect(corolla.leaf_count == 3 and corolla.levels == 1, "12 is the 3-leaf corolla")

    for text, sequence in (("13|2", (2, 2)), ("1|23", (2, 1, 1)), ("2|13", (1, 2, 1))):
        got = face_leaf_sequence(_face(text))
        _expect(got == sequence, f"leaf sequence of {text} is {got}, expected {sequence}")
        back = face_for_leaf_sequence(sequence)
        _expect(back == _face(text), f"e_{sequence} is {back}, expected {text}")
    _expect(face_for_leaf_sequence((4,)) == _face("123"), "e_4 is the top cell of P_3")


def case_level_coproduct() -> None:
    got = level_coproduct(_face("24|1|3"))
    expected = FaceTensorSum([(_face("1|2"), _face("24|13"), 1),
                              (_face("1"), _face("24|1|3"), 1)])
    _expect(got == expected, f"Δ_ℓ(24|1|3) = {got.render()}")
    _expect(got.render() == "1|2 (x) 24|13 + 1 (x) 24|1|3", f"rendering {got.render()!r}")
    for n in range(1, 6):
        _expect(not level_coproduct(OrderedPartition.top_cell(n)), f"Δ_ℓ(e^{n - 1}) ≠ 0")
    _expect(level_coproduct(_face("1|2")) == FaceTensorSum([(_face("1"), _face("1|2"), 1)]),
            "Δ_ℓ(1|2) = 1 ⊗ 1|2")


def case_level_products() -> None:
    reg = dict(EXAMPLE_REGISTRY, nu=Generator("nu", 1, 2), m=Generator("m", 1, 3))
    value = {
        "2": "mu", "21": "[mu 1]", "12": "[1 mu]",
        "3": "m", "211": "[nu 1 1]", "121": "[1 nu 1]", "112": "[1 1 nu]",
        "31": "[m 1]", "22": "[mu nu]", "13": "[1 m]",
    }

    def at(sequence: str) -> MonomialSum:
        return parse_monomial(value[sequence], reg)

    def cochain(sequences: Iterable[str]) -> Cochain:
        return Cochain({face_for_leaf_sequence(tuple(int(c) for c in s)): at(s)
                        for s in sequences})

    phi = cochain(["2", "21", "12"])
    phibar = cochain(["3", "211", "121", "112", "31", "22", "13"])
    phi2 = cup_level(phi, phi)
    phibar2 = cup_level(phibar, phibar)
    phi_phibar = cup_level(phi, phibar)
    phi2_phibar = cup_level(phi2, phibar)

    # quadratic values on P_2, then the quadratic and cubic values on P_3
    table = [
        (phi2, "1|2", "mu(mu(x)1)"), (phi2, "2|1", "mu(1(x)mu)"), (phi2, "12", None),
        (phibar2, "1|23", "m(nu(x)1(x)1)"), (phibar2, "2|13", "m(1(x)nu(x)1)"),
        (phibar2, "3|12", "m(1(x)1(x)nu)"),
        (phi_phibar, "12|3", "mu(m(x)1)"), (phi_phibar, "13|2", "mu(mu(x)nu)"),
        (phi_phibar, "23|1", "mu(1(x)m)"),
        (phi2_phibar, "1|2|3", "mu(mu(x)1)(nu(x)1(x)1)"),
        (phi2_phibar, "1|3|2", "mu(1(x)mu)(nu(x)1(x)1)"),
        (phi2_phibar, "2|1|3", "mu(mu(x)1)(1(x)nu(x)1)"),
        (phi2_phibar, "2|3|1", "mu(1(x)mu)(1(x)nu(x)1)"),
        (phi2_phibar, "3|1|2", "mu(mu(x)1)(1(x)1(x)nu)"),
        (phi2_phibar, "3|2|1", "mu(1(x)mu)(1(x)1(x)nu)"),
        # the level above the cut has no value
        (phibar2, "12|3", None), (phibar2, "13|2", None), (phibar2, "23|1", None),
        (phi_phibar, "1|23", None), (phi_phibar, "2|13", None), (phi_phibar, "3|12", None),
    ]
    for product, face, text in table:
        expected = parse_monomial(text, reg) if text else MonomialSum()
        got = product[_face(face)]
        _expect(got == expected,
                f"value on {face}: got {got.render(True)}, expected {expected.render(True)}")


def _example_block_pair():
    def gen(name: str, out_arity: int, in_arity: int) -> Generator:
        return Generator(name, out_arity, in_arity, 0, differential=(out_arity, in_arity) == (1, 1))

    registry: Dict[str, Generator] = {}
    for y in (1, 5, 4, 3):
        for x in (2, 1):
            registry[f"t{{{y},{x}}}"] = gen(f"t{{{y},{x}}}", y, x)
    for u in (3, 1):
        for x in (1, 2, 3):
            registry[f"h{{{u},{x}}}"] = gen(f"h{{{u},{x}}}", u, x)

    a = parse_monomial("[t{1,2} t{1,1}; t{5,2} t{5,1}; t{4,2} t{4,1}; t{3,2} t{3,1}]", registry)
    b = parse_monomial("[h{3,1} h{3,2} h{3,3}; h{1,1} h{1,2} h{1,3}]", registry)
    return a.monomials()[0], b.monomials()[0], registry


def case_block_transverse() -> None:
    a, b, registry = _example_block_pair()
    structure = btp_decompose(a, b)
    _expect(structure == BlockStructure((3, 1), (2, 1)), f"block structure {structure}")
    _expect(arrow(b) == ((6, 2), (3, 4)), f"arrow of the 2×3 factor is {arrow(b)}")
    _expect(arrow(a) == ((3, 4), (2, 13)), f"arrow of the 4×2 factor is {arrow(a)}")

    product = gamma(a, b).monomials()
    _expect(len(product) == 1, "γ gives a single monomial")
    c = product[0]
    _expect(c.shape == (2, 2) and c.x == (3, 3) and c.y == (10, 3),
            f"γ lands in U_{c.x}^{c.y} with shape {c.shape}")
    _expect(arrow(c) == ((6, 2), (2, 13)), f"arrow of A·B is {arrow(c)}")

    def entry(column: str, row: str) -> PropExpression:
        return tp_entry([next(iter(parse_expression(t, registry)))[0] for t in column.split()],
                        [next(iter(parse_expression(t, registry)))[0] for t in row.split()])

    blocks = [
        [entry("t{1,2} t{5,2} t{4,2}", "h{3,1} h{3,2}"), entry("t{1,1} t{5,1} t{4,1}", "h{3,3}")],
        [entry("t{3,2}", "h{1,1} h{1,2}"), entry("t{3,1}", "h{1,3}")],
    ]
    for i in range(2):
        for j in range(2):
            terms = list(blocks[i][j])
            _expect(len(terms) == 1 and terms[0][0] == c.rows[i][j],
                    f"entry ({i + 1},{j + 1}) is {c.rows[i][j].render(True)}")


def _example_omega() -> MonomialSum:
    return omega_from_generators([D, MU, THETA, DELTA])


DIFFERENTIAL_TERMS = ["d", "[d 1]", "[1 d]", "[d;1]", "[1;d]"]
BIDERIVATIVE_TERMS = DIFFERENTIAL_TERMS + [
    "mu", "Delta", "theta", "mu(mu(x)1)", "mu(1(x)mu)", "(Delta(x)1)Delta", "(1(x)Delta)Delta",
    "[theta;theta]", "[theta;mu]", "[mu;theta]", "[mu;mu]",
    "[theta theta]", "[Delta theta]", "[theta Delta]", "[Delta Delta]",
]


def case_biderivative(window: int = 3) -> None:
    result = fixed_point(_example_omega(), window)
    expected = [t for t in BIDERIVATIVE_TERMS
                if all(in_window(m, window) for m, _ in parse_monomial(t, EXAMPLE_REGISTRY))]
    missing = _missing_monomials(result.d_omega, expected, EXAMPLE_REGISTRY)
    _expect(not missing, f"d_ω misses {missing}")
    _expect(is_stable(result), "Bd(d_ω) ≠ d_ω within the window")


STAR_PRODUCTS = [
    ("Delta", "mu"), ("[mu;mu]", "[Delta Delta]"),
    ("[d;1]", "theta"), ("[1;d]", "theta"), ("theta", "[d 1]"), ("theta", "[1 d]"),
    ("[mu;mu]", "[Delta theta]"), ("[mu;mu]", "[theta Delta]"),
    ("theta", "[1 mu]"), ("theta", "[mu 1]"),
    ("[theta;mu]", "[Delta Delta]"), ("[mu;theta]", "[Delta Delta]"),
    ("[Delta;1]", "theta"), ("[1;Delta]", "theta"),
]

LOW_RELATIONS = {
    (2, 2): ["(d(x)1)theta", "(1(x)d)theta", "theta(d(x)1)", "theta(1(x)d)",
             "Delta mu", "(mu(x)mu)s{2,2}(Delta(x)Delta)"],
    (2, 3): ["(mu(x)mu)s{2,2}(Delta(x)theta)", "(mu(x)mu)s{2,2}(theta(x)Delta)",
             "theta(mu(x)1)", "theta(1(x)mu)"],
    (3, 2): ["(mu(x)theta)s{2,2}(Delta(x)Delta)", "(theta(x)mu)s{2,2}(Delta(x)Delta)",
             "(Delta(x)1)theta", "(1(x)Delta)theta"],
}


def case_circledcirc(window: int = 3) -> None:
    star = circledcirc(_example_omega(), _example_omega(), window)
    for left, right in STAR_PRODUCTS:
        a = parse_monomial(left, EXAMPLE_REGISTRY).monomials()[0]
        b = parse_monomial(right, EXAMPLE_REGISTRY).monomials()[0]
        for m, _ in gamma(a, b):
            _expect(m in star, f"ω⊛ω misses {left}·{right} = {m.render(True)}")

    relations = structure_relations(_example_omega(), window)
    for bidegree, texts in LOW_RELATIONS.items():
        missing = _missing_terms(relations[bidegree].total(), texts, EXAMPLE_REGISTRY)
        _expect(not missing, f"relation {bidegree} misses {missing}")


ABSTRACT_RELATIONS = {
    (2, 2): ["w{2,1}w{1,2}", "(w{1,2}(x)w{1,2})s{2,2}(w{2,1}(x)w{2,1})"],
    (3, 2): ["w{3,1}w{1,2}", "(w{2,1}(x)1)w{2,2}", "(1(x)w{2,1})w{2,2}",
             "(w{1,2}(x)w{1,2}(x)w{1,2})s{3,2}(w{3,1}(x)(1(x)w{2,1})w{2,1})",
             "(w{1,2}(x)w{1,2}(x)w{1,2})s{3,2}((w{2,1}(x)1)w{2,1}(x)w{3,1})",
             "(w{2,2}(x)w{1,2})s{2,2}(w{2,1}(x)w{2,1})",
             "(w{1,2}(x)w{2,2})s{2,2}(w{2,1}(x)w{2,1})"],
    (2, 3): ["w{2,1}w{1,3}", "w{2,2}(1(x)w{1,2})", "w{2,2}(w{1,2}(x)1)",
             "(w{1,3}(x)w{1,2}(1(x)w{1,2}))s{2,3}(w{2,1}(x)w{2,1}(x)w{2,1})",
             "(w{1,2}(w{1,2}(x)1)(x)w{1,3})s{2,3}(w{2,1}(x)w{2,1}(x)w{2,1})",
             "(w{1,2}(x)w{1,2})s{2,2}(w{2,1}(x)w{2,2})",
             "(w{1,2}(x)w{1,2})s{2,2}(w{2,2}(x)w{2,1})"],
}


def case_abstract_relations() -> None:
    for (j, i), texts in ABSTRACT_RELATIONS.items():
        relation = extract_relation(j, i, max(i, j))
        registry = {g.name: g for g in relation.total().generators().values()}
        registry.setdefault(DIFFERENTIAL, D)
        missing = _missing_terms(relation.total(), texts, registry)
        _expect(not missing, f"relation ({j},{i}) misses {missing}")

    first = extract_relation(2, 2, 2)
    _expect(len(first.lhs) == 4 and len(first.rhs) == 2,
            f"(2,2) relation has {len(first.lhs)} + {len(first.rhs)} terms: {first.render(True)}")
    _expect(all(g.name == "w{2,2}" or g.differential
                for t, _ in first.lhs for g in t.generators()),
            "(2,2) differential side only involves d and w{2,2}")


def case_classical(window: int = 3, perturbations: int = 20) -> None:
    for name, build in CLASSICAL_INPUTS.items():
        report = check(build(), window)
        _expect(report.passed, f"{name} fails: {report.render()}")

    z2 = group_algebra_z2()
    for seed in range(perturbations):
        report = check(perturb(z2, "Delta", seed), window)
        _expect(not report.passed and report.bidegree == (2, 2),
                f"Δ perturbed with seed {seed} should fail at (2,2), got {report.render()}")


CASES: Dict[str, Callable[[], None]] = {
    "faces": case_faces,
    "dimensions": case_dimensions,
    "trees": case_trees,
    "level-coproduct": case_level_coproduct,
    "level-products": case_level_products,
    "block-transverse": case_block_transverse,
    "biderivative": case_biderivative,
    "circledcirc": case_circledcirc,
    "relations": case_abstract_relations,
    "classical": case_classical,
}


class SelfTest:
    def __init__(self, only: Optional[Iterable[str]] = None) -> None:
        self.logger = logging.getLogger("SelfTest")
        names = list(only) if only else list(CASES)
        unknown = [n for n in names if n not in CASES]
        if unknown:
            raise InvalidData(f"unknown self-test cases: {', '.join(unknown)}")
        self.names = names

    def run(self) -> List[CaseResult]:
        results: List[CaseResult] = []
        for name in self.names:
            self.logger.debug(f"{Color.DIM}Running {name}{Color.RESET}")
            try:
                CASES[name]()
            except AInfinityError as e:
                self.logger.error(f"{Color.RED}{name}{Color.RESET}: {e}")
                results.append(CaseResult(name, False, str(e)))
            else:
                results.append(CaseResult(name, True))

        failed = sum(1 for r in results if not r.passed)
        self.logger.info(f"{Color.BOLD}{len(results) - failed}{Color.NON_BOLD} cases passed, "
                         f"{Color.BOLD}{failed}{Color.NON_BOLD} failed")
        return results
