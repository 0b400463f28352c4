# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

"""The ⊛ operation and A∞-bialgebra structure relations."""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from logging import getLogger
from pathlib import Path
from typing import (Any, Dict, Iterable, Iterator, List, Mapping, NamedTuple,
                    Optional, Tuple)

from sympy import QQ
from sympy.polys.matrices.sdm import SDM

from .bider import fixed_point, omega_from_generators
from .cochain import DiagonalProvider
from .const import (DEFAULT_MAX_DIM, DEFAULT_SEED, DEFAULT_TRIALS,
                    DIFFERENTIAL, PROGRESS_STEP, Color)
from .err import InvalidData, ShapeMismatch, WindowInsufficient
from .monomat import MatrixMonomial, MonomialSum, gamma, monomial_as_expression
from .prop_expr import (EqualityVerdict, Generator, NumericInstance,
                        PropExpression, Term, eval_expression, normalize,
                        random_instance)
from .util import fraction_to_str, load_json_document, parse_fraction

Bidegree = Tuple[int, int]


def _block_sign(q: int, p: int) -> int:
    """(-1)^{C(q,2)·C(p,2)}: the sign of transposing a q×p grid of blocks."""
    return -1 if (q * (q - 1) // 2) * (p * (p - 1) // 2) % 2 else 1


class StarPair(NamedTuple):
    coef: Fraction
    left: MatrixMonomial
    """A column: applied last."""
    right: MatrixMonomial
    """A row: applied first."""


def star_pairs(d_theta: MonomialSum, d_eta: MonomialSum, window: int) -> Iterator[StarPair]:
    """All transverse pairs (A, B) of d_θ × d_η whose composite lands in U within the window.

    Υ(A, B) has as many rows as B and as many columns as A, so only a column A
    against a row B can give a 1×1 monomial. Every other transverse pair is
    dropped here, since pr would discard its composite anyway.
    """
    logger = getLogger("Circledcirc")

    rows: Dict[Tuple[int, int], List[Tuple[MatrixMonomial, Fraction]]] = {}
    for b, coef in d_eta:
        if b.q == 1:
            rows.setdefault((b.y[0], b.p), []).append((b, coef))

    dropped = 0
    checked = 0
    for a, coef_a in d_theta:
        if a.p != 1:
            dropped += sum(1 for b, _ in d_eta if a.q == sum(b.y) and b.p == sum(a.x))
            continue
        for b, coef_b in rows.get((a.q, a.x[0]), []):
            if sum(b.x) > window or sum(a.y) > window:
                continue
            checked += 1
            if checked % PROGRESS_STEP == 0:
                logger.debug(f"{Color.DIM}Composed {checked} pairs{Color.RESET}")
            yield StarPair(coef_a * coef_b * _block_sign(a.q, b.p), a, b)

    if dropped:
        logger.debug(f"Projection to U dropped {dropped} block products of larger shape")


def circledcirc(theta: MonomialSum, eta: MonomialSum, window: int,
                diagonal: Optional[DiagonalProvider] = None) -> MonomialSum:
    """θ⊛η = pr Υ(d_θ × d_η), pr keeping the 1×1 monomials."""
    if not theta or not eta:
        return MonomialSum()
    d_theta = fixed_point(theta, window, diagonal).d_omega
    d_eta = d_theta if eta == theta else fixed_point(eta, window, diagonal).d_omega
    return compose_pairs(star_pairs(d_theta, d_eta, window))


def compose_pairs(pairs: Iterable[StarPair]) -> MonomialSum:
    terms: Dict[MatrixMonomial, Fraction] = {}
    for coef, a, b in pairs:
        for m, c in gamma(a, b):
            terms[m] = terms.get(m, Fraction(0)) + coef * c
    return MonomialSum(terms)


# Relations

def _has_differential(term: Term) -> bool:
    return any(g.differential for g in term.generators())


@dataclass
class StructureRelation:
    """d-part = rest, where the ⊛ component in bidegree (j, i) is d-part - rest."""
    bidegree: Bidegree
    lhs: PropExpression
    rhs: PropExpression
    pairs: List[StarPair] = field(default_factory=list, repr=False)

    def total(self) -> PropExpression:
        return self.lhs - self.rhs

    def render(self, ascii: bool = False) -> str:
        j, i = self.bidegree
        lhs = self.lhs.render(ascii) if self.lhs else "0"
        rhs = self.rhs.render(ascii) if self.rhs else "0"
        return f"({j},{i}): {lhs} = {rhs}"

    def as_json(self) -> Dict[str, Any]:
        return {
            "bidegree": list(self.bidegree),
            "lhs": [[fraction_to_str(c), t.render(ascii=True)] for t, c in self.lhs],
            "rhs": [[fraction_to_str(c), t.render(ascii=True)] for t, c in self.rhs],
        }


def abstract_generator(j: int, i: int) -> Generator:
    """ω^{j,i}: H^⊗i → H^⊗j of degree i + j - 3; ω^{1,1} is the differential d."""
    if (j, i) == (1, 1):
        return Generator(DIFFERENTIAL, 1, 1, -1, differential=True)
    return Generator(f"w{{{j},{i}}}", j, i, i + j - 3)


def abstract_omega(window: int) -> MonomialSum:
    return omega_from_generators(
        abstract_generator(j, i) for j in range(1, window + 1) for i in range(1, window + 1)
    )


def split_relations(star: MonomialSum, pairs: List[StarPair],
                    window: int) -> Dict[Bidegree, StructureRelation]:
    lhs: Dict[Bidegree, Dict[Term, Fraction]] = {}
    rhs: Dict[Bidegree, Dict[Term, Fraction]] = {}
    for m, coef in star:
        term = m.rows[0][0]
        key = (term.out_arity, term.in_arity)
        if _has_differential(term):
            lhs.setdefault(key, {})[term] = coef
        else:
            rhs.setdefault(key, {})[term] = -coef

    by_bidegree: Dict[Bidegree, List[StarPair]] = {}
    for pair in pairs:
        key = (sum(pair.left.y), sum(pair.right.x))
        by_bidegree.setdefault(key, []).append(pair)

    relations: Dict[Bidegree, StructureRelation] = {}
    for j in range(1, window + 1):
        for i in range(1, window + 1):
            relations[(j, i)] = StructureRelation(
                (j, i),
                normalize(PropExpression(j, i, lhs.get((j, i), {}))),
                normalize(PropExpression(j, i, rhs.get((j, i), {}))),
                by_bidegree.get((j, i), []),
            )
    return relations


def structure_relations(omega: MonomialSum, window: int,
                        diagonal: Optional[DiagonalProvider] = None
                        ) -> Dict[Bidegree, StructureRelation]:
    """ω⊛ω split into all bidegrees (j, i) with i, j ≤ window."""
    d_omega = fixed_point(omega, window, diagonal).d_omega
    pairs = list(star_pairs(d_omega, d_omega, window))
    return split_relations(compose_pairs(pairs), pairs, window)


def extract_relation(j: int, i: int, window: int, omega: Optional[MonomialSum] = None,
                     diagonal: Optional[DiagonalProvider] = None) -> StructureRelation:
    if i > window or j > window or i < 1 or j < 1:
        raise WindowInsufficient(f"window-insufficient: bidegree ({j},{i}) "
                                 f"does not fit in window {window}")

    # every factor of a composite landing in (j, i) already fits in max(i, j)
    effective = max(i, j, 2)
    if omega is None:
        omega = abstract_omega(effective)
    else:
        omega = omega.truncate(effective)
    return structure_relations(omega, effective, diagonal)[(j, i)]


# Numeric data

@dataclass
class Operation:
    generator: Generator
    matrix: SDM

    def as_json(self) -> Dict[str, Any]:
        return {
            "name": self.generator.name,
            "out": self.generator.out_arity,
            "in": self.generator.in_arity,
            "degree": self.generator.degree,
            "entries": [[r, c, fraction_to_str(Fraction(int(v.numerator), int(v.denominator)))]
                        for r, cs in sorted(self.matrix.items()) for c, v in sorted(cs.items())],
        }


@dataclass
class BialgebraInput:
    """H with exact matrices for the operations ω^{j,i} (degree i + j - 3)."""
    dims: Dict[int, int]
    operations: Dict[str, Operation]

    def instance(self) -> NumericInstance:
        inst = NumericInstance(dict(self.dims))
        for op in self.operations.values():
            inst.set_matrix(op.generator, op.matrix)
        return inst

    def omega(self) -> MonomialSum:
        return omega_from_generators(op.generator for op in self.operations.values())

    def max_arity(self) -> int:
        return max((max(op.generator.out_arity, op.generator.in_arity)
                    for op in self.operations.values()), default=1)

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "BialgebraInput":
        try:
            dims = {int(k): int(v) for k, v in obj["dims"].items()}
            raw_ops = list(obj["operations"])
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise InvalidData(f"bialgebra input needs 'dims' and 'operations': {e}") from e
        if any(v < 0 for v in dims.values()) or not sum(dims.values()):
            raise InvalidData("dims must be non-negative with a non-zero total")

        total = sum(dims.values())
        operations: Dict[str, Operation] = {}
        for raw in raw_ops:
            op = _operation_from_json(raw, total)
            if op.generator.name in operations:
                raise InvalidData(f"operation {op.generator.name!r} declared twice")
            operations[op.generator.name] = op

        self = cls(dims, operations)
        try:
            self.instance()
        except ShapeMismatch as e:
            raise InvalidData(str(e)) from e
        return self

    @classmethod
    def load(cls, path: Path) -> "BialgebraInput":
        return cls.from_json(load_json_document(path))

    def as_json(self) -> Dict[str, Any]:
        return {
            "dims": {str(k): v for k, v in sorted(self.dims.items())},
            "operations": [op.as_json() for op in self.operations.values()],
        }


def _operation_from_json(raw: Mapping[str, Any], dim: int) -> Operation:
    try:
        name = str(raw["name"])
        out_arity, in_arity = int(raw["out"]), int(raw["in"])
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidData(f"operation needs 'name', 'out' and 'in': {raw!r}") from e

    degree = int(raw.get("degree", in_arity + out_arity - 3))
    if degree != in_arity + out_arity - 3:
        raise InvalidData(f"operation {name}: degree must be in + out - 3 = "
                          f"{in_arity + out_arity - 3}, got {degree}")
    generator = Generator(name, out_arity, in_arity, degree,
                          differential=(out_arity, in_arity) == (1, 1))

    shape = (dim ** out_arity, dim ** in_arity)
    dod: Dict[int, Dict[int, Any]] = {}
    if "matrix" in raw:
        rows = raw["matrix"]
        if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
            raise InvalidData(f"operation {name}: expected a {shape[0]}×{shape[1]} matrix")
        for r, row in enumerate(rows):
            for c, value in enumerate(row):
                fraction = parse_fraction(value)
                if fraction:
                    dod.setdefault(r, {})[c] = QQ(fraction.numerator, fraction.denominator)
    else:
        for entry in raw.get("entries", []):
            try:
                r, c, value = entry
                r, c = int(r), int(c)
            except (TypeError, ValueError) as e:
                raise InvalidData(f"operation {name}: malformed entry {entry!r}") from e
            if not (0 <= r < shape[0] and 0 <= c < shape[1]):
                raise InvalidData(f"operation {name}: entry ({r}, {c}) outside {shape}")
            fraction = parse_fraction(value)
            if fraction:
                dod.setdefault(r, {})[c] = QQ(fraction.numerator, fraction.denominator)
    return Operation(generator, SDM(dod, shape, QQ))


def perturb(data: BialgebraInput, name: str, seed: int) -> BialgebraInput:
    """A copy of the input with one degree-compatible entry of an operation shifted
    by a random positive rational."""
    rng = random.Random(seed)
    inst = data.instance()
    op = data.operations[name]
    g = op.generator
    rows, cols = op.matrix.shape

    candidates = [
        (r, c) for r in range(rows) for c in range(cols)
        if inst.tuple_degree(inst.index_to_tuple(r, g.out_arity))
        - inst.tuple_degree(inst.index_to_tuple(c, g.in_arity)) == g.degree
    ]
    if not candidates:
        raise InvalidData(f"operation {name} has no entry compatible with its degree")
    r, c = rng.choice(candidates)
    shift = QQ(rng.randint(1, 5), rng.randint(1, 3))

    dod = op.matrix.to_dod()
    value = dod.get(r, {}).get(c, QQ(0)) + shift
    if value:
        dod.setdefault(r, {})[c] = value
    else:
        dod[r].pop(c)
        if not dod[r]:
            del dod[r]
    operations = dict(data.operations)
    operations[name] = Operation(g, SDM(dod, op.matrix.shape, QQ))
    return BialgebraInput(dict(data.dims), operations)


def monomial_to_operator(a: MatrixMonomial, inst: NumericInstance) -> SDM:
    """Matrix of the arrow operator (H^⊗|x|)^⊗q → (H^⊗p)^⊗|y| of a monomial."""
    return eval_expression(monomial_as_expression(a), inst)


def pairs_to_operator(pairs: Iterable[StarPair], inst: NumericInstance,
                      shape: Tuple[int, int]) -> SDM:
    """Σ c·op(A)∘op(B), evaluated blockwise through the operators of the factors."""
    total = SDM({}, shape, QQ)
    for coef, a, b in pairs:
        product = monomial_to_operator(a, inst).matmul(monomial_to_operator(b, inst))
        total = total.add(product.mul(QQ(coef.numerator, coef.denominator)))
    return total


def blockwise_check(relation: StructureRelation, trials: int = DEFAULT_TRIALS,
                    max_dim: int = DEFAULT_MAX_DIM, seed: int = DEFAULT_SEED) -> EqualityVerdict:
    """Compares the normal form of a relation with the blockwise evaluation of its pairs."""
    expression = relation.total()
    generators = {g for pair in relation.pairs
                  for m in (pair.left, pair.right) for t in m.entries() for g in t.generators()}
    rng = random.Random(seed)
    for trial in range(1, trials + 1):
        inst = random_instance(generators, rng, max_dim)
        shape = (inst.tensor_dim(expression.out_arity), inst.tensor_dim(expression.in_arity))
        symbolic = eval_expression(expression, inst)
        blockwise = pairs_to_operator(relation.pairs, inst, shape)
        if not symbolic.sub(blockwise).is_zero_matrix():
            return EqualityVerdict(True, trial, inst)
    return EqualityVerdict(False, trials)


# Checking

@dataclass
class CheckReport:
    passed: bool
    window: int
    checked: List[Bidegree]
    bidegree: Optional[Bidegree] = None
    witness: Optional[str] = None
    image: Optional[str] = None
    relation: Optional[StructureRelation] = None

    def render(self) -> str:
        if self.passed:
            listed = ", ".join(f"({j},{i})" for j, i in self.checked)
            return f"pass: ω⊛ω = 0 in bidegrees {listed} (window {self.window})"
        assert self.bidegree is not None and self.relation is not None
        j, i = self.bidegree
        return (f"fail: bidegree ({j},{i}) violated\n"
                f"  relation: {self.relation.render(ascii=True)}\n"
                f"  witness:  {self.witness}\n"
                f"  image:    {self.image}")

    def as_json(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "window": self.window,
            "checked": [list(b) for b in self.checked],
            "bidegree": list(self.bidegree) if self.bidegree else None,
            "witness": self.witness,
            "image": self.image,
            "relation": self.relation.as_json() if self.relation else None,
        }


def _render_vector(column: Mapping[int, Any], inst: NumericInstance, arity: int) -> str:
    parts: List[str] = []
    for row in sorted(column):
        value = column[row]
        scalar = fraction_to_str(Fraction(int(value.numerator), int(value.denominator)))
        parts.append(f"{scalar}*{inst.render_tensor(inst.index_to_tuple(row, arity), True)}")
    return " + ".join(parts)


def check(data: BialgebraInput, window: int,
          diagonal: Optional[DiagonalProvider] = None) -> CheckReport:
    """Evaluates every structure relation within the window on the given data."""
    logger = getLogger("Check")
    if window < 2:
        raise WindowInsufficient(f"window-insufficient: window {window} is below 2")
    if data.max_arity() > window:
        raise WindowInsufficient(f"window-insufficient: operations of arity {data.max_arity()} "
                                 f"do not fit in window {window}")

    inst = data.instance()
    omega = data.omega()
    if not omega:
        return CheckReport(True, window, [])

    relations = structure_relations(omega, window, diagonal)
    checked: List[Bidegree] = []
    for bidegree in sorted(relations):
        relation = relations[bidegree]
        total = relation.total()
        checked.append(bidegree)
        if not total:
            continue

        logger.debug(f"{Color.DIM}Checking bidegree {bidegree} "
                     f"({len(total)} terms){Color.RESET}")
        matrix = eval_expression(total, inst)
        if matrix.is_zero_matrix():
            continue

        columns = matrix.transpose()
        col = min(columns)
        witness = inst.render_tensor(inst.index_to_tuple(col, total.in_arity), ascii=True)
        image = _render_vector(columns[col], inst, total.out_arity)
        logger.info(f"{Color.RED}Relation in bidegree {bidegree} fails on {witness}{Color.RESET}")
        return CheckReport(False, window, checked, bidegree, witness, image, relation)

    logger.info(f"{Color.GREEN}All {len(checked)} relations hold{Color.RESET}")
    return CheckReport(True, window, checked)


# Classical bialgebras, all concentrated in degree 0 unless stated otherwise

def _ops(mu: List[List[Any]], delta: List[List[Any]]) -> List[Dict[str, Any]]:
    return [
        {"name": "mu", "out": 1, "in": 2, "entries": mu},
        {"name": "Delta", "out": 2, "in": 1, "entries": delta},
    ]


def group_algebra_z2() -> BialgebraInput:
    """ℚ[ℤ/2] on the basis 1, g with g·g = 1 and Δg = g⊗g."""
    mu = [[(a + b) % 2, 2 * a + b, "1"] for a in range(2) for b in range(2)]
    delta = [[3 * a, a, "1"] for a in range(2)]
    return BialgebraInput.from_json({"dims": {"0": 2}, "operations": _ops(mu, delta)})


def sweedler_algebra() -> BialgebraInput:
    """Sweedler's 4-dimensional Hopf algebra on the basis 1, g, x, gx."""
    # g² = 1, x² = 0, xg = -gx; Δg = g⊗g, Δx = x⊗1 + g⊗x
    table = {
        (0, 0): (0, "1"), (0, 1): (1, "1"), (0, 2): (2, "1"), (0, 3): (3, "1"),
        (1, 0): (1, "1"), (1, 1): (0, "1"), (1, 2): (3, "1"), (1, 3): (2, "1"),
        (2, 0): (2, "1"), (2, 1): (3, "-1"),
        (3, 0): (3, "1"), (3, 1): (2, "-1"),
    }
    mu = [[row, 4 * a + b, value] for (a, b), (row, value) in table.items()]
    delta = [[0, 0, "1"], [5, 1, "1"], [8, 2, "1"], [6, 2, "1"], [13, 3, "1"], [3, 3, "1"]]
    return BialgebraInput.from_json({"dims": {"0": 4}, "operations": _ops(mu, delta)})


def exterior_algebra() -> BialgebraInput:
    """Λ[x] with |x| = 1 and x primitive."""
    mu = [[0, 0, "1"], [1, 1, "1"], [1, 2, "1"]]
    delta = [[0, 0, "1"], [2, 1, "1"], [1, 1, "1"]]
    return BialgebraInput.from_json({"dims": {"0": 1, "1": 1}, "operations": _ops(mu, delta)})


CLASSICAL_INPUTS = {
    "z2": group_algebra_z2,
    "sweedler": sweedler_algebra,
    "exterior": exterior_algebra,
}


def generators_from_json(obj: Mapping[str, Any]) -> List[Generator]:
    """Generators of an ω declaration: {"generators": [{"name", "out", "in", "degree"}]}.
    Bialgebra inputs are accepted too; their operations declare the generators."""
    if not isinstance(obj, Mapping):
        raise InvalidData("an ω declaration must be a JSON object")
    if "operations" in obj and "generators" not in obj:
        return [op.generator for op in BialgebraInput.from_json(obj).operations.values()]

    generators: List[Generator] = []
    for raw in obj.get("generators", []):
        try:
            name = str(raw["name"])
            out_arity, in_arity = int(raw["out"]), int(raw["in"])
            degree = int(raw.get("degree", in_arity + out_arity - 3))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidData(f"generator needs 'name', 'out' and 'in': {raw!r}") from e
        generators.append(Generator(name, out_arity, in_arity, degree,
                                    differential=(out_arity, in_arity) == (1, 1)))
    if len({g.name for g in generators}) != len(generators):
        raise InvalidData("generator names must be unique")
    return generators


def load_omega(path: Path) -> MonomialSum:
    return omega_from_generators(generators_from_json(load_json_document(path)))
