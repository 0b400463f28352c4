# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

"""Cochains on permutahedra with coefficients in U, and their cup products."""

import logging
from abc import ABC, abstractmethod
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import (Callable, Dict, Iterator, List, Mapping, Optional, Set,
                    Tuple, Union)

from .const import CURATED_DIAGONAL, CURATED_DIAGONAL_WINDOW
from .err import DiagonalIncomplete, InvalidData, InvalidFace, NonConvergence
from .monomat import (MatrixMonomial, MonomialSum, cross_cech, cross_wedge,
                      upsilon, upsilon_op)
from .permuta import (FaceTensorSum, OrderedPartition, enumerate_faces,
                      level_coproduct, orientation)
from .prop_expr import Generator, parse_expression
from .util import load_json_array

CoefficientProduct = Callable[[MonomialSum, MonomialSum], MonomialSum]


class Cochain:
    """Finitely supported map from faces (of any P_n) to elements of U."""

    __slots__ = ("values",)

    def __init__(self, values: Optional[Mapping[OrderedPartition, MonomialSum]] = None) -> None:
        self.values: Dict[OrderedPartition, MonomialSum] = {
            face: value for face, value in (values or {}).items() if value
        }

    @classmethod
    def from_expressions(cls, mapping: Mapping[str, str],
                         registry: Mapping[str, Generator]) -> "Cochain":
        """Reads {face: expression} pairs with 1×1 values."""
        return cls({
            OrderedPartition.parse(face): MonomialSum.from_expression(
                parse_expression(text, registry))
            for face, text in mapping.items()
        })

    def __getitem__(self, face: OrderedPartition) -> MonomialSum:
        return self.values.get(face, MonomialSum())

    def __contains__(self, face: object) -> bool:
        return face in self.values

    def __iter__(self) -> Iterator[Tuple[OrderedPartition, MonomialSum]]:
        return iter(sorted(self.values.items(), key=lambda i: (i[0].n, i[0].blocks)))

    def __len__(self) -> int:
        return len(self.values)

    def __bool__(self) -> bool:
        return bool(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.values == other.values

    def faces(self) -> List[OrderedPartition]:
        return [face for face, _ in self]

    def polytopes(self) -> Set[int]:
        return {face.n for face in self.values}

    def dimensions_on(self, n: int) -> Set[int]:
        return {face.dimension for face in self.values if face.n == n}

    def __add__(self, other: "Cochain") -> "Cochain":
        values = dict(self.values)
        for face, value in other.values.items():
            values[face] = values[face] + value if face in values else value
        return Cochain(values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scale(-1)

    def scale(self, factor: Union[int, Fraction]) -> "Cochain":
        return Cochain({face: value.scale(factor) for face, value in self.values.items()})

    def map_values(self, f: Callable[[OrderedPartition, MonomialSum], MonomialSum]) -> "Cochain":
        return Cochain({face: f(face, value) for face, value in self.values.items()})

    def project(self, keep: Callable[[MatrixMonomial], bool]) -> "Cochain":
        return self.map_values(lambda _, value: value.filter(keep))

    def truncate(self, window: int) -> "Cochain":
        return self.map_values(lambda _, value: value.truncate(window))

    def evaluate(self) -> MonomialSum:
        """ξ(C_*P): the sum of all values, each signed by the orientation of its face."""
        total = MonomialSum()
        for face, value in self:
            total = total + value.scale(orientation(face))
        return total

    def dump(self, ascii: bool = True) -> Dict[str, str]:
        return {str(face): value.render(ascii) for face, value in self}

    def render(self, ascii: bool = False) -> str:
        if not self.values:
            return "0"
        return "\n".join(f"{face}: {value.render(ascii)}" for face, value in self)


class DiagonalProvider(ABC):
    """Partial cellular diagonal: returns None on faces it does not know."""

    name: str = "abstract"

    @abstractmethod
    def diagonal(self, face: OrderedPartition) -> Optional[FaceTensorSum]:
        raise NotImplementedError

    def require(self, face: OrderedPartition) -> FaceTensorSum:
        result = self.diagonal(face)
        if result is None:
            raise DiagonalIncomplete(str(face))
        return result


def _edge_endpoints(face: OrderedPartition) -> Tuple[OrderedPartition, OrderedPartition]:
    """The two vertices of an edge: its 2-element block split as a|b and as b|a."""
    for index, block in enumerate(face.blocks):
        if len(block) == 2:
            a, b = block
            before, after = face.blocks[:index], face.blocks[index + 1:]
            return (OrderedPartition(face.n, before + ((a,), (b,)) + after),
                    OrderedPartition(face.n, before + ((b,), (a,)) + after))
    raise InvalidFace(f"{face} is not an edge")


class ForcedDiagonal(DiagonalProvider):
    """The part of the diagonal forced by counitality: v⊗v on vertices and
    v₀⊗e + e⊗v₁ on every edge e from v₀ = ...|a|b|... to v₁ = ...|b|a|..."""

    name = "forced"

    def diagonal(self, face: OrderedPartition) -> Optional[FaceTensorSum]:
        if face.dimension == 0:
            return FaceTensorSum([(face, face, 1)])
        if face.dimension == 1:
            start, end = _edge_endpoints(face)
            return FaceTensorSum([(start, face, 1), (face, end, 1)])
        return None


class TableDiagonal(ForcedDiagonal):
    """Forced values plus a user-provided table for higher dimensional faces."""

    name = "table"

    def __init__(self, table: Optional[Mapping[OrderedPartition, FaceTensorSum]] = None) -> None:
        self.logger = logging.getLogger("Diagonal")
        self.table: Dict[OrderedPartition, FaceTensorSum] = dict(table or {})

    @classmethod
    def load(cls, path: Path) -> "TableDiagonal":
        """Reads [{"face": "123", "terms": [["1|2|3", "123", 1], ...]}, ...]."""
        self = cls()
        for row in load_json_array(path):
            try:
                face = OrderedPartition.parse(row["face"])
                terms = FaceTensorSum(
                    (OrderedPartition.parse(left), OrderedPartition.parse(right), int(coef))
                    for left, right, coef in row["terms"]
                )
            except (KeyError, TypeError, ValueError) as e:
                raise InvalidData(f"{path}: malformed diagonal entry {row!r}") from e
            self.add(face, terms)
        self.logger.info(f"Loaded diagonal values for {len(self.table)} faces from {path}")
        return self

    def add(self, face: OrderedPartition, terms: FaceTensorSum) -> None:
        for left, right, _ in terms:
            if left.n != face.n or right.n != face.n:
                raise InvalidData(f"diagonal of {face}: {left} ⊗ {right} leaves P_{face.n}")
            if left.dimension + right.dimension != face.dimension:
                raise InvalidData(f"diagonal of {face}: {left} ⊗ {right} has the wrong dimension")
        self.table[face] = terms

    def diagonal(self, face: OrderedPartition) -> Optional[FaceTensorSum]:
        forced = super().diagonal(face)
        return forced if forced is not None else self.table.get(face)


@lru_cache(maxsize=None)
def _curated_diagonal() -> TableDiagonal:
    return TableDiagonal.load(CURATED_DIAGONAL)


def default_diagonal(window: int) -> DiagonalProvider:
    """The forced diagonal, extended by the curated table of P_3 for windows of 4 and above."""
    if window >= CURATED_DIAGONAL_WINDOW:
        return _curated_diagonal()
    return ForcedDiagonal()


@lru_cache(maxsize=None)
def _faces(n: int) -> Tuple[OrderedPartition, ...]:
    return tuple(enumerate_faces(n))


@lru_cache(maxsize=None)
def _level_terms(face: OrderedPartition) -> Tuple[Tuple[OrderedPartition, OrderedPartition], ...]:
    return tuple((left, right) for left, right, _ in level_coproduct(face))


def cup(f: Cochain, g: Cochain, diagonal: DiagonalProvider, prod: CoefficientProduct) -> Cochain:
    """(f⌣g)(e) = Σ prod(f(e'), g(e'')) over Δ(e).

    Only faces whose dimension can be reached by the supports of f and g are
    evaluated; a missing diagonal on one of those raises DiagonalIncomplete.
    """
    values: Dict[OrderedPartition, MonomialSum] = {}
    for n in sorted(f.polytopes() & g.polytopes()):
        reachable = {a + b for a in f.dimensions_on(n) for b in g.dimensions_on(n)}
        for face in _faces(n):
            if face.dimension not in reachable:
                continue
            value = MonomialSum()
            for left, right, coef in diagonal.require(face):
                if left in f and right in g:
                    value = value + prod(f[left], g[right]).scale(coef)
            if value:
                values[face] = value
    return Cochain(values)


def cup_level(f: Cochain, g: Cochain, prod: CoefficientProduct = upsilon) -> Cochain:
    """(f⌣_ℓ g)(e) = Σ prod(f(e'_k), g(e''_k)) over the level coproduct of e."""
    values: Dict[OrderedPartition, MonomialSum] = {}
    for n in sorted(g.polytopes()):
        for face in _faces(n):
            value = MonomialSum()
            for left, right in _level_terms(face):
                if left in f and right in g:
                    value = value + prod(f[left], g[right])
            if value:
                values[face] = value
    return Cochain(values)


def wedge_level(phi: Cochain, phi_prime: Cochain) -> Cochain:
    """φ ∧_ℓ φ′ = φ ⌣_ℓ φ′"""
    return cup_level(phi, phi_prime, upsilon)


def cech_level(psi: Cochain, psi_prime: Cochain) -> Cochain:
    """ψ ∨_ℓ ψ′ = ψ′ ⌣_ℓ ψ, with the coefficient composite read root-side first."""
    return cup_level(psi_prime, psi, upsilon_op)


def wedge_cup(diagonal: DiagonalProvider) -> Callable[[Cochain, Cochain], Cochain]:
    return lambda f, g: cup(f, g, diagonal, cross_wedge)


def cech_cup(diagonal: DiagonalProvider) -> Callable[[Cochain, Cochain], Cochain]:
    return lambda f, g: cup(f, g, diagonal, cross_cech)


def power_series(f: Cochain, product: Callable[[Cochain, Cochain], Cochain],
                 window: int) -> Cochain:
    """f + f·f + (f·f)·f + ..., dropping every monomial outside the arity window.

    A level product adds a level to the faces it lands on, and faces of P_n have
    at most n levels; a diagonal cup adds a row or a column to every monomial.
    Either way the powers vanish after max(n, window) factors.
    """
    if window < 1:
        raise InvalidData(f"arity window must be positive, got {window}")

    bound = max(max(f.polytopes(), default=0), window)
    power = f.truncate(window)
    total = power
    factors = 1
    while power:
        power = product(power, f).truncate(window)
        factors += 1
        if power and factors > bound:
            raise NonConvergence(f"power {factors} of a cochain on P_{max(f.polytopes())} "
                                 f"does not vanish within window {window}")
        total = total + power
    return total
