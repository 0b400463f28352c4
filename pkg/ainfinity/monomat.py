# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

"""Matrix monomials A = [θ_ij] of U ⊂ TTU and their products.

A q×p monomial has column in-arities x ∈ ℕ^p and row out-arities y ∈ ℕ^q and
is pictured as an arrow from (|x|, q) to (p, |y|). Entries are canonical terms;
scalars live in MonomialSum.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import (Callable, Dict, Iterable, Iterator, List, Mapping, NamedTuple,
                    Optional, Sequence, Tuple, Union)

from .err import InvalidMonomial, NotBlockTransverse
from .prop_expr import (Generator, PropExpression, Term, compose, normalize,
                        parse_expression, tensor_all)
from .util import fraction_to_str

Point = Tuple[int, int]
Arrow = Tuple[Point, Point]


@dataclass(frozen=True)
class MatrixMonomial:
    rows: Tuple[Tuple[Term, ...], ...]

    def __post_init__(self) -> None:
        if not self.rows or not self.rows[0]:
            raise InvalidMonomial("a monomial needs at least one entry")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise InvalidMonomial("monomial rows have different lengths")
        for j in range(width):
            if len({r[j].in_arity for r in self.rows}) != 1:
                raise InvalidMonomial(f"column {j + 1} mixes input arities")
        for i, r in enumerate(self.rows):
            if len({t.out_arity for t in r}) != 1:
                raise InvalidMonomial(f"row {i + 1} mixes output arities")

    @classmethod
    def single(cls, term: Term) -> "MatrixMonomial":
        return cls(((term,),))

    @classmethod
    def identity_matrix(cls, q: int, p: int) -> "MatrixMonomial":
        return cls(tuple(tuple(Term(1) for _ in range(p)) for _ in range(q)))

    @property
    def q(self) -> int:
        return len(self.rows)

    @property
    def p(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.q, self.p

    @property
    def x(self) -> Tuple[int, ...]:
        return tuple(t.in_arity for t in self.rows[0])

    @property
    def y(self) -> Tuple[int, ...]:
        return tuple(r[0].out_arity for r in self.rows)

    @property
    def degree(self) -> int:
        return sum(t.degree for r in self.rows for t in r)

    def entries(self) -> Iterator[Term]:
        for r in self.rows:
            yield from r

    def column(self, j: int) -> Tuple[Term, ...]:
        return tuple(r[j] for r in self.rows)

    @property
    def sort_key(self) -> Tuple:
        return (arrow(self), self.shape, tuple(t.sort_key for t in self.entries()))

    def render(self, ascii: bool = False) -> str:
        def entry(t: Term) -> str:
            text = t.render(ascii)
            return f"({text})" if " " in text and not (self.q == self.p == 1) else text

        if self.shape == (1, 1):
            return entry(self.rows[0][0])
        return "[" + "; ".join(" ".join(entry(t) for t in r) for r in self.rows) + "]"

    def __str__(self) -> str:
        return self.render()


def arrow(a: MatrixMonomial) -> Arrow:
    return (sum(a.x), a.q), (a.p, sum(a.y))


def in_window(a: MatrixMonomial, window: int) -> bool:
    return sum(a.x) <= window and sum(a.y) <= window


class MonomialSum:
    """Formal rational combination of matrix monomials of mixed shapes."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[MatrixMonomial, Fraction]] = None) -> None:
        self.terms: Dict[MatrixMonomial, Fraction] = {
            m: Fraction(c) for m, c in (terms or {}).items() if c
        }

    @classmethod
    def of(cls, m: MatrixMonomial, coef: Union[int, Fraction] = 1) -> "MonomialSum":
        return cls({m: Fraction(coef)})

    @classmethod
    def from_expression(cls, e: PropExpression) -> "MonomialSum":
        """1×1 monomials of a normalized PROP expression."""
        return cls({MatrixMonomial.single(t): c for t, c in normalize(e)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[PropExpression]]) -> "MonomialSum":
        """Expands a matrix of PROP expressions multilinearly into monomials."""
        expanded: List[Tuple[Fraction, List[Term]]] = [(Fraction(1), [])]
        width = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != width:
                raise InvalidMonomial("monomial rows have different lengths")
            for e in r:
                entry_terms = list(normalize(e))
                expanded = [(c * ce, ts + [t]) for c, ts in expanded for t, ce in entry_terms]
        result = cls()
        for coef, flat in expanded:
            m = MatrixMonomial(tuple(tuple(flat[i * width:(i + 1) * width])
                                     for i in range(len(rows))))
            result = result + cls.of(m, coef)
        return result

    def __iter__(self) -> Iterator[Tuple[MatrixMonomial, Fraction]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __contains__(self, m: object) -> bool:
        return m in self.terms

    def coefficient(self, m: MatrixMonomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def monomials(self) -> List[MatrixMonomial]:
        return sorted(self.terms, key=lambda m: m.sort_key)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonomialSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "MonomialSum") -> "MonomialSum":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return MonomialSum(terms)

    def __neg__(self) -> "MonomialSum":
        return self.scale(-1)

    def __sub__(self, other: "MonomialSum") -> "MonomialSum":
        return self + (-other)

    def scale(self, factor: Union[int, Fraction]) -> "MonomialSum":
        return MonomialSum({m: c * factor for m, c in self.terms.items()})

    def filter(self, keep: Callable[[MatrixMonomial], bool]) -> "MonomialSum":
        return MonomialSum({m: c for m, c in self.terms.items() if keep(m)})

    def truncate(self, window: int) -> "MonomialSum":
        return self.filter(lambda m: in_window(m, window))

    def render(self, ascii: bool = False) -> str:
        if not self.terms:
            return "0"
        parts: List[str] = []
        for m in self.monomials():
            coef = self.terms[m]
            body = m.render(ascii)
            if abs(coef) != 1:
                body = f"{fraction_to_str(abs(coef))}*{body}"
            if coef < 0:
                parts.append(("- " if parts else "-") + body)
            else:
                parts.append(("+ " if parts else "") + body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"MonomialSum({self.render(ascii=True)!r})"


MonomialLike = Union[MatrixMonomial, MonomialSum]


def _as_sum(a: MonomialLike) -> MonomialSum:
    return MonomialSum.of(a) if isinstance(a, MatrixMonomial) else a


def _bilinear(a: MonomialLike, b: MonomialLike,
              product: Callable[[MatrixMonomial, MatrixMonomial], MonomialSum]) -> MonomialSum:
    terms: Dict[MatrixMonomial, Fraction] = {}
    for ma, ca in _as_sum(a):
        for mb, cb in _as_sum(b):
            for m, c in product(ma, mb):
                terms[m] = terms.get(m, Fraction(0)) + ca * cb * c
    return MonomialSum(terms)


def _stack(a: MatrixMonomial, b: MatrixMonomial) -> MonomialSum:
    if a.x != b.x:
        return MonomialSum()
    return MonomialSum.of(MatrixMonomial(a.rows + b.rows))


def _side_by_side(a: MatrixMonomial, b: MatrixMonomial) -> MonomialSum:
    if a.y != b.y:
        return MonomialSum()
    return MonomialSum.of(MatrixMonomial(tuple(ra + rb for ra, rb in zip(a.rows, b.rows))))


def cross_wedge(a: MonomialLike, b: MonomialLike) -> MonomialSum:
    """[A; B] when the column arities agree, 0 otherwise."""
    return _bilinear(a, b, _stack)


def cross_cech(a: MonomialLike, b: MonomialLike) -> MonomialSum:
    """[A B] when the row arities agree, 0 otherwise."""
    return _bilinear(a, b, _side_by_side)


class BlockStructure(NamedTuple):
    row_heights: Tuple[int, ...]
    """Heights of the row blocks of the left factor (one per row of the right factor)."""

    col_widths: Tuple[int, ...]
    """Widths of the column blocks of the right factor (one per column of the left factor)."""

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.row_heights), len(self.col_widths)


def btp_decompose(a: MatrixMonomial, b: MatrixMonomial) -> Optional[BlockStructure]:
    """Block structure of A⊗B when it is a block transverse pair, None otherwise.

    A⊗B with A ∈ U_v^y and B ∈ U_x^u is a BTP iff y has |u| entries and x has |v|
    entries, i.e. A starts where B ends.
    """
    if a.q != sum(b.y) or b.p != sum(a.x):
        return None
    return BlockStructure(b.y, a.x)


def tp_entry(column: Sequence[Term], row: Sequence[Term]) -> PropExpression:
    """(a_1⊗...⊗a_q) σ_{q,p} (b_1⊗...⊗b_p) for a column of q and a row of p entries."""
    q, p = len(column), len(row)
    top = tensor_all(PropExpression.from_term(t) for t in column)
    bottom = tensor_all(PropExpression.from_term(t) for t in row)
    return normalize(compose(top, compose(PropExpression.shuffle(q, p), bottom)))


def _blocks(sizes: Sequence[int]) -> List[range]:
    result: List[range] = []
    start = 0
    for size in sizes:
        result.append(range(start, start + size))
        start += size
    return result


@lru_cache(maxsize=1 << 16)
def gamma(a: MatrixMonomial, b: MatrixMonomial) -> MonomialSum:
    """Blockwise composite of a BTP; the result has one monomial, signed by normalization."""
    structure = btp_decompose(a, b)
    if structure is None:
        raise NotBlockTransverse(f"{a.render(True)} (x) {b.render(True)} is not a BTP: "
                                 f"arrow {arrow(a)} does not start at the end of {arrow(b)}")

    row_blocks = _blocks(structure.row_heights)
    col_blocks = _blocks(structure.col_widths)

    entries: List[List[PropExpression]] = []
    for i, rows_of_a in enumerate(row_blocks):
        entries.append([])
        for ell, cols_of_b in enumerate(col_blocks):
            column = [a.rows[k][ell] for k in rows_of_a]
            row = [b.rows[i][k] for k in cols_of_b]
            entries[-1].append(tp_entry(column, row))

    return MonomialSum.from_rows(entries)


def upsilon(a: MonomialLike, b: MonomialLike) -> MonomialSum:
    """γ on block transverse pairs, 0 elsewhere; bilinear."""
    def product(ma: MatrixMonomial, mb: MatrixMonomial) -> MonomialSum:
        return gamma(ma, mb) if btp_decompose(ma, mb) is not None else MonomialSum()
    return _bilinear(a, b, product)


def upsilon_op(a: MonomialLike, b: MonomialLike) -> MonomialSum:
    """Υ with the factors swapped."""
    return upsilon(b, a)


def monomial_as_expression(a: MatrixMonomial) -> PropExpression:
    """⊗_i σ_{y_i,p}(a_i1⊗...⊗a_ip): the operator (H^⊗|x|)^⊗q → (H^⊗p)^⊗|y| of A."""
    rows: List[PropExpression] = []
    for r in a.rows:
        row = tensor_all(PropExpression.from_term(t) for t in r)
        rows.append(compose(PropExpression.shuffle(r[0].out_arity, a.p), row))
    return tensor_all(rows)


def sum_of(items: Iterable[MonomialSum]) -> MonomialSum:
    result = MonomialSum()
    for item in items:
        result = result + item
    return result


def _split_top_level(text: str, separator: str) -> List[str]:
    parts: List[str] = []
    depth = 0
    current: List[str] = []
    for char in text:
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
        if depth == 0 and (char == separator or (separator == " " and char.isspace())):
            parts.append("".join(current))
            current = []
        else:
            current.append(char)
    parts.append("".join(current))
    return [p.strip() for p in parts if p.strip()]


def parse_monomial(text: str, registry: Mapping[str, Generator]) -> MonomialSum:
    """Reads the rendering of a matrix: "[mu 1; 1 mu]", or a bare expression for 1×1."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        return MonomialSum.from_expression(parse_expression(text, registry))

    rows = [[parse_expression(entry, registry) for entry in _split_top_level(row, " ")]
            for row in _split_top_level(text[1:-1], ";")]
    if not rows or not rows[0]:
        raise InvalidMonomial(f"empty matrix {text!r}")
    return MonomialSum.from_rows(rows)
