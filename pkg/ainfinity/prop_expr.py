# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

"""Symbolic elements of the universal PROP End(TH).

A term is stored as its input arity plus a sequence of moves ``(offset, block)``
in application order: the block eats ``block.in_arity`` strands starting at
``offset`` and puts back ``block.out_arity`` strands. A move of a block of
degree |b| acting on a_1⊗...⊗a_n picks up (-1)^{|b|(|a_1|+...+|a_offset|)}.

By convention f⊗g = (f⊗1)(1⊗g), so tensoring never introduces a sign.
"""

import random
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import (Any, Dict, Iterable, Iterator, List, Mapping, NamedTuple,
                    Optional, Sequence, Tuple, Union)

from sympy import QQ
from sympy.polys.matrices.sdm import SDM

from .const import (DEFAULT_MAX_DIM, DEFAULT_SEED, DEFAULT_TRIALS, TENSOR,
                    TENSOR_ASCII)
from .err import (ArityMismatch, InvalidData, MissingGenerator,
                  ShapeMismatch)
from .util import fraction_to_str, sign_of_permutation


@dataclass(frozen=True, order=True)
class Generator:
    name: str
    out_arity: int
    in_arity: int
    degree: int = 0
    differential: bool = False

    def __post_init__(self) -> None:
        if self.out_arity < 1 or self.in_arity < 1:
            raise InvalidData(f"generator {self.name}: arities must be positive")
        if (self.out_arity, self.in_arity) == (1, 1) and not self.differential:
            raise InvalidData(f"generator {self.name}: (1,1) generators must be flagged "
                              "as the differential")
        if not self.name or self.name == "1" or self.name == "Id":
            raise InvalidData(f"invalid generator name {self.name!r}")

    @property
    def sort_key(self) -> Tuple:
        return (0, self.name, self.out_arity, self.in_arity, self.degree)

    def render(self, ascii: bool = False) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Shuffle:
    """σ_{s,t}: (H^⊗s)^⊗t → (H^⊗t)^⊗s"""
    s: int
    t: int

    @property
    def in_arity(self) -> int:
        return self.s * self.t

    @property
    def out_arity(self) -> int:
        return self.s * self.t

    @property
    def degree(self) -> int:
        return 0

    @property
    def is_identity(self) -> bool:
        return self.s == 1 or self.t == 1

    @property
    def sort_key(self) -> Tuple:
        return (1, "s", self.s, self.t, 0)

    def render(self, ascii: bool = False) -> str:
        return f"s{{{self.s},{self.t}}}"

    def permutation(self) -> Tuple[int, ...]:
        """Output position i*t+j takes the input at position j*s+i."""
        return tuple(j * self.s + i for i in range(self.s) for j in range(self.t))


@dataclass(frozen=True, order=True)
class Permutation:
    """Strand permutation outside the σ family: output k takes input images[k].

    Only appears in normal forms whose crossings no tensor of shuffles can express.
    """
    images: Tuple[int, ...]

    @property
    def in_arity(self) -> int:
        return len(self.images)

    @property
    def out_arity(self) -> int:
        return len(self.images)

    @property
    def degree(self) -> int:
        return 0

    @property
    def is_identity(self) -> bool:
        return self.images == tuple(range(len(self.images)))

    @property
    def sort_key(self) -> Tuple:
        return (1, "perm", len(self.images), 0, self.images)

    def render(self, ascii: bool = False) -> str:
        return "perm{" + ",".join(str(i + 1) for i in self.images) + "}"

    def permutation(self) -> Tuple[int, ...]:
        return self.images


Block = Union[Generator, Shuffle, Permutation]
Move = Tuple[int, Block]
# An element of sympy's QQ domain
Entry = Any


@dataclass(frozen=True)
class Term:
    in_arity: int
    moves: Tuple[Move, ...] = ()

    @property
    def out_arity(self) -> int:
        arity = self.in_arity
        for _, block in self.moves:
            arity += block.out_arity - block.in_arity
        return arity

    @property
    def degree(self) -> int:
        return sum(block.degree for _, block in self.moves)

    @property
    def sort_key(self) -> Tuple:
        return (len(self.moves), self.in_arity,
                tuple((b.sort_key, o) for o, b in self.moves))

    def generators(self) -> Iterator[Generator]:
        for _, block in self.moves:
            if isinstance(block, Generator):
                yield block

    def depths(self) -> List[int]:
        """Longest path from the inputs to every move."""
        levels = [0] * self.in_arity
        result: List[int] = []
        for offset, block in self.moves:
            depth = max(levels[offset:offset + block.in_arity], default=0) + 1
            levels[offset:offset + block.in_arity] = [depth] * block.out_arity
            result.append(depth)
        return result

    def layers(self) -> List[List[Move]]:
        """Groups consecutive moves of equal depth; meaningful on normalized terms."""
        result: List[List[Move]] = []
        last = None
        for move, depth in zip(self.moves, self.depths()):
            if depth != last:
                result.append([])
                last = depth
            result[-1].append(move)
        return result

    def render(self, ascii: bool = False) -> str:
        tensor = TENSOR_ASCII if ascii else TENSOR
        if not self.moves:
            return tensor.join(["1"] * self.in_arity)

        arity = self.in_arity
        rendered_layers: List[Tuple[str, bool]] = []
        for layer in self.layers():
            tokens: List[str] = []
            position = 0
            out_arity = arity
            for offset, block in sorted(layer, key=lambda m: m[0]):
                tokens.extend(["1"] * (offset - position))
                tokens.append(block.render(ascii))
                position = offset + block.in_arity
                out_arity += block.out_arity - block.in_arity
            tokens.extend(["1"] * (arity - position))
            arity = out_arity
            rendered_layers.append((tensor.join(tokens), len(tokens) > 1))

        text = ""
        for body, multi in reversed(rendered_layers):
            if multi:
                text += f"({body})"
            else:
                text += (" " if text and not text.endswith(")") else "") + body
        return text


def _shift(moves: Iterable[Move], by: int) -> Tuple[Move, ...]:
    return tuple((o + by, b) for o, b in moves)


def _independent(first: Move, second: Move) -> bool:
    o1, b1 = first
    o2, b2 = second
    return o2 + b2.in_arity <= o1 or o2 >= o1 + b1.out_arity


def _swap(first: Move, second: Move) -> Tuple[Move, Move]:
    """Reorders two independent consecutive moves, keeping the composite unchanged."""
    o1, b1 = first
    o2, b2 = second
    if o2 + b2.in_arity <= o1:
        return (o2, b2), (o1 + b2.out_arity - b2.in_arity, b1)
    return (o2 - b1.out_arity + b1.in_arity, b2), (o1, b1)


# A wire is (-1, i) for the i-th input of a term, (node, port) for a generator output
Wire = Tuple[int, int]
# A move tagged with the diagram node it places, -1 for permutations
TaggedMove = Tuple[int, Block, int]


class Diagram(NamedTuple):
    """Wiring of a term: generators as nodes, permutations dissolved into the wires."""
    in_arity: int
    blocks: Tuple[Generator, ...]
    sources: Tuple[Tuple[Wire, ...], ...]
    outputs: Tuple[Wire, ...]

    def consumers(self) -> Dict[Wire, int]:
        return {w: node for node, wires in enumerate(self.sources) for w in wires}


def diagram_of(term: Term) -> Diagram:
    """Traces the wires of a term; nodes are numbered in application order."""
    strands: List[Wire] = [(-1, i) for i in range(term.in_arity)]
    blocks: List[Generator] = []
    sources: List[Tuple[Wire, ...]] = []
    for offset, block in term.moves:
        window = strands[offset:offset + block.in_arity]
        if isinstance(block, Generator):
            node = len(blocks)
            blocks.append(block)
            sources.append(tuple(window))
            strands[offset:offset + block.in_arity] = [(node, k) for k in range(block.out_arity)]
        else:
            strands[offset:offset + block.in_arity] = [window[i] for i in block.permutation()]
    return Diagram(term.in_arity, tuple(blocks), tuple(sources), tuple(strands))


def canonical_labels(d: Diagram) -> List[int]:
    """Breadth-first numbering of the nodes, starting from the ordered inputs.

    Every port is distinguishable and every node is joined to an input, so two
    terms share a labelled diagram iff they draw the same string diagram.
    """
    consumers = d.consumers()
    label: Dict[int, int] = {}
    queue: deque = deque()

    def visit(node: Optional[int]) -> None:
        if node is not None and node >= 0 and node not in label:
            label[node] = len(label)
            queue.append(node)

    for i in range(d.in_arity):
        visit(consumers.get((-1, i)))
    for source, _ in d.outputs:
        visit(source)

    while queue:
        node = queue.popleft()
        for source, _ in d.sources[node]:
            visit(source)
        for port in range(d.blocks[node].out_arity):
            visit(consumers.get((node, port)))
    return [label[n] for n in range(len(d.blocks))]


def relabel(d: Diagram, labels: Sequence[int]) -> Diagram:
    def wire(w: Wire) -> Wire:
        return w if w[0] < 0 else (labels[w[0]], w[1])

    order = sorted(range(len(d.blocks)), key=lambda n: labels[n])
    return Diagram(d.in_arity,
                   tuple(d.blocks[n] for n in order),
                   tuple(tuple(wire(w) for w in d.sources[n]) for n in order),
                   tuple(wire(w) for w in d.outputs))


def _permutation_block(images: Tuple[int, ...]) -> Optional[Block]:
    if images == tuple(range(len(images))):
        return None
    for s in range(2, len(images) // 2 + 1):
        if len(images) % s == 0 and len(images) // s >= 2:
            shuffle = Shuffle(s, len(images) // s)
            if shuffle.permutation() == images:
                return shuffle
    return Permutation(images)


def permutation_moves(images: Sequence[int]) -> List[Tuple[int, Block]]:
    """Writes a strand permutation as a tensor of shuffles, falling back to
    general permutation blocks on the pieces no shuffle matches."""
    n = len(images)
    cuts = [0] + [c for c in range(1, n) if max(images[:c]) == c - 1] + [n]

    # cheapest split of [0, cuts[j]) into closed pieces
    best: List[Tuple[int, List[Tuple[int, Block]]]] = [(0, [])]
    for j in range(1, len(cuts)):
        choice: Optional[Tuple[int, List[Tuple[int, Block]]]] = None
        for i in range(j):
            a, b = cuts[i], cuts[j]
            block = _permutation_block(tuple(images[k] - a for k in range(a, b)))
            if block is None:
                cost, moves = 0, []
            else:
                cost = 1 if isinstance(block, Shuffle) else 1000 + len(block.images)
                moves = [(a, block)]
            total = best[i][0] + cost
            if choice is None or total < choice[0]:
                choice = (total, best[i][1] + moves)
        assert choice is not None
        best.append(choice)
    return best[-1][1]


def _emit(d: Diagram) -> List[TaggedMove]:
    """Rebuilds a term from a labelled diagram, peeling generators off the outputs.

    Generators are removed while their outputs sit next to each other at the top;
    when none does, one permutation gathers the outputs of every generator that
    is ready. Crossings therefore end up as close to the inputs as possible.
    """
    upper: List[Wire] = list(d.outputs)
    remaining = set(range(len(d.blocks)))
    top_down: List[TaggedMove] = []

    while remaining:
        peeled = True
        while peeled:
            peeled = False
            for pos, (node, port) in enumerate(upper):
                if node < 0 or port != 0:
                    continue
                outputs = [(node, k) for k in range(d.blocks[node].out_arity)]
                if upper[pos:pos + len(outputs)] == outputs:
                    upper[pos:pos + len(outputs)] = list(d.sources[node])
                    top_down.append((pos, d.blocks[node], node))
                    remaining.discard(node)
                    peeled = True
                    break
        if not remaining:
            break

        position = {w: i for i, w in enumerate(upper)}
        items: List[Tuple[int, List[Wire]]] = []
        gathered = set()
        for node in sorted(remaining):
            outputs = [(node, k) for k in range(d.blocks[node].out_arity)]
            if all(w in position for w in outputs):
                items.append((position[outputs[0]], outputs))
                gathered.update(outputs)
        items.extend((position[w], [w]) for w in upper if w not in gathered)
        items.sort(key=lambda item: item[0])

        lower = [w for _, wires in items for w in wires]
        where = {w: i for i, w in enumerate(lower)}
        top_down.extend((o, b, -1) for o, b in permutation_moves([where[w] for w in upper]))
        upper = lower

    top_down.extend((o, b, -1) for o, b in permutation_moves([i for _, i in upper]))
    return list(reversed(top_down))


def _pack(in_arity: int, moves: List[TaggedMove]) -> List[TaggedMove]:
    """Sorts moves by depth; moves of equal depth are applied right to left."""
    depths = Term(in_arity, tuple((o, b) for o, b, _ in moves)).depths()
    changed = True
    while changed:
        changed = False
        for i in range(len(moves) - 1):
            (o1, b1, n1), (o2, b2, n2) = moves[i], moves[i + 1]
            if not _independent((o1, b1), (o2, b2)):
                continue
            if depths[i] > depths[i + 1] or (depths[i] == depths[i + 1]
                                             and o2 >= o1 + b1.out_arity):
                (p2, c2), (p1, c1) = _swap((o1, b1), (o2, b2))
                moves[i], moves[i + 1] = (p2, c2, n2), (p1, c1, n1)
                depths[i], depths[i + 1] = depths[i + 1], depths[i]
                changed = True
    return moves


@lru_cache(maxsize=1 << 16)
def normalize_term(term: Term) -> Tuple[int, Term]:
    """Returns (sign, canonical term).

    The canonical term depends only on the string diagram of `term`. Its value
    differs from the value of `term` by the sign of the reordering of the
    odd generators, since every interchange of g past f costs (-1)^{|f||g|}
    while generators slide through permutations freely.
    """
    d = diagram_of(term)
    labels = canonical_labels(d)
    moves = _pack(term.in_arity, _emit(relabel(d, labels)))

    before = tuple(labels[n] for n, g in enumerate(d.blocks) if g.degree % 2)
    after = tuple(n for _, b, n in moves if isinstance(b, Generator) and b.degree % 2)
    sign = sign_of_permutation(before) * sign_of_permutation(after)
    return sign, Term(term.in_arity, tuple((o, b) for o, b, _ in moves))


class PropExpression:
    """Formal rational combination of terms sharing (out_arity, in_arity)."""

    __slots__ = ("out_arity", "in_arity", "terms")

    def __init__(self, out_arity: int, in_arity: int,
                 terms: Optional[Mapping[Term, Fraction]] = None) -> None:
        self.out_arity = out_arity
        self.in_arity = in_arity
        self.terms: Dict[Term, Fraction] = {}
        for term, coef in (terms or {}).items():
            if (term.out_arity, term.in_arity) != (out_arity, in_arity):
                raise ArityMismatch((out_arity, in_arity), (term.out_arity, term.in_arity),
                                    "sum")
            if coef:
                self.terms[term] = Fraction(coef)

    # Constructors

    @classmethod
    def zero(cls, out_arity: int, in_arity: int) -> "PropExpression":
        return cls(out_arity, in_arity)

    @classmethod
    def identity(cls, arity: int = 1) -> "PropExpression":
        return cls(arity, arity, {Term(arity): Fraction(1)})

    @classmethod
    def generator(cls, g: Generator) -> "PropExpression":
        return cls(g.out_arity, g.in_arity, {Term(g.in_arity, ((0, g),)): Fraction(1)})

    @classmethod
    def shuffle(cls, s: int, t: int) -> "PropExpression":
        block = Shuffle(s, t)
        moves: Tuple[Move, ...] = () if block.is_identity else ((0, block),)
        return cls(s * t, s * t, {Term(s * t, moves): Fraction(1)})

    @classmethod
    def permutation(cls, images: Sequence[int]) -> "PropExpression":
        """Output k takes input images[k]."""
        n = len(images)
        if sorted(images) != list(range(n)):
            raise InvalidData(f"{list(images)} is not a permutation")
        block = Permutation(tuple(images))
        moves: Tuple[Move, ...] = () if block.is_identity else ((0, block),)
        return cls(n, n, {Term(n, moves): Fraction(1)})

    @classmethod
    def from_term(cls, term: Term, coef: Fraction = Fraction(1)) -> "PropExpression":
        return cls(term.out_arity, term.in_arity, {term: coef})

    # Algebra

    @property
    def arity(self) -> Tuple[int, int]:
        return self.out_arity, self.in_arity

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[Tuple[Term, Fraction]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def _check_same_arity(self, other: "PropExpression") -> None:
        if self.arity != other.arity:
            raise ArityMismatch(self.arity, other.arity, "sum")

    def __add__(self, other: "PropExpression") -> "PropExpression":
        self._check_same_arity(other)
        terms = dict(self.terms)
        for term, coef in other.terms.items():
            terms[term] = terms.get(term, Fraction(0)) + coef
        return PropExpression(self.out_arity, self.in_arity, terms)

    def __neg__(self) -> "PropExpression":
        return self.scale(-1)

    def __sub__(self, other: "PropExpression") -> "PropExpression":
        return self + (-other)

    def scale(self, factor: Union[int, Fraction]) -> "PropExpression":
        return PropExpression(self.out_arity, self.in_arity,
                              {t: c * factor for t, c in self.terms.items()})

    def __rmul__(self, factor: Union[int, Fraction]) -> "PropExpression":
        return self.scale(factor)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PropExpression):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.terms.items())))

    def degrees(self) -> Tuple[int, ...]:
        return tuple(sorted({t.degree for t in self.terms}))

    def generators(self) -> Dict[str, Generator]:
        return {g.name: g for t in self.terms for g in t.generators()}

    def render(self, ascii: bool = False) -> str:
        if not self.terms:
            return "0"
        parts: List[str] = []
        for term, coef in sorted(self.terms.items(), key=lambda i: i[0].sort_key):
            body = term.render(ascii)
            magnitude = abs(coef)
            if magnitude != 1:
                body = f"{fraction_to_str(magnitude)}*{body}"
            if coef < 0:
                parts.append(("- " if parts else "-") + body)
            else:
                parts.append(("+ " if parts else "") + body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"PropExpression({self.render(ascii=True)!r})"


def compose(f: PropExpression, g: PropExpression) -> PropExpression:
    """f∘g: apply g first."""
    if f.in_arity != g.out_arity:
        raise ArityMismatch(f.arity, g.arity, "compose")
    terms: Dict[Term, Fraction] = {}
    for tf, cf in f.terms.items():
        for tg, cg in g.terms.items():
            term = Term(tg.in_arity, tg.moves + tf.moves)
            terms[term] = terms.get(term, Fraction(0)) + cf * cg
    return PropExpression(f.out_arity, g.in_arity, terms)


def tensor(f: PropExpression, g: PropExpression) -> PropExpression:
    """f⊗g = (f⊗1)(1⊗g)"""
    terms: Dict[Term, Fraction] = {}
    for tf, cf in f.terms.items():
        for tg, cg in g.terms.items():
            moves = _shift(tg.moves, tf.in_arity) + tf.moves
            term = Term(tf.in_arity + tg.in_arity, moves)
            terms[term] = terms.get(term, Fraction(0)) + cf * cg
    return PropExpression(f.out_arity + g.out_arity, f.in_arity + g.in_arity, terms)


def tensor_all(factors: Iterable[PropExpression]) -> PropExpression:
    result: Optional[PropExpression] = None
    for factor in factors:
        result = factor if result is None else tensor(result, factor)
    if result is None:
        raise InvalidData("empty tensor product")
    return result


def normalize(e: PropExpression) -> PropExpression:
    terms: Dict[Term, Fraction] = {}
    for term, coef in e.terms.items():
        sign, canonical = normalize_term(term)
        terms[canonical] = terms.get(canonical, Fraction(0)) + sign * coef
    ordered = sorted(((t, c) for t, c in terms.items() if c), key=lambda i: i[0].sort_key)
    return PropExpression(e.out_arity, e.in_arity, dict(ordered))


# Parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)"
    r"|(?P<tensor>⊗|\(x\))"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*(?:\{\d+(?:,\d+)*\})?)"
    r"|(?P<op>[()+\-*]))"
)
_SHUFFLE_NAME = re.compile(r"s\{(\d+),(\d+)\}")
_PERMUTATION_NAME = re.compile(r"perm\{(\d+(?:,\d+)*)\}")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens: List[Tuple[str, str]] = []
    position = 0
    text = text.rstrip()
    while position < len(text):
        match = _TOKEN.match(text, position)
        if not match or match.end() == position:
            raise InvalidData(f"unexpected character in expression at {position}: {text!r}")
        kind = match.lastgroup
        assert kind is not None
        tokens.append((kind, match.group(kind)))
        position = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str, registry: Mapping[str, Generator]) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.position = 0
        self.registry = registry

    def peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.position] if self.position < len(self.tokens) else None

    def take(self) -> Tuple[str, str]:
        token = self.peek()
        if token is None:
            raise InvalidData(f"unexpected end of expression: {self.text!r}")
        self.position += 1
        return token

    def expect(self, value: str) -> None:
        kind, got = self.take()
        if got != value:
            raise InvalidData(f"expected {value!r}, got {got!r} in {self.text!r}")

    def parse(self) -> PropExpression:
        result = self.sum()
        if self.peek() is not None:
            raise InvalidData(f"trailing input {self.peek()[1]!r} in {self.text!r}")  # type: ignore
        return result

    def sum(self) -> PropExpression:
        sign = 1
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        result = self.product().scale(sign)
        while self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
            result = result + self.product().scale(sign)
        return result

    def product(self) -> PropExpression:
        token = self.peek()
        nxt = self.tokens[self.position + 1] if self.position + 1 < len(self.tokens) else None
        if token is not None and token[0] == "num" and nxt == ("op", "*"):
            self.take()
            self.take()
            return self.tensor().scale(Fraction(token[1]))
        return self.tensor()

    def tensor(self) -> PropExpression:
        result = self.composite()
        while self.peek() is not None and self.peek()[0] == "tensor":  # type: ignore
            self.take()
            result = tensor(result, self.composite())
        return result

    def composite(self) -> PropExpression:
        factors = [self.factor()]
        while True:
            token = self.peek()
            if token is None or token[0] == "tensor" or token in (("op", "+"), ("op", "-"),
                                                                  ("op", ")")):
                break
            factors.append(self.factor())
        result = factors[-1]
        for f in reversed(factors[:-1]):
            result = compose(f, result)
        return result

    def factor(self) -> PropExpression:
        kind, value = self.take()
        if value == "(":
            inner = self.sum()
            self.expect(")")
            return inner
        if kind == "num":
            if value != "1":
                raise InvalidData(f"coefficients need a '*', got {value!r} in {self.text!r}")
            return PropExpression.identity(1)
        if kind == "name":
            if value == "Id":
                return PropExpression.identity(1)
            shuffle = _SHUFFLE_NAME.fullmatch(value)
            if shuffle and value not in self.registry:
                return PropExpression.shuffle(int(shuffle[1]), int(shuffle[2]))
            permutation = _PERMUTATION_NAME.fullmatch(value)
            if permutation and value not in self.registry:
                images = [int(i) - 1 for i in permutation[1].split(",")]
                return PropExpression.permutation(images)
            try:
                return PropExpression.generator(self.registry[value])
            except KeyError:
                raise InvalidData(f"unknown generator {value!r} in {self.text!r}") from None
        raise InvalidData(f"unexpected {value!r} in {self.text!r}")


def parse_expression(text: str, registry: Mapping[str, Generator]) -> PropExpression:
    """Parses `mu(mu⊗1) - mu(1⊗mu)` style text. Juxtaposition is composition
    (rightmost factor applied first); ⊗ or (x) is the tensor product; s{s,t} is a
    shuffle; coefficients are written as `2*` or `1/2*`."""
    return _Parser(text, registry).parse()


@dataclass
class GeneratorRegistry:
    """Named generators of one session; names are unique."""
    generators: Dict[str, Generator] = field(default_factory=dict)

    def add(self, g: Generator) -> Generator:
        existing = self.generators.get(g.name)
        if existing is not None and existing != g:
            raise InvalidData(f"generator {g.name!r} declared twice with different signatures")
        self.generators[g.name] = g
        return g

    def __getitem__(self, name: str) -> Generator:
        return self.generators[name]

    def __contains__(self, name: object) -> bool:
        return name in self.generators

    def parse(self, text: str) -> PropExpression:
        return parse_expression(text, self.generators)


# Numeric evaluation

@dataclass
class NumericInstance:
    """A finite-type graded module H plus exact matrices realizing generators.

    Basis vectors are ordered by degree; a matrix of a generator g has
    dim(H)^g.out_arity rows and dim(H)^g.in_arity columns, indexed by tensor
    basis tuples in lexicographic order.
    """
    dims: Dict[int, int]
    matrices: Dict[str, SDM] = field(default_factory=dict)
    generators: Dict[str, Generator] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.basis_degrees: Tuple[int, ...] = tuple(
            degree for degree in sorted(self.dims) for _ in range(self.dims[degree])
        )
        self._columns: Dict[str, Dict[int, List[Tuple[Tuple[int, ...], Entry]]]] = {}
        for name, matrix in self.matrices.items():
            self._validate(name, matrix)

    @property
    def dim(self) -> int:
        return len(self.basis_degrees)

    def tensor_dim(self, arity: int) -> int:
        return self.dim ** arity

    def _validate(self, name: str, matrix: SDM) -> None:
        g = self.generators.get(name)
        if g is None:
            raise ShapeMismatch(f"matrix given for undeclared generator {name!r}")
        expected = (self.tensor_dim(g.out_arity), self.tensor_dim(g.in_arity))
        if matrix.shape != expected:
            raise ShapeMismatch(f"{name}: expected a {expected[0]}×{expected[1]} matrix, "
                                f"got {matrix.shape[0]}×{matrix.shape[1]}")
        for row, cols in matrix.items():
            out_degree = self.tuple_degree(self.index_to_tuple(row, g.out_arity))
            for col in cols:
                in_degree = self.tuple_degree(self.index_to_tuple(col, g.in_arity))
                if out_degree - in_degree != g.degree:
                    raise ShapeMismatch(f"{name}: entry ({row}, {col}) breaks degree {g.degree}")

    def set_matrix(self, g: Generator, matrix: SDM) -> None:
        self.generators[g.name] = g
        self._validate(g.name, matrix)
        self.matrices[g.name] = matrix
        self._columns.pop(g.name, None)

    def tuple_to_index(self, tup: Tuple[int, ...]) -> int:
        index = 0
        for i in tup:
            index = index * self.dim + i
        return index

    def index_to_tuple(self, index: int, arity: int) -> Tuple[int, ...]:
        digits: List[int] = []
        for _ in range(arity):
            index, digit = divmod(index, self.dim)
            digits.append(digit)
        return tuple(reversed(digits))

    def tuple_degree(self, tup: Tuple[int, ...]) -> int:
        return sum(self.basis_degrees[i] for i in tup)

    def render_tensor(self, tup: Tuple[int, ...], ascii: bool = False) -> str:
        return (TENSOR_ASCII if ascii else TENSOR).join(f"e{i}" for i in tup)

    def columns(self, g: Generator) -> Dict[int, List[Tuple[Tuple[int, ...], Entry]]]:
        """Column index → nonzero (output tuple, value) pairs of a generator's matrix."""
        cached = self._columns.get(g.name)
        if cached is not None:
            return cached
        try:
            matrix = self.matrices[g.name]
        except KeyError:
            raise MissingGenerator(g.name) from None
        cols: Dict[int, List[Tuple[Tuple[int, ...], Entry]]] = {}
        for row, entries in matrix.items():
            out = self.index_to_tuple(row, g.out_arity)
            for col, value in entries.items():
                cols.setdefault(col, []).append((out, value))
        self._columns[g.name] = cols
        return cols


def _koszul_parity(degrees: Iterable[int]) -> int:
    return sum(degrees) % 2


def _apply_block(block: Block, inputs: Tuple[int, ...],
                 inst: NumericInstance) -> List[Tuple[Tuple[int, ...], Entry]]:
    if isinstance(block, (Shuffle, Permutation)):
        perm = block.permutation()
        parity = 0
        for a in range(len(perm)):
            for b in range(a + 1, len(perm)):
                if perm[a] > perm[b]:
                    parity += inst.basis_degrees[inputs[perm[a]]] * \
                        inst.basis_degrees[inputs[perm[b]]]
        value = QQ(-1) if parity % 2 else QQ(1)
        return [(tuple(inputs[p] for p in perm), value)]

    column = inst.tuple_to_index(inputs)
    return inst.columns(block).get(column, [])


def _apply_term(term: Term, start: Tuple[int, ...],
                inst: NumericInstance) -> Dict[Tuple[int, ...], Entry]:
    vector: Dict[Tuple[int, ...], Entry] = {start: QQ(1)}
    for offset, block in term.moves:
        result: Dict[Tuple[int, ...], Entry] = {}
        for tup, coef in vector.items():
            left = tup[:offset]
            middle = tup[offset:offset + block.in_arity]
            right = tup[offset + block.in_arity:]
            if block.degree % 2 and _koszul_parity(inst.basis_degrees[i] for i in left):
                coef = -coef
            for out, value in _apply_block(block, middle, inst):
                key = left + out + right
                total = result.get(key, QQ(0)) + coef * value
                if total:
                    result[key] = total
                else:
                    result.pop(key, None)
        vector = result
        if not vector:
            break
    return vector


def eval_expression(e: PropExpression, inst: NumericInstance) -> SDM:
    """Exact matrix of e on the tensor bases of H (rows: outputs, columns: inputs)."""
    for g in e.generators().values():
        if g.name not in inst.matrices:
            raise MissingGenerator(g.name)

    shape = (inst.tensor_dim(e.out_arity), inst.tensor_dim(e.in_arity))
    dod: Dict[int, Dict[int, Entry]] = {}
    for col in range(shape[1]):
        start = inst.index_to_tuple(col, e.in_arity)
        for term, coef in e.terms.items():
            scalar = QQ(coef.numerator, coef.denominator)
            for out, value in _apply_term(term, start, inst).items():
                row = inst.tuple_to_index(out)
                entries = dod.setdefault(row, {})
                total = entries.get(col, QQ(0)) + scalar * value
                if total:
                    entries[col] = total
                else:
                    entries.pop(col, None)
                    if not entries:
                        del dod[row]
    return SDM(dod, shape, QQ)


def random_instance(generators: Iterable[Generator], rng: random.Random,
                    max_dim: int) -> NumericInstance:
    """Random graded H in degrees 0 and 1 with random rational generator matrices.

    Degree-(-1) maps can only go from degree 1 to degree 0, so a random
    differential always squares to zero.
    """
    dims = {0: rng.randint(1, max_dim), 1: rng.randint(0, max_dim)}
    inst = NumericInstance(dims)
    for g in sorted(set(generators)):
        rows, cols = inst.tensor_dim(g.out_arity), inst.tensor_dim(g.in_arity)
        dod: Dict[int, Dict[int, Entry]] = {}
        for col in range(cols):
            in_degree = inst.tuple_degree(inst.index_to_tuple(col, g.in_arity))
            for row in range(rows):
                out_degree = inst.tuple_degree(inst.index_to_tuple(row, g.out_arity))
                if out_degree - in_degree != g.degree or rng.random() < 0.4:
                    continue
                value = QQ(rng.randint(-4, 4), rng.randint(1, 3))
                if value:
                    dod.setdefault(row, {})[col] = value
        inst.set_matrix(g, SDM(dod, (rows, cols), QQ))
    return inst


class EqualityVerdict(NamedTuple):
    distinct: bool
    trials: int
    witness: Optional[NumericInstance] = None

    def describe(self) -> str:
        if self.distinct:
            return f"distinct (witness found after {self.trials} trials)"
        return f"indistinguishable after {self.trials} trials"


def random_equality_check(a: PropExpression, b: PropExpression, trials: int = DEFAULT_TRIALS,
                          max_dim: int = DEFAULT_MAX_DIM,
                          seed: int = DEFAULT_SEED) -> EqualityVerdict:
    if a.arity != b.arity:
        raise ArityMismatch(a.arity, b.arity, "random_equality_check")

    difference = a - b
    generators = list(difference.generators().values())
    rng = random.Random(seed)
    for trial in range(1, trials + 1):
        inst = random_instance(generators, rng, max_dim)
        if not eval_expression(difference, inst).is_zero_matrix():
            return EqualityVerdict(True, trial, inst)
    return EqualityVerdict(False, trials)
