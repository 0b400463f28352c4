# Copyright (c) 2026 The ainfinity authors
# SPDX-License-Identifier: MIT

"""The biderivative d_ω of a family of operations ω = {θ_{n,m}}.

Top cochains put a monomial A ∈ U_x^y on a single face: e_x on the wedge side
(e_y when x = 1), e_y on the cech side (e_x when y = 1). Identifying A with its
Top cochain multiplies the stored value by the orientation of that face, so that
evaluating on C_*P gives back A.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from logging import getLogger
from typing import (Dict, FrozenSet, Iterable, List, NamedTuple, Optional,
                    Tuple)

from .cochain import (Cochain, DiagonalProvider, cech_cup, cech_level,
                      default_diagonal, power_series, wedge_cup, wedge_level)
from .const import MAX_ITERATIONS_SLACK, Color
from .err import ArityMismatch, InvalidData, NonConvergence
from .monomat import Arrow, MatrixMonomial, MonomialSum, arrow
from .permuta import OrderedPartition, face_for_leaf_sequence, orientation
from .prop_expr import Generator, Term


class Region(Enum):
    U0 = "U0"
    UV = "u∩v"
    U0_ROW = "u0"
    V0 = "v0"
    U = "u"
    V = "v"
    OTHER = "other+"


U_SIDE: FrozenSet[Region] = frozenset({Region.U0_ROW, Region.U, Region.UV})
V_SIDE: FrozenSet[Region] = frozenset({Region.V0, Region.V, Region.UV})

# Regions collected from each side into d_ω; u∩v enters once, through ω itself
WEDGE_OUTPUT: FrozenSet[Region] = frozenset({Region.U0_ROW, Region.V0, Region.V})
CECH_OUTPUT: FrozenSet[Region] = frozenset({Region.U0_ROW, Region.U, Region.V0})


def _all_ones(seq: Tuple[int, ...]) -> bool:
    return all(i == 1 for i in seq)


def classify(a: MatrixMonomial) -> Region:
    if _all_ones(a.x) and _all_ones(a.y):
        return Region.U0
    if a.shape == (1, 1) and a.x[0] >= 2 and a.y[0] >= 2:
        return Region.UV
    if a.q == 1 and a.y == (1,):
        return Region.U0_ROW
    if a.p == 1 and a.x == (1,):
        return Region.V0
    if a.q == 1 and sum(a.x) > 1:
        return Region.U
    if a.p == 1 and sum(a.y) > 1:
        return Region.V
    return Region.OTHER


def in_regions(regions: Iterable[Region]):
    wanted = frozenset(regions)
    return lambda a: classify(a) in wanted


def project_sum(s: MonomialSum, regions: Iterable[Region]) -> MonomialSum:
    return s.filter(in_regions(regions))


# Top cochains

def home_face_wedge(a: MatrixMonomial) -> Optional[OrderedPartition]:
    if not _all_ones(a.x):
        return face_for_leaf_sequence(a.x)
    if not _all_ones(a.y):
        return face_for_leaf_sequence(a.y)
    return None


def home_face_cech(a: MatrixMonomial) -> Optional[OrderedPartition]:
    if not _all_ones(a.y):
        return face_for_leaf_sequence(a.y)
    if not _all_ones(a.x):
        return face_for_leaf_sequence(a.x)
    return None


def _to_top(s: MonomialSum, home) -> Cochain:
    values: Dict[OrderedPartition, MonomialSum] = {}
    for a, coef in s:
        face = home(a)
        if face is None:
            continue
        value = MonomialSum.of(a, coef * orientation(face))
        values[face] = values[face] + value if face in values else value
    return Cochain(values)


def top_wedge(s: MonomialSum) -> Cochain:
    """The Top^∧ cochain of an element of U_+ (U_0 components are dropped)."""
    return _to_top(s, home_face_wedge)


def top_cech(s: MonomialSum) -> Cochain:
    """The Top^∨ cochain of an element of U_+ (U_0 components are dropped)."""
    return _to_top(s, home_face_cech)


def project_top_wedge(xi: Cochain) -> Cochain:
    """π̂: keeps the values sitting on their wedge home face."""
    return xi.map_values(lambda face, value: value.filter(lambda a: home_face_wedge(a) == face))


def project_top_cech(xi: Cochain) -> Cochain:
    """π̌: keeps the values sitting on their cech home face."""
    return xi.map_values(lambda face, value: value.filter(lambda a: home_face_cech(a) == face))


def _corolla_components(phi: Cochain, keep) -> Dict[int, MonomialSum]:
    result: Dict[int, MonomialSum] = {}
    for face, value in phi:
        if face.is_top_cell:
            component = value.filter(keep)
            if component:
                result[face.n + 1] = component
    return result


def coderivation_cochain(phi: Cochain, window: int) -> Cochain:
    """φ^c: the value [1 ... φ_{1,n}(e_n) ... 1] on every e_{x_i(n)} within the window."""
    components = _corolla_components(
        phi, lambda a: a.shape == (1, 1) and a.y == (1,) and a.x[0] >= 2)

    values: Dict[OrderedPartition, MonomialSum] = {}
    for n, component in components.items():
        for width in range(1, window - n + 2):
            for slot in range(width):
                leaves = tuple(n if j == slot else 1 for j in range(width))
                face = face_for_leaf_sequence(leaves)
                value = MonomialSum({
                    MatrixMonomial((tuple(a.rows[0][0] if j == slot else Term(1)
                                          for j in range(width)),)): c
                    for a, c in component
                })
                values[face] = values[face] + value if face in values else value
    return Cochain(values)


def derivation_cochain(psi: Cochain, window: int) -> Cochain:
    """ψ^a: the column value [1; ...; ψ_{n,1}(e_n); ...; 1] on every e_{y_i(n)}."""
    components = _corolla_components(
        psi, lambda a: a.shape == (1, 1) and a.x == (1,) and a.y[0] >= 2)

    values: Dict[OrderedPartition, MonomialSum] = {}
    for n, component in components.items():
        for height in range(1, window - n + 2):
            for slot in range(height):
                leaves = tuple(n if i == slot else 1 for i in range(height))
                face = face_for_leaf_sequence(leaves)
                value = MonomialSum({
                    MatrixMonomial(tuple((a.rows[0][0] if i == slot else Term(1),)
                                         for i in range(height))): c
                    for a, c in component
                })
                values[face] = values[face] + value if face in values else value
    return Cochain(values)


def tau(xi: Cochain) -> Cochain:
    """Moves values with x, y ≠ 1 between e_x and e_y; everything else goes to 0."""
    values: Dict[OrderedPartition, MonomialSum] = {}

    def put(face: OrderedPartition, a: MatrixMonomial, coef: Fraction) -> None:
        value = MonomialSum.of(a, coef)
        values[face] = values[face] + value if face in values else value

    for face, value in xi:
        for a, coef in value:
            if _all_ones(a.x) or _all_ones(a.y):
                continue
            e_x = face_for_leaf_sequence(a.x)
            e_y = face_for_leaf_sequence(a.y)
            if face == e_x:
                put(e_y, a, coef)
            elif face == e_y:
                put(e_x, a, coef)
    return Cochain(values)


# The BD operator

class Expansion(NamedTuple):
    """B̂D and B̌D before the projections to Top cochains."""
    phi_hat: Cochain
    psi_check: Cochain


def bd_hat(alpha: Cochain, window: int, diagonal: DiagonalProvider) -> Cochain:
    """ξ = Δ_ℓ-series of α; φ̂ = ξ_u + ξ_u∧ξ_u + (ξ_u∧ξ_u)∧ξ_u + ..."""
    xi = power_series(alpha, wedge_level, window)
    xi_u = xi.project(in_regions(U_SIDE))
    return power_series(xi_u, wedge_cup(diagonal), window)


def bd_check(beta: Cochain, window: int, diagonal: DiagonalProvider) -> Cochain:
    """ζ = Δ_ℓ-series of β; ψ̌ = ζ_v + ζ_v∨ζ_v + (ζ_v∨ζ_v)∨ζ_v + ..."""
    zeta = power_series(beta, cech_level, window)
    zeta_v = zeta.project(in_regions(V_SIDE))
    return power_series(zeta_v, cech_cup(diagonal), window)


def bd_expanded(phi: Cochain, psi: Cochain, window: int,
                diagonal: DiagonalProvider) -> Expansion:
    alpha = coderivation_cochain(phi, window) + tau(psi).truncate(window)
    beta = derivation_cochain(psi, window) + tau(phi).truncate(window)
    return Expansion(bd_hat(alpha, window, diagonal), bd_check(beta, window, diagonal))


def BD(phi: Cochain, psi: Cochain, window: int,
       diagonal: Optional[DiagonalProvider] = None) -> Tuple[Cochain, Cochain]:
    """BD(φ×ψ) = π̂B̂D(φ^c + τψ) × π̌B̌D(ψ^a + τφ)"""
    if window < 2:
        raise InvalidData(f"the arity window must be at least 2, got {window}")
    expanded = bd_expanded(phi, psi, window, diagonal or default_diagonal(window))
    return project_top_wedge(expanded.phi_hat), project_top_cech(expanded.psi_check)


def bd0(a: MonomialSum, window: int) -> MonomialSum:
    """Free linear extension of a (1,1)-element: A placed at every slot of every
    q×p identity matrix with p, q ≤ window."""
    for m, _ in a:
        if m.shape != (1, 1) or (m.x, m.y) != ((1,), (1,)):
            raise ArityMismatch((1, 1), (sum(m.y), sum(m.x)), "bd0")

    terms: Dict[MatrixMonomial, Fraction] = {}
    for m, coef in a:
        entry = m.rows[0][0]
        for q in range(1, window + 1):
            for p in range(1, window + 1):
                for i in range(q):
                    for j in range(p):
                        placed = MatrixMonomial(tuple(
                            tuple(entry if (r, c) == (i, j) else Term(1) for c in range(p))
                            for r in range(q)
                        ))
                        terms[placed] = terms.get(placed, Fraction(0)) + coef
    return MonomialSum(terms)


# Fixed point

def generator_monomial(g: Generator) -> MatrixMonomial:
    return MatrixMonomial.single(Term(g.in_arity, ((0, g),)))


def omega_from_generators(generators: Iterable[Generator]) -> MonomialSum:
    return MonomialSum({generator_monomial(g): Fraction(1) for g in generators})


def _check_omega(omega: MonomialSum) -> None:
    for a, _ in omega:
        entry = a.rows[0][0]
        if a.shape != (1, 1) or len(entry.moves) != 1 \
                or not isinstance(entry.moves[0][1], Generator):
            raise InvalidData(f"ω must be a sum of generators, got {a.render(True)}")


@dataclass
class BiderivativeResult:
    omega: MonomialSum
    window: int
    phi: Cochain
    psi: Cochain
    iterations: int
    d_omega: MonomialSum
    expansion: MonomialSum
    """The evaluated composites inside d_ω: values of φ̂ and ψ̌ away from their Top faces."""

    def by_arrow(self) -> List[Tuple[Arrow, MonomialSum]]:
        return group_by_arrow(self.d_omega)


def group_by_arrow(s: MonomialSum) -> List[Tuple[Arrow, MonomialSum]]:
    groups: Dict[Arrow, Dict[MatrixMonomial, Fraction]] = {}
    for m in s.monomials():
        groups.setdefault(arrow(m), {})[m] = s.coefficient(m)
    return [(key, MonomialSum(groups[key])) for key in sorted(groups)]


class BiderivativeSolver:
    """Iterates BD from the seed (φ_{u0} + φ_{u∩v}) × (ψ_{v0} + ψ_{u∩v}) until
    two successive iterates agree within the arity window."""

    def __init__(self, omega: MonomialSum, window: int,
                 diagonal: Optional[DiagonalProvider] = None) -> None:
        if window < 2:
            raise InvalidData(f"the arity window must be at least 2, got {window}")
        _check_omega(omega)

        self.logger = getLogger("Biderivative")
        self.omega = omega
        self.window = window
        self.diagonal = diagonal or default_diagonal(window)

        self.differential = omega.filter(lambda a: classify(a) == Region.U0)
        self.omega_uv = project_sum(omega, {Region.UV})
        wedge_seed = project_sum(omega, {Region.U0_ROW, Region.UV})
        cech_seed = project_sum(omega, {Region.V0, Region.UV})
        self.phi = top_wedge(wedge_seed.truncate(window))
        self.psi = top_cech(cech_seed.truncate(window))

    def solve(self) -> BiderivativeResult:
        self.logger.info(f"Solving for the biderivative of {Color.BOLD}{len(self.omega)}"
                         f"{Color.NON_BOLD} operations, window {self.window}")

        phi, psi = self.phi, self.psi
        limit = self.window + MAX_ITERATIONS_SLACK
        for iteration in range(1, limit + 1):
            new_phi, new_psi = BD(phi, psi, self.window, self.diagonal)
            self.logger.debug(f"{Color.DIM}Iteration {iteration}: {len(new_phi)} wedge faces, "
                              f"{len(new_psi)} cech faces{Color.RESET}")
            if new_phi == phi and new_psi == psi:
                return self.assemble(phi, psi, iteration)
            phi, psi = new_phi, new_psi

        raise NonConvergence(f"BD did not stabilize after {limit} iterations "
                             f"within window {self.window}")

    def assemble(self, phi: Cochain, psi: Cochain, iterations: int) -> BiderivativeResult:
        expanded = bd_expanded(phi, psi, self.window, self.diagonal)
        wedge_part = project_sum(expanded.phi_hat.evaluate(), WEDGE_OUTPUT)
        cech_part = project_sum(expanded.psi_check.evaluate(), CECH_OUTPUT)
        d_omega = bd0(self.differential, self.window) + self.omega_uv + wedge_part + cech_part

        # phi and psi are the Top projections of the expansion at the fixed point
        top = project_sum(phi.evaluate(), WEDGE_OUTPUT) + project_sum(psi.evaluate(), CECH_OUTPUT)
        expansion = wedge_part + cech_part - top

        self.logger.info(f"Converged after {iterations} iterations - d_ω has "
                         f"{Color.BOLD}{len(d_omega)}{Color.NON_BOLD} monomials")
        return BiderivativeResult(self.omega, self.window, phi, psi, iterations,
                                  d_omega.truncate(self.window), expansion.truncate(self.window))


def fixed_point(omega: MonomialSum, window: int,
                diagonal: Optional[DiagonalProvider] = None) -> BiderivativeResult:
    return BiderivativeSolver(omega, window, diagonal).solve()


def is_stable(result: BiderivativeResult, diagonal: Optional[DiagonalProvider] = None) -> bool:
    """One more BD application leaves the fixed point unchanged."""
    phi, psi = BD(result.phi, result.psi, result.window, diagonal)
    return phi == result.phi and psi == result.psi
