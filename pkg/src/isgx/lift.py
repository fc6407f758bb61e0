"""The lifted inverse semigroup S_G of pairs (alpha_{g1}...alpha_{gn}, u_{g1}...u_{gn}).

S_G depends on the covariant representation used to build it.  Pairs are equal
when the map parts agree exactly and the matrix parts agree within ``tol`` in
operator norm.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

import numpy as np

from .action import DEFAULT_TOL, PartialAction, range_formula, validate_axioms
from .covrep import MatrixRep, opnorm, validate_covariant
from .errors import PreconditionError, ResourceError, StructuralError
from .report import ValidationReport
from .semigroup import FiniteInverseSemigroup, PartialBijection, check_laws, compose, invert


@dataclass(frozen=True, eq=False)
class LiftedElement:
    map_part: PartialBijection
    mat_part: np.ndarray
    witness_word: tuple[int, ...]

    @property
    def support(self) -> frozenset[int]:
        """``E_s``, the range of the map part."""
        return self.map_part.range

    def same_as(self, other: LiftedElement, tol: float) -> bool:
        return self.map_part == other.map_part and opnorm(self.mat_part - other.mat_part) <= tol


@dataclass(frozen=True, eq=False)
class LiftedSemigroup:
    elements: tuple[LiftedElement, ...]
    semigroup: FiniteInverseSemigroup
    lift_of: tuple[int, ...]  # g in G -> id of (alpha_g, u_g)
    source: PartialAction
    rep: MatrixRep
    tol: float

    def __len__(self) -> int:
        return len(self.elements)

    def to_dict(self) -> dict:
        G, pts = self.source.semigroup, self.source.ground.points
        return {
            "size": len(self),
            "elements": [
                {
                    "label": self.semigroup.labels[i],
                    "witness_word": [G.labels[g] for g in el.witness_word],
                    "support": [pts[x] for x in sorted(el.support)],
                    "map": el.map_part.to_mapping(),
                }
                for i, el in enumerate(self.elements)
            ],
            "mult": [[self.semigroup.labels[v] for v in row] for row in self.semigroup.mult],
        }


class _Registry:
    def __init__(self, tol: float, budget: int):
        self.items: list[LiftedElement] = []
        self.by_map: dict[PartialBijection, list[int]] = {}
        self.tol = tol
        self.budget = budget

    def find(self, el: LiftedElement) -> int | None:
        for i in self.by_map.get(el.map_part, []):
            if opnorm(self.items[i].mat_part - el.mat_part) <= self.tol:
                return i
        return None

    def add(self, el: LiftedElement) -> tuple[int, bool]:
        i = self.find(el)
        if i is not None:
            return i, False
        if len(self.items) >= self.budget:
            raise ResourceError(f"S_G closure exceeded the budget of {self.budget} elements")
        self.items.append(el)
        self.by_map.setdefault(el.map_part, []).append(len(self.items) - 1)
        return len(self.items) - 1, True


def build_sg(pa: PartialAction, rep: MatrixRep, tol: float = DEFAULT_TOL, budget: int = 100_000,
             check: bool = True) -> LiftedSemigroup:
    """Worklist closure of ``{(alpha_g, u_g)}`` under coordinatewise product.

    The inverse of ``(phi, W)`` is asserted to be ``(phi^{-1}, W*)`` and the
    resulting tables are checked against the inverse-semigroup laws.
    """
    if check:
        for label, report in (("action", validate_axioms(pa)), ("representation", validate_covariant(pa, rep, tol))):
            if not report.passed:
                raise PreconditionError(f"{label} is not valid: {report.failures[0].check}")
    G = pa.semigroup
    reg = _Registry(tol, budget)
    gens = [LiftedElement(pa.maps[g], rep.u[g], (g,)) for g in G]
    lift_of = tuple(reg.add(el)[0] for el in gens)
    queue = deque(range(len(reg.items)))
    while queue:
        i = queue.popleft()
        a = reg.items[i]
        for g, b in zip(G, gens):
            c = LiftedElement(compose(a.map_part, b.map_part), a.mat_part @ b.mat_part, a.witness_word + (g,))
            j, new = reg.add(c)
            if new:
                queue.append(j)

    items = reg.items
    k = len(items)
    mult = [[0] * k for _ in range(k)]
    for i, j in itertools.product(range(k), repeat=2):
        c = LiftedElement(compose(items[i].map_part, items[j].map_part), items[i].mat_part @ items[j].mat_part, ())
        idx = reg.find(c)
        if idx is None:
            raise StructuralError("S_G is not closed under products")
        mult[i][j] = idx
    inv = []
    for el in items:
        idx = reg.find(LiftedElement(invert(el.map_part), el.mat_part.conj().T, ()))
        if idx is None:
            raise StructuralError(f"inverse of lifted element {G.word_label(el.witness_word)} is missing from S_G")
        inv.append(idx)
    labels = [G.word_label(el.witness_word) for el in items]
    S = FiniteInverseSemigroup(labels, mult, inv, lift_of[G.unit])
    laws = check_laws(S)
    if not laws.passed:
        raise StructuralError(f"S_G violates {laws.failures[0].check}")
    return LiftedSemigroup(tuple(items), S, lift_of, pa, rep, tol)


def beta_action(sg: LiftedSemigroup) -> PartialAction:
    """``beta_s`` = map part of ``s`` with ``E_s`` its range."""
    return PartialAction.from_maps(sg.semigroup, sg.source.ground, [el.map_part for el in sg.elements])


def check_beta(sg: LiftedSemigroup) -> ValidationReport:
    """Axioms for beta, full-domain multiplicativity, and the ``E_s`` product formula."""
    beta = beta_action(sg)
    r = validate_axioms(beta)
    S, L = sg.semigroup, sg.semigroup.labels
    for s, t in itertools.product(S, repeat=2):
        lhs = compose(beta.maps[s], beta.maps[t])
        r.expect(lhs == beta.maps[S.mult[s][t]], "beta-multiplicative", s=L[s], t=L[t])
    for s, el in enumerate(sg.elements):
        E = range_formula(sg.source, el.witness_word)
        r.expect(E == el.support, "E-formula", s=L[s], formula=sg.source.ground.names(E),
                 range=sg.source.ground.names(el.support))
    return r


def nu_from_u(sg: LiftedSemigroup) -> MatrixRep:
    """``nu_s`` = matrix part of ``s``; a covariant representation of (A, S_G, beta)."""
    return MatrixRep(sg.rep.labeling, tuple(el.mat_part for el in sg.elements), name=f"nu[{sg.rep.name}]")


def omega_from_z(sg: LiftedSemigroup, z: MatrixRep, tol: float | None = None) -> MatrixRep:
    """Pull a covariant representation of S_G back to G via ``omega_g = z(alpha_g, u_g)``."""
    tol = sg.tol if tol is None else tol
    report = validate_covariant(beta_action(sg), z, tol)
    if not report.passed:
        raise PreconditionError(f"z is not covariant for beta: {report.failures[0].check} at {report.failures[0].witness}")
    return MatrixRep(z.labeling, tuple(z.u[i] for i in sg.lift_of), name=f"omega[{z.name}]")


def check_key_identity(sg: LiftedSemigroup) -> ValidationReport:
    """``s (s1 s2)* == s1 s2 (s1 s2)*`` for ``s = lift(g1 g2)``, ``s_i = lift(g_i)``."""
    r = ValidationReport()
    G, S = sg.source.semigroup, sg.semigroup
    m, lift = S.mult, sg.lift_of
    for g1, g2 in itertools.product(G, repeat=2):
        s = lift[G.mult[g1][g2]]
        p = m[lift[g1]][lift[g2]]
        r.expect(m[s][S.inv[p]] == m[p][S.inv[p]], "key-identity", g1=G.labels[g1], g2=G.labels[g2])
    return r
