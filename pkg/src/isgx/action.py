"""Partial actions of a finite unital inverse semigroup on A = C(X).

An ideal of C(X) is the set of functions vanishing off a subset of X, so an
ideal is stored as a frozenset of point indices.  The isomorphism attached to
``g`` is pushforward along a partial bijection: ``apply(g, a) = a . alpha_g^{-1}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, StructuralError
from .report import ValidationReport
from .semigroup import FiniteInverseSemigroup, GroundSet, PartialBijection, compose_all, invert

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PartialAction:
    semigroup: FiniteInverseSemigroup
    ground: GroundSet
    maps: tuple[PartialBijection, ...]
    ideals: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.maps) != len(self.semigroup) or len(self.ideals) != len(self.semigroup):
            raise StructuralError("action must supply one map and one ideal per semigroup element")
        for m in self.maps:
            if m.ground != self.ground:
                raise StructuralError("action map lives on a different ground set")
        n = len(self.ground)
        for D in self.ideals:
            if any(not 0 <= x < n for x in D):
                raise StructuralError("ideal support outside ground set")

    @classmethod
    def from_maps(cls, S, ground, maps, ideals=None) -> PartialAction:
        """Build from per-element maps; ``D_g`` defaults to the range of ``alpha_g``."""
        maps = tuple(maps)
        if ideals is None:
            ideals = tuple(m.range for m in maps)
        return cls(S, ground, maps, tuple(frozenset(D) for D in ideals))

    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def full(self) -> frozenset[int]:
        return frozenset(range(self.n))

    def ideal(self, g: int) -> frozenset[int]:
        return self.ideals[g]

    def ideal_product(self, elements: Iterable[int]) -> frozenset[int]:
        """Intersection of ``D_g`` over ``elements``; the product of coordinate ideals."""
        return reduce(lambda acc, g: acc & self.ideals[g], elements, self.full)


def tautological_action(S: FiniteInverseSemigroup) -> PartialAction:
    """The action of ``S <= I(X)`` on X by its own elements."""
    if S.embedding is None:
        raise StructuralError("tautological action needs a semigroup realized inside I(X)")
    return PartialAction.from_maps(S, S.embedding[0].ground, S.embedding)


def structural_defects(pa: PartialAction) -> ValidationReport:
    r = ValidationReport()
    S, L = pa.semigroup, pa.semigroup.labels
    r.expect(pa.ideals[S.unit] == pa.full, "structure:unit-ideal-full",
             missing=pa.ground.names(pa.full - pa.ideals[S.unit]))
    for g in S:
        m = pa.maps[g]
        r.expect(m.range == pa.ideals[g], "structure:range-is-ideal", g=L[g],
                 range=pa.ground.names(m.range), ideal=pa.ground.names(pa.ideals[g]))
        r.expect(m.domain == pa.ideals[S.inv[g]], "structure:domain-is-ideal-of-inverse", g=L[g],
                 domain=pa.ground.names(m.domain), ideal=pa.ground.names(pa.ideals[S.inv[g]]))
    return r


def validate_axioms(pa: PartialAction) -> ValidationReport:
    """Check the three partial-action axioms exhaustively, plus ``alpha_e = id``.

    Structural defects are reported under ``structure:*`` check names; when any
    are present the axioms are not evaluated.
    """
    r = structural_defects(pa)
    if not r.passed:
        return r
    S, L, pts = pa.semigroup, pa.semigroup.labels, pa.ground.points
    X = pa.ideals
    for s in S:
        m_s, m_si = pa.maps[s], pa.maps[S.inv[s]]
        bad = [pts[x] for x in range(pa.n) if invert(m_s)(x) != m_si(x)]
        r.expect(not bad, "axiom-i", s=L[s], points=bad)
    for s, t in itertools.product(S, repeat=2):
        st = S.mult[s][t]
        m_s = pa.maps[s]
        lhs = frozenset(m_s(x) for x in X[S.inv[s]] & X[t] if m_s(x) is not None)
        rhs = X[s] & X[st]
        r.expect(lhs == rhs, "axiom-ii", s=L[s], t=L[t], points=pa.ground.names(lhs ^ rhs))
        ts = S.mult[S.inv[t]][S.inv[s]]
        for x in sorted(X[S.inv[t]] & X[ts]):
            y = pa.maps[t](x)
            lhs_x = None if y is None else m_s(y)
            r.expect(lhs_x is not None and lhs_x == pa.maps[st](x), "axiom-iii", s=L[s], t=L[t], x=pts[x])
    # consequence of (i)-(iii); a failure here means the axioms are violated
    r.expect(pa.maps[S.unit].is_identity(), "alpha-e-identity", map=str(pa.maps[S.unit]))
    return r


def composite(pa: PartialAction, word: Sequence[int]) -> PartialBijection:
    """``alpha_{s1} . ... . alpha_{sn}`` (the last letter acts first)."""
    if not word:
        raise StructuralError("word must be nonempty")
    return compose_all([pa.maps[s] for s in word], pa.ground)


def domain_formula(pa: PartialAction, word: Sequence[int]) -> frozenset[int]:
    """``D_{sn*} D_{sn* s(n-1)*} ... D_{sn* ... s1*}``."""
    S = pa.semigroup
    stars = [S.inv[s] for s in reversed(word)]
    return pa.ideal_product(S.product(stars[: k + 1]) for k in range(len(stars)))


def range_formula(pa: PartialAction, word: Sequence[int]) -> frozenset[int]:
    """``D_{s1} D_{s1 s2} ... D_{s1 ... sn}``."""
    S = pa.semigroup
    return pa.ideal_product(S.product(word[: k + 1]) for k in range(len(word)))


def _literal_domain_formula(pa: PartialAction, word: Sequence[int]) -> frozenset[int]:
    # last factor written as D_{sn* ... s2* s1} (no star on s1)
    S = pa.semigroup
    if len(word) < 2:
        return domain_formula(pa, word)
    stars = [S.inv[s] for s in reversed(word)]
    prefixes = [S.product(stars[: k + 1]) for k in range(len(stars) - 1)]
    prefixes.append(S.product(stars[:-1] + [word[0]]))
    return pa.ideal_product(prefixes)


def check_domain_formula(pa: PartialAction, word: Sequence[int]) -> ValidationReport:
    """Compare dom/ran of the literal composite with the ideal-product formulas."""
    r = ValidationReport()
    c = composite(pa, word)
    label = pa.semigroup.word_label(word)
    dom, ran = domain_formula(pa, word), range_formula(pa, word)
    r.expect(c.domain == dom, "domain-formula", word=label, points=pa.ground.names(c.domain ^ dom))
    r.expect(c.range == ran, "range-formula", word=label, points=pa.ground.names(c.range ^ ran))
    literal = _literal_domain_formula(pa, word)
    if literal != dom:
        r.notes.append(
            f"word {label}: unstarred last factor gives {pa.ground.names(literal)}, "
            f"starred form gives {pa.ground.names(dom)}"
        )
    return r


def check_translate_lemma(pa: PartialAction, t: int, s_list: Sequence[int]) -> ValidationReport:
    """``alpha_t(D_{t*} D_{s1}...D_{sn}) == D_t D_{t s1}...D_{t sn}`` by direct image computation."""
    S = pa.semigroup
    r = ValidationReport()
    m_t = pa.maps[t]
    lhs = frozenset(m_t(x) for x in pa.ideal_product([S.inv[t], *s_list]) if m_t(x) is not None)
    rhs = pa.ideal_product([t, *(S.mult[t][s] for s in s_list)])
    r.expect(lhs == rhs, "translate-lemma", t=S.labels[t], s=[S.labels[s] for s in s_list],
             points=pa.ground.names(lhs ^ rhs))
    return r


def words(S: FiniteInverseSemigroup, max_len: int, min_len: int = 1):
    for k in range(min_len, max_len + 1):
        yield from itertools.product(range(len(S)), repeat=k)


def as_element(a, n: int) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape != (n,):
        raise StructuralError(f"algebra element must have shape ({n},), got {a.shape}")
    return a


def restrict_to(a: np.ndarray, support: frozenset[int], ground: GroundSet, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Zero ``a`` off ``support``; raise if a discarded entry exceeds ``tol`` in modulus."""
    out = np.zeros_like(a)
    idx = sorted(support)
    out[idx] = a[idx]
    off = np.abs(a - out)
    bad = np.nonzero(off > tol)[0]
    if bad.size:
        names = [ground.points[i] for i in bad]
        raise DomainError(f"element not supported in ideal {ground.names(support)}: nonzero at {names}", names)
    return out


def apply(pa: PartialAction, g: int, a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Push ``a`` in ``D_{g*}`` forward to ``D_g``."""
    a = restrict_to(as_element(a, pa.n), pa.ideals[pa.semigroup.inv[g]], pa.ground, tol)
    out = np.zeros(pa.n, dtype=complex)
    for x, y in enumerate(pa.maps[g].image):
        if y is not None:
            out[y] = a[x]
    return out


def indicator(support: Iterable[int], n: int) -> np.ndarray:
    out = np.zeros(n, dtype=complex)
    out[sorted(support)] = 1.0
    return out


def restricted_subaction(pa: PartialAction, keep: Iterable[int]) -> PartialAction:
    """Restrict ``pa`` to the subset ``keep`` of X, reindexing points.

    ``alpha'_g`` is ``alpha_g`` on ``keep & alpha_g^{-1}(keep)``. Restricting a
    partial action to a subset again gives a partial action.
    """
    keep = sorted(set(keep))
    if not keep:
        raise StructuralError("cannot restrict to an empty set")
    new_ground = GroundSet(tuple(pa.ground.points[i] for i in keep))
    pos = {x: i for i, x in enumerate(keep)}
    maps = []
    for m in pa.maps:
        image = tuple(
            pos[m(x)] if m(x) is not None and m(x) in pos else None
            for x in keep
        )
        maps.append(PartialBijection(new_ground, image))
    return PartialAction.from_maps(pa.semigroup, new_ground, maps)
