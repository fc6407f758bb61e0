"""Finite inverse semigroups, abstract or realized inside the symmetric inverse monoid I(X).

Product convention: ``s * t`` applies ``t`` first, so ``compose(s, t)(x) == s(t(x))``.
Every table and every word in this package uses this order.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import StructuralError
from .report import ValidationReport


@dataclass(frozen=True)
class GroundSet:
    points: tuple[str, ...]

    def __post_init__(self):
        if len(self.points) < 1:
            raise StructuralError("ground set must contain at least one point")
        if len(set(self.points)) != len(self.points):
            raise StructuralError(f"duplicate point labels in {self.points}")

    def __len__(self) -> int:
        return len(self.points)

    def index(self, label: str) -> int:
        try:
            return self.points.index(label)
        except ValueError:
            raise StructuralError(f"unknown point {label!r}") from None

    def subset(self, labels: Iterable[str]) -> frozenset[int]:
        return frozenset(self.index(p) for p in labels)

    def names(self, idx: Iterable[int]) -> list[str]:
        return [self.points[i] for i in sorted(idx)]


@dataclass(frozen=True)
class PartialBijection:
    """An injective partial map on a ground set.

    ``image[i]`` is the index of the image of point ``i`` or ``None`` when
    ``i`` lies outside the domain.
    """

    ground: GroundSet
    image: tuple[int | None, ...]

    def __post_init__(self):
        n = len(self.ground)
        if len(self.image) != n:
            raise StructuralError(f"image has length {len(self.image)}, ground set has {n} points")
        seen = set()
        for y in self.image:
            if y is None:
                continue
            if not 0 <= y < n:
                raise StructuralError(f"image index {y} out of range")
            if y in seen:
                raise StructuralError(f"not injective: {y} hit twice")
            seen.add(y)

    @classmethod
    def identity(cls, ground: GroundSet, on: Iterable[int] | None = None) -> PartialBijection:
        keep = set(range(len(ground))) if on is None else set(on)
        return cls(ground, tuple(i if i in keep else None for i in range(len(ground))))

    @classmethod
    def empty(cls, ground: GroundSet) -> PartialBijection:
        return cls(ground, (None,) * len(ground))

    @classmethod
    def from_mapping(cls, ground: GroundSet, mapping: Mapping[str, str]) -> PartialBijection:
        image: list[int | None] = [None] * len(ground)
        for src, dst in mapping.items():
            image[ground.index(src)] = ground.index(dst)
        return cls(ground, tuple(image))

    def __call__(self, x: int) -> int | None:
        return self.image[x]

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(i for i, y in enumerate(self.image) if y is not None)

    @property
    def range(self) -> frozenset[int]:
        return frozenset(y for y in self.image if y is not None)

    def is_identity(self) -> bool:
        return all(y == i for i, y in enumerate(self.image))

    def restrict(self, subset: Iterable[int]) -> PartialBijection:
        keep = set(subset)
        return PartialBijection(self.ground, tuple(y if i in keep else None for i, y in enumerate(self.image)))

    def sort_key(self) -> tuple[int, ...]:
        return tuple(-1 if y is None else y for y in self.image)

    def to_mapping(self) -> dict[str, str]:
        pts = self.ground.points
        return {pts[i]: pts[y] for i, y in enumerate(self.image) if y is not None}

    def __str__(self) -> str:
        pts = self.ground.points
        body = ", ".join(f"{pts[i]}->{pts[y]}" for i, y in enumerate(self.image) if y is not None)
        return "{" + body + "}"


def compose(s: PartialBijection, t: PartialBijection) -> PartialBijection:
    """Return ``s . t``: apply ``t`` then ``s``."""
    if s.ground != t.ground:
        raise StructuralError("cannot compose partial bijections over different ground sets")
    img = s.image
    return PartialBijection(s.ground, tuple(None if y is None else img[y] for y in t.image))


def invert(s: PartialBijection) -> PartialBijection:
    inv: list[int | None] = [None] * len(s.image)
    for x, y in enumerate(s.image):
        if y is not None:
            inv[y] = x
    return PartialBijection(s.ground, tuple(inv))


def compose_all(maps: Sequence[PartialBijection], ground: GroundSet) -> PartialBijection:
    """Compose left to right as written, so the last map is applied first."""
    out = PartialBijection.identity(ground)
    for m in maps:
        out = compose(out, m)
    return out


class FiniteInverseSemigroup:
    """A finite unital inverse semigroup given by tables over element ids ``0..k-1``.

    ``labels`` are display names. ``embedding``, when present, realizes element
    ``i`` as a partial bijection of a ground set.
    """

    def __init__(
        self,
        labels: Sequence[str],
        mult: Sequence[Sequence[int]],
        inv: Sequence[int],
        unit: int,
        embedding: Sequence[PartialBijection] | None = None,
    ):
        k = len(labels)
        if k == 0:
            raise StructuralError("semigroup must have at least one element")
        if len(set(labels)) != k:
            raise StructuralError("duplicate element labels")
        if len(mult) != k or any(len(row) != k for row in mult):
            raise StructuralError(f"multiplication table must be {k}x{k}")
        if len(inv) != k:
            raise StructuralError("involution table has wrong length")
        entries = [v for row in mult for v in row] + list(inv) + [unit]
        if any(not (isinstance(v, int) and 0 <= v < k) for v in entries):
            raise StructuralError("table entry out of range")
        if embedding is not None and len(embedding) != k:
            raise StructuralError("embedding must list one partial bijection per element")
        self.labels = tuple(labels)
        self.mult = tuple(tuple(row) for row in mult)
        self.inv = tuple(inv)
        self.unit = unit
        self.embedding = None if embedding is None else tuple(embedding)
        self._index = {name: i for i, name in enumerate(self.labels)}

    @classmethod
    def from_table(cls, labels, mult, inv, unit, validate: bool = True) -> FiniteInverseSemigroup:
        S = cls(labels, mult, inv, unit)
        if validate:
            report = check_laws(S)
            if not report.passed:
                first = report.failures[0]
                raise StructuralError(f"not a unital inverse semigroup: {first.check} fails at {first.witness}")
        return S

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(range(len(self.labels)))

    def __repr__(self) -> str:
        return f"FiniteInverseSemigroup({len(self)} elements)"

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise StructuralError(f"unknown semigroup element {label!r}") from None

    def mul(self, s: int, t: int) -> int:
        return self.mult[s][t]

    def product(self, word: Sequence[int]) -> int:
        out = self.unit
        for s in word:
            out = self.mult[out][s]
        return out

    def star(self, s: int) -> int:
        return self.inv[s]

    def is_idempotent(self, s: int) -> bool:
        return self.mult[s][s] == s

    def word_label(self, word: Sequence[int]) -> str:
        return ".".join(self.labels[s] for s in word)


def check_laws(S: FiniteInverseSemigroup) -> ValidationReport:
    """Exhaustively check associativity, the involution laws, commuting idempotents and the unit."""
    r = ValidationReport()
    m, inv, L = S.mult, S.inv, S.labels
    for s, t, u in itertools.product(S, repeat=3):
        if not r.expect(m[m[s][t]][u] == m[s][m[t][u]], "associativity", s=L[s], t=L[t], u=L[u]):
            break
    for s in S:
        si = inv[s]
        r.expect(m[m[s][si]][s] == s, "regularity", s=L[s])
        r.expect(m[m[si][s]][si] == si, "inverse-regularity", s=L[s])
        r.expect(inv[si] == s, "involution", s=L[s])
        r.expect(m[S.unit][s] == s and m[s][S.unit] == s, "unit", s=L[s])
    idem = [s for s in S if m[s][s] == s]
    for f, g in itertools.combinations(idem, 2):
        r.expect(m[f][g] == m[g][f], "idempotents-commute", f=L[f], g=L[g])
    return r


def idempotents(S: FiniteInverseSemigroup) -> frozenset[int]:
    out = frozenset(s for s in S if S.mult[s][s] == s)
    assert all(S.inv[s] == s for s in out)
    return out


def natural_leq(S: FiniteInverseSemigroup, s: int, t: int) -> bool:
    """``s <= t`` iff ``s = f t`` for an idempotent ``f``; cross-checked against ``s = s s* t``."""
    by_idempotent = any(S.mult[f][t] == s for f in idempotents(S))
    by_formula = S.mult[S.mult[s][S.inv[s]]][t] == s
    if by_idempotent != by_formula:
        raise AssertionError(f"natural order characterizations disagree at ({S.labels[s]}, {S.labels[t]})")
    return by_formula


def is_semilattice(S: FiniteInverseSemigroup) -> bool:
    if len(idempotents(S)) != len(S):
        return False
    assert all(S.mult[s][t] == S.mult[t][s] for s in S for t in S)
    return True


def generate_semigroup(
    gens: Sequence[PartialBijection],
    names: Sequence[str] | None = None,
    unit_name: str = "e",
) -> FiniteInverseSemigroup:
    """Close ``gens`` under composition and inversion inside I(X), adjoining ``id_X``.

    Element ids follow the sorted order of image arrays. Labels are the
    generator names where available, otherwise a shortest word over the
    generators and their inverses (``g*``) found by breadth-first search.
    """
    if not gens:
        raise StructuralError("need at least one generator")
    ground = gens[0].ground
    if any(g.ground != ground for g in gens):
        raise StructuralError("generators live on different ground sets")
    if names is None:
        names = [f"g{i}" for i in range(len(gens))]
    if len(names) != len(gens):
        raise StructuralError("one name per generator required")

    word_of: dict[PartialBijection, str] = {}
    letters: list[tuple[str, PartialBijection]] = []
    for name, g in zip(names, gens):
        letters.append((name, g))
    for name, g in zip(names, gens):
        letters.append((name + "*", invert(g)))
    for name, g in letters:
        word_of.setdefault(g, name)

    queue = deque(word_of)
    while queue:
        x = queue.popleft()
        for name, g in letters:
            y = compose(x, g)
            if y not in word_of:
                word_of[y] = word_of[x] + "." + name
                queue.append(y)
    ident = PartialBijection.identity(ground)
    if ident not in gens:
        word_of[ident] = unit_name

    elements = sorted(word_of, key=PartialBijection.sort_key)
    index = {p: i for i, p in enumerate(elements)}
    mult = [[index[compose(s, t)] for t in elements] for s in elements]
    inv = [index[invert(s)] for s in elements]
    labels = _dedupe([word_of[p] for p in elements])
    return FiniteInverseSemigroup(labels, mult, inv, index[ident], embedding=elements)


def _dedupe(labels: list[str]) -> list[str]:
    seen: dict[str, int] = {}
    out = []
    for lab in labels:
        if lab in seen:
            seen[lab] += 1
            lab = f"{lab}#{seen[lab]}"
        else:
            seen[lab] = 0
        out.append(lab)
    return out
