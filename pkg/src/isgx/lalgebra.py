"""The convolution *-algebra L of a partial action on C(X).

An element of L assigns to each ``g`` a function ``x(g)`` supported in ``D_g``.
Coordinates are taken in the basis ``e_p delta_g`` (``p`` in ``D_g``), so
``dim L = sum_g |D_g|``.  Products are read off a sparse structure-constant
table computed once from the defining formula

    (x * y)(g) = sum_{hk = g} beta_h(beta_{h*}(x(h)) y(k)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .action import DEFAULT_TOL, PartialAction, apply, as_element, restrict_to
from .report import ValidationReport


class LAlgebra:
    def __init__(self, pa: PartialAction, tol: float = DEFAULT_TOL):
        self.pa = pa
        self.tol = tol
        S = pa.semigroup
        self.basis: tuple[tuple[int, int], ...] = tuple((g, x) for g in S for x in sorted(pa.ideals[g]))
        self.index = {b: i for i, b in enumerate(self.basis)}
        self._offsets = {}
        for i, (g, _) in enumerate(self.basis):
            self._offsets.setdefault(g, i)
        I, J, K, C = [], [], [], []
        for i, j in itertools.product(range(self.dim), repeat=2):
            prod = convolve_direct(self.basis_element(i), self.basis_element(j))
            for k in np.nonzero(np.abs(prod.vec) > 0)[0]:
                I.append(i)
                J.append(j)
                K.append(k)
                C.append(prod.vec[k])
        self._I, self._J, self._K = np.array(I, dtype=int), np.array(J, dtype=int), np.array(K, dtype=int)
        self._C = np.array(C, dtype=complex)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def structure_constants(self):
        """``(i, j, k, c)`` arrays: ``b_i * b_j`` has coefficient ``c`` on ``b_k``."""
        return self._I, self._J, self._K, self._C

    def zero(self) -> LElement:
        return LElement(self, np.zeros(self.dim, dtype=complex))

    def unit(self) -> LElement:
        return delta(self, np.ones(self.pa.n), self.pa.semigroup.unit)

    def basis_element(self, i: int) -> LElement:
        v = np.zeros(self.dim, dtype=complex)
        v[i] = 1.0
        return LElement(self, v)

    def from_coeffs(self, coeffs: dict[int, np.ndarray]) -> LElement:
        v = np.zeros(self.dim, dtype=complex)
        for g, a in coeffs.items():
            a = restrict_to(as_element(a, self.pa.n), self.pa.ideals[g], self.pa.ground, self.tol)
            for x in self.pa.ideals[g]:
                v[self.index[(g, x)]] += a[x]
        return LElement(self, v)

    def random(self, rng: np.random.Generator, density: float = 1.0) -> LElement:
        v = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
        if density < 1.0:
            v = v * (rng.random(self.dim) < density)
        return LElement(self, v)

    def label(self, i: int) -> str:
        g, x = self.basis[i]
        return f"{self.pa.ground.points[x]}@{self.pa.semigroup.labels[g]}"


@dataclass(frozen=True, eq=False)
class LElement:
    algebra: LAlgebra
    vec: np.ndarray

    def coeff(self, g: int) -> np.ndarray:
        pa = self.algebra.pa
        out = np.zeros(pa.n, dtype=complex)
        for x in pa.ideals[g]:
            out[x] = self.vec[self.algebra.index[(g, x)]]
        return out

    def coeffs(self) -> dict[int, np.ndarray]:
        """Nonzero coefficients keyed by semigroup element."""
        keys = sorted({g for (g, _), c in zip(self.algebra.basis, self.vec) if c != 0})
        return {g: self.coeff(g) for g in keys}

    def __add__(self, other: LElement) -> LElement:
        return LElement(self.algebra, self.vec + other.vec)

    def __sub__(self, other: LElement) -> LElement:
        return LElement(self.algebra, self.vec - other.vec)

    def __neg__(self) -> LElement:
        return LElement(self.algebra, -self.vec)

    def __mul__(self, c: complex) -> LElement:
        return LElement(self.algebra, complex(c) * self.vec)

    __rmul__ = __mul__

    def __matmul__(self, other: LElement) -> LElement:
        return convolve(self, other)

    def distance(self, other: LElement) -> float:
        return l1_norm(self - other)

    def to_json(self) -> dict[str, list[list[float]]]:
        S = self.algebra.pa.semigroup
        return {S.labels[g]: [[float(z.real), float(z.imag)] for z in a] for g, a in self.coeffs().items()}


def delta(alg: LAlgebra, a, g: int) -> LElement:
    """``a delta_g``; ``a`` must be supported in ``D_g``."""
    return alg.from_coeffs({g: a})


def convolve(x: LElement, y: LElement) -> LElement:
    alg = x.algebra
    I, J, K, C = alg.structure_constants
    out = np.zeros(alg.dim, dtype=complex)
    np.add.at(out, K, x.vec[I] * y.vec[J] * C)
    return LElement(alg, out)


def convolve_direct(x: LElement, y: LElement) -> LElement:
    """The defining formula, term by term through ``apply``."""
    alg = x.algebra
    pa = alg.pa
    S = pa.semigroup
    acc: dict[int, np.ndarray] = {}
    for h, xh in x.coeffs().items():
        pulled = apply(pa, S.inv[h], xh, alg.tol)
        for k, yk in y.coeffs().items():
            term = apply(pa, h, pulled * yk, alg.tol)
            g = S.mult[h][k]
            acc[g] = acc.get(g, 0) + term
    return alg.from_coeffs(acc)


def star(x: LElement) -> LElement:
    """``x*(g) = beta_g(conj(x(g*)))``."""
    alg = x.algebra
    pa = alg.pa
    S = pa.semigroup
    coeffs = x.coeffs()
    out = {}
    for g in S:
        src = coeffs.get(S.inv[g])
        if src is not None:
            out[g] = apply(pa, g, np.conj(src), alg.tol)
    return alg.from_coeffs(out)


def l1_norm(x: LElement) -> float:
    return float(sum(np.max(np.abs(a)) for a in x.coeffs().values()))


def regular_rank(alg: LAlgebra) -> int:
    """Rank of ``x -> (left multiplication by x)``; equals ``dim L`` because L is unital."""
    I, J, K, C = alg.structure_constants
    T = np.zeros((alg.dim, alg.dim, alg.dim), dtype=complex)
    np.add.at(T, (I, K, J), C)
    return int(np.linalg.matrix_rank(T.reshape(alg.dim, -1)))


def verify_banach_star_laws(
    alg: LAlgebra,
    product: Callable[[LElement, LElement], LElement] = convolve,
    tol: float = 1e-12,
    samples: int = 1000,
    seed: int = 0,
) -> ValidationReport:
    """Associativity on all basis triples, involution laws, unit, and norm inequalities.

    ``product`` can be swapped out to run the same battery against an
    alternative multiplication.
    """
    r = ValidationReport()
    n = alg.dim
    basis = [alg.basis_element(i) for i in range(n)]
    pairs = {(i, j): product(basis[i], basis[j]) for i, j in itertools.product(range(n), repeat=2)}
    for i, j, k in itertools.product(range(n), repeat=3):
        lhs = product(pairs[(i, j)], basis[k])
        rhs = product(basis[i], pairs[(j, k)])
        res = lhs.distance(rhs)
        r.expect(res <= tol, "associativity", res, triple=[alg.label(i), alg.label(j), alg.label(k)])

    one = alg.unit()
    for i in range(n):
        b = basis[i]
        res = max(product(one, b).distance(b), product(b, one).distance(b))
        r.expect(res <= tol, "unit", res, element=alg.label(i))
        sb = star(b)
        r.expect(star(sb).distance(b) <= tol, "involutive", star(sb).distance(b), element=alg.label(i))
        r.expect(abs(l1_norm(sb) - l1_norm(b)) <= tol, "isometric-involution", element=alg.label(i))
        for j in range(n):
            res = star(pairs[(i, j)]).distance(product(star(basis[j]), sb))
            r.expect(res <= tol, "antimultiplicative", res, pair=[alg.label(i), alg.label(j)])

    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x, y = alg.random(rng, 0.5), alg.random(rng, 0.5)
        lam = complex(rng.standard_normal(), rng.standard_normal())
        res = star(x + y).distance(star(x) + star(y))
        r.expect(res <= tol * (1 + l1_norm(x) + l1_norm(y)), "additive-involution", res)
        res = star(lam * x).distance(lam.conjugate() * star(x))
        r.expect(res <= tol * (1 + abs(lam) * l1_norm(x)), "conjugate-linear-involution", res)
        nxy, bound = l1_norm(product(x, y)), l1_norm(x) * l1_norm(y)
        r.expect(nxy <= bound * (1 + tol), "submultiplicative", nxy - bound)
        r.expect(abs(l1_norm(star(x)) - l1_norm(x)) <= tol * (1 + l1_norm(x)), "isometric-involution-sample")
    return r
