"""Covariant representations (pi, u, H) on finite-dimensional Hilbert spaces.

``pi`` is always diagonal: basis vector ``i`` carries a point ``labeling[i]`` of
X and ``pi(a)`` multiplies it by ``a(labeling[i])``.  Any nondegenerate
finite-dimensional representation of C(X) is unitarily equivalent to one of
these, and the projection onto ``pi(D)H`` becomes a 0/1 diagonal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag

from .action import DEFAULT_TOL, PartialAction, domain_formula, indicator, range_formula, words
from .errors import ResourceError, StructuralError
from .report import ValidationReport


def opnorm(M: np.ndarray) -> float:
    if not M.size or not M.any():
        return 0.0
    return float(np.linalg.norm(M, 2))


@dataclass(frozen=True, eq=False)
class MatrixRep:
    labeling: tuple[int, ...]
    u: tuple[np.ndarray, ...]
    name: str = "rep"

    def __post_init__(self):
        m = len(self.labeling)
        for k, mat in enumerate(self.u):
            if mat.shape != (m, m):
                raise StructuralError(f"{self.name}: u[{k}] has shape {mat.shape}, expected {(m, m)}")

    @property
    def dim(self) -> int:
        return len(self.labeling)

    def pi(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=complex)
        return np.diag(a[list(self.labeling)])

    def projection(self, support) -> np.ndarray:
        """Orthogonal projection onto ``pi(D)H`` for the coordinate ideal with this support."""
        return np.diag([1.0 + 0j if x in support else 0j for x in self.labeling])

    def word(self, word: Sequence[int]) -> np.ndarray:
        out = np.eye(self.dim, dtype=complex)
        for s in word:
            out = out @ self.u[s]
        return out


def regular_rep(pa: PartialAction) -> MatrixRep:
    """Partial permutation matrices of the ``alpha_g`` on ``l^2(X)``."""
    n = pa.n
    mats = []
    for m in pa.maps:
        U = np.zeros((n, n), dtype=complex)
        for x, y in enumerate(m.image):
            if y is not None:
                U[y, x] = 1.0
        mats.append(U)
    return MatrixRep(tuple(range(n)), tuple(mats), name="regular")


def direct_sum(*reps: MatrixRep, name: str | None = None) -> MatrixRep:
    if not reps:
        raise StructuralError("direct sum of nothing")
    k = len(reps[0].u)
    if any(len(r.u) != k for r in reps):
        raise StructuralError("direct summands act on different semigroups")
    labeling = tuple(x for r in reps for x in r.labeling)
    u = tuple(block_diag(*(r.u[g] for r in reps)).astype(complex) for g in range(k))
    return MatrixRep(labeling, u, name=name or "+".join(r.name for r in reps))


def _check_shapes(pa: PartialAction, rep: MatrixRep) -> None:
    if len(rep.u) != len(pa.semigroup):
        raise StructuralError(f"{rep.name}: {len(rep.u)} matrices for {len(pa.semigroup)} semigroup elements")
    if any(not 0 <= x < pa.n for x in rep.labeling):
        raise StructuralError(f"{rep.name}: labeling refers to a point outside the ground set")


def validate_covariant(pa: PartialAction, rep: MatrixRep, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check every clause of covariance for all elements and pairs, in operator norm."""
    _check_shapes(pa, rep)
    r = ValidationReport()
    S, L = pa.semigroup, pa.semigroup.labels
    I = np.eye(rep.dim)
    for g in S:
        U, gs = rep.u[g], S.inv[g]
        res = opnorm(U @ U.conj().T @ U - U)
        r.expect(res <= tol, "partial-isometry", res, g=L[g])
        res = opnorm(U.conj().T @ U - rep.projection(pa.ideals[gs]))
        r.expect(res <= tol, "initial-space", res, g=L[g])
        res = opnorm(U @ U.conj().T - rep.projection(pa.ideals[g]))
        r.expect(res <= tol, "final-space", res, g=L[g])
        for x in sorted(pa.ideals[gs]):
            a = indicator([x], pa.n)
            lhs = U @ rep.pi(a) @ rep.u[gs]
            rhs = rep.pi(indicator([pa.maps[g](x)], pa.n))
            res = opnorm(lhs - rhs)
            r.expect(res <= tol, "covariance", res, g=L[g], a=pa.ground.points[x])
        res = opnorm(rep.u[gs] - U.conj().T)
        r.expect(res <= tol, "adjoint", res, g=L[g])
    for s, t in itertools.product(S, repeat=2):
        ts = S.mult[S.inv[t]][S.inv[s]]
        P = rep.projection(pa.ideals[S.inv[t]] & pa.ideals[ts])
        res = opnorm((rep.u[S.mult[s][t]] - rep.u[s] @ rep.u[t]) @ P)
        r.expect(res <= tol, "multiplicativity", res, s=L[s], t=L[t])
    res = opnorm(rep.u[S.unit] - I)
    r.expect(res <= tol, "unit", res)
    return r


def word_isometry_check(pa: PartialAction, rep: MatrixRep, word: Sequence[int], tol: float = DEFAULT_TOL) -> ValidationReport:
    """``W = u_{s1}...u_{sn}`` is a partial isometry with the predicted initial and final spaces.

    The final projection ``W W*`` is matched against ``D_{s1} D_{s1 s2} ...``
    and the initial projection ``W* W`` against ``D_{sn*} D_{sn* s(n-1)*} ...``.
    """
    r = ValidationReport()
    label = pa.semigroup.word_label(word)
    W = rep.word(word)
    Wh = W.conj().T
    res = opnorm(W @ Wh @ W - W)
    r.expect(res <= tol, "word-partial-isometry", res, word=label)
    final = rep.projection(range_formula(pa, word))
    initial = rep.projection(domain_formula(pa, word))
    res = opnorm(W @ Wh - final)
    r.expect(res <= tol, "word-final-space", res, word=label)
    res = opnorm(Wh @ W - initial)
    r.expect(res <= tol, "word-initial-space", res, word=label)
    # the alternative reading assigns the range product to the initial space
    if len(word) > 1 and opnorm(Wh @ W - final) > tol and opnorm(W @ Wh - final) <= tol:
        r.notes.append(f"word {label}: range product matches W W* (final space), not W* W")
    return r


def word_identity_check(pa: PartialAction, rep: MatrixRep, word: Sequence[int], tol: float = DEFAULT_TOL) -> ValidationReport:
    """``u_{s1...sn} h = u_{s1}...u_{sn} h`` on the initial space and ``pi(a) u_{s1...sn} = pi(a) W`` on the range ideal."""
    r = ValidationReport()
    S = pa.semigroup
    label = S.word_label(word)
    W = rep.word(word)
    diff = rep.u[S.product(word)] - W
    for x in sorted(domain_formula(pa, word)):
        h = rep.projection([x])
        res = opnorm(diff @ h)
        r.expect(res <= tol, "word-identity-vectors", res, word=label, h=pa.ground.points[x])
    for x in sorted(range_formula(pa, word)):
        res = opnorm(rep.pi(indicator([x], pa.n)) @ diff)
        r.expect(res <= tol, "word-identity-left", res, word=label, a=pa.ground.points[x])
    return r


def word_suite(pa: PartialAction, rep: MatrixRep, max_len: int = 3, tol: float = DEFAULT_TOL) -> ValidationReport:
    r = ValidationReport()
    for w in words(pa.semigroup, max_len):
        r.extend(word_isometry_check(pa, rep, w, tol))
        r.extend(word_identity_check(pa, rep, w, tol))
    return r


def matrix_closure(mats: Sequence[np.ndarray], tol: float = DEFAULT_TOL, budget: int = 100_000) -> list[np.ndarray]:
    """Close a finite set of matrices under multiplication, deduplicating within ``tol``."""
    found: list[np.ndarray] = []

    def add(M) -> bool:
        if any(opnorm(F - M) <= tol for F in found):
            return False
        if len(found) >= budget:
            raise ResourceError(f"matrix closure exceeded {budget} elements")
        found.append(M)
        return True

    queue = [M for M in mats if add(M)]
    while queue:
        queue = [M @ G for M in queue for G in mats if add(M @ G)]
    return found


def check_isometry_semigroup(pa: PartialAction, rep: MatrixRep, tol: float = DEFAULT_TOL) -> ValidationReport:
    """The products of the ``u_g`` form a unital inverse semigroup of partial isometries."""
    r = ValidationReport()
    elems = matrix_closure(rep.u, tol)
    I = np.eye(rep.dim)
    r.expect(any(opnorm(M - I) <= tol for M in elems), "isometry-semigroup-unit")

    def member(M):
        return any(opnorm(M - E) <= tol for E in elems)

    projs = []
    for k, M in enumerate(elems):
        Mh = M.conj().T
        res = opnorm(M @ Mh @ M - M)
        r.expect(res <= tol, "isometry-semigroup-partial-isometry", res, element=k)
        r.expect(member(Mh), "isometry-semigroup-adjoint-closed", element=k)
        projs.append(M @ Mh)
    for i, j in itertools.combinations(range(len(projs)), 2):
        res = opnorm(projs[i] @ projs[j] - projs[j] @ projs[i])
        r.expect(res <= tol, "isometry-semigroup-idempotents-commute", res, pair=[i, j])
    r.notes.append(f"matrix semigroup has {len(elems)} elements")
    return r
