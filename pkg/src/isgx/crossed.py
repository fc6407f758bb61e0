"""Integrated representations and the crossed product relative to a family of covariant representations.

The seminorm ``||x|| = max ||(pi x nu)(x)||`` runs over a declared finite family
instead of all covariant representations, so everything computed here is a
quotient of the universal crossed product.  In finite dimensions the
completion of ``L/N`` is the image of ``L`` under the direct sum of the
family's integrated forms, a finite-dimensional C*-algebra of matrices.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .action import DEFAULT_TOL, PartialAction, indicator
from .covrep import MatrixRep, direct_sum, opnorm, validate_covariant
from .errors import PreconditionError, StructuralError
from .lalgebra import LAlgebra, LElement, convolve, delta, star
from .report import ValidationReport
from .semigroup import is_semilattice, natural_leq


class RepFamily:
    """A nonempty list of covariant representations of one action, validated on construction."""

    def __init__(self, pa: PartialAction, reps: Sequence[MatrixRep], tol: float = DEFAULT_TOL):
        if not reps:
            raise PreconditionError("representation family must be nonempty")
        for rep in reps:
            report = validate_covariant(pa, rep, tol)
            if not report.passed:
                f = report.failures[0]
                raise PreconditionError(f"{rep.name} is not covariant: {f.check} at {f.witness}")
        self.pa = pa
        self.reps = tuple(reps)
        self.tol = tol
        self.combined = direct_sum(*self.reps, name="family") if len(reps) > 1 else self.reps[0]
        self.slices = []
        start = 0
        for rep in self.reps:
            self.slices.append(slice(start, start + rep.dim))
            start += rep.dim

    def __len__(self) -> int:
        return len(self.reps)

    def __iter__(self):
        return iter(self.reps)

    @property
    def names(self) -> list[str]:
        return [r.name for r in self.reps]


def integrate(rep: MatrixRep, x: LElement) -> np.ndarray:
    """``(pi x nu)(x) = sum_s pi(x(s)) nu_s``."""
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for g, a in x.coeffs().items():
        out += rep.pi(a) @ rep.u[g]
    return out


def integration_matrix(rep: MatrixRep, alg: LAlgebra) -> np.ndarray:
    """Columns are the vectorized images of the basis of L."""
    cols = [integrate(rep, alg.basis_element(i)).ravel() for i in range(alg.dim)]
    if not cols:
        return np.zeros((rep.dim * rep.dim, 0), dtype=complex)
    return np.stack(cols, axis=1)


def numerical_rank(s: np.ndarray, tol: float) -> int:
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


def verify_integrated(rep: MatrixRep, alg: LAlgebra, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Multiplicativity and *-preservation on basis pairs, and unitality."""
    r = ValidationReport()
    basis = [alg.basis_element(i) for i in range(alg.dim)]
    imgs = [integrate(rep, b) for b in basis]
    for i, j in itertools.product(range(alg.dim), repeat=2):
        res = opnorm(integrate(rep, convolve(basis[i], basis[j])) - imgs[i] @ imgs[j])
        r.expect(res <= tol, "integrated-multiplicative", res, pair=[alg.label(i), alg.label(j)])
    for i in range(alg.dim):
        res = opnorm(integrate(rep, star(basis[i])) - imgs[i].conj().T)
        r.expect(res <= tol, "integrated-star", res, element=alg.label(i))
    res = opnorm(integrate(rep, alg.unit()) - np.eye(rep.dim))
    r.expect(res <= tol, "integrated-unital", res)
    return r


def seminorm(family: RepFamily, x: LElement) -> float:
    return max(opnorm(integrate(rep, x)) for rep in family)


def null_space(family: RepFamily, alg: LAlgebra) -> list[LElement]:
    """Orthonormal coordinate basis of ``N = {x : ||x|| = 0}``."""
    M = integration_matrix(family.combined, alg)
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    rank = numerical_rank(s, family.tol)
    return [LElement(alg, Vh[k].conj()) for k in range(rank, alg.dim)]


@dataclass
class ImageAlgebra:
    """The image of L in the family's direct sum: an orthonormal matrix basis and its Wedderburn blocks."""

    family: RepFamily
    algebra: LAlgebra
    basis: list[np.ndarray]
    blocks: list[int] = field(default_factory=list)
    central_projections: list[np.ndarray] = field(default_factory=list)
    dim_null: int = 0

    @property
    def ambient_dim(self) -> int:
        return self.family.combined.dim

    @property
    def dim(self) -> int:
        return len(self.basis)

    def phi(self, x: LElement) -> np.ndarray:
        """The quotient map ``L -> L/N``, realized in the family's direct sum."""
        return integrate(self.family.combined, x)

    def coords(self, M: np.ndarray) -> np.ndarray:
        return np.array([np.vdot(B, M) for B in self.basis])

    def residual(self, M: np.ndarray) -> float:
        """Distance (Frobenius) from ``M`` to the span of the basis."""
        if not self.basis:
            return float(np.linalg.norm(M))
        return float(np.linalg.norm(M - sum(c * B for c, B in zip(self.coords(M), self.basis))))


def image_algebra(family: RepFamily, alg: LAlgebra, seed: int = 0) -> ImageAlgebra:
    M = integration_matrix(family.combined, alg)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    rank = numerical_rank(s, family.tol)
    m = family.combined.dim
    basis = [U[:, k].reshape(m, m) for k in range(rank)]
    img = ImageAlgebra(family, alg, basis, dim_null=alg.dim - rank)
    tol = family.tol
    scale = max(1.0, float(s[0])) if s.size else 1.0
    for A, B in itertools.product(basis, repeat=2):
        if img.residual(A @ B) > tol * scale:
            raise StructuralError("image of L is not closed under multiplication")
    for A in basis:
        if img.residual(A.conj().T) > tol * scale:
            raise StructuralError("image of L is not closed under adjoints")
    if img.residual(np.eye(m)) > tol * scale:
        raise StructuralError("image of L does not contain the identity")
    img.blocks, img.central_projections = wedderburn_blocks(basis, seed=seed, tol=tol)
    return img


def center_basis(basis: Sequence[np.ndarray], tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Solve ``[c, B_i] = 0`` for ``c`` in the span of ``basis``."""
    d = len(basis)
    if d == 0:
        return []
    cols = []
    for Bk in basis:
        cols.append(np.concatenate([(Bk @ Bi - Bi @ Bk).ravel() for Bi in basis]))
    K = np.stack(cols, axis=1)
    _, s, Vh = np.linalg.svd(K, full_matrices=True)
    rank = numerical_rank(s, tol)
    out = []
    for row in Vh[rank:]:
        coeffs = row.conj()
        out.append(sum(c * B for c, B in zip(coeffs, basis)))
    return out


def wedderburn_blocks(basis: Sequence[np.ndarray], seed: int = 0, tol: float = DEFAULT_TOL):
    """Matrix-block sizes of a unital *-algebra of matrices given by an orthonormal basis.

    A random self-adjoint central element (fixed seed) is diagonalized; its
    eigenvalue clusters give the minimal central projections ``P`` and the
    block size is ``sqrt(dim P A P)``.
    """
    if not basis:
        return [], []
    m = basis[0].shape[0]
    center = center_basis(basis, tol)
    rng = np.random.default_rng(seed)
    for _ in range(8):
        c = sum(complex(rng.standard_normal(), rng.standard_normal()) * Z for Z in center)
        h = (c + c.conj().T) / 2
        w, V = np.linalg.eigh(h)
        clusters = [[0]]
        gap = 1e-6 * max(1.0, float(np.max(np.abs(w))))
        for k in range(1, m):
            if w[k] - w[k - 1] > gap:
                clusters.append([])
            clusters[-1].append(k)
        if len(clusters) == len(center):
            break
    else:
        raise StructuralError("could not separate the minimal central projections")

    blocks, projections = [], []
    for cl in clusters:
        P = V[:, cl] @ V[:, cl].conj().T
        corner = np.stack([(P @ B @ P).ravel() for B in basis], axis=1)
        cdim = numerical_rank(np.linalg.svd(corner, compute_uv=False), tol)
        d = int(round(np.sqrt(cdim)))
        if d * d != cdim:
            raise StructuralError(f"corner of dimension {cdim} is not a full matrix block")
        blocks.append(d)
        projections.append(P)
    if sum(d * d for d in blocks) != len(basis):
        raise StructuralError(f"block sizes {blocks} do not account for dimension {len(basis)}")
    order = sorted(range(len(blocks)), key=lambda k: (blocks[k], k))
    return [blocks[k] for k in order], [projections[k] for k in order]


def block_multiset(blocks: Sequence[int]) -> dict[int, int]:
    return dict(sorted(Counter(blocks).items()))


def order_collapse_check(family: RepFamily, alg: LAlgebra, s: int, t: int) -> ValidationReport:
    """``Phi(a delta_s) = Phi(a delta_t)`` for ``s <= t`` and ``a`` in a basis of ``E_s``."""
    S = alg.pa.semigroup
    if not natural_leq(S, s, t):
        raise PreconditionError(f"{S.labels[s]} is not below {S.labels[t]} in the natural order")
    r = ValidationReport()
    pa = alg.pa
    for x in sorted(pa.ideals[s]):
        a = indicator([x], pa.n)
        if x not in pa.ideals[t]:
            r.fail("support-containment", s=S.labels[s], t=S.labels[t], a=pa.ground.points[x])
            continue
        diff = delta(alg, a, s) - delta(alg, a, t)
        for rep in family:
            res = opnorm(integrate(rep, diff))
            r.expect(res <= family.tol, "order-collapse", res, s=S.labels[s], t=S.labels[t],
                     a=pa.ground.points[x], rep=rep.name)
    return r


def comparable_pairs(S) -> list[tuple[int, int]]:
    return [(s, t) for s in S for t in S if s != t and natural_leq(S, s, t)]


def semilattice_iso_check(family: RepFamily, alg: LAlgebra, seed: int = 0,
                          image: ImageAlgebra | None = None) -> ValidationReport:
    """For a semilattice, the image algebra is C(X); ``psi1``/``psi2`` are materialized and inverted."""
    pa = alg.pa
    S = pa.semigroup
    if not is_semilattice(S):
        raise PreconditionError("semigroup is not a semilattice")
    img = image or image_algebra(family, alg, seed)
    n, tol = pa.n, family.tol
    r = ValidationReport()
    r.expect(img.dim == n, "semilattice-dimension", dim=img.dim, expected=n)
    r.expect(img.blocks == [1] * n, "semilattice-blocks", blocks=img.blocks)

    def psi1(a):
        return img.phi(delta(alg, a, S.unit))

    # psi2 is pinned down by Phi(e_x delta_g) -> e_x over all generators
    gen_coords = np.stack([img.coords(img.phi(alg.basis_element(i))) for i in range(alg.dim)], axis=1)
    targets = np.stack([indicator([x], n) for (_, x) in alg.basis], axis=1)
    T, *_ = np.linalg.lstsq(gen_coords.T, targets.T, rcond=None)
    T = T.T
    res = float(np.max(np.abs(T @ gen_coords - targets))) if alg.dim else 0.0
    r.expect(res <= tol, "psi2-well-defined", res)
    for x in range(n):
        e = indicator([x], n)
        res = float(np.max(np.abs(T @ img.coords(psi1(e)) - e)))
        r.expect(res <= tol, "psi2-after-psi1", res, a=pa.ground.points[x])
    for k, B in enumerate(img.basis):
        res = opnorm(psi1(T[:, k]) - B)
        r.expect(res <= tol, "psi1-after-psi2", res, basis_index=k)
    return r


class ImageRep:
    """A linear map on the image algebra, given by its values on the orthonormal basis."""

    def __init__(self, image: ImageAlgebra, images: Sequence[np.ndarray], name: str = "Pi"):
        if len(images) != image.dim:
            raise StructuralError("one image matrix per basis element required")
        self.image = image
        self.images = [np.asarray(M, dtype=complex) for M in images]
        self.name = name
        self.dim = self.images[0].shape[0] if self.images else 0

    @classmethod
    def identity(cls, image: ImageAlgebra) -> ImageRep:
        return cls(image, list(image.basis), name="identity")

    @classmethod
    def compression(cls, image: ImageAlgebra, sl: slice, name: str = "compression") -> ImageRep:
        return cls(image, [B[sl, sl] for B in image.basis], name=name)

    @classmethod
    def amplification(cls, image: ImageAlgebra, copies: int = 2) -> ImageRep:
        return cls(image, [np.kron(np.eye(copies), B) for B in image.basis], name=f"identity^{copies}")

    def __call__(self, M: np.ndarray) -> np.ndarray:
        return sum(c * P for c, P in zip(self.image.coords(M), self.images))

    def validate(self, tol: float = DEFAULT_TOL) -> ValidationReport:
        r = ValidationReport()
        B = self.image.basis
        for k, l in itertools.product(range(len(B)), repeat=2):
            res = opnorm(self(B[k] @ B[l]) - self.images[k] @ self.images[l])
            r.expect(res <= tol, "Pi-multiplicative", res, pair=[k, l])
        for k in range(len(B)):
            res = opnorm(self(B[k].conj().T) - self.images[k].conj().T)
            r.expect(res <= tol, "Pi-star", res, basis_index=k)
        res = opnorm(self(np.eye(self.image.ambient_dim)) - np.eye(self.dim))
        r.expect(res <= tol, "Pi-unital", res)
        return r


def induced_covariant(Pi: ImageRep, tol: float = DEFAULT_TOL) -> MatrixRep:
    """Covariant representation induced by a unital *-representation of the image algebra.

    ``pi(a) = Pi(Phi(a delta_e))`` and ``nu_s = Pi(Phi(1_{E_s} delta_s)) P_{s*}``
    where ``1_{E_s}`` is the unit of the ideal and ``P_{s*}`` projects onto
    ``pi(E_{s*})H``.  When ``pi`` is not already diagonal the result is
    expressed in an orthonormal basis adapted to the points of X.
    """
    report = Pi.validate(tol)
    if not report.passed:
        raise PreconditionError(f"Pi is not a unital *-homomorphism: {report.failures[0].check}")
    img = Pi.image
    alg = img.algebra
    pa = alg.pa
    S = pa.semigroup
    m = Pi.dim
    point_proj = [Pi(img.phi(delta(alg, indicator([x], pa.n), S.unit))) for x in range(pa.n)]

    if all(opnorm(P - np.diag(np.diag(P))) <= tol for P in point_proj):
        labeling = []
        V = np.eye(m, dtype=complex)
        for i in range(m):
            hits = [x for x in range(pa.n) if abs(point_proj[x][i, i] - 1) <= tol]
            if len(hits) != 1:
                raise StructuralError(f"basis vector {i} is not carried by exactly one point")
            labeling.append(hits[0])
    else:
        labeling, cols = [], []
        for x, P in enumerate(point_proj):
            w, vecs = np.linalg.eigh((P + P.conj().T) / 2)
            for k in np.nonzero(w > 0.5)[0]:
                labeling.append(x)
                cols.append(vecs[:, k])
        V = np.stack(cols, axis=1)

    u = []
    for s in S:
        Es, Ess = pa.ideals[s], pa.ideals[S.inv[s]]
        nu = Pi(img.phi(delta(alg, indicator(Es, pa.n), s))) @ Pi(img.phi(delta(alg, indicator(Ess, pa.n), S.unit)))
        u.append(V.conj().T @ nu @ V)
    return MatrixRep(tuple(labeling), tuple(u), name=f"induced[{Pi.name}]")


def roundtrip_check(family: RepFamily, alg: LAlgebra, seed: int = 0, tol: float = 1e-12,
                    image: ImageAlgebra | None = None) -> ValidationReport:
    """Covariant reps -> integrated forms -> covariant reps, and back, on the declared family."""
    img = image or image_algebra(family, alg, seed)
    r = ValidationReport()
    for rep, sl in zip(family.reps, family.slices):
        back = induced_covariant(ImageRep.compression(img, sl, name=rep.name), family.tol)
        r.expect(back.labeling == rep.labeling, "roundtrip-pi", rep=rep.name)
        for g in alg.pa.semigroup:
            res = opnorm(back.u[g] - rep.u[g])
            r.expect(res <= tol, "roundtrip-nu", res, rep=rep.name, g=alg.pa.semigroup.labels[g])
    induced = induced_covariant(ImageRep.identity(img), family.tol)
    cov = validate_covariant(alg.pa, induced, family.tol)
    r.expect(cov.passed, "induced-covariant", checks=sorted(cov.failed_checks()))
    for i in range(alg.dim):
        b = alg.basis_element(i)
        res = opnorm(integrate(induced, b) - img.phi(b))
        r.expect(res <= tol, "roundtrip-generators", res, generator=alg.label(i))
    return r
