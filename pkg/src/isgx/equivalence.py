"""Comparison of the crossed product by G with the crossed product by the lifted semigroup S_G."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .action import DEFAULT_TOL, PartialAction, indicator
from .covrep import MatrixRep, direct_sum, opnorm
from .crossed import RepFamily, block_multiset, image_algebra, integration_matrix, numerical_rank
from .errors import PreconditionError
from .lalgebra import LAlgebra, delta
from .lift import LiftedSemigroup, beta_action, nu_from_u, omega_from_z
from .report import ValidationReport


@dataclass
class EquivalenceReport:
    dims: tuple[int, int] = (0, 0)
    g_in_s: bool = False
    s_in_g: bool = False
    theta_well_defined: bool | None = None
    theta_iso: bool | None = None
    faithful_hypothesis: bool | None = None
    blocks_g: list[int] = field(default_factory=list)
    blocks_s: list[int] = field(default_factory=list)
    checks: ValidationReport = field(default_factory=ValidationReport)

    @property
    def span_equal(self) -> bool:
        return self.g_in_s and self.s_in_g and self.dims[0] == self.dims[1]

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "span_equal": self.span_equal,
            "g_side_in_s_side": self.g_in_s,
            "s_side_in_g_side": self.s_in_g,
            "faithful_hypothesis": self.faithful_hypothesis,
            "theta_well_defined": self.theta_well_defined,
            "theta_iso": self.theta_iso,
            "blocks_g": block_multiset(self.blocks_g),
            "blocks_s": block_multiset(self.blocks_s),
            "checks": self.checks.to_dict(),
        }


def _orthonormal_span(vectors: Sequence[np.ndarray], tol: float) -> np.ndarray:
    if not vectors:
        return np.zeros((0, 0), dtype=complex)
    M = np.stack(vectors, axis=1)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    return U[:, : numerical_rank(s, tol)]


def _outside(Q: np.ndarray, v: np.ndarray) -> float:
    if Q.size == 0:
        return float(np.linalg.norm(v))
    return float(np.linalg.norm(v - Q @ (Q.conj().T @ v)))


def span_equality(pa: PartialAction, rep: MatrixRep, sg: LiftedSemigroup, tol: float = DEFAULT_TOL) -> EquivalenceReport:
    """Compare ``span{rho(a) omega_g}`` (a in D_g) with ``span{rho(a) z_s}`` (a in E_s), both containments separately."""
    z = nu_from_u(sg)
    omega = omega_from_z(sg, z, tol)
    G, S = pa.semigroup, sg.semigroup
    g_side = [(f"{pa.ground.points[x]}@{G.labels[g]}", (omega.pi(indicator([x], pa.n)) @ omega.u[g]).ravel())
              for g in G for x in sorted(pa.ideals[g])]
    s_side = [(f"{pa.ground.points[x]}@{S.labels[s]}", (z.pi(indicator([x], pa.n)) @ z.u[s]).ravel())
              for s in S for x in sorted(sg.elements[s].support)]
    Qg = _orthonormal_span([v for _, v in g_side], tol)
    Qs = _orthonormal_span([v for _, v in s_side], tol)
    out = EquivalenceReport(dims=(Qg.shape[1], Qs.shape[1]))
    r = out.checks
    out.g_in_s = out.s_in_g = True
    for lab, v in g_side:
        res = _outside(Qs, v)
        out.g_in_s &= r.expect(res <= tol, "g-side-in-s-side", res, generator=lab)
    for lab, v in s_side:
        res = _outside(Qg, v)
        out.s_in_g &= r.expect(res <= tol, "s-side-in-g-side", res, generator=lab)
    r.expect(out.dims[0] == out.dims[1], "span-dimensions", dims=list(out.dims))
    return out


def _rank(M: np.ndarray, tol: float) -> int:
    if M.size == 0:
        return 0
    return numerical_rank(np.linalg.svd(M, compute_uv=False), tol)


def _same_rep(a: MatrixRep, b: MatrixRep, tol: float) -> bool:
    return a is b or (
        a.labeling == b.labeling and len(a.u) == len(b.u)
        and all(opnorm(x - y) <= tol for x, y in zip(a.u, b.u))
    )


def theta_check(pa: PartialAction, rep: MatrixRep, sg: LiftedSemigroup,
                family_g: RepFamily | None = None, family_s: RepFamily | None = None,
                tol: float = DEFAULT_TOL, seed: int = 0) -> EquivalenceReport:
    """Build ``Theta = (rho x omega) o (pi x u)^{-1}`` and test that it is an isomorphism.

    ``family_s`` is a family of covariant representations ``z`` of S_G; the
    G-side targets use ``omega = z(alpha_g, u_g)``.  The faithfulness
    hypothesis on ``pi x u`` is checked relative to ``family_g`` and reported,
    not raised.
    """
    family_g = family_g or RepFamily(pa, [rep], tol)
    if not any(_same_rep(rep, r, tol) for r in family_g):
        raise PreconditionError("family_g must contain the representation used to build S_G")
    beta = beta_action(sg)
    family_s = family_s or RepFamily(beta, [nu_from_u(sg)], tol)

    LG, LS = LAlgebra(pa, tol), LAlgebra(beta, tol)
    omegas = [omega_from_z(sg, z, tol) for z in family_s]
    M_pu = integration_matrix(rep, LG)
    M_fg = integration_matrix(family_g.combined, LG)
    M_om = integration_matrix(direct_sum(*omegas) if len(omegas) > 1 else omegas[0], LG)
    M_fs = integration_matrix(family_s.combined, LS)
    r_pu = _rank(M_pu, tol)

    out = span_equality(pa, rep, sg, tol)
    r = out.checks
    out.faithful_hypothesis = r.expect(_rank(np.vstack([M_pu, M_fg]), tol) == r_pu, "faithful-hypothesis",
                                       rank_pi_u=r_pu, rank_joint=_rank(np.vstack([M_pu, M_fg]), tol))
    joint = _rank(np.vstack([M_pu, M_om]), tol)
    out.theta_well_defined = r.expect(joint == r_pu, "theta-well-defined", rank_pi_u=r_pu, rank_joint=joint)

    # Theta on generators (pi x nu)(a delta_s) for a in a basis of E_s
    nu = nu_from_u(sg)
    S = sg.semigroup
    m_s = family_s.combined.dim
    for s in S:
        for x in sorted(sg.elements[s].support):
            target = (nu.pi(indicator([x], pa.n)) @ nu.u[s]).ravel()
            coef, *_ = np.linalg.lstsq(M_pu, target, rcond=None)
            res = float(np.linalg.norm(M_pu @ coef - target))
            label = f"{pa.ground.points[x]}@{S.labels[s]}"
            if not r.expect(res <= tol, "theta-preimage", res, generator=label):
                continue
            theta = M_om @ coef
            expected = M_fs @ delta(LS, indicator([x], pa.n), s).vec
            res = opnorm((theta - expected).reshape(m_s, m_s))
            r.expect(res <= tol, "theta-on-generators", res, generator=label)

    injective = _rank(M_om, tol) == r_pu and joint == r_pu
    surjective = _rank(np.hstack([M_om, M_fs]), tol) == _rank(M_fs, tol) == _rank(M_om, tol)
    r.expect(injective, "theta-injective", rank_pi_u=r_pu, rank_omega=_rank(M_om, tol))
    r.expect(surjective, "theta-surjective", rank_omega=_rank(M_om, tol), rank_s=_rank(M_fs, tol))

    out.blocks_g = image_algebra(RepFamily(pa, [rep], tol), LG, seed).blocks
    out.blocks_s = image_algebra(family_s, LS, seed).blocks
    out.theta_iso = bool(out.theta_well_defined and injective and surjective)
    if out.theta_iso:
        r.expect(sorted(out.blocks_g) == sorted(out.blocks_s), "block-multisets",
                 blocks_g=out.blocks_g, blocks_s=out.blocks_s)
    return out
