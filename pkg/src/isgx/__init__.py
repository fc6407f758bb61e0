"""Crossed products by partial actions of finite inverse semigroups on C(X)."""

from .action import PartialAction, apply, composite, tautological_action, validate_axioms
from .covrep import MatrixRep, direct_sum, regular_rep, validate_covariant
from .crossed import RepFamily, image_algebra, integrate, null_space, seminorm
from .errors import DomainError, IsgxError, PreconditionError, ResourceError, ScenarioError, StructuralError
from .lalgebra import LAlgebra, LElement, convolve, delta, l1_norm, star
from .lift import beta_action, build_sg, nu_from_u, omega_from_z
from .report import ValidationReport
from .semigroup import (
    FiniteInverseSemigroup,
    GroundSet,
    PartialBijection,
    compose,
    generate_semigroup,
    idempotents,
    invert,
    is_semilattice,
    natural_leq,
)

__version__ = "0.1.0"
