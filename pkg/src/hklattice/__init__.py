"""Exact lattice toolkit for even indefinite lattices of hyper-Kähler type."""

__version__ = "0.1.0"

from .errors import (CapacityError, CertificateError, DomainError, InternalError, LatticeError,
                     OnWallError)
from .lattice import (GramLattice, LatticeVector, Sublattice, discriminant_group, divisibility,
                      eichler_transvection, hyperbolic_complement, is_primitive,
                      orthogonal_complement, pair, saturation, signature, span, square)
from .catalog import get as catalog_lattice, load_catalog, parse_blocks
from .walls import WallEntry, WallSpec, builtin_walls, load_walls, simple_walls
from .forms import (BinaryForm, DivisibilityRule, automorph, extremal_rays, find_wall_class,
                    has_isotropic_vector, primitive_representations, represents)
from .enumeration import EnumerationQuery, enumerate_definite, enumerate_separating_walls
from .cones import (BIR_FINITE, BIR_INFINITE, UNDETERMINED, chamber_decomposition_rank2,
                    in_movable_interior, in_positive_cone, rank2_cone_report)
from .schifo import (Q, SchifoParams, certify_avoidance, choose_m, construct_infinite_bir_lattice,
                     m1, validate_certificate)

__all__ = [
    "__version__",
    "LatticeError", "DomainError", "CapacityError", "CertificateError", "InternalError", "OnWallError",
    "GramLattice", "LatticeVector", "Sublattice", "discriminant_group", "divisibility",
    "eichler_transvection", "hyperbolic_complement", "is_primitive", "orthogonal_complement", "pair",
    "saturation", "signature", "span", "square",
    "catalog_lattice", "load_catalog", "parse_blocks",
    "WallEntry", "WallSpec", "builtin_walls", "load_walls", "simple_walls",
    "BinaryForm", "DivisibilityRule", "automorph", "extremal_rays", "find_wall_class",
    "has_isotropic_vector", "primitive_representations", "represents",
    "EnumerationQuery", "enumerate_definite", "enumerate_separating_walls",
    "BIR_FINITE", "BIR_INFINITE", "UNDETERMINED", "chamber_decomposition_rank2", "in_movable_interior",
    "in_positive_cone", "rank2_cone_report",
    "Q", "SchifoParams", "certify_avoidance", "choose_m", "construct_infinite_bir_lattice", "m1",
    "validate_certificate",
]
