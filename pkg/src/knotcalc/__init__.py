"""Exact kernels for knot complements, group presentations and hyperbolic bounds."""

from .bounds import bound_constants, cgm_tube_radius, critical_cone_order, critical_geodesic_length, global_bounds, martin_cone_radius
from .errors import CertificateError, InputError, KnotcalcError, PrecisionError
from .handles import HandleCell, HandleComplex, bounded_cycle_generators, torsion_bound_check
from .jsj import (Cable, DecoratedTree, EnumerationBounds, HyperbolicCatalog, Hyperbolic, KeyChain, TorusKnot,
                  canonical_form, desatellite, enumerate_trees, graft, piece_stats, validate_tree,
                  winding_divisibility)
from .lattice import ExtendedLatticeElement, LatticeVector, find_zeta, phi_zeta, quotient_image, solve_diophantine
from .linalg import IntMatrix, adjugate, bounded_kernel_basis, determinant, smith_normal_form, torsion_orders
from .presentation import Presentation, normalize, parse_presentation, presentation_length, serialize, triangularize

__version__ = "0.1.0"

__all__ = [
    "Cable",
    "CertificateError",
    "DecoratedTree",
    "EnumerationBounds",
    "ExtendedLatticeElement",
    "HandleCell",
    "HandleComplex",
    "Hyperbolic",
    "HyperbolicCatalog",
    "InputError",
    "IntMatrix",
    "KeyChain",
    "KnotcalcError",
    "LatticeVector",
    "PrecisionError",
    "Presentation",
    "TorusKnot",
    "adjugate",
    "bound_constants",
    "bounded_cycle_generators",
    "bounded_kernel_basis",
    "canonical_form",
    "cgm_tube_radius",
    "critical_cone_order",
    "critical_geodesic_length",
    "desatellite",
    "determinant",
    "enumerate_trees",
    "find_zeta",
    "global_bounds",
    "graft",
    "martin_cone_radius",
    "normalize",
    "parse_presentation",
    "phi_zeta",
    "piece_stats",
    "presentation_length",
    "quotient_image",
    "serialize",
    "smith_normal_form",
    "solve_diophantine",
    "torsion_bound_check",
    "torsion_orders",
    "triangularize",
    "validate_tree",
    "winding_divisibility",
]
