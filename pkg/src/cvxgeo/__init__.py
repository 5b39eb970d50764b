"""Finite convex geometries.

Closure systems over small labelled ground sets, relatively convex subsets of
rational point configurations decided by exact linear programming, the
Caratheodory / Carousel / Sharp Carousel rules, and sublattice embeddings
between lattices of closed sets.
"""
from .closure import (
    ClosedFamily,
    ClosureReport,
    GroundSet,
    Subset,
    extreme_points,
    format_family,
    is_atomistic,
    is_closure_family,
    is_convex_geometry,
    parse_family,
    read_family,
    satisfies_anti_exchange,
    write_family,
)
from .errors import CapExceeded, CvxGeoError, FormatError, GroundSetMismatch, PreconditionError
from .geometry import (
    HullCertificate,
    PointConfig,
    build_geometry,
    caratheodory_witness,
    format_points,
    hull_membership,
    in_hull,
    orient,
    parse_points,
    point_in_triangle,
    read_points,
    relative_closure,
    segment_intersection,
    strictly_inside,
    write_points,
)
from .lattice import (
    EmbeddingMap,
    Lattice,
    build_lattice,
    count_subgeometry_embeddings,
    find_subgeometry_embedding,
    is_strong_extension,
    verify_embedding,
)
from .rules import (
    Rule,
    RuleVerdict,
    check_caratheodory,
    check_carousel,
    check_carousel_implies_caratheodory,
    check_rule,
    check_sharp_carousel_2,
    check_sharp_theorem_elementwise,
    replay_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
