"""Exact lattice geometry for classifying hollow lattice 3-polytopes."""

from .catalog import catalog
from .classify import (
    Classification,
    PolygonClass,
    WidthResult,
    classify_3d,
    classify_polygon,
    is_cayley,
    lattice_width,
    projects_onto_2delta2,
)
from .equivalence import CanonicalForm, are_equivalent, canonical_form, embeds_into
from .formats import ParseError, parse_polytope
from .lattice import (
    UnimodularAffineMap,
    det,
    hermite_normal_form,
    primitive_part,
)
from .polytope import (
    Facet,
    LatticePointSet,
    Polytope,
    ResourceLimitError,
    degree,
    dilate,
    edges,
    hull,
    is_empty_polytope,
    is_white,
    lattice_points,
    normalized_volume,
    pick_identity_holds,
)
from .search import (
    CensusRecord,
    SearchReport,
    enumerate_simplices,
    hensley_apex_search,
    hollow_census,
    subpolytope_census,
    verify_haase_ziegler,
)

__all__ = [
    "CanonicalForm",
    "CensusRecord",
    "Classification",
    "Facet",
    "LatticePointSet",
    "ParseError",
    "PolygonClass",
    "Polytope",
    "ResourceLimitError",
    "SearchReport",
    "UnimodularAffineMap",
    "WidthResult",
    "are_equivalent",
    "canonical_form",
    "catalog",
    "classify_3d",
    "classify_polygon",
    "degree",
    "det",
    "dilate",
    "edges",
    "embeds_into",
    "enumerate_simplices",
    "hensley_apex_search",
    "hermite_normal_form",
    "hollow_census",
    "hull",
    "is_cayley",
    "is_empty_polytope",
    "is_white",
    "lattice_points",
    "lattice_width",
    "normalized_volume",
    "parse_polytope",
    "pick_identity_holds",
    "primitive_part",
    "projects_onto_2delta2",
    "subpolytope_census",
    "verify_haase_ziegler",
]
