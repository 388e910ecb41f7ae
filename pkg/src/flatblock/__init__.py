"""Exact computations on translation surfaces built from glued polygons."""

__version__ = "0.1.0"

from .exact import QQ, FieldDescriptor, Quad, format_scalar, parse_scalar, rational_ratio, sign
from .surface import Polygon, SurfaceError, TranslationSurface, apply_gl2, erase_removable, genus_area, stratum, validate
from .fileformat import ParseError, SurfaceDocument, parse, print_document, to_surface
from .fixtures import fixture
from .triangulation import SurfacePoint, Triangulation
from .flow import (
    Direction,
    GeodesicPath,
    SaddleConnection,
    direction,
    geodesics_between,
    outgoing_separatrices,
    saddle_connections,
    trace_ray,
)
from .cylinders import (
    Cylinder,
    CylinderDecomposition,
    decompose_direction,
    det_pair_test,
    direction_scan,
    pure_periodicity_check,
    two_cylinder_witness,
)
from .homology import (
    CaltaTuple,
    calta_h11_check,
    holonomy,
    holonomy_qrank,
    homology_basis,
    n_set_membership,
    period_coordinates,
    perturb_edge_pair,
    torus_cover_normalize,
)
from .billiard import RationalPolygon, regular_polygon, zk_unfold
from .blocking import (
    blocked_fraction,
    blocking_probe,
    build_teepee,
    clearance,
    grow_rectangle,
    midpoint_census,
    normalize_for_teepee,
)
from .svg import render_svg
