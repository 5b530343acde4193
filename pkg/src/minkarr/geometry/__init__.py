"""Convex bodies, gauges and exact polytope operations."""
from .bodies import (
    Ball,
    CentralSymmetral,
    ConvexBody,
    DegenerateBody,
    DimensionMismatch,
    GeometryError,
    HPolytope,
    Product,
    SymmetricCore,
    UnsupportedRepresentation,
    VPolytope,
    cross_polytope,
    cube,
    interval,
    polytope_vertices,
    scale_body,
    simplex,
    translate,
    triangle,
)
from .io import FormatError, body_from_json, body_to_json, load_body, named_body
from .ops import (
    central_symmetral,
    centroid,
    homothets_intersect,
    homothets_intersect_lp,
    is_symmetric,
    norm,
    normalize,
    product,
    symmetric_core,
    theta,
    volume,
    volume_estimate,
)

__all__ = [
    "Ball",
    "CentralSymmetral",
    "ConvexBody",
    "DegenerateBody",
    "DimensionMismatch",
    "FormatError",
    "GeometryError",
    "HPolytope",
    "Product",
    "SymmetricCore",
    "UnsupportedRepresentation",
    "VPolytope",
    "body_from_json",
    "body_to_json",
    "central_symmetral",
    "centroid",
    "cross_polytope",
    "cube",
    "homothets_intersect",
    "homothets_intersect_lp",
    "interval",
    "is_symmetric",
    "load_body",
    "named_body",
    "norm",
    "normalize",
    "polytope_vertices",
    "product",
    "scale_body",
    "simplex",
    "symmetric_core",
    "theta",
    "translate",
    "triangle",
    "volume",
    "volume_estimate",
]
