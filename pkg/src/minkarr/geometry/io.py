"""JSON (de)serialisation of bodies; rationals travel as ``"p/q"`` strings."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from ..rational import q
from .bodies import (
    Ball,
    ConvexBody,
    GeometryError,
    HPolytope,
    Product,
    VPolytope,
    cross_polytope,
    cube,
    interval,
    simplex,
    triangle,
)


class FormatError(GeometryError):
    pass


def number_to_json(x):
    if isinstance(x, (Fraction, int)):
        return str(Fraction(x))
    return {"approx": float(x)}


def vec_to_json(v):
    return [number_to_json(t) for t in v]


def body_to_json(K: ConvexBody) -> dict:
    if isinstance(K, HPolytope):
        shape = {"hpolytope": {"facets": [{"a": vec_to_json(a), "b": number_to_json(b)} for a, b in K.facets]}}
        if K._given_vertices is not None:
            shape["hpolytope"]["vertices"] = [vec_to_json(v) for v in K._given_vertices]
    elif isinstance(K, VPolytope):
        shape = {"vpolytope": {"vertices": [vec_to_json(v) for v in K.points]}}
    elif isinstance(K, Ball):
        shape = {"ball": {"r": number_to_json(K.radius)}}
    elif isinstance(K, Product):
        shape = {"product": [body_to_json(f) for f in K.factors]}
    else:
        raise FormatError(f"{type(K).__name__} has no JSON form")
    return {"dim": K.dim, "shape": shape}


def _rat(x):
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        try:
            return q(x)
        except (ValueError, ZeroDivisionError) as e:
            raise FormatError(str(e)) from None
    raise FormatError(f"expected a rational string 'p/q', got {x!r}")


def _vec(v, dim=None):
    if not isinstance(v, list):
        raise FormatError(f"expected a list of rationals, got {v!r}")
    out = tuple(_rat(t) for t in v)
    if dim is not None and len(out) != dim:
        raise FormatError(f"vector {v!r} should have length {dim}")
    return out


def body_from_json(obj) -> ConvexBody:
    try:
        dim = obj["dim"]
        shape = obj["shape"]
        if not isinstance(dim, int) or dim < 1:
            raise FormatError("'dim' must be a positive integer")
        if not isinstance(shape, dict) or len(shape) != 1:
            raise FormatError("'shape' must have exactly one key")
        (kind, data), = shape.items()
        if kind == "hpolytope":
            facets = [(_vec(f["a"], dim), _rat(f["b"])) for f in data["facets"]]
            verts = data.get("vertices")
            verts = None if verts is None else [_vec(v, dim) for v in verts]
            K = HPolytope(facets, verts)
        elif kind == "vpolytope":
            K = VPolytope([_vec(v, dim) for v in data["vertices"]])
        elif kind == "ball":
            K = Ball(_rat(data["r"]), dim)
        elif kind == "product":
            K = Product([body_from_json(f) for f in data])
        else:
            raise FormatError(f"unknown shape {kind!r}")
    except (KeyError, TypeError, AttributeError) as e:
        raise FormatError(f"malformed body JSON: {e!r}") from None
    if K.dim != dim:
        raise FormatError(f"declared dim {dim} but body has dim {K.dim}")
    return K


def named_body(name: str) -> ConvexBody:
    """Shorthand bodies: ``triangle``, ``disc``, ``square``, ``cube:d``,
    ``simplex:d``, ``cross:d``, ``ball:d``, ``segment``, and products joined
    with ``x`` (e.g. ``triangle x triangle``)."""
    parts = [p.strip() for p in name.split(" x ")]
    if len(parts) > 1:
        return Product([named_body(p) for p in parts])
    base, _, arg = name.partition(":")
    d = int(arg) if arg else None
    if base == "triangle":
        return triangle()
    if base == "disc":
        return Ball(1, 2)
    if base == "square":
        return cube(2)
    if base == "segment":
        return interval()
    if base == "cube":
        return cube(d or 2)
    if base == "simplex":
        return simplex(d or 2)
    if base == "cross":
        return cross_polytope(d or 2)
    if base == "ball":
        return Ball(1, d or 3)
    raise FormatError(f"unknown body name {name!r}")


def load_body(spec: str) -> ConvexBody:
    """A JSON file path, or a name understood by :func:`named_body`."""
    p = Path(spec)
    if p.suffix == ".json" or p.exists():
        try:
            obj = json.loads(p.read_text())
        except json.JSONDecodeError as e:
            raise FormatError(f"{spec}: {e}") from None
        if "body" in obj and "shape" not in obj:
            obj = obj["body"]
        return body_from_json(obj)
    return named_body(spec)
