"""Command-line front end: ``minkarr <command> ...``.

Every command prints exactly one JSON document on stdout; logs go to stderr.
Exit codes: 0 success, 1 a requested condition failed or the search missed,
2 malformed input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import bounds, constructions, probabilistic, search
from .arrangement import Arrangement, verify_kappa_witness
from .geometry import GeometryError, load_body
from .geometry.io import FormatError, number_to_json, vec_to_json

log = logging.getLogger("minkarr")

OK, FAILED, MALFORMED = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=1)
    sys.stdout.write("\n")


def _read_arrangement(path: str) -> Arrangement:
    text = sys.stdin.read() if path == "-" else open(path).read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e}") from None
    if not isinstance(obj, dict):
        raise FormatError("arrangement JSON must be an object")
    return Arrangement.from_json(obj)


def _random_config(args) -> probabilistic.RandomConfig:
    return probabilistic.RandomConfig(seed=args.seed, max_retries=args.retries, oversample_factor=args.oversample)


def cmd_verify(args) -> int:
    A = _read_arrangement(args.input)
    rep = verify_kappa_witness(A, mode=args.mode, require_intersecting=args.intersecting, threads=args.threads)
    _emit(rep.to_json())
    return OK if rep.ok else FAILED


def cmd_construct(args) -> int:
    name = args.name
    if name == "cube-grid":
        A = constructions.cube_grid_witness(_need(args.d, "--d"))
    elif name == "icosahedron":
        A = constructions.icosahedron_arrangement()
    elif name == "amplified-icosahedron":
        A = constructions.amplified_icosahedron_arrangement(args.k)
    elif name == "triangle-product":
        A = constructions.triangle_product_witness(_need(args.d, "--d"))
    else:
        A = constructions.load_named_witness(name)
    _emit(A.to_json())
    return OK


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required here")
    return value


def cmd_bound(args) -> int:
    name = args.name
    if name == "packing-upper":
        rep = bounds.packing_upper(load_body(_need(args.body, "--body")), _need(args.lam, "--lambda"))
    elif name == "kappa-upper":
        rep = bounds.kappa_upper(load_body(_need(args.body, "--body")))
    elif name == "centroid-kappa-upper":
        rep = bounds.centroid_kappa_upper(_need(args.d, "--d"))
    elif name == "chain-upper":
        rep = bounds.chain_upper(_need(args.d, "--d"))
    else:
        rep = bounds.hadwiger_lower(_need(args.d, "--d"))
    _emit(rep.to_json())
    return OK


def cmd_sample(args) -> int:
    K = load_body(args.body)
    cfg = _random_config(args)
    if args.kind == "uniform":
        pts = probabilistic.sample_uniform(K, args.n, cfg)
        _emit({"count": len(pts), "points": [vec_to_json(p) for p in pts]})
    elif args.kind == "strict-translates":
        _emit(probabilistic.strict_translate_arrangement(K, cfg).to_json())
    elif args.kind == "boundary-points":
        pts = probabilistic.boundary_strict_points(K, cfg)
        _emit(probabilistic.hadwiger_arrangement(K, pts).to_json())
    else:
        res = probabilistic.centroid_projection_direction(K, tol=args.tol, seed=args.seed)
        _emit({"u": vec_to_json(res.u_exact), "u_float": list(res.u), "residual": number_to_json(res.residual)})
    return OK


def cmd_search(args) -> int:
    K = load_body(args.body)
    cfg = search.SearchConfig(
        target_count=args.m,
        mode=search.STRICT if args.mode == "strict" else search.NONSTRICT,
        translates_only=args.translates_only,
        lambda_range=(args.lambda_range[0], args.lambda_range[1]),
        steps=args.steps,
        restarts=args.restarts,
        seed=args.seed,
        time_limit=args.time_limit,
        workers=args.threads,
    )
    A = search.search_arrangement(K, cfg)
    if A is None:
        _emit({"found": False, "target_count": args.m})
        return FAILED
    _emit(A.to_json())
    return OK


def cmd_estimate_f(args) -> int:
    K = load_body(args.body)
    est = probabilistic.estimate_F(K, args.t, args.n, _random_config(args))
    bound = probabilistic.concentration_bound(args.t, K.dim)
    _emit({
        "t": args.t,
        "N": args.n,
        "estimate": number_to_json(est.estimate),
        "stderr": number_to_json(est.stderr),
        "bound": number_to_json(bound),
        "within_bound": est.estimate + 3 * est.stderr <= bound,
    })
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=_positive_int, default=1)
    common.add_argument("--mode", choices=("strict", "minkowski"), default="minkowski")
    common.add_argument("--intersecting", action="store_true", help="also require pairwise intersection")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--oversample", type=_rational, default=Fraction(1))
    common.add_argument("--retries", type=_positive_int, default=10)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="minkarr", description="Minkowski arrangements of convex bodies.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check an arrangement JSON exactly")
    p.add_argument("input", nargs="?", default="-", help="arrangement file, or - for stdin")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", parents=[common], help="emit a deterministic witness")
    p.add_argument("name", choices=("cube-grid", "icosahedron", "amplified-icosahedron", "triangle-product", *constructions.NAMED_WITNESSES))
    p.add_argument("--d", type=_positive_int)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("bound", parents=[common], help="evaluate an explicit bound")
    p.add_argument("name", choices=("packing-upper", "kappa-upper", "centroid-kappa-upper", "chain-upper", "hadwiger-lower"))
    p.add_argument("--body")
    p.add_argument("--d", type=_positive_int)
    p.add_argument("--lambda", dest="lam", type=_rational)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sample", parents=[common], help="random constructions")
    p.add_argument("kind", choices=("uniform", "strict-translates", "boundary-points", "projection-direction"))
    p.add_argument("--body", required=True)
    p.add_argument("--n", type=_positive_int, default=10)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("search", parents=[common], help="anneal for a planar witness")
    p.add_argument("--body", required=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--translates-only", action="store_true")
    p.add_argument("--lambda-range", nargs=2, type=float, default=(0.02, 1.0), metavar=("LO", "HI"))
    p.add_argument("--steps", type=_positive_int, default=4000)
    p.add_argument("--restarts", type=_positive_int, default=20)
    p.add_argument("--time-limit", type=float)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("estimate-f", parents=[common], help="Monte Carlo estimate of the short-difference probability")
    p.add_argument("--body", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--n", type=_positive_int, default=100_000)
    p.set_defaults(func=cmd_estimate_f)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (probabilistic.RetriesExhausted, probabilistic.ToleranceNotReached) as e:
        log.error("%s", e)
        _emit({"found": False, "reason": str(e)})
        return FAILED
    except (GeometryError, UsageError, OSError, KeyError, ValueError) as e:
        log.error("%s", e)
        return MALFORMED


if __name__ == "__main__":
    sys.exit(main())
