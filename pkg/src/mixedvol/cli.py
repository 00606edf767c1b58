"""Command-line surface.

Subcommands:
    estimate   randomized coefficient estimate (the sampling pipeline)
    exact      exact coefficient by interpolation, with all normalizations
    capacity   capacity optimization and the integer scaling vector
    bounds     bound constants A, A~, the sandwich intervals, pass flags
    subdivide  exact subdivision cells, per-signature sums, optional SVG
    gen        random instance factory

Instances and reports are JSON; rationals are encoded as decimal strings
("7/2", "3").  Exit codes: 0 success, 2 input validation, 3 numerical/LP
failure; errors are emitted as single-line JSON on stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from . import capacity as capmod
from . import estimator, geometry, minkpoly, sampling, subdivision
from .errors import InstanceValidationError, MixedVolError, NonGenericShiftError

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


# ---------------------------------------------------------------------------
# JSON plumbing

def jsonable(obj):
    """Recursively convert package values into JSON-encodable data."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {_key(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, frozenset, set)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _key(k):
    if isinstance(k, tuple):
        return ",".join(str(x) for x in k)
    return str(k)


def parse_fraction(text):
    return Fraction(text)


def load_instance(path):
    """Read and validate an instance file; vertex lists are hull-pruned."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InstanceValidationError(f"cannot read instance file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceValidationError(f"instance file is not valid JSON: {exc}") from exc
    for field in ("n", "L", "polytopes"):
        if field not in doc:
            raise InstanceValidationError(f"instance file missing field {field!r}")
    n = doc["n"]
    L = doc["L"]
    if not isinstance(n, int) or n < 1:
        raise InstanceValidationError("n must be a positive integer")
    if not isinstance(L, int) or L < 0:
        raise InstanceValidationError("L must be a nonnegative integer")
    polys = []
    m0 = 1
    for entry in doc["polytopes"]:
        name = entry.get("name", "")
        verts = entry.get("vertices")
        if not verts:
            raise InstanceValidationError(f"polytope {name!r} has no vertices")
        for v in verts:
            if len(v) != n or any(not isinstance(c, int) for c in v):
                raise InstanceValidationError(
                    f"polytope {name!r} has a malformed vertex {v!r}"
                )
        P = geometry.convex_hull(verts, name=name)
        m0 = max(m0, len(P.vertices))
        polys.append(P)
    alpha = doc.get("alpha")
    if alpha is not None:
        estimator.validate_alpha(tuple(alpha), n, len(polys))
        alpha = tuple(alpha)
    return estimator.Instance(
        n=n, k=len(polys), polytopes=tuple(polys), alpha=alpha, L=L, m0=m0
    )


def parse_alpha(args, instance):
    if args.alpha is not None:
        alpha = tuple(int(x) for x in args.alpha.split(","))
    else:
        alpha = instance.alpha
    if alpha is None:
        raise InstanceValidationError("no alpha given (flag --alpha or instance field)")
    estimator.validate_alpha(alpha, instance.n, instance.k)
    return alpha


def write_report(args, command, payload, config, seed=None, timings=None):
    report = {
        "tool": {"name": "mixedvol", "version": __version__},
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": jsonable(config),
        "seed": seed,
        "timings": jsonable(timings or {}),
        "report": jsonable(payload),
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands

def cmd_estimate(args):
    instance = load_instance(args.instance)
    alpha = parse_alpha(args, instance)
    instance = dataclasses.replace(instance, alpha=alpha)
    config = estimator.EstimatorConfig(
        mode=args.mode,
        d2=args.d2,
        scale_bits=args.scale_bits,
        workers=args.workers,
    )
    report = estimator.estimate_mixed_volume(
        instance, Fraction(args.eps), Fraction(args.delta), args.seed, config
    )
    write_report(
        args,
        "estimate",
        report,
        {
            "eps": args.eps,
            "delta": args.delta,
            "mode": args.mode,
            "d2": args.d2,
            "scale_bits": args.scale_bits,
            "workers": args.workers,
            "alpha": list(alpha),
        },
        seed=args.seed,
        timings=report.timings,
    )
    return EXIT_OK


def cmd_exact(args):
    t0 = time.perf_counter()
    instance = load_instance(args.instance)
    alpha = parse_alpha(args, instance)
    poly = minkpoly.interpolate_coefficients(instance.polytopes)
    c = minkpoly.coefficient(poly, alpha)
    conv = minkpoly.convert_normalization(c, alpha, instance.n)
    payload = {
        "alpha": list(alpha),
        "coefficient": c,
        "derivative_form": conv.derivative_form,
        "standard_mixed_volume": conv.standard_mixed_volume,
        "polynomial": {mu: cv for mu, cv in sorted(poly.coeffs.items())},
        "n": instance.n,
        "k": instance.k,
    }
    write_report(
        args, "exact", payload, {"alpha": list(alpha)},
        timings={"total": time.perf_counter() - t0},
    )
    return EXIT_OK


def _capacity_pipeline(instance, alpha, tol, scale_bits):
    poly = minkpoly.interpolate_coefficients(instance.polytopes)
    cap = capmod.capacity_minimize(
        poly, alpha, tol, coord_bits=instance.L, max_vertices=instance.m0
    )
    lam = capmod.integer_lambda(cap, scale_bits)
    return poly, cap, lam


def cmd_capacity(args):
    t0 = time.perf_counter()
    instance = load_instance(args.instance)
    alpha = parse_alpha(args, instance)
    poly, cap, lam = _capacity_pipeline(
        instance, alpha, Fraction(args.tol), args.scale_bits
    )
    payload = {
        "alpha": list(alpha),
        "capacity": cap,
        "cap_value_float": float(cap.cap_value),
        "integer_lambda": list(lam),
        "coefficient": minkpoly.coefficient(poly, alpha),
    }
    write_report(
        args, "capacity", payload,
        {"alpha": list(alpha), "tol": args.tol, "scale_bits": args.scale_bits},
        timings={"total": time.perf_counter() - t0},
    )
    return EXIT_OK


def cmd_bounds(args):
    t0 = time.perf_counter()
    instance = load_instance(args.instance)
    alpha = parse_alpha(args, instance)
    poly, cap, lam = _capacity_pipeline(
        instance, alpha, Fraction(args.tol), args.scale_bits
    )
    bounds = capmod.bound_report(poly, alpha, cap)
    payload = {
        "alpha": list(alpha),
        "bounds": bounds,
        "capacity": cap,
        "integer_lambda": list(lam),
        "coefficient": minkpoly.coefficient(poly, alpha),
        "all_checks_pass": all(bounds.checks.values()),
    }
    write_report(
        args, "bounds", payload,
        {"alpha": list(alpha), "tol": args.tol, "scale_bits": args.scale_bits},
        timings={"total": time.perf_counter() - t0},
    )
    return EXIT_OK


def cmd_subdivide(args):
    t0 = time.perf_counter()
    instance = load_instance(args.instance)
    lam = tuple(int(x) for x in args.lam.split(",")) if args.lam else tuple(
        [1] * instance.k
    )
    if len(lam) != instance.k or any(x < 1 for x in lam):
        raise InstanceValidationError("--lambda needs one positive integer per polytope")
    if args.svg and instance.n != 2:
        raise InstanceValidationError("SVG export requires a 2-dimensional instance")

    cells = None
    for attempt in range(5):
        shifts = sampling.sample_shifts(
            instance.k, instance.n, args.d2, sampling.RngStream(args.seed, attempt)
        )
        try:
            cells = subdivision.enumerate_cells(instance, lam, shifts)
            break
        except NonGenericShiftError:
            continue
    if cells is None:
        raise MixedVolError("shift vectors not generic after 5 resamples")

    verification = subdivision.verify_subdivision(
        cells, instance, lam, rng=sampling.RngStream(args.seed, 1 << 16)
    )
    signature_sums = {}
    for cell in cells:
        signature_sums.setdefault(cell.signature, Fraction(0))
        signature_sums[cell.signature] += cell.volume
    if args.svg:
        subdivision.export_svg(cells, args.svg)
    payload = {
        "lambda": list(lam),
        "cell_count": len(cells),
        "signature_sums": signature_sums,
        "cells": [
            {
                "signature": list(c.signature),
                "volume": c.volume,
                "bracket": c.bracket,
                "faces": [list(f.vertex_indices) for f in c.face_tuple],
            }
            for c in cells
        ],
        "verification": verification,
        "svg": args.svg,
    }
    write_report(
        args, "subdivide", payload,
        {"lambda": list(lam), "d2": args.d2, "svg": args.svg},
        seed=args.seed,
        timings={"total": time.perf_counter() - t0},
    )
    return EXIT_OK


def generate_instance(n, k, m0, L, seed):
    """Random instance: hulls of m0 lattice points each, full-dimensional sum."""
    rng = sampling.RngStream(seed, 0)
    bound = 2**L
    for _ in range(1000):
        polys = []
        for i in range(k):
            pts = {
                tuple(rng.randint(-bound, bound) for _ in range(n))
                for _ in range(m0)
            }
            polys.append(geometry.convex_hull(pts, name=f"P{i + 1}"))
        inst = estimator.Instance(
            n=n, k=k, polytopes=tuple(polys), L=L,
            m0=max(len(P.vertices) for P in polys),
        )
        if inst.sum_dimension() == n:
            return inst
    raise MixedVolError("could not generate a full-dimensional instance")


def cmd_gen(args):
    inst = generate_instance(args.n, args.k, args.m0, args.L, args.seed)
    doc = {
        "n": args.n,
        "L": args.L,
        "polytopes": [
            {"name": P.name, "vertices": [[int(c) for c in v] for v in P.vertices]}
            for P in inst.polytopes
        ],
    }
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="mixedvol",
        description="Mixed volumes of lattice polytopes: sampling estimator and exact oracles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_alpha=True):
        p.add_argument("instance", help="instance JSON file")
        if with_alpha:
            p.add_argument("--alpha", help="comma-separated multiplicities, e.g. 1,1")
        p.add_argument("-o", "--out", help="write the report to this path")

    p = sub.add_parser("estimate", help="randomized mixed-volume estimate")
    add_common(p)
    p.add_argument("--eps", default="0.1", help="multiplicative accuracy target")
    p.add_argument("--delta", default="0.05", help="failure probability budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact",
                   help="volume at lambda: exact (desk scale) or rejection estimate")
    p.add_argument("--d2", type=int, default=sampling.DEFAULT_D2)
    p.add_argument("--scale-bits", dest="scale_bits", type=int,
                   default=capmod.DEFAULT_SCALE_BITS)
    p.add_argument("--workers", type=int,
                   default=int(os.environ.get("MIXEDVOL_WORKERS", "1")))
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("exact", help="exact coefficient by interpolation")
    add_common(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("capacity", help="capacity optimization")
    add_common(p)
    p.add_argument("--tol", default="1e-6")
    p.add_argument("--scale-bits", dest="scale_bits", type=int,
                   default=capmod.DEFAULT_SCALE_BITS)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("bounds", help="bound constants and sandwich checks")
    add_common(p)
    p.add_argument("--tol", default="1e-6")
    p.add_argument("--scale-bits", dest="scale_bits", type=int,
                   default=capmod.DEFAULT_SCALE_BITS)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("subdivide", help="exact subdivision oracle")
    add_common(p, with_alpha=False)
    p.add_argument("--lambda", dest="lam", help="comma-separated positive integers")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d2", type=int, default=sampling.DEFAULT_D2)
    p.add_argument("--svg", help="write an SVG figure (n = 2 only)")
    p.set_defaults(func=cmd_subdivide)

    p = sub.add_parser("gen", help="random instance factory")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m0", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", help="write the instance to this path")
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InstanceValidationError as exc:
        print(json.dumps({"error": str(exc), "type": type(exc).__name__}),
              file=sys.stderr)
        return EXIT_VALIDATION
    except MixedVolError as exc:
        print(json.dumps({"error": str(exc), "type": type(exc).__name__}),
              file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
