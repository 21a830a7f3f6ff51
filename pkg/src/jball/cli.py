"""Command line front end: distances, ball rendering, predicate checks,
scenario runs, and the acceptance suite."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .ballgeom import (
    convexity_check,
    extract_region,
    loops_to_svg,
    starlikeness_check,
    topology_check,
    trace_boundary,
)
from .domain import domain_from_json
from .gallery import named_scenarios, run_scenario
from .metric import CheckReport, j_distance, qh_distance
from .suite import run_suite


def _fail(msg: str) -> "NoReturn":  # noqa: F821 - doc alias
    print(f"error: {msg}", file=sys.stderr)
    raise SystemExit(2)


def _parse_point(text: str) -> np.ndarray:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        _fail(f"bad point {text!r}: expected comma-separated numbers")
    if len(parts) < 2:
        _fail(f"bad point {text!r}: expected at least two coordinates")
    return np.array(parts)


def _load_domain(path: str):
    try:
        with open(path) as fh:
            blob = json.load(fh)
    except OSError as exc:
        _fail(f"cannot read domain file {path!r}: {exc}")
    except json.JSONDecodeError as exc:
        _fail(f"domain file {path!r} is not valid JSON: {exc}")
    try:
        return domain_from_json(blob)
    except (ValueError, KeyError, TypeError) as exc:
        _fail(f"bad domain file {path!r}: {exc}")


def _require_inside(domain, x: np.ndarray, name: str) -> None:
    if len(x) != domain.dim:
        _fail(f"{name} has {len(x)} coordinates but the domain is {domain.dim}D")
    if not domain.contains(x):
        _fail(f"{name} lies outside the domain")


def _seed(args) -> int:
    env = os.environ.get("JBALL_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            _fail(f"JBALL_SEED must be an integer, got {env!r}")
    return args.seed


def _print_report(report: CheckReport) -> int:
    print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    return 0 if report.passed else 1


def _cmd_dist(args) -> int:
    domain = _load_domain(args.domain)
    x = _parse_point(args.x)
    y = _parse_point(args.y)
    _require_inside(domain, x, "x")
    _require_inside(domain, y, "y")
    try:
        if args.metric == "j":
            val = j_distance(domain, x, y)
        else:
            val = qh_distance(domain, x, y, h=args.grid)
    except (ValueError, RuntimeError) as exc:
        _fail(str(exc))
    print(f"{val:.12g}")
    return 0


def _cmd_render(args) -> int:
    domain = _load_domain(args.domain)
    x = _parse_point(args.x)
    _require_inside(domain, x, "x")
    try:
        grid = extract_region(domain, x, args.M, cells_per_side=args.res)
    except ValueError as exc:
        _fail(str(exc))
    loops = trace_boundary(grid)
    svg = loops_to_svg(loops)
    with open(args.out, "w") as fh:
        fh.write(svg)
    print(f"wrote {args.out} ({len(loops)} boundary loops)")
    return 0


def _cmd_check(args) -> int:
    domain = _load_domain(args.domain)
    x = _parse_point(args.x)
    _require_inside(domain, x, "x")
    if not (np.isfinite(args.M) and args.M > 0.0):
        _fail("M must be a positive finite radius")
    center = None
    if args.center is not None:
        center = _parse_point(args.center)
        _require_inside(domain, center, "center")
    rng = np.random.default_rng(_seed(args))
    trials = args.trials
    try:
        if args.predicate == "convex":
            rep = convexity_check(domain, x, args.M, rng=rng, n_pairs=trials or 220)
        elif args.predicate == "strict-convex":
            rep = convexity_check(
                domain, x, args.M, rng=rng, strict=True, n_pairs=trials or 220
            )
        elif args.predicate == "starlike":
            rep = starlikeness_check(
                domain, x, args.M, center=center, rng=rng, strict=False,
                n_pts=trials or 300,
            )
        elif args.predicate == "strict-starlike":
            rep = starlikeness_check(
                domain, x, args.M, center=center, rng=rng, strict=True,
                n_rays=trials or 1024,
            )
        else:
            grid = extract_region(domain, x, args.M, cells_per_side=trials or 1024)
            top = topology_check(grid, min_cells=16)
            rep = CheckReport(
                passed=top.simply_connected,
                witness=None
                if top.simply_connected
                else {
                    "kind": "topology",
                    "components": top.n_components,
                    "holes": top.n_holes,
                },
                samples_used=int(grid.mask.size),
                tol=0.0,
                notes={
                    "components": top.n_components,
                    "holes": top.n_holes,
                    "component_cells": list(top.component_cells),
                },
            )
    except (ValueError, RuntimeError) as exc:
        _fail(str(exc))
    return _print_report(rep)


def _cmd_gallery(args) -> int:
    registry = named_scenarios()
    if args.name not in registry:
        known = ", ".join(sorted(registry))
        _fail(f"unknown scenario {args.name!r}; known: {known}")
    outcome = run_scenario(registry[args.name](), res_scale=args.res_scale)
    payload = json.dumps(outcome.to_json(), indent=2, sort_keys=True)
    print(payload)
    if args.out is not None:
        with open(args.out, "w") as fh:
            fh.write(payload)
            fh.write("\n")
    return 0 if outcome.passed else 1


def _cmd_suite(args) -> int:
    results = run_suite(report_path=args.report)
    return 0 if all(r.passed for r in results if r.gated) else 1


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="jball",
        description="Distance-ratio metric balls: distances, renders, checks.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="distance between two interior points")
    p.add_argument("--domain", required=True, help="domain JSON file")
    p.add_argument("--metric", required=True, choices=["j", "k"])
    p.add_argument("--x", required=True, help="point a,b")
    p.add_argument("--y", required=True, help="point c,d")
    p.add_argument("--grid", type=float, default=None, help="grid spacing for k")
    p.set_defaults(fn=_cmd_dist)

    p = sub.add_parser("render", help="trace ball boundaries to an SVG file")
    p.add_argument("--domain", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--M", required=True, type=float)
    p.add_argument("--out", required=True)
    p.add_argument("--res", type=int, default=1024, help="grid cells per side")
    p.set_defaults(fn=_cmd_render)

    p = sub.add_parser("check", help="run a ball predicate, print a JSON report")
    p.add_argument(
        "predicate",
        choices=["convex", "strict-convex", "starlike", "strict-starlike", "topology"],
    )
    p.add_argument("--domain", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--M", required=True, type=float)
    p.add_argument("--center", default=None, help="star centre c,d (default: x)")
    p.add_argument(
        "--trials",
        type=int,
        default=None,
        help="sampling effort: pairs, points, rays, or grid cells per side",
    )
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("gallery", help="run a named scenario")
    p.add_argument("name")
    p.add_argument("--out", default=None, help="also write the JSON report here")
    p.add_argument(
        "--res-scale", type=float, default=1.0, help="resolution multiplier"
    )
    p.set_defaults(fn=_cmd_gallery)

    p = sub.add_parser("suite", help="run the full acceptance suite")
    p.add_argument("--report", default=None, help="write a JSON report here")
    p.set_defaults(fn=_cmd_suite)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
