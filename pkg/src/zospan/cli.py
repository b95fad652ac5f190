"""Command-line front end.

Results go to stdout as JSON (one document per line); diagnostics go to
stderr. Exit codes: 0 ok, 2 invalid input, 3 internal error, 4 no path.
Set ``ZOS_LOG`` to a logging level name (e.g. ``INFO``) for progress output.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import oracle, svg
from .engine import NoPathError, QueryError, StructureB
from .frechet import PolyCurve, minex
from .geom import GeometryError
from .scene import Scene, SceneError

RESULT_VERSION = "zospan-result/1"
EXIT_OK, EXIT_INVALID, EXIT_INTERNAL, EXIT_NO_PATH = 0, 2, 3, 4

log = logging.getLogger("zospan")


class InputError(Exception):
    """Bad command-line input; reported with exit code 2."""


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, separators=(", ", ": "))
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    print(text)


def _load_scene(path: str, epsilon: float | None) -> Scene:
    try:
        return Scene.load(path, epsilon=epsilon)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except (SceneError, GeometryError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _build(args) -> tuple[Scene, StructureB]:
    scene = _load_scene(args.scene, args.epsilon)
    pts = [(args.sx, args.sy), (args.tx, args.ty)] if hasattr(args, "sx") else None
    structure = StructureB(scene, scene.epsilon, seed=args.seed, bounds=pts)
    log.info("built %d vertices, %d edges, %d directions", structure.n_vertices,
             structure.n_edges, structure.ds.m)
    return scene, structure


def cmd_build(args) -> int:
    _, structure = _build(args)
    doc = {"version": RESULT_VERSION, "command": "build", **structure.summary()}
    print(f"{structure.n_vertices} vertices, {structure.n_edges} edges", file=sys.stderr)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_query(args) -> int:
    scene, structure = _build(args)
    path = structure.query((args.sx, args.sy), (args.tx, args.ty))
    doc = {
        "version": RESULT_VERSION,
        "command": "query",
        "source": [args.sx, args.sy],
        "target": [args.tx, args.ty],
        "epsilon": structure.epsilon,
        "theta": structure.ds.theta,
        "graph_weight": path.graph_weight,
        "weight": path.weight,
        "segments": [s.to_dict() for s in path.segments],
        "stats": structure.summary(),
    }
    if args.svg:
        samples = np.array([p.location for p in structure.points]).reshape(-1, 2)
        svg.write(args.svg, scene, path, samples)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_frechet(args) -> int:
    try:
        a, b = PolyCurve.load(args.curve_a), PolyCurve.load(args.curve_b)
    except OSError as exc:
        raise InputError(f"{exc.filename}: {exc.strerror}") from None
    except GeometryError as exc:
        raise InputError(str(exc)) from None
    docs = []
    for d in args.d:
        if d < 0:
            raise InputError(f"threshold must be non-negative, got {d}")
        res = minex(a, b, d, args.epsilon, seed=args.seed)
        doc = {"version": RESULT_VERSION, "command": "frechet", "threshold": d,
               "epsilon": res.epsilon, "minex_value": res.minex_value,
               "matched_measure": res.matched_measure, "cells": res.diagram.counts()}
        docs.append(doc)
        print(json.dumps(doc, separators=(", ", ": ")))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(docs if len(docs) > 1 else docs[0], fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_oracle(args) -> int:
    scene = _load_scene(args.scene, args.epsilon)
    s, t = (args.sx, args.sy), (args.tx, args.ty)
    if args.method == "exact":
        if scene.has_obstacles:
            raise InputError("the exact method handles scenes without obstacles only")
        rep = oracle.exact_zero_region_sp(scene, s, t)
    else:
        if args.K < 50:
            raise InputError("--K must be at least 50")
        rep = oracle.dense_obstacle_sp(scene, s, t, K=args.K)
    doc = {"version": RESULT_VERSION, "command": "oracle", "source": list(s), "target": list(t),
           **rep.to_dict()}
    _emit(doc, args.out)
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zospan", description="Approximate shortest paths among "
                                 "zero-cost regions and obstacles.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, scene=True):
        if scene:
            p.add_argument("scene", help="scene JSON file")
        p.add_argument("--epsilon", type=float, default=None,
                       help="approximation parameter in (0, 1); defaults to the scene's value")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="also write the result document to this file")

    def endpoints(p):
        for name in ("sx", "sy", "tx", "ty"):
            p.add_argument(name, type=float)

    p = sub.add_parser("build", help="build the query structure and print its statistics")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="approximate shortest path between two points")
    common(p)
    endpoints(p)
    p.add_argument("--svg", help="write a picture of the scene and path")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("frechet", help="MinEx value of two polygonal curves")
    p.add_argument("curve_a")
    p.add_argument("curve_b")
    p.add_argument("d", type=float, nargs="+", help="distance threshold(s)")
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_frechet)

    p = sub.add_parser("oracle", help="reference shortest-path value")
    common(p)
    endpoints(p)
    p.add_argument("--method", choices=("exact", "dense"), default="exact")
    p.add_argument("--K", type=int, default=200, help="boundary samples per region (dense)")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    level = os.environ.get("ZOS_LOG", "WARNING").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, SceneError, QueryError, GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NoPathError as exc:
        print(f"no path: {exc}", file=sys.stderr)
        return EXIT_NO_PATH
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
