"""Command-line interface.

Every subcommand prints a JSON document (sorted keys, schema_version field)
to stdout.  Exit status: 0 on success, 1 when a feasibility command returns
a negative verdict, 2 on input or usage errors.  Numbers are emitted with
Python's shortest round-trip float representation, so parsing them back
reproduces the exact values.  The PLEMBED_SEED environment variable sets
the default Monte Carlo seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import bzelement, mesh, qcbounds, quadruple, skeleton
from .errors import DomainError, MeshError, ParseError, UnknownVertexError

SCHEMA_VERSION = 1
TWO_PI_DEFAULT = 2.0 * math.pi


def _emit(payload: dict, args) -> None:
    payload["schema_version"] = SCHEMA_VERSION
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_floats(text: str, expected: int, what: str) -> list[float]:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != expected:
        raise ParseError(f"{what}: expected {expected} comma-separated numbers, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError as e:
        raise ParseError(f"{what}: {e}") from None


def _quadruple_from_arg(text: str) -> quadruple.MetricQuadruple:
    # order: d12,d13,d14,d23,d24,d34
    return quadruple.MetricQuadruple.from_pairwise(*_parse_floats(text, 6, "--quadruple"))


def _load_graph(path: str):
    with open(path) as fh:
        return skeleton.parse_graph_document(fh.read())


def _default_seed() -> int:
    try:
        return int(os.environ.get("PLEMBED_SEED", "0"))
    except ValueError:
        return 0


def _cmd_wald(args) -> int:
    q = _quadruple_from_arg(args.quadruple)
    opts = quadruple.WaldOptions(
        samples=args.samples,
        kappa_cap=args.kappa_cap,
    )
    res = quadruple.wald_curvature(q, opts)
    payload = {"command": "wald", "quadruple": list(q.pairwise())}
    payload.update(res.to_dict())
    payload["cayley_menger"] = quadruple.cayley_menger(q)
    _emit(payload, args)
    return 0


def _cmd_embed_check(args) -> int:
    q = _quadruple_from_arg(args.quadruple)
    cert = quadruple.s3_embeddability(q, args.kappa)
    coords = quadruple.realize_quadruple(q, args.kappa, args.dim)
    payload = {
        "command": "embed-check",
        "quadruple": list(q.pairwise()),
        "kappa": args.kappa,
        "dim": args.dim,
        "realized": coords is not None,
    }
    payload.update(cert.to_dict())
    _emit(payload, args)
    return 0 if cert.verdict else 1


def _cmd_check_local(args) -> int:
    graph, kappa_map = _load_graph(args.graph)
    kappa = args.kappa
    if kappa is None and kappa_map is not None:
        if args.vertex not in kappa_map:
            raise ParseError(f"no curvature for vertex {args.vertex!r}; pass --kappa")
        kappa = kappa_map[args.vertex]
    if kappa is None:
        raise ParseError("no curvature given; pass --kappa or a document with a kappa map")
    rep = skeleton.local_compatibility(graph, args.vertex, kappa)
    payload = {"command": "check-local", "graph": args.graph}
    payload.update(rep.to_dict())
    _emit(payload, args)
    return 0 if rep.verdict else 1


def _cmd_check_global(args) -> int:
    graph, kappa_map = _load_graph(args.graph)
    kappa = args.kappa if args.kappa is not None else kappa_map
    if kappa is None:
        raise ParseError("no curvature given; pass --kappa or a document with a kappa map")
    rep = skeleton.global_compatibility(graph, kappa)
    payload = {"command": "check-global", "graph": args.graph}
    payload.update(rep.to_dict())
    _emit(payload, args)
    return 0 if rep.verdict else 1


def _cmd_qc_bound(args) -> int:
    m = mesh.load_off(args.mesh)
    rep = qcbounds.mesh_edge_dilatation_bound(m)
    payload = {"command": "qc-bound", "mesh": args.mesh}
    payload.update(rep.to_dict())
    _emit(payload, args)
    if args.table:
        sys.stderr.write(rep.table() + "\n")
    return 0


def _cmd_wedge(args) -> int:
    angles = [float(a) for a in args.angles.split(",") if a.strip()]
    spec = qcbounds.DihedralWedgeSpec(args.n, args.k, tuple(angles))
    bounds = qcbounds.dihedral_wedge_coefficients(spec)
    payload = {
        "command": "wedge",
        "dimension": args.n,
        "wedge_type": args.k,
        "angles": angles,
    }
    payload.update(bounds.to_dict())
    _emit(payload, args)
    return 0


def _cmd_face_count(args) -> int:
    bounds = qcbounds.convex_face_count_bound(args.faces, args.n)
    payload = {"command": "face-count-bound", "faces": args.faces, "dimension": args.n}
    payload.update(bounds.to_dict())
    _emit(payload, args)
    return 0


def _cmd_index_bound(args) -> int:
    value = qcbounds.uniform_index_bound(args.n, args.inner)
    _emit({"command": "index-bound", "dimension": args.n, "inner": args.inner, "bound": value}, args)
    return 0


def _cmd_link_volume(args) -> int:
    m = mesh.load_off(args.mesh)
    payload = {"command": "link-volume", "mesh": args.mesh, "vertex": args.vertex, "method": args.method}
    if args.dual:
        payload["dual"] = True
        payload["value"] = qcbounds.normalized_exterior_angle(m, args.vertex)
    elif args.method == "exact":
        payload["value"] = qcbounds.normalized_link_volume(m, args.vertex)
    else:
        est = qcbounds.normalized_link_volume_mc(m, args.vertex, samples=args.samples, seed=args.seed)
        payload.update(est.to_dict())
    _emit(payload, args)
    return 0


def _cmd_fold(args) -> int:
    rho, phi = _parse_floats(args.point, 2, "--point")
    payload = {
        "command": "fold",
        "source_angle": args.theta,
        "point": [rho, phi],
    }
    if args.contraction:
        r, psi = bzelement.vertex_contraction(args.theta, rho, phi)
        payload["contraction"] = True
    else:
        params = bzelement.FoldParams(args.theta, args.lam, args.scale)
        r, psi = bzelement.standard_vertex_map(params, rho, phi)
        payload["target_angle"] = args.lam
        payload["radial_scale"] = args.scale
        payload["contraction"] = False
    payload["image"] = [r, psi]
    _emit(payload, args)
    return 0


def _cmd_bz_element(args) -> int:
    big = bzelement.AcuteTriangle.from_sides(*_parse_floats(args.template, 3, "--template"))
    small = bzelement.AcuteTriangle.from_sides(*_parse_floats(args.base, 3, "--base"))
    element = bzelement.canonical_element(big, small)
    report = bzelement.isometry_defect(element, big)
    payload = {
        "command": "bz-element",
        "template_sides": list(big.side_lengths),
        "base_sides": list(small.side_lengths),
        "apex_height": element.apex_height,
        "pleat_heights": [float(z) for z in element.pleat_heights],
        "apex": [float(x) for x in element.apex],
        "face_points": [[float(x) for x in row] for row in element.face_points],
    }
    payload.update(report.to_dict())
    if args.obj:
        with open(args.obj, "w") as fh:
            fh.write(element.to_obj())
        payload["obj"] = args.obj
    _emit(payload, args)
    return 0


def _cmd_curve_curvature(args) -> int:
    triple = skeleton.CurveTriple(*_parse_floats(args.triple, 3, "--triple"))
    mode = args.mode.replace("-", "_")
    value = skeleton.polyline_curvature(triple, mode)
    _emit(
        {
            "command": "curve-curvature",
            "triple": [triple.leg1, triple.leg2, triple.span],
            "mode": args.mode,
            "value": value,
        },
        args,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plembed",
        description="Metric curvature, embeddability checks, and dilatation bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("--output", help="write the JSON document to this path instead of stdout")

    p = sub.add_parser("wald", help="embedding-curvature roots of a metric quadruple")
    p.add_argument("--quadruple", required=True, help="d12,d13,d14,d23,d24,d34")
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--kappa-cap", type=float, default=None)
    add_output(p)
    p.set_defaults(func=_cmd_wald)

    p = sub.add_parser("embed-check", help="embeddability certificate for a quadruple")
    p.add_argument("--quadruple", required=True, help="d12,d13,d14,d23,d24,d34")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--dim", type=int, default=3, choices=(2, 3))
    add_output(p)
    p.set_defaults(func=_cmd_embed_check)

    p = sub.add_parser("check-local", help="local compatibility at one vertex")
    p.add_argument("--graph", required=True)
    p.add_argument("--vertex", required=True)
    p.add_argument("--kappa", type=float, default=None)
    add_output(p)
    p.set_defaults(func=_cmd_check_local)

    p = sub.add_parser("check-global", help="compatibility at every vertex")
    p.add_argument("--graph", required=True)
    p.add_argument("--kappa", type=float, default=None)
    add_output(p)
    p.set_defaults(func=_cmd_check_global)

    p = sub.add_parser("qc-bound", help="edge-angle dilatation bound of a mesh")
    p.add_argument("--mesh", required=True, help="ASCII OFF file")
    p.add_argument("--table", action="store_true", help="also print a table to stderr")
    add_output(p)
    p.set_defaults(func=_cmd_qc_bound)

    p = sub.add_parser("wedge", help="dilatation coefficients of a dihedral wedge")
    p.add_argument("--n", type=int, required=True, help="ambient dimension")
    p.add_argument("--k", type=int, required=True, help="wedge type")
    p.add_argument("--angles", required=True, help="comma-separated dihedral angles (radians)")
    add_output(p)
    p.set_defaults(func=_cmd_wedge)

    p = sub.add_parser("face-count-bound", help="dilatation bound from the face count")
    p.add_argument("--faces", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    add_output(p)
    p.set_defaults(func=_cmd_face_count)

    p = sub.add_parser("index-bound", help="uniform bound on the local index")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--inner", type=float, required=True, help="inner dilatation")
    add_output(p)
    p.set_defaults(func=_cmd_index_bound)

    p = sub.add_parser("link-volume", help="normalized link volume at a mesh vertex")
    p.add_argument("--mesh", required=True)
    p.add_argument("--vertex", type=int, required=True)
    p.add_argument("--method", choices=("exact", "monte-carlo"), default="exact")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--dual", action="store_true", help="volume of the dual cone (exterior angle)")
    add_output(p)
    p.set_defaults(func=_cmd_link_volume)

    p = sub.add_parser("fold", help="conical vertex map of a polar point")
    p.add_argument("--theta", type=float, required=True, help="source cone angle")
    p.add_argument("--lam", type=float, default=TWO_PI_DEFAULT, help="target cone angle (default 2*pi)")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--point", required=True, help="rho,phi")
    p.add_argument("--contraction", action="store_true", help="use the inner-disk contraction map")
    add_output(p)
    p.set_defaults(func=_cmd_fold)

    p = sub.add_parser("bz-element", help="pleated element over a shrunken triangle")
    p.add_argument("--template", required=True, help="template sides s1,s2,s3")
    p.add_argument("--base", required=True, help="base sides s1,s2,s3")
    p.add_argument("--obj", help="write the element as Wavefront OBJ to this path")
    add_output(p)
    p.set_defaults(func=_cmd_bz_element)

    p = sub.add_parser("curve-curvature", help="discrete curvature of a polyline triple")
    p.add_argument("--triple", required=True, help="leg1,leg2,span")
    p.add_argument("--mode", choices=("menger", "finsler-haantjes"), default="menger")
    add_output(p)
    p.set_defaults(func=_cmd_curve_curvature)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DomainError, MeshError, UnknownVertexError, OSError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
