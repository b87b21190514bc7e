"""Command line interface: ``bicircle COMMAND CONFIG [options]``.

Reports are JSON documents on stdout (or ``--report``) with a schema
version; meshes are ASCII OBJ files.  Exit codes: 0 success, 2 invalid
input, 3 documented mathematical degeneracy.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from importlib import resources
from typing import Optional

import jsonschema
import numpy as np

from . import classify, dual, edge, fixtures, geom3, hull
from .geom3 import Circle, GeometryError

SCHEMA_VERSION = "1.0"

CURVE_LABELS = {
    "SmoothGenusOne": "smooth genus one",
    "NodalIrreducibleRational": "nodal irreducible rational",
    "Cuspidal": "cuspidal",
    "TwoOneOne": "two (1,1)-curves",
    "TwoOnePlusZeroOne": "(2,1)-curve plus (0,1)-line",
    "OneTwoPlusOneZero": "(1,2)-curve plus (1,0)-line",
    "MixedThree": "(1,1)-curve plus (1,0)- and (0,1)-lines",
    "FourLines": "four lines",
    "OtherDegenerate": "other degenerate",
}


class ValidationError(Exception):
    code = "invalid_input"


def _schema(name: str) -> dict:
    return json.loads(resources.files("bicircle").joinpath(f"data/{name}").read_text())


def fmt(x) -> dict:
    """A number as a 17-digit decimal string, plus the exact rational."""
    if isinstance(x, Fraction):
        return {"float": f"{float(x):.17g}", "exact": str(x)}
    return {"float": f"{float(x):.17g}"}


def _scalar(x, exact: bool):
    if isinstance(x, str):
        return Fraction(x.strip()) if exact else float(Fraction(x.strip()))
    if isinstance(x, bool):
        raise ValidationError("booleans are not numbers")
    if exact:
        return Fraction(str(x)) if isinstance(x, float) else Fraction(x)
    return float(x)


def _exact_unit(n: tuple) -> tuple:
    nn = sum(x * x for x in n)
    if nn == 0:
        raise ValidationError("normal must be nonzero")
    if nn == 1:
        return n
    num, den = math.isqrt(nn.numerator), math.isqrt(nn.denominator)
    if num * num != nn.numerator or den * den != nn.denominator:
        raise ValidationError("exact mode needs a normal of rational length; use mode 'float'")
    k = Fraction(num, den)
    return tuple(x / k for x in n)


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config: {exc}") from exc
    return parse_config(raw)


def parse_config(raw: dict) -> dict:
    try:
        jsonschema.validate(raw, _schema("config.schema.json"))
    except jsonschema.ValidationError as exc:
        raise ValidationError(f"config: {exc.message}") from exc
    exact = raw.get("mode", "exact") == "exact"
    circles = []
    for c in raw["circles"]:
        center = tuple(_scalar(x, exact) for x in c["center"])
        radius = _scalar(c["radius"], exact)
        normal = tuple(_scalar(x, exact) for x in c["normal"])
        if radius <= 0:
            raise ValidationError("radius must be positive")
        if exact:
            normal = _exact_unit(normal)
        else:
            ln = math.sqrt(sum(x * x for x in normal))
            if ln == 0:
                raise ValidationError("normal must be nonzero")
            normal = tuple(x / ln for x in normal)
        circles.append(Circle(center, radius, normal))
    c1, c2 = circles
    n1, n2 = c1.normal, c2.normal
    if geom3.is_zero_vec(geom3.cross(n1, n2)) and abs(float(geom3.dot(n1, geom3.sub(c2.center, c1.center)))) <= geom3.TOL:
        raise classify.CoplanarCircles("the circles lie in one plane")
    pars = None
    if "parametrizations" in raw:
        pars = tuple(geom3.ParametrizedConic(tuple(tuple(_scalar(x, True) for x in row) for row in p))
                     for p in raw["parametrizations"])
    return {"c1": c1, "c2": c2, "exact": exact, "parametrizations": pars,
            "tolerances": raw.get("tolerances", {})}


def _vec(text: str, k: int = 3) -> tuple:
    parts = text.split(",")
    if len(parts) != k:
        raise ValidationError(f"expected {k} comma-separated numbers, got {text!r}")
    try:
        return tuple(Fraction(p.strip()) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad number in {text!r}") from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _edge(cfg: dict) -> edge.Bideg22Form:
    if cfg["parametrizations"] is not None:
        return edge.edge_form(*cfg["parametrizations"])
    return edge.edge_form_of_circles(cfg["c1"].rationalized(), cfg["c2"].rationalized())


def _curve_json(f: edge.Bideg22Form, cfg: dict) -> dict:
    ct = edge.classify_curve(f)
    out = ct.to_json()
    out["label"] = CURVE_LABELS.get(ct.tag, ct.tag)
    out["real_components"] = edge.real_components(f, samples=1024).count
    if ct.tag == "SmoothGenusOne":
        out["j_invariant"] = {"st": f"{edge.j_invariant(f, 'st'):.17g}",
                              "uv": f"{edge.j_invariant(f, 'uv'):.17g}"}
    return out


def cmd_classify(cfg: dict, args) -> dict:
    c1, c2 = cfg["c1"], cfg["c2"]
    ot = classify.order_type(c1, c2)
    fl = classify.face_lattice(ot, c1, c2)
    sp = classify.spectrahedron(c1, c2)
    return {"order_type": ot.to_json(),
            "intersection_type": [*sorted(ot.m, reverse=True)],
            "face_lattice": fl.to_json(),
            "curve": _curve_json(_edge(cfg), cfg),
            "spectrahedron": {"is_spectrahedron": sp.is_spectrahedron, "reason": sp.reason}}


def cmd_edge_curve(cfg: dict, args) -> dict:
    f = _edge(cfg)
    d_st, d_uv = edge.discriminants(f)
    ct = edge.classify_curve(f)

    def branch(b):
        return {"quartic": [fmt(x) for x in b.quartic], "real_roots": b.real_count,
                "roots": [[f"{complex(z).real:.17g}", f"{complex(z).imag:.17g}"] if not
                          np.isinf(complex(z).real) else "inf" for z, _ in b.roots]}
    sing = []
    if cfg["parametrizations"] is None:
        sing = [p.to_json() for p in edge.singular_points(f, cfg["c1"].rationalized(), cfg["c2"].rationalized())]
    return {"coefficients": f.to_json(), "curve_type": ct.tag, "label": CURVE_LABELS.get(ct.tag, ct.tag),
            "discriminant_st": branch(d_st), "discriminant_uv": branch(d_uv),
            "singular_points": sing}


def cmd_bisecants(cfg: dict, args) -> dict:
    s, t = _vec(args.param, 2)
    fan = hull.stationary_bisecants_through(cfg["c1"], cfg["c2"], (s, t))
    out = fan.to_json()
    out["boundary"] = [bool(hull.is_boundary_bisecant(cfg["c1"], cfg["c2"], ((float(s), float(t)), uv)))
                       for uv in fan.params if all(abs(complex(x).imag) == 0 for x in uv)] \
        if fan.variant != "Pencil" else []
    return out


def cmd_member(cfg: dict, args) -> dict:
    x = [float(v) for v in _vec(args.point)]
    tol = cfg["tolerances"].get("membership", 1e-7)
    H = hull.Hull(cfg["c1"].as_float(), cfg["c2"].as_float())
    return H.membership([x], tol)[0].to_json()


def cmd_support(cfg: dict, args) -> dict:
    w = [float(v) for v in _vec(args.dir)]
    return hull.support(cfg["c1"].as_float(), cfg["c2"].as_float(), w).to_json()


def cmd_surface_degree(cfg: dict, args) -> dict:
    try:
        a, b = args.line.split(":")
    except ValueError as exc:
        raise ValidationError("--line expects x,y,z:x,y,z") from exc
    ls = hull.line_section_count(cfg["c1"], cfg["c2"], _vec(a), _vec(b))
    out = ls.to_json()
    out["total"] = out["total_with_multiplicity"]
    out["real"] = out["real_count"]
    return out


def write_obj(mesh, path: str) -> None:
    lines = ["# bicircle mesh"]
    for v in mesh.vertices:
        lines.append("v %.17g %.17g %.17g" % tuple(v))
    for name in sorted(mesh.groups):
        lines.append(f"g {name}")
        for k in mesh.groups[name]:
            a, b, c = mesh.triangles[k]
            lines.append(f"f {a + 1} {b + 1} {c + 1}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _mesh_json(mesh, args) -> dict:
    if args.out:
        write_obj(mesh, args.out)
    return {"vertices": int(len(mesh.vertices)), "triangles": int(len(mesh.triangles)),
            "area": f"{mesh.area():.17g}", "euler_characteristic": mesh.euler_characteristic(),
            "open_edges": mesh.boundary_edges(),
            "groups": {k: len(v) for k, v in sorted(mesh.groups.items())}, "out": args.out}


def cmd_mesh(cfg: dict, args) -> dict:
    mesh = hull.boundary_mesh(cfg["c1"], cfg["c2"], args.resolution)
    return _mesh_json(mesh, args)


def cmd_dual(cfg: dict, args) -> dict:
    o = "auto" if args.origin == "auto" else _vec(args.origin)
    db = dual.dual_body(cfg["c1"], cfg["c2"], o)
    mesh = dual.dual_mesh(db, args.resolution)
    out = db.to_json()
    out["mesh"] = _mesh_json(mesh, args)
    out["patches"] = dual.patch_census(mesh)
    return out


def cmd_lmi(cfg: dict, args) -> dict:
    return classify.spectrahedron(cfg["c1"], cfg["c2"]).to_json()


def cmd_fuzz(args) -> dict:
    census, errors = {}, []
    for k, (kind, c1, c2) in enumerate(fixtures.fuzz_pairs(args.seed, args.count)):
        try:
            ot = classify.order_type(c1, c2)
            ct = edge.classify_curve(edge.edge_form_of_circles(c1, c2))
        except GeometryError as exc:
            errors.append({"case": k, "code": exc.code, "message": str(exc)})
            continue
        if kind != "random" and ot.tag != kind:
            errors.append({"case": k, "code": "tag_mismatch", "message": f"{kind} -> {ot.tag}"})
        census[ct.tag] = census.get(ct.tag, 0) + 1
    excluded = {t: census.get(t, 0) for t in ("Cuspidal", "FourLines")}
    return {"seed": args.seed, "count": args.count, "curve_types": dict(sorted(census.items())),
            "excluded_types_seen": excluded, "errors": errors}


COMMANDS = {
    "classify": cmd_classify, "edge-curve": cmd_edge_curve, "bisecants": cmd_bisecants,
    "member": cmd_member, "support": cmd_support, "surface-degree": cmd_surface_degree,
    "mesh": cmd_mesh, "dual": cmd_dual, "lmi": cmd_lmi,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bicircle", description="Convex hulls of two circles in space.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("config", help="scene JSON")
        sp.add_argument("--report", help="write the report here instead of stdout")
        if name == "bisecants":
            sp.add_argument("--param", required=True, help="s,t on the first circle")
        elif name == "member":
            sp.add_argument("--point", required=True, help="x,y,z")
        elif name == "support":
            sp.add_argument("--dir", required=True, help="x,y,z")
        elif name == "surface-degree":
            sp.add_argument("--line", required=True, help="x,y,z:x,y,z")
        elif name == "mesh":
            sp.add_argument("--resolution", type=int, default=256)
            sp.add_argument("--out", help="OBJ path")
        elif name == "dual":
            sp.add_argument("--origin", default="auto", help="auto or x,y,z")
            sp.add_argument("--resolution", type=int, default=64)
            sp.add_argument("--out", help="OBJ path")
    fz = sub.add_parser("fuzz")
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--count", type=int, default=200)
    fz.add_argument("--report")
    return p


def _limit_threads() -> None:
    n = os.environ.get("BICIRCLE_THREADS")
    if n:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, n)


def run(argv: Optional[list] = None) -> tuple[int, dict]:
    _limit_threads()
    args = build_parser().parse_args(argv)
    report = {"schema_version": SCHEMA_VERSION, "command": args.command}
    code = 0
    try:
        if args.command == "fuzz":
            result = cmd_fuzz(args)
        else:
            cfg = load_config(args.config)
            result = COMMANDS[args.command](cfg, args)
        report.update(status="ok", result=result)
    except (ValidationError, ValueError) as exc:
        code = 2
        if isinstance(exc, GeometryError):
            code = 3
        report.update(status="error", error={"code": getattr(exc, "code", "invalid_input"),
                                             "message": str(exc), "exit_code": code})
    jsonschema.validate(report, _schema("report.schema.json"))
    return code, report


def main(argv: Optional[list] = None) -> int:
    code, report = run(argv)
    text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    target = getattr(build_parser().parse_known_args(argv)[0], "report", None)
    if target:
        with open(target, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
