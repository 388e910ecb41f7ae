"""Command line driver: ``flatblock COMMAND [SURFACE] [options]``.

SURFACE is a path to a surface file or the name of a built-in fixture.
Reports are JSON on standard output with exact numbers as strings.
Exit status: 0 success, 2 negative verdict, 1 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


from . import __version__
from .billiard import BilliardError, RationalPolygon, group_order, zk_unfold
from .blocking import (
    CaseViolation,
    blocked_fraction,
    blocking_probe,
    build_teepee,
    clearance,
    midpoint_census,
    normalize_for_teepee,
    polygon_coordinates,
)
from .cylinders import (
    IncompleteDecomposition,
    decompose_direction,
    direction_scan,
    pure_periodicity_check,
)
from .exact import FieldDescriptor, QQ, format_scalar, parse_scalar
from .fileformat import ParseError, from_surface, parse, print_document, to_surface
from .fixtures import DOCUMENTS, fixture_text
from .homology import (
    CaltaTuple,
    NotACaltaTuple,
    calta_h11_check,
    holonomy_qrank,
    n_set_membership,
    perturb_edge_pair,
    torus_cover_normalize,
)
from .surface import SurfaceError, stratum
from .svg import render_svg

SCHEMA = "flatblock-report/1"
NEGATIVE = 2


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors must not collide with the negative-verdict status
    def error(self, message):
        raise CliError(f"{self.prog}: {message}")


def _s(x) -> str:
    return format_scalar(x)


def _vec(v):
    return [_s(v[0]), _s(v[1])]


def _load(spec: str):
    path = Path(spec)
    if path.exists():
        text = path.read_text()
    else:
        try:
            text = fixture_text(spec)
        except KeyError:
            raise CliError(f"no such file or fixture: {spec}") from None
    return parse(text)


def _field_arg(text: str) -> FieldDescriptor:
    parts = text.split()
    if parts == ["rational"]:
        return QQ
    if len(parts) == 2 and parts[0] == "sqrt":
        return FieldDescriptor(int(parts[1]))
    raise CliError(f"bad field {text!r}; use 'rational' or 'sqrt N'")


def _pair(text: str, field):
    parts = text.split(",")
    if len(parts) != 2:
        raise CliError(f"expected X,Y but got {text!r}")
    return tuple(parse_scalar(p, field) for p in parts)


def _point(text: str, surface):
    """``x,y`` in the first polygon or ``NAME:x,y``."""
    poly = 0
    if ":" in text:
        name, text = text.split(":", 1)
        poly = surface.polygon_index(name)
    return (poly, _pair(text, surface.field))


def _sorted_points(T, surface, pts):
    rows = [polygon_coordinates(T, surface, p) for p in pts]
    rows.sort(key=lambda r: (r[0], float(r[1][0]), float(r[1][1])))
    return [{"polygon": n, "x": _s(x), "y": _s(y)} for n, (x, y) in rows]


# -- commands -------------------------------------------------------------------


def cmd_validate(args, doc, S):
    return {"valid": True, "name": S.name, "field": str(S.field), "polygons": len(S.polygons), "gluings": len(S.gluing_pairs())}, 0


def cmd_stratum(args, doc, S):
    ks, removable = stratum(S)
    return {"stratum": ks, "removable": removable, "genus": S.genus, "area": _s(S.area)}, 0


def _cyl(c):
    return {"width": _s(c.width), "height": _s(c.height), "area": _s(c.area), "modulus": _s(c.modulus)}


def cmd_decompose(args, doc, S):
    dec = decompose_direction(S, _pair(args.dir, S.field), args.cap and parse_scalar(args.cap, S.field))
    rep = {
        "direction": _vec(dec.direction.vector),
        "complete": dec.complete,
        "cylinders": [_cyl(c) for c in dec.cylinders],
        "widths": [_s(c.width) for c in dec.cylinders],
        "saddle_connections": [_vec(s.holonomy) for s in dec.saddle_connections],
    }
    code = 0
    if not dec.complete:
        rep["verdict"] = "incomplete"
    else:
        v = pure_periodicity_check(dec)
        rep["verdict"] = v.kind
        if v.kind == "purely-periodic":
            rep["base_width"] = _s(v.base_width)
            rep["multipliers"] = list(v.multipliers)
            rep["T"] = _s(v.period)
            rep["minimal_period"] = _s(v.minimal_period)
        else:
            rep["pair"] = [v.first, v.second]
            rep["pair_widths"] = [_s(w) for w in v.widths]
            code = NEGATIVE
    args._decoration = {"decomposition": dec}
    return rep, code


def cmd_scan(args, doc, S):
    L = parse_scalar(args.length, S.field)
    r = direction_scan(S, L, args.cap and parse_scalar(args.cap, S.field), jobs=args.jobs)
    rows = [{"direction": _vec(dv.vector), "status": st, "cylinders": K} for dv, st, K in r.directions]
    rep = {"length": _s(L), "directions": rows, "counts": r.counts, "bound_ok": r.bound_ok}
    return rep, 0 if r.bound_ok else NEGATIVE


def cmd_rank(args, doc, S):
    q = holonomy_qrank(S)
    return {"qrank": q, "torus_cover": q == 2}, 0


def cmd_torus_cover(args, doc, S):
    r = torus_cover_normalize(S)
    if r is None:
        return {"torus_cover": False, "qrank": holonomy_qrank(S)}, NEGATIVE
    A, index = r
    return {"torus_cover": True, "matrix": [_vec(A[0]), _vec(A[1])], "index": index}, 0


def cmd_calta(args, doc, S):
    f = _field_arg(args.field)
    vals = [parse_scalar(x, f) for x in (args.w1, args.w2, args.s1, args.s2)]
    try:
        verdict, r1, r2 = calta_h11_check(CaltaTuple(*vals, f))
    except NotACaltaTuple as exc:
        return {"verdict": "not-a-calta-tuple", "reason": str(exc)}, NEGATIVE
    code = 0 if verdict == "consistent" else NEGATIVE
    return {"verdict": verdict, "r1": _s(r1), "r2": _s(r2)}, code


def cmd_unfold(args, doc, S):
    bdoc = parse(Path(args.billiard).read_text())
    if bdoc.billiard is None:
        raise CliError("file has no billiard block")
    P = RationalPolygon.from_spec(bdoc.billiard, bdoc.field)
    U = zk_unfold(P, name=args.name)
    ks, removable = stratum(U)
    rep = {
        "N": P.N,
        "group_order": group_order(P),
        "charts": len(U.polygons),
        "stratum": ks,
        "removable": removable,
        "genus": U.genus,
        "area": _s(U.area),
        "qrank": holonomy_qrank(U),
        "surface": print_document(from_surface(U)),
    }
    if args.out:
        Path(args.out).write_text(rep["surface"])
    args._surface = U
    return rep, 0


def cmd_block(args, doc, S):
    O, A = _point(args.from_, S), _point(args.to, S)
    L = parse_scalar(args.length, S.field)
    r = blocking_probe(S, O, A, L, "exact" if args.exact else "greedy", doublings=args.doublings, jobs=args.jobs)
    T = r.triangulation
    rows = []
    for row in r.rows:
        rows.append(
            {
                "length": _s(row.L),
                "geodesics": row.geodesics,
                "candidates": row.candidates,
                "method": row.method,
                "carried": row.carried,
                "size": row.size,
                "blockers": _sorted_points(T, S, row.blockers),
            }
        )
    sizes = [row["size"] for row in rows]
    rep = {
        "from": {"polygon": S.polygons[O[0]].name, "x": _s(O[1][0]), "y": _s(O[1][1])},
        "to": {"polygon": S.polygons[A[0]].name, "x": _s(A[1][0]), "y": _s(A[1][1])},
        "blockers": rows[0]["blockers"],
        "size": sizes[0],
        "method": rows[0]["method"],
        "rows": rows,
        "stable": len(set(sizes)) == 1,
    }
    args._decoration = {"points": r.final.blockers, "triangulation": T}
    return rep, 0


def cmd_midpoints(args, doc, S):
    O, A = _point(args.from_, S), _point(args.to, S)
    L = parse_scalar(args.length, S.field)
    rows, T = midpoint_census(S, O, A, L, doublings=args.doublings, jobs=args.jobs)
    out = [{"length": _s(r.L), "geodesics": r.geodesics, "size": r.size, "midpoints": _sorted_points(T, S, r.midpoints)} for r in rows]
    sizes = [r["size"] for r in out]
    rep = {"rows": out, "stabilized": len(sizes) > 1 and sizes[-1] == sizes[-2]}
    args._decoration = {"points": rows[-1].midpoints, "triangulation": T}
    return rep, 0


def cmd_teepee(args, doc, S):
    setup = normalize_for_teepee(S, _pair(args.cyl_dir, S.field), args.cap and parse_scalar(args.cap, S.field))
    if setup is None:
        raise CliError("direction has no cylinder with a free boundary saddle connection (complete or empty)")
    s = clearance(setup)
    rows = []
    tp = None
    for k in range(args.eps_steps):
        eps = s / 2**k
        try:
            tp = build_teepee(setup, eps)
        except CaseViolation as exc:
            rows.append({"k": k, "eps": _s(eps), "case": "violation", "reason": str(exc)})
            continue
        row = {
            "k": k,
            "eps": _s(eps),
            "wraps": tp.wraps,
            "eps_used": _s(tp.eps),
            "T_eps": _s(tp.rectangle.T_eps),
            "sigma": tp.rectangle.sigma,
            "y": _s(tp.y),
            "A": _vec(tp.A_dev),
            "card": tp.card,
            "bound": _s(tp.bound),
            "bound_ok": tp.card >= tp.bound,
        }
        if args.validate:
            row["invalid_members"] = tp.validate()
        if args.blocker:
            bx, depth = _pair(args.blocker, setup.surface.field)
            fr = blocked_fraction(tp, tp.cylinder_point(bx, depth))
            row["blocked"] = {
                "count": fr.count,
                "fraction": _s(fr.fraction),
                "rho": None if fr.rho is None else _s(fr.rho),
                "q": fr.q,
                "bound_ok": fr.bound_ok,
            }
        rows.append(row)
    rep = {
        "direction": _vec(setup.direction.vector),
        "matrix": [_vec(setup.matrix[0]), _vec(setup.matrix[1])],
        "gamma_length": _s(setup.length),
        "clearance": _s(s),
        "rows": rows,
    }
    ok = all(r.get("bound_ok", False) and not r.get("invalid_members") for r in rows)
    if tp is not None:
        args._surface = setup.surface
        args._decoration = {"teepee": tp}
    return rep, 0 if ok else NEGATIVE


def cmd_nset(args, doc, S):
    L = parse_scalar(args.length, S.field)
    r = n_set_membership(S, L, jobs=args.jobs)
    if r is None:
        return {"member": False, "length": _s(L)}, NEGATIVE
    a, b, ca, cb = r
    pair = [
        {"holonomy": _vec(a.holonomy), "class": [str(x) for x in ca]},
        {"holonomy": _vec(b.holonomy), "class": [str(x) for x in cb]},
    ]
    return {"member": True, "length": _s(L), "pair": pair}, 0


def cmd_perturb(args, doc, S):
    name, _, e = args.glue.partition(".e")
    if not e.isdigit():
        raise CliError(f"expected NAME.eK but got {args.glue!r}")
    d = args.delta.split(",")
    if len(d) != 2:
        raise CliError(f"expected DX,DY but got {args.delta!r}")
    field = _field_arg(args.field) if args.field else None
    if field is None:
        field = S.field
        for part in d:
            if "r" in part and field.d is None:
                raise CliError("delta uses r; pass --field 'sqrt N'")
    delta = tuple(parse_scalar(x, field) for x in d)
    U = perturb_edge_pair(S, (S.polygon_index(name), int(e)), delta, field if field.d else None)
    ks, removable = stratum(U)
    rep = {"stratum": ks, "removable": removable, "genus": U.genus, "area": _s(U.area), "surface": print_document(from_surface(U))}
    if args.out:
        Path(args.out).write_text(rep["surface"])
    args._surface = U
    return rep, 0


COMMANDS = {
    "validate": cmd_validate,
    "stratum": cmd_stratum,
    "decompose": cmd_decompose,
    "scan": cmd_scan,
    "rank": cmd_rank,
    "torus-cover": cmd_torus_cover,
    "calta": cmd_calta,
    "unfold": cmd_unfold,
    "block": cmd_block,
    "midpoints": cmd_midpoints,
    "teepee": cmd_teepee,
    "nset": cmd_nset,
    "perturb": cmd_perturb,
}
NO_SURFACE = {"calta", "unfold"}


def build_parser():
    p = _Parser(prog="flatblock", description="Exact experiments on translation surfaces.")
    p.add_argument("--version", action="version", version=f"flatblock {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--svg", metavar="FILE", help="also write an SVG picture")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    sub = p.add_subparsers(dest="command", required=True)

    def surf(name, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.add_argument("surface", help="surface file or fixture name (" + ", ".join(DOCUMENTS) + ")")
        return sp

    surf("validate", "check a surface")
    surf("stratum", "stratum, genus and area")
    sp = surf("decompose", "cylinder decomposition in a direction")
    sp.add_argument("--dir", required=True, metavar="DX,DY")
    sp.add_argument("--cap", metavar="L")
    sp = surf("scan", "decompose every saddle connection direction up to a length")
    sp.add_argument("--length", required=True, metavar="L")
    sp.add_argument("--cap", metavar="L")
    surf("rank", "rank of the holonomy over Q")
    surf("torus-cover", "normalize to a torus cover if the rank is 2")
    sp = sub.add_parser("calta", parents=[common], help="genus two H(1,1) arithmetic on a tuple")
    for k in ("w1", "w2", "s1", "s2"):
        sp.add_argument(f"--{k}", required=True)
    sp.add_argument("--field", default="sqrt 2", help="'rational' or 'sqrt N' (default sqrt 2)")
    sp = sub.add_parser("unfold", parents=[common], help="unfold a rational billiard table")
    sp.add_argument("--billiard", required=True, metavar="FILE")
    sp.add_argument("--name", default="ZK")
    sp.add_argument("--out", metavar="FILE", help="write the unfolded surface document")
    for name in ("block", "midpoints"):
        sp = surf(name, "minimal blocking sets" if name == "block" else "midpoints of geodesics")
        sp.add_argument("--from", dest="from_", required=True, metavar="[NAME:]X,Y")
        sp.add_argument("--to", required=True, metavar="[NAME:]X,Y")
        sp.add_argument("--length", required=True, metavar="L")
        sp.add_argument("--doublings", type=int, default=1 if name == "midpoints" else 0)
        if name == "block":
            sp.add_argument("--exact", action="store_true", help="branch and bound instead of greedy")
    sp = surf("teepee", "grow rectangles and build teepees")
    sp.add_argument("--cyl-dir", required=True, metavar="DX,DY")
    sp.add_argument("--eps-steps", type=int, default=6, metavar="K")
    sp.add_argument("--cap", metavar="L")
    sp.add_argument("--validate", action="store_true", help="re-trace every member")
    sp.add_argument("--blocker", metavar="X,DEPTH", help="blocked fraction of a point of C")
    sp = surf("nset", "two parallel homologically independent saddle connections")
    sp.add_argument("--length", required=True, metavar="L")
    sp = surf("perturb", "move a glued edge pair in period coordinates")
    sp.add_argument("--glue", required=True, metavar="NAME.eK")
    sp.add_argument("--delta", required=True, metavar="DX,DY")
    sp.add_argument("--field", help="field of the result, e.g. 'sqrt 2'")
    sp.add_argument("--out", metavar="FILE")
    return p


def run_command(argv):
    """Run one command; returns (exit status, report dict)."""
    try:
        args = build_parser().parse_args(argv)
    except CliError as exc:
        return 1, {"schema": SCHEMA, "command": None, "error": str(exc)}
    args._decoration = {}
    args._surface = None
    try:
        doc = S = None
        if args.command not in NO_SURFACE:
            doc = _load(args.surface)
            S = to_surface(doc)
        rep, code = COMMANDS[args.command](args, doc, S)
        if args.svg:
            target = args._surface or S
            if target is None:
                raise CliError("nothing to draw for this command")
            Path(args.svg).write_text(render_svg(target, args._decoration))
    except (CliError, ParseError, SurfaceError, BilliardError, IncompleteDecomposition, OSError, ValueError) as exc:
        return 1, {"schema": SCHEMA, "command": args.command, "error": str(exc)}
    out = {"schema": SCHEMA, "command": args.command}
    out.update(rep)
    return code, out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    code, rep = run_command(argv)
    text = json.dumps(rep, indent=2)
    if code == 1:
        print(text, file=sys.stderr)
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
