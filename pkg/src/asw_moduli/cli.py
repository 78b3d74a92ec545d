"""Command line interface: ``asw-moduli <command> ...``.

Exit codes: 0 success, 1 other errors, 2 parse errors, 3 unsplit poles,
4 inadmissible conductors, 5 invalid deformation certificate.
"""

import argparse
import json
import os
import sys

from . import __version__
from .datum import BranchingDatum, canonical_rows, format_rows
from .deform import exactness_search, pop_split, verify_deformation
from .errors import ASWError, InadmissibleError, ParseError, UnsplitPoleError
from .moduli import build_graph, components, disconnected_criterion, enumerate_partitions, irreducible, strata
from .parse import parse_field_name, parse_ratfunc
from .ramify import (branching_datum, column_support, deuring_shafarevich, genus_riemann_hurwitz,
                     genus_vector, inertia_counts, p_rank_vector, reduce, swan)
from .ratfunc import INF
from .witt import WittVector

FORMAT_VERSION = 1

EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_UNSPLIT = 3
EXIT_INADMISSIBLE = 4
EXIT_INVALID = 5


def _load_json(arg):
    """Inline JSON, a path, or '-' for stdin."""
    try:
        if arg == "-":
            return json.load(sys.stdin)
        s = arg.strip()
        if s.startswith("{") or s.startswith("["):
            return json.loads(s)
        with open(arg) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read JSON from {arg!r}: {exc}") from exc


def witt_from_json(data, field=None):
    if isinstance(data, list):
        data = {"entries": data}
    try:
        entries = data["entries"]
    except (KeyError, TypeError):
        raise ParseError("Witt vector JSON needs an 'entries' array") from None
    fname = field or data.get("field")
    p = data.get("p")
    if fname is None:
        if p is None:
            raise ParseError("Witt vector JSON needs 'p' or 'field'")
        fname = f"F{p}"
    K = parse_field_name(fname)
    if p is not None and int(p) != K.p:
        raise ParseError(f"p = {p} does not match field {K}")
    if "n" in data and int(data["n"]) != len(entries):
        raise ParseError(f"n = {data['n']} but {len(entries)} entries given")
    return WittVector(K.p, [parse_ratfunc(str(e), K) for e in entries], K)


def _parse_ints(text):
    try:
        vals = [int(s) for s in str(text).replace("[", "").replace("]", "").replace(" ", "").split(",") if s]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise ParseError("empty integer list")
    return tuple(vals)


def _emit(obj, args, table=None):
    obj = {"format_version": FORMAT_VERSION, **obj}
    if getattr(args, "format", "json") == "table" and table is not None:
        sys.stdout.write(table)
    else:
        sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _pt(K, pt):
    return "inf" if pt is INF else K.format(pt)


def _shown(jumps):
    """Tables print unbranched levels as 0; JSON keeps the break -1."""
    return [max(j, 0) for j in jumps]


def _rows_json(rows):
    return [list(r) for r in rows]


# -- commands --------------------------------------------------------------------


def cmd_analyze(args):
    u = witt_from_json(_load_json(args.input), args.field)
    red, h = reduce(u)
    datum, prof = branching_datum(red, reduced=True)
    K = u.K
    genus = genus_vector(datum, args.base_genus)
    rh = genus_riemann_hurwitz(datum, args.base_genus)
    pr = p_rank_vector(datum)
    levels = []
    for i in range(1, u.n + 1):
        tr = datum.truncate(i)
        levels.append({
            "level": i,
            "datum": _rows_json(tr.rows),
            "points": [_pt(K, pt) for pt in tr.points],
            "genus": genus[i - 1],
            "p_rank": pr["p_rank"][i - 1],
            "swan": [swan(datum, j, i) for j in range(datum.r)],
        })
    out = {
        "command": "analyze",
        "p": u.p,
        "n": u.n,
        "field": str(K),
        "input": [str(f) for f in u.entries],
        "reduced": [str(f) for f in red.entries],
        "correction": [str(f) for f in h.entries],
        "datum": {"rows": _rows_json(datum.rows), "points": [_pt(K, pt) for pt in datum.points]},
        "canonical": _rows_json(canonical_rows(datum.rows)),
        "conductors": list(datum.d),
        "jumps": [{"point": _pt(K, pt), "jumps": list(js), "inertia": m}
                  for pt, js, m in zip(prof.points, prof.jumps, prof.inertia)],
        "genus": list(genus),
        "genus_riemann_hurwitz": list(rh),
        "p_rank": list(pr["p_rank"]),
        "deuring_shafarevich": deuring_shafarevich(datum),
        "inertia_counts": list(pr["inertia_counts"]),
        "column_support": list(pr["column_support"]),
        "note": "inertia_counts[k-1] counts points of inertia exactly p^k; column_support counts nonzero "
                "entries per column; both are called s in the literature",
        "swan": list(prof.swan),
        "levels": levels,
    }
    lines = [f"field {K}, p = {u.p}, n = {u.n}",
             "reduced: (" + ", ".join(out["reduced"]) + ")",
             "point      jumps      conductors"]
    for pt, js, row in zip(prof.points, prof.jumps, datum.rows):
        lines.append(f"{_pt(K, pt):<10} {str(_shown(js)):<10} {list(row)}")
    lines.append("level  genus  p-rank  swan")
    for lv in levels:
        lines.append(f"{lv['level']:<6} {lv['genus']:<6} {lv['p_rank']:<7} {sum(lv['swan'])}")
    _emit(out, args, "\n".join(lines) + "\n")
    return 0


def _graph_report(d, p, args):
    g = build_graph(d, p, jobs=args.jobs, per_column=getattr(args, "per_column", False))
    rep = g.to_json()
    rep["per_column_divergence"] = [[i, j] for i, j in g.per_column_divergence]
    return g, rep


def _components_json(d, p):
    return [{"rows": _rows_json(c["datum"].rows), "dim_cov": c["dim_cov"], "dim_curve": c["dim_curve"]}
            for c in components(d, p)]


def _check_size(d, p, args):
    count = len(enumerate_partitions(d, p))
    if count > args.max_vertices:
        return count, (f"{count} vertices exceed --max-vertices {args.max_vertices}; "
                       "the refinement graph is not built")
    return count, None


def cmd_enumerate(args):
    d = _parse_ints(args.d)
    count, skipped = _check_size(d, args.p, args)
    if skipped:
        if args.dot:
            raise ASWError(skipped)
        comps = _components_json(d, args.p)
        out = {"command": "enumerate", "p": args.p, "d": list(d), "vertex_count": count,
               "graph_skipped": skipped, "components": comps,
               "irreducible": irreducible(d, args.p), "irreducible_by_components": len(comps) == 1,
               "disconnected_criterion": disconnected_criterion(d[0], args.p)}
        if args.strata:
            s = _parse_ints(args.strata)
            out["strata"] = {"s": list(s), "vertices": [_rows_json(M.rows) for M in strata(d, s, args.p)]}
        lines = [f"Omega_{list(d)} at p = {args.p}: {count} vertices ({skipped})"]
        if args.components:
            lines.append(f"components ({len(comps)}):")
            lines.extend(f"  {format_rows(c['rows'])} dim_cov={c['dim_cov']} dim_curve={c['dim_curve']}"
                         for c in comps)
        lines.append(f"irreducible = {str(out['irreducible']).lower()}")
        _emit(out, args, "\n".join(lines) + "\n")
        return 0
    g, rep = _graph_report(d, args.p, args)
    out = {"command": "enumerate", "vertex_count": count, **rep}
    if args.strata:
        s = _parse_ints(args.strata)
        out["strata"] = {"s": list(s), "vertices": [_rows_json(M.rows) for M in strata(d, s, args.p)]}
    if args.dot:
        sys.stdout.write(g.to_dot())
        return 0
    lines = [f"Omega_{list(d)} at p = {args.p}: {len(g.vertices)} vertices, {len(g.edges)} edges"]
    for i, (M, a) in enumerate(zip(g.vertices, g.annotations)):
        mark = "*" if a["component"] else " "
        lines.append(f"{mark} v{i} {format_rows(M.rows)} support={list(a['column_support'])} "
                     f"essential={a['essential']} dim_cov={a['dim_cov']}")
    for i, j in g.edges:
        lines.append(f"  v{i} -> v{j}")
    if args.components:
        lines.append("components:")
        for c in rep["components"]:
            lines.append(f"  {format_rows(c['rows'])} dim_cov={c['dim_cov']} dim_curve={c['dim_curve']}")
    lines.append(f"irreducible = {str(rep['irreducible']).lower()}")
    _emit(out, args, "\n".join(lines) + "\n")
    return 0


def cmd_components(args):
    d = _parse_ints(args.d)
    comps = _components_json(d, args.p)
    out = {"command": "components", "p": args.p, "d": list(d), "components": comps}
    lines = [f"{format_rows(c['rows'])} dim_cov={c['dim_cov']} dim_curve={c['dim_curve']}" for c in comps]
    _emit(out, args, "\n".join(lines) + "\n")
    return 0


def cmd_irreducible(args):
    d = _parse_ints(args.d)
    pred = irreducible(d, args.p)
    count = len(components(d, args.p))
    out = {"command": "irreducible", "p": args.p, "d": list(d), "irreducible": pred,
           "component_count": count, "agrees": pred == (count == 1)}
    _emit(out, args, f"irreducible = {str(pred).lower()} (components: {count})\n")
    return 0


def cmd_split(args):
    row = _parse_ints(args.row)
    Q = pop_split(row, args.p)
    out = {"command": "split-pop", "p": args.p, "row": list(row), "rows": _rows_json(Q.rows),
           "column_sums": list(Q.d)}
    _emit(out, args, format_rows(Q.rows) + "\n")
    return 0


def cmd_verify(args):
    special = witt_from_json(_load_json(args.special))
    family = witt_from_json(_load_json(args.family))
    cert = verify_deformation(special, family, samples=args.samples)
    out = {"command": "verify-deformation", **cert.to_json()}
    lines = [f"type {cert.type_string()}", f"method: {cert.method}"]
    for pt, js in cert.generic_jumps():
        lines.append(f"  generic jumps {_shown(js)} at {pt}")
    lines.append("valid" if cert.valid else f"INVALID: {cert.failure}")
    _emit(out, args, "\n".join(lines) + "\n")
    if not cert.valid:
        print(f"invalid certificate: {cert.failure}", file=sys.stderr)
        return EXIT_INVALID
    return 0


def cmd_exactness(args):
    res = exactness_search(args.u, args.v, args.p, args.m)
    out = {"command": "exactness", **res.to_json()}
    _emit(out, args, res.summary() + "\n")
    return 0


def cmd_graph(args):
    d = _parse_ints(args.d)
    _, skipped = _check_size(d, args.p, args)
    if skipped:
        raise ASWError(skipped)
    g, rep = _graph_report(d, args.p, args)
    if args.format == "json":
        _emit({"command": "graph", **rep}, args)
    else:
        sys.stdout.write(g.to_dot())
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="asw-moduli", description="Artin-Schreier-Witt covers of P^1 in characteristic p")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, formats=("json", "table")):
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("-v", "--verbose", action="store_true")

    sp = sub.add_parser("analyze", help="reduce a Witt vector and report its ramification")
    sp.add_argument("input", help="Witt vector JSON: inline, a file path, or -")
    sp.add_argument("--field", help="override the coefficient field, e.g. F5 or F4")
    sp.add_argument("--base-genus", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    for name, fn, hlp in (("enumerate", cmd_enumerate, "list Omega_d with its graph"),
                          ("graph", cmd_graph, "export G_d")):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("d", help="conductors, e.g. 4,8")
        sp.add_argument("-p", "--p", type=int, required=True)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--per-column", action="store_true", help="per-column refinement")
        sp.add_argument("--max-vertices", type=int, default=2000, help="skip the graph above this size")
        if name == "enumerate":
            sp.add_argument("--strata", help="column supports s, e.g. 2,3")
            sp.add_argument("--components", action="store_true", help="list irreducible components in table output")
            sp.add_argument("--dot", action="store_true", help="print DOT instead")
            common(sp)
        else:
            common(sp, ("dot", "json"))
        sp.set_defaults(func=fn)

    for name, fn, hlp in (("components", cmd_components, "irreducible components and dimensions"),
                          ("irreducible", cmd_irreducible, "irreducibility predicate")):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("d")
        sp.add_argument("-p", "--p", type=int, required=True)
        common(sp)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("split-pop", help="Pop split of a one-point row")
    sp.add_argument("row")
    sp.add_argument("-p", "--p", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_split)

    sp = sub.add_parser("verify-deformation", help="check a deformation certificate")
    sp.add_argument("special")
    sp.add_argument("family")
    sp.add_argument("--samples", type=int, default=5)
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("exactness", help="a != 0 making dx/(x^u (x-a)^v) exact")
    sp.add_argument("u", type=int)
    sp.add_argument("v", type=int)
    sp.add_argument("p", type=int)
    sp.add_argument("--m", type=int, default=1, help="search roots in F_{p^m}")
    common(sp)
    sp.set_defaults(func=cmd_exactness)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        ap.error("--jobs must be positive")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnsplitPoleError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_UNSPLIT
    except InadmissibleError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INADMISSIBLE
    except (ASWError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
