"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error, 2 cap refusal, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from . import formats
from .classify import classify
from .complexes import (SimplicialComplex, alexander_dual, connected_sum_with_maps, generate_family, mask_of,
                        stellar_subdivide_facet, verts)
from .errors import ZKError
from .hochster import betti_table, multidegree_label
from .homology import homology_ranks, integral_reduced_homology
from .linalg import CoefficientSpec
from .strand import quasi_linear_strand, z_fields
from .survey import format_summary, survey


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _global_flags(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--char", action="append", default=d(None), metavar="0|p|Z",
                   help="coefficients: 0 (rationals), a prime p, or Z; repeatable")
    p.add_argument("--max-m", type=int, default=d(None), help="override the 2^m enumeration cap (default 24)")
    p.add_argument("--jobs", type=int, default=d(1), help="worker processes for survey")
    p.add_argument("--format", choices=["text", "json", "csv"], default=d("text"))
    p.add_argument("--seed", type=int, default=d(None), help="seed for random families")


def _input_flags(p: argparse.ArgumentParser, positional: bool = True):
    if positional:
        p.add_argument("input", nargs="?", help="facet-list file, '-' for stdin")
    p.add_argument("--family", help="generated complex instead of a file, e.g. cycle:5 or cyclic:4,7")
    p.add_argument("--nonfaces", action="store_true", help="input lines are minimal non-faces, not facets")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zkstrand", description="Stanley–Reisner Betti tables, quasi-linear strands and "
                                             "linearity classification of simplicial complexes.")
    _global_flags(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("betti", parents=[common], help="graded Betti table via Hochster's formula")
    _input_flags(s)
    s.add_argument("--module", choices=["quotient", "ideal"], default="quotient")
    s.add_argument("--multigraded", action="store_true", help="list multigraded entries too")

    s = sub.add_parser("classify", parents=[common], help="full classification report")
    _input_flags(s)
    s.add_argument("--no-componentwise", action="store_true", help="skip the component-ideal checks")

    s = sub.add_parser("strand", parents=[common], help="quasi-linear strand dimensions")
    _input_flags(s)

    s = sub.add_parser("homology", parents=[common], help="reduced homology of K or a full subcomplex")
    _input_flags(s)
    s.add_argument("--subset", help="restrict to the full subcomplex on these vertices, e.g. 1,3,4")

    s = sub.add_parser("dual", parents=[common], help="Alexander dual")
    _input_flags(s)

    s = sub.add_parser("generate", parents=[common], help="print a family member as a facet list")
    s.add_argument("family", help="cycle:m | simplex_boundary:n | cyclic:n,m | stacked:n,count | "
                                  "join_of_boundaries:n1,n2")

    s = sub.add_parser("sum", parents=[common], help="connected sum of two complexes along facets")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--facet-a", required=True, help="facet of the first complex, e.g. 1,2,3")
    s.add_argument("--facet-b", required=True, help="facet of the second complex")
    s.add_argument("--glue", help="images in facet-a of the facet-b vertices, in facet-b order")

    s = sub.add_parser("stellar", parents=[common], help="stellar subdivision of a facet")
    _input_flags(s)
    s.add_argument("--facet", required=True, help="facet to subdivide, e.g. 1,2,4,5")

    s = sub.add_parser("survey", parents=[common], help="classify a library of complexes into CSV")
    s.add_argument("inputs", nargs="*", help="Lutz-format libraries or facet-list files")
    s.add_argument("--componentwise", action="store_true", help="also run the component-ideal checks")
    s.add_argument("--timing", action="store_true", help="add a per-record seconds column (not reproducible)")
    return p


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _vertex_list(text: str) -> list[int]:
    try:
        vs = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise ZKError(f"cannot parse vertex list {text!r}") from None
    if not vs:
        raise ZKError("empty vertex list")
    return vs


def _load(args) -> SimplicialComplex:
    if getattr(args, "family", None):
        return generate_family(args.family, seed=args.seed)
    if not getattr(args, "input", None):
        raise ZKError("give an input file or --family")
    return formats.parse_facet_text(_read(args.input), mode="nonfaces" if args.nonfaces else "facets")


def _coeffs(args) -> list[CoefficientSpec]:
    return [CoefficientSpec.parse(c) for c in (args.char or ["0"])]


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _field_specs(K, coeff):
    return z_fields(K, coeff) if coeff.kind == "Z" else [coeff]


def cmd_betti(args, out):
    K = _load(args)
    tables = []
    for c in _coeffs(args):
        for f in _field_specs(K, c):
            tables.append(betti_table(K, f, args.module, max_m=args.max_m))
    if args.format == "json":
        out.write(formats.dumps({"schema_version": 1, "tables": [
            formats.betti_table_to_dict(t, args.multigraded) for t in tables]}))
    elif args.format == "csv":
        rows = [["coeff", "module", "i", "j", "beta"]]
        for t in tables:
            rows += [[t.spec.label, t.module, i, j, v] for (i, j), v in sorted(t.coarse.items())]
        out.write(_csv(rows))
    else:
        for t in tables:
            out.write(f"# {t.module} over {t.spec}\n")
            out.write(formats.render_betti_table(t))
            if args.multigraded:
                for (i, b), v in sorted(t.multigraded.items(), key=lambda kv: (kv[0][0], verts(kv[0][1]))):
                    out.write(f"  beta_{i},{{{multidegree_label(b)}}} = {v}\n")


def cmd_classify(args, out):
    K = _load(args)
    rep = classify(K, _coeffs(args), componentwise=not args.no_componentwise, max_m=args.max_m)
    d = rep.to_dict()
    if args.format == "json":
        out.write(formats.dumps(d))
    elif args.format == "csv":
        keys = list(next(iter(d["results"].values())).keys())
        rows = [keys] + [[_cell(r[k]) for k in keys] for r in d["results"].values()]
        out.write(_csv(rows))
    else:
        out.write(f"m = {rep.m}, dim = {rep.dim}, f-vector = {list(rep.f_vector)}\n")
        out.write("minimal non-faces: " + " ".join("".join(map(str, n)) if max(n) < 10 else ",".join(map(str, n))
                                                  for n in rep.minimal_nonfaces) + "\n")
        for label, r in d["results"].items():
            out.write(f"\n[{'Q' if label == '0' else label if label == 'Z' else 'F' + label}]\n")
            for k, v in r.items():
                if k != "coeff":
                    out.write(f"  {k}: {_cell(v)}\n")
        if rep.derived:
            out.write("\nderived (implied, not verified):\n")
            for lab in rep.derived:
                out.write(f"  [{lab.coeff}] {lab.name} = {lab.value}  <- {lab.provenance}\n")


def _cell(v):
    if v is True:
        return "1"
    if v is False:
        return "0"
    if v is None:
        return ""
    return str(v)


def cmd_strand(args, out):
    K = _load(args)
    payload = []
    for c in _coeffs(args):
        for f in _field_specs(K, c):
            st = quasi_linear_strand(K, f, args.max_m)
            table = betti_table(K, f, max_m=args.max_m)
            payload.append((f, st, table))
    if args.format == "json":
        out.write(formats.dumps({"schema_version": 1, "strands": [{
            "coeff": f.label,
            "strand": [[i, list(verts(U)), d] for (i, U), d in sorted(st.dimension_table().items(),
                                                                      key=lambda kv: (kv[0][0], verts(kv[0][1])))],
            "deficits": [[i, list(verts(U)), d, r] for i, U, q, d, r in st.deficits()],
        } for f, st, table in payload]}))
    elif args.format == "csv":
        rows = [["coeff", "i", "U", "strand_dim", "betti"]]
        for f, st, table in payload:
            for (i, U), r in sorted(table.multigraded.items(), key=lambda kv: (kv[0][0], verts(kv[0][1]))):
                if U:
                    rows.append([f.label, i, multidegree_label(U), st.dim(U, popcount_of(U) - i - 1), r])
        out.write(_csv(rows))
    else:
        from .hochster import GradedBettiTable

        for f, st, table in payload:
            out.write(f"# quasi-linear strand over {f} (coarse dimensions)\n")
            co = st.coarse()
            co[(0, 0)] = 0
            out.write(formats.render_betti_table(GradedBettiTable("quotient", f, {}, co), total=False))
            missing = list(st.deficits())
            out.write(f"# classes outside the strand: {sum(r - d for *_, d, r in missing)}\n")
            for i, U, q, d, r in missing:
                out.write(f"  i={i} U={{{multidegree_label(U)}}}: strand {d} of {r}\n")


def popcount_of(U: int) -> int:
    return bin(U).count("1")


def cmd_homology(args, out):
    K = _load(args)
    faces = K.faces
    if args.subset:
        U = mask_of(_vertex_list(args.subset))
        faces = [f for f in faces if f & ~U == 0]
    rows = []
    for c in _coeffs(args):
        if c.kind == "Z":
            h = integral_reduced_homology(faces)
            degs = sorted(set(h.free) | set(h.torsion))
            rows += [("Z", n, h.free.get(n, 0), h.torsion.get(n, [])) for n in degs]
        else:
            rows += [(c.label, n, r, []) for n, r in sorted(homology_ranks(faces, c).items())]
    if args.format == "json":
        out.write(formats.dumps({"schema_version": 1, "homology": [
            {"coeff": a, "degree": n, "rank": r, "torsion": t} for a, n, r, t in rows]}))
    elif args.format == "csv":
        out.write(_csv([["coeff", "degree", "rank", "torsion"]] + [[a, n, r, " ".join(map(str, t))]
                                                                   for a, n, r, t in rows]))
    else:
        if not rows:
            out.write("acyclic\n")
        for a, n, r, t in rows:
            tor = "".join(f" + Z/{x}" for x in t)
            out.write(f"H~_{n} over {'Q' if a == '0' else a if a == 'Z' else 'F' + a}: rank {r}{tor}\n")


def _emit_complex(K: SimplicialComplex, args, out, extra=None):
    if args.format == "json":
        d = {"schema_version": 1, "m": K.m, "facets": K.facet_lists(),
             "ghost_vertices": list(K.ghost_vertices)}
        if extra:
            d.update(extra)
        out.write(formats.dumps(d))
    elif args.format == "csv":
        out.write(_csv([["facet"]] + [[" ".join(map(str, f))] for f in K.facet_lists()]))
    else:
        if K.ghost_vertices:
            out.write(f"# ghost vertices: {' '.join(map(str, K.ghost_vertices))}\n")
        if K.facets == (0,):
            out.write(f"m {K.m}\n# only the empty face\n")
        else:
            out.write(formats.format_facet_text(K))


def cmd_dual(args, out):
    _emit_complex(alexander_dual(_load(args)), args, out)


def cmd_generate(args, out):
    _emit_complex(generate_family(args.family, seed=args.seed), args, out,
                  {"family": args.family, "seed": args.seed})


def cmd_sum(args, out):
    K = formats.parse_facet_text(_read(args.first))
    L = formats.parse_facet_text(_read(args.second))
    sb = _vertex_list(args.facet_b)
    glue = None
    if args.glue:
        ga = _vertex_list(args.glue)
        if len(ga) != len(sb):
            raise ZKError("--glue must list one vertex of facet-a per vertex of facet-b")
        glue = dict(zip(sb, ga))
    res = connected_sum_with_maps(K, _vertex_list(args.facet_a), L, sb, glue)
    _emit_complex(res.complex, args, out, {"second_vertex_map": {str(k): v for k, v in res.vertex_map_L.items()}})


def cmd_stellar(args, out):
    _emit_complex(stellar_subdivide_facet(_load(args), _vertex_list(args.facet)), args, out)


def cmd_survey(args, out, err):
    records = []
    failures = []
    for path in args.inputs:
        text = _read(path)
        try:
            if "[[" in text:
                records += formats.parse_lutz_library(text)
            else:
                records.append((path, formats.parse_facet_text(text)))
        except ZKError as e:
            failures.append((path, str(e)))
            err.write(f"skipped {path}: {e}\n")
    res = survey(records, args.char or ["0"], jobs=args.jobs, componentwise=args.componentwise, max_m=args.max_m)
    res.parse_failures = failures
    summary = res.summary()
    if args.format == "json":
        out.write(formats.dumps({"schema_version": 1, "rows": [r.values for r in res.rows], "summary": summary,
                                 "parse_failures": failures}))
    elif args.format == "text":
        out.write(format_summary(summary))
    else:
        out.write(res.to_csv(timing=args.timing))
        err.write(format_summary(summary))
    return 0 if res.ok else 1


COMMANDS = {
    "betti": cmd_betti, "classify": cmd_classify, "strand": cmd_strand, "homology": cmd_homology,
    "dual": cmd_dual, "generate": cmd_generate, "sum": cmd_sum, "stellar": cmd_stellar,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.command == "survey":
            return cmd_survey(args, out, err)
        COMMANDS[args.command](args, out)
        return 0
    except ZKError as e:
        err.write(f"zkstrand: {type(e).__name__}: {e}\n")
        return e.exit_code
    except OSError as e:
        err.write(f"zkstrand: {e}\n")
        return 1


def run():
    sys.exit(main())

