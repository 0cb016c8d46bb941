"""Command-line entry point.

Exit codes: 0 all checks pass, 1 an audited check fails, 2 bad input,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import audit as audit_mod
from .errors import (
    ColoringInconsistent,
    ConjugateIllDefined,
    EmptyRegulus,
    NotPrimePower,
    NotSkew,
    SigmaDegenerate,
    StructureFormatError,
)
from .fileio import load_structure, save_report, save_structure
from .galois import field_make
from .incidence import classify
from .mutate import write_corpus
from .pg3 import build_model, export_structure
from .reguli import conjugate, enumerate_reguli, regulus
from .report import DEFAULT_SEED
from .structure import bits

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3

# PG(3,3) size; bigger structures need --large for an exhaustive audit
DEFAULT_MAX_LINES = 130

THEOREM_ITEMS = (
    "unique_plane", "unique_point", "unique_transversal", "regulus_nonempty",
    "regulus_pairwise_skew", "skew_pair_extends", "P1_iff_P2", "conjugate_well_defined",
    "conjugate_involution", "two_line_intersection", "point_coverage", "plane_coverage",
    "join_unique_line", "join_in_plane",
)


class _InputError(Exception):
    pass


class _IOFailure(Exception):
    pass


def _err(msg):
    print(f"error: {msg}", file=sys.stderr)


def _load(path):
    try:
        return load_structure(path)
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc.strerror or exc}") from exc
    except StructureFormatError as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _print_items(items):
    for it in items:
        print(f"{it.status:<7} {it.name:<24} cases={it.cases_checked}" + (
            f"  notes={';'.join(it.notes)}" if it.notes else ""))


def cmd_build(args):
    try:
        spec = field_make(args.q)
    except NotPrimePower as exc:
        _err(str(exc))
        return EXIT_INPUT
    model = build_model(spec)
    try:
        save_structure(export_structure(model), args.out)
    except OSError as exc:
        _err(f"cannot write {args.out}: {exc}")
        return EXIT_IO
    print(f"PG(3,{args.q}): {len(model.points)} points, {len(model.lines)} lines, "
          f"{len(model.planes)} planes -> {args.out}")
    return EXIT_OK


def _check_size(s, args):
    if args.profile == audit_mod.FULL and s.n > DEFAULT_MAX_LINES and not args.large:
        raise _InputError(
            f"{s.n} lines: a full audit this large needs --large (or use --profile fast)"
        )


def cmd_audit(args):
    s = _load(args.path)
    _check_size(s, args)
    report = audit_mod.run_audit(s, args.profile, args.seed)
    _print_items(report.items)
    print(f"overall: {report.overall}  digest: {report.digest[:16]}")
    if args.out:
        try:
            save_report(report, s, args.out)
        except OSError as exc:
            _err(f"cannot write {args.out}: {exc}")
            return EXIT_IO
    return EXIT_OK if report.overall == "PASS" else EXIT_FAIL


def cmd_regulus(args):
    s = _load(args.path)
    names = [x.strip() for x in args.lines.split(",")]
    if len(names) != 3:
        raise _InputError("--lines needs exactly three comma-separated labels")
    index = {label: i for i, label in enumerate(s.labels)}
    unknown = [x for x in names if x not in index]
    if unknown:
        raise _InputError(f"unknown line labels: {', '.join(unknown)}")
    u, v, w = (index[x] for x in names)
    for x, y in ((u, v), (u, w), (v, w)):
        if not s.skew(x, y):
            raise _InputError(f"{s.labels[x]} and {s.labels[y]} are incident, not skew")
    try:
        r = regulus(s, u, v, w)
        c = conjugate(s, r)
    except (NotSkew, EmptyRegulus, ConjugateIllDefined) as exc:
        _err(str(exc))
        return EXIT_FAIL
    print("regulus:   " + " ".join(s.labels[i] for i in r.members()))
    print("conjugate: " + " ".join(s.labels[i] for i in c.members()))
    return EXIT_OK


def cmd_theorems(args):
    s = _load(args.path)
    _check_size(s, args)
    report = audit_mod.run_audit(s, args.profile, args.seed)
    items = [it for it in report.items if it.name in THEOREM_ITEMS]
    _print_items(items)
    return EXIT_OK if all(it.status == "PASS" for it in items) else EXIT_FAIL


def cmd_mutate(args):
    s = _load(args.path)
    try:
        manifest = write_corpus(s, args.seed, args.count, args.out_dir)
    except OSError as exc:
        _err(f"cannot write corpus: {exc}")
        return EXIT_IO
    except ValueError as exc:
        raise _InputError(str(exc)) from exc
    print(f"wrote {len(manifest['mutants'])} mutants to {args.out_dir}")
    return EXIT_OK


def cmd_export(args):
    s = _load(args.path)
    if args.what == "reguli":
        sets = [r.members() for r in enumerate_reguli(s)]
    else:
        try:
            g = classify(s)
        except (SigmaDegenerate, ColoringInconsistent) as exc:
            _err(f"bundles cannot be classified: {exc}")
            return EXIT_FAIL
        group = g.points if args.what == "points" else g.planes
        sets = [bits(B.lines) for B in group]
    json.dump([[s.labels[i] for i in members] for members in sets], sys.stdout)
    sys.stdout.write("\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="linegeom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write the PG(3,q) structure file")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    def audit_opts(p):
        p.add_argument("--profile", choices=(audit_mod.FULL, audit_mod.FAST), default=audit_mod.FULL)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--large", action="store_true", help="allow full audits beyond PG(3,3)")

    p = sub.add_parser("audit", help="check every axiom and theorem")
    p.add_argument("path")
    audit_opts(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("regulus", help="print [u v w] and its conjugate")
    p.add_argument("path")
    p.add_argument("--lines", required=True, help="three labels, comma separated")
    p.set_defaults(func=cmd_regulus)

    p = sub.add_parser("theorems", help="run the theorem checks only")
    p.add_argument("path")
    audit_opts(p)
    p.set_defaults(func=cmd_theorems)

    p = sub.add_parser("mutate", help="write a seeded mutation corpus")
    p.add_argument("path")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("export", help="print points, planes or reguli as label lists")
    p.add_argument("path")
    p.add_argument("--what", choices=("points", "planes", "reguli"), required=True)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except _InputError as exc:
        _err(str(exc))
        return EXIT_INPUT
    except _IOFailure as exc:
        _err(str(exc))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
