"""Command line front end.

Subcommands either transform diagram files (aut, compose, tensor,
closures), enumerate and sum diagram classes (enumerate, partition,
free-energy, expect), or run the built-in cross-checks (verify ...).
Output is tab-separated rows on stdout, or one JSON document with
``--format json``; identical invocations print identical bytes.
"""

import argparse
import json
import sys

from .algebra import AlgebraError, expectation_value, load_algebra
from .colours import ColourTableError
from .coverings import CoveringError
from .diagram import Diagram, DiagramError, TypedDiagram
from .dsl import ParseError, parse_diagram, parse_table, serialize_diagram
from .gaussian import GaussianError
from .generate import enumerate_closed
from .iso import canonical_code
from .prop import closures, compose, tensor
from .series import (diagram_monomial, format_monomial, free_energy_series,
                     partition_series, sorted_terms)
from . import verify

_ERRORS = (ParseError, DiagramError, ColourTableError, AlgebraError,
           GaussianError, CoveringError, OSError, ValueError)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_diagram(path: str, table_path: str | None):
    table = parse_table(_read(table_path)) if table_path else None
    return parse_diagram(_read(path), table)


def _one_line(d: Diagram) -> str:
    return " ".join(serialize_diagram(d).split())


def _series_rows(s) -> tuple[list, dict]:
    terms = [(format_monomial(m), str(c)) for m, c in sorted_terms(s)]
    rows = [[mono, c] for mono, c in terms]
    obj = {"max_degree": s.max_degree,
           "terms": [{"monomial": mono, "coefficient": c}
                     for mono, c in terms]}
    return rows, obj


# -- command handlers --------------------------------------------------------

def _cmd_aut(args):
    code = canonical_code(_load_diagram(args.file, args.table))
    rows = [["aut", code.aut_order], ["code", code.code.hex()]]
    return rows, {"aut": code.aut_order, "code": code.code.hex()}, 0


def _typed(path: str, table_path: str | None) -> TypedDiagram:
    d = _load_diagram(path, table_path)
    if not isinstance(d, TypedDiagram):
        raise DiagramError(f"{path}: needs a type header to be composed")
    return d


def _cmd_compose(args):
    out = compose(_typed(args.first, args.table),
                  _typed(args.second, args.table))
    text = serialize_diagram(out)
    return [[text.rstrip("\n")]], {"diagram": text}, 0


def _cmd_tensor(args):
    out = tensor(_typed(args.first, args.table),
                 _typed(args.second, args.table))
    text = serialize_diagram(out)
    return [[text.rstrip("\n")]], {"diagram": text}, 0


def _cmd_closures(args):
    d = _load_diagram(args.file, args.table)
    if isinstance(d, TypedDiagram):
        d = d.base
    found = []
    for closed, mult in closures(d):
        found.append((mult, canonical_code(closed).aut_order,
                      _one_line(closed)))
    found.sort(key=lambda row: (row[2], row[0]))
    rows = [list(row) for row in found]
    obj = {"closures": [{"multiplicity": m, "aut": a, "diagram": s}
                        for m, a, s in found]}
    return rows, obj, 0


def _cmd_enumerate(args):
    table = parse_table(_read(args.table))
    root = None
    if args.root:
        root = parse_diagram(_read(args.root), table)
        if isinstance(root, TypedDiagram):
            root = root.base
    classes = enumerate_closed(table, max_degree=args.max_degree, root=root,
                               connected=args.connected, reduced=args.reduced)
    rows, items = [], []
    for cls in classes:
        marked = any(v.root for v in cls.rep.vertices) or cls.rep.root_pairs
        text = "-" if marked else _one_line(cls.rep)
        mono = format_monomial(diagram_monomial(cls.rep, table))
        rows.append([cls.degree, cls.aut, mono, text])
        items.append({"degree": cls.degree, "aut": cls.aut,
                      "monomial": mono, "diagram": text})
    return rows, {"classes": items}, 0


def _series_source(args) -> tuple:
    if bool(args.table) == bool(args.algebra):
        raise DiagramError("give exactly one of --table and --algebra")
    if args.table:
        return parse_table(_read(args.table)), None
    a = load_algebra(_read(args.algebra))
    return a.table, a


def _cmd_partition(args):
    table, algebra = _series_source(args)
    if algebra is None:
        s = partition_series(table, args.max_degree)
    else:
        s = expectation_value(Diagram(), algebra, with_potential=True,
                              max_degree=args.max_degree)
    rows, obj = _series_rows(s)
    return rows, obj, 0


def _cmd_free_energy(args):
    table, algebra = _series_source(args)
    if algebra is None:
        s = free_energy_series(table, args.max_degree)
    else:
        s = expectation_value(Diagram(), algebra, with_potential=True,
                              max_degree=args.max_degree).log()
    rows, obj = _series_rows(s)
    return rows, obj, 0


def _cmd_expect(args):
    a = load_algebra(_read(args.algebra))
    d = parse_diagram(_read(args.file), a.table)
    if isinstance(d, TypedDiagram):
        d = d.base
    s = expectation_value(d, a, with_potential=args.potential,
                          max_degree=args.max_degree)
    rows, obj = _series_rows(s)
    return rows, obj, 0


def _finish_check(check: verify.CheckResult):
    rows = [[line] for line in check.lines]
    rows.append(["PASS" if check.ok else "FAIL"])
    obj = {"name": check.name, "ok": check.ok, "lines": list(check.lines)}
    return rows, obj, 0 if check.ok else 1


def _cmd_verify_wick(args):
    return _finish_check(verify.check_wick())


def _cmd_verify_taylor(args):
    return _finish_check(verify.check_taylor())


def _cmd_verify_expfz(args):
    table = parse_table(_read(args.table))
    return _finish_check(verify.check_exp_free_energy(table, args.max_degree))


def _cmd_verify_frt(args):
    a = load_algebra(_read(args.algebra))
    root = None
    if args.root:
        root = parse_diagram(_read(args.root), a.table)
        if isinstance(root, TypedDiagram):
            root = root.base
    check = verify.check_frt(a, root, with_potential=args.potential,
                             max_degree=args.max_degree)
    return _finish_check(check)


def _cmd_verify_fubini(args):
    return _finish_check(verify.check_coverings())


# -- wiring ------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("tsv", "json"), default="tsv",
                     help="output as tab-separated rows (default) or JSON")

    p = argparse.ArgumentParser(
        prog="fdcalc", description="diagram calculus toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("aut", parents=[fmt],
                       help="automorphism count and canonical code")
    q.add_argument("file")
    q.add_argument("--table", help="colour table fixing special colours")
    q.set_defaults(handler=_cmd_aut)

    for name, handler, blurb in (
            ("compose", _cmd_compose, "plug the second diagram's outputs"
             " into the first diagram's inputs"),
            ("tensor", _cmd_tensor, "place two typed diagrams side by side")):
        q = sub.add_parser(name, parents=[fmt], help=blurb)
        q.add_argument("first")
        q.add_argument("second")
        q.add_argument("--table")
        q.set_defaults(handler=handler)

    q = sub.add_parser("closures", parents=[fmt],
                       help="close off the legs in every possible way")
    q.add_argument("file")
    q.add_argument("--table")
    q.set_defaults(handler=_cmd_closures)

    q = sub.add_parser("enumerate", parents=[fmt],
                       help="closed diagram classes up to a degree")
    q.add_argument("--table", required=True)
    q.add_argument("--max-degree", type=int, required=True)
    q.add_argument("--connected", action="store_true")
    q.add_argument("--reduced", action="store_true")
    q.add_argument("--root", help="diagram file whose marked copy every"
                                  " class must contain")
    q.set_defaults(handler=_cmd_enumerate)

    for name, handler, blurb in (
            ("partition", _cmd_partition,
             "series of all closed diagrams weighted by 1/|Aut|"),
            ("free-energy", _cmd_free_energy,
             "series of connected closed diagrams weighted by 1/|Aut|")):
        q = sub.add_parser(name, parents=[fmt], help=blurb)
        q.add_argument("--table")
        q.add_argument("--algebra")
        q.add_argument("--max-degree", type=int, required=True)
        q.set_defaults(handler=handler)

    q = sub.add_parser("expect", parents=[fmt],
                       help="expectation of a diagram in an algebra")
    q.add_argument("file")
    q.add_argument("--algebra", required=True)
    q.add_argument("--potential", action="store_true",
                   help="weight by the interaction sum of the colour table")
    q.add_argument("--max-degree", type=int, default=12)
    q.set_defaults(handler=_cmd_expect)

    v = sub.add_parser("verify", help="built-in cross-checks")
    vsub = v.add_subparsers(dest="check", required=True)

    q = vsub.add_parser("wick", parents=[fmt],
                        help="moment recursion against quadrature")
    q.set_defaults(handler=_cmd_verify_wick)

    q = vsub.add_parser("frt", parents=[fmt],
                        help="diagram sum against the Gaussian average")
    q.add_argument("--algebra", required=True)
    q.add_argument("--root", help="open diagram file to take the"
                                  " expectation of")
    q.add_argument("--potential", action="store_true")
    q.add_argument("--max-degree", type=int, default=8)
    q.set_defaults(handler=_cmd_verify_frt)

    q = vsub.add_parser("expfz", parents=[fmt],
                        help="exp of the connected sum against the full sum")
    q.add_argument("--table", required=True)
    q.add_argument("--max-degree", type=int, default=8)
    q.set_defaults(handler=_cmd_verify_expfz)

    q = vsub.add_parser("fubini", parents=[fmt],
                        help="integration identities on stock coverings")
    q.set_defaults(handler=_cmd_verify_fubini)

    q = vsub.add_parser("taylor", parents=[fmt],
                        help="star-diagram Taylor sums against evaluation")
    q.set_defaults(handler=_cmd_verify_taylor)

    return p


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        rows, obj, rc = args.handler(args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(obj, sort_keys=True, separators=(",", ":")))
    else:
        for row in rows:
            print("\t".join(str(x) for x in row))
    return rc


if __name__ == "__main__":
    sys.exit(main())
