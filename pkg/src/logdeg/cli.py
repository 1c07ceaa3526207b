"""Command-line front end.

    logdeg degree --n 3
    logdeg table --from 3 --to 8 --format csv --check
    logdeg selfcheck --n 4
    logdeg oracle --seed 7 --workers 2
    logdeg bench --from 3 --to 6

Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Callable, Sequence

from . import __version__
from .charclass import BundleClass, segre, twist
from .degree import REFERENCE_DEGREES, DegreeError, DegreeResult, degree_L111, max_n
from .geometry import GeometryError, get_catalog
from .logforms import DEFAULT_SEED, run_oracle_suite
from .pushforward import EliminationError, push_power
from .ring import make_ring

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2
CSV_FIELDS = ("n", "degree", "pre_division_total", "term_count", "elapsed_ms")


class InputError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _unsigned(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logdeg", description="Degree of the (1,1,1) logarithmic component.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--max-n", type=_positive, default=None, help="resource cap for n (default: LOGDEG_MAX_N or 12)")

    p = sub.add_parser("degree", parents=[common], help="degree for a single n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--check", action="store_true", help="compare against the reference table")
    p.add_argument("--dump-classes", action="store_true", help="print the class catalog to stderr")

    p = sub.add_parser("table", parents=[common], help="degrees for a range of n")
    p.add_argument("--from", dest="n_from", type=int, default=3)
    p.add_argument("--to", dest="n_to", type=int, default=8)
    p.add_argument("--check", action="store_true")
    p.add_argument("--dump-classes", action="store_true")

    p = sub.add_parser("selfcheck", parents=[common], help="characteristic-class and pushforward checks")
    p.add_argument("--n", type=int, default=3)

    p = sub.add_parser("oracle", parents=[common], help="randomized differential-form oracle suite")
    p.add_argument("--seed", type=_unsigned, default=DEFAULT_SEED)
    p.add_argument("--forms", type=_positive, default=None, help="override the number of form instances")
    p.add_argument("--lemma", type=_positive, default=None, help="override the number of epsilon-expansion instances")

    p = sub.add_parser("bench", parents=[common], help="time the degree pipeline")
    p.add_argument("--from", dest="n_from", type=int, default=3)
    p.add_argument("--to", dest="n_to", type=int, default=6)
    return parser


# -- output -------------------------------------------------------------------


def _write_rows(rows: list[DegreeResult], fmt: str, out, marker: bool = True) -> None:
    if fmt == "json":
        payload = [r.as_dict() for r in rows]
        json.dump(payload[0] if len(payload) == 1 else payload, out, indent=None)
        out.write("\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in rows:
            d = r.as_dict()
            w.writerow([d[k] for k in CSV_FIELDS])
    else:
        for r in rows:
            tag = " unverified" if marker and r.verified is None else ""
            out.write(f"n={r.n} degree={r.degree} pre_division_total={r.pre_division_total} "
                      f"terms={r.term_count} elapsed_ms={r.elapsed_ms}{tag}\n")


def _check_rows(rows: list[DegreeResult], err) -> bool:
    ok = True
    for r in rows:
        if r.verified is False:
            err.write(f"MISMATCH n={r.n}: computed {r.degree}, reference {REFERENCE_DEGREES[r.n]}\n")
            ok = False
        elif r.verified is None:
            err.write(f"note: n={r.n} has no reference value (unverified)\n")
    return ok


def _dump(n: int, err) -> None:
    err.write(f"# class catalog, n={n}\n")
    for name, c in get_catalog(n).entries().items():
        err.write(f"{name} = {c.to_text()}\n")


def _validate_n(n: int, limit: int) -> None:
    if n < 3:
        raise InputError(f"n must be at least 3, got {n}")
    if n > limit:
        raise InputError(f"n={n} exceeds the resource cap {limit} (raise --max-n or LOGDEG_MAX_N)")


# -- commands -----------------------------------------------------------------


def cmd_degree(args, out, err) -> int:
    limit = args.max_n or max_n()
    _validate_n(args.n, limit)
    if args.dump_classes:
        _dump(args.n, err)
    r = degree_L111(args.n, workers=args.workers, limit=limit)
    if args.format == "text":
        out.write(f"{r.degree}{' unverified' if r.verified is None else ''}\n")
    else:
        _write_rows([r], args.format, out)
    if args.check and not _check_rows([r], err):
        return EXIT_VERIFY
    return EXIT_OK


def cmd_table(args, out, err) -> int:
    limit = args.max_n or max_n()
    if args.n_from > args.n_to:
        raise InputError(f"empty range {args.n_from}..{args.n_to}")
    for n in (args.n_from, args.n_to):
        _validate_n(n, limit)
    rows = []
    for n in range(args.n_from, args.n_to + 1):
        if args.dump_classes:
            _dump(n, err)
        rows.append(degree_L111(n, workers=args.workers, limit=limit))
    _write_rows(rows, args.format, out)
    if args.check and not _check_rows(rows, err):
        return EXIT_VERIFY
    return EXIT_OK


def selfcheck_suite(n: int) -> list[tuple[str, bool]]:
    """Exact structural checks on the catalog for one n."""
    cat = get_catalog(n)
    results: list[tuple[str, bool]] = []
    for name, b in cat.bundles().items():
        results.append((f"c*s=1 [{name}]", (b.chern * segre(b)) == 1))
    results.append((
        "whitney c(Q)c(N_(B0)red B0) = c(N_(B0)red X)",
        cat.chern_Q.chern * cat.chern_N_B0red_B0.chern == cat.chern_N_B0red_X.chern,
    ))
    results.append(("twist vs split oracle (ranks 1..5)", all(_twist_split_ok(r) for r in range(1, 6))))
    e1 = next(s for s in cat.stages() if s.symbol == "e1")
    low = all(push_power(e1, j).is_zero() for j in range(1, 2 * n))
    results.append(("push e1^j = 0 for 0<j<2n", low))
    results.append(("push e1^2n = -[(B0)red]", push_power(e1, 2 * n) == -cat.class_B0red))
    pure = all(
        push_power(st, j).is_homogeneous(j) for st in cat.stages() for j in range(0, cat.dim + 1)
    )
    results.append(("push_power outputs are pure", pure))
    return results


def _twist_split_ok(rank: int) -> bool:
    names = tuple(f"a{i}" for i in range(rank)) + ("t",)
    R = make_ring(names, (rank + 2,) * (rank + 1), rank + 1)
    roots = [R.gen(f"a{i}") for i in range(rank)]
    t = R.gen("t")
    c = R.one()
    split = R.one()
    for a in roots:
        c = c * (R.one() + a)
        split = split * (R.one() + a + t)
    return twist(BundleClass(rank, c), t).chern == split


def cmd_selfcheck(args, out, err) -> int:
    limit = args.max_n or max_n()
    _validate_n(args.n, limit)
    results = selfcheck_suite(args.n)
    if args.format == "json":
        json.dump([{"check": name, "passed": ok} for name, ok in results], out)
        out.write("\n")
    else:
        for name, ok in results:
            out.write(f"{'PASS' if ok else 'FAIL'} {name}\n")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_VERIFY


def cmd_oracle(args, out, err) -> int:
    sizes = {}
    if args.forms:
        sizes["forms"] = args.forms
    if args.lemma:
        sizes["lemma"] = args.lemma
    reports = run_oracle_suite(args.seed, workers=args.workers, sizes=sizes)
    if args.format == "json":
        json.dump(
            [
                {"property": r.name, "checked": r.checked, "failed": r.failed, "counterexamples": r.counterexamples}
                for r in reports
            ],
            out,
        )
        out.write("\n")
    else:
        out.write(f"seed={args.seed}\n")
        for r in reports:
            out.write(r.line() + "\n")
            for cx in r.counterexamples:
                out.write(f"  counterexample: {cx}\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def cmd_bench(args, out, err) -> int:
    limit = args.max_n or max_n()
    if args.n_from > args.n_to:
        raise InputError(f"empty range {args.n_from}..{args.n_to}")
    for n in (args.n_from, args.n_to):
        _validate_n(n, limit)
    rows = [degree_L111(n, workers=args.workers, limit=limit) for n in range(args.n_from, args.n_to + 1)]
    if args.format == "text":
        for r in rows:
            out.write(f"n={r.n} elapsed_ms={r.elapsed_ms} terms={r.term_count}\n")
        out.write(f"total_ms={sum(r.elapsed_ms for r in rows)}\n")
    else:
        _write_rows(rows, args.format, out, marker=False)
    return EXIT_OK


COMMANDS: dict[str, Callable] = {
    "degree": cmd_degree,
    "table": cmd_table,
    "selfcheck": cmd_selfcheck,
    "oracle": cmd_oracle,
    "bench": cmd_bench,
}


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out, err)
    except (InputError, GeometryError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except ValueError as exc:
        # raised by LOGDEG_MAX_N parsing and range validation
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (DegreeError, EliminationError) as exc:
        err.write(f"verification failure: {exc}\n")
        return EXIT_VERIFY


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
