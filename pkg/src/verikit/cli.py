"""Command-line test runner: ``list``, ``run``, ``report`` and ``bench``.

Exit codes: 0 ok, 1 test failure, 2 coverage below ``--fail-under``,
64 bad arguments, 65 unreadable coverage database.
"""

import argparse
import csv
import os
import sys
import time
from fractions import Fraction

from . import tb  # noqa: F401  (registers the bundled tests)
from .crv import derive_seed, parse_seed
from .fcov import CoverageDb, CoverageDbError, merge, percent, read_coverage_db, write_coverage_db
from .uvm import parse_log_level, registered_tests, run_test

EXIT_OK = 0
EXIT_TEST_FAILED = 1
EXIT_COVERAGE = 2
EXIT_USAGE = 64
EXIT_DATAERR = 65

LOG_ENV = "VERIKIT_LOG"
BENCH_TESTS = ("alu.base", "ecc.base")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed(text):
    try:
        return parse_seed(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r} (decimal or 0x-hex, 64-bit)") from None


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        value = 0
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _percentage(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid percentage {text!r}") from None


def _count_list(text):
    try:
        counts = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        counts = []
    if not counts or any(c < 1 for c in counts):
        raise argparse.ArgumentTypeError(f"expected comma-separated positive counts, got {text!r}")
    return counts


def build_parser():
    p = _Parser(prog="verikit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="print registered test names")

    r = sub.add_parser("run", help="run one test or all tests")
    r.add_argument("--test", default="all", help="test name or 'all'")
    r.add_argument("--seed", type=_seed, default=1)
    r.add_argument("--transactions", type=_positive_int, default=None)
    r.add_argument("--cov-out", default="cov.xml")
    r.add_argument("--log-level", default="INFO")
    r.add_argument("--fail-under", type=_percentage, default=None)

    rep = sub.add_parser("report", help="print a coverage database")
    rep.add_argument("path")
    rep.add_argument("--fail-under", type=_percentage, default=None)

    b = sub.add_parser("bench", help="time alu.base and ecc.base at several transaction counts")
    b.add_argument("--transactions", type=_count_list, default=[10000, 20000, 30000])
    b.add_argument("--csv", default=None, help="output file (default: stdout)")
    b.add_argument("--seed", type=_seed, default=1)
    return p


def _below(db, fail_under):
    return fail_under is not None and db.coverage * 100 < fail_under


def cmd_list(args, out):
    for name in registered_tests():
        print(name, file=out)
    return EXIT_OK


def _select(selector):
    names = registered_tests()
    if selector == "all":
        return names
    if selector not in names:
        raise UsageError(f"unknown test {selector!r}; choose from: {', '.join(names) or '<none>'}")
    return [selector]


def cmd_run(args, out):
    names = _select(args.test)
    level_text = os.environ.get(LOG_ENV) or args.log_level
    try:
        level = parse_log_level(level_text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    merged = CoverageDb()
    failed = False
    for name in names:
        seed = derive_seed(args.seed, name)
        res = run_test(name, seed, log_level=level, transactions=args.transactions)
        for line in res.log:
            print(line, file=sys.stderr)
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {name} seed={seed:#018x} transactions={res.transactions} "
              f"sim_ns={res.sim_time} coverage={percent(res.coverage.coverage)}%", file=out)
        for f in res.failures:
            print(f"  {f}", file=out)
        failed |= not res.passed
        merged = merge(merged, res.coverage)
    write_coverage_db(merged, args.cov_out)
    print(f"coverage {percent(merged.coverage)}% -> {args.cov_out}", file=out)
    if failed:
        return EXIT_TEST_FAILED
    if _below(merged, args.fail_under):
        print(f"coverage below --fail-under {float(args.fail_under):g}", file=out)
        return EXIT_COVERAGE
    return EXIT_OK


def format_report(db):
    rows = [("item", "coverage")]
    for g in db.groups.values():
        rows.append((g.name, percent(g.coverage)))
        for cp in g.coverpoints.values():
            covered = sum(b.covered for b in cp.bins)
            rows.append((f"  {cp.name} ({covered}/{len(cp.bins)} bins)", percent(cp.coverage)))
        for cr in g.crosses.values():
            total = len(cr.hits)
            missing = cr.uncovered()
            rows.append((f"  {cr.name} ({total - len(missing)}/{total} bins)", percent(cr.coverage)))
            for t in missing[:8]:
                rows.append((f"    missing {t}", ""))
            if len(missing) > 8:
                rows.append((f"    ... {len(missing) - 8} more", ""))
    rows.append(("total", percent(db.coverage)))
    width = max(len(r[0]) for r in rows)
    return "\n".join(f"{a:<{width}}  {b:>7}".rstrip() for a, b in rows)


def cmd_report(args, out):
    try:
        db = read_coverage_db(args.path)
    except (OSError, CoverageDbError) as exc:
        print(f"verikit: cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    meta = f"test={db.test or '-'} seed={db.seed or '-'} transactions={db.transactions}"
    print(meta, file=out)
    print(format_report(db), file=out)
    if _below(db, args.fail_under):
        return EXIT_COVERAGE
    return EXIT_OK


def bench(counts, seed=1, tests=BENCH_TESTS):
    """Yield one row dict per (count, test), in execution order."""
    for n in counts:
        for name in tests:
            t0 = time.perf_counter()
            res = run_test(name, derive_seed(seed, name), transactions=n, log_level="WARNING")
            wall = time.perf_counter() - t0
            if not res.passed:
                raise RuntimeError(f"{name} failed during bench: {res.failures}")
            yield {"test": name, "transactions": n, "wall_seconds": f"{wall:.4f}",
                   "sim_ns": res.sim_time}


def cmd_bench(args, out):
    fields = ["test", "transactions", "wall_seconds", "sim_ns"]
    fh = open(args.csv, "w", newline="") if args.csv else out
    try:
        w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for row in bench(args.transactions, args.seed):
            w.writerow(row)
            fh.flush()
    except RuntimeError as exc:
        print(f"verikit: {exc}", file=sys.stderr)
        return EXIT_TEST_FAILED
    finally:
        if fh is not out:
            fh.close()
    return EXIT_OK


COMMANDS = {"list": cmd_list, "run": cmd_run, "report": cmd_report, "bench": cmd_bench}


def main(argv=None, out=None):
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"verikit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
