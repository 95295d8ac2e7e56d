"""Command-line front end: radius tables, verification runs, sweeps and series dumps.

Ranges are ``lo..hi`` (inclusive) or a single integer; ``a0`` grids are
``start:step:end`` (inclusive) or a single value.  Exit codes: 0 success,
1 a check failed, 2 bad arguments, 3 no root found, 4 inconclusive check.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from decimal import Decimal, InvalidOperation

from . import radii, verify
from .extremal import FORMS, ExtremalFunction, to_series
from .series import dump_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NO_ROOT, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4
FORMATS = ("table", "csv", "jsonl")


class UsageError(ValueError):
    pass


# -- argument parsing --------------------------------------------------------

def parse_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = (int(p) for p in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected lo..hi") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def parse_grid(text: str) -> list[float]:
    """``start:step:end`` evaluated in decimal so that end points are hit exactly."""
    try:
        parts = [Decimal(p) for p in text.split(":")]
    except InvalidOperation:
        raise UsageError(f"bad grid {text!r}; expected start:step:end") from None
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise UsageError(f"bad grid {text!r}; expected start:step:end")
    start, step, end = parts
    if step <= 0 or end < start:
        raise UsageError(f"empty grid {text!r}")
    out, v = [], start
    while v <= end:
        out.append(float(v))
        v += step
    return out


def _eps(text: str) -> float:
    v = float(text)
    if not (0.0 < v < 0.5):
        raise argparse.ArgumentTypeError("eps must lie in (0, 0.5)")
    return v


def _tol(text: str) -> float:
    v = float(text)
    if v < radii.MIN_TOL:
        raise argparse.ArgumentTypeError(f"tolerance must be >= {radii.MIN_TOL}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polybohr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def output_opts(p):
        p.add_argument("--format", choices=FORMATS, default="table")
        p.add_argument("--output", help="write here instead of standard output")

    p = sub.add_parser("radii", help="tabulate radius equations")
    p.add_argument("--family", default="all",
                   help="family name (" + ", ".join(f.value for f in radii.Family) + ") or all")
    p.add_argument("--N", default="1", help="range lo..hi for N-dependent families")
    p.add_argument("--n", default="1", help="dimension range lo..hi")
    p.add_argument("--a0", default="0", help="grid start:step:end for a0-dependent families")
    p.add_argument("--variant", choices=radii.CUBIC_VARIANTS + ("both",), default="both",
                   help="leading factor of the cubic")
    p.add_argument("--tol", type=_tol, default=1e-13)
    output_opts(p)

    def check_opts(p):
        p.add_argument("--n", default="1", help="dimension range lo..hi")
        p.add_argument("--N", default="1", help="cutoff range lo..hi")
        p.add_argument("--a0", default="0", help="grid start:step:end")
        p.add_argument("--eps", type=_eps, default=None,
                       help="relative distance from the radius (1e-3 below, 1e-2 sharp)")
        p.add_argument("--path", choices=("exact", "series"), default="exact")
        p.add_argument("--K", type=int, default=verify.SERIES_K,
                       help="truncation degree for the series path")
        p.add_argument("--seed", type=int, default=None,
                       help="seed for random instances (default: $POLYBOHR_SEED or built-in)")
        output_opts(p)

    p = sub.add_parser("verify", help="run one theorem or lemma check")
    p.add_argument("--theorem", required=True, help="one of " + ", ".join(verify.TAGS))
    p.add_argument("--sharp", action="store_true", help="probe sharpness outside the radius")
    p.add_argument("--inside", action="store_true",
                   help="with --sharp, probe inside the radius instead (expects no witness)")
    check_opts(p)

    p = sub.add_parser("sweep", help="below and sharp checks over a parameter grid")
    p.add_argument("--theorem", default="all", help="comma-separated tags or all")
    p.add_argument("--jobs", type=int, default=1)
    check_opts(p)

    p = sub.add_parser("series-dump", help="coefficient table of an extremal function")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--form", default="minus", help="minus or plus")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--K", type=int, default=5)
    p.add_argument("--unit", action="store_true", help="rescale to the unit polydisk")
    p.add_argument("--all", action="store_true", help="include zero coefficients")
    p.add_argument("--output")
    return parser


# -- output ------------------------------------------------------------------

@contextmanager
def _sink(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _table_cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def emit(rows: list[dict], fields: list[str], fmt: str, stream) -> None:
    if fmt == "jsonl":
        for row in rows:
            stream.write(json.dumps({k: row[k] for k in fields}) + "\n")
    elif fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([_cell(row[k]) for k in fields])
    else:
        cells = [[_table_cell(row[k]) for k in fields] for row in rows]
        widths = [max([len(f)] + [len(c[i]) for c in cells]) for i, f in enumerate(fields)]
        stream.write("  ".join(f.rjust(w) for f, w in zip(fields, widths)).rstrip() + "\n")
        for c in cells:
            stream.write("  ".join(v.rjust(w) for v, w in zip(c, widths)).rstrip() + "\n")


# -- commands ----------------------------------------------------------------

RADII_FIELDS = ["family", "variant", "n", "N", "a0", "x", "r", "width", "valid"]


def cmd_radii(args) -> int:
    fams = list(radii.Family) if args.family == "all" else [radii.Family.parse(args.family)]
    Ns, ns, a0s = parse_range(args.N), parse_range(args.n), parse_grid(args.a0)
    variants = radii.CUBIC_VARIANTS if args.variant == "both" else (args.variant,)
    rows, status = [], EXIT_OK
    for fam in fams:
        for eq in _equations(fam, Ns, a0s, variants):
            try:
                cert = radii.solve(eq, args.tol)
            except radii.NoRootError as exc:
                print(f"polybohr: {exc}", file=sys.stderr)
                status = EXIT_NO_ROOT
                continue
            for n in ns:
                rows.append({"family": fam.value,
                             "variant": eq.variant if fam is radii.Family.CUBIC_A0 else None,
                             "n": n, "N": eq.N, "a0": eq.a0, "x": cert.midpoint,
                             "r": cert.midpoint / n, "width": cert.width,
                             "valid": cert.is_valid()})
    with _sink(args.output) as out:
        emit(rows, RADII_FIELDS, args.format, out)
    return status


def _equations(fam, Ns, a0s, variants):
    if fam in radii.NEEDS_N:
        return [radii.RadiusEquation(fam, N=N) for N in Ns]
    if fam is radii.Family.CUBIC_A0:
        return [radii.RadiusEquation(fam, a0=a0, variant=v) for a0 in a0s for v in variants]
    if fam in radii.NEEDS_A0:
        return [radii.RadiusEquation(fam, a0=a0) for a0 in a0s]
    return [radii.RadiusEquation(fam)]


def _exit_for(verdicts) -> int:
    verdicts = list(verdicts)
    if verify.FAIL in verdicts:
        return EXIT_FAIL
    if verify.INCONCLUSIVE in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _theorem_jobs(tag: str, args, sharp: bool, side: int = 1) -> list[tuple]:
    spec = verify.theorem(tag)
    eps = args.eps if args.eps is not None else (1e-2 if sharp else 1e-3)
    if sharp and not eps < 0.2:
        raise UsageError("sharpness probes need eps < 0.2")
    jobs = []
    for n in parse_range(args.n):
        if spec.parameter == "N":
            params = [(N, None) for N in parse_range(args.N)]
        elif spec.parameter == "a0":
            params = [(None, a0) for a0 in parse_grid(args.a0)]
        else:
            params = [(None, None)]
        for N, a0 in params:
            jobs.append((tag, n, N, a0, eps, args.path, args.K, sharp, side))
    return jobs


def run_job(job) -> verify.VerificationReport:
    tag, n, N, a0, eps, path, K, sharp, side = job
    if sharp:
        return verify.check_sharp(tag, n, N, a0, eps, path, K, side)
    return verify.check_below(tag, n, N, a0, eps, path, K)


def _lemma_reports(tag: str, args) -> list[verify.VerificationReport]:
    seed = verify.default_seed() if args.seed is None else args.seed
    reports = []
    for n in parse_range(args.n):
        Ns = parse_range(args.N) if tag == "lemma5" else [1]
        for N in Ns:
            reports.extend(verify.check_lemma(tag, n, N=N, seed=seed))
    return reports


def cmd_verify(args) -> int:
    tag = args.theorem
    if tag not in verify.TAGS:
        print(f"polybohr: unknown theorem tag {tag!r}; expected one of "
              f"{', '.join(verify.TAGS)}", file=sys.stderr)
        return EXIT_USAGE
    if tag in verify.LEMMAS:
        reports = _lemma_reports(tag, args)
    else:
        side = -1 if args.inside else 1
        reports = [run_job(j) for j in _theorem_jobs(tag, args, args.sharp, side)]
    rows = [verify.record_row(r) for rep in reports for r in rep.records]
    with _sink(args.output) as out:
        emit(rows, list(verify.FIELDS), args.format, out)
    return _exit_for(rep.verdict for rep in reports)


SWEEP_FIELDS = ["theorem", "mode", "n", "N", "a0", "eps", "path", "records", "margin",
                "verdict"]


def cmd_sweep(args) -> int:
    if args.theorem == "all":
        tags = list(verify.THEOREMS)
    else:
        tags = [t.strip() for t in args.theorem.split(",")]
        unknown = [t for t in tags if t not in verify.THEOREMS]
        if unknown:
            print(f"polybohr: unknown theorem tags {unknown}", file=sys.stderr)
            return EXIT_USAGE
    jobs = []
    for tag in tags:
        jobs += _theorem_jobs(tag, args, False)
        jobs += _theorem_jobs(tag, args, True)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(run_job, jobs))  # map keeps grid order
    else:
        reports = [run_job(j) for j in jobs]
    rows = []
    for rep in reports:
        s = rep.summary()
        rows.append({k: s.get(k) for k in SWEEP_FIELDS})
    with _sink(args.output) as out:
        emit(rows, SWEEP_FIELDS, args.format, out)
    return _exit_for(rep.verdict for rep in reports)


def cmd_series_dump(args) -> int:
    if args.form not in FORMS:
        print(f"polybohr: form must be one of {FORMS}", file=sys.stderr)
        return EXIT_USAGE
    try:
        w = ExtremalFunction(args.a, args.form, args.n)
    except ValueError as exc:
        print(f"polybohr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.K < 0:
        print("polybohr: K must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    f = to_series(w, args.K, unit=args.unit)
    with _sink(args.output) as out:
        dump_csv(f, out, nonzero_only=not args.all)
    return EXIT_OK


COMMANDS = {"radii": cmd_radii, "verify": cmd_verify, "sweep": cmd_sweep,
            "series-dump": cmd_series_dump}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"polybohr: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())
