"""Command-line front end.

Exit codes: 0 success, 2 invalid arguments or config, 3 arithmetic overflow,
4 oracle/structured mismatch under ``period --both``, 5 trajectory exhausted
``--max-iters``.  ``verify`` exits 1 when any theorem-violation was found.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .conjectures import PUBLISHED_PERIOD_ROWS, NamedSequence, named_period_row
from .errors import ArithmeticOverflowError, DomainError, PisanoError
from .fixedpoint import (
    DEFAULT_MAX_ITERS,
    Terminal,
    enumerate_fixed_points,
    k_category,
    predicted_family,
    trajectory,
)
from .numtheory import factorize
from .pisano import period, period_oracle, pisano_structured
from .recurrence import RecurrenceParams
from .verify import (
    DEFAULT_VIOLATION_CAP,
    SUITE_IDS,
    Classification,
    SweepConfig,
    report_serialize,
    run_suite,
)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_OVERFLOW = 3
EXIT_MISMATCH = 4
EXIT_EXHAUSTED = 5

PARALLELISM_ENV = "PISANO_PARALLELISM"


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple[int, int]:
    """``"lo..hi"`` (inclusive) or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            r = int(lo), int(hi)
        else:
            r = int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use lo..hi or an integer")
    if r[0] > r[1]:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return r


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, ensure_ascii=False))
    else:
        print(text)


def _params_from(args) -> RecurrenceParams:
    if args.k is not None:
        if any(v is not None for v in (args.a, args.b, args.c, args.d)):
            raise UsageError("give either -k or -a/-b/-c/-d, not both")
        if args.k < 1:
            raise UsageError("K must be >= 1")
        return RecurrenceParams.k_fibonacci(args.k)
    if args.a is None or args.b is None:
        raise UsageError("need -k, or -a and -b")
    return RecurrenceParams(args.a, args.b, args.c or 0, 1 if args.d is None else args.d)


def cmd_period(args) -> int:
    params = _params_from(args)
    if args.m < 2:
        raise UsageError("m must be >= 2")
    if args.both:
        if not params.is_k_fibonacci:
            raise UsageError("--both needs a K-Fibonacci sequence (-k)")
        oracle = period_oracle(params, args.m).period
        structured = pisano_structured(params.a, args.m)
        same = oracle == structured
        _emit(
            args,
            {"m": args.m, "oracle": oracle, "structured": structured, "match": same},
            f"oracle={oracle} structured={structured}" + ("" if same else " MISMATCH"),
        )
        return EXIT_OK if same else EXIT_MISMATCH
    method = "oracle" if args.oracle else "structured" if args.structured else "auto"
    if method == "structured" and not params.is_k_fibonacci:
        raise UsageError("--structured needs a K-Fibonacci sequence (-k)")
    r = period(params, args.m, method)
    text = str(r.period) if r.pure else f"{r.period} preperiod={r.preperiod}"
    _emit(
        args,
        {
            "params": [params.a, params.b, params.c, params.d],
            "m": args.m,
            "period": r.period,
            "preperiod": r.preperiod,
            "pure": r.pure,
        },
        text,
    )
    return EXIT_OK


def cmd_trajectory(args) -> int:
    if args.k < 1 or args.m < 2:
        raise UsageError("need K >= 1 and m >= 2")
    tr = trajectory(args.k, args.m, args.max_iters)
    tag = {Terminal.FIXED_POINT: "T", Terminal.TWO_CYCLE: "P"}.get(tr.terminal)
    text = f"{tr.chain()} [{tr.terminal.value}]"
    if tr.terminal is Terminal.FIXED_POINT:
        text += f" T={tr.length_t}"
    elif tr.terminal is Terminal.TWO_CYCLE:
        text += f" P={tr.terminal_value}"
    _emit(
        args,
        {
            "k": args.k,
            "m": args.m,
            "steps": list(tr.steps),
            "terminal": tr.terminal.value,
            "T": tr.length_t if tag else None,
            "P": tr.terminal_value,
        },
        text,
    )
    return EXIT_EXHAUSTED if tr.terminal is Terminal.EXHAUSTED else EXIT_OK


def cmd_fixed_points(args) -> int:
    if args.k < 1 or args.bound < 2:
        raise UsageError("need K >= 1 and bound >= 2")
    found = enumerate_fixed_points(args.k, args.bound)
    fam = predicted_family(args.k)
    predicted = fam.members(args.bound)
    agree = predicted == found
    text = f"{' '.join(map(str, found))} | family: {fam.describe()}"
    if not agree:
        text += " [family disagrees]"
        print(
            f"family members {predicted} differ from computed fixed points {found}",
            file=sys.stderr,
        )
    _emit(
        args,
        {
            "k": args.k,
            "bound": args.bound,
            "fixed_points": found,
            "family": fam.describe(),
            "family_agrees": agree,
        },
        text,
    )
    return EXIT_OK


def _classify_row(k: int) -> dict:
    return {
        "k": k,
        "discriminant": str(factorize(k * k + 4)),
        "category": k_category(k).name,
        "family": predicted_family(k).describe(),
    }


def cmd_classify(args) -> int:
    if args.k < 1:
        raise UsageError("K must be >= 1")
    row = _classify_row(args.k)
    text = (
        f"K={args.k}: {k_category(args.k).value}; K^2+4 = {row['discriminant']}; "
        f"family: {row['family']}"
    )
    _emit(args, row, text)
    return EXIT_OK


def cmd_table(args) -> int:
    if args.kind == "periods":
        rows = {}
        lines = []
        for seq in NamedSequence:
            start, published = PUBLISHED_PERIOD_ROWS[seq]
            values = named_period_row(seq, start, start + len(published) - 1)
            rows[seq.name] = {"m_start": start, "periods": values}
            lines.append(f"{seq.name:<11} m={start}..{start + len(values) - 1}: {' '.join(map(str, values))}")
        _emit(args, {"rows": rows}, "\n".join(lines))
        return EXIT_OK
    lo, hi = args.k_range
    if lo < 1:
        raise UsageError("K range must start at 1 or above")
    rows = [_classify_row(k) for k in range(lo, hi + 1)]
    lines = [f"{r['k']:>3} | {r['discriminant']:<12} | {r['category']:<10} | {r['family']}" for r in rows]
    _emit(args, {"rows": rows}, "\n".join(lines))
    return EXIT_OK


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    allowed = {"suites", "k", "m", "parallelism", "max_iters", "out", "cap"}
    extra = set(data) - allowed
    if extra:
        raise UsageError(f"unknown config keys: {sorted(extra)}")
    return data


def _as_range(value) -> Optional[tuple[int, int]]:
    if value is None:
        return None
    if isinstance(value, int):
        return (value, value)
    if isinstance(value, str):
        try:
            return parse_range(value)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(str(exc))
    if isinstance(value, list) and len(value) == 2:
        return (int(value[0]), int(value[1]))
    raise UsageError(f"bad range {value!r}")


def _parallelism(flag: Optional[int], from_file: Optional[int]) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(PARALLELISM_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{PARALLELISM_ENV} must be an integer, got {env!r}")
    return from_file or 1


def cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    suites = args.suites or cfg.get("suites") or list(SUITE_IDS)
    if isinstance(suites, str):
        suites = suites.split(",")
    suites = [s.strip() for chunk in suites for s in chunk.split(",") if s.strip()]
    try:
        config = SweepConfig(
            suites=tuple(suites),
            k_range=args.k_range or _as_range(cfg.get("k")),
            m_range=args.m_range or _as_range(cfg.get("m")),
            parallelism=_parallelism(args.parallelism, cfg.get("parallelism")),
            max_iters=args.max_iters or cfg.get("max_iters", DEFAULT_MAX_ITERS),
        )
    except DomainError as exc:
        raise UsageError(str(exc))
    out_dir = Path(args.out or cfg.get("out", "reports"))
    cap = args.cap if args.cap is not None else cfg.get("cap", DEFAULT_VIOLATION_CAP)
    out_dir.mkdir(parents=True, exist_ok=True)

    reports = run_suite(config)
    summary = []
    failing = 0
    for r in reports:
        (out_dir / f"{r.suite}.json").write_bytes(report_serialize(r, "json", cap, args.timing))
        (out_dir / f"{r.suite}.csv").write_bytes(report_serialize(r, "csv", cap, args.timing))
        counts = {c.value: r.count(c) for c in Classification}
        failing += counts[Classification.THEOREM_VIOLATION.value]
        summary.append({"suite": r.suite, "checked": r.checked, "passed": r.passed, **counts})
        print(
            f"{r.suite}: {r.passed}/{r.checked} passed; "
            + (", ".join(f"{v} {k}" for k, v in counts.items() if v) or "clean"),
            file=sys.stderr,
        )
    status = EXIT_VIOLATIONS if failing else EXIT_OK
    text = "\n".join(
        f"{s['suite']:<20} {s['passed']:>7}/{s['checked']:<7} "
        f"violations={s['theorem-violation']} discrepancies={s['paper-statement-discrepancy']} "
        f"findings={s['conjecture-counterexample']}"
        for s in summary
    )
    _emit(args, {"out": str(out_dir), "reports": summary, "exit": status}, text)
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kpisano", description="Pisano periods of K-Fibonacci sequences.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("period", parents=[common], help="period of a sequence modulo m")
    p.add_argument("-k", type=int, help="K of the (K,1,0,1) sequence")
    p.add_argument("-a", type=int)
    p.add_argument("-b", type=int)
    p.add_argument("-c", type=int)
    p.add_argument("-d", type=int)
    p.add_argument("-m", type=int, required=True)
    how = p.add_mutually_exclusive_group()
    how.add_argument("--oracle", action="store_true", help="direct iteration")
    how.add_argument("--structured", action="store_true", help="factor-and-combine engine")
    how.add_argument("--both", action="store_true", help="run both; exit 4 if they differ")
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("trajectory", parents=[common], help="iterate m -> pi_K(m)")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("fixed-points", parents=[common], help="fixed points up to a bound")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.set_defaults(func=cmd_fixed_points)

    p = sub.add_parser("classify", parents=[common], help="category and family of K")
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("table", parents=[common], help="fixed-point families or named period rows")
    p.add_argument("--kind", choices=("fixed-points", "periods"), default="fixed-points")
    p.add_argument("--k", dest="k_range", type=parse_range, default=(1, 24), metavar="LO..HI")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suites", nargs="+", metavar="ID", help=f"any of: {', '.join(SUITE_IDS)}")
    p.add_argument("--k", dest="k_range", type=parse_range, metavar="LO..HI")
    p.add_argument("--m", dest="m_range", type=parse_range, metavar="LO..HI")
    p.add_argument("--parallelism", type=int)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--out", help="report directory (default ./reports)")
    p.add_argument("--cap", type=int, help="violations written per report")
    p.add_argument("--timing", action="store_true", help="record wall time in reports")
    p.add_argument("--config", help="JSON file with suites, k, m, parallelism, max_iters, out, cap")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticOverflowError as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PisanoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
