"""Command-line scenario runner.

``speccartan run --scenario NAME --n N --trials T --seed S [--tol k=v]... [--out PATH] [--format json|text]``

The JSON report is deterministic for a fixed configuration; wall time appears
only in the text format. Exit status is 0 iff every check passes, 1 if any check
fails and 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .scenarios import SCENARIOS, run_scenario

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must fit in an unsigned 64-bit integer: {text}")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return v


def _tol_pair(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {key!r} is not a number: {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="speccartan", description="Spectral coefficient-map verification campaigns.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a named scenario")
    run.add_argument("--scenario", required=True, help=f"one of: {', '.join(SCENARIOS)}")
    run.add_argument("--n", type=int, required=True, help="matrix dimension (>= 2)")
    run.add_argument("--trials", type=_positive, required=True)
    run.add_argument("--seed", type=_u64, required=True)
    run.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="KEY=VALUE",
                     help="override a scenario tolerance; repeatable")
    run.add_argument("--out", help="write the report here instead of stdout")
    run.add_argument("--format", choices=("json", "text"), default="json")
    sub.add_parser("list", help="list scenarios and their default tolerances")
    return parser


TOP_LEVEL_ORDER = ("schema", "library_version", "config", "summary", "checks")


def _sorted(x):
    if isinstance(x, dict):
        return {k: _sorted(x[k]) for k in sorted(x)}
    if isinstance(x, list):
        return [_sorted(v) for v in x]
    return x


def render_json(report: dict) -> str:
    """Schema tag first, remaining keys in a fixed order, nested keys sorted."""
    keys = [k for k in TOP_LEVEL_ORDER if k in report] + sorted(set(report) - set(TOP_LEVEL_ORDER))
    return json.dumps({k: _sorted(report[k]) for k in keys}, indent=2) + "\n"


def render_text(report: dict, elapsed: float | None = None) -> str:
    cfg = report["config"]
    s = report["summary"]
    lines = [f"{cfg['scenario']}  n={cfg['n']} trials={cfg['trials']} seed={cfg['seed']}",
             f"schema {report['schema']}  library {report['library_version']}"]
    for c in report["checks"]:
        extra = {k: v for k, v in c.items() if k not in ("name", "passed", "inputs_digest", "replay")}
        detail = " ".join(f"{k}={_short(v)}" for k, v in sorted(extra.items()))
        lines.append(f"  {'PASS' if c['passed'] else 'FAIL'}  {c['name']}  {detail}".rstrip())
    tail = f"{s['passed']}/{s['checks']} passed"
    if s["worst_slack"] is not None:
        tail += f", worst slack {s['worst_slack']:.3e}"
    if elapsed is not None:
        tail += f", {elapsed:.2f}s"
    lines.append(tail)
    return "\n".join(lines) + "\n"


def _short(v) -> str:
    if isinstance(v, float):
        return f"{v:.3e}"
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, float) for x in v):
        return f"{v[0]:.6g}{v[1]:+.6g}j"
    text = json.dumps(v, sort_keys=True)
    return text if len(text) <= 60 else text[:57] + "..."


def _cmd_list() -> int:
    for name, sc in SCENARIOS.items():
        tol = ", ".join(f"{k}={v:g}" for k, v in sc.defaults.items())
        print(f"{name:28s} {sc.description}" + (f"  [{tol}]" if tol else ""))
    return EXIT_OK


def _cmd_run(args) -> int:
    if args.scenario not in SCENARIOS:
        print(f"speccartan: unknown scenario {args.scenario!r}; known: {', '.join(SCENARIOS)}", file=sys.stderr)
        return EXIT_USAGE
    tol = dict(args.tol)
    start = time.perf_counter()
    try:
        report = run_scenario(args.scenario, args.n, args.trials, args.seed, tol)
    except (KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"speccartan: {msg}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.perf_counter() - start
    text = render_json(report) if args.format == "json" else render_text(report, elapsed)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"speccartan: cannot write {args.out}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["summary"]["all_passed"] else EXIT_FAILED


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        return _cmd_list()
    return _cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
