"""Command-line surface: simulate, sweep, export, classify, intervals.

Exit codes: 0 success (budget stops included), 1 usage error, 2 I/O error,
3 internal invariant violation.
"""

import argparse
import sys
from pathlib import Path

from .analysis import classify, zero_growth_intervals
from .engine import Budget, evolve
from .errors import EngineInvariantError, GraError
from .export import (
    EXPORT_FORMATS,
    dump_json,
    export_graph,
    format_for_path,
    parse_series_csv,
    trace_to_csv,
)
from .graph import graph_digest, resolve_initial_graph
from .rules import decode, parse_rule_number
from .sweep import (
    format_census_table,
    load_config,
    load_preset,
    resume_sweep,
    run_sweep,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INTERNAL = 3


def _write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _simulate(args) -> int:
    rule = decode(parse_rule_number(args.rule))
    g0 = resolve_initial_graph(args.initial)
    budget = Budget(
        max_steps=args.steps, max_order=args.max_order, wall_clock=args.wall_clock
    )
    trace = evolve(g0, rule, budget)
    cls = classify(trace)
    if args.csv:
        _write_text(args.csv, trace_to_csv(trace))
    if args.trace_json:
        doc = {
            "rule": rule.number,
            "initial": args.initial,
            "initial_digest": graph_digest(g0),
            "steps": trace.steps,
            "final_order": trace.final_order,
            "stop_reason": trace.stop_reason,
            "cycle_period": trace.cycle_period,
            "classification": cls.to_dict(),
        }
        _write_text(args.trace_json, dump_json(doc))
    if args.export:
        fmt = format_for_path(args.export, args.export_format)
        export_graph(trace.final_graph, fmt, args.export)
    summary = (
        f"rule={rule.number} steps={trace.steps} "
        f"order={int(trace.orders[0])}->{trace.final_order} "
        f"stop={trace.stop_reason} category={cls.category.value}"
    )
    if cls.cycle_period is not None:
        summary += f" period={cls.cycle_period}"
    print(summary)
    return EXIT_OK


def _sweep(args) -> int:
    overrides = {
        "workers": args.workers,
        "max_steps": args.max_steps,
        "max_order": args.max_order,
        "initial": args.initial,
    }
    if args.preset:
        config = load_preset(args.preset, overrides)
    elif args.config:
        config = load_config(args.config, overrides)
    else:
        raise GraError("sweep needs --preset or --config")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    journal = out_dir / "journal.jsonl"
    report_path = out_dir / "report.json"

    done = {"n": 0}
    total = len(config.rule_numbers)

    def progress(rec):
        done["n"] += 1
        if args.verbose and (done["n"] % 64 == 0 or done["n"] == total):
            print(f"  {done['n']}/{total} rules", file=sys.stderr)

    if args.resume and journal.exists():
        report = resume_sweep(journal, config, progress)
    else:
        report = run_sweep(config, journal, progress)
    _write_text(report_path, report.to_json())
    print(format_census_table(report))
    print(f"report: {report_path}")
    return EXIT_OK


def _export(args) -> int:
    g = resolve_initial_graph(args.input)
    fmt = format_for_path(args.output, args.format)
    export_graph(g, fmt, args.output)
    print(f"wrote {fmt} to {args.output}")
    return EXIT_OK


def _classify(args) -> int:
    if args.csv:
        with open(args.csv, "r", encoding="utf-8") as fh:
            orders, increments = parse_series_csv(fh.read())
        import numpy as np

        from .analysis import EvolutionTrace

        # a recorded series carries no state history, so cycles cannot be
        # confirmed here; the verdict is growth-pattern only
        trace = EvolutionTrace(
            orders=np.asarray(orders, dtype=np.int64),
            increments=np.asarray(increments, dtype=np.int64),
            fingerprints=[],
            stop_reason="max-steps",
        )
        cls = classify(trace)
    else:
        if args.rule is None:
            raise GraError("classify needs --csv or --rule")
        rule = decode(parse_rule_number(args.rule))
        g0 = resolve_initial_graph(args.initial)
        budget = Budget(max_steps=args.steps, max_order=args.max_order)
        trace = evolve(g0, rule, budget)
        cls = classify(trace)
    text = dump_json(cls.to_dict())
    if args.json:
        _write_text(args.json, text)
    print(text, end="")
    return EXIT_OK


def _intervals(args) -> int:
    with open(args.csv, "r", encoding="utf-8") as fh:
        _, increments = parse_series_csv(fh.read())
    hist = zero_growth_intervals(increments)
    doc = {str(k): v for k, v in sorted(hist.items())}
    text = dump_json(doc)
    if args.json:
        _write_text(args.json, text)
    print(text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gra",
        description="Graph-rewriting automata on binary-state 3-regular graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="evolve one rule and export the results")
    p.add_argument("rule", help="rule number, decimal or prefixed binary (0b...)")
    p.add_argument("--steps", type=int, default=1000, help="step budget")
    p.add_argument("--initial", default="paper-g0", help="builtin name or graph file")
    p.add_argument("--max-order", type=int, default=5_000_000)
    p.add_argument("--wall-clock", type=float, default=None, help="seconds")
    p.add_argument("--csv", help="write t,order,increment series here")
    p.add_argument("--trace-json", help="write the JSON trace summary here")
    p.add_argument("--export", help="write the final graph here")
    p.add_argument("--export-format", choices=EXPORT_FORMATS)
    p.set_defaults(func=_simulate)

    p = sub.add_parser("sweep", help="run many rules and aggregate a census")
    p.add_argument("--config", help="JSON sweep config file")
    p.add_argument("--preset", help="shipped preset name (e.g. single-division-1024)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--max-order", type=int, default=None)
    p.add_argument("--initial", default=None)
    p.add_argument("--resume", action="store_true", help="continue an interrupted sweep")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=_sweep)

    p = sub.add_parser("export", help="convert a graph to dot/graphml/edge-list")
    p.add_argument("input", help="builtin name or graph file")
    p.add_argument("output")
    p.add_argument("--format", choices=EXPORT_FORMATS)
    p.set_defaults(func=_export)

    p = sub.add_parser("classify", help="classify a growth series or a fresh run")
    p.add_argument("--csv", help="recorded t,order,increment series")
    p.add_argument("--rule", help="rule number to run instead of reading a CSV")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--initial", default="paper-g0")
    p.add_argument("--max-order", type=int, default=5_000_000)
    p.add_argument("--json", help="also write the classification here")
    p.set_defaults(func=_classify)

    p = sub.add_parser("intervals", help="zero-growth interval histogram of a series")
    p.add_argument("--csv", required=True)
    p.add_argument("--json", help="also write the histogram here")
    p.set_defaults(func=_intervals)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EngineInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except GraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
