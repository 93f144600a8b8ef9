"""Command-line entry point.

Subcommands:

    gen     write a stream file for a generator family
    run     color a stream with a preset, streaming output as it goes
    verify  check an output file against its stream
    kout    Monte Carlo estimate of k-out perfect-matching failure
    bench   run a config-driven grid of experiments, CSV to stdout

Exit codes: 0 success; 1 verification found a bad output; 2 infeasible
generator spec; 3 input/stream errors (mode mismatch, degree violations,
malformed lines); 4 internal randomized-bound violation; 5 parse errors
while verifying. The environment variable STREAMCOLOR_SEED overrides any
--seed flag.
"""

from __future__ import annotations

import argparse
import ast
import os
import sys

from . import harness
from .errors import (
    BatchSizeMismatch,
    BoundViolation,
    DegreeExceeded,
    DuplicateEdge,
    FlushBudgetExceeded,
    InfeasibleSpec,
    IoFailure,
    MalformedLine,
    ModeMismatch,
    NotBipartite,
    SelfLoop,
    StreamColorError,
    TooManyBatches,
    TooManySlots,
)
from .presets import PRESETS, check_mode, clamp_s, declared_budget, run_stream
from .stream import AssignmentWriter, parse_stream

_INPUT_ERRORS = (
    MalformedLine,
    ModeMismatch,
    DegreeExceeded,
    SelfLoop,
    DuplicateEdge,
    IoFailure,
    NotBipartite,
)
_BOUND_ERRORS = (
    BoundViolation,
    FlushBudgetExceeded,
    TooManyBatches,
    BatchSizeMismatch,
    TooManySlots,
)


def _env_seed(value: int | None) -> int | None:
    env = os.environ.get("STREAMCOLOR_SEED")
    if env is not None:
        return int(env)
    return value


def cmd_gen(args) -> int:
    seed = _env_seed(args.seed)
    spec = harness.GenSpec(
        family=args.family,
        n=args.n,
        delta=args.delta,
        mode=args.mode,
        seed=seed if seed is not None else 0,
        batch_size=args.batch_size,
    )
    try:
        text = harness.generate(spec)
    except InfeasibleSpec as exc:
        print(f"infeasible spec: {exc}", file=sys.stderr)
        return 2
    with open(args.output, "w") as fh:
        fh.write(text)
    return 0


def cmd_run(args) -> int:
    seed = _env_seed(args.seed)
    try:
        infile = open(args.input)
    except OSError as exc:
        print(f"cannot open input: {exc}", file=sys.stderr)
        return 3
    out_path = args.output
    sink = open(out_path, "w", buffering=1) if out_path else sys.stdout
    try:
        header, events = parse_stream(infile)
        check_mode(header, args.alg)
        if args.alg == "edge-general" and clamp_s(header, args.s) != args.s:
            print(
                f"warning: s={args.s} clamped to {clamp_s(header, args.s)} "
                f"(beyond ceil(sqrt(delta)) extra space buys nothing)",
                file=sys.stderr,
            )
        budget = declared_budget(header, args.alg, args.s, args.force_stream)
        print(f"declared color budget: {budget}", file=sys.stderr)
        writer = AssignmentWriter(sink)
        stats = run_stream(
            header,
            events,
            args.alg,
            s=args.s,
            force_stream=args.force_stream,
            seed=seed,
            emit=writer.emit,
        )
        writer.trailer(stats.peak_words)
        print(
            f"colors used: {stats.colors_used}  peak words: {stats.peak_words}  "
            f"spilled: {stats.spilled_vertices} arrivals / {stats.spilled_edges} edges",
            file=sys.stderr,
        )
        return 0
    except _BOUND_ERRORS as exc:
        print(f"randomized bound violated: {exc}", file=sys.stderr)
        return 4
    except _INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    finally:
        infile.close()
        if out_path:
            sink.close()


def cmd_verify(args) -> int:
    try:
        with open(args.input) as sfh, open(args.output) as ofh:
            report = harness.verify(sfh, ofh, budget=args.budget)
    except OSError as exc:
        print(f"cannot open file: {exc}", file=sys.stderr)
        return 5
    except StreamColorError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 5
    print(f"proper: {'true' if report.proper else 'false'}")
    print(f"complete: {'true' if report.complete else 'false'}")
    print(f"colors_used: {report.colors_used}")
    print(f"max_color: {report.max_color}")
    print(f"edges_colored: {report.edges_colored}")
    if report.missing:
        print(f"missing: {report.missing}")
    if report.duplicates:
        print(f"duplicates: {report.duplicates}")
    if report.unknown:
        print(f"unknown_edges: {report.unknown}")
    for first, second, color in report.conflicts:
        print(f"conflict: edges {first} and {second} both use color {color}")
    if args.budget is not None:
        print(f"budget_ok: {'true' if report.budget_ok else 'false'}")
    return 0 if report.ok else 1


def cmd_kout(args) -> int:
    seed = _env_seed(args.seed)
    result = harness.run_kout_experiment(args.n, args.c, args.k, args.trials, seed or 0)
    low, high = result.wilson()
    print("n,u_size,k,trials,seed,failures,rate,ci_low,ci_high")
    print(
        f"{result.n},{result.u_size},{result.k},{result.trials},{result.seed},"
        f"{result.failures},{result.rate:.6g},{low:.6g},{high:.6g}"
    )
    return 0


def _parse_value(raw: str):
    raw = raw.strip()
    lowered = raw.lower()
    if lowered == "true":
        return True
    if lowered == "false":
        return False
    try:
        return ast.literal_eval(raw)
    except (ValueError, SyntaxError):
        return raw  # bare string


def parse_bench_config(text: str) -> tuple[dict, list[dict]]:
    """Parse the key = value grid format (see README for the schema)."""
    top: dict = {}
    blocks: list[dict] = []
    current = top
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in ("[run]", "[[run]]"):
            current = {}
            blocks.append(current)
            continue
        if "=" not in line:
            raise MalformedLine(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        current[key.strip()] = _parse_value(value)
    return top, blocks


def _as_list(value) -> list:
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def expand_bench_config(text: str) -> tuple[list[harness.RunRequest], dict]:
    top, blocks = parse_bench_config(text)
    requests: list[harness.RunRequest] = []
    for block in blocks:
        merged = {**top, **block}
        preset = merged["preset"]
        mode = merged["mode"]
        force = bool(merged.get("force_stream", False))
        seeds = merged.get("seeds", 1)
        seed_list = list(range(int(seeds))) if isinstance(seeds, int) else list(seeds)
        for family in _as_list(merged.get("families", merged.get("family", "regular-bipartite"))):
            for n in _as_list(merged["n"]):
                for delta in _as_list(merged["delta"]):
                    for s in _as_list(merged.get("s", 1)):
                        for seed in seed_list:
                            spec = harness.GenSpec(
                                family=family,
                                n=int(n),
                                delta=int(delta),
                                mode=mode,
                                seed=int(seed),
                                batch_size=int(merged.get("batch_size", 0)),
                            )
                            requests.append(
                                harness.RunRequest(preset, spec, s=int(s), force_stream=force)
                            )
    return requests, top


def cmd_bench(args) -> int:
    with open(args.config) as fh:
        text = fh.read()
    requests, top = expand_bench_config(text)
    jobs = args.jobs or int(top.get("jobs", 1))
    for key in sorted(top):
        print(f"# {key}={top[key]}")
    print(harness.CSV_HEADER)
    rows = harness.run_experiment_suite(requests, jobs=jobs)
    bad = 0
    for row in rows:
        print(harness.row_to_csv(row))
        if not row["proper"]:
            bad += 1
    return 0 if bad == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="streamcolor")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a stream file")
    g.add_argument("--family", required=True, choices=harness.FAMILIES)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--delta", type=int, required=True)
    g.add_argument("--mode", required=True,
                   choices=["edge", "vertex-one-sided", "vertex-two-sided", "batch"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--batch-size", type=int, default=0)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="color a stream")
    r.add_argument("input")
    r.add_argument("--alg", required=True, choices=PRESETS)
    r.add_argument("--s", type=int, default=1)
    r.add_argument("--force-stream", action="store_true")
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("-o", "--output", default=None)
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="verify an output against its stream")
    v.add_argument("input")
    v.add_argument("output")
    v.add_argument("--budget", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("kout", help="k-out matching Monte Carlo")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--c", default="2.72")
    k.add_argument("--k", type=int, default=3)
    k.add_argument("--trials", type=int, default=10000)
    k.add_argument("--seed", type=int, default=0)
    k.set_defaults(func=cmd_kout)

    b = sub.add_parser("bench", help="run an experiment grid from a config")
    b.add_argument("--config", required=True)
    b.add_argument("--jobs", type=int, default=None)
    b.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
