"""Experiment harness CLI.

Subcommands:

  run      generate or load instances, sweep seeds, emit one CSV row per run
  scaling  run a size sweep and fit awake complexity against log2 log2 n
  oracle   exact single-iteration adoption probabilities (tiny instances)
  bench    compare the pure and compiled Monte Carlo kernels

Exit codes: 0 all runs valid and complete, 1 usage/instance errors,
2 when a run hit its round cap.  Errors go to stderr prefixed "error:".
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from fractions import Fraction

from . import _kernels, oracle
from .coloring import PipelineConfig, run_pipeline
from .errors import (
    InstanceError,
    ParseError,
    RunIncomplete,
    SleepColorError,
    TooLargeForOracle,
    UsageError,
)
from .graph import FAMILIES, generate, make_default_instance, read_instance
from .metrics import aggregate, write_csv
from .simcore import Trace


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="sleepcolor", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--family", choices=FAMILIES, help="graph family to generate")
        p.add_argument("--n", type=int, help="number of nodes")
        p.add_argument("--param", type=float,
                       help="family parameter (gnp probability, regular degree)")
        p.add_argument("--instance", help="read the instance from a .dlc file instead")
        p.add_argument("--seeds", type=int, default=1, help="number of seeds to run")
        p.add_argument("--seed-base", type=int, default=0,
                       help="first seed; seeds are base..base+k-1")
        p.add_argument("--k1-coef", type=float, default=3.0,
                       help="phase-1 budget coefficient (times log2 log2 n)")
        p.add_argument("--k1", type=int, help="phase-1 iteration budget override")
        p.add_argument("--phase2-threshold", type=int,
                       help="degree threshold for phase 2 (default: polylog, usually > n)")
        p.add_argument("--phase2-cap", type=int, default=40,
                       help="phase-2 iteration cap")
        p.add_argument("--round-cap", type=int, help="global round cap override")

    p_run = sub.add_parser("run", help="run the pipeline over a seed sweep")
    add_common(p_run)
    p_run.add_argument("--out", help="CSV output path (default: stdout)")
    p_run.add_argument("--trace", help="write the per-run traces to this path")

    p_sca = sub.add_parser("scaling", help="size sweep with a log2 log2 n fit")
    add_common(p_sca)
    p_sca.add_argument("--sizes", required=True,
                       help="comma-separated node counts, e.g. 256,1024,4096")
    p_sca.add_argument("--out", help="also write every run as a CSV row")

    p_ora = sub.add_parser("oracle", help="exact adoption probabilities")
    p_ora.add_argument("--instance", help="analyze one instance file instead of the catalog")

    p_ben = sub.add_parser("bench", help="compare Monte Carlo kernel backends")
    p_ben.add_argument("--n", type=int, default=64)
    p_ben.add_argument("--param", type=float, default=0.1,
                       help="gnp edge probability for the benchmark instance")
    p_ben.add_argument("--trials", type=int, default=200_000)
    p_ben.add_argument("--seed-base", type=int, default=0)
    return parser


def _config_from_args(args, seed: int) -> PipelineConfig:
    return PipelineConfig(
        k1=args.k1,
        k1_coefficient=args.k1_coef,
        phase2_degree_threshold=args.phase2_threshold,
        phase2_iteration_cap=args.phase2_cap,
        seed=seed,
        round_cap=args.round_cap,
    )


def _instance_for(args, seed: int):
    """(family label, param, instance) for one run."""
    if args.instance:
        try:
            inst = read_instance(args.instance)
        except OSError as exc:
            raise InstanceError(f"cannot read {args.instance}: {exc}") from None
        return "file", None, inst
    if not args.family or not args.n:
        raise UsageError("need --family and --n (or --instance)")
    graph = generate(args.family, args.n, seed, args.param)
    return args.family, args.param, make_default_instance(graph)


def _sweep(args, n_override: int | None = None, gnp_degree_param: bool = False):
    """Run the seed sweep, returning (csv rows, metrics list, exit code)."""
    rows = []
    metrics_list = []
    traces = []
    code = 0
    saved_n, saved_param = args.n, args.param
    if n_override is not None:
        args.n = n_override
        if gnp_degree_param and args.family in (None, "gnp"):
            args.family = "gnp"
            args.param = (saved_param if saved_param is not None else 8.0) / n_override
    try:
        for seed in range(args.seed_base, args.seed_base + args.seeds):
            family, param, inst = _instance_for(args, seed)
            n = inst.graph.node_count
            config = _config_from_args(args, seed)
            resolved = config.resolve(n)
            trace = Trace() if getattr(args, "trace", None) else None
            try:
                _, metrics = run_pipeline(inst, config, trace=trace)
            except RunIncomplete as exc:
                _, metrics = exc.partial
                code = 2
            rows.append(metrics.csv_row(seed, family, n, param,
                                        resolved.k1, resolved.phase2_degree_threshold))
            metrics_list.append(metrics)
            if trace is not None:
                traces.append((seed, trace))
            if not (metrics.validity == "proper_total" and metrics.complete):
                code = max(code, 2 if not metrics.complete else 1)
    finally:
        args.n, args.param = saved_n, saved_param
    return rows, metrics_list, traces, code


def cmd_run(args) -> int:
    if args.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    rows, _metrics, traces, code = _sweep(args)
    header = PipelineConfig(
        k1=args.k1, k1_coefficient=args.k1_coef,
        phase2_degree_threshold=args.phase2_threshold,
        phase2_iteration_cap=args.phase2_cap,
        seed=args.seed_base, round_cap=args.round_cap,
    ).kv_block()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            write_csv(fh, rows, header)
    else:
        write_csv(sys.stdout, rows, header)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for seed, trace in traces:
                fh.write(f"# run seed={seed}\n")
                fh.write(trace.render())
    return code


def fit_line(xs, ys) -> tuple[float, float, list[float]]:
    """Least-squares y = a*x + b; returns (a, b, residuals)."""
    n = len(xs)
    if n == 0:
        raise UsageError("empty fit")
    if len(set(xs)) == 1:
        b = sum(ys) / n
        return 0.0, b, [y - b for y in ys]
    xm = sum(xs) / n
    ym = sum(ys) / n
    var = sum((x - xm) ** 2 for x in xs)
    cov = sum((x - xm) * (y - ym) for x, y in zip(xs, ys))
    a = cov / var
    b = ym - a * xm
    return a, b, [y - (a * x + b) for x, y in zip(xs, ys)]


def cmd_scaling(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad --sizes list: {args.sizes!r}") from None
    if not sizes:
        raise UsageError("--sizes must list at least one size")
    if args.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    if args.instance:
        raise UsageError("scaling needs generated families, not --instance")

    all_rows = []
    xs, worst_max, avg_mean = [], [], []
    code = 0
    for n in sizes:
        rows, metrics, _traces, c = _sweep(args, n_override=n, gnp_degree_param=True)
        code = max(code, c)
        all_rows.extend(rows)
        summary = aggregate(metrics)
        x = math.log2(math.log2(n)) if n >= 4 else 1.0
        xs.append(x)
        worst_max.append(summary["worst_case_awake"]["max"])
        avg_mean.append(summary["average_awake"]["mean"])
        print(
            f"size n={n} runs={summary['runs']} "
            f"worst_awake_max={summary['worst_case_awake']['max']:.0f} "
            f"worst_awake_p95={summary['worst_case_awake']['p95']:.0f} "
            f"avg_awake_mean={summary['average_awake']['mean']:.4f} "
            f"total_rounds_max={summary['total_rounds']['max']:.0f} "
            f"all_valid={int(summary['all_valid'])}"
        )
    a, b, residuals = fit_line(xs, worst_max)
    res_txt = ",".join(f"{r:+.3f}" for r in residuals)
    print(f"fit worst_awake_max ~ a*log2log2(n)+b: a={a:.4f} b={b:.4f} "
          f"residuals=[{res_txt}] max_residual={max(abs(r) for r in residuals):.4f}")
    slope, _b2, _res2 = fit_line(xs, avg_mean)
    print(f"fit avg_awake_mean slope={slope:.4f}")
    if args.out:
        header = _config_from_args(args, args.seed_base).kv_block()
        with open(args.out, "w", encoding="utf-8") as fh:
            write_csv(fh, all_rows, header)
    return code


def cmd_oracle(args) -> int:
    quarter = Fraction(1, 4)
    entries = []
    if args.instance:
        inst = read_instance(args.instance)
        entries.append((args.instance, inst))
    else:
        entries = oracle.tiny_catalog()
    ok = True
    for name, inst in entries:
        probs = oracle.exact_adoption_probabilities(inst)
        for v in inst.graph.nodes:
            p = probs[v]
            mark = "" if p >= quarter else "  BELOW-1/4"
            print(f"{name} node {v} p={p.numerator}/{p.denominator}{mark}")
            if p < quarter:
                ok = False
    print(f"all-adoption-probabilities>=1/4: {'yes' if ok else 'NO'}")
    return 0 if ok else 1


def cmd_bench(args) -> int:
    graph = generate("gnp", args.n, seed=1, param=args.param)
    inst = make_default_instance(graph)
    names = list(_kernels.backends())
    results = {}
    timings = {}
    for name in names:
        t0 = time.perf_counter()
        results[name] = _kernels.phase1_trial_counts(
            inst, args.seed_base, args.trials, backend=name
        )
        timings[name] = time.perf_counter() - t0
        rate = args.trials / timings[name] if timings[name] > 0 else float("inf")
        print(f"backend={name} trials={args.trials} time={timings[name]:.3f}s "
              f"trials_per_s={rate:,.0f}")
    first = results[names[0]]
    for name in names[1:]:
        if results[name] != first:
            print("error: internal: kernel backends disagree", file=sys.stderr)
            return 1
    if len(names) > 1:
        print(f"backends_agree=1 speedup={timings['pure'] / timings['speed']:.1f}x")
    else:
        print("backends_agree=1 (only the pure backend is available)")
    print(f"active_backend={_kernels.BACKEND}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return cmd_run(args)
        if args.command == "scaling":
            return cmd_scaling(args)
        if args.command == "oracle":
            return cmd_oracle(args)
        if args.command == "bench":
            return cmd_bench(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"error: parse: {exc}", file=sys.stderr)
        return 1
    except InstanceError as exc:
        print(f"error: instance: {exc}", file=sys.stderr)
        return 1
    except TooLargeForOracle as exc:
        print(f"error: oracle: {exc}", file=sys.stderr)
        return 1
    except RunIncomplete as exc:
        print(f"error: incomplete: {exc}", file=sys.stderr)
        return 2
    except SleepColorError as exc:
        print(f"error: internal: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
