"""Command-line driver: reduce, sweep, gen, compare, bench.

Exit codes: 0 success, 1 I/O or file-format failure, 2 usage/validation
failure (single-line diagnostic on stderr).  All commands are
deterministic for identical flags and inputs; only wall-time fields
vary between reruns.
"""

from __future__ import annotations

import argparse
import sys
import time

from .core import (
    BudgetError,
    DegenerateTokenError,
    DomainError,
    FormatError,
    NonFiniteError,
    ReductionConfig,
    ShapeError,
    TokenSequence,
)
from .baselines import ImportanceScores, random_sample, topk_prune, uniform_stride
from .iogen import (
    ClusterSpec,
    generate_clusters,
    read_scores,
    read_tokens,
    write_labels,
    write_tokens,
)
from .metrics import ReductionReport, attention_savings, reconstruction_error
from .oracle import oracle_fuse
from .tofu import dynamic_threshold, fuse

_USAGE_ERRORS = (
    DomainError,
    BudgetError,
    ShapeError,
    DegenerateTokenError,
    NonFiniteError,
    ValueError,
)
_IO_ERRORS = (OSError, FormatError)

# strategy name as spelled on the command line -> config name
_CLI_STRATEGIES = {
    "tofu": "tofu",
    "tofu-auto": "tofu_auto",
    "random": "random",
    "topk": "topk",
    "stride": "stride",
    "oracle": "oracle",
}


def _fmt(x) -> str:
    """CSV numeric formatting: 6 significant digits, '.' decimal point."""
    return format(float(x), ".6g")


def _run_strategy(seq: TokenSequence, config: ReductionConfig, scores=None):
    """Dispatch one reduction; returns (reduced, effective_tau)."""
    if config.strategy == "tofu":
        return fuse(seq, config.tau), config.tau
    if config.strategy == "tofu_auto":
        tau = dynamic_threshold(seq.count)
        return fuse(seq, tau), tau
    if config.strategy == "oracle":
        return oracle_fuse(seq, config.tau), config.tau
    if config.strategy == "random":
        return random_sample(seq, config.budget, config.seed), None
    if config.strategy == "topk":
        if scores is None:
            raise DomainError("topk requires --scores")
        return topk_prune(seq, ImportanceScores(scores), config.budget), None
    if config.strategy == "stride":
        return uniform_stride(seq, config.budget), None
    raise DomainError(f"unknown strategy {config.strategy!r}")


def _make_report(seq, reduced, config, tau, wall_ms, text_tokens=0) -> ReductionReport:
    err_mean, err_max, _ = reconstruction_error(seq, reduced)
    return ReductionReport(
        input_tokens=seq.count,
        output_tokens=reduced.count,
        retention_ratio=reduced.count / seq.count if seq.count else 1.0,
        strategy=config.strategy,
        tau=tau,
        budget=config.budget,
        seed=config.seed,
        recon_error_mean=err_mean,
        recon_error_max=err_max,
        attention_savings=attention_savings(seq.count, reduced.count, text_tokens),
        pair_eval_count=reduced.pair_evals,
        wall_time_ms=wall_ms,
        weights=[int(w) for w in reduced.weights],
        assignment=[int(a) for a in reduced.assignment],
    )


def _config_from_args(args) -> ReductionConfig:
    strategy = _CLI_STRATEGIES[args.strategy]
    kwargs = {}
    if strategy in ("tofu", "oracle"):
        if args.tau is None:
            raise DomainError(f"strategy {args.strategy} requires --tau")
        kwargs["tau"] = args.tau
    if strategy in ("random", "topk", "stride"):
        if args.budget is None:
            raise DomainError(f"strategy {args.strategy} requires --budget")
        kwargs["budget"] = args.budget
    if strategy == "random":
        kwargs["seed"] = args.seed if args.seed is not None else 0
    return ReductionConfig(strategy=strategy, **kwargs)


def cmd_reduce(args) -> int:
    seq = read_tokens(args.input)
    config = _config_from_args(args)
    scores = read_scores(args.scores) if args.scores else None
    start = time.perf_counter()
    reduced, tau = _run_strategy(seq, config, scores)
    wall_ms = (time.perf_counter() - start) * 1e3
    write_tokens(args.out, TokenSequence(reduced.tokens))
    if args.report:
        report = _make_report(seq, reduced, config, tau, wall_ms, args.text_tokens)
        with open(args.report, "w") as fh:
            fh.write(report.to_json())
            fh.write("\n")
    return 0


def cmd_sweep(args) -> int:
    if args.tau_step <= 0:
        raise DomainError(f"--tau-step must be > 0, got {args.tau_step}")
    if args.tau_min > args.tau_max:
        raise DomainError("--tau-min must not exceed --tau-max")
    seq = read_tokens(args.input)
    steps = int((args.tau_max - args.tau_min) / args.tau_step + 1e-9) + 1
    out = args.output or sys.stdout
    print("tau,k,retention_ratio,recon_error_mean,wall_time_ms", file=out)
    for i in range(steps):
        tau = min(args.tau_min + i * args.tau_step, args.tau_max)
        start = time.perf_counter()
        reduced = fuse(seq, tau)
        wall_ms = (time.perf_counter() - start) * 1e3
        err_mean, _, _ = reconstruction_error(seq, reduced)
        ratio = reduced.count / seq.count if seq.count else 1.0
        print(
            f"{_fmt(tau)},{reduced.count},{_fmt(ratio)},{_fmt(err_mean)},{_fmt(wall_ms)}",
            file=out,
        )
    return 0


def cmd_gen(args) -> int:
    spec = ClusterSpec(
        clusters=args.clusters,
        per_cluster=args.per_cluster,
        dims=args.dims,
        spread=args.spread,
        seed=args.seed,
    )
    seq, labels = generate_clusters(spec)
    write_tokens(args.out, seq)
    labels_path = args.labels or str(args.out) + ".labels.csv"
    write_labels(labels_path, labels)
    return 0


def cmd_compare(args) -> int:
    seq = read_tokens(args.input)
    scores = read_scores(args.scores) if args.scores else None
    rows = []
    for name in args.strategies.split(","):
        name = name.strip()
        if name not in _CLI_STRATEGIES:
            raise DomainError(f"unknown strategy {name!r}")
        ns = argparse.Namespace(
            strategy=name, tau=args.tau, budget=args.budget, seed=args.seed
        )
        config = _config_from_args(ns)
        start = time.perf_counter()
        reduced, tau = _run_strategy(seq, config, scores)
        wall_ms = (time.perf_counter() - start) * 1e3
        report = _make_report(seq, reduced, config, tau, wall_ms, args.text_tokens)
        if args.report_dir:
            path = f"{args.report_dir}/{name.replace('-', '_')}.json"
            with open(path, "w") as fh:
                fh.write(report.to_json())
                fh.write("\n")
        rows.append((name, report))
    out = args.output or sys.stdout
    print(
        "strategy,k,retention_ratio,recon_error_mean,attention_savings,pair_eval_count",
        file=out,
    )
    for name, rep in rows:
        print(
            f"{name},{rep.output_tokens},{_fmt(rep.retention_ratio)},"
            f"{_fmt(rep.recon_error_mean)},{_fmt(rep.attention_savings)},"
            f"{rep.pair_eval_count}",
            file=out,
        )
    return 0


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    strategies = [s.strip() for s in args.strategies.split(",")]
    out = args.output or sys.stdout
    print("m,n,strategy,k,pair_eval_count,wall_time_ms", file=out)
    for m in sizes:
        if m % args.clusters != 0:
            raise DomainError(
                f"size {m} is not divisible by --clusters {args.clusters}"
            )
        spec = ClusterSpec(
            clusters=args.clusters,
            per_cluster=m // args.clusters,
            dims=args.dims,
            spread=args.spread,
            seed=args.seed,
        )
        seq, _ = generate_clusters(spec)
        for name in strategies:
            if name == "tofu":
                runner = lambda: fuse(seq, args.tau)
            elif name == "tofu-auto":
                runner = lambda: fuse(seq, dynamic_threshold(seq.count))
            elif name == "oracle":
                runner = lambda: oracle_fuse(seq, args.tau)
            else:
                raise DomainError(f"bench supports tofu, tofu-auto, oracle; got {name!r}")
            start = time.perf_counter()
            reduced = runner()
            wall_ms = (time.perf_counter() - start) * 1e3
            print(
                f"{m},{args.dims},{name},{reduced.count},"
                f"{reduced.pair_evals},{_fmt(wall_ms)}",
                file=out,
            )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tokenfuse",
        description="Token-sequence reduction: threshold fusion, pruning "
        "baselines, synthetic data, and desk-scale benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="reduce one token file with one strategy")
    p.add_argument("--input", required=True)
    p.add_argument("--strategy", required=True, choices=sorted(_CLI_STRATEGIES))
    p.add_argument("--tau", type=float)
    p.add_argument("--budget", type=int)
    p.add_argument("--scores", help="importance scores file (topk)")
    p.add_argument("--seed", type=int)
    p.add_argument("--text-tokens", type=int, default=0,
                   help="text token count for the attention-cost model")
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="write a JSON run report here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("sweep", help="fuse across a threshold grid, CSV to stdout")
    p.add_argument("--input", required=True)
    p.add_argument("--tau-min", type=float, required=True)
    p.add_argument("--tau-max", type=float, required=True)
    p.add_argument("--tau-step", type=float, required=True)
    p.set_defaults(func=cmd_sweep, output=None)

    p = sub.add_parser("gen", help="generate clustered unit-sphere tokens")
    p.add_argument("--clusters", type=int, required=True)
    p.add_argument("--per-cluster", type=int, required=True)
    p.add_argument("--dims", type=int, required=True)
    p.add_argument("--spread", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--labels", help="labels CSV path (default: <out>.labels.csv)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("compare", help="run several strategies on one input")
    p.add_argument("--input", required=True)
    p.add_argument("--strategies", required=True,
                   help="comma-separated strategy names")
    p.add_argument("--tau", type=float)
    p.add_argument("--budget", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--scores")
    p.add_argument("--text-tokens", type=int, default=0)
    p.add_argument("--report-dir", help="write one JSON report per strategy here")
    p.set_defaults(func=cmd_compare, output=None)

    p = sub.add_parser("bench", help="timing/counter grid over input sizes")
    p.add_argument("--sizes", required=True, help="comma-separated token counts")
    p.add_argument("--dims", type=int, default=64)
    p.add_argument("--clusters", type=int, default=8)
    p.add_argument("--spread", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tau", type=float, default=0.7)
    p.add_argument("--strategies", default="tofu,oracle")
    p.set_defaults(func=cmd_bench, output=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _IO_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
