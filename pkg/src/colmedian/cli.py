"""Command-line front door.

Subcommands: solve, validate, gen (euclidean | random-metric | is-reduction
| coverage-reduction), bench.  Reports are CSV with a fixed header; with a
fixed seed and fixed flags the output is byte-identical across runs and
worker counts (wall-clock timing is therefore opt-in via --timing).
Exit codes: 0 success, 1 infeasible/refused, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from .epas import cost_bounds, solve_epas_with_stats
from .errors import BudgetError, ColmedianError, FormatError, InfeasibleError
from .instance import (
    Instance,
    format_solution,
    from_euclidean_points,
    parse_instance,
    serialize_instance,
    validate_metric,
)
from .oracle import DEFAULT_SUBSET_BUDGET, exact_capacitated, exact_uncapacitated
from .reductions import (
    coverage_reduction,
    graph_is_connected,
    independent_set_reduction,
    metric_closure,
    parse_coverage,
    parse_graph,
)
from .voronoi import build_voronoi

REPORT_FIELDS = (
    "instance_id",
    "mode",
    "eps",
    "ell",
    "cost",
    "oracle_cost",
    "ratio",
    "partitions_evaluated",
    "wall_time_ms",
    "seed",
)

_MODE_ALIASES = {
    "deterministic": "epas-det",
    "randomized": "epas-rand",
    "epas-det": "epas-det",
    "epas-rand": "epas-rand",
    "exact": "exact",
    "greedy": "greedy",
}


@dataclass
class RunReport:
    instance_id: str
    mode: str
    eps: float | None
    ell: int
    cost: float
    oracle_cost: float | None = None
    ratio: float | None = None
    partitions_evaluated: int = 0
    wall_time_ms: int = 0
    seed: int | None = None

    def row(self) -> list[str]:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, float):
                return repr(x)
            return str(x)

        return [fmt(getattr(self, f)) for f in REPORT_FIELDS]


def _write_reports(path: str, reports: list[RunReport]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_FIELDS)
        for rep in reports:
            writer.writerow(rep.row())


def _env_budget() -> int:
    raw = os.environ.get("COLMEDIAN_BUDGET")
    if raw is None:
        return DEFAULT_SUBSET_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise ColmedianError(f"COLMEDIAN_BUDGET must be an integer, got {raw!r}") from None


def _load_instance(path: str) -> Instance:
    with open(path) as fh:
        return parse_instance(fh.read())


def _run_one(
    inst: Instance,
    instance_id: str,
    mode: str,
    eps: float | None,
    seed: int | None,
    trials: int | None,
    delta: float,
    workers: int,
    want_oracle: bool,
    timing: bool,
    budget: int,
):
    """Solve one instance in one mode; returns (solution, report)."""
    started = time.perf_counter()
    stats_partitions = 0
    if mode in ("epas-det", "epas-rand"):
        if eps is None:
            raise ColmedianError("--eps is required for the approximation modes")
        sol, stats = solve_epas_with_stats(
            inst,
            eps,
            mode="deterministic" if mode == "epas-det" else "randomized",
            seed=seed,
            trials=trials,
            delta=delta,
            workers=workers,
        )
        stats_partitions = stats.partitions_evaluated
    elif mode == "exact":
        if inst.is_capacitated:
            sol = exact_capacitated(inst, budget)
        else:
            sol = exact_uncapacitated(inst, budget)
    elif mode == "greedy":
        if inst.is_capacitated:
            raise ColmedianError("greedy mode handles uncapacitated instances only")
        _, _, sol = cost_bounds(inst, build_voronoi(inst))
    else:
        raise ColmedianError(f"unknown mode {mode!r}")
    elapsed_ms = int(round((time.perf_counter() - started) * 1000))

    oracle_cost = None
    ratio = None
    if want_oracle:
        oracle = (
            exact_capacitated(inst, budget)
            if inst.is_capacitated
            else exact_uncapacitated(inst, budget)
        )
        oracle_cost = oracle.cost
        ratio = sol.cost / oracle_cost if oracle_cost else None
    report = RunReport(
        instance_id=instance_id,
        mode=mode,
        eps=eps if mode in ("epas-det", "epas-rand") else None,
        ell=inst.ell,
        cost=sol.cost,
        oracle_cost=oracle_cost,
        ratio=ratio,
        partitions_evaluated=stats_partitions,
        wall_time_ms=elapsed_ms if timing else 0,
        seed=seed if mode == "epas-rand" else None,
    )
    return sol, report


def _cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    mode = _MODE_ALIASES[args.mode]
    sol, report = _run_one(
        inst,
        instance_id=os.path.basename(args.instance),
        mode=mode,
        eps=args.eps,
        seed=args.seed,
        trials=args.trials,
        delta=args.delta,
        workers=args.workers,
        want_oracle=args.oracle,
        timing=args.timing,
        budget=_env_budget(),
    )
    sys.stdout.write(format_solution(inst, sol))
    if args.report:
        _write_reports(args.report, [report])
    return 0


def _cmd_validate(args) -> int:
    with open(args.instance) as fh:
        text = fh.read()
    inst = parse_instance(text, check_metric=False)
    violations = validate_metric(inst)
    if not violations:
        print("ok")
        return 0
    for v in violations[:20]:
        print(f"violation {v.kind} at {v.indices} excess {v.excess:g}")
    if len(violations) > 20:
        print(f"... {len(violations) - 20} more")
    return 1


def _emit_instance(inst: Instance, out: str | None, comments: list[str] | None = None):
    text = serialize_instance(inst)
    if comments:
        text = "".join(f"# {c}\n" for c in comments) + text
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    if args.generator == "euclidean":
        rng = np.random.default_rng(args.seed)
        fac = rng.random((args.facilities, args.dim))
        cli = rng.random((args.clients, args.dim))
        inst = from_euclidean_points(fac, cli, args.ell)
        _emit_instance(inst, args.output)
    elif args.generator == "random-metric":
        rng = np.random.default_rng(args.seed)
        inst = random_metric_instance(rng, args.facilities, args.clients, args.ell)
        _emit_instance(inst, args.output)
    elif args.generator == "is-reduction":
        with open(args.graph) as fh:
            g = parse_graph(fh.read())
        inst = independent_set_reduction(g, args.ell)
        comments = []
        if not graph_is_connected(g):
            comments.append(
                "disconnected input graph: cross-component distances use the finite sentinel"
            )
        _emit_instance(inst, args.output, comments)
    elif args.generator == "coverage-reduction":
        with open(args.coverage) as fh:
            cov = parse_coverage(fh.read())
        inst = coverage_reduction(cov)
        comments = [f"equal-size promise: {'yes' if cov.has_equal_size_promise else 'no'}"]
        _emit_instance(inst, args.output, comments)
    else:  # pragma: no cover - argparse restricts choices
        raise ColmedianError(f"unknown generator {args.generator!r}")
    return 0


def random_metric_instance(
    rng: np.random.Generator, facilities: int, clients: int, ell: int
) -> Instance:
    """Random symmetric matrix pushed through its shortest-path closure, so
    the result is always a genuine metric."""
    size = facilities + clients
    raw = rng.uniform(0.05, 1.0, size=(size, size))
    raw = (raw + raw.T) / 2.0
    dist = metric_closure(raw)
    return Instance(facilities, clients, dist, ell)


def _cmd_bench(args) -> int:
    with open(args.grid) as fh:
        try:
            config = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"grid config is not valid JSON: {exc}") from exc
    instances = config.get("instances")
    grid = config.get("grid")
    if not isinstance(instances, list) or not instances:
        raise FormatError("grid config needs a non-empty 'instances' list")
    if not isinstance(grid, list) or not grid:
        raise FormatError("grid config needs a non-empty 'grid' list")
    want_oracle = bool(config.get("oracle", False))
    default_seed = config.get("seed")
    budget = _env_budget()

    reports = []
    for path in instances:
        inst = _load_instance(path)
        for entry in grid:
            mode = _MODE_ALIASES.get(entry.get("mode", "epas-det"))
            if mode is None:
                raise FormatError(f"unknown mode in grid: {entry.get('mode')!r}")
            _, report = _run_one(
                inst,
                instance_id=os.path.basename(path),
                mode=mode,
                eps=entry.get("eps"),
                seed=entry.get("seed", default_seed),
                trials=entry.get("trials"),
                delta=entry.get("delta", 0.01),
                workers=args.workers,
                want_oracle=want_oracle,
                timing=args.timing,
                budget=budget,
            )
            reports.append(report)
    _write_reports(args.report, reports)
    print(f"wrote {len(reports)} rows to {args.report}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="colmedian",
        description="Close ell facilities at minimum total client distance.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve an instance file")
    ps.add_argument("instance")
    ps.add_argument("--eps", type=float, default=None)
    ps.add_argument(
        "--mode",
        choices=sorted(_MODE_ALIASES),
        default="epas-det",
    )
    ps.add_argument("--seed", type=int, default=None)
    ps.add_argument("--trials", type=int, default=None)
    ps.add_argument("--delta", type=float, default=0.01)
    ps.add_argument("--workers", type=int, default=1)
    ps.add_argument("--report", default=None, help="write a one-row CSV report")
    ps.add_argument("--oracle", action="store_true", help="also run the exact oracle")
    ps.add_argument(
        "--timing",
        action="store_true",
        help="record wall time in reports (breaks byte-reproducibility)",
    )
    ps.set_defaults(func=_cmd_solve)

    pv = sub.add_parser("validate", help="check an instance file's metric")
    pv.add_argument("instance")
    pv.set_defaults(func=_cmd_validate)

    pg = sub.add_parser("gen", help="generate instance files")
    gsub = pg.add_subparsers(dest="generator", required=True)
    ge = gsub.add_parser("euclidean")
    ge.add_argument("--facilities", type=int, required=True)
    ge.add_argument("--clients", type=int, required=True)
    ge.add_argument("--ell", type=int, required=True)
    ge.add_argument("--dim", type=int, default=2)
    ge.add_argument("--seed", type=int, default=None)
    ge.add_argument("-o", "--output", default=None)
    gr = gsub.add_parser("random-metric")
    gr.add_argument("--facilities", type=int, required=True)
    gr.add_argument("--clients", type=int, required=True)
    gr.add_argument("--ell", type=int, required=True)
    gr.add_argument("--seed", type=int, default=None)
    gr.add_argument("-o", "--output", default=None)
    gi = gsub.add_parser("is-reduction")
    gi.add_argument("--graph", required=True)
    gi.add_argument("--ell", type=int, required=True)
    gi.add_argument("-o", "--output", default=None)
    gc = gsub.add_parser("coverage-reduction")
    gc.add_argument("--coverage", required=True)
    gc.add_argument("-o", "--output", default=None)
    for g in (ge, gr, gi, gc):
        g.set_defaults(func=_cmd_gen)

    pb = sub.add_parser("bench", help="run a (instances x modes) grid")
    pb.add_argument("--grid", required=True, help="JSON config file")
    pb.add_argument("--report", required=True, help="CSV output path")
    pb.add_argument("--workers", type=int, default=1)
    pb.add_argument("--timing", action="store_true")
    pb.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (InfeasibleError, BudgetError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1
    except (ColmedianError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
