"""Command-line driver.

Subcommands: ``distances`` (build and cache the seat distance matrix,
optionally render the roadmap), ``solve`` (full hierarchical solve with
report and SVGs), ``bench`` (repeat a solve over N seeds and aggregate
mean +/- standard error per method), ``serve`` (HTTP scenario service)
and a hidden ``oracle`` debugging subcommand.

Exit codes: 0 ok, 2 bad configuration, 3 validation failure,
4 infeasible instance, 5 internal error. Failures print one JSON object
to stderr.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from seatplan import reporting
from seatplan.floorplan import FloorPlanError, load_floorplan
from seatplan.hierarchy import HierarchyError, load_hierarchy
from seatplan.model import InfeasibleProblemError
from seatplan.pipeline import (
    PipelineConfig,
    build_distances,
    canonical_json,
    run_pipeline,
)
from seatplan.roadmap import save_distances
from seatplan.solvers import METHODS

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_INFEASIBLE = 4
EXIT_INTERNAL = 5


def _fail(code, kind, message):
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def _add_solver_flags(p):
    p.add_argument("--method", default="ica++", choices=METHODS)
    p.add_argument("--s-n", type=int, default=5)
    p.add_argument("--max-iterations", type=int, default=100)
    p.add_argument("--time-limit", type=float, default=600.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-nodes", type=int, default=2000,
                   help="branch-and-bound leaf budget (deterministic cap)")
    p.add_argument("--regret", default="classic", choices=["classic", "paper-literal"])
    p.add_argument("--delayed-office", action="store_true")


def _add_roadmap_flags(p):
    p.add_argument("--K", type=int, default=2000)
    p.add_argument("--delta-c", type=float, default=None)
    p.add_argument("--delta-s", type=float, default=None)


def _config_from(args):
    return PipelineConfig(
        method=getattr(args, "method", "ica++"),
        s_n=getattr(args, "s_n", 5),
        max_iterations=getattr(args, "max_iterations", 100),
        time_limit=getattr(args, "time_limit", 600.0),
        seed=args.seed,
        K=args.K,
        delta_c=args.delta_c,
        delta_s=args.delta_s,
        delayed_office=getattr(args, "delayed_office", False),
        regret=getattr(args, "regret", "classic"),
        max_nodes=getattr(args, "max_nodes", 2000),
    )


def _cache_dir(args):
    d = getattr(args, "cache_dir", None) or os.environ.get("SEATPLAN_CACHE_DIR")
    if d:
        Path(d).mkdir(parents=True, exist_ok=True)
    return d


def cmd_distances(args):
    plan_bytes = Path(args.plan).read_bytes()
    plan = load_floorplan(plan_bytes)
    config = _config_from(args)
    matrix, roadmap = build_distances(plan, config, _cache_dir(args), plan_bytes)
    save_distances(matrix, args.out)
    if args.svg and roadmap is not None:
        Path(args.svg).write_text(reporting.render_svg(plan, roadmap=roadmap) + "\n")
    if roadmap is not None and roadmap.unconnected_seats:
        print(json.dumps({"warning": "unconnected seats",
                          "seats": roadmap.unconnected_seats}))
    return EXIT_OK


def cmd_solve(args):
    plan_bytes = Path(args.plan).read_bytes()
    hierarchy_bytes = Path(args.hierarchy).read_bytes()
    config = _config_from(args)
    artifacts = run_pipeline(plan_bytes, hierarchy_bytes, config, _cache_dir(args))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_bytes(artifacts.report)
    (out / "timings.json").write_bytes(artifacts.timings)
    (out / "allocation.json").write_bytes(artifacts.allocation)
    for level, data in artifacts.svgs.items():
        (out / f"level-{level}.svg").write_bytes(data)
    return EXIT_OK


def cmd_bench(args):
    plan_bytes = Path(args.plan).read_bytes()
    hierarchy_bytes = Path(args.hierarchy).read_bytes()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    methods = args.methods.split(",")
    per_method = {}
    for method in methods:
        if method not in METHODS:
            return _fail(EXIT_CONFIG, "config", f"unknown method {method}")
        report_docs, timing_docs = [], []
        for i in range(args.runs):
            seed = args.seed + i
            config = _config_from(args)
            config.method = method
            config.seed = seed
            artifacts = run_pipeline(plan_bytes, hierarchy_bytes, config,
                                     _cache_dir(args))
            (out / f"report-{method}-{seed}.json").write_bytes(artifacts.report)
            (out / f"timings-{method}-{seed}.json").write_bytes(artifacts.timings)
            report_docs.append(json.loads(artifacts.report))
            timing_docs.append(json.loads(artifacts.timings))
        per_method[method] = reporting.aggregate_docs(report_docs, timing_docs)
    (out / "bench.json").write_bytes(canonical_json(per_method))
    (out / "bench.txt").write_text(reporting.format_bench_table(per_method))
    print(reporting.format_bench_table(per_method), end="")
    return EXIT_OK


def cmd_serve(args):
    import uvicorn

    from seatplan.service import create_app

    app = create_app(args.data_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def cmd_oracle(args):
    """Cross-check the exact solver against brute force on a tiny instance."""
    from seatplan.model import SaProblem, SolverParams, euclidean_distances
    from seatplan.oracle import brute_force_sa
    from seatplan.solvers import ipsa_solve

    plan = load_floorplan(Path(args.plan).read_bytes())
    h = load_hierarchy(Path(args.hierarchy).read_bytes())
    teams = [h.teams[t] for t in h.roots()]
    problem = SaProblem(list(plan.seats), teams, euclidean_distances(plan.seats))
    oracle = brute_force_sa(problem)
    exact = ipsa_solve(problem, SolverParams(seed=args.seed))
    doc = {"oracle_objective": oracle.objective,
           "ipsa_objective": exact.objective,
           "ipsa_optimal": exact.optimal,
           "agree": abs(oracle.objective - exact.objective) <= 1e-9}
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OK if doc["agree"] else EXIT_INTERNAL


def build_parser():
    parser = argparse.ArgumentParser(prog="seatplan")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distances", help="build the seat distance matrix")
    p.add_argument("--plan", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--svg")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache-dir")
    _add_roadmap_flags(p)
    p.set_defaults(func=cmd_distances)

    p = sub.add_parser("solve", help="hierarchical solve with report and SVGs")
    p.add_argument("--plan", required=True)
    p.add_argument("--hierarchy", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--cache-dir")
    _add_solver_flags(p)
    _add_roadmap_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="aggregate solves over N seeds")
    p.add_argument("--plan", required=True)
    p.add_argument("--hierarchy", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--runs", type=int, default=30)
    p.add_argument("--methods", default="ica++")
    p.add_argument("--cache-dir")
    _add_solver_flags(p)
    _add_roadmap_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="start the HTTP scenario service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data-dir", default="./seatplan-data")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("oracle")  # hidden: no help text, debugging only
    p.add_argument("--plan", required=True)
    p.add_argument("--hierarchy", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        return _fail(EXIT_CONFIG, "file-not-found", str(exc))
    except (FloorPlanError, HierarchyError) as exc:
        return _fail(EXIT_VALIDATION, "validation", str(exc))
    except InfeasibleProblemError as exc:
        return _fail(EXIT_INFEASIBLE, "infeasible", str(exc))
    except ValueError as exc:
        return _fail(EXIT_VALIDATION, "validation", str(exc))
    except Exception as exc:  # pragma: no cover - defensive
        return _fail(EXIT_INTERNAL, "internal", f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
