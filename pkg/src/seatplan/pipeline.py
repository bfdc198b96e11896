"""End-to-end solve pipeline shared by the CLI and the HTTP service.

Everything deterministic for a given (plan, hierarchy, config) lands in
byte-stable JSON/SVG artifacts; wall-clock timings are emitted as a
separate document so artifact bytes can be compared across runs.
"""

import json
from dataclasses import dataclass, field, asdict

from seatplan import reporting
from seatplan.floorplan import DESK, OFFICE, load_floorplan
from seatplan.hierarchy import (
    delayed_office_allocate,
    df_hsa,
    load_hierarchy,
    validate_hierarchy,
)
from seatplan.model import SolverParams
from seatplan.roadmap import (
    RoadmapParams,
    all_pairs_seat_distances,
    distance_cache_key,
    generate_prm,
    load_distances,
    save_distances,
)
from seatplan.solvers import METHODS


@dataclass
class PipelineConfig:
    method: str = "ica++"
    s_n: int = 5
    max_iterations: int = 100
    time_limit: float = 600.0
    seed: int = 0
    K: int = 2000
    delta_c: float = None  # default: 5% of the plan diagonal
    delta_s: float = None  # default: 8% of the plan diagonal
    delayed_office: bool = False
    regret: str = "classic"
    max_nodes: int = 2000

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method}; pick one of {METHODS}")

    def to_doc(self):
        return asdict(self)


@dataclass
class PipelineArtifacts:
    report: bytes  # deterministic run report (no wall-clock content)
    timings: bytes
    allocation: bytes
    svgs: dict = field(default_factory=dict)  # level -> bytes
    unconnected_seats: list = field(default_factory=list)


def canonical_json(doc):
    return (json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n").encode()


def resolve_roadmap_params(plan, config):
    diag = (plan.width ** 2 + plan.height ** 2) ** 0.5
    delta_c = config.delta_c if config.delta_c is not None else 0.05 * diag
    delta_s = config.delta_s if config.delta_s is not None else 0.08 * diag
    return RoadmapParams(config.K, delta_c, delta_s, seed=config.seed)


def precheck(plan, hierarchy, delayed):
    """Feasibility violations detectable before solving; empty means go."""
    violations = list(validate_hierarchy(hierarchy))
    n_desks = len(plan.desks)
    n_offices = len(plan.offices)
    roots = hierarchy.roots()
    d_need = sum(hierarchy.teams[t].desks_required for t in roots)
    o_need = sum(hierarchy.teams[t].offices_required for t in roots)
    if d_need > n_desks:
        violations.append(f"desk demand {d_need} exceeds supply {n_desks}")
    if o_need > n_offices:
        violations.append(f"office demand {o_need} exceeds supply {n_offices}")
    if delayed:
        leaf_o = sum(hierarchy.teams[t].offices_required for t in hierarchy.leaves())
        if leaf_o > n_offices:
            violations.append(
                f"leaf office demand {leaf_o} exceeds supply {n_offices}")
    return violations


def build_distances(plan, config, cache_dir=None, plan_bytes=None):
    """Roadmap distances with optional on-disk caching by content hash."""
    params = resolve_roadmap_params(plan, config)
    cache_path = None
    if cache_dir is not None and plan_bytes is not None:
        key = distance_cache_key(plan_bytes, params)
        cache_path = f"{cache_dir}/dist-{key}.bin"
        try:
            return load_distances(cache_path), None
        except FileNotFoundError:
            pass
    roadmap = generate_prm(plan, params)
    matrix = all_pairs_seat_distances(roadmap)
    if cache_path is not None:
        save_distances(matrix, cache_path)
    return matrix, roadmap


def allocation_doc(hierarchy, result):
    levels = []
    for mapping in result.per_level:
        levels.append([{"seat_id": s, "team_id": mapping[s]}
                       for s in sorted(mapping)])
    return {"levels": levels,
            "centrals": {t: result.per_team_central[t]
                         for t in sorted(result.per_team_central)}}


def run_pipeline(plan_bytes, hierarchy_bytes, config, cache_dir=None):
    """Solve and render; returns PipelineArtifacts.

    Raises FloorPlanError/HierarchyError on bad inputs and
    InfeasibleProblemError when demand exceeds supply.
    """
    import time

    t0 = time.monotonic()
    plan = load_floorplan(plan_bytes)
    hierarchy = load_hierarchy(hierarchy_bytes)
    bad = precheck(plan, hierarchy, config.delayed_office)
    if bad:
        from seatplan.model import InfeasibleProblemError

        raise InfeasibleProblemError("; ".join(bad))

    distances, roadmap = build_distances(plan, config, cache_dir, plan_bytes)
    unconnected = roadmap.unconnected_seats if roadmap is not None else []
    if not distances.connected:
        from seatplan.model import InfeasibleProblemError

        raise InfeasibleProblemError(
            f"roadmap left seats unconnected (increase K): {unconnected}")

    params = SolverParams(max_iterations=config.max_iterations,
                          time_limit=config.time_limit, seed=config.seed,
                          s_n=config.s_n, regret=config.regret,
                          max_nodes=config.max_nodes)
    result, sub_reports = df_hsa(plan.seats, distances, hierarchy,
                                 config.method, params,
                                 delayed=config.delayed_office)
    if config.delayed_office:
        result = delayed_office_allocate(plan.seats, distances, hierarchy, result)

    report = reporting.compute_metrics(
        plan.seats, distances, hierarchy, result,
        method=config.method, params=config.to_doc(), seed=config.seed)

    svgs = {}
    names = {t: t for t in hierarchy.teams}
    for level, mapping in enumerate(result.per_level):
        centrals = {t: result.per_team_central[t]
                    for t in set(mapping.values()) if t in result.per_team_central}
        svgs[level] = (reporting.render_svg(
            plan, allocation=mapping, centrals=centrals, level=level,
            team_names=names) + "\n").encode()

    timings = {
        "total": time.monotonic() - t0,
        "sub_problems": [{"path": r["path"], "level": r["level"],
                          "elapsed": r["elapsed"]} for r in sub_reports],
    }
    return PipelineArtifacts(
        report=canonical_json(report.to_doc(include_timings=False)),
        timings=canonical_json(timings),
        allocation=canonical_json(allocation_doc(hierarchy, result)),
        svgs=svgs,
        unconnected_seats=unconnected,
    )


# re-exported for CLI/service convenience
__all__ = [
    "PipelineConfig",
    "PipelineArtifacts",
    "run_pipeline",
    "build_distances",
    "precheck",
    "canonical_json",
    "allocation_doc",
    "resolve_roadmap_params",
    "DESK",
    "OFFICE",
]
