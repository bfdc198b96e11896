"""End-to-end acceptance checks.

Every test emits one PASS/FAIL line (run with ``pytest -s`` to see them
live). The checks are property-based: exact engines against independent
enumeration, heuristics sandwiched by the optimum, roadmap distances
against a fine grid oracle, structural invariants of the hierarchical
decomposition, and bit-exact reproducibility of reports.
"""

import itertools
import json
import math
import time

import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from seatplan import cli, synth
from seatplan.floorplan import OFFICE, point_free, segment_free
from seatplan.hierarchy import delayed_office_allocate, df_hsa
from seatplan.model import (
    SaProblem,
    SolverParams,
    euclidean_distances,
    objective,
    validate,
)
from seatplan.oracle import brute_force_miqp, brute_force_sa, miqp_objective
from seatplan.pipeline import canonical_json
from seatplan.reporting import aggregate_docs, compute_metrics
from seatplan.solvers import (
    METHODS,
    gsa_solve,
    ica_solve,
    ipsa_solve,
    ls_improve,
    solve,
)

from conftest import FIXTURES

EXACT = SolverParams(time_limit=120.0, max_nodes=None)

SWEEP_SIZE = 200
FEASIBILITY_INSTANCES = 100


def report_line(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}" + (f" — {detail}" if detail else ""))
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def sweep():
    """Random small instances with their enumerated optima."""
    rng = np.random.default_rng(20240815)
    out = []
    for _ in range(SWEEP_SIZE):
        problem = synth.random_sa_instance(rng, max_seats=10, max_teams=3)
        out.append((problem, brute_force_sa(problem).objective))
    return out


@pytest.fixture(scope="module")
def feasibility_instances(medium_plan, medium_distances):
    seats = list(medium_plan.seats)
    instances = []
    for i in range(FEASIBILITY_INSTANCES):
        rng = np.random.default_rng(1000 + i)
        n_teams = int(rng.integers(3, 9))
        teams = synth.random_team_config(rng, 170, 26, n_teams)
        instances.append(SaProblem(seats, teams, medium_distances))
    return instances


def test_exact_engine_matches_enumerated_optimum(sweep):
    t0 = time.monotonic()
    worst = 0.0
    for problem, opt in sweep:
        res = ipsa_solve(problem, EXACT)
        assert res.optimal
        assert validate(problem, res.allocation) == []
        worst = max(worst, abs(res.objective - opt))
    elapsed = time.monotonic() - t0
    report_line(
        "exact engine equals enumerated optimum on small instances",
        worst <= 1e-9 and elapsed < 60.0,
        f"{len(sweep)} instances, max |delta| {worst:.2e}, {elapsed:.1f}s")


def test_heuristics_sandwiched_by_optimum(sweep):
    ls_monotone = 0
    ok = True
    detail = ""
    for i, (problem, opt) in enumerate(sweep):
        params = SolverParams(seed=i)
        ica = ica_solve(problem, params, init="random")
        ls = ls_improve(problem, ica, params)
        gsa = gsa_solve(problem, params)
        if ls.objective <= ica.objective + 1e-12:
            ls_monotone += 1
        if not (opt - 1e-9 <= ls.objective <= ica.objective + 1e-9
                and gsa.objective >= opt - 1e-9):
            ok = False
            detail = f"violated on instance {i}"
            break
    ok = ok and ls_monotone == len(sweep)
    report_line(
        "optimum <= LS(ICA) <= ICA and optimum <= GSA, LS monotone on 100%",
        ok, detail or f"{len(sweep)} instances, LS monotone {ls_monotone}/{len(sweep)}")


def test_feasibility_suite_on_medium_instances(feasibility_instances):
    engines = ("ipsa", "ica++", "gsa", "ica+ls")
    params = SolverParams(seed=0, max_nodes=30)
    bad = []
    for i, problem in enumerate(feasibility_instances):
        p = SolverParams(seed=i, max_nodes=30)
        for method in engines:
            res = solve(problem, method, p)
            violations = validate(problem, res.allocation)
            if violations:
                bad.append((i, method, violations[0]))
                continue
            again = solve(problem, method, p)
            if again.allocation != res.allocation or again.centrals != res.centrals:
                bad.append((i, method, "nondeterministic"))
    report_line(
        "feasibility suite: 100 medium instances x 4 engines feasible + deterministic",
        not bad, bad[0] if bad else f"{len(feasibility_instances)} instances x {len(engines)} engines")


def test_iterative_engine_monotone_convergence(feasibility_instances):
    bad = []
    for i, problem in enumerate(feasibility_instances):
        for init in ("ica", "ica++"):
            res = solve(problem, init, SolverParams(seed=i))
            hist = res.history
            if res.iterations > 100 or not hist:
                bad.append((i, init, "no trajectory"))
                continue
            if any(b > a + 1e-9 for a, b in zip(hist, hist[1:])):
                bad.append((i, init, "objective increased"))
    report_line(
        "location-allocation objective non-increasing, terminates within limit",
        not bad, bad[0] if bad else f"{len(feasibility_instances)} instances, both inits")


def test_roadmap_soundness(toy_plan, toy_roadmap, toy_distances):
    t0 = time.monotonic()
    ok_connected = toy_roadmap.unconnected_seats == [] and toy_distances.connected

    ok_edges = all(segment_free(toy_plan, toy_roadmap.nodes[u].pos,
                                toy_roadmap.nodes[v].pos)
                   for u, v, _ in toy_roadmap.edges)

    pos = {s.id: s.pos for s in toy_plan.seats}
    ids = toy_distances.seat_ids
    eu = np.array([[math.dist(pos[a], pos[b]) for b in ids] for a in ids])
    ok_lower = bool(np.all(toy_distances.dist >= eu - 1e-6))
    ok_sym = bool(np.array_equal(toy_distances.dist, toy_distances.dist.T))

    rng = np.random.default_rng(99)
    n = len(ids)
    i, j, k = (rng.integers(0, n, size=100000) for _ in range(3))
    d = toy_distances.dist
    ok_triangle = bool(np.all(d[i, j] <= d[i, k] + d[k, j] + 1e-9))

    elapsed = time.monotonic() - t0
    report_line(
        "roadmap soundness: connected, collision-free edges, metric properties",
        ok_connected and ok_edges and ok_lower and ok_sym and ok_triangle
        and elapsed < 30.0,
        f"K={2000}, {len(toy_roadmap.edges)} edges, 1e5 triangle triples, {elapsed:.1f}s")


def grid_distances(plan, n_cells):
    """Independent oracle: Dijkstra over a fine raster of walkable cells
    with axis, diagonal, and knight moves."""
    cw = plan.width / n_cells
    ch = plan.height / n_cells
    free = np.zeros((n_cells, n_cells), dtype=bool)
    for ix in range(n_cells):
        x = (ix + 0.5) * cw
        for iy in range(n_cells):
            free[ix, iy] = point_free(plan, (x, (iy + 0.5) * ch))
    idx = -np.ones((n_cells, n_cells), dtype=int)
    fx, fy = np.nonzero(free)
    idx[fx, fy] = np.arange(len(fx))

    rows, cols, vals = [], [], []
    for dx, dy in ((1, 0), (0, 1), (1, 1), (1, -1),
                   (2, 1), (2, -1), (1, 2), (1, -2)):
        w = math.hypot(dx * cw, dy * ch)
        jx, jy = fx + dx, fy + dy
        ok = (jx >= 0) & (jx < n_cells) & (jy >= 0) & (jy < n_cells)
        ok[ok] &= free[jx[ok], jy[ok]]
        if abs(dx) + abs(dy) == 3:  # knight moves must not hop wall corners
            sel = np.nonzero(ok)[0]
            mids = [((fx[s] + jx[s] + 1) * cw / 2, (fy[s] + jy[s] + 1) * ch / 2)
                    for s in sel]
            keep = np.array([point_free(plan, m) for m in mids], dtype=bool)
            ok[:] = False
            ok[sel[keep]] = True
        a = idx[fx[ok], fy[ok]]
        b = idx[jx[ok], jy[ok]]
        rows += [*a, *b]
        cols += [*b, *a]
        vals += [w] * (2 * int(ok.sum()))
    graph = csr_matrix((vals, (rows, cols)), shape=(len(fx), len(fx)))

    cells = []
    for s in plan.seats:
        cx = min(n_cells - 1, int(s.pos[0] / cw))
        cy = min(n_cells - 1, int(s.pos[1] / ch))
        assert free[cx, cy], f"seat {s.id} rasterizes onto a blocked cell"
        cells.append(idx[cx, cy])
    return dijkstra(graph, indices=cells)[:, cells]


def test_roadmap_vs_grid_oracle(toy_plan, toy_distances):
    grid = grid_distances(toy_plan, 200)
    order = [toy_distances.index(s.id) for s in toy_plan.seats]
    prm = toy_distances.dist[np.ix_(order, order)]
    iu = np.triu_indices(len(toy_plan.seats), k=1)
    ratio = prm[iu] / grid[iu]
    share = float(np.mean((ratio >= 0.95) & (ratio <= 1.60)))
    report_line(
        "roadmap distances within [0.95, 1.60] of 200x200 grid oracle for >=95% of pairs",
        share >= 0.95,
        f"{share:.1%} in band, ratio range [{ratio.min():.3f}, {ratio.max():.3f}]")


def test_wall_separation_on_toy_plan(toy_plan, toy_distances):
    seats = list(toy_plan.seats)
    teams = synth.toy_teams()
    params = SolverParams(time_limit=120.0, max_nodes=8000)
    walk = ipsa_solve(SaProblem(seats, teams, toy_distances), params)
    line = ipsa_solve(SaProblem(seats, teams, euclidean_distances(seats)), params)

    pos = {s.id: s.pos for s in seats}

    def members(res, t):
        return [s for s, tt in res.allocation.items() if tt == t]

    def spans(res):
        return sum(1 for t in teams
                   if len({synth.toy_region_of(s) for s in members(res, t.id)}) > 1)

    ok_pairs = True
    for t in teams:
        line_max = max(math.dist(pos[a], pos[b]) for a, b in
                       itertools.combinations(members(line, t.id), 2))
        for a, b in itertools.combinations(members(walk, t.id), 2):
            if toy_distances.d(a, b) > 3.0 * line_max:
                ok_pairs = False
    ok_spans = spans(walk) <= spans(line)
    report_line(
        "walkable distances avoid through-wall team splits on the toy plan",
        ok_pairs and ok_spans,
        f"wall-spanning teams: walk {spans(walk)} <= line {spans(line)}")


def test_hierarchical_structure_invariants():
    plan = synth.open_plan(100, 10)
    seats = list(plan.seats)
    D = euclidean_distances(seats)
    h = synth.three_level_hierarchy()
    bad = []
    for method in METHODS:
        result, _ = df_hsa(seats, D, h, method,
                           SolverParams(seed=1, max_nodes=300))
        if len(result.per_level) != 3:
            bad.append((method, "wrong depth"))
            continue
        for level in (1, 2):
            for seat_id, team in result.per_level[level].items():
                if result.per_level[level - 1][seat_id] != h.parent[team]:
                    bad.append((method, f"nesting broken at level {level}"))
        for level, ids in enumerate(h.levels):
            for t in ids:
                owned = sum(1 for tt in result.per_level[level].values() if tt == t)
                want = h.teams[t].desks_required + h.teams[t].offices_required
                if owned != want:
                    bad.append((method, f"{t}: {owned} != {want}"))
    report_line(
        "hierarchical decomposition: nesting, disjointness, exact level conservation",
        not bad, bad[0] if bad else f"3 levels, 8 leaves, {len(METHODS)} engines")


def exhaustive_office_matching(office_ids, slots, distances, centrals):
    best = math.inf
    for perm in itertools.permutations(office_ids, len(slots)):
        cost = sum(distances.d(o, centrals[t]) for o, t in zip(perm, slots))
        best = min(best, cost)
    return best


def test_delayed_office_assignment_is_optimal(medium_plan, medium_distances):
    # exact part: the one-shot office pass equals exhaustive matching
    h = synth.org_chart_hierarchy()  # 6 offices <= 8: enumerable
    seats = list(medium_plan.seats)
    desk_only, _ = df_hsa(seats, medium_distances, h, "ica++",
                          SolverParams(seed=0), delayed=True)
    final = delayed_office_allocate(seats, medium_distances, h, desk_only)

    office_ids = sorted(s.id for s in seats if s.kind == OFFICE)
    slots = [t for t in h.leaves() for _ in range(h.teams[t].offices_required)]
    leaf_level = max(h.level_of(t) for t in h.leaves())
    got = sum(medium_distances.d(o, desk_only.per_team_central[t])
              for o, t in final.per_level[leaf_level].items()
              if o in set(office_ids))
    want = exhaustive_office_matching(office_ids, slots, medium_distances,
                                      desk_only.per_team_central)
    ok_exact = abs(got - want) <= 1e-9

    # directional part (soft): delayed placement should usually lower the
    # mean office distance at the upper levels
    wins = 0
    n_seeds = 30
    for seed in range(n_seeds):
        params = SolverParams(seed=seed)
        plain, _ = df_hsa(seats, medium_distances, h, "ica++", params)
        dly, _ = df_hsa(seats, medium_distances, h, "ica++", params, delayed=True)
        dly = delayed_office_allocate(seats, medium_distances, h, dly)

        def office_mean(result):
            r = compute_metrics(seats, medium_distances, h, result)
            vals = [m.mean_office_distance for m in r.per_level[:2]
                    if m.mean_office_distance is not None]
            return sum(vals) / len(vals)

        if office_mean(dly) < office_mean(plain):
            wins += 1
    share = wins / n_seeds
    if share < 0.60:
        print(f"[SOFT-FAIL] delayed office placement only won {share:.0%} of "
              f"{n_seeds} seeds (soft criterion, report-only)")
    report_line(
        "delayed office pass equals exhaustive matching optimum",
        ok_exact,
        f"6 offices, delta {abs(got - want):.2e}; "
        f"directional check won {share:.0%} of {n_seeds} seeds (soft >= 60%)")


def test_pairwise_objective_consistent_with_central_formulation():
    rng = np.random.default_rng(4242)
    checked = 0
    bad = None
    while checked < 30:
        problem = synth.random_sa_instance(rng, max_seats=8, max_teams=3)
        res = ipsa_solve(problem, EXACT)
        pairwise_opt = brute_force_miqp(problem).objective
        got = miqp_objective(problem, res.allocation)
        if pairwise_opt > got + 1e-9:
            bad = f"pairwise optimum {pairwise_opt} > central-seat solution {got}"
            break
        checked += 1
    report_line(
        "pairwise-distance optimum lower-bounds the central-seat solution",
        bad is None, bad or f"{checked} instances")


def test_bench_aggregation_bit_exact(tmp_path):
    out = tmp_path / "bench"
    code = cli.main([
        "bench", "--plan", str(FIXTURES / "toy-plan.json"),
        "--hierarchy", str(FIXTURES / "toy-hierarchy.json"),
        "--out-dir", str(out), "--runs", "30", "--seed", "100",
        "--methods", "ica++", "--K", "800", "--delta-c", "6", "--delta-s", "9"])
    assert code == 0
    reports, timings = [], []
    for seed in range(100, 130):
        reports.append(json.loads((out / f"report-ica++-{seed}.json").read_bytes()))
        timings.append(json.loads((out / f"timings-ica++-{seed}.json").read_bytes()))
    redone = canonical_json({"ica++": aggregate_docs(reports, timings)})
    stored = (out / "bench.json").read_bytes()
    report_line(
        "bench over 30 runs reproducible bit-exactly from stored per-run reports",
        redone == stored,
        f"{len(reports)} runs, {len(stored)} bytes")


def test_service_parity_with_cli(tmp_path):
    """Secondary-facing check: the HTTP service returns the exact bytes
    the CLI writes for the same inputs, and the status machine completes."""
    from fastapi.testclient import TestClient

    from seatplan.service import create_app

    plan_doc = json.loads((FIXTURES / "toy-plan.json").read_text())
    hier_doc = json.loads((FIXTURES / "toy-hierarchy.json").read_text())
    config = {"K": 800, "delta_c": 6.0, "delta_s": 9.0, "seed": 11,
              "method": "ica++"}

    with TestClient(create_app(tmp_path / "data")) as client:
        plan_id = client.post("/plans", json=plan_doc).json()["id"]
        sid = client.post("/scenarios", json={
            "plan_id": plan_id, "hierarchy": hier_doc, "config": config,
        }).json()["id"]
        statuses = [client.get(f"/scenarios/{sid}").json()["status"]]
        client.post(f"/scenarios/{sid}/solve")
        deadline = time.monotonic() + 60
        while time.monotonic() < deadline:
            status = client.get(f"/scenarios/{sid}").json()["status"]
            if statuses[-1] != status:
                statuses.append(status)
            if status in ("Done", "Failed"):
                break
            time.sleep(0.02)
        api_report = client.get(f"/scenarios/{sid}/report").content
        api_svg = client.get(f"/scenarios/{sid}/render/0.svg").content
        delta = client.get(f"/scenarios/{sid}/compare/{sid}").json()

    out = tmp_path / "cli"
    cli.main(["solve", "--plan", str(FIXTURES / "toy-plan.json"),
              "--hierarchy", str(FIXTURES / "toy-hierarchy.json"),
              "--out-dir", str(out), "--method", "ica++", "--seed", "11",
              "--K", "800", "--delta-c", "6", "--delta-s", "9"])

    ok = (api_report == (out / "report.json").read_bytes()
          and api_svg == (out / "level-0.svg").read_bytes()
          and statuses[0] == "Draft" and statuses[-1] == "Done"
          and all(row.get("mean_central_seat_distance") in (0.0, None)
                  for row in delta["per_level"]))
    report_line(
        "service returns CLI-identical artifacts; status machine completes",
        ok, f"statuses {statuses}")
