"""Seat-allocation engines.

Four engines share one exact building block: for a fixed set of central
seats, assigning seats to teams is a transportation problem that splits
by seat kind and is solved exactly with ``linear_sum_assignment`` over
demand-expanded team slots.

* ipsa:   branch-and-bound over central-seat selections, exact when the
          search completes within its node/time budget.
* ica:    alternate exact allocation and medoid relocation from a random
          or k-means++ start ("ica++" selects the latter).
* gsa:    regret-ordered greedy allocation inside the same outer loop.
* ls:     re-solves the central selection restricted to the s_n nearest
          neighbors of the incumbent centrals, warm-started, so it can
          only improve.
"""

import time
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from seatplan.floorplan import DESK, OFFICE
from seatplan.model import (
    KMEANSPP_INIT,
    RANDOM_INIT,
    InfeasibleProblemError,
    best_central_seat,
    init_centrals,
    objective,
)

METHODS = ("ipsa", "ica", "ica++", "gsa", "ica+ls", "gsa+ls")

_TIE_EPS = 1e-12


@dataclass
class SolveResult:
    allocation: dict  # seat id -> team id
    centrals: dict  # team id -> seat id
    objective: float
    optimal: bool
    iterations: int
    elapsed: float
    history: list = None  # per-iteration objective (iterative engines only)


def _transport_kind(problem, centrals, kind, alloc, teams):
    """Exactly assign seats of one kind to demand-expanded team slots."""
    seat_ids = problem.desk_ids if kind == DESK else problem.office_ids
    slots = []
    for t in teams:
        need = t.desks_required if kind == DESK else t.offices_required
        slots.extend([t.id] * need)
    if not slots:
        return 0.0
    if len(slots) > len(seat_ids):
        raise InfeasibleProblemError(
            f"{kind} demand {len(slots)} exceeds supply {len(seat_ids)}")
    D = problem.distances
    rows = np.asarray([D.index(s) for s in seat_ids])
    cols = np.asarray([D.index(centrals[t]) for t in slots])
    cost = D.dist[np.ix_(rows, cols)]
    ri, ci = linear_sum_assignment(cost)
    total = float(cost[ri, ci].sum())
    for r, c in zip(ri, ci):
        alloc[seat_ids[int(r)]] = slots[int(c)]
    return total


def _canonicalize_centrals(problem, centrals, alloc):
    """Ensure each team's central seat is assigned to that team when its
    kind is demanded. The swap never increases cost (triangle
    inequality), so the allocation stays optimal."""
    kind = {s.id: s.kind for s in problem.seats}
    need = {t.id: {DESK: t.desks_required, OFFICE: t.offices_required}
            for t in problem.teams}
    for t in sorted(centrals):
        c = centrals[t]
        k = kind[c]
        if need[t][k] == 0 or alloc.get(c) == t:
            continue
        # release the same-kind seat of t farthest from the central
        members = sorted(s for s, tt in alloc.items() if tt == t and kind[s] == k)
        victim = max(members, key=lambda s: (problem.distances.d(s, c), s))
        other = alloc.get(c)
        del alloc[victim]
        alloc[c] = t
        if other is not None:
            alloc[victim] = other


def allocate_given_centrals(problem, centrals):
    """Exact minimizer of total seat-to-central distance for fixed centrals.

    Returns a dict seat id -> team id covering every team's desk and
    office requirement. Raises InfeasibleProblemError when demand
    exceeds supply of a kind.
    """
    teams = sorted(problem.teams, key=lambda t: t.id)
    missing = [t.id for t in teams if t.id not in centrals]
    if missing:
        raise ValueError(f"teams without a central seat: {missing}")
    alloc = {}
    _transport_kind(problem, centrals, DESK, alloc, teams)
    _transport_kind(problem, centrals, OFFICE, alloc, teams)
    _canonicalize_centrals(problem, centrals, alloc)
    return alloc


def _relaxed_central_costs(problem, candidate_ids):
    """Lower-bound cost of serving each team from each candidate central,
    ignoring competition between teams: sum of the d_t (o_t) smallest
    desk (office) distances to the candidate."""
    D = problem.distances
    cand_idx = np.asarray([D.index(c) for c in candidate_ids])
    out = np.zeros((len(problem.teams), len(candidate_ids)))
    for kind, ids in ((DESK, problem.desk_ids), (OFFICE, problem.office_ids)):
        if not ids:
            continue
        rows = np.asarray([D.index(s) for s in ids])
        block = np.sort(D.dist[np.ix_(rows, cand_idx)], axis=0)
        cum = np.vstack([np.zeros(len(candidate_ids)), np.cumsum(block, axis=0)])
        for ti, t in enumerate(problem.teams):
            need = t.desks_required if kind == DESK else t.offices_required
            out[ti] += cum[need]
    return out


def _branch_and_bound(problem, candidate_ids, params, warm=None):
    """Search over distinct central-seat selections, one per team.

    Each leaf is evaluated exactly with the transportation subroutine.
    ``warm`` is an optional (allocation, centrals, objective) incumbent.
    Returns (alloc, centrals, objective, completed, leaves).
    """
    teams = sorted(problem.teams, key=lambda t: t.id)
    nteams = len(teams)
    candidate_ids = sorted(set(candidate_ids))
    if len(candidate_ids) < nteams:
        raise InfeasibleProblemError("fewer candidate centrals than teams")

    rc = _relaxed_central_costs(problem, candidate_ids)
    order = [np.lexsort((candidate_ids, rc[ti]))
             for ti in range(nteams)]  # ascending bound, ties by id
    future = np.zeros(nteams + 1)
    for ti in range(nteams - 1, -1, -1):
        future[ti] = future[ti + 1] + float(rc[ti].min())

    best_obj = np.inf
    best = None
    if warm is not None:
        best = (dict(warm[0]), dict(warm[1]))
        best_obj = warm[2]

    deadline = time.monotonic() + params.time_limit
    max_leaves = params.max_nodes if params.max_nodes is not None else np.inf
    leaves = 0
    aborted = False

    chosen = [None] * nteams
    used = set()

    def dfs(ti, partial):
        nonlocal best_obj, best, leaves, aborted
        if aborted:
            return
        if ti == nteams:
            leaves += 1
            centrals = {teams[i].id: chosen[i] for i in range(nteams)}
            alloc = allocate_given_centrals(problem, centrals)
            obj = objective(problem, alloc, centrals)
            if obj < best_obj - _TIE_EPS:
                best_obj = obj
                best = (alloc, centrals)
            if leaves >= max_leaves or time.monotonic() > deadline:
                aborted = True
            return
        for ci in order[ti]:
            cand = candidate_ids[int(ci)]
            if cand in used:
                continue
            lb = partial + rc[ti, int(ci)] + future[ti + 1]
            if lb >= best_obj + _TIE_EPS:
                break  # candidates are bound-sorted
            chosen[ti] = cand
            used.add(cand)
            dfs(ti + 1, partial + rc[ti, int(ci)])
            used.discard(cand)
            if aborted:
                return

    dfs(0, 0.0)
    if best is None:
        raise InfeasibleProblemError("no feasible central selection found")
    return best[0], best[1], best_obj, not aborted, leaves


def ipsa_solve(problem, params):
    """Exact central-seat selection by branch and bound.

    ``optimal`` is True only when the search space was exhausted within
    the node and time budgets; otherwise the best incumbent is returned.
    """
    problem.check_supply()
    start = time.monotonic()
    all_ids = sorted(s.id for s in problem.seats)
    alloc, centrals, obj, completed, leaves = _branch_and_bound(
        problem, all_ids, params)
    return SolveResult(alloc, centrals, obj, completed, leaves,
                       time.monotonic() - start)


def ica_solve(problem, params, init=None):
    """Iterative location-allocation from a random or k-means++ start."""
    problem.check_supply()
    start = time.monotonic()
    method = init if init is not None else params.init
    centrals = init_centrals(problem, method, params.seed)
    alloc = {}
    history = []
    it = 0
    while it < params.max_iterations:
        it += 1
        alloc = allocate_given_centrals(problem, centrals)
        history.append(objective(problem, alloc, centrals))
        new_centrals = {t.id: best_central_seat(problem, t.id, alloc)
                        for t in problem.teams}
        if new_centrals == centrals:
            break
        centrals = new_centrals
    else:
        centrals = new_centrals
    obj = objective(problem, alloc, centrals)
    return SolveResult(alloc, centrals, obj, False, it, time.monotonic() - start,
                       history=history)


def _regret_order(problem, centrals, regret_mode):
    """Seat processing order for the greedy phase.

    classic: r = D(s, second nearest central) - D(s, nearest central),
    descending. paper-literal flips the sign of the formula while
    keeping the descending order. Single-team instances have r = 0 for
    every seat and fall back to seat-id order.
    """
    D = problem.distances
    team_ids = sorted(centrals)
    rows = []
    for s in sorted(x.id for x in problem.seats):
        ds = sorted((D.d(s, centrals[t]), t) for t in team_ids)
        d1 = ds[0][0]
        d2 = ds[1][0] if len(ds) > 1 else d1
        r = (d2 - d1) if regret_mode == "classic" else (d1 - d2)
        rows.append((s, r))
    rows.sort(key=lambda x: (-x[1], x[0]))
    return [s for s, _ in rows]


def _greedy_allocate(problem, centrals, regret_mode):
    D = problem.distances
    remaining = {t.id: {DESK: t.desks_required, OFFICE: t.offices_required}
                 for t in problem.teams}
    kind = {s.id: s.kind for s in problem.seats}
    alloc = {}
    for s in _regret_order(problem, centrals, regret_mode):
        by_proximity = sorted(remaining, key=lambda t: (D.d(s, centrals[t]), t))
        for t in by_proximity:
            if remaining[t][kind[s]] > 0:
                alloc[s] = t
                remaining[t][kind[s]] -= 1
                break
    return alloc


def gsa_solve(problem, params):
    """Greedy allocation inside the location-allocation outer loop."""
    problem.check_supply()
    start = time.monotonic()
    centrals = init_centrals(problem, KMEANSPP_INIT, params.seed)
    alloc = {}
    history = []
    it = 0
    while it < params.max_iterations:
        it += 1
        alloc = _greedy_allocate(problem, centrals, params.regret)
        history.append(objective(problem, alloc, centrals))
        new_centrals = {t.id: best_central_seat(problem, t.id, alloc)
                        for t in problem.teams}
        if new_centrals == centrals:
            break
        centrals = new_centrals
    else:
        centrals = new_centrals
    obj = objective(problem, alloc, centrals)
    return SolveResult(alloc, centrals, obj, False, it, time.monotonic() - start,
                       history=history)


def candidate_centrals(problem, centrals, s_n):
    """Incumbent centrals plus the s_n nearest seats to each of them."""
    D = problem.distances
    all_ids = sorted(s.id for s in problem.seats)
    cands = set(centrals.values())
    for c in sorted(centrals.values()):
        ranked = sorted((D.d(c, s), s) for s in all_ids if s != c)
        cands.update(s for _, s in ranked[:s_n])
    return sorted(cands)


def ls_improve(problem, incumbent, params):
    """Restricted exact re-solve around the incumbent's central seats.

    Never returns a worse objective than the incumbent.
    """
    problem.check_supply()
    start = time.monotonic()
    cands = candidate_centrals(problem, incumbent.centrals, params.s_n)
    warm = (incumbent.allocation, incumbent.centrals, incumbent.objective)
    alloc, centrals, obj, completed, leaves = _branch_and_bound(
        problem, cands, params, warm=warm)
    if obj >= incumbent.objective - _TIE_EPS:
        return SolveResult(dict(incumbent.allocation), dict(incumbent.centrals),
                           incumbent.objective, incumbent.optimal,
                           incumbent.iterations, time.monotonic() - start)
    return SolveResult(alloc, centrals, obj, incumbent.optimal and completed,
                       leaves, time.monotonic() - start)


def solve(problem, method, params):
    """Dispatch on method name: ipsa, ica, ica++, gsa, ica+ls, gsa+ls."""
    if method == "ipsa":
        return ipsa_solve(problem, params)
    if method == "ica":
        return ica_solve(problem, params, init=RANDOM_INIT)
    if method == "ica++":
        return ica_solve(problem, params, init=KMEANSPP_INIT)
    if method == "gsa":
        return gsa_solve(problem, params)
    if method == "ica+ls":
        return ls_improve(problem, ica_solve(problem, params, init=RANDOM_INIT), params)
    if method == "gsa+ls":
        return ls_improve(problem, gsa_solve(problem, params), params)
    raise ValueError(f"unknown method: {method}")
