"""Independent brute-force references for tests.

These deliberately avoid the production code paths: the exhaustive SA
optimum enumerates every distinct central-seat selection and solves the
per-selection assignment with a dynamic program over remaining demand
counts, never touching ``linear_sum_assignment`` or the branch-and-bound
search.
"""

import itertools
from dataclasses import dataclass

from seatplan.floorplan import DESK, OFFICE

SA_SEAT_GUARD = 12
SA_TEAM_GUARD = 3
MIQP_SEAT_GUARD = 10


class OracleGuardError(ValueError):
    """Instance exceeds the enumeration guard bounds."""


@dataclass
class OracleResult:
    objective: float
    allocation: dict
    centrals: dict  # empty for the MIQP (no central seats there)
    enumerated: int


def _dp_assign(seat_ids, team_ids, demands, cost):
    """Min-cost assignment of seats to teams with exact per-team counts.

    ``cost[s][t]`` is the cost of giving seat s to team t; seats may be
    left unassigned. Returns (total, {seat: team}) or (inf, None) when
    demand cannot be met. Plain dict-keyed DP over remaining-demand
    tuples; deliberately not a matching solver.
    """
    states = {tuple(demands): (0.0, {})}
    for s in seat_ids:
        nxt = {}
        for state, (val, assign) in states.items():
            # leave s unassigned
            prev = nxt.get(state)
            if prev is None or val < prev[0] - 1e-15:
                nxt[state] = (val, assign)
            for ti, t in enumerate(team_ids):
                if state[ti] == 0:
                    continue
                new_state = state[:ti] + (state[ti] - 1,) + state[ti + 1:]
                new_val = val + cost[s][t]
                prev = nxt.get(new_state)
                if prev is None or new_val < prev[0] - 1e-15:
                    new_assign = dict(assign)
                    new_assign[s] = t
                    nxt[new_state] = (new_val, new_assign)
        states = nxt
    done = states.get(tuple(0 for _ in team_ids))
    if done is None:
        return float("inf"), None
    return done


def brute_force_sa(problem):
    """Global optimum of the central-seat formulation by full enumeration."""
    seats = sorted(problem.seats, key=lambda s: s.id)
    teams = sorted(problem.teams, key=lambda t: t.id)
    if len(seats) > SA_SEAT_GUARD or len(teams) > SA_TEAM_GUARD:
        raise OracleGuardError(
            f"instance {len(seats)} seats / {len(teams)} teams exceeds guard")
    seat_ids = [s.id for s in seats]
    desk_ids = [s.id for s in seats if s.kind == DESK]
    office_ids = [s.id for s in seats if s.kind == OFFICE]
    team_ids = [t.id for t in teams]
    D = problem.distances

    best = None
    count = 0
    for centrals in itertools.permutations(seat_ids, len(teams)):
        count += 1
        cost = {s: {t: D.d(s, centrals[ti]) for ti, t in enumerate(team_ids)}
                for s in seat_ids}
        vd, ad = _dp_assign(desk_ids, team_ids,
                            [t.desks_required for t in teams], cost)
        if ad is None:
            continue
        vo, ao = _dp_assign(office_ids, team_ids,
                            [t.offices_required for t in teams], cost)
        if ao is None:
            continue
        total = vd + vo
        if best is None or total < best[0] - 1e-15:
            alloc = dict(ad)
            alloc.update(ao)
            best = (total, alloc, {t: centrals[ti] for ti, t in enumerate(team_ids)})
    if best is None:
        raise ValueError("no feasible assignment exists")
    return OracleResult(best[0], best[1], best[2], count)


def miqp_objective(problem, alloc):
    """Ordered-pair intra-team distance sum: every unordered pair twice."""
    D = problem.distances
    total = 0.0
    by_team = {}
    for s, t in alloc.items():
        by_team.setdefault(t, []).append(s)
    for members in by_team.values():
        for a in members:
            for b in members:
                total += D.d(a, b)
    return total


def brute_force_miqp(problem):
    """Exhaustive minimizer of the intra-team pairwise distance objective."""
    seats = sorted(problem.seats, key=lambda s: s.id)
    teams = sorted(problem.teams, key=lambda t: t.id)
    if len(seats) > MIQP_SEAT_GUARD or len(teams) > SA_TEAM_GUARD:
        raise OracleGuardError(
            f"instance {len(seats)} seats / {len(teams)} teams exceeds guard")
    desk_ids = [s.id for s in seats if s.kind == DESK]
    office_ids = [s.id for s in seats if s.kind == OFFICE]

    def splits(pool, needs):
        """All ways of giving each team its exact count from the pool."""
        if not needs:
            yield {}
            return
        (team, n), rest = needs[0], needs[1:]
        for picked in itertools.combinations(pool, n):
            remaining = [p for p in pool if p not in picked]
            for sub in splits(remaining, rest):
                out = {s: team for s in picked}
                out.update(sub)
                yield out

    desk_needs = [(t.id, t.desks_required) for t in teams]
    office_needs = [(t.id, t.offices_required) for t in teams]

    best = None
    count = 0
    for d_alloc in splits(desk_ids, desk_needs):
        for o_alloc in splits(office_ids, office_needs):
            count += 1
            alloc = dict(d_alloc)
            alloc.update(o_alloc)
            val = miqp_objective(problem, alloc)
            if best is None or val < best[0] - 1e-15:
                best = (val, alloc)
    if best is None:
        raise ValueError("no feasible assignment exists")
    return OracleResult(best[0], best[1], {}, count)
