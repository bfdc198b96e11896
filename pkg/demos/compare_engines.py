"""Solve the toy instance with every engine and print the objectives.

The exact branch-and-bound engine gives the reference value; the
iterative and greedy engines trade quality for speed.

Run:  python3 demos/compare_engines.py
"""

import time

from seatplan import synth
from seatplan.model import SaProblem, SolverParams
from seatplan.roadmap import RoadmapParams, all_pairs_seat_distances, generate_prm
from seatplan.solvers import METHODS, solve


def main():
    plan = synth.toy_walled_plan()
    roadmap = generate_prm(plan, RoadmapParams(K=2000, delta_c=6.0, delta_s=9.0, seed=1))
    matrix = all_pairs_seat_distances(roadmap)
    problem = SaProblem(list(plan.seats), synth.toy_teams(), matrix)

    print(f"{'engine':<10}{'objective':>12}{'seconds':>10}  note")
    for method in METHODS:
        params = SolverParams(seed=3, max_nodes=8000)
        t0 = time.monotonic()
        res = solve(problem, method, params)
        note = "search exhausted" if res.optimal else "best incumbent"
        print(f"{method:<10}{res.objective:>12.2f}{time.monotonic() - t0:>10.2f}  {note}")


if __name__ == "__main__":
    main()
