"""Allocate a two-level org chart on the medium floor plan and render
one SVG per hierarchy level.

Run:  python3 demos/hierarchical_allocation.py [--delayed]
Writes demos/out/level-*.svg.
"""

import sys
from pathlib import Path

from seatplan import synth
from seatplan.hierarchy import delayed_office_allocate, df_hsa
from seatplan.model import SolverParams
from seatplan.reporting import compute_metrics, render_svg
from seatplan.roadmap import RoadmapParams, all_pairs_seat_distances, generate_prm

OUT = Path(__file__).resolve().parent / "out"


def main():
    delayed = "--delayed" in sys.argv
    plan = synth.medium_plan()
    roadmap = generate_prm(plan, RoadmapParams(K=2000, delta_c=15.0, delta_s=25.0, seed=3))
    matrix = all_pairs_seat_distances(roadmap)
    hierarchy = synth.org_chart_hierarchy()
    seats = list(plan.seats)

    params = SolverParams(seed=0)
    result, _ = df_hsa(seats, matrix, hierarchy, "ica++", params, delayed=delayed)
    if delayed:
        result = delayed_office_allocate(seats, matrix, hierarchy, result)

    report = compute_metrics(seats, matrix, hierarchy, result, method="ica++")
    print(f"{'level':<7}{'seats':>6}{'mean dist':>11}{'office dist':>13}{'max dist':>10}")
    for m in report.per_level:
        office = f"{m.mean_office_distance:.1f}" if m.mean_office_distance else "-"
        print(f"{m.level:<7}{m.seats_allocated:>6}{m.mean_central_seat_distance:>11.1f}"
              f"{office:>13}{m.max_central_seat_distance:>10.1f}")

    OUT.mkdir(exist_ok=True)
    for level, mapping in enumerate(result.per_level):
        centrals = {t: result.per_team_central[t] for t in set(mapping.values())}
        svg = render_svg(plan, allocation=mapping, centrals=centrals, level=level,
                         scale=3.0)
        (OUT / f"level-{level}.svg").write_text(svg + "\n")
    print(f"wrote {OUT}/level-*.svg")


if __name__ == "__main__":
    main()
