"""Shared fixtures: synthetic plans and their roadmap distances.

Roadmap construction is deterministic, so session-scoped fixtures are
safe and keep the suite fast.
"""

from pathlib import Path

import pytest

from seatplan import synth
from seatplan.roadmap import RoadmapParams, all_pairs_seat_distances, generate_prm

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

TOY_ROADMAP_PARAMS = RoadmapParams(K=2000, delta_c=6.0, delta_s=9.0, seed=1)
MEDIUM_ROADMAP_PARAMS = RoadmapParams(K=2000, delta_c=15.0, delta_s=25.0, seed=3)


@pytest.fixture(scope="session")
def toy_plan():
    return synth.toy_walled_plan()


@pytest.fixture(scope="session")
def toy_roadmap(toy_plan):
    return generate_prm(toy_plan, TOY_ROADMAP_PARAMS)


@pytest.fixture(scope="session")
def toy_distances(toy_roadmap):
    matrix = all_pairs_seat_distances(toy_roadmap)
    assert matrix.connected
    return matrix


@pytest.fixture(scope="session")
def medium_plan():
    return synth.medium_plan()


@pytest.fixture(scope="session")
def medium_distances(medium_plan):
    roadmap = generate_prm(medium_plan, MEDIUM_ROADMAP_PARAMS)
    matrix = all_pairs_seat_distances(roadmap)
    assert matrix.connected
    return matrix
