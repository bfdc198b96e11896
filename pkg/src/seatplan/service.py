"""HTTP scenario service for the iterative planning loop.

Scenarios hold a plan reference, an editable hierarchy, and a solver
config. Solves are queued to a single FIFO worker thread; results are
the exact artifacts the CLI would produce for the same inputs and seed
(both go through :func:`seatplan.pipeline.run_pipeline`). State is
persisted as JSON under the data directory; no external database.
"""

import json
import queue
import threading
import time
import uuid
from pathlib import Path

from fastapi import FastAPI, Response
from fastapi.responses import JSONResponse

from seatplan.floorplan import FloorPlanError, load_floorplan
from seatplan.hierarchy import HierarchyError, load_hierarchy
from seatplan.model import InfeasibleProblemError
from seatplan.pipeline import PipelineConfig, canonical_json, precheck, run_pipeline

DRAFT = "Draft"
QUEUED = "Queued"
RUNNING = "Running"
DONE = "Done"
FAILED = "Failed"

_RESUBMITTABLE = (DRAFT, DONE, FAILED)


class Store:
    """Disk-backed scenario and plan state behind a single lock.

    Reads hand out copies, so request handlers never see partial
    mutations from the worker.
    """

    def __init__(self, data_dir):
        self.root = Path(data_dir)
        (self.root / "plans").mkdir(parents=True, exist_ok=True)
        (self.root / "scenarios").mkdir(parents=True, exist_ok=True)
        (self.root / "results").mkdir(parents=True, exist_ok=True)
        (self.root / "cache").mkdir(parents=True, exist_ok=True)
        self.lock = threading.Lock()
        self.scenarios = {}
        for f in (self.root / "scenarios").glob("*.json"):
            self.scenarios[f.stem] = json.loads(f.read_text())

    def save_plan(self, plan_bytes):
        pid = uuid.uuid4().hex[:12]
        (self.root / "plans" / f"{pid}.json").write_bytes(plan_bytes)
        return pid

    def plan_bytes(self, plan_id):
        path = self.root / "plans" / f"{plan_id}.json"
        if not path.exists():
            return None
        return path.read_bytes()

    def persist(self, scenario):
        path = self.root / "scenarios" / f"{scenario['id']}.json"
        path.write_text(json.dumps(scenario, sort_keys=True))

    def get(self, scenario_id):
        with self.lock:
            sc = self.scenarios.get(scenario_id)
            return json.loads(json.dumps(sc)) if sc is not None else None

    def put(self, scenario):
        with self.lock:
            self.scenarios[scenario["id"]] = scenario
            self.persist(scenario)

    def update_status(self, scenario_id, status, **extra):
        with self.lock:
            sc = self.scenarios[scenario_id]
            sc["status"] = status
            sc["updated"] = time.time()
            sc.update(extra)
            self.persist(sc)

    def result_dir(self, scenario_id):
        return self.root / "results" / scenario_id


def _worker_loop(store, jobs):
    while True:
        scenario_id = jobs.get()
        if scenario_id is None:
            return
        sc = store.get(scenario_id)
        if sc is None:
            continue
        store.update_status(scenario_id, RUNNING, started=time.time())
        try:
            plan_bytes = store.plan_bytes(sc["plan_id"])
            config = PipelineConfig(**sc["config"])
            artifacts = run_pipeline(
                plan_bytes, json.dumps(sc["hierarchy"]).encode(), config,
                cache_dir=str(store.root / "cache"))
            out = store.result_dir(scenario_id)
            out.mkdir(parents=True, exist_ok=True)
            (out / "report.json").write_bytes(artifacts.report)
            (out / "timings.json").write_bytes(artifacts.timings)
            (out / "allocation.json").write_bytes(artifacts.allocation)
            for level, data in artifacts.svgs.items():
                (out / f"level-{level}.svg").write_bytes(data)
            store.update_status(scenario_id, DONE,
                                levels=sorted(artifacts.svgs))
        except Exception as exc:
            store.update_status(scenario_id, FAILED,
                                error=f"{type(exc).__name__}: {exc}")


def create_app(data_dir):
    store = Store(data_dir)
    jobs = queue.Queue()
    worker = threading.Thread(target=_worker_loop, args=(store, jobs), daemon=True)
    worker.start()
    app = FastAPI(title="seatplan scenario service")
    app.state.store = store
    app.state.jobs = jobs

    def _error(status, message):
        return JSONResponse({"error": message}, status_code=status)

    @app.post("/plans", status_code=201)
    async def upload_plan(doc: dict):
        raw = json.dumps(doc).encode()
        try:
            load_floorplan(raw)
        except FloorPlanError as exc:
            return _error(422, str(exc))
        pid = store.save_plan(raw)
        return {"id": pid}

    @app.post("/scenarios", status_code=201)
    async def create_scenario(doc: dict):
        plan_id = doc.get("plan_id")
        if plan_id is None or store.plan_bytes(plan_id) is None:
            return _error(404, f"unknown plan {plan_id}")
        try:
            load_hierarchy(json.dumps(doc.get("hierarchy", [])))
            config = PipelineConfig(**doc.get("config", {}))
        except (HierarchyError, ValueError, TypeError) as exc:
            return _error(422, str(exc))
        now = time.time()
        scenario = {
            "id": uuid.uuid4().hex[:12],
            "plan_id": plan_id,
            "hierarchy": doc.get("hierarchy", []),
            "config": config.to_doc(),
            "status": DRAFT,
            "created": now,
            "updated": now,
        }
        store.put(scenario)
        return {k: scenario[k] for k in ("id", "status", "created")}

    @app.patch("/scenarios/{scenario_id}")
    async def patch_scenario(scenario_id: str, doc: dict):
        sc = store.get(scenario_id)
        if sc is None:
            return _error(404, f"unknown scenario {scenario_id}")
        if sc["status"] in (QUEUED, RUNNING):
            return _error(409, f"scenario is {sc['status']}")
        if "hierarchy" in doc:
            try:
                load_hierarchy(json.dumps(doc["hierarchy"]))
            except HierarchyError as exc:
                return _error(422, str(exc))
            sc["hierarchy"] = doc["hierarchy"]
        if "config" in doc:
            merged = dict(sc["config"])
            merged.update(doc["config"])
            try:
                sc["config"] = PipelineConfig(**merged).to_doc()
            except (ValueError, TypeError) as exc:
                return _error(422, str(exc))
        sc["status"] = DRAFT  # edits start a fresh Draft cycle
        sc["updated"] = time.time()
        store.put(sc)
        return {"id": sc["id"], "status": sc["status"]}

    @app.post("/scenarios/{scenario_id}/solve", status_code=202)
    async def submit_solve(scenario_id: str, doc: dict = None):
        sc = store.get(scenario_id)
        if sc is None:
            return _error(404, f"unknown scenario {scenario_id}")
        if sc["status"] not in _RESUBMITTABLE:
            return _error(409, f"scenario is {sc['status']}")
        if doc:
            merged = dict(sc["config"])
            merged.update(doc)
            try:
                sc["config"] = PipelineConfig(**merged).to_doc()
            except (ValueError, TypeError) as exc:
                return _error(422, str(exc))
        try:
            plan = load_floorplan(store.plan_bytes(sc["plan_id"]))
            hierarchy = load_hierarchy(json.dumps(sc["hierarchy"]))
        except (FloorPlanError, HierarchyError) as exc:
            return _error(422, str(exc))
        violations = precheck(plan, hierarchy, sc["config"]["delayed_office"])
        if violations:
            return _error(422, "; ".join(violations))
        job_id = uuid.uuid4().hex[:12]
        sc["status"] = QUEUED
        sc["job_id"] = job_id
        sc["updated"] = time.time()
        store.put(sc)
        jobs.put(scenario_id)
        return {"job_id": job_id, "status": QUEUED}

    @app.get("/scenarios/{scenario_id}")
    async def get_scenario(scenario_id: str):
        sc = store.get(scenario_id)
        if sc is None:
            return _error(404, f"unknown scenario {scenario_id}")
        if sc["status"] == RUNNING and "started" in sc:
            sc["elapsed"] = time.time() - sc["started"]
        return sc

    def _done_or_error(scenario_id):
        sc = store.get(scenario_id)
        if sc is None:
            return None, _error(404, f"unknown scenario {scenario_id}")
        if sc["status"] != DONE:
            return None, JSONResponse(
                {"status": sc["status"], "error": sc.get("error")},
                status_code=409)
        return sc, None

    @app.get("/scenarios/{scenario_id}/report")
    async def get_report(scenario_id: str):
        sc, err = _done_or_error(scenario_id)
        if err is not None:
            return err
        data = (store.result_dir(scenario_id) / "report.json").read_bytes()
        return Response(content=data, media_type="application/json")

    @app.get("/scenarios/{scenario_id}/allocation")
    async def get_allocation(scenario_id: str):
        sc, err = _done_or_error(scenario_id)
        if err is not None:
            return err
        data = (store.result_dir(scenario_id) / "allocation.json").read_bytes()
        return Response(content=data, media_type="application/json")

    @app.get("/scenarios/{scenario_id}/render/{level}.svg")
    async def get_render(scenario_id: str, level: int):
        sc, err = _done_or_error(scenario_id)
        if err is not None:
            return err
        path = store.result_dir(scenario_id) / f"level-{level}.svg"
        if not path.exists():
            return _error(404, f"unknown level {level}")
        return Response(content=path.read_bytes(), media_type="image/svg+xml")

    @app.get("/scenarios/{scenario_id}/compare/{other_id}")
    async def compare(scenario_id: str, other_id: str):
        a, err = _done_or_error(scenario_id)
        if err is not None:
            return err
        b, err = _done_or_error(other_id)
        if err is not None:
            return err
        ra = json.loads((store.result_dir(scenario_id) / "report.json").read_bytes())
        rb = json.loads((store.result_dir(other_id) / "report.json").read_bytes())
        deltas = []
        for la, lb in zip(ra["per_level"], rb["per_level"]):
            row = {"level": la["level"]}
            for key in ("mean_central_seat_distance", "mean_office_distance",
                        "max_central_seat_distance"):
                if la[key] is None or lb[key] is None:
                    row[key] = None
                else:
                    row[key] = lb[key] - la[key]
            deltas.append(row)
        return Response(content=canonical_json({"a": scenario_id, "b": other_id,
                                                "per_level": deltas}),
                        media_type="application/json")

    return app
