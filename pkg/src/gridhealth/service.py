"""HTTP API: submit runs and sweeps as asynchronous jobs, poll for results.

Desk-scale job model: a bounded worker pool executes simulations, an
in-memory store tracks job records behind a lock, and every body reuses the
scenario / policy / metrics JSON schemas of the file formats. Endpoints are
documented in docs/http-api.md.
"""

from __future__ import annotations

import json
import mimetypes
import re
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import BUILTIN_SCENARIOS
from .grid_model import Scenario, ScenarioError, Violation
from .policy_engine import PolicyConfig
from .scenario_io import policy_config_from_dict, scenario_from_dict, scenario_to_dict
from .sim_harness import run_episode, sweep

QUEUED, RUNNING, DONE, FAILED = "QUEUED", "RUNNING", "DONE", "FAILED"


class JobStore:
    """Synchronized job and scenario registry. Status moves only forward."""

    def __init__(self, max_workers: int = 4):
        self._lock = threading.Lock()
        self._jobs: dict[str, dict] = {}
        self._scenarios: dict[str, Scenario] = {}
        self._pool = ThreadPoolExecutor(max_workers=max_workers)

    def add_scenario(self, scenario: Scenario) -> str:
        scenario_id = uuid.uuid4().hex
        with self._lock:
            self._scenarios[scenario_id] = scenario
        return scenario_id

    def get_scenario(self, scenario_id: str) -> Scenario | None:
        with self._lock:
            return self._scenarios.get(scenario_id)

    def submit(self, work) -> str:
        job_id = uuid.uuid4().hex
        with self._lock:
            self._jobs[job_id] = {"job_id": job_id, "status": QUEUED,
                                  "result": None, "error": None}
        self._pool.submit(self._run, job_id, work)
        return job_id

    def _run(self, job_id: str, work) -> None:
        self._set(job_id, status=RUNNING)
        try:
            result = work()
        except Exception as exc:  # noqa: BLE001 - job isolation boundary
            self._set(job_id, status=FAILED, error=str(exc))
            return
        self._set(job_id, status=DONE, result=result)

    def _set(self, job_id: str, **fields) -> None:
        with self._lock:
            self._jobs[job_id].update(fields)

    def get(self, job_id: str) -> dict | None:
        with self._lock:
            record = self._jobs.get(job_id)
            return dict(record) if record else None

    def shutdown(self) -> None:
        self._pool.shutdown(wait=False, cancel_futures=True)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, violations=()):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.violations = [str(v) for v in violations]

    def body(self) -> dict:
        return {"code": self.code, "message": self.message, "violations": self.violations}


RUN_FIELDS = frozenset({"scenario", "policy_config", "T", "seed", "include_trajectory"})
SWEEP_FIELDS = RUN_FIELDS | {"axis", "values"}


def _parse_run_request(doc: dict, store: JobStore,
                       allowed: frozenset = RUN_FIELDS) -> tuple[Scenario, PolicyConfig, int, int | None, bool]:
    if not isinstance(doc, dict):
        raise ApiError(400, "validation", "request body must be a JSON object")
    unknown = set(doc) - allowed
    if unknown:
        raise ApiError(400, "validation", "unknown request fields",
                       [Violation("UnknownField", k) for k in sorted(unknown)])
    ref = doc.get("scenario")
    try:
        if isinstance(ref, str):
            if ref in BUILTIN_SCENARIOS:
                scenario = BUILTIN_SCENARIOS[ref]()
            else:
                scenario = store.get_scenario(ref)
                if scenario is None:
                    raise ApiError(404, "not_found", f"unknown scenario {ref!r}")
        elif isinstance(ref, dict):
            scenario = scenario_from_dict(ref)
        else:
            raise ApiError(400, "validation", "scenario must be a name, id, or inline document")
        policy = policy_config_from_dict(doc.get("policy_config") or {})
    except ScenarioError as exc:
        raise ApiError(400, "validation", "invalid request", exc.violations) from exc
    T = doc.get("T", 1000)
    if not isinstance(T, int) or T < 1:
        raise ApiError(400, "validation", "T must be a positive integer")
    seed = doc.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise ApiError(400, "validation", "seed must be an integer")
    include_trajectory = bool(doc.get("include_trajectory", False))
    return scenario, policy, T, seed, include_trajectory


def _run_job(scenario, policy, T, seed, include_trajectory):
    metrics = run_episode(scenario, policy, T, seed=seed, include_trajectory=include_trajectory)
    return metrics.to_dict()


def _sweep_job(scenario, policy, axis, values, T, seed):
    rows = sweep(scenario, axis, values, T, seed=seed, policy_config=policy)
    return {
        "axis": axis,
        "rows": [{"value": r["value"], "metrics": r["metrics"].to_dict()} for r in rows],
    }


def make_handler(store: JobStore, ui_dir: str | None = None):
    ui_root = Path(ui_dir).resolve() if ui_dir else None

    class Handler(BaseHTTPRequestHandler):
        server_version = "gridhealth"

        def log_message(self, *args):  # keep test output quiet
            pass

        def _serve_static(self) -> bool:
            if ui_root is None or self.path.startswith("/api/"):
                return False
            rel = self.path.lstrip("/").split("?", 1)[0] or "index.html"
            target = (ui_root / rel).resolve()
            if not str(target).startswith(str(ui_root)) or not target.is_file():
                return False
            payload = target.read_bytes()
            ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)
            return True

        def _send(self, status: int, body: dict) -> None:
            payload = json.dumps(body, sort_keys=True).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def _read_json(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            if not raw:
                raise ApiError(400, "validation", "empty request body")
            try:
                return json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ApiError(400, "validation", f"invalid JSON: {exc}") from exc

        def do_GET(self):  # noqa: N802 - http.server API
            try:
                if self._serve_static():
                    return
                self._route_get()
            except ApiError as exc:
                self._send(exc.status, exc.body())
            except Exception as exc:  # noqa: BLE001
                self._send(500, {"code": "internal", "message": str(exc), "violations": []})

        def do_POST(self):  # noqa: N802 - http.server API
            try:
                self._route_post()
            except ApiError as exc:
                self._send(exc.status, exc.body())
            except Exception as exc:  # noqa: BLE001
                self._send(500, {"code": "internal", "message": str(exc), "violations": []})

        def _route_get(self):
            if self.path == "/api/health":
                self._send(200, {"status": "ok"})
                return
            if self.path == "/api/scenarios/builtin":
                self._send(200, {
                    "builtin": {
                        name: scenario_to_dict(factory())
                        for name, factory in sorted(BUILTIN_SCENARIOS.items())
                    },
                })
                return
            m = re.fullmatch(r"/api/runs/([0-9a-f]+)", self.path)
            if m:
                record = store.get(m.group(1))
                if record is None:
                    raise ApiError(404, "not_found", f"unknown job {m.group(1)!r}")
                self._send(200, record)
                return
            m = re.fullmatch(r"/api/runs/([0-9a-f]+)/result", self.path)
            if m:
                record = store.get(m.group(1))
                if record is None:
                    raise ApiError(404, "not_found", f"unknown job {m.group(1)!r}")
                if record["status"] != DONE:
                    raise ApiError(409, "not_done", f"job is {record['status']}")
                self._send(200, record["result"])
                return
            raise ApiError(404, "not_found", f"no route for GET {self.path}")

        def _route_post(self):
            if self.path == "/api/scenarios":
                doc = self._read_json()
                try:
                    scenario = scenario_from_dict(doc)
                except ScenarioError as exc:
                    raise ApiError(400, "validation", "invalid scenario", exc.violations) from exc
                self._send(201, {"scenario_id": store.add_scenario(scenario)})
                return
            if self.path == "/api/runs":
                doc = self._read_json()
                scenario, policy, T, seed, include_trajectory = _parse_run_request(doc, store)
                job_id = store.submit(
                    lambda: _run_job(scenario, policy, T, seed, include_trajectory))
                self._send(202, {"job_id": job_id})
                return
            if self.path == "/api/sweeps":
                doc = self._read_json()
                axis = doc.get("axis")
                values = doc.get("values")
                if axis not in ("cap_co2", "cap_hap", "V"):
                    raise ApiError(400, "validation", f"axis must be cap_co2, cap_hap, or V, got {axis!r}")
                if not isinstance(values, list):
                    raise ApiError(400, "validation", "values must be a list of numbers")
                scenario, policy, T, seed, _ = _parse_run_request(
                    {k: v for k, v in doc.items() if k not in ("axis", "values")},
                    store, allowed=SWEEP_FIELDS)
                vals = [float(v) for v in values]
                job_id = store.submit(lambda: _sweep_job(scenario, policy, axis, vals, T, seed))
                self._send(202, {"job_id": job_id})
                return
            raise ApiError(404, "not_found", f"no route for POST {self.path}")

    return Handler


def create_server(port: int = 0, max_workers: int = 4,
                  ui_dir: str | None = None) -> tuple[ThreadingHTTPServer, JobStore]:
    store = JobStore(max_workers=max_workers)
    server = ThreadingHTTPServer(("127.0.0.1", port), make_handler(store, ui_dir=ui_dir))
    return server, store


def serve(port: int, ui_dir: str | None = None) -> None:
    server, store = create_server(port=port, ui_dir=ui_dir)
    print(f"listening on http://127.0.0.1:{server.server_address[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        store.shutdown()
        server.server_close()
