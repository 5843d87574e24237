"""Driving the HTTP API end to end.

Boots the service on an ephemeral port, submits a run and a sweep as
asynchronous jobs, polls them to completion, and shows that the API returns
exactly what the in-process engine computes. This is the integration the
browser dashboard builds on.

Run:  python demos/06_service_roundtrip.py
"""

import json
import threading
import time
import urllib.request

from gridhealth import PolicyConfig, figure1_scenario, run_episode
from gridhealth.service import create_server

server, store = create_server(port=0)
port = server.server_address[1]
threading.Thread(target=server.serve_forever, daemon=True).start()
print(f"service listening on 127.0.0.1:{port}")


def call(method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(f"http://127.0.0.1:{port}{path}", data=data, method=method,
                                 headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(req, timeout=30) as resp:
        return json.loads(resp.read())


def wait(job_id):
    while True:
        record = call("GET", f"/api/runs/{job_id}")
        if record["status"] in ("DONE", "FAILED"):
            return record
        time.sleep(0.05)


builtins = call("GET", "/api/scenarios/builtin")["builtin"]
print(f"built-in scenarios: {sorted(builtins)}")

request_body = {"scenario": "figure1", "policy_config": {"kind": "lyapunov", "V": 10.0},
                "T": 500, "seed": 7}
job = call("POST", "/api/runs", request_body)
print(f"submitted run job {job['job_id'][:8]}..., polling")
record = wait(job["job_id"])
api_metrics = record["result"]
print(f"DONE: {api_metrics['avg_hospitalizations']:.2f} hospitalizations/slot, "
      f"CO2 {api_metrics['avg_co2']:.2f}")

direct = run_episode(figure1_scenario(), PolicyConfig(kind="lyapunov", V=10.0), 500, seed=7)
assert api_metrics == json.loads(json.dumps(direct.to_dict()))
print("API result is identical to the in-process engine result")

sweep_job = call("POST", "/api/sweeps", {**request_body, "axis": "V", "values": [1, 10, 100]})
rows = wait(sweep_job["job_id"])["result"]["rows"]
print("\nV sweep through the API:")
for row in rows:
    print(f"  V={row['value']:>5.0f}: {row['metrics']['avg_hospitalizations']:.2f} "
          f"hospitalizations/slot")

server.shutdown()
store.shutdown()
server.server_close()
print("\nserver stopped")
