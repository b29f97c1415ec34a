"""HTTP API walkthrough: a full interactive session over the wire.

The service wraps a session behind JSON endpoints so any client — the
bundled web UI, curl, a notebook — can drive the engine. This script
exercises the whole loop in-process with a test client (no sockets):
create a session, read the archive grid, ask for an evolution step on
a chosen bin, poll the job, fetch the winning ship, export it as a
blueprint, and pull the metrics log.

To serve for real instead: python -m voxelites.service --port 8000

Run with: python demos/06_service_walkthrough.py
"""

from __future__ import annotations

import time
import warnings

# fastapi's testclient import path emits a deprecation notice upstream.
warnings.filterwarnings(
    "ignore", message="Using `httpx` with `starlette.testclient` is deprecated"
)

from fastapi.testclient import TestClient

from voxelites.service import create_app


def wait_for_job(client: TestClient, session_id: str, job_id: str) -> dict:
    while True:
        doc = client.get(f"/sessions/{session_id}/jobs/{job_id}").json()
        if doc["status"] != "running":
            return doc
        time.sleep(0.05)


def main() -> None:
    client = TestClient(create_app())

    # 1. Create a session: the engine seeds an initial population.
    body = {
        "mode": "user",
        "seed": 42,
        "config": {"initial_population": 20, "n_steps": 3, "emitter": "preference"},
    }
    doc = client.post("/sessions", json=body).json()
    session_id, grid = doc["session_id"], doc["grid"]
    occupied = [c for c in grid["cells"] if c["occupied"]]
    print(f"POST /sessions -> session {session_id}")
    print(f"  grid: {len(grid['cells'])} cells, {len(occupied)} occupied, "
          f"emitter '{grid['emitter']}', iteration {grid['iteration']}")

    # 2. The user clicks a bin: kick off an evolution job against it.
    choice = max(
        (c for c in occupied if c["elite"] is not None),
        key=lambda c: c["elite"]["fitness"],
    )
    print(f"\nuser selects bin {choice['bin']} "
          f"(elite fitness {choice['elite']['fitness']:.3f})")
    response = client.post(
        f"/sessions/{session_id}/evolve",
        json={"bin": [int(v) for v in choice["bin"].split("-")]},
    )
    job_id = response.json()["job_id"]
    print(f"POST /evolve -> job {job_id} (runs in the background)")

    # 3. Poll until the step finishes, then re-read the grid.
    job = wait_for_job(client, session_id, job_id)
    report = job["report"]
    print(f"GET /jobs/{job_id} -> {job['status']}: "
          f"{report['n_updates']} population updates, "
          f"{report['solutions_generated']} offspring, "
          f"{len(report['newly_occupied'])} newly occupied bins, "
          f"{report['wall_seconds']:.2f}s")
    grid = client.get(f"/sessions/{session_id}/grid").json()
    print(f"GET /grid -> iteration {grid['iteration']}, "
          f"coverage {grid['coverage']:.3f}")

    # 4. Fetch the best ship from the refreshed grid. (Always re-read
    # after evolving: a crowded bin may have subdivided, retiring its
    # old address in favour of four children.)
    best = max(
        (c for c in grid["cells"] if c["elite"] is not None),
        key=lambda c: c["elite"]["fitness"],
    )
    hulled = client.get(
        f"/sessions/{session_id}/solutions/{best['bin']}"
    ).json()["solution"]
    raw = client.get(
        f"/sessions/{session_id}/solutions/{best['bin']}",
        params={"interior": "true"},
    ).json()["solution"]
    print(f"\nGET /solutions/{best['bin']} -> ship {hulled['id']}: "
          f"{hulled['block_count']} blocks hulled, {raw['block_count']} raw, "
          f"fitness {hulled['fitness']:.3f}")

    # 5. Export a versioned blueprint for the builder.
    blueprint = client.post(
        f"/sessions/{session_id}/export/{best['bin']}"
    ).json()
    meta = blueprint["metadata"]
    print(f"POST /export -> schema v{blueprint['schema_version']}, "
          f"{len(blueprint['blocks'])} blocks, "
          f"fitness delta after hull {meta['fitness_delta_after_hull']:.3f}")

    # 6. The metrics log records every step for offline analysis.
    metrics = client.get(f"/sessions/{session_id}/metrics").json()
    last = metrics["rows"][-1]
    print(f"\nGET /metrics -> {len(metrics['rows'])} row(s); last event "
          f"'{last['event']}' at iteration {last['iteration']} "
          f"({last['solutions_generated']} solutions)")


if __name__ == "__main__":
    main()
