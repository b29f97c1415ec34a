"""Tests for the HTTP facade."""

from __future__ import annotations

import csv
import io
import time

from fastapi.testclient import TestClient

from voxelites.service import SCHEMA_VERSION, create_app

FAST_ENGINE = {
    "initial_population": 8,
    "n_steps": 1,
    "offspring_count": 6,
    "emitter": "random",
}


def _client() -> TestClient:
    return TestClient(create_app())


def _create(client: TestClient, mode: str = "user", seed: int = 0, **engine):
    body = {"mode": mode, "seed": seed, "config": {**FAST_ENGINE, **engine}}
    response = client.post("/sessions", json=body)
    assert response.status_code == 200
    doc = response.json()
    return doc["session_id"], doc["grid"]


def _occupied_bin(grid: dict) -> str:
    return next(c["bin"] for c in grid["cells"] if c["occupied"])


def _unoccupied_bin(grid: dict) -> str:
    return next(c["bin"] for c in grid["cells"] if not c["occupied"])


def _wait_job(client: TestClient, session_id: str, job_id: str, timeout=30.0) -> dict:
    deadline = time.time() + timeout
    while time.time() < deadline:
        doc = client.get(f"/sessions/{session_id}/jobs/{job_id}").json()
        if doc["status"] != "running":
            return doc
        time.sleep(0.02)
    raise AssertionError("job did not finish in time")


def _evolve(client: TestClient, session_id: str, bin_addr: str) -> dict:
    response = client.post(
        f"/sessions/{session_id}/evolve",
        json={"bin": [int(v) for v in bin_addr.split("-")]},
    )
    assert response.status_code == 200
    return _wait_job(client, session_id, response.json()["job_id"])


def test_create_session_returns_the_initial_grid():
    client = _client()
    session_id, grid = _create(client)
    assert session_id
    assert grid["schema_version"] == SCHEMA_VERSION
    assert grid["iteration"] == 0
    assert grid["mode"] == "user"
    assert grid["emitter"] == "random"
    assert len(grid["cells"]) == 100
    assert sum(c["n_feasible"] + c["n_infeasible"] for c in grid["cells"]) == 8


def test_invalid_session_body_is_rejected():
    client = _client()
    response = client.post("/sessions", json={"mode": "spectator"})
    assert response.status_code == 400
    response = client.post("/sessions", json={"emitter": "nope"})
    assert response.status_code == 400


def test_grid_reads_are_cached_and_identical():
    client = _client()
    session_id, _ = _create(client)
    first = client.get(f"/sessions/{session_id}/grid")
    second = client.get(f"/sessions/{session_id}/grid")
    assert first.status_code == 200
    assert first.content == second.content


def test_grid_cells_describe_their_occupants():
    client = _client()
    _, grid = _create(client)
    cell = next(c for c in grid["cells"] if c["occupied"] and c["elite"])
    assert len(cell["bounds"]) == 4
    assert cell["depth"] == cell["index"][2]
    assert cell["elite"]["fitness"] >= 0
    assert cell["mean_fitness"] is not None


def test_unknown_session_is_404():
    client = _client()
    assert client.get("/sessions/nope/grid").status_code == 404
    assert client.post("/sessions/nope/evolve", json={"random": True}).status_code == 404


def test_evolve_job_runs_to_completion():
    client = _client()
    session_id, grid = _create(client)
    job = _evolve(client, session_id, _occupied_bin(grid))
    assert job["status"] == "done"
    assert job["error"] is None
    report = job["report"]
    assert report["iteration"] == 1
    assert report["n_updates"] == 2
    after = client.get(f"/sessions/{session_id}/grid").json()
    assert after["iteration"] == 1


def test_evolve_requires_exactly_one_target():
    client = _client()
    session_id, grid = _create(client)
    addr = [int(v) for v in _occupied_bin(grid).split("-")]
    both = client.post(
        f"/sessions/{session_id}/evolve", json={"bin": addr, "random": True}
    )
    neither = client.post(f"/sessions/{session_id}/evolve", json={})
    assert both.status_code == 400
    assert neither.status_code == 400


def test_evolve_on_an_unoccupied_bin_fails_in_the_job():
    client = _client()
    session_id, grid = _create(client)
    job = _evolve(client, session_id, _unoccupied_bin(grid))
    assert job["status"] == "error"
    assert "not occupied" in job["error"]


def test_random_evolve_does_not_need_a_bin():
    client = _client()
    session_id, _ = _create(client)
    response = client.post(f"/sessions/{session_id}/evolve", json={"random": True})
    job = _wait_job(client, session_id, response.json()["job_id"])
    assert job["status"] == "done"


def test_concurrent_mutations_get_409_busy():
    client = _client()
    session_id, grid = _create(client)
    runtime = client.app.state.sessions[session_id]
    assert runtime.lock.acquire(blocking=False)
    try:
        addr = [int(v) for v in _occupied_bin(grid).split("-")]
        evolve = client.post(f"/sessions/{session_id}/evolve", json={"bin": addr})
        export = client.post(
            f"/sessions/{session_id}/export/{_occupied_bin(grid)}"
        )
        reinit = client.post(f"/sessions/{session_id}/reinitialise")
        assert evolve.status_code == 409
        assert export.status_code == 409
        assert reinit.status_code == 409
    finally:
        runtime.lock.release()


def test_unknown_job_is_404():
    client = _client()
    session_id, _ = _create(client)
    assert client.get(f"/sessions/{session_id}/jobs/nope").status_code == 404


def test_solution_view_defaults_to_the_hulled_shape():
    client = _client()
    session_id, grid = _create(client)
    addr = _occupied_bin(grid)
    hulled = client.get(f"/sessions/{session_id}/solutions/{addr}").json()
    interior = client.get(
        f"/sessions/{session_id}/solutions/{addr}", params={"interior": "true"}
    ).json()
    assert hulled["schema_version"] == SCHEMA_VERSION
    assert not hulled["interior"]
    assert interior["interior"]
    assert hulled["solution"]["block_count"] >= interior["solution"]["block_count"]
    assert hulled["solution"]["id"] == interior["solution"]["id"]
    assert {b["type"] for b in interior["solution"]["blocks"]} <= {
        b["type"] for b in hulled["solution"]["blocks"]
    } | {"body"}


def test_solution_blocks_carry_voxel_fields():
    client = _client()
    session_id, grid = _create(client)
    addr = _occupied_bin(grid)
    doc = client.get(
        f"/sessions/{session_id}/solutions/{addr}", params={"interior": "true"}
    ).json()
    block = doc["solution"]["blocks"][0]
    assert set(block) == {"x", "y", "z", "type", "functional", "orientation"}
    assert doc["solution"]["descriptors"] is not None


def test_solution_view_rejects_bad_addresses():
    client = _client()
    session_id, grid = _create(client)
    assert (
        client.get(f"/sessions/{session_id}/solutions/zero").status_code == 400
    )
    missing = _unoccupied_bin(grid)
    assert (
        client.get(f"/sessions/{session_id}/solutions/{missing}").status_code == 404
    )


def test_export_wraps_the_blueprint_with_hull_accounting():
    client = _client()
    session_id, grid = _create(client)
    addr = _occupied_bin(grid)
    response = client.post(f"/sessions/{session_id}/export/{addr}")
    assert response.status_code == 200
    doc = response.json()
    assert doc["schema_version"] == SCHEMA_VERSION
    assert {"blocks", "metadata"} <= set(doc)
    assert doc["metadata"]["bin"] == addr
    assert doc["metadata"]["fitness_delta_after_hull"] >= 0
    assert doc["metadata"]["fitness_after_hull"] is not None
    assert len(doc["blocks"]) > 0


def test_export_of_an_unoccupied_bin_is_404():
    client = _client()
    session_id, grid = _create(client)
    addr = _unoccupied_bin(grid)
    assert client.post(f"/sessions/{session_id}/export/{addr}").status_code == 404


def test_metrics_are_served_as_json_and_csv():
    client = _client()
    session_id, grid = _create(client)
    _evolve(client, session_id, _occupied_bin(grid))
    json_doc = client.get(f"/sessions/{session_id}/metrics").json()
    csv_text = client.get(
        f"/sessions/{session_id}/metrics", params={"format": "csv"}
    ).text
    rows = list(csv.DictReader(io.StringIO(csv_text)))
    assert len(json_doc["rows"]) == len(rows) == 1
    assert rows[0]["event"] == "user_step"
    assert int(rows[0]["iteration"]) == json_doc["rows"][0]["iteration"]


def test_config_patch_requires_developer_mode():
    client = _client()
    session_id, _ = _create(client, mode="user")
    response = client.patch(
        f"/sessions/{session_id}/config", json={"n_steps": 2}
    )
    assert response.status_code == 403


def test_developer_patch_updates_the_live_session():
    client = _client()
    session_id, _ = _create(client, mode="developer")
    response = client.patch(
        f"/sessions/{session_id}/config",
        json={"n_steps": 0, "emitter": "greedy", "safe_mode": False},
    )
    assert response.status_code == 200
    doc = response.json()
    assert doc["n_steps"] == 0
    assert doc["emitter"] == "greedy"
    assert doc["safe_mode"] is False
    assert client.get(f"/sessions/{session_id}/grid").json()["emitter"] == "greedy"


def test_developer_patch_validates_values():
    client = _client()
    session_id, _ = _create(client, mode="developer")
    assert (
        client.patch(
            f"/sessions/{session_id}/config", json={"n_steps": -1}
        ).status_code
        == 400
    )
    assert (
        client.patch(
            f"/sessions/{session_id}/config", json={"emitter": "nope"}
        ).status_code
        == 400
    )


def test_reinitialise_rebuilds_and_returns_the_grid():
    client = _client()
    session_id, grid = _create(client)
    _evolve(client, session_id, _occupied_bin(grid))
    response = client.post(f"/sessions/{session_id}/reinitialise")
    assert response.status_code == 200
    fresh = response.json()["grid"]
    assert fresh["iteration"] == 1
    assert sum(c["n_feasible"] + c["n_infeasible"] for c in fresh["cells"]) == 8


def test_study_mode_blocks_free_exploration_over_http():
    client = _client()
    session_id, _ = _create(client, mode="study")
    response = client.post(f"/sessions/{session_id}/evolve", json={"random": True})
    job = _wait_job(client, session_id, response.json()["job_id"])
    assert job["status"] == "error"
    assert "study" in job["error"]
    assert client.post(f"/sessions/{session_id}/reinitialise").status_code == 400
