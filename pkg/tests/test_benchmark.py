"""Tests for the simulated user and the emitter benchmark."""

from __future__ import annotations

import csv
import json

import numpy as np
import pytest

from conftest import fill_container
from voxelites.benchmark import (
    PROXY_NOTE,
    Emit,
    PreferenceProfile,
    alignment,
    main,
    run_benchmark,
    run_session,
    serendipity,
    simulate_user,
    write_csv,
)
from voxelites.ple import preset


def _profile(**kw) -> PreferenceProfile:
    return PreferenceProfile(**kw)


def _nearest_oracle(profile, zo, container, iteration=0):
    """Brute-force nearest centre; ties go to the earliest bin in zo."""
    target = profile.target_at(iteration)
    dists = [float(np.linalg.norm(container.bc_centre(b) - target)) for b in zo]
    return zo[min(range(len(zo)), key=lambda i: (dists[i], i))]


def test_profile_requires_positive_tolerance():
    with pytest.raises(ValueError):
        PreferenceProfile(tolerance=0.0)


def test_target_drifts_at_the_switch_iteration():
    profile = _profile(target_bc=(1.5, 2.0), drift=((4.0, 8.0), 5))
    assert tuple(profile.target_at(4)) == (1.5, 2.0)
    assert tuple(profile.target_at(5)) == (4.0, 8.0)
    assert tuple(profile.target_at(9)) == (4.0, 8.0)


def test_stationary_profile_ignores_the_iteration():
    profile = _profile(target_bc=(2.5, 3.5))
    assert tuple(profile.target_at(0)) == tuple(profile.target_at(99))


def test_simulated_user_picks_the_nearest_bin_centre():
    container = fill_container([(1.2, 1.45), (2.6, 5.05), (4.6, 9.55)])
    zo = container.occupied_bins()
    chosen = simulate_user(_profile(target_bc=(2.5, 5.0)), zo, container)
    assert chosen == container.lookup((2.6, 5.05))


def test_simulated_user_matches_the_brute_force_oracle():
    rng = np.random.default_rng(11)
    centres = [(1.0 + 4.0 * rng.random(), 1.0 + 9.0 * rng.random()) for _ in range(30)]
    container = fill_container(centres)
    zo = container.occupied_bins()
    for trial in range(20):
        target = (1.0 + 4.0 * rng.random(), 1.0 + 9.0 * rng.random())
        profile = _profile(target_bc=target)
        assert simulate_user(profile, zo, container) == _nearest_oracle(
            profile, zo, container
        )


def test_simulated_user_breaks_exact_ties_to_the_earlier_bin():
    # A unit grid keeps the centres and distances exact in floats.
    container = fill_container(
        [(0.5, 0.5), (1.5, 0.5)],
        rect=((0.0, 4.0), (0.0, 4.0)),
        base_resolution=(4, 4),
    )
    zo = container.occupied_bins()
    chosen = simulate_user(_profile(target_bc=(1.0, 0.5)), zo, container)
    assert chosen == zo[0]


def test_simulated_user_requires_occupied_bins():
    with pytest.raises(ValueError):
        simulate_user(_profile(), [], fill_container([]))


def test_simulated_user_follows_the_drifting_target():
    container = fill_container([(1.2, 1.45), (4.6, 9.55)])
    zo = container.occupied_bins()
    profile = _profile(target_bc=(1.2, 1.45), drift=((4.6, 9.55), 3))
    assert simulate_user(profile, zo, container, iteration=0) == container.lookup(
        (1.2, 1.45)
    )
    assert simulate_user(profile, zo, container, iteration=3) == container.lookup(
        (4.6, 9.55)
    )


def test_alignment_is_the_within_tolerance_fraction():
    container = fill_container([(1.2, 1.45), (4.6, 9.55)])
    near = container.lookup((1.2, 1.45))
    far = container.lookup((4.6, 9.55))
    profile = _profile(target_bc=(1.2, 1.45), tolerance=0.5)
    emits = [Emit(0, near), Emit(1, far), Emit(2, near), Emit(3, near)]
    assert alignment(emits, profile, container) == 0.75


def test_alignment_of_no_emits_is_undefined():
    assert alignment([], _profile(), fill_container([])) is None


def test_alignment_judges_each_emit_against_its_own_target():
    container = fill_container([(1.2, 1.45), (4.6, 9.55)])
    a = container.lookup((1.2, 1.45))
    b = container.lookup((4.6, 9.55))
    profile = _profile(target_bc=(1.2, 1.45), tolerance=0.5, drift=((4.6, 9.55), 2))
    emits = [Emit(0, a), Emit(2, b)]
    assert alignment(emits, profile, container) == 1.0


def test_serendipity_counts_bins_the_user_never_chose():
    a, b, c = (0, 0, 0), (1, 0, 0), (2, 0, 0)
    selections = [Emit(0, a), Emit(2, b)]
    emits = [Emit(0, a), Emit(1, b), Emit(1, c), Emit(3, b)]
    # a was selected at 0; b only counts as fresh before iteration 2.
    assert serendipity(emits, selections) == 0.5


def test_serendipity_of_no_emits_is_undefined():
    assert serendipity([], [Emit(0, (0, 0, 0))]) is None


def test_run_session_reports_every_proxy_metric(domain):
    result = run_session(preset("random"), _profile(), iterations=2, seed=1, n_steps=1)
    assert set(result) == {
        "alignment",
        "serendipity",
        "final_serendipity",
        "final_alignment",
        "coverage",
        "mean_emit_seconds",
        "solutions_generated",
        "best_fitness",
    }
    assert 0.0 <= result["alignment"] <= 1.0
    assert result["solutions_generated"] > 0


def test_run_session_is_deterministic_per_seed():
    kw = dict(iterations=2, seed=7, n_steps=1)
    a = run_session(preset("greedy"), _profile(), **kw)
    b = run_session(preset("greedy"), _profile(), **kw)
    for key in ("alignment", "serendipity", "coverage", "solutions_generated"):
        assert a[key] == b[key]


def test_run_benchmark_emits_one_row_per_config_and_run():
    report = run_benchmark(
        [("random", preset("random")), ("greedy", preset("greedy"))],
        runs=2,
        iterations=2,
        seed=3,
        n_steps=1,
    )
    assert report["note"] == PROXY_NOTE
    assert len(report["rows"]) == 4
    assert [c["name"] for c in report["configurations"]] == ["random", "greedy"]
    by_config = {r["config"] for r in report["rows"]}
    assert by_config == {"random", "greedy"}
    for c in report["configurations"]:
        assert set(c["alignment"]) == {"mean", "std"}


def test_benchmark_rows_round_trip_through_csv(tmp_path):
    report = run_benchmark(
        [("random", preset("random"))], runs=2, iterations=2, seed=0, n_steps=1
    )
    out = tmp_path / "rows.csv"
    write_csv(report, str(out))
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 2
    assert rows[0]["config"] == "random"
    assert float(rows[0]["coverage"]) == report["rows"][0]["coverage"]


def test_bench_command_writes_report_and_labels_proxies(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    summary = tmp_path / "bench.json"
    code = main(
        [
            "--runs", "1",
            "--iters", "2",
            "--n-steps", "1",
            "--seed", "0",
            "--profile", "2.0,3.25,0.5",
            "--out", str(out),
            "--summary", str(summary),
        ]
    )
    assert code == 0
    printed = capsys.readouterr().out
    assert PROXY_NOTE in printed
    assert out.exists()
    doc = json.loads(summary.read_text())
    assert doc["profile"] == {"target_bc": [2.0, 3.25], "tolerance": 0.5, "drift": None}


def test_bench_command_reads_a_config_matrix(tmp_path):
    config = {
        "emitters": ["random", preset("greedy").to_dict()],
        "profile": {"target_bc": [1.5, 2.0], "tolerance": 0.75},
    }
    path = tmp_path / "matrix.json"
    path.write_text(json.dumps(config))
    out = tmp_path / "rows.csv"
    summary = tmp_path / "summary.json"
    code = main(
        [
            "--configs", str(path),
            "--runs", "1",
            "--iters", "2",
            "--n-steps", "0",
            "--out", str(out),
            "--summary", str(summary),
        ]
    )
    assert code == 0
    doc = json.loads(summary.read_text())
    assert [c["name"] for c in doc["configurations"]] == ["random", "greedy"]
    assert doc["profile"]["target_bc"] == [1.5, 2.0]
