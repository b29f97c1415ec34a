"""Simulated users and the quantitative emitter benchmark.

A preference profile stands in for a human: it always selects the
occupied bin whose centre is nearest its target BC point (optionally
drifting to a second target mid-run). Alignment and serendipity are
quantitative proxies for the qualitative judgements they replace, and
every report labels them as such.

The `bench` command runs a configuration matrix of emitters over
seeded sessions and writes per-run rows plus an aggregate summary.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .archive import BinIndex, Container
from .ple import EmitterConfig, named_config, preset
from .session import Session

PROXY_NOTE = (
    "alignment/serendipity are simulated-user proxies for human judgement"
)


@dataclass(frozen=True)
class PreferenceProfile:
    """Stationary or drifting target point in BC space.

    The default target sits on a bin centre inside the well-populated
    region of the space, and the default tolerance is about one bin in
    radius, so a uniform-random emitter scores low alignment while a
    learned one has room to score high.
    """

    target_bc: tuple[float, float] = (2.0, 3.25)
    tolerance: float = 0.5
    drift: tuple[tuple[float, float], int] | None = None  # (new target, switch iter)

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")

    def target_at(self, iteration: int) -> np.ndarray:
        if self.drift is not None and iteration >= self.drift[1]:
            return np.asarray(self.drift[0], dtype=float)
        return np.asarray(self.target_bc, dtype=float)


class Emit(NamedTuple):
    iteration: int
    bin_index: BinIndex


def simulate_user(
    profile: PreferenceProfile,
    zo: list[BinIndex],
    container: Container,
    iteration: int = 0,
) -> BinIndex:
    """Nearest-centre policy; ties go to the earliest (row-major) bin."""
    if not zo:
        raise ValueError("no occupied bins to select from")
    target = profile.target_at(iteration)
    best, best_d = None, np.inf
    for b in zo:
        x_lo, x_hi, y_lo, y_hi = container._bounds_for(b)
        centre = np.array([(x_lo + x_hi) / 2, (y_lo + y_hi) / 2])
        d = float(np.linalg.norm(centre - target))
        if d < best_d:
            best, best_d = b, d
    return best


def _centre(container: Container, b: BinIndex) -> np.ndarray:
    x_lo, x_hi, y_lo, y_hi = container._bounds_for(b)
    return np.array([(x_lo + x_hi) / 2, (y_lo + y_hi) / 2])


def alignment(
    emits: list[Emit], profile: PreferenceProfile, container: Container
) -> float | None:
    """Fraction of emits within tolerance of the target of their time."""
    if not emits:
        return None
    hits = sum(
        1
        for e in emits
        if np.linalg.norm(_centre(container, e.bin_index) - profile.target_at(e.iteration))
        <= profile.tolerance
    )
    return hits / len(emits)


def serendipity(emits: list[Emit], selections: list[Emit]) -> float | None:
    """Fraction of emits whose bin the user had never selected yet."""
    if not emits:
        return None
    fresh = 0
    for e in emits:
        seen = {s.bin_index for s in selections if s.iteration <= e.iteration}
        if e.bin_index not in seen:
            fresh += 1
    return fresh / len(emits)


def run_session(
    config: EmitterConfig,
    profile: PreferenceProfile,
    iterations: int = 10,
    seed: int = 0,
    n_steps: int = 3,
) -> dict:
    """One seeded simulated-user session; returns its raw measurements."""
    session = Session(emitter_config=config, n_steps=n_steps, seed=seed)
    emits: list[Emit] = []
    selections: list[Emit] = []
    final_iter_emits: list[Emit] = []
    for it in range(iterations):
        zo = session.container.occupied_bins()
        chosen = simulate_user(profile, zo, session.container, iteration=it)
        selections.append(Emit(it, chosen))
        report = session.user_step(chosen)
        step_emits = [Emit(it, b) for b in report.emitter_bins]
        emits.extend(step_emits)
        if it == iterations - 1:
            final_iter_emits = step_emits

    container = session.container
    stats = container.stats()
    emit_seconds = [
        r["emitter_step_seconds"] for r in session.metrics if r["event"] == "user_step"
    ]
    return {
        "alignment": alignment(emits, profile, container),
        "serendipity": serendipity(emits, selections),
        "final_serendipity": serendipity(final_iter_emits, selections),
        "final_alignment": alignment(final_iter_emits, profile, container),
        "coverage": stats["n_occupied"] / stats["n_bins"],
        "mean_emit_seconds": float(np.mean(emit_seconds)) if emit_seconds else 0.0,
        "solutions_generated": sum(
            r["solutions_generated"] for r in session.metrics
        ),
        "best_fitness": stats["best_fitness"],
    }


def run_benchmark(
    configs: list[tuple[str, EmitterConfig]],
    runs: int = 20,
    iterations: int = 10,
    seed: int = 0,
    profile: PreferenceProfile | None = None,
    n_steps: int = 3,
) -> dict:
    """Aggregate seeded runs per configuration into a report dict."""
    profile = profile or PreferenceProfile()
    seeds = np.random.SeedSequence(seed).generate_state(runs * len(configs))
    report = {
        "note": PROXY_NOTE,
        "runs": runs,
        "iterations": iterations,
        "n_steps": n_steps,
        "profile": {
            "target_bc": list(profile.target_bc),
            "tolerance": profile.tolerance,
            "drift": [list(profile.drift[0]), profile.drift[1]]
            if profile.drift
            else None,
        },
        "configurations": [],
        "rows": [],
    }
    for c_idx, (name, config) in enumerate(configs):
        per_run = []
        t0 = time.perf_counter()
        for r in range(runs):
            run_seed = int(seeds[c_idx * runs + r])
            result = run_session(
                config, profile, iterations=iterations, seed=run_seed, n_steps=n_steps
            )
            result.update({"config": name, "run": r, "seed": run_seed})
            per_run.append(result)
            report["rows"].append(result)
        elapsed = time.perf_counter() - t0

        def agg(key):
            vals = [r[key] for r in per_run if r[key] is not None]
            if not vals:
                return {"mean": None, "std": None}
            return {"mean": float(np.mean(vals)), "std": float(np.std(vals))}

        report["configurations"].append(
            {
                "name": name,
                "emitter": config.to_dict(),
                "alignment": agg("alignment"),
                "serendipity": agg("serendipity"),
                "final_serendipity": agg("final_serendipity"),
                "coverage": agg("coverage"),
                "mean_emit_seconds": agg("mean_emit_seconds"),
                "solutions_generated": agg("solutions_generated"),
                "wall_seconds": elapsed,
            }
        )
    return report


def default_config_matrix() -> list[tuple[str, EmitterConfig]]:
    return [
        ("random", preset("random")),
        ("greedy", preset("greedy")),
        ("preference", preset("preference")),
    ]


def load_config_matrix(path: str) -> tuple[list[tuple[str, EmitterConfig]], dict]:
    """Read a benchmark config file: emitter list plus run settings."""
    with open(path) as fh:
        doc = json.load(fh)
    configs = []
    for entry in doc.get("emitters", []):
        if isinstance(entry, str):
            configs.append((entry, preset(entry)))
        else:
            cfg = EmitterConfig.from_dict(entry)
            configs.append((cfg.name, cfg))
    settings = {k: v for k, v in doc.items() if k != "emitters"}
    return configs, settings


def write_csv(report: dict, path: str) -> None:
    fields = [
        "config",
        "run",
        "seed",
        "alignment",
        "serendipity",
        "final_serendipity",
        "final_alignment",
        "coverage",
        "mean_emit_seconds",
        "solutions_generated",
        "best_fitness",
    ]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in report["rows"]:
            writer.writerow({k: row.get(k) for k in fields})


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Benchmark emitters with a simulated user "
        f"({PROXY_NOTE}).",
    )
    parser.add_argument("--configs", help="JSON config file with an 'emitters' list")
    parser.add_argument("--runs", type=int, default=20)
    parser.add_argument("--iters", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--n-steps", type=int, default=3)
    parser.add_argument("--out", default="report.csv")
    parser.add_argument(
        "--profile",
        default=None,
        help="target as 'x,y,tolerance' (default 2.0,3.25,0.5)",
    )
    parser.add_argument("--summary", default=None, help="optional JSON summary path")
    args = parser.parse_args(argv)

    settings: dict = {}
    if args.configs:
        try:
            configs, settings = load_config_matrix(args.configs)
        except OSError as exc:
            parser.error(f"cannot read --configs file: {exc}")
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            parser.error(f"malformed --configs file {args.configs!r}: {exc}")
    else:
        configs = default_config_matrix()

    if args.profile:
        try:
            x, y, tol = (float(v) for v in args.profile.split(","))
        except ValueError:
            parser.error(
                f"--profile expects three numbers 'x,y,tolerance', got {args.profile!r}"
            )
        profile = PreferenceProfile(target_bc=(x, y), tolerance=tol)
    elif "profile" in settings:
        p = settings["profile"]
        drift = p.get("drift")
        profile = PreferenceProfile(
            target_bc=tuple(p["target_bc"]),
            tolerance=p.get("tolerance", 1.0),
            drift=(tuple(drift[0]), drift[1]) if drift else None,
        )
    else:
        profile = PreferenceProfile()

    report = run_benchmark(
        configs,
        runs=args.runs,
        iterations=args.iters,
        seed=args.seed,
        profile=profile,
        n_steps=args.n_steps,
    )
    write_csv(report, args.out)
    if args.summary:
        with open(args.summary, "w") as fh:
            json.dump(report, fh, indent=2)

    print(f"# {PROXY_NOTE}")
    for c in report["configurations"]:
        al, se = c["alignment"], c["serendipity"]
        fmt = lambda a: "n/a" if a["mean"] is None else f"{a['mean']:.3f}±{a['std']:.3f}"
        print(
            f"{c['name']:>12}: alignment {fmt(al)}  serendipity {fmt(se)}  "
            f"coverage {fmt(c['coverage'])}  emit {fmt(c['mean_emit_seconds'])}s"
        )
    print(f"rows written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
