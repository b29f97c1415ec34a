"""Interactive engine: human steps, emitter steps, metrics, modes.

One iteration runs a FI-2Pop update on the human-selected bin, feeds
the selection (with offspring lineage) to the emitter, then lets the
emitter pick bins for n_steps further updates whose lineage extends
the same history record. Random steps do the same from a uniformly
drawn bin but leave the preference history untouched. The iteration
counter T advances once per step of either kind.

Saved sessions restore the container, history, and sampler schedules;
neural-network weights are rebuilt by the next warm-started fit rather
than persisted.
"""

from __future__ import annotations

import io
import csv
import time
from dataclasses import dataclass, field

import numpy as np

from .archive import BinIndex, Container
from .domain import Solution, VoxelDomain
from .evolution import EvolutionConfig, fi2pop_step
from .ple import Emitter, EmitterConfig, preset
from .ple.history import Lineage

METRIC_FIELDS = (
    "iteration",
    "event",
    "selected_bin",
    "emitter_kind",
    "solutions_generated",
    "mean_complexity",
    "occupied_bin_count",
    "emitter_step_seconds",
)


class SessionError(ValueError):
    """Rejected operation; session state is unchanged."""


@dataclass
class StepReport:
    iteration: int
    selected_bin: BinIndex
    emitter_bins: list[BinIndex]
    n_updates: int
    solutions_generated: int
    newly_occupied: list[BinIndex]
    occupied_count: int
    emitter_step_seconds: float
    wall_seconds: float

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "selected_bin": list(self.selected_bin),
            "emitter_bins": [list(b) for b in self.emitter_bins],
            "n_updates": self.n_updates,
            "solutions_generated": self.solutions_generated,
            "newly_occupied": [list(b) for b in self.newly_occupied],
            "occupied_count": self.occupied_count,
            "emitter_step_seconds": self.emitter_step_seconds,
            "wall_seconds": self.wall_seconds,
        }


@dataclass
class StudyReport:
    n_steps: int
    iterations_per_emitter: int
    phases: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n_steps": self.n_steps,
            "iterations_per_emitter": self.iterations_per_emitter,
            "phases": self.phases,
        }


class Session:
    """One user's archive, emitter, and interaction log."""

    def __init__(
        self,
        domain: VoxelDomain | None = None,
        emitter_config: EmitterConfig | None = None,
        n_steps: int = 3,
        seed: int = 0,
        mode: str = "user",
        initial_population: int = 20,
        evolution: EvolutionConfig | None = None,
        container_kwargs: dict | None = None,
    ):
        if mode not in ("user", "developer", "study"):
            raise SessionError(f"unknown mode {mode!r}")
        if n_steps < 0:
            raise SessionError("n_steps must be >= 0")
        self.domain = domain or VoxelDomain()
        self.mode = mode
        self.n_steps = n_steps
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.evolution = evolution or EvolutionConfig()
        self.initial_population = initial_population
        self._container_kwargs = dict(container_kwargs or {})
        self.container = Container(**self._container_kwargs)
        self.emitter = Emitter(
            emitter_config or preset("preference"), self.rng, seed=seed
        )
        self.T = 0
        self.metrics: list[dict] = []
        self.update_count = 0
        self._seed_population()

    # ---- population management ----

    def _seed_population(self) -> None:
        for _ in range(self.initial_population):
            sol = self.domain.random_solution(self.rng)
            self.container.insert_and_subdivide(sol)

    def _reset_population(self) -> None:
        self.container = Container(**self._container_kwargs)
        self.container.iteration = self.T
        self._seed_population()
        self.emitter.reset()

    def reinitialise(self) -> None:
        """Fresh archive and cleared emitter state; metrics keep a
        reset marker so the log stays a complete account."""
        if self.mode == "study":
            raise SessionError("reinitialise is not available in study mode")
        self._reset_population()
        self.metrics.append(self._metric_row(event="reset"))

    def set_emitter(self, config: EmitterConfig | str) -> None:
        if isinstance(config, str):
            config = preset(config)
        self.emitter = Emitter(config, self.rng, seed=self.seed)

    # ---- core update ----

    def _run_update(
        self, bin_index: BinIndex, stamp: int
    ) -> tuple[list[Solution], Lineage, list[BinIndex]]:
        b = self.container.bins[bin_index]
        offspring = fi2pop_step(
            b.feasible,
            b.infeasible,
            self.domain,
            self.rng,
            self.evolution,
            source_bin=bin_index,
            stamp=stamp,
        )
        self.update_count += 1
        n_s = len(offspring)
        lineage: Lineage = {}
        newly: list[BinIndex] = []
        occupied_before = set(self.container.occupied_bins())
        for child in offspring:
            target = self.container.insert_and_subdivide(child)
            lineage.setdefault(target, []).append((bin_index, 1.0 / n_s))
            if target not in occupied_before:
                newly.append(target)
                occupied_before.add(target)
        return offspring, lineage, newly

    def _step(self, bin_index: BinIndex, human: bool) -> StepReport:
        t_start = time.perf_counter()
        zo = self.container.occupied_bins()
        offspring, lineage, newly = self._run_update(bin_index, stamp=self.T)
        if human:
            self.emitter.observe_selection(bin_index, zo, lineage)

        emitter_bins: list[BinIndex] = []
        emit_times: list[float] = []
        all_offspring = list(offspring)
        if not self.emitter.config.is_null:
            for _ in range(self.n_steps):
                e0 = time.perf_counter()
                chosen = self.emitter.emit(self.container)
                emit_times.append(time.perf_counter() - e0)
                emitter_bins.append(chosen)
                off_i, lin_i, new_i = self._run_update(chosen, stamp=self.T)
                all_offspring.extend(off_i)
                newly.extend(b for b in new_i if b not in newly)
                if human:
                    self.emitter.extend_lineage(lin_i)

        self.T += 1
        self.container.iteration = self.T
        report = StepReport(
            iteration=self.T,
            selected_bin=bin_index,
            emitter_bins=emitter_bins,
            n_updates=1 + len(emitter_bins),
            solutions_generated=len(all_offspring),
            newly_occupied=newly,
            occupied_count=len(self.container.occupied_bins()),
            emitter_step_seconds=float(np.mean(emit_times)) if emit_times else 0.0,
            wall_seconds=time.perf_counter() - t_start,
        )
        self.metrics.append(
            self._metric_row(
                event="user_step" if human else "random_step",
                selected_bin=bin_index,
                solutions_generated=report.solutions_generated,
                mean_complexity=float(
                    np.mean([len(s.genotype) for s in all_offspring])
                ),
                emitter_step_seconds=report.emitter_step_seconds,
            )
        )
        return report

    def user_step(self, bin_index: BinIndex | list | tuple) -> StepReport:
        """One human selection plus the automated emitter iterations."""
        bin_index = tuple(bin_index)
        b = self.container.bins.get(bin_index)
        if b is None or b.count == 0:
            raise SessionError(f"bin {bin_index} is not occupied")
        return self._step(bin_index, human=True)

    def random_step(self) -> StepReport:
        """Evolve from a uniformly drawn occupied bin; the preference
        history is not told about the choice (not a human signal)."""
        if self.mode == "study":
            raise SessionError("random_step is not available in study mode")
        zo = self.container.occupied_bins()
        if not zo:
            raise SessionError("no occupied bins")
        chosen = zo[self.rng.choice(len(zo))]
        return self._step(chosen, human=False)

    # ---- metrics ----

    def _metric_row(self, event: str, **kw) -> dict:
        row = {
            "iteration": self.T,
            "event": event,
            "selected_bin": kw.get("selected_bin"),
            "emitter_kind": self.emitter.config.name,
            "solutions_generated": kw.get("solutions_generated", 0),
            "mean_complexity": kw.get("mean_complexity", 0.0),
            "occupied_bin_count": len(self.container.occupied_bins()),
            "emitter_step_seconds": kw.get("emitter_step_seconds", 0.0),
        }
        return row

    def metrics_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=METRIC_FIELDS)
        writer.writeheader()
        for row in self.metrics:
            out = dict(row)
            if out.get("selected_bin") is not None:
                out["selected_bin"] = "/".join(map(str, out["selected_bin"]))
            writer.writerow(out)
        return buf.getvalue()

    # ---- persistence ----

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "seed": self.seed,
            "mode": self.mode,
            "n_steps": self.n_steps,
            "iteration": self.T,
            "emitter_config": self.emitter.config.to_dict(),
            "container": self.container.to_dict(),
            "history": [
                {
                    "selected": list(r.selected),
                    "zo": [list(b) for b in r.zo],
                    "lineage": [
                        {
                            "bin": list(k),
                            "sources": [[list(src), share] for src, share in v],
                        }
                        for k, v in r.lineage.items()
                    ],
                }
                for r in self.emitter.history.records
            ],
            "sampler_state": self._sampler_state(),
            "metrics": self.metrics,
        }

    def _sampler_state(self) -> dict:
        s = self.emitter.sampler
        state: dict = {}
        if hasattr(s, "eps"):
            state["eps"] = s.eps
        if hasattr(s, "tau"):
            state["tau"] = s.tau
        if hasattr(s, "posteriors"):
            state["posteriors"] = [
                [list(k), a, b] for k, (a, b) in s.posteriors.items()
            ]
        return state

    @classmethod
    def from_dict(cls, d: dict, domain: VoxelDomain | None = None) -> "Session":
        s = cls(
            domain=domain,
            emitter_config=EmitterConfig.from_dict(d["emitter_config"]),
            n_steps=d["n_steps"],
            seed=d["seed"],
            mode=d["mode"],
            initial_population=0,
        )
        s.container = Container.from_dict(d["container"], Solution.from_dict)
        s.T = d["iteration"]
        s.metrics = list(d.get("metrics", []))
        for rec in d.get("history", []):
            lineage = {
                tuple(e["bin"]): [(tuple(src), share) for src, share in e["sources"]]
                for e in rec["lineage"]
            }
            s.emitter.history.record_selection(
                tuple(rec["selected"]), [tuple(b) for b in rec["zo"]], lineage
            )
        st = d.get("sampler_state", {})
        if "eps" in st and hasattr(s.emitter.sampler, "eps"):
            s.emitter.sampler.eps = st["eps"]
        if "tau" in st and hasattr(s.emitter.sampler, "tau"):
            s.emitter.sampler.tau = st["tau"]
        if "posteriors" in st and hasattr(s.emitter.sampler, "posteriors"):
            s.emitter.sampler.posteriors = {
                tuple(k): (a, b) for k, a, b in st["posteriors"]
            }
        return s


def study_session(
    session: Session,
    emitter_order: list[str | EmitterConfig],
    iterations_per_emitter: int = 6,
    select_fn=None,
    favourite_fn=None,
) -> StudyReport:
    """Sequence emitters in phases with a fixed n_steps.

    Each phase starts from a fresh population, runs the given number
    of evolve-from-selected iterations (selections provided by
    select_fn(session) -> BinIndex), then records an optional
    favourite pick. Only user_step is available throughout.
    """
    if session.mode != "study":
        raise SessionError("study_session requires a session in study mode")
    if select_fn is None:
        raise SessionError("study_session needs a selection callback")
    report = StudyReport(
        n_steps=session.n_steps, iterations_per_emitter=iterations_per_emitter
    )
    for entry in emitter_order:
        name = entry if isinstance(entry, str) else entry.name
        session.set_emitter(entry)
        session._reset_population()
        session.metrics.append(session._metric_row(event=f"study_phase:{name}"))
        steps = []
        for _ in range(iterations_per_emitter):
            chosen = select_fn(session)
            steps.append(session.user_step(chosen).to_dict())
        favourite = favourite_fn(session) if favourite_fn else None
        report.phases.append(
            {
                "emitter": name,
                "steps": steps,
                "favourite": list(favourite) if favourite else None,
                "stats": session.container.stats(),
            }
        )
    return report
