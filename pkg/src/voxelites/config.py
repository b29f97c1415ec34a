"""Engine configuration: one JSON document to build a whole session.

Covers the container geometry, density models, constraint policy,
emitter selection, and step counts. Anything omitted falls back to
the package defaults, so `{}` is a valid config.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .archive import DEFAULT_RECT
from .density import DensityModelSet, default_densities
from .domain import VoxelDomain
from .evolution import EvolutionConfig
from .grammar import MutationConfig, load_rules
from .ple import EmitterConfig, preset
from .session import Session
from .voxel import ConstraintWeights


@dataclass
class EngineConfig:
    rect: tuple = DEFAULT_RECT
    base_resolution: tuple[int, int] = (10, 10)
    subdivision_threshold: int = 5
    max_depth: int = 4
    bin_capacity: int = 5
    safe_mode: bool = True
    constraint_weights: ConstraintWeights = field(default_factory=ConstraintWeights)
    densities: DensityModelSet = field(default_factory=default_densities)
    rules_path: str | None = None
    emitter: EmitterConfig = field(default_factory=lambda: preset("preference"))
    n_steps: int = 3
    initial_population: int = 20
    offspring_count: int = 10
    crossover_prob: float = 0.7
    mutation_rate: float = 0.8

    @classmethod
    def from_dict(cls, d: dict) -> "EngineConfig":
        kw: dict = {}
        if "rect" in d:
            kw["rect"] = (tuple(d["rect"][0]), tuple(d["rect"][1]))
        for key in (
            "base_resolution",
            "subdivision_threshold",
            "max_depth",
            "bin_capacity",
            "safe_mode",
            "rules_path",
            "n_steps",
            "initial_population",
            "offspring_count",
            "crossover_prob",
            "mutation_rate",
        ):
            if key in d:
                kw[key] = tuple(d[key]) if key == "base_resolution" else d[key]
        if "constraint_weights" in d:
            kw["constraint_weights"] = ConstraintWeights(**d["constraint_weights"])
        if "densities" in d:
            kw["densities"] = DensityModelSet.from_dict(d["densities"])
        if "emitter" in d:
            e = d["emitter"]
            kw["emitter"] = preset(e) if isinstance(e, str) else EmitterConfig.from_dict(e)
        return cls(**kw)

    @classmethod
    def from_file(cls, path: str) -> "EngineConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def build_domain(self) -> VoxelDomain:
        return VoxelDomain(
            rules=load_rules(self.rules_path),
            densities=self.densities,
            safe_mode=self.safe_mode,
            weights=self.constraint_weights,
        )

    def build_session(self, seed: int = 0, mode: str = "user") -> Session:
        return Session(
            domain=self.build_domain(),
            emitter_config=self.emitter,
            n_steps=self.n_steps,
            seed=seed,
            mode=mode,
            initial_population=self.initial_population,
            evolution=EvolutionConfig(
                offspring_count=self.offspring_count,
                crossover_prob=self.crossover_prob,
                mutation=MutationConfig(rate=self.mutation_rate),
            ),
            container_kwargs={
                "rect": self.rect,
                "base_resolution": self.base_resolution,
                "subdivision_threshold": self.subdivision_threshold,
                "max_depth": self.max_depth,
                "capacity": self.bin_capacity,
            },
        )
