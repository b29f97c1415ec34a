"""Binding of grammar, voxel interpretation, constraints, and fitness.

A VoxelDomain owns the rule set, density models, and constraint policy,
and turns genotypes into fully evaluated Solutions: phenotype, the two
axis-ratio BCs, fitness, and violation. Solutions that expand to no
blocks still get a BC (the rectangle's lower corner) so the container
can hold them in its infeasible populations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .density import DensityModelSet, default_densities
from .grammar import Genotype, RuleSet, expand, load_rules
from .voxel import (
    ConstraintReport,
    ConstraintWeights,
    Phenotype,
    build_phenotype,
    descriptors,
)

_ids = itertools.count()


def next_solution_id() -> str:
    return f"s{next(_ids):08d}"


@dataclass
class Solution:
    """One evaluated genotype with its archive bookkeeping."""

    id: str
    genotype: Genotype
    phenotype: Phenotype
    bc: np.ndarray
    fitness: float
    violation: float
    report: ConstraintReport | None = None
    source_bin: tuple[int, int, int] | None = None
    stamp: int = 0

    @property
    def feasible(self) -> bool:
        return self.violation == 0.0

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "genotype": self.genotype.to_dict(),
            "bc": [float(self.bc[0]), float(self.bc[1])],
            "fitness": self.fitness,
            "violation": self.violation,
            "source_bin": list(self.source_bin) if self.source_bin else None,
            "stamp": self.stamp,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Solution":
        g = Genotype.from_dict(d["genotype"])
        src = d.get("source_bin")
        return cls(
            id=d["id"],
            genotype=g,
            phenotype=build_phenotype(g),
            bc=np.array(d["bc"], dtype=float),
            fitness=float(d["fitness"]),
            violation=float(d["violation"]),
            source_bin=tuple(src) if src else None,
            stamp=int(d.get("stamp", 0)),
        )


@dataclass
class VoxelDomain:
    """Evaluation pipeline shared by every evolutionary step."""

    rules: RuleSet = field(default_factory=load_rules)
    densities: DensityModelSet = field(default_factory=default_densities)
    safe_mode: bool = True
    weights: ConstraintWeights = field(default_factory=ConstraintWeights)
    bc_floor: tuple[float, float] = (1.0, 1.0)

    def random_genotype(self, rng: np.random.Generator) -> Genotype:
        return expand(self.rules, rng)

    def evaluate(self, g: Genotype) -> Solution:
        from .voxel import check_constraints

        p = build_phenotype(g)
        report = check_constraints(p, safe_mode=self.safe_mode, weights=self.weights)
        if p.is_empty:
            bc = np.array(self.bc_floor, dtype=float)
            fit = 0.0
        else:
            desc = descriptors(p)
            bc = np.array([desc.major_medium_ratio, desc.major_smallest_ratio])
            fit = self.densities.score(desc)
        return Solution(
            id=next_solution_id(),
            genotype=g,
            phenotype=p,
            bc=bc,
            fitness=fit,
            violation=report.violation,
            report=report,
        )

    def random_solution(self, rng: np.random.Generator) -> Solution:
        return self.evaluate(self.random_genotype(rng))
