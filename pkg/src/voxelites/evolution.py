"""FI-2Pop evolutionary step over one bin's two populations.

Feasible parents compete on fitness, infeasible parents on (low)
violation, via size-2 tournaments. Offspring are bred by crossover plus
mutation, evaluated by the domain, and handed back to the caller, which
inserts them into the container; insertion routes each offspring into
the feasible or infeasible population of its own bin, which is what
migrates solutions between populations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domain import Solution, VoxelDomain
from .grammar import MutationConfig, crossover, mutate


class EmptyBinError(ValueError):
    """Selected bin has no members to breed from."""


@dataclass(frozen=True)
class EvolutionConfig:
    offspring_count: int = 10
    tournament_size: int = 2
    crossover_prob: float = 0.7
    mutation: MutationConfig = field(default_factory=MutationConfig)


def _tournament(
    pop: list[Solution], better, rng: np.random.Generator, size: int
) -> Solution:
    picks = [pop[rng.choice(len(pop))] for _ in range(min(size, len(pop)))]
    best = picks[0]
    for s in picks[1:]:
        if better(s, best):
            best = s
    return best


def fi2pop_step(
    feasible: list[Solution],
    infeasible: list[Solution],
    domain: VoxelDomain,
    rng: np.random.Generator,
    config: EvolutionConfig = EvolutionConfig(),
    source_bin: tuple[int, int, int] | None = None,
    stamp: int = 0,
) -> list[Solution]:
    """Breed and evaluate one batch of offspring from a bin.

    The batch is split evenly between populations when both have
    parents, otherwise drawn wholly from the non-empty one. Every
    offspring is tagged with the source bin and generation stamp for
    the emitters' credit assignment.
    """
    if not feasible and not infeasible:
        raise EmptyBinError("cannot evolve from an empty bin")

    n = config.offspring_count
    if feasible and infeasible:
        quota = [(feasible, n - n // 2), (infeasible, n // 2)]
    elif feasible:
        quota = [(feasible, n)]
    else:
        quota = [(infeasible, n)]

    fitter = lambda a, b: a.fitness > b.fitness
    less_violating = lambda a, b: a.violation < b.violation

    offspring: list[Solution] = []
    for pop, count in quota:
        better = fitter if pop is feasible else less_violating
        for _ in range(count):
            parent = _tournament(pop, better, rng, config.tournament_size)
            child_g = parent.genotype
            if rng.random() < config.crossover_prob and len(pop) > 1:
                mate = _tournament(pop, better, rng, config.tournament_size)
                child_g, _ = crossover(parent.genotype, mate.genotype, rng)
            child_g = mutate(child_g, domain.rules, rng, config.mutation)
            child = domain.evaluate(child_g)
            child.source_bin = source_bin
            child.stamp = stamp
            offspring.append(child)
    return offspring
