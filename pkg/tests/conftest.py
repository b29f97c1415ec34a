"""Shared builders for the test suite.

Solutions built here are real (expanded, simulated, evaluated) unless a
test only needs container bookkeeping, in which case `stub_solution`
fabricates one with a chosen BC and fitness.
"""

from __future__ import annotations

import numpy as np
import pytest

from voxelites.archive import Container
from voxelites.density import default_densities
from voxelites.domain import Solution, VoxelDomain, next_solution_id
from voxelites.grammar import Genotype, load_rules
from voxelites.voxel import Phenotype, build_phenotype


@pytest.fixture(scope="session")
def rules():
    return load_rules()


@pytest.fixture(scope="session")
def domain():
    return VoxelDomain(rules=load_rules(), densities=default_densities())


def stub_solution(
    bc: tuple[float, float],
    fitness: float = 1.0,
    feasible: bool = True,
    atoms: str = "B",
) -> Solution:
    genotype = Genotype(atoms=atoms)
    return Solution(
        id=next_solution_id(),
        genotype=genotype,
        phenotype=build_phenotype(genotype),
        bc=np.asarray(bc, dtype=float),
        fitness=fitness,
        violation=0.0 if feasible else 1.0,
    )


def fill_container(
    centres: list[tuple[float, float]],
    fitness: float = 1.0,
    **container_kwargs,
) -> Container:
    """A container with one feasible stub per requested BC point."""
    container = Container(**container_kwargs)
    for bc in centres:
        container.insert(stub_solution(bc, fitness=fitness))
    return container


def random_solutions(domain: VoxelDomain, n: int, seed: int = 0) -> list[Solution]:
    rng = np.random.default_rng(seed)
    return [domain.random_solution(rng) for _ in range(n)]


def empty_phenotype() -> Phenotype:
    return Phenotype(blocks={})
