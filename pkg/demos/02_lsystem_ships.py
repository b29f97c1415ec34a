"""From grammar to graded ship: expansion, voxels, descriptors, fitness.

A ship starts life as a bracketed L-system string. Expanding the axiom
through the rule set yields a genotype; interpreting its atoms as a 3D
turtle stamps typed blocks into a voxel phenotype. Descriptors, the
constraint check, and the density-based fitness all derive from that
phenotype.

Run with: python demos/02_lsystem_ships.py
"""

from __future__ import annotations

import numpy as np

from voxelites.density import default_densities, fitness
from voxelites.domain import VoxelDomain
from voxelites.grammar import MutationConfig, crossover, expand, load_rules, mutate
from voxelites.voxel import build_phenotype, check_constraints, descriptors


def describe(label: str, atoms: str) -> None:
    from voxelites.grammar import Genotype

    g = Genotype(atoms)
    p = build_phenotype(g)
    d = descriptors(p)
    report = check_constraints(p)
    score = fitness(p, default_densities())
    print(f"\n== {label} ==")
    print(f"genotype ({len(atoms)} atoms): {atoms[:72]}{'...' if len(atoms) > 72 else ''}")
    print(f"blocks {len(p.blocks)}  overlaps {report.overlap_count}")
    types = sorted(set(p.blocks.values()))
    print(f"block types: {', '.join(types)}")
    print(
        "descriptors: "
        f"functional {d.functional_ratio:.3f}  filled {d.filled_ratio:.3f}  "
        f"axis ratios {d.major_medium_ratio:.2f} / {d.major_smallest_ratio:.2f}"
    )
    print(f"violation {report.violation:.2f}  fitness {score:.3f}")


def main() -> None:
    rng = np.random.default_rng(11)
    rules = load_rules()
    print(f"rule set: axiom '{rules.axiom}', {len(rules.productions)} productions, "
          f"{rules.iterations} expansion rounds, max length {rules.max_length}")

    g = expand(rules, rng)
    describe("expanded ship", g.atoms)

    child = g
    for _ in range(3):
        child = mutate(child, rules, rng, MutationConfig())
    describe("after three mutation passes", child.atoms)

    other = expand(rules, rng)
    a, b = crossover(g, other, rng)
    describe("crossover offspring (first of pair)", a.atoms)

    # The domain bundles expansion + evaluation into a single call.
    domain = VoxelDomain()
    sol = domain.random_solution(rng)
    kind = "feasible" if sol.violation == 0.0 else "infeasible"
    print(f"\ndomain.random_solution -> {kind} ship, "
          f"bc ({sol.bc[0]:.2f}, {sol.bc[1]:.2f}), fitness {sol.fitness:.3f}")


if __name__ == "__main__":
    main()
