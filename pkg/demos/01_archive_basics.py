"""Archive walkthrough: inserts, ranking, and adaptive subdivision.

The archive tiles behaviour space ([1,5] major/medium x [1,10]
major/smallest axis ratios) with a 10x10 grid of bins. Each bin keeps
a feasible population ranked by fitness and an infeasible population
ranked by constraint violation. When a bin collects enough solutions
it splits into four children, down to a maximum depth of 4.

Run with: python demos/01_archive_basics.py
"""

from __future__ import annotations

import numpy as np

from voxelites.archive import Container
from voxelites.domain import VoxelDomain


def show(title: str, container: Container) -> None:
    stats = container.stats()
    print(f"\n== {title} ==")
    print(
        f"bins {stats['n_bins']}  occupied {stats['n_occupied']}  "
        f"elites {stats['n_elites']}  deepest {stats['max_depth_used']}"
    )
    if stats["best_fitness"] is not None:
        print(f"best fitness {stats['best_fitness']:.3f}")


def main() -> None:
    rng = np.random.default_rng(7)
    domain = VoxelDomain()
    container = Container()
    show("empty archive", container)

    # Twenty random ships land somewhere on the base grid.
    for _ in range(20):
        container.insert_and_subdivide(domain.random_solution(rng))
    show("after 20 random solutions", container)

    # A BC point always resolves to exactly one leaf bin.
    point = (2.3, 4.1)
    idx = container.lookup(point)
    print(f"\nlookup{point} -> bin {idx} with bounds {container.bins[idx].bounds}")

    # Hammering one region forces subdivision: the crowded bin splits
    # and its members migrate to the four children.
    target = container.bc_centre(idx)
    print(f"\ninserting 300 solutions near BC ({target[0]:.2f}, {target[1]:.2f}) ...")
    for _ in range(300):
        sol = domain.random_solution(rng)
        sol.bc = np.clip(
            target + rng.normal(0.0, 0.15, size=2), [1.0, 1.0], [4.999, 9.999]
        )
        container.insert_and_subdivide(sol)
    show("after concentrating inserts", container)

    leaf = container.lookup(point)
    print(f"\nthe same point now resolves deeper: {idx} -> {leaf}")
    bin_ = container.bins[leaf]
    print(
        f"leaf holds {len(bin_.feasible)} feasible / {len(bin_.infeasible)} infeasible"
    )
    if bin_.elite is not None:
        print(f"leaf elite fitness {bin_.elite.fitness:.3f}")

    # Occupied bins stream in row-major order, coarse cells interleaved
    # with the subdivided ones.
    occ = container.occupied_bins()
    print(f"\nfirst five occupied bins (row-major): {occ[:5]}")


if __name__ == "__main__":
    main()
