"""Emitters side by side: how selections reshape where offspring go.

An emitter proposes the archive bin the next evolution step should
breed from. The null emitter never proposes anything, the random one
ignores the user, the greedy one replays the last selection, and the
preference emitter trains a model on the selection history so its
proposals drift toward — and around — the user's taste.

This script scripts a user who keeps clicking bins in one corner of
behaviour space and watches each emitter's proposals respond.

Run with: python demos/04_emitters.py
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from voxelites.archive import Container
from voxelites.domain import VoxelDomain
from voxelites.ple.emitter import Emitter, preset


def populated_container(rng: np.random.Generator) -> Container:
    """Seed with random ships; the grammar reaches a couple dozen bins."""
    domain = VoxelDomain()
    container = Container()
    for _ in range(1500):
        container.insert_and_subdivide(domain.random_solution(rng))
    return container


def main() -> None:
    rng = np.random.default_rng(5)
    container = populated_container(rng)
    occupied = container.occupied_bins()
    print(f"archive: {len(occupied)} occupied bins")

    # The scripted user always picks the occupied bin closest to a
    # fixed target in behaviour-characteristic space.
    target = np.array([2.0, 3.0])
    centres = {b: container.bc_centre(b) for b in occupied}
    favourite = min(occupied, key=lambda b: float(np.linalg.norm(centres[b] - target)))
    print(f"user favourite: bin {favourite} at BC "
          f"({centres[favourite][0]:.2f}, {centres[favourite][1]:.2f})")

    emitters = {
        name: Emitter(preset(name), np.random.default_rng(21), seed=21)
        for name in ("random", "greedy", "preference")
    }

    # Twelve rounds of "user clicks favourite, each emitter watches".
    for _ in range(12):
        for emitter in emitters.values():
            emitter.observe_selection(favourite, occupied)

    print("\nproposal distribution over 60 emits after 12 identical selections:")
    for name, emitter in emitters.items():
        proposals = Counter(emitter.emit(container) for _ in range(60))
        distances = [
            float(np.linalg.norm(centres[b] - target))
            for b in proposals.elements()
        ]
        top = ", ".join(f"{b}x{n}" for b, n in proposals.most_common(3))
        print(f"  {name:<10} {len(proposals):>2} distinct bins  "
              f"mean BC distance of proposals {np.mean(distances):.2f}  top: {top}")

    # The preference emitter's logits say the same thing numerically:
    # probability mass concentrates on bins near the clicks.
    logits = emitters["preference"].logits(container)
    ranked = sorted(occupied, key=lambda b: logits[b], reverse=True)
    print("\npreference model's five highest-scored bins (distance to target):")
    for b in ranked[:5]:
        d = float(np.linalg.norm(centres[b] - target))
        print(f"  {b}  score {logits[b]:.3f}  distance {d:.2f}")


if __name__ == "__main__":
    main()
