"""Per-bin feature extraction for the regression preference models.

Feature kinds:
  none    - no features; only the counting models can run.
  bc      - the bin's BC-rectangle centre (2 values).
  s_axes  - BC centre plus the representative's two axis ratios (4).
  s_full  - BC centre, the representative's four shape descriptors,
            and its genotype length normalised by max_length (7).

The representative of a bin is its elite, falling back to the least
violating infeasible member. Bins whose representative has an empty
phenotype contribute zero descriptors; every vector is finite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..archive import BinIndex, Container
from ..voxel import descriptors

FEATURE_DIMS = {"bc": 2, "s_axes": 4, "s_full": 7}


@dataclass(frozen=True)
class FeatureSet:
    kind: str  # none | bc | s_axes | s_full

    def __post_init__(self):
        if self.kind not in ("none", *FEATURE_DIMS):
            raise ValueError(f"unknown feature kind {self.kind!r}")

    @property
    def dim(self) -> int:
        if self.kind == "none":
            raise ValueError("feature kind 'none' has no dimension")
        return FEATURE_DIMS[self.kind]

    def extract(self, container: Container, index: BinIndex) -> np.ndarray:
        if self.kind == "none":
            raise ValueError("feature kind 'none' cannot extract")
        b = container.bins[index]
        centre = b.centre()
        if self.kind == "bc":
            return centre

        rep = b.elite
        if rep is None and b.infeasible:
            rep = b.infeasible[0]
        if rep is None or rep.phenotype.is_empty:
            desc = np.zeros(4)
            glen = 0.0 if rep is None else len(rep.genotype) / rep.genotype.max_length
        else:
            d = descriptors(rep.phenotype)
            desc = d.as_array()
            glen = len(rep.genotype) / rep.genotype.max_length

        if self.kind == "s_axes":
            return np.concatenate([centre, desc[2:4]])
        return np.concatenate([centre, desc, [glen]])

    def matrix(self, container: Container, indices: list[BinIndex]) -> np.ndarray:
        """Feature rows for bins; rows for unknown bins are skipped by
        the caller (it filters indices to live bins first)."""
        if not indices:
            return np.zeros((0, self.dim))
        return np.stack([self.extract(container, i) for i in indices])
