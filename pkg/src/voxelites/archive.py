"""Adaptive MAP-Elites container over the two axis-ratio descriptors.

The container tiles a fixed BC rectangle with a base grid whose cells
subdivide into four equal quadrants once they hold enough solutions, up
to a fixed depth. Each bin keeps separate capped feasible / infeasible
populations; the elite is the best feasible member. Out-of-range BCs
are clamped to the boundary bins, so the archive never grows past its
rectangle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

BinIndex = tuple[int, int, int]  # (i, j, depth)

DEFAULT_RECT = ((1.0, 5.0), (1.0, 10.0))


class DomainError(ValueError):
    """Raised for solutions the container must reject (non-finite BC)."""


class SolutionLike(Protocol):
    id: str
    bc: np.ndarray
    fitness: float
    violation: float

    @property
    def feasible(self) -> bool: ...


@dataclass
class Bin:
    """One grid cell: bounds, both populations, creation age."""

    index: BinIndex
    bounds: tuple[float, float, float, float]  # x_lo, x_hi, y_lo, y_hi
    feasible: list = field(default_factory=list)
    infeasible: list = field(default_factory=list)
    creation_iteration: int = 0

    @property
    def depth(self) -> int:
        return self.index[2]

    @property
    def elite(self):
        return self.feasible[0] if self.feasible else None

    @property
    def count(self) -> int:
        return len(self.feasible) + len(self.infeasible)

    def members(self) -> list:
        return self.feasible + self.infeasible

    def add(self, sol, capacity: int) -> None:
        """Insert keeping populations ranked and capped.

        Appending before the stable sort means an incumbent keeps its
        place on ties, so elites change only for strictly fitter
        solutions.
        """
        if sol.feasible:
            self.feasible.append(sol)
            self.feasible.sort(key=lambda s: -s.fitness)
            del self.feasible[capacity:]
        else:
            self.infeasible.append(sol)
            self.infeasible.sort(key=lambda s: s.violation)
            del self.infeasible[capacity:]

    def centre(self) -> np.ndarray:
        x_lo, x_hi, y_lo, y_hi = self.bounds
        return np.array([(x_lo + x_hi) / 2.0, (y_lo + y_hi) / 2.0])


class Container:
    """The adaptive grid plus its insertion and subdivision rules."""

    def __init__(
        self,
        rect: tuple[tuple[float, float], tuple[float, float]] = DEFAULT_RECT,
        base_resolution: tuple[int, int] = (10, 10),
        subdivision_threshold: int = 5,
        max_depth: int = 4,
        capacity: int = 5,
    ):
        (self.x_lo, self.x_hi), (self.y_lo, self.y_hi) = rect
        if not (self.x_hi > self.x_lo and self.y_hi > self.y_lo):
            raise ValueError("degenerate BC rectangle")
        self.rect = rect
        self.base_resolution = base_resolution
        self.subdivision_threshold = subdivision_threshold
        self.max_depth = max_depth
        self.capacity = capacity
        self.iteration = 0
        self.bins: dict[BinIndex, Bin] = {}
        nx, ny = base_resolution
        for i in range(nx):
            for j in range(ny):
                idx = (i, j, 0)
                self.bins[idx] = Bin(index=idx, bounds=self._bounds_for(idx))

    # ---- geometry ----

    def _cell_size(self, depth: int) -> tuple[float, float]:
        nx, ny = self.base_resolution
        return (
            (self.x_hi - self.x_lo) / (nx * 2**depth),
            (self.y_hi - self.y_lo) / (ny * 2**depth),
        )

    def _bounds_for(self, index: BinIndex) -> tuple[float, float, float, float]:
        i, j, depth = index
        w, h = self._cell_size(depth)
        return (
            self.x_lo + i * w,
            self.x_lo + (i + 1) * w,
            self.y_lo + j * h,
            self.y_lo + (j + 1) * h,
        )

    def clamp_bc(self, bc) -> np.ndarray:
        bc = np.asarray(bc, dtype=float)
        eps = 1e-12
        return np.array(
            [
                min(max(bc[0], self.x_lo), self.x_hi - eps),
                min(max(bc[1], self.y_lo), self.y_hi - eps),
            ]
        )

    def lookup(self, bc) -> BinIndex:
        """Index of the unique bin whose half-open bounds cover bc."""
        bc = np.asarray(bc, dtype=float)
        if not np.all(np.isfinite(bc)):
            raise DomainError(f"non-finite BC {bc}")
        x, y = self.clamp_bc(bc)
        nx, ny = self.base_resolution
        for depth in range(self.max_depth + 1):
            w, h = self._cell_size(depth)
            i = min(int((x - self.x_lo) / w), nx * 2**depth - 1)
            j = min(int((y - self.y_lo) / h), ny * 2**depth - 1)
            idx = (i, j, depth)
            if idx in self.bins:
                return idx
        raise RuntimeError(f"tiling hole at BC {bc}")  # unreachable by invariant

    # ---- mutation ----

    def insert(self, sol) -> BinIndex:
        idx = self.lookup(sol.bc)
        self.bins[idx].add(sol, self.capacity)
        return idx

    def maybe_subdivide(self, index: BinIndex) -> list[BinIndex]:
        """Split one over-threshold bin into its four quadrants."""
        b = self.bins.get(index)
        if b is None or b.depth >= self.max_depth:
            return []
        if b.count < self.subdivision_threshold:
            return []
        i, j, depth = index
        del self.bins[index]
        children = []
        for ci in (2 * i, 2 * i + 1):
            for cj in (2 * j, 2 * j + 1):
                cidx = (ci, cj, depth + 1)
                self.bins[cidx] = Bin(
                    index=cidx,
                    bounds=self._bounds_for(cidx),
                    creation_iteration=self.iteration,
                )
                children.append(cidx)
        for sol in b.members():
            self.insert(sol)
        return children

    def insert_and_subdivide(self, sol) -> BinIndex:
        """Insert, then keep subdividing while any receiver is over
        threshold (a split can leave one quadrant still too full).
        Returns the leaf bin finally holding the solution's BC."""
        idx = self.insert(sol)
        pending = self.maybe_subdivide(idx)
        while pending:
            nxt = []
            for child in pending:
                nxt.extend(self.maybe_subdivide(child))
            pending = nxt
        return self.lookup(sol.bc)

    # ---- queries ----

    def _order_key(self, index: BinIndex):
        i, j, depth = index
        scale = 2 ** (self.max_depth - depth)
        return (i * scale, j * scale, depth)

    def occupied_bins(self) -> list[BinIndex]:
        """Occupied bin indices, row-major, children inside parents."""
        occ = [idx for idx, b in self.bins.items() if b.count > 0]
        return sorted(occ, key=self._order_key)

    def all_bins(self) -> list[BinIndex]:
        return sorted(self.bins, key=self._order_key)

    def elites(self) -> dict[BinIndex, object]:
        return {
            idx: b.elite for idx, b in self.bins.items() if b.elite is not None
        }

    def bc_centre(self, index: BinIndex) -> np.ndarray:
        return self.bins[index].centre()

    def stats(self) -> dict:
        elites = self.elites()
        fits = [e.fitness for e in elites.values()]
        return {
            "n_bins": len(self.bins),
            "n_occupied": len(self.occupied_bins()),
            "n_elites": len(elites),
            "best_fitness": max(fits) if fits else None,
            "mean_fitness": float(np.mean(fits)) if fits else None,
            "max_depth_used": max((b.depth for b in self.bins.values()), default=0),
        }

    # ---- serialisation ----

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "rect": [list(self.rect[0]), list(self.rect[1])],
            "base_resolution": list(self.base_resolution),
            "subdivision_threshold": self.subdivision_threshold,
            "max_depth": self.max_depth,
            "capacity": self.capacity,
            "iteration": self.iteration,
            "bins": [
                {
                    "index": list(idx),
                    "creation_iteration": b.creation_iteration,
                    "feasible": [s.to_dict() for s in b.feasible],
                    "infeasible": [s.to_dict() for s in b.infeasible],
                }
                for idx, b in sorted(self.bins.items(), key=lambda kv: self._order_key(kv[0]))
            ],
        }

    @classmethod
    def from_dict(cls, d: dict, solution_loader) -> "Container":
        c = cls(
            rect=(tuple(d["rect"][0]), tuple(d["rect"][1])),
            base_resolution=tuple(d["base_resolution"]),
            subdivision_threshold=d["subdivision_threshold"],
            max_depth=d["max_depth"],
            capacity=d["capacity"],
        )
        c.iteration = d.get("iteration", 0)
        c.bins = {}
        for bd in d["bins"]:
            idx = tuple(bd["index"])
            b = Bin(
                index=idx,
                bounds=c._bounds_for(idx),
                creation_iteration=bd.get("creation_iteration", 0),
            )
            b.feasible = [solution_loader(s) for s in bd["feasible"]]
            b.infeasible = [solution_loader(s) for s in bd["infeasible"]]
            c.bins[idx] = b
        return c
