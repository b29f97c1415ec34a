"""Voxel phenotypes: turtle interpretation, descriptors, constraints.

The turtle starts at the origin heading +x with up +z. A placement atom
drops a block at the current cell and then advances one step along the
heading; rotation atoms are quarter turns about the up, left, and
heading axes; brackets save and restore the full pose. Placements on an
occupied cell are recorded as overlaps, never silently dropped, so the
constraint checker can see them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grammar import ATOM_BLOCKS, ATOM_POP, ATOM_PUSH, Genotype

Cell = tuple[int, int, int]

FUNCTIONAL_TYPES = frozenset({"cockpit", "reactor", "thruster"})
REQUIRED_TYPES = ("cockpit", "reactor", "thruster")
# Slope markers written by hull smoothing; structural, never functional.
SLOPE_TYPES = frozenset(
    {"hull_wedge", "hull_panel", "hull_corner", "hull_ridge", "hull_tip", "hull_cap"}
)

_AXES = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


def _neg(v: Cell) -> Cell:
    return (-v[0], -v[1], -v[2])


def _rotate(h: Cell, l: Cell, u: Cell, atom: str) -> tuple[Cell, Cell, Cell]:
    if atom == "+":  # yaw left
        return l, _neg(h), u
    if atom == "-":  # yaw right
        return _neg(l), h, u
    if atom == "^":  # pitch up
        return u, l, _neg(h)
    if atom == "&":  # pitch down
        return _neg(u), l, h
    if atom == "<":  # roll left
        return h, u, _neg(l)
    return h, _neg(u), l  # ">" roll right


@dataclass(frozen=True)
class Phenotype:
    """Immutable voxel structure with per-cell block types."""

    blocks: dict[Cell, str]
    orientations: dict[Cell, Cell] = field(default_factory=dict)
    overlaps: tuple[tuple[Cell, str], ...] = ()

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def is_empty(self) -> bool:
        return not self.blocks

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.blocks:
            raise ValueError("empty phenotype has no bounding box")
        coords = np.array(list(self.blocks), dtype=int)
        return coords.min(axis=0), coords.max(axis=0)

    @property
    def axes_sorted(self) -> tuple[int, int, int]:
        """Bounding-box extents in blocks, (major, medium, smallest)."""
        mins, maxs = self.bounding_box()
        ext = np.sort(maxs - mins + 1)[::-1]
        return int(ext[0]), int(ext[1]), int(ext[2])

    @property
    def n_functional(self) -> int:
        return sum(1 for t in self.blocks.values() if t in FUNCTIONAL_TYPES)

    def thrust_axes(self) -> frozenset[Cell]:
        """Headings of all placed thrusters."""
        return frozenset(
            self.orientations.get(c, (1, 0, 0))
            for c, t in self.blocks.items()
            if t == "thruster"
        )


def build_phenotype(g: Genotype) -> Phenotype:
    """Deterministic turtle interpretation of the genotype string."""
    pos = (0, 0, 0)
    h, l, u = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    stack: list[tuple[Cell, Cell, Cell, Cell]] = []
    blocks: dict[Cell, str] = {}
    orientations: dict[Cell, Cell] = {}
    overlaps: list[tuple[Cell, str]] = []

    for atom in g.atoms:
        if atom in ATOM_BLOCKS:
            btype = ATOM_BLOCKS[atom]
            if pos in blocks:
                overlaps.append((pos, btype))
            else:
                blocks[pos] = btype
                orientations[pos] = h
            pos = (pos[0] + h[0], pos[1] + h[1], pos[2] + h[2])
        elif atom == ATOM_PUSH:
            stack.append((pos, h, l, u))
        elif atom == ATOM_POP:
            pos, h, l, u = stack.pop()
        elif atom in "+-^&<>":
            h, l, u = _rotate(h, l, u, atom)
        # other symbols are structural (unexpanded rule heads): skip

    return Phenotype(blocks=blocks, orientations=orientations, overlaps=tuple(overlaps))


@dataclass(frozen=True)
class PhenotypeDescriptors:
    functional_ratio: float
    filled_ratio: float
    major_medium_ratio: float
    major_smallest_ratio: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                self.functional_ratio,
                self.filled_ratio,
                self.major_medium_ratio,
                self.major_smallest_ratio,
            ]
        )


def descriptors(p: Phenotype) -> PhenotypeDescriptors:
    """The four shape ratios. Errors on a degenerate bounding box."""
    if p.is_empty:
        raise ValueError("descriptors undefined for an empty phenotype")
    major, medium, smallest = p.axes_sorted
    if smallest <= 0:
        raise ValueError("degenerate bounding box")
    n = len(p.blocks)
    volume = major * medium * smallest
    return PhenotypeDescriptors(
        functional_ratio=p.n_functional / n,
        filled_ratio=n / volume,
        major_medium_ratio=major / medium,
        major_smallest_ratio=major / smallest,
    )


@dataclass(frozen=True)
class ConstraintWeights:
    overlap: float = 1.0
    missing_component: float = 10.0
    missing_thrust_axis: float = 5.0


@dataclass(frozen=True)
class ConstraintReport:
    overlap_count: int
    missing_components: int
    missing_thrust_axes: int
    violation: float

    @property
    def feasible(self) -> bool:
        return self.violation == 0.0


def check_constraints(
    p: Phenotype,
    safe_mode: bool = True,
    weights: ConstraintWeights = ConstraintWeights(),
) -> ConstraintReport:
    """Weighted violation over overlaps, components, and thrust coverage.

    Required components are cockpit, reactor, and thruster. With safe
    mode on, every one of the six axis directions must carry at least
    one thruster heading.
    """
    present = set(p.blocks.values())
    missing_components = sum(1 for t in REQUIRED_TYPES if t not in present)
    overlap_count = len(p.overlaps)
    if safe_mode:
        covered = p.thrust_axes()
        missing_axes = sum(1 for a in _AXES if a not in covered)
    else:
        missing_axes = 0
    violation = (
        weights.overlap * overlap_count
        + weights.missing_component * missing_components
        + weights.missing_thrust_axis * missing_axes
    )
    return ConstraintReport(
        overlap_count=overlap_count,
        missing_components=missing_components,
        missing_thrust_axes=missing_axes,
        violation=float(violation),
    )


def export_blueprint(
    p: Phenotype,
    desc: PhenotypeDescriptors | None = None,
    fitness: float | None = None,
    genotype: Genotype | None = None,
    colour: str | None = None,
) -> dict:
    """Versioned JSON-ready document for a built structure."""
    doc = {
        "version": 1,
        "blocks": [
            {
                "x": c[0],
                "y": c[1],
                "z": c[2],
                "type": t,
                "orientation": list(p.orientations.get(c, (1, 0, 0))),
            }
            for c, t in sorted(p.blocks.items())
        ],
        "metadata": {},
    }
    if desc is not None:
        doc["metadata"]["descriptors"] = {
            "functional_ratio": desc.functional_ratio,
            "filled_ratio": desc.filled_ratio,
            "major_medium_ratio": desc.major_medium_ratio,
            "major_smallest_ratio": desc.major_smallest_ratio,
        }
    if fitness is not None:
        doc["metadata"]["fitness"] = fitness
    if genotype is not None:
        doc["metadata"]["genotype"] = genotype.atoms
    if colour is not None:
        doc["metadata"]["colour"] = colour
    return doc
