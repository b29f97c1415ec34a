"""Hull post-processing: convex fill, protected erosion, slope smoothing.

The export pipeline wraps a raw phenotype in a hull in three stages:

1. every lattice cell whose centre lies inside the continuous convex
   hull of the occupied cell centres is filled with a base block;
2. one pass of 6-neighbour binary erosion removes thin added shell
   material, with all original blocks protected;
3. iterative smoothing replaces added blocks whose exposed-face pattern
   matches a slope template with a slope-type marker.

Original blocks keep both their cell and their type through all stages.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage
from scipy.spatial import Delaunay

from .voxel import Cell, Phenotype

_DIRS = np.array(
    [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)], dtype=int
)
_TOL = 1e-9


def _candidate_cells(coords: np.ndarray) -> np.ndarray:
    mins = coords.min(axis=0)
    maxs = coords.max(axis=0)
    grids = np.meshgrid(
        *(np.arange(lo, hi + 1) for lo, hi in zip(mins, maxs)), indexing="ij"
    )
    return np.stack([g.ravel() for g in grids], axis=1)


def hull_fill(p: Phenotype) -> frozenset[Cell]:
    """Cells whose centre is inside the hull of the occupied centres.

    Degenerate point sets (single cell, collinear, coplanar) are handled
    by testing membership inside the affine subspace they span. Original
    cells are always members.
    """
    coords = np.array(list(p.blocks), dtype=int)
    if coords.shape[0] == 0:
        raise ValueError("hull of an empty phenotype")
    original = frozenset(map(tuple, coords))
    if coords.shape[0] == 1:
        return original

    centred = coords - coords.mean(axis=0)
    rank = np.linalg.matrix_rank(centred, tol=1e-8)
    cand = _candidate_cells(coords)

    if rank == 3:
        tri = Delaunay(coords)
        inside = tri.find_simplex(cand.astype(float), tol=_TOL) >= 0
        chosen = cand[inside]
    else:
        # Work inside the affine subspace the points span.
        _, _, vt = np.linalg.svd(centred.astype(float), full_matrices=True)
        basis = vt[:rank]
        normals = vt[rank:]
        rel = cand - coords.mean(axis=0)
        on_plane = np.all(np.abs(rel @ normals.T) < 1e-7, axis=1)
        proj = rel @ basis.T
        pts = centred @ basis.T
        if rank == 1:
            lo, hi = pts.min(), pts.max()
            inside = on_plane & (proj[:, 0] >= lo - _TOL) & (proj[:, 0] <= hi + _TOL)
        else:
            tri = Delaunay(pts)
            inside = on_plane.copy()
            inside[on_plane] = tri.find_simplex(proj[on_plane], tol=_TOL) >= 0
        chosen = cand[inside]

    return original | frozenset(map(tuple, chosen))


def erode_added(filled: frozenset[Cell], original: frozenset[Cell]) -> frozenset[Cell]:
    """Added cells surviving one 6-neighbour erosion of the filled solid."""
    added = filled - original
    if not added:
        return frozenset()
    coords = np.array(list(filled), dtype=int)
    mins = coords.min(axis=0) - 1
    shape = coords.max(axis=0) - mins + 3
    grid = np.zeros(shape, dtype=bool)
    grid[tuple((coords - mins).T)] = True
    eroded = ndimage.binary_erosion(
        grid, structure=ndimage.generate_binary_structure(3, 1), border_value=0
    )
    keep = {c for c in added if eroded[c[0] - mins[0], c[1] - mins[1], c[2] - mins[2]]}
    return frozenset(keep)


def _slope_type(exposed: list[int]) -> str | None:
    """Slope template for an exposed-direction pattern, if any matches.

    Directions are indices into the 6-neighbour set, where 2i and 2i+1
    are the +/- faces of axis i.
    """
    k = len(exposed)
    axes = [d // 2 for d in exposed]
    has_opposite = len(axes) != len(set(axes))
    if k == 2:
        return "hull_panel" if has_opposite else "hull_wedge"
    if k == 3:
        return "hull_ridge" if has_opposite else "hull_corner"
    if k == 4:
        return "hull_tip"
    if k == 5:
        return "hull_cap"
    return None


def smooth(
    blocks: dict[Cell, str], candidates: set[Cell], iterations: int
) -> dict[Cell, str]:
    """Replace exposed candidate blocks with slope markers, in place.

    A face counts as exposed when the neighbouring cell is empty or
    already holds a slope marker, so each pass can uncover new matches
    for the next one. Passes stop early once nothing changes.
    """
    from .voxel import SLOPE_TYPES

    for _ in range(iterations):
        changes: dict[Cell, str] = {}
        for cell in candidates:
            if blocks[cell] in SLOPE_TYPES:
                continue
            exposed = []
            for d, (dx, dy, dz) in enumerate(_DIRS):
                nb = (cell[0] + dx, cell[1] + dy, cell[2] + dz)
                t = blocks.get(nb)
                if t is None or t in SLOPE_TYPES:
                    exposed.append(d)
            slope = _slope_type(exposed)
            if slope is not None:
                changes[cell] = slope
        if not changes:
            break
        blocks.update(changes)
    return blocks


def build_hull(p: Phenotype, smoothing_iters: int = 2) -> Phenotype:
    """Full hull pipeline; original blocks keep cell and type."""
    if p.is_empty:
        raise ValueError("cannot hull an empty phenotype")
    if smoothing_iters < 0:
        raise ValueError("smoothing_iters must be >= 0")
    original = frozenset(p.blocks)
    filled = hull_fill(p)
    surviving = erode_added(filled, original)

    blocks = dict(p.blocks)
    for c in surviving:
        blocks[c] = "body"
    blocks = smooth(blocks, set(surviving), smoothing_iters)
    return Phenotype(
        blocks=blocks, orientations=dict(p.orientations), overlaps=p.overlaps
    )
