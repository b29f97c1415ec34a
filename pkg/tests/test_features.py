"""Tests for per-bin feature extraction."""

from __future__ import annotations

import numpy as np
import pytest

from conftest import fill_container, stub_solution
from voxelites.ple.features import FEATURE_DIMS, FeatureSet
from voxelites.voxel import descriptors


def _one_bin_container(**solution_kwargs):
    container = fill_container([])
    solution = stub_solution((1.35, 1.8), **solution_kwargs)
    index = container.insert(solution)
    return container, index, solution


def test_feature_dims_per_kind():
    assert FEATURE_DIMS == {"bc": 2, "s_axes": 4, "s_full": 7}
    for kind, dim in FEATURE_DIMS.items():
        assert FeatureSet(kind).dim == dim


def test_unknown_kind_is_rejected():
    with pytest.raises(ValueError):
        FeatureSet("shape")


def test_none_kind_has_no_dimension():
    features = FeatureSet("none")
    with pytest.raises(ValueError):
        features.dim
    with pytest.raises(ValueError):
        features.extract(fill_container([(1.5, 1.5)]), (0, 0, 0))


def test_bc_features_are_the_bin_centre():
    container, index, _ = _one_bin_container()
    got = FeatureSet("bc").extract(container, index)
    assert np.array_equal(got, container.bins[index].centre())


def test_axis_features_append_elite_axis_ratios():
    container, index, solution = _one_bin_container()
    desc = descriptors(solution.phenotype)
    got = FeatureSet("s_axes").extract(container, index)
    centre = container.bins[index].centre()
    expected = [centre[0], centre[1], desc.major_medium_ratio, desc.major_smallest_ratio]
    assert np.allclose(got, expected)


def test_full_features_append_descriptors_and_genotype_length():
    container, index, solution = _one_bin_container(atoms="B[+B]T")
    desc = descriptors(solution.phenotype)
    got = FeatureSet("s_full").extract(container, index)
    centre = container.bins[index].centre()
    expected = np.concatenate(
        [centre, desc.as_array(), [len(solution.genotype) / solution.genotype.max_length]]
    )
    assert np.allclose(got, expected)


def test_representative_falls_back_to_least_violating_infeasible():
    container, index, solution = _one_bin_container(feasible=False, atoms="BB")
    assert container.bins[index].elite is None
    desc = descriptors(solution.phenotype)
    got = FeatureSet("s_axes").extract(container, index)
    assert np.allclose(got[2:], [desc.major_medium_ratio, desc.major_smallest_ratio])


def test_empty_phenotype_contributes_zero_descriptors():
    container, index, solution = _one_bin_container(atoms="+")
    assert solution.phenotype.is_empty
    got = FeatureSet("s_full").extract(container, index)
    assert np.allclose(got[2:6], 0.0)
    assert got[6] == len(solution.genotype) / solution.genotype.max_length


def test_matrix_stacks_one_row_per_bin():
    container = fill_container([(1.2, 1.4), (2.5, 3.5), (4.5, 9.5)])
    indices = container.occupied_bins()
    features = FeatureSet("s_full")
    matrix = features.matrix(container, indices)
    assert matrix.shape == (3, 7)
    for row, index in zip(matrix, indices):
        assert np.allclose(row, features.extract(container, index))


def test_matrix_of_no_bins_is_empty_with_feature_width():
    matrix = FeatureSet("s_axes").matrix(fill_container([]), [])
    assert matrix.shape == (0, 4)


def test_features_are_finite_across_a_populated_container():
    centres = [(1.0 + 0.4 * i, 1.0 + 0.9 * i) for i in range(10)]
    container = fill_container(centres)
    for kind in FEATURE_DIMS:
        matrix = FeatureSet(kind).matrix(container, container.occupied_bins())
        assert np.isfinite(matrix).all()
