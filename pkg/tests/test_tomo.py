import math

import numpy as np
import pytest

from proj_inference.errors import DataError
from proj_inference.projections import Direction, random_directions
from proj_inference.tomo import (PhantomConfig, PointSet, direction_votes, fit_tomo, generate_phantom,
                                 generate_phantom_dataset, rotate_pointset, shared_bin_edges, tomo_predict, xray,
                                 xray_histogram, xray_offsets)


SQUARE = PointSet([[0, 0], [0, 1], [1, 0], [1, 1]])


def outline_oracle(radius, h, bbox=(-3.5, 3.5, -3.5, 3.5)):
    count = 0
    for i in range(math.ceil(bbox[0] / h - 1e-9), math.floor(bbox[1] / h + 1e-9) + 1):
        for j in range(math.ceil(bbox[2] / h - 1e-9), math.floor(bbox[3] / h + 1e-9) + 1):
            if abs(math.hypot(i * h, j * h) - radius) <= h / 2:
                count += 1
    return count


# PointSet
def test_pointset_drops_duplicates():
    F = PointSet([[0, 0], [0, 0], [1, 0]])
    assert len(F) == 2


@pytest.mark.parametrize("points, grid_spacing, key", [
    ([[0, 0, 0]], 0.05, 'points'),
    ([[0, 0]], 0.0, 'grid_spacing'),
    ([[0, np.nan]], 0.05, 'points'),
])
def test_pointset_invalid(points, grid_spacing, key):
    with pytest.raises(ValueError, match=key):
        PointSet(points, grid_spacing=grid_spacing)


# PhantomConfig
def test_phantom_config_defaults():
    cfg = PhantomConfig()
    assert len(cfg.circles) == 5
    assert cfg.grid_spacing == 0.05
    assert cfg.bbox == (-3.5, 3.5, -3.5, 3.5)
    assert cfg.filled is False
    assert cfg.grid().shape == (141 * 141, 2)


@pytest.mark.parametrize("params, key", [
    ({'circles': []}, 'circles'),
    ({'circles': [(0, 0, -1.0, 0.1)]}, 'circles'),
    ({'circles': [(0, 0, 1.0, -0.1)]}, 'circles'),
    ({'circles': [(0, 0, 1.0)]}, 'circles'),
    ({'grid_spacing': -1}, 'grid_spacing'),
    ({'bbox': (1, 0, -1, 1)}, 'bbox'),
    ({'filled': 'yes'}, 'filled'),
])
def test_phantom_config_invalid(params, key):
    with pytest.raises(ValueError, match=key):
        PhantomConfig(params)


@pytest.mark.parametrize("scenario, label", [(3, 0), (1, 2)])
def test_phantom_scenario_invalid(scenario, label):
    with pytest.raises(ValueError, match="Invalid"):
        PhantomConfig.scenario(scenario, label)


def test_phantom_scenarios():
    assert len(PhantomConfig.scenario(1, 0).circles) == 5
    assert len(PhantomConfig.scenario(1, 1).circles) == 6
    assert all(c[2] == 1.2 for c in PhantomConfig.scenario(2, 1).circles)


# generation
@pytest.mark.parametrize("radius", [0.5, 1.0, 1.7])
def test_outline_matches_brute_force(radius):
    cfg = PhantomConfig({'circles': [(0.0, 0.0, radius, 0.0)]})
    F = generate_phantom(cfg, np.random.default_rng(0))
    assert len(F) == outline_oracle(radius, 0.05)


def test_filled_disk_contains_centre():
    cfg = PhantomConfig({'circles': [(0.0, 0.0, 1.0, 0.0)], 'filled': True})
    F = generate_phantom(cfg, np.random.default_rng(0))
    assert np.any(np.all(np.abs(F.points) < 1e-12, axis=1))
    assert np.all(np.hypot(F.points[:, 0], F.points[:, 1]) <= 1.0 + 1e-12)


def test_phantom_outside_bbox_raises():
    cfg = PhantomConfig({'circles': [(10.0, 10.0, 0.5, 0.0)]})
    with pytest.raises(ValueError, match="no grid points"):
        generate_phantom(cfg, np.random.default_rng(0))


def test_phantom_dataset_labels():
    images, labels = generate_phantom_dataset(1, 3, np.random.default_rng(1))
    assert len(images) == 6
    np.testing.assert_array_equal(labels, [0, 0, 0, 1, 1, 1])
    with pytest.raises(ValueError, match="n_per_class"):
        generate_phantom_dataset(1, 0, np.random.default_rng(1))


def test_phantom_dataset_is_reproducible():
    a, _ = generate_phantom_dataset(2, 2, np.random.default_rng(5))
    b, _ = generate_phantom_dataset(2, 2, np.random.default_rng(5))
    for F, G in zip(a, b):
        np.testing.assert_array_equal(F.points, G.points)


# X-rays
def test_xray_of_square():
    u = Direction([1.0, 0.0])
    np.testing.assert_allclose(xray_offsets(SQUARE, u), [0, 1, 0, 1])
    np.testing.assert_array_equal(xray(SQUARE, u, [0, 1, 2]), [2, 2, 0])
    diagonal = Direction.from_vector([1.0, 1.0])
    np.testing.assert_array_equal(xray(SQUARE, diagonal, [0.0, math.sqrt(0.5)]), [2, 1])


def test_xray_is_rotation_equivariant():
    rng = np.random.default_rng(2)
    F = PointSet(rng.integers(-5, 6, size=(30, 2)).astype(float))
    u = Direction.from_angle(0.3)
    angle = 0.8
    G = rotate_pointset(F, angle)
    offsets = np.unique(np.round(xray_offsets(F, u), 9))
    np.testing.assert_array_equal(xray(F, u, offsets, tol=1e-7),
                                  xray(G, Direction.from_angle(0.3 + angle), offsets, tol=1e-7))


def test_xray_histogram_outside_range():
    u = Direction([1.0, 0.0])
    with pytest.raises(DataError, match="outside the bin range"):
        xray_histogram(SQUARE, u, [0.0, 0.5])


def test_xray_histogram_counts():
    h = xray_histogram(SQUARE, Direction([1.0, 0.0]), [-0.5, 0.5, 1.5])
    np.testing.assert_allclose(h.masses, [0.5, 0.5])


def test_shared_bin_edges_cover_pool():
    images, _ = generate_phantom_dataset(1, 2, np.random.default_rng(3))
    u = Direction.from_angle(1.1)
    edges = shared_bin_edges(images, u, n_bins=12)
    assert edges.shape == (13,)
    for F in images:
        proj = xray_offsets(F, u)
        assert edges[0] < proj.min() and proj.max() < edges[-1]


# classifier
def test_fit_tomo_validation():
    images, labels = generate_phantom_dataset(1, 3, np.random.default_rng(4))
    dirs = random_directions(2, 2, np.random.default_rng(4))
    with pytest.raises(ValueError, match="labels"):
        fit_tomo(images, labels[:-1], dirs)
    with pytest.raises(ValueError, match="binary"):
        fit_tomo(images, labels + 1, dirs)
    with pytest.raises(ValueError, match="directions"):
        fit_tomo(images, labels, [])
    with pytest.raises(ValueError, match="'r'"):
        fit_tomo(images, labels, dirs, r=7)


def test_fit_tomo_even_r_warns():
    images, labels = generate_phantom_dataset(1, 3, np.random.default_rng(5))
    dirs = random_directions(2, 2, np.random.default_rng(5))
    with pytest.warns(UserWarning, match="even"):
        model = fit_tomo(images, labels, dirs, bins=10, r=2)
    assert model.r == 3


def test_direction_votes_shape():
    rng = np.random.default_rng(6)
    images, labels = generate_phantom_dataset(2, 4, rng)
    model = fit_tomo(images, labels, random_directions(2, 3, rng), bins=15, r=3)
    votes = direction_votes(model, images[0])
    assert votes.shape == (3,)
    assert set(votes.tolist()) <= {0, 1}


def test_tomo_classifier_separates_radii():
    rng = np.random.default_rng(7)
    images, labels = generate_phantom_dataset(2, 40, rng)
    idx = rng.permutation(len(images))
    train, test = idx[:50], idx[50:]
    model = fit_tomo([images[i] for i in train], labels[train], random_directions(2, 20, rng), r=7)
    predictions = np.array([tomo_predict(model, images[i]) for i in test])
    assert np.mean(predictions != labels[test]) <= 0.25


def test_tomo_predict_ignores_training_order():
    rng = np.random.default_rng(8)
    images, labels = generate_phantom_dataset(1, 8, rng)
    directions = random_directions(2, 5, rng)
    perm = rng.permutation(len(images))
    model = fit_tomo(images, labels, directions, bins=10, r=5)
    shuffled = fit_tomo([images[i] for i in perm], labels[perm], directions, bins=10, r=5)
    queries, _ = generate_phantom_dataset(1, 4, rng)
    for F in queries:
        np.testing.assert_array_equal(direction_votes(model, F), direction_votes(shuffled, F))
        assert tomo_predict(model, F) == tomo_predict(shuffled, F)


def test_equal_distances_prefer_label_zero():
    small = PointSet([[0, 0], [0, 1], [1, 0], [1, 1]])
    large = PointSet([[0, 0], [0, 3], [3, 0], [3, 3]])
    directions = [Direction([1.0, 0.0])]
    for labels in ([1, 0, 1], [0, 1, 1]):
        model = fit_tomo([small, small, large], labels, directions, bins=4, r=1)
        assert direction_votes(model, small).tolist() == [0]
