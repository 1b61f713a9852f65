import numpy as np
import pytest

from proj_inference.classify import (FullModel, ProjectionClassifier, add_point_scores, binary_scores, confusion_matrix,
                                     direction_scores, evaluate, fit_full, fit_rp, predict_addpoint_tv, predict_plugin,
                                     predict_rp, predict_rp_all, projection_sweep)
from proj_inference.datagen import equicorrelated_joint, gen_correlation_classes, independent_joint, sample_from_pmf
from proj_inference.measures import DiscreteMeasure, KSDistance, Sample, empirical_measure
from proj_inference.projections import Direction, random_directions


def binary_cube(d):
    return ((np.arange(2 ** d)[:, None] >> np.arange(d - 1, -1, -1)) & 1).astype(float)


def two_class_sample(rng, n0, n1, d=3):
    X0 = (rng.random((n0, d)) < 0.3).astype(int)
    X1 = (rng.random((n1, d)) < 0.7).astype(int)
    return Sample(np.vstack([X0, X1]), np.repeat([0, 1], [n0, n1]))


# fit_rp
def test_fit_rp_single_class():
    train = Sample([[0, 1], [1, 1]], [0, 0])
    model = fit_rp(train, [Direction([1.0, 0.0])])
    np.testing.assert_allclose(model.priors, [1.0])
    assert model.n_classes == 1


def test_fit_rp_point_masses():
    train = Sample([[0, 1], [1, 0]], [0, 1])
    model = fit_rp(train, random_directions(2, 3, np.random.default_rng(0)))
    for label in (0, 1):
        assert all(P.n_atoms == 1 for P in model.per_class_proj[label])


def test_fit_rp_matches_manual_projection():
    rng = np.random.default_rng(1)
    train = two_class_sample(rng, 20, 15)
    directions = random_directions(3, 4, rng)
    model = fit_rp(train, directions)
    for label in (0, 1):
        for j, u in enumerate(directions):
            expected = empirical_measure(Sample((train.class_rows(label) @ u.u).reshape(-1, 1)))
            assert model.per_class_proj[label][j].n_atoms == expected.n_atoms
            np.testing.assert_allclose(np.sort(model.per_class_proj[label][j].points[:, 0]), np.sort(expected.points[:, 0]))


def test_fit_rp_empty_class_raises():
    train = Sample([[0, 1], [1, 1], [1, 0]], [0, 0, 2])
    with pytest.raises(ValueError, match="class 1 has no training points"):
        fit_rp(train, [Direction([1.0, 0.0])])


def test_fit_rp_direction_dimension_mismatch():
    train = Sample([[0, 1], [1, 1]], [0, 1])
    with pytest.raises(ValueError, match="directions"):
        fit_rp(train, [Direction([1.0, 0.0, 0.0])])


def test_fit_rp_unknown_distance():
    train = Sample([[0, 1], [1, 1]], [0, 1])
    with pytest.raises(ValueError, match="distance"):
        fit_rp(train, [Direction([1.0, 0.0])], distance_kind='dts')


# predict_rp
def test_predict_rp_disjoint_classes():
    train = Sample([[0, 0]] * 5 + [[1, 1]] * 5, [0] * 5 + [1] * 5)
    model = fit_rp(train, random_directions(2, 5, np.random.default_rng(2)))
    assert predict_rp(model, [1, 1]) == 1
    assert predict_rp(model, [0, 0]) == 0


def test_predict_rp_tie_goes_to_smallest_label():
    train = Sample([[0, 1], [1, 0], [0, 1], [1, 0]], [0, 0, 1, 1])
    model = fit_rp(train, random_directions(2, 3, np.random.default_rng(3)))
    assert predict_rp(model, [1, 1]) == 0


def test_tv_scores_match_closed_form():
    rng = np.random.default_rng(4)
    for _ in range(50):
        train = two_class_sample(rng, int(rng.integers(3, 15)), int(rng.integers(3, 15)))
        directions = random_directions(3, 5, rng)
        model = fit_rp(train, directions, distance_kind='tv')
        x = (rng.random(3) < 0.5).astype(float)
        closed = []
        for label in (0, 1):
            n_l = model.class_counts[label]
            masses = [P.mass_at([u.u @ x]) for P, u in zip(model.per_class_proj[label], directions)]
            closed.append(max((1 - m) / (n_l + 1) for m in masses))
        np.testing.assert_allclose(add_point_scores(model, x), closed, atol=1e-12)
        if abs(closed[0] - closed[1]) > 1e-9:
            assert predict_rp(model, x) == int(np.argmin(closed))


def test_row_order_does_not_change_scores():
    rng = np.random.default_rng(5)
    train = two_class_sample(rng, 12, 9)
    directions = random_directions(3, 6, rng)
    shuffled = train.subset(rng.permutation(train.n))
    for kind in ('w1', 'ks', 'cvm', 'tv'):
        m1, m2 = fit_rp(train, directions, kind), fit_rp(shuffled, directions, kind)
        for x in binary_cube(3):
            np.testing.assert_allclose(add_point_scores(m1, x), add_point_scores(m2, x), atol=1e-12)


def test_restrict_keeps_prefix():
    train = Sample([[0, 0], [1, 1]], [0, 1])
    directions = random_directions(2, 5, np.random.default_rng(6))
    model = fit_rp(train, directions).restrict(2)
    assert model.n_directions == 2
    assert model.directions[1] is directions[1]
    with pytest.raises(ValueError, match="'k'"):
        model.restrict(3)


@pytest.mark.parametrize("kind", ['w1', 'ks', 'cvm', 'tv'])
def test_direction_scores_match_augmented_measures(kind):
    rng = np.random.default_rng(30)
    train = two_class_sample(rng, 25, 35, d=4)
    model = fit_rp(train, random_directions(4, 7, rng), kind)
    X = binary_cube(4)
    scores = direction_scores(model, X)
    assert scores.shape == (16, 2, 7)
    for i, x in enumerate(X):
        direct = [max(model.distance(P, P.add_point([u.u @ x], int(model.class_counts[label])))
                      for P, u in zip(model.per_class_proj[label], model.directions))
                  for label in range(2)]
        np.testing.assert_allclose(scores[i].max(axis=1), direct, rtol=1e-9, atol=1e-12)
    np.testing.assert_array_equal(predict_rp_all(model, X), [predict_rp(model, x) for x in X])


def test_direction_scores_dimension_mismatch():
    model = fit_rp(Sample([[0, 0], [1, 1]], [0, 1]), random_directions(2, 3, np.random.default_rng(0)))
    with pytest.raises(ValueError, match="'X'"):
        direction_scores(model, np.zeros((2, 3)))


# full-space rules
def test_addpoint_tv_unseen_cases():
    train = Sample([[0, 0], [0, 1], [1, 1], [1, 0]], [0, 0, 1, 1])
    model = fit_full(train)
    assert predict_addpoint_tv(model, [0, 0]) == 0
    assert predict_addpoint_tv(model, [1, 1]) == 1
    train = Sample([[0, 0], [1, 1]], [0, 1])
    assert predict_addpoint_tv(fit_full(train), [0, 1]) == 0


def test_addpoint_tv_identical_classes_tie():
    train = Sample([[0, 1], [1, 0], [0, 1], [1, 0]], [0, 0, 1, 1])
    assert predict_addpoint_tv(fit_full(train), [0, 1]) == 0


def test_addpoint_tv_matches_closed_form():
    rng = np.random.default_rng(7)
    for _ in range(50):
        train = two_class_sample(rng, int(rng.integers(3, 20)), int(rng.integers(3, 20)))
        model = fit_full(train)
        for x in binary_cube(3):
            p0, p1 = model.per_class_full[0].mass_at(x), model.per_class_full[1].mass_at(x)
            n0, n1 = model.class_counts
            d0, d1 = (1 - p0) / (n0 + 1), (1 - p1) / (n1 + 1)
            if p0 > 0 and p1 > 0 and abs(d0 - d1) > 1e-9:
                assert predict_addpoint_tv(model, x) == int(d1 < d0)


def test_addpoint_tv_equals_plugin_for_balanced_classes():
    rng = np.random.default_rng(8)
    for n in (50, 200):
        model = fit_full(two_class_sample(rng, n, n))
        for x in binary_cube(3):
            P0, P1 = model.per_class_full
            if abs(P0.mass_at(x) - P1.mass_at(x)) < 1e-9:
                continue
            assert predict_addpoint_tv(model, x) == predict_plugin(model, x)


def test_addpoint_tv_needs_two_classes():
    model = fit_full(Sample([[0, 0], [1, 1], [0, 1]], [0, 1, 2]))
    with pytest.raises(ValueError, match="binary labels"):
        predict_addpoint_tv(model, [0, 0])


def test_plugin_examples():
    model = fit_full(Sample([[0, 0], [1, 1]], [0, 1]))
    assert predict_plugin(model, [1, 1]) == 1
    assert predict_plugin(model, [0, 1]) == 0
    model = fit_full(Sample([[1, 1]] * 3 + [[0, 0]] + [[1, 1]] + [[0, 0]] * 3, [1] * 4 + [0] * 4))
    assert predict_plugin(model, [1, 1]) == 1


def test_plugin_with_true_pmfs_is_bayes():
    rng = np.random.default_rng(9)
    E = binary_cube(3)
    p = rng.dirichlet(np.ones(8), size=2)
    model = FullModel([DiscreteMeasure(E, p[0]), DiscreteMeasure(E, p[1])], [30, 70])
    for i, x in enumerate(E):
        assert predict_plugin(model, x) == int(p[1, i] * 0.7 > p[0, i] * 0.3)


# evaluation
def test_evaluate_perfect_and_constant():
    test = Sample([[0, 0], [1, 1], [0, 1], [1, 0]], [0, 1, 0, 1])
    assert evaluate(lambda x: int(x[0]), test) == 0.0
    assert evaluate(lambda x: 0, test) == 0.5


def test_confusion_matrix_and_scores():
    test = Sample([[0], [0], [0], [1], [1], [1]], [0, 0, 1, 1, 1, 0])
    conf = confusion_matrix(lambda x: int(x[0]), test, n_classes=2)
    np.testing.assert_array_equal(conf, [[2, 1], [1, 2]])
    scores = binary_scores(conf)
    assert scores['sensitivity'] == pytest.approx(2 / 3)
    assert scores['specificity'] == pytest.approx(2 / 3)
    assert scores['ner'] == pytest.approx(2 / 3)


def test_binary_scores_invalid_shape():
    with pytest.raises(ValueError, match="confusion"):
        binary_scores(np.eye(3))


def test_projection_sweep_keys():
    rng = np.random.default_rng(10)
    data = gen_correlation_classes(5, 0.9, 60, rng)
    train, test = data.subset(np.arange(0, 120, 2)), data.subset(np.arange(1, 120, 2))
    errors = projection_sweep(train, test, [20, 5, 10], rng, 'tv')
    assert list(errors) == [5, 10, 20]
    assert all(0.0 <= e <= 1.0 for e in errors.values())


def test_projection_sweep_matches_restricted_models():
    train = two_class_sample(np.random.default_rng(31), 40, 40)
    test = two_class_sample(np.random.default_rng(32), 20, 20)
    errors = projection_sweep(train, test, [2, 5, 9], np.random.default_rng(33), 'ks')
    model = fit_rp(train, random_directions(3, 9, np.random.default_rng(33)), 'ks')
    for k, error in errors.items():
        sub = model.restrict(k)
        assert error == evaluate(lambda x: predict_rp(sub, x), test)


def expected_error(predict, model, laws):
    """Misclassification probability under equal priors, summed over the common support of ``laws``."""
    support = laws[0].points
    return sum(0.5 * law.mass_at(x) for x in support for label, law in enumerate(laws) if predict(model, x) != label)


def test_addpoint_tv_error_decreases_with_training_size():
    laws = [independent_joint(5).to_measure(), equicorrelated_joint(5, 0.5, 0.9).to_measure()]
    rng = np.random.default_rng(34)
    mean_errors = []
    for n in (50, 200, 800):
        errors = []
        for _ in range(20):
            rows = np.vstack([law.sample(n, rng) for law in laws])
            model = fit_full(Sample(rows, np.repeat([0, 1], n)))
            errors.append(expected_error(predict_addpoint_tv, model, laws))
        mean_errors.append(np.mean(errors))
    assert mean_errors[0] >= mean_errors[1] >= mean_errors[2]
    assert mean_errors[2] < 0.12


# ProjectionClassifier
def test_classifier_default_params():
    clf = ProjectionClassifier()
    assert clf.rule == 'rp'
    assert clf.distance_kind == 'w1'
    assert clf.projections == 100


def test_classifier_distance_instance():
    clf = ProjectionClassifier(distance=KSDistance())
    assert clf.distance_kind == 'ks'


def test_classifier_distance_class_raises():
    with pytest.raises(TypeError, match="instance"):
        ProjectionClassifier(distance=KSDistance)


@pytest.mark.parametrize("params, key", [
    ({'rule': 'knn'}, 'rule'),
    ({'distance': 'dts'}, 'distance'),
    ({'projections': 0}, 'projections'),
    ({'projections': 2.5}, 'projections'),
])
def test_classifier_invalid_params(params, key):
    with pytest.raises(ValueError, match=key):
        ProjectionClassifier(params=params)


def test_classifier_predict_before_fit():
    with pytest.raises(ValueError, match="fit"):
        ProjectionClassifier().predict([[0, 1]])


@pytest.mark.parametrize("rule", ['rp', 'addpoint_tv', 'plugin'])
def test_classifier_fit_predict_score(rule):
    rng = np.random.default_rng(11)
    train = two_class_sample(rng, 80, 80, d=4)
    test = two_class_sample(rng, 40, 40, d=4)
    clf = ProjectionClassifier(params={'rule': rule, 'distance': 'tv', 'projections': 30}).fit(train, rng)
    assert clf.predict(test.rows).shape == (80,)
    assert clf.score(test) < 0.4


def test_plugin_beats_chance_on_independent_vs_dependent():
    rng = np.random.default_rng(12)
    null = independent_joint(3)
    X0 = sample_from_pmf(null, 200, rng).rows
    X1 = np.repeat((rng.random((200, 1)) < 0.5), 3, axis=1).astype(float)
    train = Sample(np.vstack([X0, X1]), np.repeat([0, 1], 200))
    model = fit_full(train)
    assert predict_plugin(model, [1, 1, 1]) == 1
    assert predict_plugin(model, [1, 0, 1]) == 0
