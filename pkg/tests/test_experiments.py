import numpy as np
import pytest

from proj_inference.config import ExperimentConfig
from proj_inference.dataio import ResultRecord, write_binary_matrix, write_pointsets
from proj_inference.datagen import gen_correlation_classes
from proj_inference.experiments import (REFERENCE_RESULTS, bench_summary, generate, run_bench, run_classification,
                                        run_test, run_tomography, train_test_split)
from proj_inference.measures import Sample
from proj_inference.tomo import generate_phantom_dataset


def config(**params):
    return ExperimentConfig({'seed': 11, **params})


def mean_error(records):
    return [r.value for r in records if r.metric == 'error_mean']


def test_train_test_split():
    sample = Sample(np.arange(20).reshape(10, 2))
    train, test = train_test_split(sample, 0.75, np.random.default_rng(0))
    assert (train.n, test.n) == (8, 2)
    merged = np.sort(np.concatenate([train.rows[:, 0], test.rows[:, 0]]))
    np.testing.assert_array_equal(merged, np.arange(0, 20, 2))


def test_train_test_split_per_class():
    labels = np.repeat([0, 1], [200, 120])
    sample = Sample(np.arange(320).reshape(-1, 1), labels)
    train, test = train_test_split(sample, 0.75, np.random.default_rng(1))
    np.testing.assert_array_equal(np.bincount(train.labels), [150, 90])
    np.testing.assert_array_equal(np.bincount(test.labels), [50, 30])
    assert np.intersect1d(train.rows[:, 0], test.rows[:, 0]).size == 0

    again, _ = train_test_split(sample, 0.75, np.random.default_rng(1))
    np.testing.assert_array_equal(again.rows, train.rows)


def test_train_test_split_keeps_both_sides():
    sample = Sample(np.zeros((3, 2)))
    train, test = train_test_split(sample, 0.99, np.random.default_rng(0))
    assert (train.n, test.n) == (2, 1)


# classification
def test_classification_records():
    records = run_classification(config(projections=[5, 10], distance='tv', n_obs=30, replicates=2))
    per_rep = [r for r in records if r.replicate >= 0]
    assert len(per_rep) == 4
    assert len(records) == 8
    assert {r.experiment for r in records} == {'classify'}
    assert all(0 <= r.value <= 1 for r in per_rep)
    assert any('k=10' in r.params for r in records)


def test_classification_is_reproducible():
    cfg = config(projections=[5], distance='ks', n_obs=20, replicates=2)
    assert run_classification(cfg) == run_classification(cfg)


@pytest.mark.parametrize("rule", ['plugin', 'addpoint_tv'])
def test_classification_full_space_rules(rule):
    records = run_classification(config(rule=rule, n_obs=50, replicates=3))
    assert len([r for r in records if r.metric == 'error']) == 3


def test_classification_from_input(tmp_path):
    path = str(tmp_path / "labelled.csv")
    write_binary_matrix(gen_correlation_classes(4, 0.9, 30, np.random.default_rng(1)), path)
    records = run_classification(config(input=path, has_labels=True, rule='plugin', replicates=2))
    assert 'dim=4' in records[0].params

    unlabelled = str(tmp_path / "plain.csv")
    write_binary_matrix(Sample(np.zeros((4, 3), dtype=int)), unlabelled)
    with pytest.raises(ValueError, match="labelled"):
        run_classification(config(input=unlabelled))


# tomography
def test_tomography_records():
    records = run_tomography(config(images=6, projections=[3], neighbours=3, bins=10, replicates=1))
    assert [r.metric for r in records] == ['error', 'error_mean', 'error_sd']
    assert 'scenario=1' in records[0].params


def test_tomography_from_point_lists(tmp_path):
    images, labels = generate_phantom_dataset(1, 6, np.random.default_rng(2))
    train_idx, test_idx = [0, 1, 2, 3, 6, 7, 8, 9], [4, 5, 10, 11]
    train, test = str(tmp_path / "train.csv"), str(tmp_path / "test.csv")
    write_pointsets([images[i] for i in train_idx], labels[train_idx], train)
    write_pointsets([images[i] for i in test_idx], labels[test_idx], test)
    records = run_tomography(config(train_images=train, test_images=test, projections=[3], neighbours=3, replicates=2))
    per_rep = [r for r in records if r.replicate >= 0]
    assert len(per_rep) == 2
    assert len(records) == 4
    assert 'source=input' in records[0].params
    assert 'images=8' in records[0].params
    assert all(0 <= r.value <= 1 for r in per_rep)


@pytest.mark.slow
def test_tomography_separates_scenario_one():
    records = run_tomography(config(scenario=1, images=100, projections=[40], neighbours=21, replicates=2))
    assert mean_error(records)[0] <= 0.10


# tests
def test_sum_test_records():
    records = run_test(config(test='sum', dim=100, replicates=3))
    assert len(records) == 12
    assert {r.experiment for r in records} == {'test:sum_structure'}
    assert {r.metric for r in records} == {'statistic', 'critical_value', 'p_value', 'reject'}


def test_sum_test_from_input(tmp_path):
    path = str(tmp_path / "row.csv")
    write_binary_matrix(Sample(np.ones((1, 40), dtype=int)), path)
    records = run_test(config(test='sum', input=path, replicates=1))
    reject = [r for r in records if r.metric == 'reject']
    assert reject[0].value == 1.0


@pytest.mark.parametrize("test, gamma", [('ks1', 1.0), ('ks2', 1.0), ('ks-multi', 1.75)])
def test_projected_tests_records(test, gamma):
    records = run_test(config(test=test, dim=4, gamma=gamma, n_obs=50, mc_reps=100, projections=[3], replicates=2))
    assert len(records) == 8
    assert all(r.experiment.startswith('test:') for r in records)


def test_rare_test_records():
    records = run_test(config(test='rare', dim=10, n_obs=100, replicates=1))
    assert len(records) == 12 * 4
    assert any(r.experiment == 'test:rare[union]' for r in records)


def test_power_sweeps():
    records = run_test(config(test='or-power', dim=4, n_obs=50, projections=[3], mc_reps=100, replicates=10, grid=[1.0, 3.0]))
    assert [r.metric for r in records] == ['power', 'power']
    records = run_test(config(test='pb-power', dim=50, replicates=10, grid=[2.0]))
    assert len(records) == 1
    assert 0 <= records[0].value <= 1


# generation
@pytest.mark.parametrize("kind, rows", [('independent', 7), ('equicorrelated', 7), ('odds-ratio', 7),
                                        ('poisson-binomial', 7), ('classes', 14)])
def test_generate_kinds(kind, rows):
    sample = generate(config(dim=3, n_obs=7, corr=0.5), kind)
    assert sample.rows.shape == (rows, 3)
    assert np.isin(sample.rows, (0, 1)).all()


def test_generate_is_seeded():
    cfg = config(dim=4, n_obs=10)
    np.testing.assert_array_equal(generate(cfg, 'independent').rows, generate(cfg, 'independent').rows)


def test_generate_invalid_kind():
    with pytest.raises(ValueError, match="'kind'"):
        generate(config(), 'gaussian')


# benchmarks
def test_bench_invalid_example():
    with pytest.raises(ValueError, match="'example'"):
        run_bench(5, 0.1, 1)


def test_bench_sum_power():
    records = run_bench(4, 0.01, 3)
    assert len(records) == 9
    assert {r.experiment for r in records} == {'bench4'}
    strongest = [r for r in records if r.params == 'd=200;gamma1=4;gamma2=2']
    assert strongest[0].value > 0.9

    summary = bench_summary(4, records)
    assert summary.startswith("example 4:")
    assert REFERENCE_RESULTS[4]['text'] in summary
    assert len(summary.splitlines()) == 11


def test_bench_summary_lists_aggregates_only():
    records = [ResultRecord('bench1', 'corr=0.9', 'error', 0.1, 0, 1),
               ResultRecord('bench1', 'corr=0.9', 'error_mean', 0.1, -1, 1)]
    summary = bench_summary(1, records)
    assert "error_mean = 0.1000" in summary
    assert len(summary.splitlines()) == 3


@pytest.mark.slow
def test_bench_classification_error_falls_with_correlation():
    records = run_bench(1, 1.0, 123)
    errors = []
    for corr in ('0.1', '0.3', '0.5', '0.7', '0.9'):
        errors += [r.value for r in records if r.metric == 'error_mean' and f'corr={corr};' in r.params]
    assert len(errors) == 5
    assert np.all(np.diff(errors) < 0)
    assert 0.097 - 0.03 <= errors[-1] <= 0.097 + 0.03
