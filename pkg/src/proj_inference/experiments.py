# -*- coding: utf-8 -*-
"""
experiment runners behind the command-line interface
"""
import logging
from dataclasses import replace

import numpy as np

from proj_inference.classify import evaluate, fit_full, predict_addpoint_tv, predict_plugin, projection_sweep
from proj_inference.config import ExperimentConfig
from proj_inference.dataio import ResultRecord, format_params, load_binary_matrix, load_pointsets
from proj_inference.datagen import (gen_correlation_classes, gen_equicorrelated_bernoulli, gen_independent_bernoulli,
                                    gen_odds_ratio_joint, gen_poisson_binomial_params, gen_poisson_binomial_sum,
                                    independent_joint, sample_from_pmf)
from proj_inference.hypotest import (multi_projection_ks_test, odds_ratio_power, one_sample_projected_ks,
                                     poisson_binomial_power, rare_distribution_test, sum_structure_test,
                                     two_sample_projected_ks)
from proj_inference.measures import Sample
from proj_inference.projections import good_direction_for_support, random_directions
from proj_inference.seeding import derive_seed, make_rng, replicate_rng
from proj_inference.tomo import fit_tomo, generate_phantom_dataset, tomo_predict


logger = logging.getLogger(__name__)

GEN_KINDS = ('independent', 'equicorrelated', 'odds-ratio', 'poisson-binomial', 'classes')

OR_GRID = [1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0]
PB_GRID = [2.0, 2.5, 3.0, 3.5, 4.0]

REFERENCE_RESULTS = {
    1: {'description': 'binary classification, d=5, Corr=0.9, 100 projections, 200 obs/class, 25% test',
        'metric': 'error_mean',
        'reference': 0.097,
        'reference_sd': 0.030,
        'text': 'mean error 9.7% (sd 3.0)'},
    2: {'description': 'phantom tomography, 40 directions, r=21',
        'metric': 'error_mean',
        'reference': {1: 0.0255, 2: 0.06},
        'text': 'test error 2.55% (scenario 1), 6% (scenario 2)'},
    3: {'description': 'projected KS test of independence, d=8, N=200',
        'metric': 'power',
        'reference': 0.73,
        'text': 'power above 73% for gamma >= 1.75 with 50 projections'},
    4: {'description': 'single-datum sum test on Poisson-Binomial data',
        'metric': 'power',
        'reference': None,
        'text': 'power grows with d and with gamma1 (curves only)'},
}


def _n_train(n:int, train_fraction:float) -> int:
    return min(max(int(round(train_fraction * n)), 1), n - 1)


def _split_indices(n:int, labels, train_fraction:float, rng:np.random.Generator):
    if labels is None:
        order = rng.permutation(n)
        n_train = _n_train(n, train_fraction)
        return order[:n_train], order[n_train:]

    train_idx, test_idx = [], []
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        members = members[rng.permutation(members.size)]
        n_train = _n_train(members.size, train_fraction) if members.size > 1 else 1
        train_idx.append(members[:n_train])
        test_idx.append(members[n_train:])
    return np.concatenate(train_idx), np.concatenate(test_idx)


def train_test_split(sample:Sample, train_fraction:float, rng:np.random.Generator):
    """
    Deterministic split under ``rng``.

    A labelled sample is split class by class, so every class keeps the share ``train_fraction`` of its own rows
    in training (150 of 200 at 0.75); classes are shuffled in label order. An unlabelled sample is shuffled as a
    whole. Every part keeps at least one row on each side when it has two or more.
    """
    train_idx, test_idx = _split_indices(sample.n, sample.labels, train_fraction, rng)
    return sample.subset(train_idx), sample.subset(test_idx)


def _aggregate(experiment:str, per_replicate:dict, seed:int) -> list:
    """Mean and standard deviation rows (replicate -1) for each params key of ``per_replicate``."""
    records = []
    for params, values in per_replicate.items():
        values = np.asarray(values, dtype=float)
        sd = float(values.std(ddof=1)) if values.shape[0] > 1 else 0.0
        records.append(ResultRecord(experiment, params, 'error_mean', float(values.mean()), -1, seed))
        records.append(ResultRecord(experiment, params, 'error_sd', sd, -1, seed))
    return records


def _load_input(cfg:ExperimentConfig) -> Sample:
    return load_binary_matrix(cfg.input, has_header=cfg.has_header, has_labels=cfg.has_labels)


def run_classification(cfg:ExperimentConfig) -> list:
    """
    Train/test replicates of a classification rule, on generated two-class data (independent vs equicorrelated,
    Bernoulli(1/2) marginals) or on a labelled input matrix.

    Returns:
        list: ResultRecords with one 'error' per replicate and parameter tuple, plus mean / sd aggregates
    """
    data = None
    if cfg.input is not None:
        data = _load_input(cfg)
        if not data.has_labels:
            raise ValueError(f"Invalid 'has_labels': \n classification needs a labelled input matrix")

    records = []
    per_replicate = {}
    for rep in range(cfg.replicates):
        rng = replicate_rng(cfg.seed, rep)
        sample = data if data is not None else gen_correlation_classes(cfg.dim, cfg.corr, cfg.n_obs, rng)
        train, test = train_test_split(sample, cfg.train_fraction, rng)

        if cfg.rule == 'rp':
            errors = projection_sweep(train, test, cfg.projections, rng, cfg.distance)
            results = {format_params(rule='rp', distance=cfg.distance, dim=sample.dim, corr=cfg.corr, k=k): e for k, e in errors.items()}
        else:
            model = fit_full(train)
            predict = predict_plugin if cfg.rule == 'plugin' else predict_addpoint_tv
            results = {format_params(rule=cfg.rule, dim=sample.dim, corr=cfg.corr): evaluate(lambda x: predict(model, x), test)}

        seed = derive_seed(cfg.seed, rep)
        for params, error in results.items():
            records.append(ResultRecord('classify', params, 'error', error, rep, seed))
            per_replicate.setdefault(params, []).append(error)
        logger.info("classify replicate %d: %s", rep, results)

    return records + _aggregate('classify', per_replicate, cfg.seed)


def run_tomography(cfg:ExperimentConfig) -> list:
    """
    Train/test replicates of the phantom tomography classifier.

    Images are generated for the configured scenario and split per class, unless ``train_images`` and
    ``test_images`` name labelled point-list files; replicates then differ only in their directions.
    """
    loaded = None
    if cfg.train_images is not None:
        loaded = load_pointsets(cfg.train_images), load_pointsets(cfg.test_images)

    records = []
    per_replicate = {}
    k = cfg.projections[0]
    for rep in range(cfg.replicates):
        rng = replicate_rng(cfg.seed, rep)
        if loaded is None:
            images, labels = generate_phantom_dataset(cfg.scenario, cfg.images, rng)
            train_idx, test_idx = _split_indices(len(images), labels, cfg.train_fraction, rng)
            train_images, train_labels = [images[i] for i in train_idx], labels[train_idx]
            test_images, test_labels = [images[i] for i in test_idx], labels[test_idx]
            params = format_params(scenario=cfg.scenario, k=k, r=cfg.neighbours, images=cfg.images)
        else:
            (train_images, train_labels), (test_images, test_labels) = loaded
            params = format_params(source='input', k=k, r=cfg.neighbours, images=len(train_images))

        directions = random_directions(2, k, rng)
        model = fit_tomo(train_images, train_labels, directions, bins=cfg.bins, r=cfg.neighbours)
        predicted = np.array([tomo_predict(model, F) for F in test_images])
        error = float(np.mean(predicted != test_labels))

        records.append(ResultRecord('tomo', params, 'error', error, rep, derive_seed(cfg.seed, rep)))
        per_replicate.setdefault(params, []).append(error)
        logger.info("tomo replicate %d: error=%.4f", rep, error)

    return records + _aggregate('tomo', per_replicate, cfg.seed)


def _report_records(report, params:str, replicate:int, seed:int) -> list:
    values = {'statistic': report.statistic,
              'critical_value': report.critical_value,
              'p_value': report.p_value,
              'reject': float(report.reject)}
    return [ResultRecord(f'test:{report.name}', params, metric, float(v), replicate, seed) for metric, v in values.items()]


def _test_data(cfg:ExperimentConfig, rng:np.random.Generator) -> Sample:
    """Input matrix, or n_obs rows of the odds-ratio-gamma law (independent when gamma = 1)."""
    if cfg.input is not None:
        return _load_input(cfg)
    pmf = independent_joint(cfg.dim) if cfg.gamma == 1 else gen_odds_ratio_joint(cfg.dim, cfg.gamma)
    return sample_from_pmf(pmf, cfg.n_obs, rng)


def run_test(cfg:ExperimentConfig) -> list:
    """
    Run the configured test once per replicate, or a power sweep over ``grid`` for 'or-power' and 'pb-power'.
    """
    records = []
    if cfg.test == 'or-power':
        grid = cfg.grid or OR_GRID
        rng = make_rng(cfg.seed)
        k = cfg.projections[0]
        directions = random_directions(cfg.dim, k, rng)
        for gamma in grid:
            power = odds_ratio_power(cfg.dim, cfg.n_obs, gamma, directions, cfg.alpha, cfg.mc_reps, cfg.replicates, rng)
            records.append(ResultRecord('test:or-power', format_params(d=cfg.dim, N=cfg.n_obs, k=k, gamma=gamma), 'power', power, -1, cfg.seed))
        return records

    if cfg.test == 'pb-power':
        grid = cfg.grid or PB_GRID
        rng = make_rng(cfg.seed)
        for gamma1 in grid:
            power = poisson_binomial_power(cfg.dim, gamma1, cfg.gamma2, cfg.alpha, cfg.replicates, rng)
            records.append(ResultRecord('test:pb-power', format_params(d=cfg.dim, gamma1=gamma1, gamma2=cfg.gamma2), 'power', power, -1, cfg.seed))
        return records

    for rep in range(cfg.replicates):
        rng = replicate_rng(cfg.seed, rep)
        seed = derive_seed(cfg.seed, rep)

        if cfg.test == 'sum':
            if cfg.input is not None:
                row = _load_input(cfg).rows[0]
                S_obs, d = int(row.sum()), row.shape[0]
            else:
                d = cfg.dim
                S_obs = gen_poisson_binomial_sum(gen_poisson_binomial_params(d, cfg.gamma, cfg.gamma2, rng), rng)
            report = sum_structure_test(S_obs, d, cfg.alpha)
            records += _report_records(report, format_params(d=d, alpha=cfg.alpha), rep, seed)
            continue

        sample = _test_data(cfg, rng)
        params = format_params(d=sample.dim, N=sample.n, gamma=cfg.gamma, alpha=cfg.alpha)
        P0 = independent_joint(sample.dim).to_measure()

        if cfg.test == 'ks1':
            u = good_direction_for_support(P0.points, rng)
            report = one_sample_projected_ks(sample, P0, u, cfg.alpha, cfg.mc_reps, rng)
        elif cfg.test == 'ks2':
            reference = gen_independent_bernoulli(sample.dim, 0.5, sample.n, rng)
            u = good_direction_for_support(P0.points, rng)
            report = two_sample_projected_ks(sample, reference, u, cfg.alpha, cfg.mc_reps, rng)
        elif cfg.test == 'ks-multi':
            directions = random_directions(sample.dim, cfg.projections[0], rng)
            report = multi_projection_ks_test(sample, P0, directions, cfg.alpha, cfg.mc_reps, rng)
        else:
            per_k, report = rare_distribution_test(sample, cfg.alpha)
            for k_report in per_k:
                records += _report_records(k_report, params, rep, seed)

        records += _report_records(report, params, rep, seed)
    return records


def generate(cfg:ExperimentConfig, kind:str) -> Sample:
    """
    Synthetic binary sample of ``n_obs`` rows for the 'gen' command.

    Kinds: 'independent' (Bernoulli(1/2)), 'equicorrelated' (correlation ``corr``), 'odds-ratio' (pairwise odds
    ratio ``gamma``), 'poisson-binomial' (independent coordinates with Beta(gamma, gamma2) probabilities) and
    'classes' (the labelled two-class problem with ``n_obs`` rows per class).
    """
    if kind not in GEN_KINDS:
        raise ValueError(f"Invalid 'kind': \n must be one of {list(GEN_KINDS)}, got {kind!r}")
    rng = make_rng(cfg.seed)
    if kind == 'independent':
        return gen_independent_bernoulli(cfg.dim, 0.5, cfg.n_obs, rng)
    if kind == 'equicorrelated':
        return gen_equicorrelated_bernoulli(cfg.dim, 0.5, cfg.corr, cfg.n_obs, rng)
    if kind == 'odds-ratio':
        pmf = independent_joint(cfg.dim) if cfg.gamma == 1 else gen_odds_ratio_joint(cfg.dim, cfg.gamma)
        return sample_from_pmf(pmf, cfg.n_obs, rng)
    if kind == 'poisson-binomial':
        q = gen_poisson_binomial_params(cfg.dim, cfg.gamma, cfg.gamma2, rng)
        return Sample((rng.random((cfg.n_obs, cfg.dim)) < q).astype(np.int64))
    return gen_correlation_classes(cfg.dim, cfg.corr, cfg.n_obs, rng)


def _renamed(records:list, experiment:str) -> list:
    return [replace(r, experiment=experiment) for r in records]


def _scaled(value:int, scale:float, minimum:int = 1) -> int:
    return max(minimum, int(round(value * scale)))


def run_bench(example_id:int, scale:float, seed:int, mc_reps:int = 1000) -> list:
    """
    Desk-scale reproduction of one of the simulation examples. Replicate counts are multiplied by ``scale``.

    1: binary classification at d=5 over Corr in {0.1, 0.3, 0.5, 0.7, 0.9} with the total variation distance.
    2: phantom tomography, both scenarios, 100 images per class, 40 directions, r=21.
    3: level (gamma=1) and power (gamma=1.75) of the averaged projected test, d=8, N=200, 50 directions.
    4: power of the single-datum sum test for d in {50, 100, 200} and gamma1 in {2, 3, 4}.
    """
    if example_id not in REFERENCE_RESULTS:
        raise ValueError(f"Invalid 'example': \n must be one of {sorted(REFERENCE_RESULTS)}, got {example_id!r}")

    if example_id == 1:
        records = []
        for corr in (0.1, 0.3, 0.5, 0.7, 0.9):
            cfg = ExperimentConfig({'dim': 5, 'corr': corr, 'projections': [100], 'distance': 'tv', 'n_obs': 200,
                                    'replicates': _scaled(50, scale, 2), 'seed': seed})
            records += run_classification(cfg)
        return _renamed(records, 'bench1')

    if example_id == 2:
        records = []
        for scenario in (1, 2):
            cfg = ExperimentConfig({'scenario': scenario, 'images': 100, 'projections': [40], 'neighbours': 21,
                                    'replicates': _scaled(5, scale), 'seed': seed})
            records += run_tomography(cfg)
        return _renamed(records, 'bench2')

    if example_id == 3:
        reps = _scaled(300, scale, 20)
        cfg = ExperimentConfig({'dim': 8, 'n_obs': 200, 'projections': [50], 'test': 'or-power', 'grid': [1.0, 1.75],
                                'mc_reps': mc_reps, 'replicates': reps, 'seed': seed})
        return _renamed(run_test(cfg), 'bench3')

    records = []
    for d in (50, 100, 200):
        cfg = ExperimentConfig({'dim': d, 'gamma2': 2.0, 'test': 'pb-power', 'grid': [2.0, 3.0, 4.0],
                                'replicates': _scaled(1000, scale, 50), 'seed': seed})
        records += run_test(cfg)
    return _renamed(records, 'bench4')


def bench_summary(example_id:int, records:list) -> str:
    """Human-readable comparison of bench records with the bundled reference numbers."""
    ref = REFERENCE_RESULTS[example_id]
    lines = [f"example {example_id}: {ref['description']}",
             f"reference: {ref['text']}"]
    for r in records:
        if r.replicate == -1:
            lines.append(f"  {r.params}  {r.metric} = {r.value:.4f}")
    return '\n'.join(lines) + '\n'
