# -*- coding: utf-8 -*-
"""
projection-based goodness-of-fit tests and tests on the sum of binary coordinates
"""
import logging
import math
import warnings
from dataclasses import dataclass, field, asdict

import numpy as np
from numpy.typing import ArrayLike
from scipy.stats import binom, ks_2samp

from proj_inference.datagen import gen_odds_ratio_joint, gen_poisson_binomial_params, gen_poisson_binomial_sum, independent_joint, sample_from_pmf
from proj_inference.errors import DataError
from proj_inference.measures import DiscreteMeasure, Sample, ks_distance_1d
from proj_inference.projections import Direction, is_good_direction, project_measure
from proj_inference.seeding import child_seeds, make_rng


logger = logging.getLogger(__name__)

MIN_CALIBRATION = 100


@dataclass(frozen=True)
class TestReport:
    """
    Outcome of a test.

    ``reject`` is True exactly when ``statistic > critical_value``.
    """
    __test__ = False

    name: str
    statistic: float
    critical_value: float
    p_value: float
    reject: bool
    alpha: float
    calibration_size: int = 0
    seed: int = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


class PoissonBinomialSpec:
    """
    Law of a sum of independent Bernoulli(q_i) variables.

    Args:
        q (ArrayLike): success probabilities in [0, 1]
    """
    def __init__(self, q:ArrayLike):
        self.q = np.asarray(q, dtype=float).reshape(-1)
        self._check_params()


    @property
    def d(self) -> int:
        return self.q.shape[0]

    def _check_params(self):
        if self.q.shape[0] == 0:
            raise ValueError(f"Invalid 'q': \n need at least one probability")
        if not np.all(np.isfinite(self.q)) or np.any(self.q < 0) or np.any(self.q > 1):
            raise ValueError(f"Invalid 'q': \n every q_i must lie in [0, 1]")


def _check_alpha(alpha:float):
    if not 0 < alpha <= 1:
        raise ValueError(f"Invalid 'alpha': \n must lie in (0, 1], got {alpha!r}")


def _check_calibration(B:int):
    if B < MIN_CALIBRATION:
        raise ValueError(f"Invalid 'B': \n at least {MIN_CALIBRATION} calibration draws are required, got {B}")


def binomial_pmf(d:int, p:float, k) -> float:
    """
    Binomial(d, p) mass at k, computed in log space.

    Raises:
        ValueError: k outside 0..d or p outside [0, 1]
    """
    if d < 0:
        raise ValueError(f"Invalid 'd': \n must be a nonnegative integer")
    if not 0 <= p <= 1:
        raise ValueError(f"Invalid 'p': \n must lie in [0, 1], got {p!r}")
    k_arr = np.asarray(k)
    if np.any(k_arr < 0) or np.any(k_arr > d):
        raise ValueError(f"Invalid 'k': \n must lie in 0..{d}")
    out = np.exp(binom.logpmf(k_arr, d, p))
    return float(out) if out.ndim == 0 else out


def binomial_pmf_vector(d:int, p:float = 0.5) -> np.ndarray:
    """Binomial(d, p) pmf over 0..d."""
    return binomial_pmf(d, p, np.arange(d + 1))


def poisson_binomial_pmf(spec) -> np.ndarray:
    """
    Poisson-Binomial pmf over 0..d, built by adding one Bernoulli variable at a time.

    Args:
        spec (PoissonBinomialSpec | ArrayLike): the success probabilities

    Returns:
        np.ndarray: masses for 0..d
    """
    if not isinstance(spec, PoissonBinomialSpec):
        spec = PoissonBinomialSpec(spec)
    pmf = np.ones(1)
    for q in spec.q:
        nxt = np.zeros(pmf.shape[0] + 1)
        nxt[:-1] += pmf * (1.0 - q)
        nxt[1:] += pmf * q
        pmf = nxt
    return pmf


def ehm_lower_bound(q:ArrayLike) -> float:
    """Lower bound sum_j (q_j - 1/2)^2 / (31 d) on the TV distance between Poisson-Binomial(q) and Binomial(d, 1/2)."""
    spec = PoissonBinomialSpec(q)
    return float(np.sum((spec.q - 0.5) ** 2) / (31.0 * spec.d))


def chevallier_bound(d:int, epsilon:float) -> float:
    """
    Lower bound 1 - 2 sqrt(d) / (epsilon^2 2^(d-1)) on the share of the simplex whose sum law is within epsilon of
    Binomial(d, 1/2). Returned as is, negative values included.
    """
    if d < 1:
        raise ValueError(f"Invalid 'd': \n must be a positive integer")
    if not epsilon > 0:
        raise ValueError(f"Invalid 'epsilon': \n must be positive")
    return 1.0 - 2.0 * math.sqrt(d) / (epsilon ** 2 * 2.0 ** (d - 1))


def chevallier_subset_bound(d:int, epsilon:float, A:float = 2.0) -> float:
    """Same bound over all index subsets: 1 - A d^(5/2) / (epsilon^2 2^(d-1))."""
    if d < 1:
        raise ValueError(f"Invalid 'd': \n must be a positive integer")
    if not epsilon > 0:
        raise ValueError(f"Invalid 'epsilon': \n must be positive")
    return 1.0 - A * d ** 2.5 / (epsilon ** 2 * 2.0 ** (d - 1))


def sum_structure_relation_holds(d:int, alpha:float, epsilon:float) -> bool:
    """Whether 1 - 2 sqrt(d) / (epsilon^2 2^(d-1)) >= 1 - alpha/2."""
    return 2.0 * math.sqrt(d) / (epsilon ** 2 * 2.0 ** (d - 1)) <= alpha / 2


def sum_structure_min_epsilon(d:int, alpha:float) -> float:
    """Smallest epsilon satisfying the relation at dimension d."""
    return math.sqrt(4.0 * math.sqrt(d) / (alpha * 2.0 ** (d - 1)))


def sum_structure_min_dim(alpha:float, epsilon:float, d_max:int = 100000) -> int:
    """
    Smallest d from which the relation holds at (alpha, epsilon).

    Raises:
        ValueError: no such d up to d_max
    """
    _check_alpha(alpha)
    if not epsilon > 0:
        raise ValueError(f"Invalid 'epsilon': \n must be positive")
    for d in range(1, d_max + 1):
        if sum_structure_relation_holds(d, alpha, epsilon):
            return d
    raise ValueError(f"Invalid 'epsilon': \n relation unsatisfiable for d <= {d_max}")


def central_interval(d:int, alpha:float):
    """
    Symmetric interval [l, d - l] with the largest l such that Binomial(d, 1/2) puts mass at most alpha/2 outside.
    """
    ls = np.arange(d // 2 + 1)
    outside = 2.0 * binom.cdf(ls - 1, d, 0.5)
    l = int(ls[outside <= alpha / 2 + 1e-15].max())
    return l, d - l


def sum_structure_test(S_obs:int, d:int, alpha:float = 0.05, epsilon:float = None) -> TestReport:
    """
    Single-datum test of whether the sum S_d of one binary vector is atypical for Binomial(d, 1/2).

    The null is rejected when S_obs falls outside [l, r] = [l, d - l], the widest symmetric interval whose
    outside mass under Binomial(d, 1/2) is at most alpha/2. The statistic is |S_obs - d/2| and the critical value
    r - d/2.

    Args:
        S_obs (int): observed number of ones, 0..d
        d (int): dimension
        alpha (float, optional): level. Defaults to 0.05.
        epsilon (float, optional): closeness radius; when omitted the smallest admissible one is used.

    Raises:
        ValueError: S_obs out of range, or no epsilon in (0, 1] (or the given epsilon) satisfies the relation at d
    """
    _check_alpha(alpha)
    if d < 1:
        raise ValueError(f"Invalid 'd': \n must be a positive integer")
    if not 0 <= S_obs <= d:
        raise ValueError(f"Invalid 'S_obs': \n must lie in 0..{d}, got {S_obs}")

    if epsilon is None:
        epsilon = sum_structure_min_epsilon(d, alpha)
        if epsilon > 1:
            raise ValueError(f"Invalid 'd': \n the relation needs epsilon = {epsilon:.4g} > 1 at d={d}; use d >= {sum_structure_min_dim(alpha, 1.0)}")
    elif not sum_structure_relation_holds(d, alpha, epsilon):
        raise ValueError(f"Invalid 'epsilon': \n relation unsatisfiable at d={d}, epsilon={epsilon}; need d >= {sum_structure_min_dim(alpha, epsilon)}")

    l, r = central_interval(d, alpha)
    deviation = abs(S_obs - d / 2)
    critical = r - d / 2
    reject = deviation > critical
    side = None
    if S_obs < l:
        side = 'left'
    elif S_obs > r:
        side = 'right'

    tail = binom.cdf(math.floor(d / 2 - deviation + 1e-9), d, 0.5) + binom.sf(math.ceil(d / 2 + deviation - 1e-9) - 1, d, 0.5)
    return TestReport(name='sum_structure',
                      statistic=float(deviation),
                      critical_value=float(critical),
                      p_value=float(min(1.0, tail)),
                      reject=bool(reject),
                      alpha=alpha,
                      details={'l': l, 'r': r, 'side': side, 'epsilon': float(epsilon), 'S_obs': int(S_obs), 'd': d})


def critical_value_a_terms(d:int, N:int, alpha:float):
    """
    The two terms of the rare-distribution critical value: the Hoeffding term sqrt(-log(alpha/2) / (2N)) and the
    Chevallier term d^(1/4) / (2^((d-5)/2) sqrt(alpha)).
    """
    if d < 1 or N < 1:
        raise ValueError(f"Invalid 'd' or 'N': \n both must be positive integers")
    if not 0 < alpha < 1:
        raise ValueError(f"Invalid 'alpha': \n must lie in (0, 1), got {alpha!r}")
    hoeffding = math.sqrt(-math.log(alpha / 2) / (2 * N))
    chevallier = d ** 0.25 / (2.0 ** ((d - 5) / 2) * math.sqrt(alpha))
    return hoeffding, chevallier


def critical_value_a(d:int, N:int, alpha:float) -> float:
    """Critical value a = max of the Hoeffding and Chevallier terms."""
    return max(critical_value_a_terms(d, N, alpha))


def _binary_rows(samples) -> np.ndarray:
    rows = samples.rows if isinstance(samples, Sample) else np.asarray(samples)
    if rows.ndim != 2 or rows.shape[0] == 0:
        raise DataError(f"expected a nonempty 2-D binary matrix, got shape {rows.shape}")
    bad = np.argwhere((rows != 0) & (rows != 1))
    if bad.shape[0] > 0:
        i, j = bad[0]
        raise DataError(f"non-binary entry {rows[i, j]!r} at row {i}, column {j}")
    return rows.astype(np.int64)


def rare_distribution_test(samples, alpha:float = 0.05):
    """
    Compare the empirical law of the row sums with Binomial(d, 1/2).

    For every k the statistic |P_N(k) - B(d, 1/2, k)| is compared with a = critical_value_a(d, N, alpha). The
    overall test takes the largest deviation and uses alpha / (2(d+1)) in the Hoeffding term (union over k).
    p-values are the Hoeffding tail bounds 2 exp(-2 N t^2) and 2 (d+1) exp(-2 N t^2), capped at 1.

    Args:
        samples (Sample | ArrayLike): N binary vectors of dimension d
        alpha (float, optional): level in (0, 1). Defaults to 0.05.

    Returns:
        tuple: ``(per_k, overall)`` where ``per_k`` is a list of d+1 TestReports

    Raises:
        DataError: a non-binary entry
    """
    rows = _binary_rows(samples)
    N, d = rows.shape
    hoeffding, chevallier = critical_value_a_terms(d, N, alpha)
    a = max(hoeffding, chevallier)

    empirical = np.bincount(rows.sum(axis=1), minlength=d + 1) / N
    reference = binomial_pmf_vector(d)
    deviation = np.abs(empirical - reference)

    per_k = []
    for k in range(d + 1):
        per_k.append(TestReport(name=f'rare[k={k}]',
                                statistic=float(deviation[k]),
                                critical_value=float(a),
                                p_value=float(min(1.0, 2.0 * math.exp(-2.0 * N * deviation[k] ** 2))),
                                reject=bool(deviation[k] > a),
                                alpha=alpha,
                                details={'k': k, 'empirical': float(empirical[k]), 'binomial': float(reference[k])}))

    union_hoeffding = math.sqrt(-math.log(alpha / (2 * (d + 1))) / (2 * N))
    a_union = max(union_hoeffding, chevallier)
    worst = float(deviation.max())
    overall = TestReport(name='rare[union]',
                         statistic=worst,
                         critical_value=float(a_union),
                         p_value=float(min(1.0, 2.0 * (d + 1) * math.exp(-2.0 * N * worst ** 2))),
                         reject=bool(worst > a_union),
                         alpha=alpha,
                         details={'k_max': int(deviation.argmax()), 'N': N, 'd': d, 'hoeffding': hoeffding, 'chevallier': chevallier})
    return per_k, overall


def mc_null_distribution(null_sampler, stat_fn, B:int, rng:np.random.Generator) -> np.ndarray:
    """
    ``B`` statistics computed on data drawn under the null.

    Draw b uses its own generator seeded from ``rng``, so results depend only on the state of ``rng``.

    Args:
        null_sampler (callable): ``null_sampler(rng)`` returns one null data set
        stat_fn (callable): ``stat_fn(data)`` returns the statistic
    """
    _check_calibration(B)
    seeds = child_seeds(rng, B)
    return np.array([stat_fn(null_sampler(make_rng(int(s)))) for s in seeds], dtype=float)


def _quantile_critical(null_stats:np.ndarray, alpha:float) -> float:
    return float(np.quantile(null_stats, 1.0 - alpha, method='higher'))


def mc_null_calibration(null_sampler, stat_fn, B:int, alpha:float, rng:np.random.Generator) -> float:
    """
    (1 - alpha) quantile of ``B`` null statistics, taking the next order statistic up when it falls between two.
    """
    _check_alpha(alpha)
    return _quantile_critical(mc_null_distribution(null_sampler, stat_fn, B, rng), alpha)


def _mc_report(name:str, observed:float, null_stats:np.ndarray, alpha:float, seed:int, details:dict) -> TestReport:
    # alpha = 1 rejects everything
    critical = -np.inf if alpha >= 1 else _quantile_critical(null_stats, alpha)
    p_value = (1 + np.count_nonzero(null_stats >= observed)) / (null_stats.shape[0] + 1)
    return TestReport(name=name,
                      statistic=float(observed),
                      critical_value=float(critical),
                      p_value=float(p_value),
                      reject=bool(observed > critical),
                      alpha=alpha,
                      calibration_size=int(null_stats.shape[0]),
                      seed=seed,
                      details=details)


def _check_direction(H, dim:int):
    if not isinstance(H, Direction) or H.ambient_dim != dim:
        raise ValueError(f"Invalid 'H': \n must be a Direction in R^{dim}")


def _projected_empirical(values:np.ndarray) -> DiscreteMeasure:
    return DiscreteMeasure(values, np.full(values.shape[0], 1.0 / values.shape[0]))


def one_sample_projected_ks(sample:Sample, P0:DiscreteMeasure, H:Direction, alpha:float = 0.05, B:int = 1000, rng:np.random.Generator = None) -> TestReport:
    """
    One-sample Kolmogorov test of ``sample`` against ``P0`` after projecting both on H.

    The critical value is the Monte Carlo (1 - alpha) quantile of the statistic for samples of the same size drawn
    from P0. A warning is issued when the projection is not injective on the support of P0.

    Raises:
        ValueError: B < 100, alpha outside (0, 1], or dimension mismatch
    """
    _check_alpha(alpha)
    _check_calibration(B)
    if sample.dim != P0.dim:
        raise ValueError(f"Invalid 'sample': \n dimension mismatch with P0")
    _check_direction(H, P0.dim)
    if not is_good_direction(H, P0.points):
        warnings.warn("projection is not injective on the support of P0; the test only sees the projected law", UserWarning)

    rng = np.random.default_rng() if rng is None else rng
    seed = int(child_seeds(rng, 1)[0])
    P0_H = project_measure(H, P0)
    n = sample.n

    observed = ks_distance_1d(_projected_empirical(sample.rows @ H.u), P0_H)
    null_stats = mc_null_distribution(lambda r: P0_H.sample(n, r)[:, 0],
                                      lambda x: ks_distance_1d(_projected_empirical(x), P0_H),
                                      B, make_rng(seed))
    logger.debug("one_sample_projected_ks: statistic=%.5f n=%d B=%d", observed, n, B)
    return _mc_report('ks1', observed, null_stats, alpha, seed, {'n': n})


def _ks_two(x:np.ndarray, y:np.ndarray) -> float:
    return float(ks_2samp(x, y, method='asymp').statistic)


def two_sample_projected_ks(sampleX:Sample, sampleY:Sample, H:Direction, alpha:float = 0.05, B:int = 1000, rng:np.random.Generator = None) -> TestReport:
    """
    Two-sample Kolmogorov-Smirnov test on the projections onto H, calibrated by permuting the pooled projected
    sample.
    """
    _check_alpha(alpha)
    _check_calibration(B)
    if sampleX.dim != sampleY.dim:
        raise ValueError(f"Invalid 'sampleY': \n dimension mismatch, {sampleX.dim} vs {sampleY.dim}")
    _check_direction(H, sampleX.dim)

    rng = np.random.default_rng() if rng is None else rng
    seed = int(child_seeds(rng, 1)[0])
    x, y = sampleX.rows @ H.u, sampleY.rows @ H.u
    pooled = np.concatenate([x, y])
    n = x.shape[0]

    def permuted(r):
        return r.permutation(pooled)

    observed = _ks_two(x, y)
    null_stats = mc_null_distribution(permuted, lambda z: _ks_two(z[:n], z[n:]), B, make_rng(seed))
    return _mc_report('ks2', observed, null_stats, alpha, seed, {'n_x': n, 'n_y': y.shape[0]})


def multi_projection_ks_stat(sample:Sample, P0:DiscreteMeasure, directions:list, projected_nulls:list = None) -> float:
    """
    Average over the directions of the one-sample Kolmogorov distance between the projected sample and the
    projected P0.

    Args:
        projected_nulls (list, optional): precomputed ``project_measure(u, P0)`` for each direction
    """
    if len(directions) == 0:
        raise ValueError(f"Invalid 'directions': \n need at least one direction")
    if projected_nulls is None:
        projected_nulls = [project_measure(u, P0) for u in directions]
    rows = sample.rows if isinstance(sample, Sample) else np.asarray(sample, dtype=float)
    basis = np.hstack([u.basis for u in directions])
    projected = rows @ basis
    return float(np.mean([ks_distance_1d(_projected_empirical(projected[:, j]), Q) for j, Q in enumerate(projected_nulls)]))


def multi_projection_null(P0:DiscreteMeasure, directions:list, n:int, B:int, rng:np.random.Generator) -> np.ndarray:
    """Null distribution of the averaged statistic for samples of size ``n`` from P0."""
    projected_nulls = [project_measure(u, P0) for u in directions]
    return mc_null_distribution(lambda r: P0.sample(n, r),
                                lambda rows: multi_projection_ks_stat(rows, P0, directions, projected_nulls),
                                B, rng)


def multi_projection_ks_test(sample:Sample, P0:DiscreteMeasure, directions:list, alpha:float = 0.05, B:int = 1000, rng:np.random.Generator = None) -> TestReport:
    """
    Goodness-of-fit test with the statistic averaged over several directions, calibrated by Monte Carlo under P0.
    """
    _check_alpha(alpha)
    _check_calibration(B)
    for u in directions:
        _check_direction(u, P0.dim)
    rng = np.random.default_rng() if rng is None else rng
    seed = int(child_seeds(rng, 1)[0])

    observed = multi_projection_ks_stat(sample, P0, directions)
    null_stats = multi_projection_null(P0, directions, sample.n, B, make_rng(seed))
    return _mc_report('ks-multi', observed, null_stats, alpha, seed, {'n': sample.n, 'k': len(directions)})


def odds_ratio_power(d:int, N:int, gamma:float, directions:list, alpha:float, B:int, reps:int, rng:np.random.Generator) -> float:
    """
    Rejection rate of the averaged projected test of independence (uniform law on {0,1}^d) when data come from
    the odds-ratio-gamma joint with Bernoulli(1/2) margins. The critical value is calibrated once and shared by
    all replicates.
    """
    _check_alpha(alpha)
    if reps < 1:
        raise ValueError(f"Invalid 'reps': \n must be a positive integer")
    P0 = independent_joint(d).to_measure()
    projected_nulls = [project_measure(u, P0) for u in directions]
    seeds = child_seeds(rng, 2)

    null_stats = multi_projection_null(P0, directions, N, B, make_rng(int(seeds[0])))
    critical = -np.inf if alpha >= 1 else _quantile_critical(null_stats, alpha)

    alternative = independent_joint(d) if gamma == 1 else gen_odds_ratio_joint(d, gamma)
    rep_rng = make_rng(int(seeds[1]))
    rejections = 0
    for _ in range(reps):
        rows = sample_from_pmf(alternative, N, rep_rng).rows
        rejections += multi_projection_ks_stat(rows, P0, directions, projected_nulls) > critical
    power = rejections / reps
    logger.info("odds_ratio_power: d=%d N=%d gamma=%g k=%d power=%.3f", d, N, gamma, len(directions), power)
    return float(power)


def poisson_binomial_power(d:int, gamma1:float, gamma2:float, alpha:float, reps:int, rng:np.random.Generator) -> float:
    """
    Rejection rate of sum_structure_test on single sums S_d drawn from Poisson-Binomial laws whose parameters are
    Beta(gamma1, gamma2) draws (fresh parameters each replicate).
    """
    if reps < 1:
        raise ValueError(f"Invalid 'reps': \n must be a positive integer")
    rejections = 0
    for _ in range(reps):
        q = gen_poisson_binomial_params(d, gamma1, gamma2, rng)
        rejections += sum_structure_test(gen_poisson_binomial_sum(q, rng), d, alpha).reject
    return float(rejections / reps)
