# -*- coding: utf-8 -*-
"""
generators for multivariate Bernoulli data, Poisson-Binomial parameters and points of the probability simplex
"""
import itertools
import logging
from functools import reduce

import numpy as np
from numpy.typing import ArrayLike

from proj_inference.errors import NumericalError
from proj_inference.measures import DiscreteMeasure, Sample
from proj_inference.measures.discrete_measure import MASS_TOL


logger = logging.getLogger(__name__)

# full 2^d tables above this are refused
MAX_TABLE_DIM = 20

# full-table odds-ratio fitting is limited to this dimension
MAX_IPF_DIM = 12


def _decode(index:np.ndarray, d:int) -> np.ndarray:
    """Binary vectors for flat table indices (axis 0 is the most significant bit)."""
    shifts = np.arange(d - 1, -1, -1)
    return (np.asarray(index)[:, None] >> shifts) & 1


class JointPmf:
    """
    Probability mass function on {0,1}^d stored as a full table of shape (2,)*d.

    The flat index of an outcome is its binary encoding with x_1 as the most significant bit.

    Args:
        probs (ArrayLike): 2^d masses (flat) or a table of shape (2,)*d
    """
    def __init__(self, probs:ArrayLike):
        p = np.asarray(probs, dtype=float)
        if p.ndim == 1:
            d = int(round(np.log2(p.shape[0]))) if p.shape[0] > 0 else -1
            if d < 1 or 2 ** d != p.shape[0]:
                raise ValueError(f"Invalid 'probs': \n length must be a power of two 2^d with d >= 1, got {p.shape[0]}")
            p = p.reshape((2,) * d)
        elif any(s != 2 for s in p.shape):
            raise ValueError(f"Invalid 'probs': \n table must have shape (2,)*d, got {p.shape}")

        self.table = p
        self.fit_info = {}
        self._check_params()
        self.table.setflags(write=False)


    @property
    def d(self) -> int:
        return self.table.ndim

    @property
    def probs(self) -> np.ndarray:
        return self.table.reshape(-1)

    def __repr__(self):
        return f"JointPmf(d={self.d})"


    def outcomes(self) -> np.ndarray:
        """All 2^d binary vectors in flat-index order, shape (2^d, d)."""
        return _decode(np.arange(2 ** self.d), self.d)


    def marginals(self) -> np.ndarray:
        """P(X_i = 1) for each coordinate."""
        return np.array([self.table.take(1, axis=i).sum() for i in range(self.d)])


    def pair_table(self, i:int, j:int) -> np.ndarray:
        """2 x 2 joint table of (X_i, X_j), rows indexed by X_i."""
        if i == j or not (0 <= i < self.d and 0 <= j < self.d):
            raise ValueError(f"Invalid pair: \n need distinct coordinates in 0..{self.d - 1}, got ({i}, {j})")
        others = tuple(a for a in range(self.d) if a not in (i, j))
        t = self.table.sum(axis=others)
        return t if i < j else t.T


    def odds_ratio(self, i:int, j:int) -> float:
        """Cross-product ratio P11 P00 / (P10 P01) of coordinates i and j."""
        t = self.pair_table(i, j)
        denom = t[1, 0] * t[0, 1]
        if denom == 0:
            return float('inf')
        return float(t[1, 1] * t[0, 0] / denom)


    def to_measure(self) -> DiscreteMeasure:
        """The pmf as a DiscreteMeasure on {0,1}^d (zero cells dropped)."""
        return DiscreteMeasure(self.outcomes(), self.probs)


    def sum_distribution(self) -> np.ndarray:
        """Exact law of S_d = X_1 + ... + X_d as a pmf over 0..d."""
        return np.bincount(self.outcomes().sum(axis=1), weights=self.probs, minlength=self.d + 1)


    def _check_params(self):
        """
        Checks the params
        - d <= MAX_TABLE_DIM
        - finite nonnegative masses summing to 1 within MASS_TOL

        Raises:
            ValueError: the table violates one of the rules above
        """
        if self.d > MAX_TABLE_DIM:
            raise ValueError(f"Invalid 'probs': \n d={self.d} exceeds the table size guard d <= {MAX_TABLE_DIM}")
        elif not np.all(np.isfinite(self.table)) or np.any(self.table < 0):
            raise ValueError(f"Invalid 'probs': \n masses must be finite and nonnegative")
        elif abs(self.table.sum() - 1.0) > MASS_TOL:
            raise ValueError(f"Invalid 'probs': \n masses must sum to 1, got {self.table.sum()!r}")


def _check_probability(value:float, key:str, open_interval:bool = False):
    if open_interval and not 0 < value < 1:
        raise ValueError(f"Invalid '{key}': \n must lie in (0, 1), got {value!r}")
    if not 0 <= value <= 1:
        raise ValueError(f"Invalid '{key}': \n must lie in [0, 1], got {value!r}")


def _check_size(d:int, n:int):
    if d < 1:
        raise ValueError(f"Invalid 'd': \n must be a positive integer")
    if n < 1:
        raise ValueError(f"Invalid 'n': \n must be a positive integer")


def gen_independent_bernoulli(d:int, q:float, n:int, rng:np.random.Generator) -> Sample:
    """
    ``n`` rows of ``d`` independent Bernoulli(q) coordinates.
    """
    _check_size(d, n)
    _check_probability(q, 'q')
    return Sample((rng.random((n, d)) < q).astype(np.int64))


def gen_equicorrelated_bernoulli(d:int, q:float, rho:float, n:int, rng:np.random.Generator) -> Sample:
    """
    ``n`` rows with Bernoulli(q) marginals and pairwise correlation ``rho``.

    Each row shares one common draw Z ~ Bernoulli(q); coordinate i copies Z with probability sqrt(rho) and is an
    independent Bernoulli(q) draw otherwise.

    Raises:
        ValueError: rho outside [0, 1) or q outside (0, 1)
    """
    _check_size(d, n)
    _check_probability(q, 'q', open_interval=True)
    if not 0 <= rho < 1:
        raise ValueError(f"Invalid 'rho': \n must lie in [0, 1), got {rho!r}")

    z = rng.random(n) < q
    copy = rng.random((n, d)) < np.sqrt(rho)
    y = rng.random((n, d)) < q
    return Sample(np.where(copy, z[:, None], y).astype(np.int64))


def equicorrelated_joint(d:int, q:float, rho:float) -> JointPmf:
    """Exact table of the equicorrelated Bernoulli law (a two-component mixture of product tables)."""
    _check_probability(q, 'q', open_interval=True)
    if not 0 <= rho < 1:
        raise ValueError(f"Invalid 'rho': \n must lie in [0, 1), got {rho!r}")
    s = np.sqrt(rho)
    given_one = independent_joint(d, s + (1 - s) * q).table
    given_zero = independent_joint(d, (1 - s) * q).table
    table = q * given_one + (1 - q) * given_zero
    return JointPmf(table / table.sum())


def gen_correlation_classes(d:int, corr:float, n_per_class:int, rng:np.random.Generator) -> Sample:
    """
    Labelled two-class sample with Bernoulli(1/2) marginals: class 0 has independent coordinates, class 1 is
    equicorrelated with correlation ``corr``.
    """
    x0 = gen_independent_bernoulli(d, 0.5, n_per_class, rng).rows
    x1 = gen_equicorrelated_bernoulli(d, 0.5, corr, n_per_class, rng).rows
    labels = np.repeat([0, 1], n_per_class)
    return Sample(np.vstack([x0, x1]), labels)


def plackett_2x2(a:float, b:float, gamma:float) -> float:
    """
    P(X=1, Y=1) of the 2 x 2 table with margins P(X=1)=a, P(Y=1)=b and odds ratio gamma.

    Args:
        a (float): first margin in (0, 1)
        b (float): second margin in (0, 1)
        gamma (float): odds ratio, positive; ``np.inf`` gives the comonotone table

    Returns:
        float: the cell probability p11
    """
    _check_probability(a, 'a', open_interval=True)
    _check_probability(b, 'b', open_interval=True)
    if not gamma > 0:
        raise ValueError(f"Invalid 'gamma': \n must be positive, got {gamma!r}")

    if np.isinf(gamma):
        return float(min(a, b))
    if gamma == 1:
        return float(a * b)

    s = 1.0 + (a + b) * (gamma - 1.0)
    return float((s - np.sqrt(s * s - 4.0 * gamma * (gamma - 1.0) * a * b)) / (2.0 * (gamma - 1.0)))


def _pair_target(a:float, b:float, gamma:float) -> np.ndarray:
    p11 = plackett_2x2(a, b, gamma)
    return np.array([[1.0 - a - b + p11, b - p11], [a - p11, p11]])


def _margin(table:np.ndarray, axes:tuple) -> np.ndarray:
    others = tuple(a for a in range(table.ndim) if a not in axes)
    return table.sum(axis=others)


def _broadcast(factor:np.ndarray, axes:tuple, ndim:int) -> np.ndarray:
    shape = [1] * ndim
    for a in axes:
        shape[a] = 2
    return factor.reshape(shape)


def gen_odds_ratio_joint(d:int, gamma:float, ipf_iters:int = 10000, ipf_tol:float = 1e-8, q:float = 0.5) -> JointPmf:
    """
    Joint pmf on {0,1}^d with Bernoulli(q) margins and every pairwise odds ratio equal to gamma, fitted by
    iterative proportional fitting on the full 2^d table.

    Each sweep rescales the table to the univariate margins and then to each pairwise 2 x 2 target, pairs taken in
    lexicographic order. Fitting starts from the independent table and stops once the largest margin discrepancy
    falls below ``ipf_tol``.

    Args:
        d (int): dimension, 2 <= d <= 12
        gamma (float): common odds ratio, positive
        ipf_iters (int, optional): sweep cap. Defaults to 10000.
        ipf_tol (float, optional): discrepancy target. Defaults to 1e-8.
        q (float, optional): common margin. Defaults to 0.5.

    Returns:
        JointPmf: the fitted table; ``fit_info`` carries ``iterations`` and ``discrepancy``

    Raises:
        ValueError: d outside 2..12 or gamma not positive
        NumericalError: the cap was reached before convergence
    """
    if not 2 <= d <= MAX_IPF_DIM:
        raise ValueError(f"Invalid 'd': \n full-table fitting needs 2 <= d <= {MAX_IPF_DIM}, got {d}")
    if not gamma > 0 or np.isinf(gamma):
        raise ValueError(f"Invalid 'gamma': \n must be positive and finite, got {gamma!r}")
    _check_probability(q, 'q', open_interval=True)

    uni_target = np.array([1.0 - q, q])
    pair_target = _pair_target(q, q, gamma)
    pairs = list(itertools.combinations(range(d), 2))

    table = np.array(independent_joint(d, q).table)

    def discrepancy(t):
        worst = max(np.max(np.abs(_margin(t, (i,)) - uni_target)) for i in range(d))
        return max(worst, max(np.max(np.abs(_margin(t, p) - pair_target)) for p in pairs))

    disc = discrepancy(table)
    iterations = 0
    while disc >= ipf_tol:
        if iterations >= ipf_iters:
            raise NumericalError(f"gen_odds_ratio_joint: no convergence after {ipf_iters} sweeps (discrepancy {disc:.3e})", discrepancy=disc)
        for i in range(d):
            table *= _broadcast(uni_target / _margin(table, (i,)), (i,), d)
        for p in pairs:
            table *= _broadcast(pair_target / _margin(table, p), p, d)
        iterations += 1
        disc = discrepancy(table)

    logger.debug("gen_odds_ratio_joint: d=%d gamma=%g converged in %d sweeps (discrepancy %.3e)", d, gamma, iterations, disc)
    pmf = JointPmf(table / table.sum())
    pmf.fit_info = {'iterations': iterations, 'discrepancy': float(disc)}
    return pmf


def independent_joint(d:int, q:float = 0.5) -> JointPmf:
    """Product table of d independent Bernoulli(q) coordinates."""
    if d < 1:
        raise ValueError(f"Invalid 'd': \n must be a positive integer")
    _check_probability(q, 'q')
    table = reduce(np.multiply.outer, [np.array([1.0 - q, q])] * d)
    return JointPmf(np.asarray(table).reshape((2,) * d))


def random_joint(d:int, rng:np.random.Generator) -> JointPmf:
    """Joint pmf drawn uniformly from the simplex of all laws on {0,1}^d."""
    if d < 1:
        raise ValueError(f"Invalid 'd': \n must be a positive integer")
    return JointPmf(sample_simplex_uniform(2 ** d, rng))


def sample_from_pmf(pmf:JointPmf, n:int, rng:np.random.Generator) -> Sample:
    """
    ``n`` i.i.d. rows drawn from ``pmf`` by inverse-CDF lookup over the flat table.
    """
    if n < 1:
        raise ValueError(f"Invalid 'n': \n must be a positive integer")
    cdf = np.cumsum(pmf.probs)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, rng.random(n), side='right')
    idx = np.minimum(idx, cdf.shape[0] - 1)
    return Sample(_decode(idx, pmf.d))


def gen_poisson_binomial_params(d:int, gamma1:float, gamma2:float, rng:np.random.Generator) -> np.ndarray:
    """
    ``d`` i.i.d. Beta(gamma1, gamma2) success probabilities, built as G1 / (G1 + G2) from Gamma draws.
    """
    if d < 1:
        raise ValueError(f"Invalid 'd': \n must be a positive integer")
    if not gamma1 > 0 or not gamma2 > 0:
        raise ValueError(f"Invalid 'gamma1' or 'gamma2': \n both must be positive, got {gamma1!r}, {gamma2!r}")
    g1 = rng.standard_gamma(gamma1, size=d)
    g2 = rng.standard_gamma(gamma2, size=d)
    total = g1 + g2
    return np.where(total > 0, g1 / np.where(total > 0, total, 1.0), 0.5)


def gen_poisson_binomial_sum(q:ArrayLike, rng:np.random.Generator) -> int:
    """One realisation of S_d, the number of successes among independent Bernoulli(q_i)."""
    q = np.asarray(q, dtype=float)
    return int(np.count_nonzero(rng.random(q.shape[0]) < q))


def sample_simplex_uniform(m:int, rng:np.random.Generator) -> np.ndarray:
    """
    Point of the probability simplex on ``m`` cells, uniform for the normalized Lebesgue measure
    (normalized standard exponentials).
    """
    if m < 1:
        raise ValueError(f"Invalid 'm': \n must be a positive integer")
    e = rng.standard_exponential(m)
    return e / e.sum()
