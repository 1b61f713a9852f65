# -*- coding: utf-8 -*-
"""
Wasserstein-1 distances
"""
import numpy as np
import ot
from numpy.typing import ArrayLike
from scipy.stats import wasserstein_distance

from proj_inference.measures.base_distance import BaseDistance
from proj_inference.measures.discrete_measure import DiscreteMeasure


class W1Distance(BaseDistance):
    """
    Wasserstein-1 distance between measures on the line, the integral over t in (0, 1) of |F^-1(t) - G^-1(t)|.

    Computed exactly from the step distribution functions.
    """
    def __init__(self):
        self.name = 'w1'


    def __call__(self, P:DiscreteMeasure, Q:DiscreteMeasure) -> float:
        self._check_measures(P, Q, one_dimensional=True)
        return float(wasserstein_distance(P.points[:, 0], Q.points[:, 0], u_weights=P.weights, v_weights=Q.weights))


    def add_point_distances(self, P:DiscreteMeasure, y:ArrayLike, n:int) -> np.ndarray:
        """E_P|X - y| / (n + 1) per candidate y."""
        self._check_augmentation(P, n)
        self._check_measures(P, P, one_dimensional=True)
        atoms, masses, cumulative, y, _, upto = P.line_augmentation(y)
        moments = np.concatenate([[0.0], np.cumsum(masses * atoms)])
        lower = y * cumulative[upto] - moments[upto]
        upper = (moments[-1] - moments[upto]) - y * (cumulative[-1] - cumulative[upto])
        return np.maximum(lower + upper, 0.0) / (n + 1)


class TransportDistance(BaseDistance):
    """
    Wasserstein-1 distance between finitely supported measures in R^d with Euclidean ground cost,
    solved exactly as a transport linear program (network simplex).
    """
    def __init__(self):
        self.name = 'transport'


    def __call__(self, P:DiscreteMeasure, Q:DiscreteMeasure) -> float:
        self._check_measures(P, Q)
        cost = ot.dist(P.points, Q.points, metric='euclidean')
        a = np.ascontiguousarray(P.weights, dtype=np.float64)
        b = np.ascontiguousarray(Q.weights, dtype=np.float64)
        return float(ot.emd2(a, b, cost))


def w1_distance_1d(P:DiscreteMeasure, Q:DiscreteMeasure) -> float:
    """Wasserstein-1 distance between one-dimensional measures."""
    return W1Distance()(P, Q)


def transport_distance(P:DiscreteMeasure, Q:DiscreteMeasure) -> float:
    """Wasserstein-1 distance between measures in R^d (Euclidean ground cost)."""
    return TransportDistance()(P, Q)
