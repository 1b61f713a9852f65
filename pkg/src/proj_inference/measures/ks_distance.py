# -*- coding: utf-8 -*-
"""
Kolmogorov distance
"""
import numpy as np
from numpy.typing import ArrayLike

from proj_inference.measures.base_distance import BaseDistance
from proj_inference.measures.discrete_measure import DiscreteMeasure, align_measures


class KSDistance(BaseDistance):
    """
    Kolmogorov distance sup_x |F_P(x) - F_Q(x)| between measures on the line.

    Both distribution functions are right-continuous steps, so the supremum is attained at an atom.
    """
    def __init__(self):
        self.name = 'ks'


    def __call__(self, P:DiscreteMeasure, Q:DiscreteMeasure) -> float:
        self._check_measures(P, Q, one_dimensional=True)
        _, p, q = align_measures(P, Q)
        gap = np.abs(np.cumsum(p) - np.cumsum(q))
        return float(min(gap.max(), 1.0))


    def add_point_distances(self, P:DiscreteMeasure, y:ArrayLike, n:int) -> np.ndarray:
        """
        max(F(y-), 1 - F(y)) / (n + 1) per candidate y: the augmentation shifts the distribution function by
        (1[t >= y] - F(t)) / (n + 1).
        """
        self._check_augmentation(P, n)
        self._check_measures(P, P, one_dimensional=True)
        _, _, cumulative, _, below, upto = P.line_augmentation(y)
        return np.minimum(np.maximum(cumulative[below], 1.0 - cumulative[upto]) / (n + 1), 1.0)


def ks_distance_1d(P:DiscreteMeasure, Q:DiscreteMeasure) -> float:
    """Kolmogorov distance between one-dimensional measures."""
    return KSDistance()(P, Q)
