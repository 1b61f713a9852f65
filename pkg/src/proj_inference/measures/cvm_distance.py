# -*- coding: utf-8 -*-
"""
Cramer-von Mises distance
"""
import numpy as np
from numpy.typing import ArrayLike

from proj_inference.measures.base_distance import BaseDistance
from proj_inference.measures.discrete_measure import DiscreteMeasure, align_measures


class CvMDistance(BaseDistance):
    """
    Cramer-von Mises distance between measures on the line: the squared gap between the distribution functions,
    summed over the union of the supports and weighted by the pooled jump (p + q) / 2 at each atom.
    """
    def __init__(self):
        self.name = 'cvm'


    def __call__(self, P:DiscreteMeasure, Q:DiscreteMeasure) -> float:
        self._check_measures(P, Q, one_dimensional=True)
        _, p, q = align_measures(P, Q)
        gap = np.cumsum(p) - np.cumsum(q)
        return float(np.sum(gap ** 2 * 0.5 * (p + q)))


    def add_point_distances(self, P:DiscreteMeasure, y:ArrayLike, n:int) -> np.ndarray:
        """
        Closed form of the add-one-point distance from prefix sums over the sorted atoms of P.

        With e = 1/(n+1) the gap is e F(a) below y, e (1 - F(a)) above it, and the atoms of P keep the pooled
        weight (1 - e/2) P({a}); y itself carries ((2 - e) P({y}) + e) / 2.
        """
        self._check_augmentation(P, n)
        self._check_measures(P, P, one_dimensional=True)
        _, masses, cumulative, _, below, upto = P.line_augmentation(y)
        e = 1.0 / (n + 1)
        F = cumulative[1:]
        left = np.concatenate([[0.0], np.cumsum(masses * F ** 2)])
        right = np.concatenate([[0.0], np.cumsum(masses * (1.0 - F) ** 2)])
        hit = cumulative[upto] - cumulative[below]
        others = (1.0 - 0.5 * e) * (left[below] + right[-1] - right[upto])
        at_y = 0.5 * ((2.0 - e) * hit + e) * (1.0 - cumulative[upto]) ** 2
        return e ** 2 * (others + at_y)


def cvm_distance_1d(P:DiscreteMeasure, Q:DiscreteMeasure) -> float:
    """Cramer-von Mises distance between one-dimensional measures."""
    return CvMDistance()(P, Q)
