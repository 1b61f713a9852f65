# -*- coding: utf-8 -*-
"""
total variation distance
"""
import numpy as np
from numpy.typing import ArrayLike

from proj_inference.measures.base_distance import BaseDistance
from proj_inference.measures.discrete_measure import DiscreteMeasure, align_measures


class TVDistance(BaseDistance):
    """
    Total variation distance between finitely supported measures of any dimension:
    half the L1 distance between the mass functions over the union of the supports.
    """
    def __init__(self):
        self.name = 'tv'


    def __call__(self, P:DiscreteMeasure, Q:DiscreteMeasure) -> float:
        """
        Args:
            P (DiscreteMeasure): first measure
            Q (DiscreteMeasure): second measure, same dimension as P

        Returns:
            float: distance in [0, 1]
        """
        self._check_measures(P, Q)
        _, p, q = align_measures(P, Q)
        return float(min(0.5 * np.abs(p - q).sum(), 1.0))


    def add_point_distances(self, P:DiscreteMeasure, y:ArrayLike, n:int) -> np.ndarray:
        """(1 - P({y})) / (n + 1) per candidate y; measures of dimension above 1 use the generic loop."""
        self._check_augmentation(P, n)
        if P.dim != 1:
            return super().add_point_distances(P, y, n)
        _, _, cumulative, _, below, upto = P.line_augmentation(y)
        return np.clip((1.0 - (cumulative[upto] - cumulative[below])) / (n + 1), 0.0, 1.0)


def tv_distance(P:DiscreteMeasure, Q:DiscreteMeasure) -> float:
    """Total variation distance (1/2) sum_x |P({x}) - Q({x})|."""
    return TVDistance()(P, Q)
