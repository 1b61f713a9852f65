# -*- coding: utf-8 -*-
"""
base distance class
"""
import numpy as np
from numpy.typing import ArrayLike

from proj_inference.measures.discrete_measure import DiscreteMeasure
from proj_inference.measures.histogram import Histogram


class BaseDistance:
    """
    BaseDistance
    ------------

    Parent of every distance between measures. Subclasses set ``name`` and implement ``__call__(P, Q)``.
    """
    def __init__(self):

        self.name = 'base_distance'


    def __call__(self, P, Q) -> float:

        raise NotImplementedError(f"'{self.name}' does not implement __call__")

    def __repr__(self):
        return f"{type(self).__name__}()"

    def add_point_distances(self, P:DiscreteMeasure, y:ArrayLike, n:int) -> np.ndarray:
        """
        Distance between P and its add-one-point augmentation P.add_point(y_i, n), for every candidate y_i.

        Subclasses replace this loop with closed forms on the line.

        Args:
            P (DiscreteMeasure): empirical measure of ``n`` observations
            y (ArrayLike): candidate points, shape (c, d); a 1-D input is read as c points on the line
            n (int): number of observations behind P

        Returns:
            np.ndarray: one distance per candidate
        """
        self._check_augmentation(P, n)
        points = np.asarray(y, dtype=float).reshape(-1, P.dim)
        return np.array([self(P, P.add_point(point, n)) for point in points], dtype=float)

    def _check_measures(self, P, Q, one_dimensional:bool = False):
        """
        Check that P and Q are discrete measures of a common dimension

        Args:
            P (DiscreteMeasure): first measure
            Q (DiscreteMeasure): second measure
            one_dimensional (bool, optional): also require dimension 1. Defaults to False.

        Raises:
            ValueError: 'P' or 'Q' is not a DiscreteMeasure
            ValueError: dimension mismatch, or a measure is not one-dimensional when required
        """
        for key, m in (('P', P), ('Q', Q)):
            if not isinstance(m, DiscreteMeasure):
                raise ValueError(f"Invalid '{key}': \n must be a DiscreteMeasure, got {type(m).__name__}")

        if P.dim != Q.dim:
            raise ValueError(f"Invalid 'Q': \n dimension mismatch, P has dimension {P.dim} and Q has dimension {Q.dim}")

        if one_dimensional and P.dim != 1:
            raise ValueError(f"Invalid 'P': \n '{self.name}' needs one-dimensional measures, got dimension {P.dim}")

    def _check_augmentation(self, P, n:int):
        if not isinstance(P, DiscreteMeasure):
            raise ValueError(f"Invalid 'P': \n must be a DiscreteMeasure, got {type(P).__name__}")
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"Invalid 'n': \n must be a positive integer")

    def _check_histograms(self, h1, h2):
        """
        Check that h1 and h2 are normalized histograms

        Raises:
            ValueError: not a Histogram, or empty / not normalized
        """
        for key, h in (('h1', h1), ('h2', h2)):
            if not isinstance(h, Histogram):
                raise ValueError(f"Invalid '{key}': \n must be a Histogram, got {type(h).__name__}")
            if h.total <= 0:
                raise ValueError(f"Invalid '{key}': \n empty histogram, total mass is zero")
            if not h.is_normalized():
                raise ValueError(f"Invalid '{key}': \n histogram must be normalized, total mass is {h.total!r}")
