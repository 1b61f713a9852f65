# -*- coding: utf-8 -*-
"""
Mallows L2 distance between histograms
"""
import numpy as np

from proj_inference.measures.base_distance import BaseDistance
from proj_inference.measures.histogram import Histogram


class MallowsL2Distance(BaseDistance):
    """
    Mallows L2 distance between two normalized histograms: the L2 norm of the difference of their quantile
    functions over (0, 1).

    Mass is uniform inside each bin, so both quantile functions are linear between consecutive cumulative-mass
    breakpoints. On the common refinement of the two breakpoint sets the integrand is a quadratic and is
    integrated in closed form.
    """
    def __init__(self):
        self.name = 'mallows_l2'


    def __call__(self, h1:Histogram, h2:Histogram) -> float:
        """
        Args:
            h1 (Histogram): normalized histogram
            h2 (Histogram): normalized histogram

        Returns:
            float: the distance

        Raises:
            ValueError: a histogram is empty or not normalized
        """
        self._check_histograms(h1, h2)

        c1, c2 = h1.cumulative(), h2.cumulative()
        t = np.union1d(c1, c2)
        left, right = t[:-1], t[1:]
        length = right - left
        keep = length > 0
        left, length = left[keep], length[keep]
        mid = left + 0.5 * length

        a1, s1 = self._linear_piece(h1, c1, left, mid)
        a2, s2 = self._linear_piece(h2, c2, left, mid)

        # integral of (alpha + beta * s)^2 over s in [0, length]
        alpha = a1 - a2
        beta = s1 - s2
        total = np.sum(alpha ** 2 * length + alpha * beta * length ** 2 + beta ** 2 * length ** 3 / 3.0)
        return float(np.sqrt(max(total, 0.0)))


    @staticmethod
    def _linear_piece(h:Histogram, c:np.ndarray, left:np.ndarray, mid:np.ndarray):
        """Value at ``left`` and slope of the quantile function on each refinement piece."""
        j = np.clip(np.searchsorted(c, mid, side='right') - 1, 0, h.n_bins - 1)
        slope = np.diff(h.edges)[j] / h.masses[j]
        value = h.edges[j] + (left - c[j]) * slope
        return value, slope


def mallows_l2_histogram(h1:Histogram, h2:Histogram) -> float:
    """Mallows L2 distance between normalized histograms."""
    return MallowsL2Distance()(h1, h2)
