# -*- coding: utf-8 -*-
"""
histogram on the line: ordered bin edges with per-bin masses
"""
import numpy as np
from numpy.typing import ArrayLike

from proj_inference.measures.discrete_measure import MASS_TOL


class Histogram:
    """
    Histogram with strictly increasing ``edges`` and nonnegative ``masses`` (one per bin).

    Mass is spread uniformly within each bin, so the quantile function of a normalized histogram is piecewise
    linear.

    Args:
        edges (ArrayLike): bin boundaries, at least two, strictly increasing
        masses (ArrayLike): per-bin masses, ``len(edges) - 1`` of them
    """
    def __init__(self, edges:ArrayLike, masses:ArrayLike):
        self.edges = np.asarray(edges, dtype=float).reshape(-1)
        self.masses = np.asarray(masses, dtype=float).reshape(-1)
        self._check_params()
        self.edges.setflags(write=False)
        self.masses.setflags(write=False)


    @classmethod
    def from_counts(cls, edges:ArrayLike, counts:ArrayLike):
        """
        Normalized histogram from raw bin counts.

        Raises:
            ValueError: all counts are zero
        """
        counts = np.asarray(counts, dtype=float)
        total = counts.sum()
        if total <= 0:
            raise ValueError(f"Invalid 'counts': \n empty histogram, total mass is zero")
        return cls(edges, counts / total)


    @property
    def n_bins(self) -> int:
        return self.masses.shape[0]

    @property
    def total(self) -> float:
        return float(self.masses.sum())

    def is_normalized(self) -> bool:
        return abs(self.total - 1.0) <= MASS_TOL

    def __repr__(self):
        return f"Histogram(n_bins={self.n_bins}, range=[{self.edges[0]:g}, {self.edges[-1]:g}])"


    def cumulative(self) -> np.ndarray:
        """
        Cumulative masses at the edges, pinned to end at exactly 1 for a normalized histogram.
        """
        c = np.concatenate([[0.0], np.cumsum(self.masses)])
        if self.is_normalized():
            c = c / c[-1]
            c[-1] = 1.0
        return c


    def quantile(self, t:ArrayLike) -> np.ndarray:
        """
        Piecewise-linear quantile function evaluated at levels ``t`` in [0, 1].
        """
        if not self.is_normalized():
            raise ValueError(f"Invalid histogram: \n quantiles need a normalized histogram")
        t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
        c = self.cumulative()
        # bins of zero mass never contain a level strictly inside them
        j = np.clip(np.searchsorted(c, t, side='left') - 1, 0, self.n_bins - 1)
        m = self.masses[j]
        width = np.diff(self.edges)[j]
        frac = np.where(m > 0, (t - c[j]) / np.where(m > 0, m, 1.0), 0.0)
        return self.edges[j] + np.clip(frac, 0.0, 1.0) * width


    def _check_params(self):
        """
        Checks the params
        - edges: at least two, finite, strictly increasing
        - masses: one per bin, finite and nonnegative

        Raises:
            ValueError: edges or masses violate one of the rules above
        """
        if self.edges.shape[0] < 2:
            raise ValueError(f"Invalid 'edges': \n need at least two bin edges")
        elif not np.all(np.isfinite(self.edges)):
            raise ValueError(f"Invalid 'edges': \n must be finite")
        elif np.any(np.diff(self.edges) <= 0):
            raise ValueError(f"Invalid 'edges': \n must be strictly increasing")

        if self.masses.shape[0] != self.edges.shape[0] - 1:
            raise ValueError(f"Invalid 'masses': \n expected {self.edges.shape[0] - 1} masses, got {self.masses.shape[0]}")
        elif not np.all(np.isfinite(self.masses)):
            raise ValueError(f"Invalid 'masses': \n must be finite")
        elif np.any(self.masses < 0):
            raise ValueError(f"Invalid 'masses': \n must be nonnegative")
