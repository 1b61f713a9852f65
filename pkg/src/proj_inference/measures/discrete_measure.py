# -*- coding: utf-8 -*-
"""
finitely supported probability measures and samples
"""
import numpy as np
from numpy.typing import ArrayLike
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree


# points closer than this in sup-norm are one atom
MERGE_TOL = 1e-9

# allowed deviation of the total mass from 1
MASS_TOL = 1e-12


def as_points(x:ArrayLike, key:str = 'points') -> np.ndarray:
    """
    Convert array-like input to a 2-D float array of shape (n, d).

    A 1-D input is read as n points of dimension 1.

    Raises:
        ValueError: x is not numeric, is empty, has more than 2 dimensions or holds non-finite values
    """
    if not isinstance(x, (list, tuple, np.ndarray)):
        raise ValueError(f"Invalid '{key}': \n must be array-like (list, tuple, np.ndarray)")

    arr = np.asarray(x)
    if not np.issubdtype(arr.dtype, np.number):
        raise ValueError(f"Invalid '{key}': \n must contain numeric values")

    arr = arr.astype(float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    elif arr.ndim != 2:
        raise ValueError(f"Invalid '{key}': \n must be a 1-D or 2-D array, got {arr.ndim} dimensions")

    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"Invalid '{key}': \n must not be empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"Invalid '{key}': \n all coordinates must be finite")
    return arr


def as_point(x:ArrayLike, dim:int, key:str = 'x') -> np.ndarray:
    """
    Convert a single point to a 1-D float array of length ``dim``.

    Raises:
        ValueError: wrong length or non-finite coordinates
    """
    arr = np.asarray(x, dtype=float).reshape(-1)
    if arr.shape[0] != dim:
        raise ValueError(f"Invalid '{key}': \n dimension mismatch, expected {dim} coordinates, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"Invalid '{key}': \n all coordinates must be finite")
    return arr


def cluster_points(points:np.ndarray, tol:float = MERGE_TOL):
    """
    Group points lying within ``tol`` of each other (sup-norm, transitively).

    Args:
        points (np.ndarray): array of shape (n, d)
        tol (float, optional): merge tolerance. Defaults to MERGE_TOL.

    Returns:
        tuple: ``(representatives, labels)``. ``representatives[g]`` is the index of the first occurrence of
        group ``g``; groups are numbered in order of first occurrence and ``labels[i]`` is the group of row ``i``.
    """
    n, d = points.shape

    if d == 1:
        x = points[:, 0]
        order = np.argsort(x, kind='stable')
        new_group = np.empty(n, dtype=bool)
        new_group[0] = True
        new_group[1:] = np.diff(x[order]) > tol
        raw_labels = np.empty(n, dtype=np.int64)
        raw_labels[order] = np.cumsum(new_group) - 1
    else:
        _, first, inverse = np.unique(points, axis=0, return_index=True, return_inverse=True)
        inverse = inverse.reshape(-1)
        uniq = points[first]
        pairs = cKDTree(uniq).query_pairs(r=tol, p=np.inf, output_type='ndarray')
        if len(pairs) > 0:
            m = uniq.shape[0]
            graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(m, m))
            _, components = connected_components(graph, directed=False)
            raw_labels = components[inverse]
        else:
            raw_labels = inverse

    n_groups = int(raw_labels.max()) + 1
    first_index = np.full(n_groups, n, dtype=np.int64)
    np.minimum.at(first_index, raw_labels, np.arange(n))

    group_order = np.argsort(first_index, kind='stable')
    relabel = np.empty(n_groups, dtype=np.int64)
    relabel[group_order] = np.arange(n_groups)
    return first_index[group_order], relabel[raw_labels]


class DiscreteMeasure:
    """
    Finitely supported probability measure on R^d.

    Atoms closer than ``merge_tol`` (sup-norm) are merged into one atom located at the first occurrence, and atoms
    with zero mass are dropped. Instances are immutable.

    Args:
        points (ArrayLike): support points, shape (n, d); a 1-D input is read as n points on the line
        weights (ArrayLike, optional): nonnegative masses summing to 1. Defaults to uniform weights.
        merge_tol (float, optional): merge tolerance. Defaults to MERGE_TOL.
    """
    def __init__(self, points:ArrayLike, weights:ArrayLike = None, merge_tol:float = MERGE_TOL):
        pts = as_points(points)

        if weights is None:
            w = np.full(pts.shape[0], 1.0 / pts.shape[0])
        else:
            w = np.asarray(weights, dtype=float).reshape(-1)

        self._check_weights(w, pts.shape[0])

        keep = w > 0
        pts, w = pts[keep], w[keep]
        representatives, labels = cluster_points(pts, merge_tol)
        merged = np.bincount(labels, weights=w)
        self._set(pts[representatives], merged / merged.sum())


    @classmethod
    def from_counts(cls, points:ArrayLike, counts:ArrayLike, merge_tol:float = MERGE_TOL):
        """Measure with masses proportional to ``counts``."""
        c = np.asarray(counts, dtype=float).reshape(-1)
        if c.size == 0 or np.any(c < 0) or c.sum() <= 0:
            raise ValueError(f"Invalid 'counts': \n must be nonnegative with a positive total")
        return cls(points, c / c.sum(), merge_tol=merge_tol)


    @classmethod
    def point_mass(cls, x:ArrayLike):
        """Dirac mass at ``x``."""
        return cls(np.asarray(x, dtype=float).reshape(1, -1), [1.0])


    @classmethod
    def _from_canonical(cls, points:np.ndarray, weights:np.ndarray):
        # caller guarantees distinct points and positive normalized weights
        obj = cls.__new__(cls)
        obj._set(points, weights)
        return obj


    def _set(self, points, weights):
        self._points = np.array(points, dtype=float)
        self._weights = np.array(weights, dtype=float)
        self._points.setflags(write=False)
        self._weights.setflags(write=False)


    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    @property
    def n_atoms(self) -> int:
        return self._points.shape[0]

    def __len__(self):
        return self.n_atoms

    def __repr__(self):
        return f"DiscreteMeasure(n_atoms={self.n_atoms}, dim={self.dim})"


    def mass_at(self, x:ArrayLike, tol:float = MERGE_TOL) -> float:
        """
        Mass of the atom at ``x`` (0 if ``x`` is not in the support).
        """
        point = as_point(x, self.dim)
        hit = np.max(np.abs(self._points - point), axis=1) <= tol
        return float(self._weights[hit].sum())


    def add_point(self, x:ArrayLike, n:int, tol:float = MERGE_TOL):
        """
        Add-one-point augmentation: treat this measure as the empirical measure of ``n`` observations and add
        ``x`` as observation ``n + 1``.

        Existing masses are rescaled by n/(n+1) and ``x`` receives 1/(n+1).

        Args:
            x (ArrayLike): the new point
            n (int): number of observations behind this measure

        Returns:
            DiscreteMeasure: the augmented measure
        """
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"Invalid 'n': \n must be a positive integer")

        point = as_point(x, self.dim)
        w_new = 1.0 / (n + 1)
        weights = self._weights * (n / (n + 1))
        hit = np.flatnonzero(np.max(np.abs(self._points - point), axis=1) <= tol)

        if hit.size > 0:
            weights = weights.copy()
            weights[hit[0]] += w_new
            return DiscreteMeasure._from_canonical(self._points, weights)

        points = np.vstack([self._points, point])
        return DiscreteMeasure._from_canonical(points, np.append(weights, w_new))


    def sample(self, n:int, rng:np.random.Generator) -> np.ndarray:
        """
        Draw ``n`` i.i.d. points.

        Returns:
            np.ndarray: array of shape (n, d)
        """
        idx = rng.choice(self.n_atoms, size=n, p=self._weights)
        return self._points[idx]


    def sorted_line(self):
        """
        Atoms and masses of a 1-D measure in increasing order.

        Raises:
            ValueError: the measure is not one-dimensional
        """
        if self.dim != 1:
            raise ValueError(f"Invalid measure: \n expected a one-dimensional measure, got dimension {self.dim}")
        order = np.argsort(self._points[:, 0], kind='stable')
        return self._points[order, 0], self._weights[order]


    def cdf(self, x:ArrayLike) -> np.ndarray:
        """Right-continuous distribution function of a 1-D measure evaluated at ``x``."""
        atoms, masses = self.sorted_line()
        cumulative = np.concatenate([[0.0], np.cumsum(masses)])
        idx = np.searchsorted(atoms, np.asarray(x, dtype=float), side='right')
        return cumulative[idx]


    def line_augmentation(self, y:ArrayLike, tol:float = MERGE_TOL):
        """
        Step profile of a 1-D measure against candidate new points ``y``, as used by the add-one-point distances.

        A candidate within ``tol`` of an atom is moved onto that atom, the way ``add_point`` merges it.

        Returns:
            tuple: ``(atoms, masses, cumulative, y, below, upto)`` with sorted atoms and masses, cumulative masses
            (leading 0), the snapped candidates, and per candidate the number of atoms strictly below it and at
            most equal to it
        """
        atoms, masses = self.sorted_line()
        y = np.asarray(y, dtype=float).reshape(-1)
        m = atoms.shape[0]
        pos = np.searchsorted(atoms, y)
        lower = atoms[np.clip(pos - 1, 0, m - 1)]
        upper = atoms[np.clip(pos, 0, m - 1)]
        nearest = np.where(np.abs(lower - y) <= np.abs(upper - y), lower, upper)
        y = np.where(np.abs(nearest - y) <= tol, nearest, y)

        cumulative = np.concatenate([[0.0], np.cumsum(masses)])
        below = np.searchsorted(atoms, y, side='left')
        upto = np.searchsorted(atoms, y, side='right')
        return atoms, masses, cumulative, y, below, upto


    @staticmethod
    def _check_weights(w:np.ndarray, n:int):
        """
        Checks the weights
        - one weight per point
        - finite and nonnegative
        - sum to 1 within MASS_TOL

        Raises:
            ValueError: weights violate one of the rules above
        """
        if w.shape[0] != n:
            raise ValueError(f"Invalid 'weights': \n expected {n} weights, got {w.shape[0]}")
        elif not np.all(np.isfinite(w)):
            raise ValueError(f"Invalid 'weights': \n must be finite")
        elif np.any(w < 0):
            raise ValueError(f"Invalid 'weights': \n must be nonnegative")
        elif abs(w.sum() - 1.0) > MASS_TOL:
            raise ValueError(f"Invalid 'weights': \n must sum to 1, got {w.sum()!r}")


class Sample:
    """
    Observations of common dimension, optionally labelled with class indices 0..m-1.

    Args:
        rows (ArrayLike): observations, shape (n, d); a 1-D input is read as n scalar observations
        labels (ArrayLike, optional): one integer class index per row. Defaults to None.
    """
    def __init__(self, rows:ArrayLike, labels:ArrayLike = None):
        self.rows = as_points(rows, key='rows')
        self.rows.setflags(write=False)

        if labels is None:
            self.labels = None
        else:
            self.labels = self._check_labels(labels, self.rows.shape[0])
            self.labels.setflags(write=False)


    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    @property
    def has_labels(self) -> bool:
        return self.labels is not None

    @property
    def n_classes(self) -> int:
        self._require_labels()
        return int(self.labels.max()) + 1

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Sample(n={self.n}, dim={self.dim}, labelled={self.has_labels})"


    def subset(self, idx:ArrayLike):
        """Sample restricted to the rows ``idx`` (order preserved)."""
        idx = np.asarray(idx)
        labels = None if self.labels is None else self.labels[idx]
        return Sample(self.rows[idx], labels)


    def class_rows(self, label:int) -> np.ndarray:
        """Rows carrying ``label``."""
        self._require_labels()
        return self.rows[self.labels == label]


    def class_counts(self) -> np.ndarray:
        """Number of rows per class 0..m-1."""
        self._require_labels()
        return np.bincount(self.labels, minlength=self.n_classes)


    def _require_labels(self):
        if self.labels is None:
            raise ValueError(f"Invalid sample: \n labels are required")


    @staticmethod
    def _check_labels(labels:ArrayLike, n:int) -> np.ndarray:
        """
        Checks the labels
        - one label per row
        - integer valued and nonnegative

        Raises:
            ValueError: labels violate one of the rules above
        """
        arr = np.asarray(labels).reshape(-1)
        if arr.shape[0] != n:
            raise ValueError(f"Invalid 'labels': \n expected {n} labels, got {arr.shape[0]}")
        if not np.issubdtype(arr.dtype, np.number):
            raise ValueError(f"Invalid 'labels': \n must contain numeric values")
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError(f"Invalid 'labels': \n must be integer class indices")
        arr = arr.astype(np.int64)
        if np.any(arr < 0):
            raise ValueError(f"Invalid 'labels': \n must be nonnegative class indices")
        return arr


def empirical_measure(s:Sample, merge_tol:float = MERGE_TOL) -> DiscreteMeasure:
    """
    Empirical measure of a sample: distinct rows with mass count/n.

    Args:
        s (Sample): nonempty sample
        merge_tol (float, optional): rows within this sup-norm distance are one atom. Defaults to MERGE_TOL.

    Returns:
        DiscreteMeasure: the empirical measure
    """
    if not isinstance(s, Sample):
        raise ValueError(f"Invalid 's': \n must be a Sample")
    return DiscreteMeasure(s.rows, np.full(s.n, 1.0 / s.n), merge_tol=merge_tol)


def align_measures(P:DiscreteMeasure, Q:DiscreteMeasure, merge_tol:float = MERGE_TOL):
    """
    Express two measures on the union of their supports.

    Returns:
        tuple: ``(support, p, q)`` where ``p[i]`` and ``q[i]`` are the masses at ``support[i]``.
        One-dimensional supports are returned in increasing order.

    Raises:
        ValueError: dimension mismatch
    """
    if P.dim != Q.dim:
        raise ValueError(f"Invalid 'Q': \n dimension mismatch, P has dimension {P.dim} and Q has dimension {Q.dim}")

    pts = np.vstack([P.points, Q.points])
    representatives, labels = cluster_points(pts, merge_tol)
    n_groups = representatives.shape[0]
    p = np.bincount(labels[:P.n_atoms], weights=P.weights, minlength=n_groups)
    q = np.bincount(labels[P.n_atoms:], weights=Q.weights, minlength=n_groups)
    support = pts[representatives]

    if P.dim == 1:
        order = np.argsort(support[:, 0], kind='stable')
        support, p, q = support[order], p[order], q[order]
    return support, p, q
