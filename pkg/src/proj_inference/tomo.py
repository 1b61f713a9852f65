# -*- coding: utf-8 -*-
"""
discrete tomography: X-rays of planar point sets, projected histograms, phantom images and the
nearest-neighbour vote over directions
"""
import logging
import math
import warnings

import numpy as np
from numpy.typing import ArrayLike

from proj_inference.errors import DataError
from proj_inference.measures import Histogram, mallows_l2_histogram
from proj_inference.measures.discrete_measure import as_points, cluster_points
from proj_inference.projections import Direction


logger = logging.getLogger(__name__)

GRID_SPACING = 0.05
BBOX = (-3.5, 3.5, -3.5, 3.5)
N_BINS = 30
BIN_MARGIN = 0.1
NEIGHBOURS = 21

CORNERS_AND_CENTRE = ((2.0, 2.0), (-2.0, 2.0), (2.0, -2.0), (-2.0, -2.0), (0.0, 0.0))


class PointSet:
    """
    Finite set of distinct points in the plane (a binary image), with the spacing of the grid it was drawn on.

    Args:
        points (ArrayLike): array of shape (n, 2); duplicates are dropped
        grid_spacing (float, optional): grid spacing h. Defaults to 0.05.
    """
    def __init__(self, points:ArrayLike, grid_spacing:float = GRID_SPACING):
        pts = as_points(points)
        if pts.shape[1] != 2:
            raise ValueError(f"Invalid 'points': \n expected planar points, got dimension {pts.shape[1]}")
        if not grid_spacing > 0:
            raise ValueError(f"Invalid 'grid_spacing': \n must be positive, got {grid_spacing!r}")
        representatives, _ = cluster_points(pts)
        self.points = pts[np.sort(representatives)]
        self.points.setflags(write=False)
        self.grid_spacing = float(grid_spacing)


    def __len__(self):
        return self.points.shape[0]

    def __repr__(self):
        return f"PointSet(n={len(self)}, h={self.grid_spacing:g})"


class PhantomConfig:
    """
    Recipe for a phantom image made of circles with random radii.

    Args:
        params (dict, optional): keys and defaults:
            - circles (list): (cx, cy, mean_radius, sd_radius) tuples. defaults to the five circles centred at
              (+-2, +-2) and (0, 0) with radius N(1, 0.1).
            - grid_spacing (float): grid spacing h. defaults to 0.05.
            - bbox (tuple): (xmin, xmax, ymin, ymax) of the grid. defaults to (-3.5, 3.5, -3.5, 3.5).
            - filled (bool): render filled disks instead of outlines. defaults to False.
    """
    def __init__(self, params:dict = None):

        if params is None:
            # set default values for params
            params = {}

        circles = params.get('circles')
        if circles is None:
            circles = [(cx, cy, 1.0, 0.1) for cx, cy in CORNERS_AND_CENTRE]

        self.circles = [tuple(float(v) for v in c) for c in circles]
        self.grid_spacing = GRID_SPACING if params.get('grid_spacing') is None else params.get('grid_spacing')
        self.bbox = BBOX if params.get('bbox') is None else tuple(params.get('bbox'))
        self.filled = False if params.get('filled') is None else params.get('filled')
        self._check_params()


    @classmethod
    def scenario(cls, scenario:int, label:int, filled:bool = False):
        """
        Preset phantoms.

        Scenario 1: class 0 is five circles of radius N(1, 0.1) at (+-2, +-2) and (0, 0); class 1 adds a circle
        at (0, 2) with radius N(0.5, 0.1). Scenario 2: class 0 as before, class 1 uses radius N(1.2, 0.1) on the
        same five centres.
        """
        if scenario not in (1, 2):
            raise ValueError(f"Invalid 'scenario': \n must be 1 or 2, got {scenario!r}")
        if label not in (0, 1):
            raise ValueError(f"Invalid 'label': \n must be 0 or 1, got {label!r}")

        circles = [(cx, cy, 1.0, 0.1) for cx, cy in CORNERS_AND_CENTRE]
        if label == 1 and scenario == 1:
            circles.append((0.0, 2.0, 0.5, 0.1))
        elif label == 1 and scenario == 2:
            circles = [(cx, cy, 1.2, 0.1) for cx, cy in CORNERS_AND_CENTRE]
        return cls({'circles': circles, 'filled': filled})


    def grid(self) -> np.ndarray:
        """Lattice points i*h inside the bounding box, shape (n, 2)."""
        h = self.grid_spacing
        xmin, xmax, ymin, ymax = self.bbox
        xs = np.arange(math.ceil(xmin / h - 1e-9), math.floor(xmax / h + 1e-9) + 1) * h
        ys = np.arange(math.ceil(ymin / h - 1e-9), math.floor(ymax / h + 1e-9) + 1) * h
        gx, gy = np.meshgrid(xs, ys, indexing='ij')
        return np.column_stack([gx.reshape(-1), gy.reshape(-1)])


    def _check_params(self):
        """
        Checks the params
        - circles: nonempty, mean_radius > 0, sd_radius >= 0
        - grid_spacing: positive
        - bbox: xmin < xmax, ymin < ymax
        - filled: bool

        Raises:
            ValueError: param outside its documented range
        """
        if len(self.circles) == 0:
            raise ValueError(f"Invalid 'circles': \n need at least one circle")
        for c in self.circles:
            if len(c) != 4:
                raise ValueError(f"Invalid 'circles': \n each circle is (cx, cy, mean_radius, sd_radius), got {c}")
            if not c[2] > 0:
                raise ValueError(f"Invalid 'circles': \n mean_radius must be positive, got {c[2]}")
            if not c[3] >= 0:
                raise ValueError(f"Invalid 'circles': \n sd_radius must be nonnegative, got {c[3]}")

        if not isinstance(self.grid_spacing, (int, float, np.number)) or not self.grid_spacing > 0:
            raise ValueError(f"Invalid 'grid_spacing': \n must be a positive number")

        if len(self.bbox) != 4 or not (self.bbox[0] < self.bbox[1] and self.bbox[2] < self.bbox[3]):
            raise ValueError(f"Invalid 'bbox': \n expected (xmin, xmax, ymin, ymax) with xmin < xmax and ymin < ymax")

        if not isinstance(self.filled, (bool, np.bool_)):
            raise ValueError(f"Invalid 'filled': \n must be a bool")


def generate_phantom(cfg:PhantomConfig, rng:np.random.Generator) -> PointSet:
    """
    Draw one phantom image.

    Each circle gets a radius from Normal(mean, sd), redrawn until positive. A grid point belongs to the image when
    it lies within h/2 of some circle outline (or inside some disk when ``cfg.filled``).

    Raises:
        ValueError: no grid point was selected
    """
    grid = cfg.grid()
    h = cfg.grid_spacing
    keep = np.zeros(grid.shape[0], dtype=bool)

    for cx, cy, mean, sd in cfg.circles:
        radius = rng.normal(mean, sd)
        while radius <= 0:
            radius = rng.normal(mean, sd)
        dist = np.hypot(grid[:, 0] - cx, grid[:, 1] - cy)
        if cfg.filled:
            keep |= dist <= radius
        else:
            keep |= np.abs(dist - radius) <= h / 2

    if not keep.any():
        raise ValueError(f"Invalid 'cfg': \n the phantom has no grid points inside the bounding box")
    return PointSet(grid[keep], grid_spacing=h)


def generate_phantom_dataset(scenario:int, n_per_class:int, rng:np.random.Generator, filled:bool = False):
    """
    ``n_per_class`` phantoms of each class of a scenario.

    Returns:
        tuple: ``(images, labels)``
    """
    if n_per_class < 1:
        raise ValueError(f"Invalid 'n_per_class': \n must be a positive integer")
    images, labels = [], []
    for label in (0, 1):
        cfg = PhantomConfig.scenario(scenario, label, filled=filled)
        images.extend(generate_phantom(cfg, rng) for _ in range(n_per_class))
        labels.extend([label] * n_per_class)
    return images, np.array(labels, dtype=np.int64)


def rotate_pointset(F:PointSet, angle:float) -> PointSet:
    """Rotate F about the origin by ``angle`` radians."""
    c, s = math.cos(angle), math.sin(angle)
    rotation = np.array([[c, -s], [s, c]])
    return PointSet(F.points @ rotation.T, grid_spacing=F.grid_spacing)


def xray_offsets(F:PointSet, u:Direction) -> np.ndarray:
    """Signed offset <p, u_perp> of each point of F, i.e. which line parallel to u it lies on."""
    return F.points @ u.perpendicular()


def xray(F:PointSet, u:Direction, offsets:ArrayLike, tol:float = 1e-9) -> np.ndarray:
    """
    X-ray of F in direction u: for each offset s, the number of points of F on the line at signed offset s.

    Args:
        F (PointSet): the image
        u (Direction): planar direction
        offsets (ArrayLike): offsets s at which to count
        tol (float, optional): a point is on the line when its offset is within tol of s. Defaults to 1e-9.

    Returns:
        np.ndarray: one count per offset
    """
    proj = xray_offsets(F, u)
    s = np.asarray(offsets, dtype=float).reshape(-1)
    return np.count_nonzero(np.abs(proj[None, :] - s[:, None]) <= tol, axis=1)


def xray_histogram(F:PointSet, u:Direction, bin_edges:ArrayLike) -> Histogram:
    """
    Normalized histogram of the offsets of F on the bins ``bin_edges``.

    Raises:
        DataError: an offset falls outside the bin range
    """
    edges = np.asarray(bin_edges, dtype=float)
    proj = xray_offsets(F, u)
    outside = (proj < edges[0]) | (proj > edges[-1])
    if outside.any():
        raise DataError(f"projected offset {proj[outside][0]:.6g} lies outside the bin range [{edges[0]:.6g}, {edges[-1]:.6g}]")
    counts, _ = np.histogram(proj, bins=edges)
    return Histogram.from_counts(edges, counts)


def shared_bin_edges(images:list, u:Direction, n_bins:int = N_BINS, margin:float = BIN_MARGIN) -> np.ndarray:
    """
    Bin edges for direction u shared by a pool of images: ``n_bins`` equal bins over the pooled offset range,
    widened by ``margin`` of the range on each side.
    """
    if n_bins < 1:
        raise ValueError(f"Invalid 'n_bins': \n must be a positive integer")
    proj = np.concatenate([xray_offsets(F, u) for F in images])
    lo, hi = float(proj.min()), float(proj.max())
    span = hi - lo if hi > lo else 1.0
    return np.linspace(lo - margin * span, hi + margin * span, n_bins + 1)


class TomoModel:
    """
    Fitted tomography classifier: shared bin edges and the training histograms for each direction.

    Attributes:
        directions (list): planar Directions
        edges (list): bin edges per direction
        histograms (list): ``histograms[j][i]`` is training image i's histogram in direction j
        labels (np.ndarray): training labels in {0, 1}
        r (int): neighbour count (odd)
    """
    def __init__(self, directions:list, edges:list, histograms:list, labels:np.ndarray, r:int):
        self.directions = directions
        self.edges = edges
        self.histograms = histograms
        self.labels = labels
        self.r = r


    @property
    def n_train(self) -> int:
        return self.labels.shape[0]

    def __repr__(self):
        return f"TomoModel(n_train={self.n_train}, n_directions={len(self.directions)}, r={self.r})"


def fit_tomo(images:list, labels:ArrayLike, directions:list, bins:int = N_BINS, r:int = NEIGHBOURS) -> TomoModel:
    """
    Store per-direction histograms of every training image.

    An even ``r`` is raised to the next odd number with a warning.

    Raises:
        ValueError: labels are not binary, lengths differ, or r >= number of training images
    """
    labels = np.asarray(labels).reshape(-1)
    if labels.shape[0] != len(images) or len(images) == 0:
        raise ValueError(f"Invalid 'labels': \n expected one label per image")
    if not np.all(np.isin(labels, (0, 1))):
        raise ValueError(f"Invalid 'labels': \n must be binary (0 or 1)")
    if len(directions) == 0:
        raise ValueError(f"Invalid 'directions': \n need at least one direction")
    if r < 1:
        raise ValueError(f"Invalid 'r': \n must be a positive integer")
    if r % 2 == 0:
        warnings.warn(f"neighbour count r={r} is even, using r={r + 1}", UserWarning)
        r += 1
    if r >= len(images):
        raise ValueError(f"Invalid 'r': \n r={r} must be smaller than the number of training images ({len(images)})")

    edges, histograms = [], []
    for u in directions:
        e = shared_bin_edges(images, u, bins)
        edges.append(e)
        histograms.append([xray_histogram(F, u, e) for F in images])

    logger.debug("fit_tomo: %d images, %d directions, r=%d", len(images), len(directions), r)
    return TomoModel(list(directions), edges, histograms, labels.astype(np.int64), r)


def direction_votes(model:TomoModel, F:PointSet) -> np.ndarray:
    """
    Majority label among the r nearest training histograms (Mallows L2), one vote per direction.
    Among training histograms at equal distance, label 0 comes first, so votes do not depend on training order.
    """
    votes = np.empty(len(model.directions), dtype=np.int64)
    for j, u in enumerate(model.directions):
        e = np.array(model.edges[j])
        proj = xray_offsets(F, u)
        e[0] = min(e[0], float(proj.min()))
        e[-1] = max(e[-1], float(proj.max()))
        h = xray_histogram(F, u, e)

        dist = np.array([mallows_l2_histogram(h, t) for t in model.histograms[j]])
        nearest = np.lexsort((model.labels, dist))[:model.r]
        votes[j] = int(model.labels[nearest].mean() > 0.5)
    return votes


def tomo_predict(model:TomoModel, F:PointSet) -> int:
    """Label 1 when the mean of the per-direction votes is at least 1/2, else 0."""
    return int(direction_votes(model, F).mean() >= 0.5)
