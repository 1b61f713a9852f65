# -*- coding: utf-8 -*-
"""
classification from one-dimensional projections and plug-in rules on binary data
"""
import logging

import numpy as np
from numpy.typing import ArrayLike

from proj_inference.measures import BaseDistance, DiscreteMeasure, Sample, empirical_measure, get_distance, tv_distance, DISTANCES
from proj_inference.measures.discrete_measure import as_point
from proj_inference.projections import Direction, random_directions


logger = logging.getLogger(__name__)

RULES = ('rp', 'addpoint_tv', 'plugin')


def _class_counts(train:Sample) -> np.ndarray:
    if not isinstance(train, Sample) or not train.has_labels:
        raise ValueError(f"Invalid 'train': \n must be a labelled Sample")
    counts = train.class_counts()
    empty = np.flatnonzero(counts == 0)
    if empty.size > 0:
        raise ValueError(f"Invalid 'train': \n class {int(empty[0])} has no training points")
    return counts


class RPClassifierModel:
    """
    Fitted projection classifier: for every class l and direction u_j, the empirical measure of the projected
    training points of class l.

    Attributes:
        directions (list): the k+1 directions
        per_class_proj (list): ``per_class_proj[l][j]`` is a one-dimensional DiscreteMeasure
        class_counts (np.ndarray): n_l per class
        priors (np.ndarray): n_l / n
        distance_kind (str): key of the distance used by the rule
    """
    def __init__(self, directions:list, per_class_proj:list, class_counts:np.ndarray, distance_kind:str):
        self.directions = list(directions)
        self.basis = np.hstack([u.basis for u in self.directions])
        self.per_class_proj = per_class_proj
        self.class_counts = np.asarray(class_counts, dtype=np.int64)
        self.priors = self.class_counts / self.class_counts.sum()
        self.distance_kind = distance_kind
        self.distance = get_distance(distance_kind)


    @property
    def n_classes(self) -> int:
        return self.class_counts.shape[0]

    @property
    def n_directions(self) -> int:
        return len(self.directions)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __repr__(self):
        return f"RPClassifierModel(n_classes={self.n_classes}, n_directions={self.n_directions}, distance={self.distance_kind!r})"


    def restrict(self, k:int):
        """Model using only the first ``k`` directions."""
        if not 1 <= k <= self.n_directions:
            raise ValueError(f"Invalid 'k': \n need 1 <= k <= {self.n_directions}, got {k}")
        per_class = [measures[:k] for measures in self.per_class_proj]
        return RPClassifierModel(self.directions[:k], per_class, self.class_counts, self.distance_kind)


class FullModel:
    """
    Fitted plug-in model: empirical measure of the raw training points of each class and the class priors.
    """
    def __init__(self, per_class_full:list, class_counts:np.ndarray):
        self.per_class_full = per_class_full
        self.class_counts = np.asarray(class_counts, dtype=np.int64)
        self.priors = self.class_counts / self.class_counts.sum()


    @property
    def n_classes(self) -> int:
        return self.class_counts.shape[0]

    @property
    def dim(self) -> int:
        return self.per_class_full[0].dim

    def __repr__(self):
        return f"FullModel(n_classes={self.n_classes}, dim={self.dim})"


def fit_rp(train:Sample, directions:list, distance_kind:str = 'w1') -> RPClassifierModel:
    """
    Fit the projection classifier.

    Args:
        train (Sample): labelled training sample, labels in 0..m-1
        directions (list): Directions in R^d
        distance_kind (str, optional): one of 'w1', 'ks', 'cvm', 'tv'. Defaults to 'w1'.

    Returns:
        RPClassifierModel: the fitted model

    Raises:
        ValueError: a class has no training points, or directions do not match the data dimension
    """
    counts = _class_counts(train)
    get_distance(distance_kind)
    if len(directions) == 0:
        raise ValueError(f"Invalid 'directions': \n need at least one direction")
    for u in directions:
        if not isinstance(u, Direction) or u.ambient_dim != train.dim:
            raise ValueError(f"Invalid 'directions': \n every element must be a Direction in R^{train.dim}")

    basis = np.hstack([u.basis for u in directions])
    per_class = []
    for label in range(counts.shape[0]):
        projected = train.class_rows(label) @ basis
        n_l = projected.shape[0]
        per_class.append([DiscreteMeasure(projected[:, j], np.full(n_l, 1.0 / n_l)) for j in range(basis.shape[1])])

    logger.debug("fit_rp: %d classes, %d directions, distance=%s", counts.shape[0], len(directions), distance_kind)
    return RPClassifierModel(directions, per_class, counts, distance_kind)


def direction_scores(model:RPClassifierModel, X:ArrayLike) -> np.ndarray:
    """
    Add-one-point distances d(P_{l,j}, P_{l,j} with pi_j(x) added) for every row x of ``X``, class l and
    direction j.

    Returns:
        np.ndarray: array of shape (n_rows, n_classes, n_directions)
    """
    rows = np.asarray(X, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != model.dim:
        raise ValueError(f"Invalid 'X': \n expected rows of dimension {model.dim}, got shape {rows.shape}")
    projected = rows @ model.basis
    scores = np.empty((rows.shape[0], model.n_classes, model.n_directions))
    for label, measures in enumerate(model.per_class_proj):
        n_l = int(model.class_counts[label])
        for j, P in enumerate(measures):
            scores[:, label, j] = model.distance.add_point_distances(P, projected[:, j], n_l)
    return scores


def add_point_scores(model:RPClassifierModel, x:ArrayLike) -> np.ndarray:
    """
    d_b(l) = max over directions j of d(P_{l,j}, P_{l,j} with pi_j(x) added), one value per class.
    """
    point = as_point(x, model.dim)
    return direction_scores(model, point.reshape(1, -1))[0].max(axis=1)


def predict_rp(model:RPClassifierModel, x:ArrayLike) -> int:
    """
    Label minimizing the largest add-one-point distance over the directions; ties go to the smallest label.
    """
    return int(np.argmin(add_point_scores(model, x)))


def predict_rp_all(model:RPClassifierModel, X:ArrayLike) -> np.ndarray:
    """Labels of the rows of ``X`` under the projection rule."""
    return np.argmin(direction_scores(model, X).max(axis=2), axis=1).astype(np.int64)


def fit_full(train:Sample) -> FullModel:
    """
    Fit the plug-in model on raw (unprojected) training points.

    Raises:
        ValueError: a class has no training points
    """
    counts = _class_counts(train)
    per_class = [empirical_measure(Sample(train.class_rows(label))) for label in range(counts.shape[0])]
    return FullModel(per_class, counts)


def predict_addpoint_tv(model:FullModel, x:ArrayLike) -> int:
    """
    Binary add-one-point total variation rule.

    If x is unseen in exactly one class i the answer is 1 - i, and 0 when it is unseen in both. Otherwise the
    answer is 1 exactly when adding x moves class 1's empirical measure strictly less (in total variation) than
    it moves class 0's.

    Raises:
        ValueError: the model does not have exactly two classes
    """
    if model.n_classes != 2:
        raise ValueError(f"Invalid 'model': \n the add-one-point rule needs binary labels, got {model.n_classes} classes")

    point = as_point(x, model.dim)
    P0, P1 = model.per_class_full
    p0, p1 = P0.mass_at(point), P1.mass_at(point)

    if p1 == 0:
        return 0
    if p0 == 0:
        return 1

    n0, n1 = int(model.class_counts[0]), int(model.class_counts[1])
    d0 = tv_distance(P0, P0.add_point(point, n0))
    d1 = tv_distance(P1, P1.add_point(point, n1))
    return int(d1 < d0)


def predict_plugin(model:FullModel, x:ArrayLike) -> int:
    """Label maximizing P_l(x) * prior_l; ties go to the smallest label."""
    point = as_point(x, model.dim)
    scores = np.array([P.mass_at(point) for P in model.per_class_full]) * model.priors
    return int(np.argmax(scores))


def _predict_all(predict_fn, test:Sample) -> np.ndarray:
    if not isinstance(test, Sample) or not test.has_labels:
        raise ValueError(f"Invalid 'test': \n must be a labelled Sample")
    return np.array([predict_fn(row) for row in test.rows], dtype=np.int64)


def evaluate(predict_fn, test:Sample) -> float:
    """Fraction of test rows whose prediction differs from the label."""
    predicted = _predict_all(predict_fn, test)
    return float(np.mean(predicted != test.labels))


def confusion_matrix(predict_fn, test:Sample, n_classes:int = None) -> np.ndarray:
    """
    Counts of (predicted, true) label pairs: rows are predicted labels, columns true labels.
    """
    predicted = _predict_all(predict_fn, test)
    m = n_classes if n_classes is not None else int(max(predicted.max(), test.labels.max())) + 1
    conf = np.zeros((m, m), dtype=np.int64)
    np.add.at(conf, (predicted, test.labels), 1)
    return conf


def binary_scores(confusion:ArrayLike) -> dict:
    """
    Sensitivity, specificity and non-error rate of a 2 x 2 confusion matrix (rows predicted, columns true,
    label 1 positive).

    Returns:
        dict: keys ``sensitivity``, ``specificity``, ``ner`` where ner = (sensitivity + specificity) / 2
    """
    conf = np.asarray(confusion, dtype=float)
    if conf.shape != (2, 2):
        raise ValueError(f"Invalid 'confusion': \n expected a 2 x 2 matrix, got shape {conf.shape}")
    positives, negatives = conf[:, 1].sum(), conf[:, 0].sum()
    if positives == 0 or negatives == 0:
        raise ValueError(f"Invalid 'confusion': \n both true classes must be present")
    sn = conf[1, 1] / positives
    sp = conf[0, 0] / negatives
    return {'sensitivity': float(sn), 'specificity': float(sp), 'ner': float(0.5 * (sn + sp))}


def projection_sweep(train:Sample, test:Sample, ks:list, rng:np.random.Generator, distance_kind:str = 'w1') -> dict:
    """
    Test error of the projection classifier for each number of directions in ``ks``.

    One set of max(ks) directions is drawn and every k uses its first k members.

    Returns:
        dict: k -> error rate
    """
    ks = sorted(set(int(k) for k in ks))
    if not ks or ks[0] < 1:
        raise ValueError(f"Invalid 'ks': \n must be a nonempty list of positive integers")
    if not isinstance(test, Sample) or not test.has_labels:
        raise ValueError(f"Invalid 'test': \n must be a labelled Sample")
    model = fit_rp(train, random_directions(train.dim, ks[-1], rng), distance_kind)
    scores = direction_scores(model, test.rows)
    errors = {}
    for k in ks:
        predicted = np.argmin(scores[:, :, :k].max(axis=2), axis=1)
        errors[k] = float(np.mean(predicted != test.labels))
        logger.debug("projection_sweep: k=%d error=%.4f", k, errors[k])
    return errors


class ProjectionClassifier:
    """
    Estimator-style wrapper around the three prediction rules.

    Args:
        distance (BaseDistance, optional): distance instance used by the 'rp' rule. Defaults to the
            distance named by ``params['distance']``.
        params (dict, optional): keys and defaults:
            - rule (str): one of 'rp', 'addpoint_tv', 'plugin'. defaults to 'rp'.
            - distance (str): one of 'w1', 'ks', 'cvm', 'tv'. defaults to 'w1'.
            - projections (int): number of random directions for 'rp'. defaults to 100.
    """
    def __init__(self, distance:BaseDistance = None, params:dict = None):

        if params is None:
            # set default values for params
            params = {'rule': 'rp',
                      'distance': 'w1',
                      'projections': 100}

        params = dict(params)
        if params.get('rule') is None:
            params['rule'] = 'rp'
        if params.get('projections') is None:
            params['projections'] = 100

        if distance is not None:
            self.check_distance_instance(distance)
            params['distance'] = distance.name
        elif params.get('distance') is None:
            params['distance'] = 'w1'

        self.rule = params.get('rule')
        self.distance_kind = params.get('distance')
        self.projections = params.get('projections')
        self.model = None
        self._check_params()


    def fit(self, train:Sample, rng:np.random.Generator = None):
        """
        Fit the selected rule. The 'rp' rule draws its directions from ``rng``.

        Returns:
            ProjectionClassifier: self
        """
        if self.rule == 'rp':
            rng = np.random.default_rng() if rng is None else rng
            self.model = fit_rp(train, random_directions(train.dim, self.projections, rng), self.distance_kind)
        else:
            self.model = fit_full(train)
        return self


    def predict(self, X:ArrayLike) -> np.ndarray:
        """Labels for the rows of ``X``."""
        if self.model is None:
            raise ValueError(f"Invalid state: \n call fit before predict")
        rows = Sample(X).rows
        if self.rule == 'rp':
            return predict_rp_all(self.model, rows)
        predict_fn = {'addpoint_tv': predict_addpoint_tv, 'plugin': predict_plugin}[self.rule]
        return np.array([predict_fn(self.model, row) for row in rows], dtype=np.int64)


    def score(self, test:Sample) -> float:
        """Misclassification rate on a labelled sample."""
        if not isinstance(test, Sample) or not test.has_labels:
            raise ValueError(f"Invalid 'test': \n must be a labelled Sample")
        return float(np.mean(self.predict(test.rows) != test.labels))


    def check_distance_instance(self, distance):
        """
        Check that distance is a distance instance

        Raises:
            TypeError: a class was passed instead of an instance
        """
        if isinstance(distance, type):
            raise TypeError("Expected a distance instance, not a class. \n For example: distance=KSDistance()")
        if not isinstance(distance, BaseDistance) or distance.name not in DISTANCES:
            raise ValueError(f"Invalid 'distance': \n must be one of {sorted(DISTANCES)} as a BaseDistance instance")


    def _check_params(self):
        """
        Checks the params
        - rule: one of RULES
        - distance: a registered distance key
        - projections: positive int

        Raises:
            ValueError: param outside its documented range
        """
        if self.rule not in RULES:
            raise ValueError(f"Invalid 'rule': \n must be one of {list(RULES)}, got {self.rule!r}")
        if self.distance_kind not in DISTANCES:
            raise ValueError(f"Invalid 'distance': \n must be one of {sorted(DISTANCES)}, got {self.distance_kind!r}")
        if isinstance(self.projections, bool) or not isinstance(self.projections, (int, np.integer)) or self.projections < 1:
            raise ValueError(f"Invalid 'projections': \n must be a positive int")
