# -*- coding: utf-8 -*-
"""
experiment configuration
"""
from numbers import Number

import numpy as np

from proj_inference.classify import RULES
from proj_inference.measures import DISTANCES


TESTS = ('ks1', 'ks2', 'ks-multi', 'sum', 'rare', 'or-power', 'pb-power')

DEFAULTS = {'dim': 5,
            'corr': 0.9,
            'gamma': 1.75,
            'gamma2': 2.0,
            'projections': [100],
            'distance': 'w1',
            'rule': 'rp',
            'neighbours': 21,
            'bins': 30,
            'alpha': 0.05,
            'mc_reps': 1000,
            'scale': 1.0,
            'replicates': 50,
            'train_fraction': 0.75,
            'n_obs': 200,
            'images': 100,
            'scenario': 1,
            'test': 'ks1',
            'seed': None,
            'input': None,
            'has_header': False,
            'has_labels': False,
            'grid': None,
            'train_images': None,
            'test_images': None}


def _is_int(value) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, (bool, np.bool_))


def _is_number(value) -> bool:
    return isinstance(value, (Number, np.number)) and not isinstance(value, (bool, np.bool_))


class ExperimentConfig:
    """
    Parameters shared by every command.

    Args:
        params (dict, optional): any subset of the keys below; missing or None values take their defaults.
            ``seed`` has no default and must be given.
            - dim (int): data dimension. defaults to 5.
            - corr (float): equicorrelation in [0, 1). defaults to 0.9.
            - gamma (float): odds ratio, or first Beta parameter. defaults to 1.75.
            - gamma2 (float): second Beta parameter. defaults to 2.0.
            - projections (list): numbers of random directions, a sweep when longer than one. defaults to [100].
            - distance (str): one of 'w1', 'ks', 'cvm', 'tv'. defaults to 'w1'.
            - rule (str): one of 'rp', 'addpoint_tv', 'plugin'. defaults to 'rp'.
            - neighbours (int): odd neighbour count for tomography. defaults to 21.
            - bins (int): histogram bins per direction. defaults to 30.
            - alpha (float): level in (0, 1]. defaults to 0.05.
            - mc_reps (int): Monte Carlo calibration size, at least 100. defaults to 1000.
            - scale (float): benchmark scale factor in (0, 1]. defaults to 1.0.
            - replicates (int): number of replicates. defaults to 50.
            - train_fraction (float): share of the data used for training, in (0, 1). defaults to 0.75.
            - n_obs (int): observations per class or per sample. defaults to 200.
            - images (int): phantom images per class. defaults to 100.
            - scenario (int): phantom scenario 1 or 2. defaults to 1.
            - test (str): one of 'ks1', 'ks2', 'ks-multi', 'sum', 'rare', 'or-power', 'pb-power'. defaults to 'ks1'.
            - seed (int): root seed, nonnegative. required.
            - input (str): optional path of a binary matrix to use instead of generated data.
            - has_header (bool): the input file has a header line. defaults to False.
            - has_labels (bool): the last input column is a class label. defaults to False.
            - grid (list): parameter values for power sweeps. defaults to None (command default).
            - train_images (str): optional labelled point-list file of training images for tomography.
            - test_images (str): labelled point-list file of test images, given together with train_images.
    """
    def __init__(self, params:dict = None):

        if params is None:
            params = {}

        unknown = sorted(set(params) - set(DEFAULTS))
        if unknown:
            raise ValueError(f"Invalid params: \n unknown keys {unknown}")

        for key, default in DEFAULTS.items():
            value = params.get(key)
            setattr(self, key, default if value is None else value)

        if _is_int(self.projections):
            self.projections = [self.projections]
        self.projections = list(self.projections)
        if self.grid is not None:
            self.grid = [float(g) for g in self.grid]

        self._check_params()


    def to_dict(self) -> dict:
        return {key: getattr(self, key) for key in DEFAULTS}

    def replace(self, **changes):
        """Copy with some keys changed."""
        params = self.to_dict()
        params.update(changes)
        return ExperimentConfig(params)

    def __repr__(self):
        return f"ExperimentConfig({self.to_dict()})"


    def _check_params(self):
        """
        Checks the params
        - seed: required nonnegative int
        - integer keys: positive ints (neighbours odd, mc_reps >= 100, n_obs and images >= 2)
        - probabilities and fractions: inside their documented intervals
        - enumerations: one of the documented values

        Raises:
            ValueError: param missing or outside its documented range
        """
        if self.seed is None:
            raise ValueError(f"Invalid 'seed': \n a seed is required for every stochastic command")
        elif not _is_int(self.seed) or self.seed < 0:
            raise ValueError(f"Invalid 'seed': \n must be a nonnegative int")

        for key in ('dim', 'bins', 'replicates'):
            value = getattr(self, key)
            if not _is_int(value) or value < 1:
                raise ValueError(f"Invalid '{key}': \n must be a positive int")

        for key in ('n_obs', 'images'):
            value = getattr(self, key)
            if not _is_int(value) or value < 2:
                raise ValueError(f"Invalid '{key}': \n must be an int >= 2")

        if not _is_int(self.neighbours) or self.neighbours < 1 or self.neighbours % 2 == 0:
            raise ValueError(f"Invalid 'neighbours': \n must be an odd positive int")

        if not _is_int(self.mc_reps) or self.mc_reps < 100:
            raise ValueError(f"Invalid 'mc_reps': \n must be an int >= 100")

        if len(self.projections) == 0 or not all(_is_int(k) and k >= 1 for k in self.projections):
            raise ValueError(f"Invalid 'projections': \n must be a nonempty list of positive ints")

        if not _is_number(self.corr) or not 0 <= self.corr < 1:
            raise ValueError(f"Invalid 'corr': \n must lie in [0, 1)")

        for key in ('gamma', 'gamma2'):
            value = getattr(self, key)
            if not _is_number(value) or not value > 0:
                raise ValueError(f"Invalid '{key}': \n must be a positive number")

        if not _is_number(self.alpha) or not 0 < self.alpha <= 1:
            raise ValueError(f"Invalid 'alpha': \n must lie in (0, 1]")

        if not _is_number(self.scale) or not 0 < self.scale <= 1:
            raise ValueError(f"Invalid 'scale': \n must lie in (0, 1]")

        if not _is_number(self.train_fraction) or not 0 < self.train_fraction < 1:
            raise ValueError(f"Invalid 'train_fraction': \n must lie in (0, 1)")

        if self.distance not in DISTANCES:
            raise ValueError(f"Invalid 'distance': \n must be one of {sorted(DISTANCES)}, got {self.distance!r}")

        if self.rule not in RULES:
            raise ValueError(f"Invalid 'rule': \n must be one of {list(RULES)}, got {self.rule!r}")

        if self.test not in TESTS:
            raise ValueError(f"Invalid 'test': \n must be one of {list(TESTS)}, got {self.test!r}")

        if self.scenario not in (1, 2):
            raise ValueError(f"Invalid 'scenario': \n must be 1 or 2")

        for key in ('has_header', 'has_labels'):
            if not isinstance(getattr(self, key), (bool, np.bool_)):
                raise ValueError(f"Invalid '{key}': \n must be a bool")

        if self.input is not None and not isinstance(self.input, str):
            raise ValueError(f"Invalid 'input': \n must be a path string")

        for key in ('train_images', 'test_images'):
            value = getattr(self, key)
            if value is not None and not isinstance(value, str):
                raise ValueError(f"Invalid '{key}': \n must be a path string")
        if (self.train_images is None) != (self.test_images is None):
            raise ValueError(f"Invalid 'test_images': \n training and test point lists must be given together")
