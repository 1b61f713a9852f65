from . import measures
from .classify import ProjectionClassifier, fit_rp, predict_rp, fit_full, predict_addpoint_tv, predict_plugin, evaluate
from .config import ExperimentConfig
from .datagen import JointPmf
from .errors import DataError, NumericalError
from .hypotest import TestReport
from .measures import DiscreteMeasure, Sample, Histogram
from .projections import Subspace, Direction, HeppesFamily
from .tomo import PointSet, PhantomConfig


__version__ = '2024.0.1'

__all__ = ['measures',
           'ProjectionClassifier',
           'fit_rp',
           'predict_rp',
           'fit_full',
           'predict_addpoint_tv',
           'predict_plugin',
           'evaluate',
           'ExperimentConfig',
           'JointPmf',
           'DataError',
           'NumericalError',
           'TestReport',
           'DiscreteMeasure',
           'Sample',
           'Histogram',
           'Subspace',
           'Direction',
           'HeppesFamily',
           'PointSet',
           'PhantomConfig'
           ]
