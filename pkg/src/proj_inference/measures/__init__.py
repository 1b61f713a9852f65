from .discrete_measure import DiscreteMeasure, Sample, empirical_measure, align_measures, MERGE_TOL
from .histogram import Histogram
from .base_distance import BaseDistance
from .tv_distance import TVDistance, tv_distance
from .w1_distance import W1Distance, TransportDistance, w1_distance_1d, transport_distance
from .ks_distance import KSDistance, ks_distance_1d
from .cvm_distance import CvMDistance, cvm_distance_1d
from .mallows_distance import MallowsL2Distance, mallows_l2_histogram
from .sandwich import metric_sandwich_check, sandwich_terms


DISTANCES = {'w1': W1Distance,
             'ks': KSDistance,
             'cvm': CvMDistance,
             'tv': TVDistance}


def get_distance(kind:str) -> BaseDistance:
    """
    Distance object for one of the keys 'w1', 'ks', 'cvm', 'tv'.

    Raises:
        ValueError: unknown kind
    """
    if kind not in DISTANCES:
        raise ValueError(f"Invalid 'distance': \n must be one of {sorted(DISTANCES)}, got {kind!r}")
    return DISTANCES[kind]()


__all__ = ['DiscreteMeasure',
           'Sample',
           'Histogram',
           'BaseDistance',
           'TVDistance',
           'W1Distance',
           'TransportDistance',
           'KSDistance',
           'CvMDistance',
           'MallowsL2Distance',
           'empirical_measure',
           'align_measures',
           'tv_distance',
           'w1_distance_1d',
           'transport_distance',
           'ks_distance_1d',
           'cvm_distance_1d',
           'mallows_l2_histogram',
           'metric_sandwich_check',
           'sandwich_terms',
           'get_distance',
           'DISTANCES',
           'MERGE_TOL']
