# -*- coding: utf-8 -*-
"""
relation between total variation and Wasserstein-1 on a finite support
"""
import numpy as np
from scipy.spatial.distance import pdist

from proj_inference.measures.discrete_measure import DiscreteMeasure, align_measures
from proj_inference.measures.w1_distance import transport_distance, w1_distance_1d


SANDWICH_SLACK = 1e-10


def sandwich_terms(P:DiscreteMeasure, Q:DiscreteMeasure) -> dict:
    """
    Quantities entering d_min(E) * d_TV <= d_W1 <= diam(E) * d_TV, where E is the union of the supports.

    Returns:
        dict: keys ``tv``, ``w1``, ``d_min`` and ``diam``. With a single support point ``d_min`` and ``diam`` are 0.
    """
    support, p, q = align_measures(P, Q)
    tv = 0.5 * float(np.abs(p - q).sum())
    w1 = w1_distance_1d(P, Q) if P.dim == 1 else transport_distance(P, Q)

    if support.shape[0] < 2:
        d_min = diam = 0.0
    else:
        gaps = pdist(support)
        d_min, diam = float(gaps.min()), float(gaps.max())
    return {'tv': tv, 'w1': w1, 'd_min': d_min, 'diam': diam}


def metric_sandwich_check(P:DiscreteMeasure, Q:DiscreteMeasure, slack:float = SANDWICH_SLACK):
    """
    Check both sides of the TV / Wasserstein-1 sandwich.

    Args:
        P (DiscreteMeasure): first measure
        Q (DiscreteMeasure): second measure, same dimension as P
        slack (float, optional): absolute tolerance on each inequality. Defaults to 1e-10.

    Returns:
        tuple: ``(lhs_ok, rhs_ok)``
    """
    terms = sandwich_terms(P, Q)
    lhs_ok = terms['d_min'] * terms['tv'] <= terms['w1'] + slack
    rhs_ok = terms['w1'] <= terms['diam'] * terms['tv'] + slack
    return bool(lhs_ok), bool(rhs_ok)
