# -*- coding: utf-8 -*-
"""
exception types shared across the package
"""


class DataError(ValueError):
    """
    Raised when input data is malformed: a non-binary cell in a binary matrix, a bad label column, or a projected
    offset that falls outside the histogram bins.
    """


class NumericalError(RuntimeError):
    """
    Raised when a numerical procedure fails to reach its target, e.g. IPF non-convergence or an exhausted
    random search.

    Args:
        message (str): human readable description
        discrepancy (float, optional): final discrepancy reached by the procedure, when there is one. Defaults to None.
    """
    def __init__(self, message:str, discrepancy:float = None):
        super().__init__(message)
        self.discrepancy = discrepancy
