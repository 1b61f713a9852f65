# -*- coding: utf-8 -*-
"""
seed splitting for reproducible replicates

Replicate ``r`` of an experiment run with root seed ``s`` uses the seed

    s XOR splitmix64(r)   (masked to 63 bits)

where ``splitmix64`` is the SplitMix64 finalizer applied to ``r + 0x9E3779B97F4A7C15``.
"""
import numpy as np


_MASK64 = (1 << 64) - 1
_MASK63 = (1 << 63) - 1


def splitmix64(x:int) -> int:
    """
    SplitMix64 finalizer.

    Args:
        x (int): non-negative integer

    Returns:
        int: 64-bit hash of x
    """
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(root_seed:int, index:int) -> int:
    """
    Seed for replicate/chunk ``index`` derived from ``root_seed``.

    Raises:
        ValueError: root_seed or index is negative
    """
    if root_seed < 0:
        raise ValueError(f"Invalid 'root_seed': \n must be a non-negative integer")
    if index < 0:
        raise ValueError(f"Invalid 'index': \n must be a non-negative integer")
    return (int(root_seed) ^ splitmix64(int(index))) & _MASK63


def make_rng(seed:int) -> np.random.Generator:
    """numpy Generator for ``seed``."""
    return np.random.default_rng(seed)


def replicate_rng(root_seed:int, index:int) -> np.random.Generator:
    """Generator for replicate ``index`` under ``root_seed``."""
    return make_rng(derive_seed(root_seed, index))


def child_seeds(rng:np.random.Generator, n:int) -> np.ndarray:
    """
    Draw ``n`` independent child seeds from ``rng`` (used for Monte Carlo replicates inside a single call).
    """
    return rng.integers(0, _MASK63, size=n, dtype=np.int64)
