"""Composite Gauss-Legendre rules"""
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import special

NODES_PER_PANEL = 10


@lru_cache(maxsize=32)
def _reference_rule(npt: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = special.roots_legendre(npt)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def composite_gauss_legendre(a: float, b: float, panels: int, npt: int = NODES_PER_PANEL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes and weights of ``panels`` equal Gauss-Legendre panels on [a, b].

    Args:
        a, b: interval end points
        panels: number of equal sub-intervals
        npt: nodes per panel

    Returns:
        (nodes, weights), both flat arrays of length panels * npt
    """
    if panels < 1:
        raise ValueError("at least one panel is required")
    ref_nodes, ref_weights = _reference_rule(npt)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * ref_nodes[None, :]).ravel()
    weights = (half[:, None] * ref_weights[None, :]).ravel()
    return nodes, weights
