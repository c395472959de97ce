"""Composite Gauss-Legendre panel rules.

The library integrates smooth, exponentially decaying integrands over finite
panels.  A rule is the flattened set of mapped Gauss-Legendre nodes and
weights for a sequence of panel edges; refinement splits every panel in two,
so comparing two consecutive levels gives a defensible error estimate without
nested rules.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _leggauss(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def split_edges(edges):
    """Insert the midpoint of every panel, doubling the panel count."""
    edges = np.asarray(edges, dtype=float)
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(edges.size + mids.size)
    out[0::2] = edges
    out[1::2] = mids
    return out


@lru_cache(maxsize=None)
def _panel_rule_cached(edges_key, order):
    edges = np.asarray(edges_key, dtype=float)
    base_x, base_w = _leggauss(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * base_x[None, :]).ravel()
    weights = (half[:, None] * base_w[None, :]).ravel()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_rule(edges, order):
    """Nodes and weights of a composite Gauss-Legendre rule.

    Parameters
    ----------
    edges : sequence of float
        Strictly increasing panel boundaries.
    order : int
        Gauss-Legendre order per panel.

    Returns
    -------
    (ndarray, ndarray)
        Flattened nodes and weights; read-only and cached.
    """
    edges = tuple(float(e) for e in edges)
    if len(edges) < 2 or any(b <= a for a, b in zip(edges, edges[1:])):
        raise ValueError("panel edges must be strictly increasing")
    return _panel_rule_cached(edges, int(order))

