"""Shared test utilities: tiny graph construction and oracle-backed asserts."""

from __future__ import annotations

import numpy as np

from connlab import EdgeList, build_csr, oracle_components, partition_equal

# cache holds the graph itself so its id() can never be recycled
_ORACLE_CACHE: dict[int, tuple] = {}


def graph_from_pairs(n, pairs):
    """CSR graph from a plain list of (u, v) pairs."""
    arr = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    return build_csr(EdgeList(n, arr))


def oracle(g):
    """BFS-oracle labels for g, cached per graph object."""
    key = id(g)
    if key not in _ORACLE_CACHE:
        _ORACLE_CACHE[key] = (g, oracle_components(g))
    return _ORACLE_CACHE[key][1]


def assert_matches_oracle(g, labels, context=""):
    __tracebackhide__ = True
    if not partition_equal(labels, oracle(g)):
        raise AssertionError(f"partition differs from oracle {context}")


def random_edge_pairs(n, m, seed):
    rng = np.random.default_rng(seed)
    if n < 2 or m == 0:
        return np.empty((0, 2), dtype=np.int64)
    return rng.integers(0, n, size=(m, 2), dtype=np.int64)
