"""Sampling-phase strategies and most-frequent-label identification.

Samplers run before the finish phase to cheaply collapse most of the graph's
largest component. The union-find-backed samplers (k-out, HB) mutate a
DisjointSets and leave it fully compressed; BFS sampling works on a plain
label array. All of them only ever merge vertices that share a true
component, so the post-sampling partition refines the true one.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .dset import union_edge_list
from .graphs import Graph

KOUT_DEFAULT_K = 2
HB_DEFAULT_EDGES = 4
BFS_DEFAULT_PROBES = 64


class KOutMode(Enum):
    FIRST_K = "first_k"
    FIRST_PLUS_RANDOM = "first_plus_random"


def most_frequent_label(labels) -> int:
    """Exact histogram argmax over a fully compressed label array; ties
    break toward the smaller label."""
    labels = np.asarray(labels)
    if len(labels) == 0:
        return 0
    return int(np.bincount(labels, minlength=len(labels)).argmax())


def compress_all(ds) -> np.ndarray:
    """Fully compress the parent array in place; returns it as numpy."""
    arr = np.array(ds.p, dtype=np.int64)
    while True:
        nxt = arr[arr]
        if np.array_equal(nxt, arr):
            break
        arr = nxt
    ds.p[:] = arr.tolist()
    return arr


def _flat_slices(offsets, verts, take):
    """Flat indices selecting the first take[i] adjacency entries of verts[i]."""
    total = int(take.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    starts = offsets[verts]
    return np.arange(total, dtype=np.int64) + np.repeat(
        starts - np.concatenate(([0], np.cumsum(take)[:-1])), take
    )


def kout_sample(g: Graph, ds, k=KOUT_DEFAULT_K, mode=KOutMode.FIRST_K,
                workers=1, seed=0, counter=None) -> np.ndarray:
    """Union the first edge of every vertex plus either its next k-1 edges
    (FIRST_K) or k-1 uniform random ones, then fully compress."""
    n = g.n
    deg = g.degrees
    ids = np.arange(n, dtype=np.int64)
    if mode is KOutMode.FIRST_K:
        take = np.minimum(k, deg)
        src = np.repeat(ids, take)
        dst = g.targets[_flat_slices(g.offsets, ids, take)].astype(np.int64)
    else:
        nz = ids[deg > 0]
        first = g.targets[g.offsets[nz]].astype(np.int64)
        src = nz
        dst = first
        if k > 1 and len(nz):
            rng = np.random.default_rng(seed)
            offs = rng.integers(0, deg[nz][:, None], size=(len(nz), k - 1))
            rand_dst = g.targets[(g.offsets[nz][:, None] + offs).ravel()]
            src = np.concatenate([src, np.repeat(nz, k - 1)])
            dst = np.concatenate([dst, rand_dst.astype(np.int64)])
    if counter is not None:
        counter.add("sample", len(src))
    union_edge_list(ds, src.tolist(), dst.tolist(), workers)
    return compress_all(ds)


def hb_sample(g: Graph, ds, n_edges=HB_DEFAULT_EDGES, workers=1,
              counter=None) -> np.ndarray:
    """Hook-based sampling: phase 1 points every vertex at the smaller of
    itself and its first (smallest) neighbor — write-disjoint, no atomics —
    then phase 2 unions the first N edges of every vertex still a root."""
    n = g.n
    if g.m == 0:
        return compress_all(ds)
    deg = g.degrees
    ids = np.arange(n, dtype=np.int64)
    nz = deg > 0
    if counter is not None and nz.any():
        counter.add("sample", int(nz.sum()))
    first = np.where(nz, g.targets[np.minimum(g.offsets[:-1], g.m - 1)], ids)
    hooked = first < ids
    p = ds.p
    for v in np.flatnonzero(hooked).tolist():
        w = int(first[v])
        p[v] = w
        ds.record(v, v, w)

    roots = ids[(~hooked) & nz]
    take = np.minimum(n_edges, deg[roots])
    src = np.repeat(roots, take)
    dst = g.targets[_flat_slices(g.offsets, roots, take)].astype(np.int64)
    if counter is not None:
        counter.add("sample", len(src))
    union_edge_list(ds, src.tolist(), dst.tolist(), workers)
    return compress_all(ds)


def bfs_sample(g: Graph, labels: np.ndarray, probe_count=BFS_DEFAULT_PROBES,
               seed=0, counter=None, forest=None) -> np.ndarray:
    """Level-synchronous BFS from the highest-degree vertex among a random
    probe set; every reached vertex takes the minimum id of the discovered
    component. Frontier expansion claims each vertex once (first discoverer
    wins, smallest-index tie-break, so single-worker runs are reproducible).
    """
    n = g.n
    if n == 0 or g.m == 0:
        return labels
    rng = np.random.default_rng(seed)
    probes = np.unique(rng.integers(0, n, size=probe_count))
    s = int(probes[np.argmax(g.degrees[probes])])

    offsets, targets = g.offsets, g.targets
    visited = np.zeros(n, dtype=bool)
    visited[s] = True
    parent = np.full(n, -1, dtype=np.int64)
    frontier = np.array([s], dtype=np.int64)
    while len(frontier):
        starts = offsets[frontier]
        counts = offsets[frontier + 1] - starts
        total = int(counts.sum())
        if counter is not None and total:
            counter.add("sample", total)
        if total == 0:
            break
        flat = np.arange(total, dtype=np.int64) + np.repeat(
            starts - np.concatenate(([0], np.cumsum(counts)[:-1])), counts
        )
        reached = targets[flat].astype(np.int64)
        origin = np.repeat(frontier, counts)
        fresh = ~visited[reached]
        uniq, first_idx = np.unique(reached[fresh], return_index=True)
        visited[uniq] = True
        parent[uniq] = origin[fresh][first_idx]
        frontier = uniq

    comp = np.flatnonzero(visited)
    mn = int(comp.min())
    labels[comp] = mn
    if forest is not None and len(comp) > 1:
        # re-root the discovery tree at the component minimum so that the
        # minimum is the one vertex of the component without a slot
        cur, prev = mn, -1
        while cur != -1:
            nxt = int(parent[cur])
            parent[cur] = prev
            prev, cur = cur, nxt
        for r in comp.tolist():
            if r != mn:
                forest[r] = (int(parent[r]), r)
    return labels
