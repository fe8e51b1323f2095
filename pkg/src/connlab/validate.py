"""Independent oracles, checkers, and metric computation.

Everything here is strictly single-worker and written against the graph
container only, so it stays an independent route from the concurrent kernels
it validates. Two oracles (BFS flood and a sequential union-find) are kept
separate on purpose; tests cross-check them against each other.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph


@dataclass
class RunStats:
    """Per-run measurements captured by the drivers.

    cov  — fraction of vertices carrying the most frequent post-sampling label.
    ic   — fraction of directed edges whose post-sampling labels differ
           (the edges the finish phase still has to look at).
    sampling_ratio — sampling wall time / total wall time.
    """

    phase_times: dict = field(default_factory=dict)
    edge_inspections: dict = field(default_factory=dict)
    cov: float = 0.0
    ic: float = 0.0
    sampling_ratio: float = 0.0
    rounds: int = 0
    component_count: int = 0
    notes: list = field(default_factory=list)

    def total_inspections(self) -> int:
        return sum(self.edge_inspections.values())

    def total_time(self) -> float:
        return sum(self.phase_times.values())


class InspectionCounter:
    """Per-phase tally of adjacency-entry reads.

    Kernels accept an optional counter; when absent (the default) no counting
    code runs on the hot path. Workers accumulate locally and merge whole
    sums at phase barriers, so `add` takes a lock but is called rarely.
    """

    def __init__(self):
        self.by_phase: dict[str, int] = {}
        self._lock = threading.Lock()

    def add(self, phase: str, count: int) -> None:
        with self._lock:
            self.by_phase[phase] = self.by_phase.get(phase, 0) + int(count)

    def get(self, phase: str) -> int:
        return self.by_phase.get(phase, 0)

    def total(self) -> int:
        return sum(self.by_phase.values())


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def oracle_components(g: Graph) -> np.ndarray:
    """Sequential BFS flood. Scanning start vertices in increasing order makes
    every component's label its minimum vertex id."""
    n = g.n
    labels = np.full(n, -1, dtype=np.int64)
    offsets, targets = g.offsets, g.targets
    for start in range(n):
        if labels[start] != -1:
            continue
        labels[start] = start
        frontier = np.array([start], dtype=np.int64)
        while len(frontier):
            starts = offsets[frontier]
            counts = offsets[frontier + 1] - starts
            total = int(counts.sum())
            if total == 0:
                break
            flat = np.arange(total) + np.repeat(
                starts - np.concatenate(([0], np.cumsum(counts)[:-1])), counts
            )
            reached = targets[flat]
            fresh = np.unique(reached[labels[reached] == -1])
            labels[fresh] = start
            frontier = fresh
    return labels


def oracle_components_unionfind(g: Graph) -> np.ndarray:
    """Second, independent oracle: plain sequential union-find (smaller root
    id wins) with full compression, canonicalized to min-of-component."""
    parent = list(range(g.n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    offsets, targets = g.offsets_list, g.targets_list
    for u in range(g.n):
        for i in range(offsets[u], offsets[u + 1]):
            ru, rv = find(u), find(targets[i])
            if ru != rv:
                if ru < rv:
                    ru, rv = rv, ru
                parent[ru] = rv
    return np.array([find(v) for v in range(g.n)], dtype=np.int64)


class SequentialUF:
    """Updatable sequential union-find oracle (min root wins, full
    compression) for prefix checks over incremental streams."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, u: int, v: int) -> None:
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return
        if ru < rv:
            ru, rv = rv, ru
        self.parent[ru] = rv

    def connected(self, u: int, v: int) -> bool:
        return self.find(u) == self.find(v)

    def labels(self) -> np.ndarray:
        return np.array(
            [self.find(v) for v in range(len(self.parent))], dtype=np.int64
        )


def partition_equal(a, b) -> bool:
    """True iff the two labelings induce the same partition (bijection
    between label sets), irrespective of label values."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape:
        return False
    if len(a) == 0:
        return True
    pairs = (a << np.int64(32)) | (b & np.int64(0xFFFFFFFF))
    return (
        len(np.unique(a)) == len(np.unique(pairs)) == len(np.unique(b))
    )


# ---------------------------------------------------------------------------
# Spanning forest checker
# ---------------------------------------------------------------------------


def check_forest(g: Graph, forest, oracle: np.ndarray) -> dict:
    """Validate a recorded spanning forest against four clauses:

    (a) every recorded edge exists in E,
    (b) the recorded edge set is acyclic,
    (c) populated slot count = n - component count,
    (d) components induced by the recorded edges match the oracle partition.

    ``forest`` is anything with an ``edges`` sequence of optional (u, v)
    pairs (slot-indexed). Returns a JSON-serializable report; every violated
    clause carries a witness.
    """
    n = g.n
    edges = [e for e in forest.edges if e is not None]
    report: dict = {"passed": True, "clauses": {}}

    def clause(name: str, ok: bool, witness=None):
        entry: dict = {"ok": bool(ok)}
        if not ok:
            entry["witness"] = witness
            report["passed"] = False
        report["clauses"][name] = entry

    missing = None
    for u, v in edges:
        row = g.neighbors(u)
        pos = np.searchsorted(row, v)
        if pos >= len(row) or row[pos] != v:
            missing = (int(u), int(v))
            break
    clause("edges_exist", missing is None, missing)

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cycle = None
    for u, v in edges:
        ru, rv = find(int(u)), find(int(v))
        if ru == rv:
            cycle = (int(u), int(v))
            break
        parent[max(ru, rv)] = min(ru, rv)
    clause("acyclic", cycle is None, cycle)

    component_count = len(np.unique(oracle)) if n else 0
    expected = n - component_count
    clause(
        "count",
        len(edges) == expected,
        {"populated": len(edges), "expected": expected},
    )

    forest_labels = np.array([find(v) for v in range(n)], dtype=np.int64)
    same = partition_equal(forest_labels, np.asarray(oracle))
    witness = None
    if not same:
        diff = np.flatnonzero(
            canonical_labels(forest_labels) != canonical_labels(np.asarray(oracle))
        )
        witness = {"vertex": int(diff[0]) if len(diff) else None}
    clause("components_match", same, witness)
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def canonical_labels(labels) -> np.ndarray:
    """Map any labeling to the canonical min-member-id form."""
    labels = np.asarray(labels, dtype=np.int64)
    n = len(labels)
    if n == 0:
        return labels.copy()
    mins = np.full(n, n, dtype=np.int64)
    np.minimum.at(mins, labels, np.arange(n, dtype=np.int64))
    return mins[labels]


# ---------------------------------------------------------------------------
# Sampling metrics (brute-force census route)
# ---------------------------------------------------------------------------


def sampling_stats(g: Graph, post_sample_labels, oracle=None) -> tuple[float, float]:
    """Brute-force census of the Cov / IC metrics from post-sampling labels.

    cov = |{v : label(v) = most frequent label}| / n
    ic  = |{directed (u,v) : label(u) != label(v)}| / m

    Every label-crossing edge is incident to a non-most-frequent vertex, so
    the "edges incident to active vertices" restriction is implied. When an
    oracle labeling is supplied, the post-sampling partition is additionally
    checked to refine it (sampling must never merge true components).
    """
    labels = np.asarray(post_sample_labels, dtype=np.int64)
    n = g.n
    if n == 0:
        return 1.0, 0.0
    counts = np.bincount(labels, minlength=n)
    mode = int(counts.argmax())  # argmax returns the smallest index on ties
    cov = counts[mode] / n
    if g.m == 0:
        ic = 0.0
    else:
        src = np.repeat(np.arange(n, dtype=np.int64), g.degrees)
        ic = float(np.count_nonzero(labels[src] != labels[g.targets])) / g.m
    if oracle is not None:
        oracle = np.asarray(oracle, dtype=np.int64)
        # refinement: vertices sharing a sample label share an oracle label
        order = np.argsort(labels, kind="stable")
        ls, os_ = labels[order], oracle[order]
        same_class = ls[1:] == ls[:-1]
        if np.any(same_class & (os_[1:] != os_[:-1])):
            raise AssertionError("post-sampling labels merge distinct true components")
    return float(cov), float(ic)
