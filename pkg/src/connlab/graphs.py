"""Graph containers, loaders, and synthetic generators.

Two representations are used throughout the library:

* ``EdgeList`` — raw COO pairs plus a vertex count. This is the generator
  output format, the text-file wire format, and the wire form of update
  batches for incremental runs.
* ``Graph`` — immutable symmetrized CSR (offsets + sorted, deduplicated
  targets, self-loops dropped). All kernels consume this form.

Vertex ids are 32-bit (n < 2^31); offsets are 64-bit.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, MalformedInputError

VERTEX_LIMIT = 2**31

_BINARY_MAGIC = b"GCN1"


@dataclass
class EdgeList:
    """COO edge pairs over vertices [0, n). Order-preserving, may contain
    duplicates and self-loops; those are normalized away by build_csr."""

    n: int
    edges: np.ndarray  # shape (k, 2), int64

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)

    def __len__(self) -> int:
        return len(self.edges)


class Graph:
    """Symmetrized CSR graph. ``m`` counts directed entries, so every
    undirected edge contributes 2 to ``m``."""

    def __init__(self, n: int, offsets: np.ndarray, targets: np.ndarray):
        self.n = int(n)
        self.offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        self.targets = np.ascontiguousarray(targets, dtype=np.int32)
        self.m = int(len(self.targets))
        # Plain-list mirrors for the interpreted union-find loops; built lazily
        # because numpy scalar indexing is several times slower than list access.
        self._offsets_list: list[int] | None = None
        self._targets_list: list[int] | None = None

    @property
    def offsets_list(self) -> list[int]:
        if self._offsets_list is None:
            self._offsets_list = self.offsets.tolist()
        return self._offsets_list

    @property
    def targets_list(self) -> list[int]:
        if self._targets_list is None:
            self._targets_list = self.targets.tolist()
        return self._targets_list

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def neighbors(self, v: int) -> np.ndarray:
        return self.targets[self.offsets[v] : self.offsets[v + 1]]

    def undirected_edges(self) -> np.ndarray:
        """The (u, v) pairs with u < v, one per undirected edge."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        dst = self.targets.astype(np.int64)
        keep = src < dst
        return np.column_stack((src[keep], dst[keep]))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_csr(el: EdgeList) -> Graph:
    """Normalize an edge list into symmetrized CSR.

    Both directions are materialized, self-loops are dropped, duplicates are
    merged, and per-vertex targets are sorted ascending. Endpoints >= n raise
    MalformedInputError.
    """
    n = int(el.n)
    if n < 0 or n >= VERTEX_LIMIT:
        raise MalformedInputError(f"vertex count {n} outside [0, 2^31)")
    edges = el.edges
    if len(edges) == 0:
        return Graph(n, np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int32))
    if edges.min() < 0 or edges.max() >= n:
        bad = edges[(edges[:, 0] >= n) | (edges[:, 1] >= n) | (edges < 0).any(axis=1)][0]
        raise MalformedInputError(f"edge {tuple(bad)} has endpoint outside [0, {n})")

    u = np.concatenate((edges[:, 0], edges[:, 1]))
    v = np.concatenate((edges[:, 1], edges[:, 0]))
    keep = u != v
    u, v = u[keep], v[keep]
    if len(u) == 0:
        return Graph(n, np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int32))
    order = np.lexsort((v, u))
    u, v = u[order], v[order]
    uniq = np.ones(len(u), dtype=bool)
    uniq[1:] = (u[1:] != u[:-1]) | (v[1:] != v[:-1])
    u, v = u[uniq], v[uniq]
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.add.at(offsets, u + 1, 1)
    np.cumsum(offsets, out=offsets)
    return Graph(n, offsets, v.astype(np.int32))


def graph_to_edge_list(g: Graph) -> EdgeList:
    """Flatten CSR back to COO (one pair per undirected edge, u < v)."""
    return EdgeList(g.n, g.undirected_edges())


def load_edge_list(path) -> EdgeList:
    """Parse a text edge list: one "u v" pair per line; lines starting with
    '#' or '%' are comments. n = 1 + max endpoint, unless a header comment of
    the form ``# n <count>`` (or ``% n <count>``) overrides it.
    """
    edges: list[tuple[int, int]] = []
    n_override: int | None = None
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line[0] in "#%":
                head = line[1:].split()
                if len(head) == 2 and head[0] == "n" and head[1].isdigit():
                    n_override = int(head[1])
                continue
            parts = line.split()
            if len(parts) != 2:
                raise MalformedInputError(
                    f"{path}:{lineno}: expected 'u v', got {line!r}"
                )
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise MalformedInputError(
                    f"{path}:{lineno}: unparsable token in {line!r}"
                ) from None
            edges.append((u, v))
    arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
    n = n_override if n_override is not None else (int(arr.max()) + 1 if len(arr) else 0)
    return EdgeList(n, arr)


def save_edge_list(el: EdgeList, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# n {el.n}\n")
        for u, v in el.edges:
            fh.write(f"{u} {v}\n")


def save_graph_binary(g: Graph, path) -> None:
    """Binary CSR: magic "GCN1", n (u64 LE), m (u64 LE), offsets (n+1)*u64 LE,
    targets m*u32 LE."""
    with open(path, "wb") as fh:
        fh.write(_BINARY_MAGIC)
        fh.write(struct.pack("<QQ", g.n, g.m))
        fh.write(g.offsets.astype("<u8").tobytes())
        fh.write(g.targets.astype("<u4").tobytes())


def load_graph_binary(path) -> Graph:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _BINARY_MAGIC:
            raise MalformedInputError(f"{path}: bad magic {magic!r}")
        n, m = struct.unpack("<QQ", fh.read(16))
        offsets = np.frombuffer(fh.read(8 * (n + 1)), dtype="<u8").astype(np.int64)
        targets = np.frombuffer(fh.read(4 * m), dtype="<u4").astype(np.int32)
    if len(offsets) != n + 1 or len(targets) != m:
        raise MalformedInputError(f"{path}: truncated binary graph")
    return Graph(n, offsets, targets)


def is_binary_graph(path) -> bool:
    with open(path, "rb") as fh:
        return fh.read(4) == _BINARY_MAGIC


def load_graph(path) -> Graph:
    """Load either format (sniffed by magic) and normalize to CSR."""
    if is_binary_graph(path):
        return load_graph_binary(path)
    return build_csr(load_edge_list(path))


# ---------------------------------------------------------------------------
# Synthetic generators
# ---------------------------------------------------------------------------


def gen_rmat(
    scale: int,
    edge_factor: int,
    a: float = 0.5,
    b: float = 0.1,
    c: float = 0.1,
    seed: int = 0,
) -> EdgeList:
    """Recursive-quadrant (RMAT) sampler: n = 2^scale vertices and exactly
    edge_factor * n sampled pairs. At every recursion level the four quadrant
    probabilities get an independent per-edge +-10% multiplicative
    perturbation (then renormalized), the usual Graph500 practice, which
    avoids degenerate duplicate-heavy output. Deterministic per seed.
    """
    if scale < 1:
        raise ConfigError(f"scale must be >= 1, got {scale}")
    if a + b + c > 1.0 + 1e-12:
        raise ConfigError(f"quadrant probabilities sum to {a + b + c:.4f} > 1")
    d = 1.0 - a - b - c
    n = 1 << scale
    m = edge_factor * n
    rng = np.random.default_rng(seed)
    src = np.zeros(m, dtype=np.int64)
    dst = np.zeros(m, dtype=np.int64)
    base = np.array([a, b, c, d])
    for level in range(scale):
        noise = 0.9 + 0.2 * rng.random((m, 4))
        probs = base * noise
        probs /= probs.sum(axis=1, keepdims=True)
        cuts = np.cumsum(probs, axis=1)
        r = rng.random(m)
        quad = np.minimum((r[:, None] >= cuts).sum(axis=1), 3)  # 0..3 = a,b,c,d
        bit = np.int64(1) << (scale - 1 - level)
        src += bit * (quad >= 2)  # c and d pick the lower row half
        dst += bit * (quad & 1)  # b and d pick the right column half
    return EdgeList(n, np.column_stack((src, dst)))


def gen_ba(n: int, attach: int, seed: int = 0) -> EdgeList:
    """Preferential attachment: each arriving vertex connects to ``attach``
    distinct existing vertices chosen with probability proportional to degree
    (the first arrival joins all seed vertices). Connected by construction;
    deterministic per seed.
    """
    if attach < 1:
        raise ConfigError(f"attach must be >= 1, got {attach}")
    if n <= attach:
        raise ConfigError(f"need n > attach, got n={n}, attach={attach}")
    rng = np.random.default_rng(seed)
    edges: list[tuple[int, int]] = []
    # Endpoint pool: each vertex appears once per incident edge, so uniform
    # draws from the pool are degree-weighted.
    repeated: list[int] = []
    targets = list(range(attach))
    for source in range(attach, n):
        for t in targets:
            edges.append((source, t))
        repeated.extend(targets)
        repeated.extend([source] * attach)
        chosen: set[int] = set()
        while len(chosen) < attach:
            chosen.add(repeated[int(rng.integers(len(repeated)))])
        targets = sorted(chosen)
    return EdgeList(n, np.array(edges, dtype=np.int64))


# ---------------------------------------------------------------------------
# Simple deterministic families used by the test/bench suites
# ---------------------------------------------------------------------------


def path_graph(n: int) -> Graph:
    e = np.column_stack((np.arange(n - 1), np.arange(1, n))) if n > 1 else np.empty((0, 2))
    return build_csr(EdgeList(n, e))


def star_graph(n: int, center: int = 0) -> Graph:
    leaves = np.array([v for v in range(n) if v != center], dtype=np.int64)
    e = np.column_stack((np.full(len(leaves), center, dtype=np.int64), leaves))
    return build_csr(EdgeList(n, e))


def clique_graph(n: int) -> Graph:
    u, v = np.triu_indices(n, k=1)
    return build_csr(EdgeList(n, np.column_stack((u, v))))


def grid_graph(rows: int, cols: int) -> Graph:
    idx = np.arange(rows * cols).reshape(rows, cols)
    horiz = np.column_stack((idx[:, :-1].ravel(), idx[:, 1:].ravel()))
    vert = np.column_stack((idx[:-1, :].ravel(), idx[1:, :].ravel()))
    return build_csr(EdgeList(rows * cols, np.vstack((horiz, vert))))


def gnp_graph(n: int, p: float, seed: int = 0) -> Graph:
    rng = np.random.default_rng(seed)
    u, v = np.triu_indices(n, k=1)
    keep = rng.random(len(u)) < p
    return build_csr(EdgeList(n, np.column_stack((u[keep], v[keep]))))


def disjoint_union(parts: list[Graph]) -> Graph:
    """Relabel-and-concatenate several graphs into one multi-component graph."""
    chunks = []
    base = 0
    for g in parts:
        if g.m:
            chunks.append(g.undirected_edges() + base)
        base += g.n
    edges = np.vstack(chunks) if chunks else np.empty((0, 2), dtype=np.int64)
    return build_csr(EdgeList(base, edges))
