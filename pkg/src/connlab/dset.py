"""Concurrent disjoint-set kernels: the union/find/splice menu.

A union algorithm is picked by `UnionConfig` and driven through
`DisjointSets`. Parent arrays are plain Python lists shared across worker
threads; in threaded mode every contended write goes through a striped-lock
compare-and-swap (see parallel.make_striped_cas), in single-worker mode the
same kernels run with plain check-then-write semantics.

Conventions shared by all variants:
  - parent pointers only ever decrease (links go from larger to smaller id),
    so every tree root is the minimum id of its tree — except `jtb`, which
    links by (rank, id) priority instead;
  - failed compression swaps are dropped silently (benign races);
  - a root loses its root status exactly once, which is what makes
    spanning-forest edge recording (`DisjointSets.record`) single-shot.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from enum import Enum

from .errors import ConfigError
from .parallel import chunk_bounds, make_striped_cas, run_workers


class UnionOp(Enum):
    ASYNC = "async"
    HOOKS = "hooks"
    EARLY = "early"
    REM_LOCK = "rem_lock"
    REM_CAS = "rem_cas"
    JTB = "jtb"


class FindOp(Enum):
    NAIVE = "naive"
    SPLIT = "split"
    HALVE = "halve"
    COMPRESS = "compress"
    TWO_TRY = "twotry"


class SpliceOp(Enum):
    NONE = "none"
    SPLIT_ONE = "split"
    HALVE_ONE = "halve"
    SPLICE_ATOMIC = "splice"


@dataclass(frozen=True)
class UnionConfig:
    union: UnionOp
    find: FindOp = FindOp.NAIVE
    splice: SpliceOp = SpliceOp.NONE


def valid_combination(cfg: UnionConfig) -> bool:
    """The supported (union, find, splice) matrix: 12 + 18 + 2 combinations."""
    u, f, s = cfg.union, cfg.find, cfg.splice
    if u in (UnionOp.ASYNC, UnionOp.HOOKS, UnionOp.EARLY):
        return (
            f in (FindOp.NAIVE, FindOp.SPLIT, FindOp.HALVE, FindOp.COMPRESS)
            and s is SpliceOp.NONE
        )
    if u in (UnionOp.REM_LOCK, UnionOp.REM_CAS):
        return f in (FindOp.NAIVE, FindOp.SPLIT, FindOp.HALVE) and s in (
            SpliceOp.SPLIT_ONE,
            SpliceOp.HALVE_ONE,
            SpliceOp.SPLICE_ATOMIC,
        )
    if u is UnionOp.JTB:
        return f in (FindOp.NAIVE, FindOp.TWO_TRY) and s is SpliceOp.NONE
    return False


def all_valid_configs() -> list[UnionConfig]:
    out = []
    for u in UnionOp:
        for f in FindOp:
            for s in SpliceOp:
                cfg = UnionConfig(u, f, s)
                if valid_combination(cfg):
                    out.append(cfg)
    return out


def make_set(n: int) -> list[int]:
    return list(range(n))


def _cas_or_write(p, cas, i, old, new) -> bool:
    """One compare-and-swap; plain check-then-write when no cas is installed."""
    if cas is None:
        if p[i] == old:
            p[i] = new
            return True
        return False
    return cas(i, old, new)


# ---------------------------------------------------------------------------
# Finds
# ---------------------------------------------------------------------------


def find_naive(u, p, cas=None):
    while p[u] != u:
        u = p[u]
    return u


def find_compress(u, p, cas=None):
    """Two-pass full compression: locate the root, then re-point the path."""
    r = u
    while p[r] != r:
        r = p[r]
    while (j := p[u]) > r:
        _cas_or_write(p, cas, u, j, r)
        u = j
    return r


def find_split(u, p, cas=None):
    """Path splitting: each visited vertex is swung to its grandparent."""
    v = p[u]
    w = p[v]
    while v != w:
        _cas_or_write(p, cas, u, v, w)
        u = v
        v = p[u]
        w = p[v]
    return v


def find_halve(u, p, cas=None):
    """Path halving: swing to grandparent, then continue from the new parent."""
    v = p[u]
    w = p[v]
    while v != w:
        _cas_or_write(p, cas, u, v, w)
        u = p[u]
        v = p[u]
        w = p[v]
    return v


def find_two_try(u, p, cas=None):
    """Splitting where a failed swap is re-read and retried once per step."""
    v = p[u]
    w = p[v]
    while v != w:
        if not _cas_or_write(p, cas, u, v, w):
            v2 = p[u]
            w2 = p[v2]
            if v2 != w2:
                _cas_or_write(p, cas, u, v2, w2)
        u = v
        v = p[u]
        w = p[v]
    return v


FIND_FNS = {
    FindOp.NAIVE: find_naive,
    FindOp.SPLIT: find_split,
    FindOp.HALVE: find_halve,
    FindOp.COMPRESS: find_compress,
    FindOp.TWO_TRY: find_two_try,
}


# ---------------------------------------------------------------------------
# Splices (one step of a Rem union walk at a non-root position)
# ---------------------------------------------------------------------------


def splice_split_one(u, v, p, cas=None):
    """One split step on u's path; returns u's old parent."""
    pu = p[u]
    w = p[pu]
    if pu != w:
        _cas_or_write(p, cas, u, pu, w)
    return pu


def splice_halve_one(u, v, p, cas=None):
    """One halve step on u's path; returns u's old grandparent."""
    pu = p[u]
    w = p[pu]
    if pu != w:
        _cas_or_write(p, cas, u, pu, w)
    return w


def splice_atomic(u, v, p, cas=None):
    """Rem's splice: swing P[u] onto P[v]; returns u's old parent.

    This may re-point a non-root into the other walker's tree, which is why
    configurations using it are not root-based (no spanning-forest support,
    queries must be separated from unions by a barrier).
    """
    pu = p[u]
    _cas_or_write(p, cas, u, pu, p[v])
    return pu


SPLICE_FNS = {
    SpliceOp.SPLIT_ONE: splice_split_one,
    SpliceOp.HALVE_ONE: splice_halve_one,
    SpliceOp.SPLICE_ATOMIC: splice_atomic,
}


# ---------------------------------------------------------------------------
# Unions. All take (u, v, ds) and return True iff this call merged two trees.
# ---------------------------------------------------------------------------


def union_async(u, v, ds) -> bool:
    p, find, cas = ds.p, ds.find, ds.cas
    pu = find(u, p, cas)
    pv = find(v, p, cas)
    while pu != pv:
        if pu < pv:
            pu, pv = pv, pu
        if p[pu] == pu and _cas_or_write(p, cas, pu, pu, pv):
            ds.record(pu, u, v)
            return True
        pu = find(u, p, cas)
        pv = find(v, p, cas)
    return False


def union_hooks(u, v, ds) -> bool:
    p, h, find, cas, hcas = ds.p, ds.h, ds.find, ds.cas, ds.hcas
    unhooked = ds.n
    pu = find(u, p, cas)
    pv = find(v, p, cas)
    while pu != pv:
        if pu < pv:
            pu, pv = pv, pu
        if p[pu] == pu and _cas_or_write(h, hcas, pu, unhooked, pv):
            # the hook claim is exclusive; this parent write is uncontended
            ds.record(pu, u, v)
            p[pu] = pv
            return True
        pu = find(u, p, cas)
        pv = find(v, p, cas)
    return False


def union_early(u, v, ds) -> bool:
    p, cas = ds.p, ds.cas
    pu, pv = u, v
    merged = False
    while pu != pv:
        if pu < pv:
            pu, pv = pv, pu
        if p[pu] == pu and _cas_or_write(p, cas, pu, pu, pv):
            ds.record(pu, u, v)
            merged = True
            break
        z = p[pu]
        w = p[z]
        if z != w:
            _cas_or_write(p, cas, pu, z, w)
        pu = w
    if ds.find is not find_naive:
        ds.find(u, p, cas)
        ds.find(v, p, cas)
    return merged


def union_rem_lock(u, v, ds) -> bool:
    p, locks, splice, cas = ds.p, ds.locks, ds.splice, ds.cas
    ru, rv = u, v
    while p[ru] != p[rv]:
        if p[ru] < p[rv]:
            ru, rv = rv, ru
        if ru == p[ru]:
            lock = locks[ru]
            lock.acquire()
            pv = p[rv]
            linked = ru == p[ru] and ru > pv
            if linked:
                p[ru] = pv
                ds.record(ru, u, v)
            lock.release()
            if linked:
                return True
            # revalidation failed: another worker moved ru or rv; re-derive
        else:
            ru = splice(ru, rv, p, cas)
    if ds.find is not find_naive:
        ds.find(u, p, cas)
        ds.find(v, p, cas)
    return False


def union_rem_cas(u, v, ds) -> bool:
    p, splice, cas = ds.p, ds.splice, ds.cas
    ru, rv = u, v
    while p[ru] != p[rv]:
        if p[ru] < p[rv]:
            ru, rv = rv, ru
        if ru == p[ru] and _cas_or_write(p, cas, ru, ru, p[rv]):
            ds.record(ru, u, v)
            if ds.find is not find_naive:
                ds.find(u, p, cas)
                ds.find(v, p, cas)
            return True
        ru = splice(ru, rv, p, cas)
    return False


def union_jtb(u, v, ds) -> bool:
    p, ranks, find, cas = ds.p, ds.ranks, ds.find, ds.cas
    while True:
        ru = find(u, p, cas)
        rv = find(v, p, cas)
        if ru == rv:
            return False
        if (ranks[ru], ru) > (ranks[rv], rv):
            ru, rv = rv, ru
        # ru has the lower (rank, id) priority: link it under rv
        if _cas_or_write(p, cas, ru, ru, rv):
            ds.record(ru, u, v)
            return True


UNION_FNS = {
    UnionOp.ASYNC: union_async,
    UnionOp.HOOKS: union_hooks,
    UnionOp.EARLY: union_early,
    UnionOp.REM_LOCK: union_rem_lock,
    UnionOp.REM_CAS: union_rem_cas,
    UnionOp.JTB: union_jtb,
}

_JTB_RANK_SEED = 0x1234


class DisjointSets:
    """Shared union-find state plus the configured kernel functions.

    `forest`, when given, is a length-n list that receives the original
    (u, v) pair at slot r the moment root r is hooked away.
    """

    def __init__(self, n, cfg: UnionConfig, threaded=False, seed=_JTB_RANK_SEED,
                 forest=None):
        if not valid_combination(cfg):
            raise ConfigError(f"unsupported union-find combination: {cfg}")
        self.n = n
        self.cfg = cfg
        self.p = make_set(n)
        self.find = FIND_FNS[cfg.find]
        self.splice = SPLICE_FNS.get(cfg.splice)
        self.forest = forest
        self.cas = None
        self.hcas = None
        self.h = None
        self.locks = None
        self.ranks = None
        if cfg.union is UnionOp.HOOKS:
            self.h = [n] * n
        elif cfg.union is UnionOp.REM_LOCK:
            self.locks = [threading.Lock() for _ in range(n)]
        elif cfg.union is UnionOp.JTB:
            rng = random.Random(seed)
            self.ranks = [rng.getrandbits(32) for _ in range(n)]
        if threaded:
            self.cas, stripes = make_striped_cas(self.p)
            if self.h is not None:
                self.hcas, _ = make_striped_cas(self.h, stripes)
        self._union = UNION_FNS[cfg.union]

    def union(self, u: int, v: int) -> bool:
        return self._union(u, v, self)

    def find_root(self, u: int) -> int:
        return self.find(u, self.p, self.cas)

    def same_set(self, u: int, v: int) -> bool:
        """Read-only connectivity probe (no compression writes)."""
        return find_naive(u, self.p) == find_naive(v, self.p)

    def record(self, slot: int, u: int, v: int) -> None:
        if self.forest is not None:
            self.forest[slot] = (u, v)

    def labels_array(self):
        import numpy as np

        return np.array([find_naive(v, self.p) for v in range(self.n)],
                        dtype=np.int64)


def union_edge_list(ds: DisjointSets, us, vs, workers=1) -> None:
    """Apply ds.union over parallel endpoint lists, chunked across workers."""
    if workers <= 1:
        union = ds.union
        for u, v in zip(us, vs):
            union(u, v)
        return

    def body(wid):
        lo, hi = chunk_bounds(len(us), workers, wid)
        union = ds.union
        for i in range(lo, hi):
            union(us[i], vs[i])

    run_workers(workers, body)
