"""Top-level drivers: two-phase static connectivity, spanning forest, and
batch-incremental connectivity.

A run is described by an AlgorithmSpec — sampling strategy plus finish
algorithm (plus the union-find configuration where one applies). Spec
strings use the grammar

    sample+finish[+find[+splice]]

e.g. ``kout+async+halve``, ``none+rem_cas+naive+splice``, ``bfs+lt_prs``,
``hb+sv``. The find token applies only to union-find finishes (default
``naive``); the splice token only to the two Rem finishes (default
``splice``).

Phases are barrier-separated: sampling, most-frequent-label, finish,
finalization; the incremental driver runs each batch as an insert sub-phase,
a barrier, then a query sub-phase.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .dset import (
    DisjointSets,
    FindOp,
    SpliceOp,
    UnionConfig,
    UnionOp,
    all_valid_configs,
    union_edge_list,
    valid_combination,
)
from .errors import ConfigError
from .graphs import Graph
from .minbased import (
    LT_VARIANTS,
    LTVariant,
    is_root_based as lt_is_root_based,
    label_propagation,
    liu_tarjan,
    shiloach_vishkin,
    stergiou,
)
from .parallel import chunk_bounds, run_workers
from .sampling import (
    BFS_DEFAULT_PROBES,
    HB_DEFAULT_EDGES,
    KOUT_DEFAULT_K,
    KOutMode,
    bfs_sample,
    compress_all,
    hb_sample,
    kout_sample,
    most_frequent_label,
)
from .validate import InspectionCounter, RunStats, canonical_labels


class SampleKind(Enum):
    NONE = "none"
    KOUT = "kout"
    HB = "hb"
    BFS = "bfs"


class FinishKind(Enum):
    ASYNC = "async"
    HOOKS = "hooks"
    EARLY = "early"
    REM_LOCK = "rem_lock"
    REM_CAS = "rem_cas"
    JTB = "jtb"
    SV = "sv"
    LT = "lt"
    STERGIOU = "stergiou"
    LP = "lp"


_UNION_FINISHES = {
    FinishKind.ASYNC: UnionOp.ASYNC,
    FinishKind.HOOKS: UnionOp.HOOKS,
    FinishKind.EARLY: UnionOp.EARLY,
    FinishKind.REM_LOCK: UnionOp.REM_LOCK,
    FinishKind.REM_CAS: UnionOp.REM_CAS,
    FinishKind.JTB: UnionOp.JTB,
}

# the union-find configuration samplers fall back to when the finish
# algorithm is not itself a union-find variant
_SAMPLER_FALLBACK = UnionConfig(UnionOp.ASYNC, FindOp.HALVE)


@dataclass(frozen=True)
class AlgorithmSpec:
    sample: SampleKind = SampleKind.NONE
    finish: FinishKind = FinishKind.ASYNC
    cfg: Optional[UnionConfig] = None
    lt_variant: Optional[LTVariant] = None
    kout_k: int = KOUT_DEFAULT_K
    kout_mode: KOutMode = KOutMode.FIRST_K
    hb_edges: int = HB_DEFAULT_EDGES
    bfs_probes: int = BFS_DEFAULT_PROBES
    seed: int = 1

    def __post_init__(self):
        if self.finish in _UNION_FINISHES:
            cfg = self.cfg
            if cfg is None:
                cfg = _default_cfg(self.finish)
                object.__setattr__(self, "cfg", cfg)
            if cfg.union is not _UNION_FINISHES[self.finish]:
                raise ConfigError(
                    f"finish '{self.finish.value}' does not match union rule "
                    f"'{cfg.union.value}'"
                )
            if not valid_combination(cfg):
                raise ConfigError(
                    f"unsupported combination {_cfg_str(cfg)}; valid ones are: "
                    + ", ".join(_cfg_str(c) for c in all_valid_configs())
                )
        elif self.cfg is not None:
            raise ConfigError(
                f"finish '{self.finish.value}' takes no find/splice rules"
            )
        if self.finish is FinishKind.LT:
            if self.lt_variant is None:
                raise ConfigError(
                    "lt finish requires a variant: "
                    + ", ".join(sorted(LT_VARIANTS))
                )
        elif self.lt_variant is not None:
            raise ConfigError(
                f"finish '{self.finish.value}' takes no lt variant"
            )

    def is_union_finish(self) -> bool:
        return self.finish in _UNION_FINISHES

    def is_root_based(self) -> bool:
        """True when only tree roots are ever redirected into other trees —
        the prerequisite for spanning-forest recording."""
        if self.is_union_finish():
            return self.cfg.splice is not SpliceOp.SPLICE_ATOMIC
        if self.finish is FinishKind.SV:
            return True
        if self.finish is FinishKind.LT:
            return lt_is_root_based(self.lt_variant)
        return False

    def incremental_capable(self) -> bool:
        """Union-find finishes (any splice — the batch barrier separates
        unions from queries), Shiloach-Vishkin, and root-based LT variants."""
        if self.is_union_finish():
            return True
        if self.finish is FinishKind.SV:
            return True
        if self.finish is FinishKind.LT:
            return lt_is_root_based(self.lt_variant)
        return False


def _default_cfg(finish: FinishKind) -> UnionConfig:
    union = _UNION_FINISHES[finish]
    if union in (UnionOp.REM_LOCK, UnionOp.REM_CAS):
        return UnionConfig(union, FindOp.NAIVE, SpliceOp.SPLICE_ATOMIC)
    return UnionConfig(union, FindOp.NAIVE)


def _cfg_str(cfg: UnionConfig) -> str:
    s = f"{cfg.union.value}+{cfg.find.value}"
    if cfg.splice is not SpliceOp.NONE:
        s += f"+{cfg.splice.value}"
    return s


_SAMPLE_TOKENS = {k.value: k for k in SampleKind}
_FIND_TOKENS = {f.value: f for f in FindOp}
_SPLICE_TOKENS = {
    SpliceOp.SPLIT_ONE.value: SpliceOp.SPLIT_ONE,
    SpliceOp.HALVE_ONE.value: SpliceOp.HALVE_ONE,
    SpliceOp.SPLICE_ATOMIC.value: SpliceOp.SPLICE_ATOMIC,
}


def _finish_tokens() -> list[str]:
    toks = [k.value for k in FinishKind if k is not FinishKind.LT]
    toks += [f"lt_{name}" for name in LT_VARIANTS]
    return toks


def parse_spec(text: str, **overrides) -> AlgorithmSpec:
    """Parse a ``sample+finish[+find[+splice]]`` spec string."""
    parts = text.strip().lower().split("+")
    if len(parts) < 2:
        raise ConfigError(
            f"spec '{text}' needs at least sample+finish; samples: "
            + ", ".join(sorted(_SAMPLE_TOKENS))
            + "; finishes: "
            + ", ".join(_finish_tokens())
        )
    if parts[0] not in _SAMPLE_TOKENS:
        raise ConfigError(
            f"unknown sampling '{parts[0]}'; valid: "
            + ", ".join(sorted(_SAMPLE_TOKENS))
        )
    sample = _SAMPLE_TOKENS[parts[0]]

    ftok = parts[1]
    lt_variant = None
    if ftok.startswith("lt_"):
        name = ftok[3:]
        if name not in LT_VARIANTS:
            raise ConfigError(
                f"unknown lt variant '{name}'; valid: "
                + ", ".join(sorted(LT_VARIANTS))
            )
        finish = FinishKind.LT
        lt_variant = LT_VARIANTS[name]
    else:
        try:
            finish = FinishKind(ftok)
        except ValueError:
            raise ConfigError(
                f"unknown finish '{ftok}'; valid: " + ", ".join(_finish_tokens())
            ) from None
        if finish is FinishKind.LT:
            raise ConfigError(
                "lt finish needs a variant suffix, e.g. "
                + ", ".join(f"lt_{n}" for n in sorted(LT_VARIANTS))
            )

    rest = parts[2:]
    cfg = None
    if finish in _UNION_FINISHES:
        union = _UNION_FINISHES[finish]
        find = FindOp.NAIVE
        splice = SpliceOp.NONE
        if union in (UnionOp.REM_LOCK, UnionOp.REM_CAS):
            splice = SpliceOp.SPLICE_ATOMIC
        if rest:
            if rest[0] not in _FIND_TOKENS:
                raise ConfigError(
                    f"unknown find rule '{rest[0]}'; valid: "
                    + ", ".join(sorted(_FIND_TOKENS))
                )
            find = _FIND_TOKENS[rest[0]]
            rest = rest[1:]
        if rest:
            if rest[0] not in _SPLICE_TOKENS:
                raise ConfigError(
                    f"unknown splice rule '{rest[0]}'; valid: "
                    + ", ".join(sorted(_SPLICE_TOKENS))
                )
            splice = _SPLICE_TOKENS[rest[0]]
            rest = rest[1:]
        cfg = UnionConfig(union, find, splice)
        if not valid_combination(cfg):
            raise ConfigError(
                f"unsupported combination '{text}'; valid union combinations: "
                + ", ".join(_cfg_str(c) for c in all_valid_configs())
            )
    if rest:
        raise ConfigError(
            f"trailing tokens {rest} in spec '{text}' — "
            f"finish '{ftok}' takes "
            + ("find[+splice] only" if cfg is not None else "no further rules")
        )
    return AlgorithmSpec(
        sample=sample, finish=finish, cfg=cfg, lt_variant=lt_variant, **overrides
    )


def format_spec(spec: AlgorithmSpec) -> str:
    if spec.finish is FinishKind.LT:
        fin = f"lt_{spec.lt_variant.name}"
    elif spec.is_union_finish():
        fin = _cfg_str(spec.cfg)
    else:
        fin = spec.finish.value
    return f"{spec.sample.value}+{fin}"


def enumerate_specs(samples=None) -> list[AlgorithmSpec]:
    """Every supported spec: all sampling kinds crossed with the 32 union
    combinations, Shiloach-Vishkin, the 16 LT variants, Stergiou, and LP."""
    if samples is None:
        samples = list(SampleKind)
    finishes = []
    for cfg in all_valid_configs():
        kind = next(k for k, u in _UNION_FINISHES.items() if u is cfg.union)
        finishes.append((kind, cfg, None))
    finishes.append((FinishKind.SV, None, None))
    for name in LT_VARIANTS:
        finishes.append((FinishKind.LT, None, LT_VARIANTS[name]))
    finishes.append((FinishKind.STERGIOU, None, None))
    finishes.append((FinishKind.LP, None, None))
    return [
        AlgorithmSpec(sample=s, finish=k, cfg=c, lt_variant=v)
        for s in samples
        for (k, c, v) in finishes
    ]


# ---------------------------------------------------------------------------
# Shared phase helpers
# ---------------------------------------------------------------------------


def _flat_slices(offsets, verts, take):
    total = int(take.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    starts = offsets[verts]
    return np.arange(total, dtype=np.int64) + np.repeat(
        starts - np.concatenate(([0], np.cumsum(take)[:-1])), take
    )


def _gather_edges(g: Graph, active: np.ndarray):
    """All directed edges out of the active vertices, as COO arrays."""
    deg = g.degrees[active]
    src = np.repeat(active, deg).astype(np.int64)
    dst = g.targets[_flat_slices(g.offsets, active, deg)].astype(np.int64)
    return src, dst


def _union_finish(g: Graph, ds: DisjointSets, active, workers, counter):
    """Process every edge incident to an active vertex with ds.union."""
    if counter is not None:
        counter.add("finish", int(g.degrees[active].sum()))
    act = active.tolist()
    offsets, targets = g.offsets_list, g.targets_list

    def body(wid):
        lo, hi = chunk_bounds(len(act), workers, wid)
        union = ds.union
        for i in range(lo, hi):
            u = act[i]
            for j in range(offsets[u], offsets[u + 1]):
                union(u, targets[j])

    run_workers(workers, body)


def _rounds_finish(g, spec, labels, active, counter, forest):
    """Dispatch to the round-synchronous kernels over the gathered COO."""
    n = g.n
    src, dst = _gather_edges(g, active)
    if spec.finish is FinishKind.LP:
        # the first round's scan is the gather itself; the kernel charges
        # the working set per round.  Endpoints are rewritten to their
        # current labels so propagation runs between partial-component
        # representatives: a plain-label kernel has no pointer indirection,
        # and vertices sharing a label after sampling would otherwise be
        # split when only some of them hear about a smaller label (their
        # connecting edges are not revisited).  With identity labels the
        # rewrite is a no-op.
        return label_propagation(n, labels[src], labels[dst], labels, counter)
    if counter is not None and len(src):
        counter.add("finish", len(src))
    orig = np.stack([src, dst], axis=1) if forest is not None else None
    if spec.finish is FinishKind.SV:
        return shiloach_vishkin(n, src, dst, labels, counter, orig, forest)
    if spec.finish is FinishKind.LT:
        return liu_tarjan(n, src, dst, labels, spec.lt_variant, counter, orig,
                          forest)
    if spec.finish is FinishKind.STERGIOU:
        return stergiou(n, src, dst, labels, counter)
    raise ConfigError(f"not a round-based finish: {spec.finish}")


def _run_sampling(g, spec, ds, workers, counter, forest):
    """Run the configured sampler; returns compressed post-sampling labels.

    ``ds`` is the finish phase's DisjointSets when the finish is union-find
    (the sampler shares its configuration and state); otherwise the sampler
    gets a private union-find and only the labels flow onward.
    """
    n = g.n
    if spec.sample is SampleKind.NONE:
        if ds is not None:
            return np.array(ds.p, dtype=np.int64)
        return np.arange(n, dtype=np.int64)
    if spec.sample is SampleKind.BFS:
        labels = np.arange(n, dtype=np.int64)
        bfs_sample(g, labels, spec.bfs_probes, spec.seed, counter, forest)
        if ds is not None:
            ds.p[:] = labels.tolist()
        return labels
    sampler_ds = ds
    if sampler_ds is None:
        sampler_ds = DisjointSets(n, _SAMPLER_FALLBACK, threaded=workers > 1,
                                  forest=forest)
    if spec.sample is SampleKind.KOUT:
        return kout_sample(g, sampler_ds, spec.kout_k, spec.kout_mode, workers,
                           spec.seed, counter)
    return hb_sample(g, sampler_ds, spec.hb_edges, workers, counter)


def _metrics(g: Graph, labels: np.ndarray):
    """Coverage of the most frequent label and the fraction of directed
    edges still crossing labels (the harness route; validate has its own)."""
    n = g.n
    if n == 0:
        return 1.0, 0.0
    cov = np.bincount(labels, minlength=n).max() / n
    if g.m == 0:
        return float(cov), 0.0
    src = np.repeat(np.arange(n, dtype=np.int64), g.degrees)
    ic = np.count_nonzero(labels[src] != labels[g.targets]) / g.m
    return float(cov), float(ic)


def label_finalization(labels) -> np.ndarray:
    """Chase every label to its root, then relabel each class with its
    minimum member, so outputs are canonical and directly comparable."""
    arr = np.array(labels, dtype=np.int64)
    while True:
        nxt = arr[arr]
        if np.array_equal(nxt, arr):
            break
        arr = nxt
    return canonical_labels(arr)


def finish_phase(g: Graph, labels, l_max, spec: AlgorithmSpec, workers=1,
                 counter=None, forest=None) -> np.ndarray:
    """Run just the finish algorithm over the vertices not labeled l_max."""
    labels = np.array(labels, dtype=np.int64)
    active = np.flatnonzero(labels != l_max)
    if len(active) == 0:
        return labels
    if spec.is_union_finish():
        ds = DisjointSets(g.n, spec.cfg, threaded=workers > 1, seed=spec.seed,
                          forest=forest)
        ds.p[:] = labels.tolist()
        _union_finish(g, ds, active, workers, counter)
        return np.array(ds.p, dtype=np.int64)
    _rounds_finish(g, spec, labels, active, counter, forest)
    return labels


# ---------------------------------------------------------------------------
# Static connectivity and spanning forest
# ---------------------------------------------------------------------------


def _pipeline(g: Graph, spec: AlgorithmSpec, workers, forest):
    n = g.n
    stats = RunStats()
    counter = InspectionCounter()
    ds = None
    if spec.is_union_finish():
        ds = DisjointSets(n, spec.cfg, threaded=workers > 1, seed=spec.seed,
                          forest=forest)
        if spec.finish is FinishKind.JTB:
            stats.notes.append("reference-approximate")

    t0 = time.perf_counter()
    post_sample = _run_sampling(g, spec, ds, workers, counter, forest)
    if spec.sample is SampleKind.NONE:
        l_max = n  # sentinel matching no vertex: the finish sees all of V
    else:
        l_max = most_frequent_label(post_sample)
    t1 = time.perf_counter()

    active = np.flatnonzero(post_sample != l_max)
    rounds = 0
    if len(active):
        if ds is not None:
            _union_finish(g, ds, active, workers, counter)
        else:
            labels = post_sample.copy()
            rounds = _rounds_finish(g, spec, labels, active, counter, forest)
    t2 = time.perf_counter()

    if ds is not None:
        raw = np.array(ds.p, dtype=np.int64)
    elif len(active):
        raw = labels
    else:
        raw = post_sample.copy()
    final = label_finalization(raw)
    t3 = time.perf_counter()

    stats.phase_times = {"sample": t1 - t0, "finish": t2 - t1,
                         "finalize": t3 - t2}
    stats.edge_inspections = dict(counter.by_phase)
    stats.cov, stats.ic = _metrics(g, post_sample)
    total = t3 - t0
    stats.sampling_ratio = (t1 - t0) / total if total > 0 else 0.0
    stats.rounds = rounds
    stats.component_count = int(len(np.unique(final))) if n else 0
    return final, raw, stats


def static_connectivity(g: Graph, spec: AlgorithmSpec, workers=1):
    """Two-phase connectivity; returns (labels, stats) with labels finalized
    to each component's minimum vertex id."""
    final, _raw, stats = _pipeline(g, spec, workers, forest=None)
    return final, stats


@dataclass
class ForestEdges:
    """Slot r holds the edge recorded when vertex r lost its root status."""

    edges: list

    def populated(self) -> list:
        return [e for e in self.edges if e is not None]

    def __len__(self) -> int:
        return sum(1 for e in self.edges if e is not None)


def spanning_forest(g: Graph, spec: AlgorithmSpec, workers=1):
    """Root-based runs double as spanning-forest builders: the winner of
    each root hook records its edge. No finalization pass is needed."""
    if not spec.is_root_based():
        raise ConfigError(
            f"spanning forest needs a root-based finish; '{format_spec(spec)}'"
            " is not (label-propagation family, Stergiou, non-root LT"
            " variants, and Rem with the splice rule redirect non-roots)"
        )
    forest = [None] * g.n
    _final, _raw, stats = _pipeline(g, spec, workers, forest=forest)
    fe = ForestEdges(forest)
    stats.component_count = g.n - len(fe)
    return fe, stats


# ---------------------------------------------------------------------------
# Incremental connectivity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Insert:
    u: int
    v: int


@dataclass(frozen=True)
class Query:
    u: int
    v: int


def _root_chase(p, x, sentinel):
    """Read-only root (uninitialized vertices count as their own root)."""
    px = p[x]
    if px == sentinel:
        return x
    while px != x:
        x = px
        px = p[x]
    return x


def incremental(init: Optional[Graph], spec: AlgorithmSpec, batches,
                workers=1, capacity=None, racy=False, on_batch=None):
    """Process batches of Insert/Query ops; returns (labels, results, stats).

    Each batch runs as an insert sub-phase, a barrier, then a query
    sub-phase, so queries observe all inserts of their own batch. ``racy``
    interleaves the two for throughput measurement; query bits are then only
    sanity-checkable (true still implies connected). Vertices are
    initialized lazily by claiming their label from a sentinel. Sampling is
    never used on batches.
    """
    if not spec.incremental_capable():
        raise ConfigError(
            f"incremental needs a root-based finish; '{format_spec(spec)}'"
            " is not supported"
        )
    if racy:
        if not spec.is_union_finish():
            raise ConfigError(
                "racy mode interleaves single ops and only works with"
                " union-find finishes"
            )
        if spec.cfg.splice is SpliceOp.SPLICE_ATOMIC:
            raise ConfigError(
                "the splice rule moves non-roots across trees mid-union;"
                " interleaved queries would observe torn components —"
                " use the batched (non-racy) mode"
            )
    batches = [list(b) for b in batches]
    cap = capacity or 0
    if init is not None:
        cap = max(cap, init.n)
    for b in batches:
        for op in b:
            cap = max(cap, op.u + 1, op.v + 1)

    sentinel = cap
    stats = RunStats()
    counter = InspectionCounter()
    ds = None
    labels = None
    if spec.is_union_finish():
        ds = DisjointSets(cap, spec.cfg, threaded=workers > 1, seed=spec.seed)
        p = ds.p
        for v in range(cap):
            p[v] = sentinel
        if spec.finish is FinishKind.JTB:
            stats.notes.append("reference-approximate")
    else:
        # one extra slot so the sentinel value is a valid self-looped index
        # for the kernels' labels[labels] shortcuts
        labels = np.full(cap + 1, sentinel, dtype=np.int64)

    def ensure_init(v):
        if ds.cas is None:
            if p[v] == sentinel:
                p[v] = v
        else:
            ds.cas(v, sentinel, v)

    def insert_edges(us, vs):
        if ds is not None:
            for x in us:
                ensure_init(x)
            for x in vs:
                ensure_init(x)
            if counter is not None:
                counter.add("insert", len(us))
            union_edge_list(ds, us, vs, workers)
        else:
            eu = np.array(us, dtype=np.int64)
            ev = np.array(vs, dtype=np.int64)
            fresh = np.unique(np.concatenate([eu, ev]))
            uninit = fresh[labels[fresh] == sentinel]
            labels[uninit] = uninit
            counter.add("insert", len(us))
            if spec.finish is FinishKind.SV:
                stats.rounds += shiloach_vishkin(cap + 1, eu, ev, labels,
                                                 counter, phase="insert")
            else:
                stats.rounds += liu_tarjan(cap + 1, eu, ev, labels,
                                           spec.lt_variant, counter,
                                           phase="insert")

    # the initial graph is an untimed insert-only prologue
    if init is not None and init.m:
        ue = init.undirected_edges()
        insert_edges(ue[:, 0].tolist(), ue[:, 1].tolist())

    state = p if ds is not None else labels

    def run_queries(qs, bits, positions):
        def body(wid):
            lo, hi = chunk_bounds(len(qs), workers, wid)
            for i in range(lo, hi):
                u, v = qs[i]
                ru = _root_chase(state, u, sentinel)
                rv = _root_chase(state, v, sentinel)
                if ru == rv:
                    bits[positions[i]] = True

        run_workers(workers, body)

    results = []
    t_ins = t_qry = 0.0
    for bi, batch in enumerate(batches):
        bits = np.zeros(len(batch), dtype=bool)
        if racy and ds is not None:
            t0 = time.perf_counter()
            ops = list(enumerate(batch))

            def body(wid):
                lo, hi = chunk_bounds(len(ops), workers, wid)
                for i in range(lo, hi):
                    pos, op = ops[i]
                    if isinstance(op, Insert):
                        ensure_init(op.u)
                        ensure_init(op.v)
                        ds.union(op.u, op.v)
                    else:
                        ru = _root_chase(state, op.u, sentinel)
                        rv = _root_chase(state, op.v, sentinel)
                        if ru == rv:
                            bits[pos] = True

            counter.add("insert", sum(isinstance(o, Insert) for o in batch))
            run_workers(workers, body)
            t_ins += time.perf_counter() - t0
        else:
            ins = [(op.u, op.v) for op in batch if isinstance(op, Insert)]
            qs = [(op.u, op.v) for op in batch if isinstance(op, Query)]
            positions = [i for i, op in enumerate(batch)
                         if isinstance(op, Query)]
            t0 = time.perf_counter()
            if ins:
                insert_edges([e[0] for e in ins], [e[1] for e in ins])
            t1 = time.perf_counter()
            if qs:
                run_queries(qs, bits, positions)
            t2 = time.perf_counter()
            t_ins += t1 - t0
            t_qry += t2 - t1
        results.append(bits)
        if on_batch is not None:
            on_batch(bi, state)

    stats.phase_times = {"insert": t_ins, "query": t_qry}
    stats.edge_inspections = dict(counter.by_phase)
    if ds is not None:
        out = np.array(p, dtype=np.int64)
    else:
        out = labels[:cap].copy()
    inited = out != sentinel
    out[~inited] = np.flatnonzero(~inited)
    final = label_finalization(out)
    stats.component_count = (
        int(len(np.unique(final[inited]))) if inited.any() else 0
    )
    return final, results, stats
