"""Min-based round-synchronous finish kernels (non union-find).

All four algorithm families here operate on a shared label array where
labels[v] <= v and every value only ever decreases (messages are combined by
minimum). Rounds are barrier-synchronous: each round reads a consistent
snapshot and applies commutative atomic-min writes, so any decomposition of a
round across workers produces identical labels — the kernels are therefore
expressed as whole-array numpy operations and the worker count cannot change
their output.

Inputs are a working edge set in COO form (directed pairs gathered from the
active vertices); `orig_pairs` carries the original endpoints per working
edge so spanning-forest recording survives the alter phase's rewrites.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class ConnectRule(Enum):
    CONNECT = "connect"
    PARENT = "parent_connect"
    EXTENDED = "extended_connect"


class UpdateRule(Enum):
    ALL = "update"
    ROOTS = "root_update"


class ShortcutRule(Enum):
    ONE = "shortcut"
    FULL = "full_shortcut"


@dataclass(frozen=True)
class LTVariant:
    name: str
    connect: ConnectRule
    update: UpdateRule
    shortcut: ShortcutRule
    alter: bool

    def __post_init__(self):
        # endpoint-id messages are meaningless once labels drift from ids,
        # so plain Connect always rewrites the working edges
        if self.connect is ConnectRule.CONNECT and not self.alter:
            raise ValueError(f"{self.name}: Connect requires the alter phase")


def _lt(name, connect, update, shortcut, alter):
    return LTVariant(name, connect, update, shortcut, alter)


LT_VARIANTS = {
    v.name: v
    for v in [
        _lt("cusa", ConnectRule.CONNECT, UpdateRule.ALL, ShortcutRule.ONE, True),
        _lt("crsa", ConnectRule.CONNECT, UpdateRule.ROOTS, ShortcutRule.ONE, True),
        _lt("pusa", ConnectRule.PARENT, UpdateRule.ALL, ShortcutRule.ONE, True),
        _lt("prsa", ConnectRule.PARENT, UpdateRule.ROOTS, ShortcutRule.ONE, True),
        _lt("pus", ConnectRule.PARENT, UpdateRule.ALL, ShortcutRule.ONE, False),
        _lt("prs", ConnectRule.PARENT, UpdateRule.ROOTS, ShortcutRule.ONE, False),
        _lt("eusa", ConnectRule.EXTENDED, UpdateRule.ALL, ShortcutRule.ONE, True),
        _lt("eus", ConnectRule.EXTENDED, UpdateRule.ALL, ShortcutRule.ONE, False),
        _lt("cufa", ConnectRule.CONNECT, UpdateRule.ALL, ShortcutRule.FULL, True),
        _lt("crfa", ConnectRule.CONNECT, UpdateRule.ROOTS, ShortcutRule.FULL, True),
        _lt("pufa", ConnectRule.PARENT, UpdateRule.ALL, ShortcutRule.FULL, True),
        _lt("prfa", ConnectRule.PARENT, UpdateRule.ROOTS, ShortcutRule.FULL, True),
        _lt("puf", ConnectRule.PARENT, UpdateRule.ALL, ShortcutRule.FULL, False),
        _lt("prf", ConnectRule.PARENT, UpdateRule.ROOTS, ShortcutRule.FULL, False),
        _lt("eufa", ConnectRule.EXTENDED, UpdateRule.ALL, ShortcutRule.FULL, True),
        _lt("euf", ConnectRule.EXTENDED, UpdateRule.ALL, ShortcutRule.FULL, False),
    ]
}


def is_root_based(variant: LTVariant) -> bool:
    """Root-based variants only redirect tree roots in the update phase."""
    return variant.update is UpdateRule.ROOTS


def _full_shortcut(labels: np.ndarray) -> None:
    while True:
        nxt = labels[labels]
        if np.array_equal(nxt, labels):
            return
        labels[:] = nxt


def _record_winners(forest, orig_pairs, recipients, values, edge_idx, new_labels,
                    lowered_roots):
    """Record, per freshly-hooked root, the edge whose message won the min.

    The winning message's value equals the root's new label; ties are broken
    toward the smallest original edge index, which makes single-worker runs
    reproducible. Each root is lowered in exactly one round, so slots are
    written at most once.
    """
    cand = lowered_roots[recipients] & (values == new_labels[recipients])
    if not cand.any():
        return
    rec_c = recipients[cand]
    idx_c = edge_idx[cand]
    order = np.lexsort((idx_c, rec_c))
    rec_s = rec_c[order]
    keep = np.ones(len(rec_s), dtype=bool)
    keep[1:] = rec_s[1:] != rec_s[:-1]
    for pos in np.flatnonzero(keep):
        r = int(rec_s[pos])
        i = int(idx_c[order[pos]])
        forest[r] = (int(orig_pairs[i, 0]), int(orig_pairs[i, 1]))


# ---------------------------------------------------------------------------
# Shiloach-Vishkin
# ---------------------------------------------------------------------------


def shiloach_vishkin(n, eu, ev, labels, counter=None, orig_pairs=None,
                     forest=None, phase="finish", on_round=None) -> int:
    """Hook the larger endpoint label onto the smaller, roots only, then
    fully shortcut everything; repeat to fixpoint. Returns the round count."""
    prev = labels.copy()
    rounds = 0
    m = len(eu)
    while True:
        rounds += 1
        if counter is not None and m:
            counter.add(phase, m)
        pu = labels[eu]
        pv = labels[ev]
        lo = np.minimum(pu, pv)
        hi = np.maximum(pu, pv)
        mask = (lo != hi) & (prev[hi] == hi)
        changed = bool(mask.any())
        if changed:
            hi_m = hi[mask]
            lo_m = lo[mask]
            np.minimum.at(labels, hi_m, lo_m)
            if forest is not None:
                lowered = np.zeros(n, dtype=bool)
                lowered[hi_m] = True
                _record_winners(forest, orig_pairs, hi_m, lo_m,
                                np.flatnonzero(mask), labels, lowered)
        _full_shortcut(labels)
        prev[:] = labels
        if on_round is not None:
            on_round(labels)
        if not changed:
            return rounds


# ---------------------------------------------------------------------------
# Liu-Tarjan rule family
# ---------------------------------------------------------------------------


def liu_tarjan(n, eu, ev, labels, variant: LTVariant, counter=None,
               orig_pairs=None, forest=None, phase="finish",
               on_round=None) -> int:
    """One Liu-Tarjan variant: per round connect / update / shortcut / alter,
    until a whole round leaves the labels unchanged.

    Working edges start mapped through the current labels (the alter rule
    applied once up front). On identity labels that is a plain copy; on
    seeded labels (post-sampling, or between incremental batches) it points
    the edges at tree roots, which keeps every rule family making progress
    and makes the unchanged-round termination test sound: if a round changes
    no label, the labels are flat, every rewritten endpoint is a root, and
    any still-open edge would have lowered one — so none are open."""
    work_u = labels[eu]
    work_v = labels[ev]
    edge_idx = np.arange(len(eu), dtype=np.int64)
    ids = np.arange(n, dtype=np.int64)
    rounds = 0
    while True:
        rounds += 1
        if counter is not None and len(work_u):
            counter.add(phase, len(work_u))
        start = labels.copy()

        # connect: accumulate per-vertex minimum messages
        if variant.connect is ConnectRule.CONNECT:
            rec = np.concatenate([work_u, work_v])
            val = np.concatenate([work_v, work_u])
            idx = np.concatenate([edge_idx, edge_idx])
        elif variant.connect is ConnectRule.PARENT:
            # delivered at the parents: each side's parent is offered to the
            # other side's parent, so (near-)roots always hear about merges
            pu = labels[work_u]
            pv = labels[work_v]
            rec = np.concatenate([pu, pv])
            val = np.concatenate([pv, pu])
            idx = np.concatenate([edge_idx, edge_idx])
        else:
            pu = labels[work_u]
            pv = labels[work_v]
            rec = np.concatenate([work_u, work_v, pu, pv])
            val = np.concatenate([pv, pu, pv, pu])
            idx = np.concatenate([edge_idx] * 4)
        msg = labels.copy()
        if len(rec):
            np.minimum.at(msg, rec, val)

        # update
        if variant.update is UpdateRule.ALL:
            new = msg
        else:
            roots = labels == ids
            new = labels.copy()
            new[roots] = msg[roots]
        if forest is not None and len(rec):
            lowered_roots = (labels == ids) & (new < labels)
            if lowered_roots.any():
                _record_winners(forest, orig_pairs, rec, val, idx, new,
                                lowered_roots)
        labels[:] = new

        # shortcut
        if variant.shortcut is ShortcutRule.FULL:
            _full_shortcut(labels)
        else:
            labels[:] = labels[labels]

        # alter: rewrite working edges to current labels, drop closed ones
        if variant.alter:
            work_u = labels[work_u]
            work_v = labels[work_v]
            keep = work_u != work_v
            if not keep.all():
                work_u = work_u[keep]
                work_v = work_v[keep]
                edge_idx = edge_idx[keep]

        if on_round is not None:
            on_round(labels)
        if np.array_equal(labels, start):
            return rounds


# ---------------------------------------------------------------------------
# Stergiou's two-array variant
# ---------------------------------------------------------------------------


def stergiou(n, eu, ev, labels, counter=None, phase="finish",
             on_round=None) -> int:
    """Reads come exclusively from the previous round's array; each edge
    minimum-combines into the current one both at the endpoints and at their
    previous labels (so a label entry shared by many vertices is lowered in
    one write), plus a one-step self-shortcut; swap until stable."""
    prev = labels.copy()
    rounds = 0
    while True:
        rounds += 1
        if counter is not None and len(eu):
            counter.add(phase, len(eu))
        cur = np.minimum(prev, prev[prev])
        if len(eu):
            pu = prev[eu]
            pv = prev[ev]
            np.minimum.at(cur, eu, pv)
            np.minimum.at(cur, ev, pu)
            np.minimum.at(cur, pu, pv)
            np.minimum.at(cur, pv, pu)
        if on_round is not None:
            on_round(cur)
        if np.array_equal(cur, prev):
            labels[:] = cur
            return rounds
        prev = cur


# ---------------------------------------------------------------------------
# Label propagation
# ---------------------------------------------------------------------------


def label_propagation(n, eu, ev, labels, counter=None, phase="finish",
                      on_round=None) -> int:
    """Per round, the larger endpoint label of every differing edge is
    lowered to the smaller one — no pointer chasing, plain propagation."""
    rounds = 0
    while True:
        rounds += 1
        if counter is not None and len(eu):
            counter.add(phase, len(eu))
        lu = labels[eu]
        lv = labels[ev]
        m1 = lu > lv
        m2 = lv > lu
        if not (m1.any() or m2.any()):
            return rounds
        if m1.any():
            np.minimum.at(labels, eu[m1], lv[m1])
        if m2.any():
            np.minimum.at(labels, ev[m2], lu[m2])
        if on_round is not None:
            on_round(labels)
