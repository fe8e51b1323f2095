"""Round-synchronous label kernels: variant census, convergence, monotonicity."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from connlab import LT_VARIANTS, LTVariant
from connlab.minbased import is_root_based
from connlab.minbased import (
    ConnectRule,
    ShortcutRule,
    UpdateRule,
    label_propagation,
    liu_tarjan,
    shiloach_vishkin,
    stergiou,
)
from connlab.validate import canonical_labels, partition_equal
from helpers import graph_from_pairs, oracle

EXPECTED_VARIANTS = {
    "cusa", "crsa", "pusa", "prsa", "pus", "prs", "eusa", "eus",
    "cufa", "crfa", "pufa", "prfa", "puf", "prf", "eufa", "euf",
}
ROOT_BASED_VARIANTS = {"crsa", "prsa", "prs", "crfa", "prfa", "prf"}


def _run(kernel, g, **kw):
    labels = np.arange(g.n, dtype=np.int64)
    eu, ev = _directed(g)
    rounds = kernel(g.n, eu, ev, labels, **kw)
    return labels, rounds


def _directed(g):
    eu = np.repeat(np.arange(g.n, dtype=np.int64), g.degrees)
    ev = g.targets.astype(np.int64)
    return eu, ev


ALL_KERNELS = [
    ("sv", lambda g, **kw: _run(shiloach_vishkin, g, **kw)),
    ("stergiou", lambda g, **kw: _run(stergiou, g, **kw)),
    ("lp", lambda g, **kw: _run(label_propagation, g, **kw)),
] + [
    (f"lt_{name}", lambda g, v=v, **kw: _run(liu_tarjan, g, variant=v, **kw))
    for name, v in sorted(LT_VARIANTS.items())
]


def test_exactly_sixteen_variants():
    assert set(LT_VARIANTS) == EXPECTED_VARIANTS
    assert len(LT_VARIANTS) == 16


def test_exactly_six_root_based_variants():
    got = {n for n, v in LT_VARIANTS.items() if is_root_based(v)}
    assert got == ROOT_BASED_VARIANTS


def test_variant_construction_rules():
    # Connect emits endpoint ids as labels, so the edge must be rewritten
    # (alter) or those messages never resolve to parents.
    with pytest.raises(ValueError):
        LTVariant("cus", ConnectRule.CONNECT, UpdateRule.ALL,
                  ShortcutRule.ONE, alter=False)
    v = LT_VARIANTS["cusa"]
    assert v.connect is ConnectRule.CONNECT and v.alter is True


def test_kernel_round_counts_on_a_path():
    g = graph_from_pairs(4, [(0, 1), (1, 2), (2, 3)])
    labels, rounds = _run(shiloach_vishkin, g)
    assert labels.tolist() == [0, 0, 0, 0] and rounds == 2
    labels, rounds = _run(stergiou, g)
    assert labels.tolist() == [0, 0, 0, 0] and rounds == 4
    labels, rounds = _run(label_propagation, g)
    assert labels.tolist() == [0, 0, 0, 0] and rounds == 4
    labels, rounds = _run(liu_tarjan, g, variant=LT_VARIANTS["pus"])
    assert labels.tolist() == [0, 0, 0, 0] and rounds == 3
    labels, rounds = _run(liu_tarjan, g, variant=LT_VARIANTS["euf"])
    assert labels.tolist() == [0, 0, 0, 0] and rounds == 2


@pytest.mark.parametrize("name", sorted(LT_VARIANTS))
def test_all_variants_solve_the_crossed_pairs_graph(name):
    # Parent-connect variants without full shortcutting stall on this graph
    # if merge messages are delivered to endpoints instead of parents.
    g = graph_from_pairs(4, [(0, 2), (1, 3), (2, 3)])
    labels, _ = _run(liu_tarjan, g, variant=LT_VARIANTS[name])
    assert labels.tolist() == [0, 0, 0, 0], name


@pytest.mark.parametrize("name,kernel", ALL_KERNELS, ids=[k for k, _ in ALL_KERNELS])
def test_kernels_match_oracle_on_shapes(name, kernel, suite):
    for gname, g in suite:
        labels, _ = kernel(g)
        assert partition_equal(labels, oracle(g)), f"{name} on {gname}"


@pytest.mark.parametrize("name,kernel", ALL_KERNELS, ids=[k for k, _ in ALL_KERNELS])
def test_round_labels_never_increase(name, kernel):
    g = graph_from_pairs(
        16,
        [(i, i + 1) for i in range(15)] + [(0, 8), (3, 12), (5, 10)],
    )
    snaps = []
    kernel(g, on_round=lambda a: snaps.append(a.copy()))
    prev = np.arange(g.n)
    for snap in snaps:
        assert (snap <= prev).all()
        prev = snap


@pytest.mark.parametrize("name", sorted(LT_VARIANTS))
def test_variants_finish_from_partially_merged_labels(name):
    # start mid-way: half the path already carries its component minimum
    g = graph_from_pairs(6, [(i, i + 1) for i in range(5)])
    eu, ev = _directed(g)
    labels = np.array([0, 0, 0, 3, 4, 5], dtype=np.int64)
    liu_tarjan(g.n, eu, ev, labels, LT_VARIANTS[name])
    assert canonical_labels(labels).tolist() == [0] * 6, name


@settings(max_examples=30, deadline=None)
@given(
    n=st.integers(2, 24),
    pairs=st.lists(st.tuples(st.integers(0, 23), st.integers(0, 23)), max_size=40),
    name=st.sampled_from(sorted(LT_VARIANTS)),
)
def test_variants_random_graphs(n, pairs, name):
    pairs = [(u % n, v % n) for u, v in pairs]
    g = graph_from_pairs(n, pairs) if pairs else graph_from_pairs(n, [])
    labels, _ = _run(liu_tarjan, g, variant=LT_VARIANTS[name])
    assert partition_equal(labels, oracle(g))


def test_forest_recording_matches_component_structure():
    g = graph_from_pairs(7, [(0, 1), (1, 2), (2, 0), (4, 5), (5, 6)])
    eu, ev = _directed(g)
    orig = np.stack([eu, ev], axis=1)
    forest = [None] * g.n
    labels = np.arange(g.n, dtype=np.int64)
    shiloach_vishkin(g.n, eu, ev, labels, orig_pairs=orig, forest=forest)
    edges = [e for e in forest if e is not None]
    # n - c slots populated: components {0,1,2}, {3}, {4,5,6} -> 7 - 3 = 4
    assert len(edges) == 4
    for u, v in edges:
        assert v in g.neighbors(u) or u in g.neighbors(v)
