"""Benchmark harness: suites, sweeps, streams, and CSV output."""

import csv
import io

import numpy as np
import pytest

from connlab import Insert, Query, parse_spec
from connlab.bench import (
    CSV_COLUMNS,
    _chunk,
    desk_suite,
    edge_inspection_report,
    make_stream,
    rows_to_csv_text,
    small_suite,
    sweep_incremental,
    sweep_static,
    write_csv,
)
from connlab.errors import VerificationError
from connlab.graphs import path_graph
from connlab.validate import oracle_components
from helpers import oracle

EXPECTED_HEADER = (
    "graph,spec,sample,finish,find,splice,workers,batch_size,ratio,time_ms,"
    "throughput_eps,cov,ic,ratio_sampling,inspections_sample,"
    "inspections_finish,rounds,components"
)


def test_csv_column_order_is_frozen():
    assert ",".join(CSV_COLUMNS) == EXPECTED_HEADER


@pytest.mark.parametrize("build", [small_suite, desk_suite])
def test_suites_cover_the_required_families(build):
    suite = build()
    names = [n for n, _ in suite]
    assert len(suite) >= 10
    assert len(set(names)) == len(names)
    for family in ("path", "star", "clique", "grid", "gnp", "rmat", "ba"):
        assert any(family in n for n in names), family
    multi = sum(
        len(np.unique(oracle_components(g))) > 1 for _, g in suite
    )
    assert multi >= 2  # at least two multi-component graphs


def test_sweep_static_produces_one_row_per_combo(suite):
    graphs = [e for e in suite if e[0] in ("path_200", "two_comp")]
    specs = [parse_spec("none+async+halve"), parse_spec("kout+sv")]
    rows = sweep_static(graphs, specs, workers_list=[1, 2], repeats=2)
    assert len(rows) == 8
    for row in rows:
        assert list(row) == list(CSV_COLUMNS)
        assert float(row["time_ms"]) >= 0
        assert float(row["throughput_eps"]) > 0
        assert row["batch_size"] == "" and row["ratio"] == ""
        assert int(row["components"]) >= 1
        parse_spec(row["spec"])  # spec strings round-trip
    two_comp = [r for r in rows if r["graph"] == "two_comp"]
    assert all(int(r["components"]) == 2 for r in two_comp)


def test_sweep_static_fails_loudly_on_wrong_labels(suite, monkeypatch):
    import connlab.bench as bench

    monkeypatch.setattr(
        bench, "oracle_components",
        lambda g: np.zeros(g.n, dtype=np.int64),
    )
    graphs = [e for e in suite if e[0] == "two_comp"]
    with pytest.raises(VerificationError) as exc:
        sweep_static(graphs, [parse_spec("none+async+halve")], [1], repeats=1)
    assert "two_comp" in str(exc.value)


def test_sweep_forest_mode(suite):
    graphs = [e for e in suite if e[0] in ("grid_12x12", "comps_30")]
    rows = sweep_static(graphs, [parse_spec("none+async+halve"),
                                 parse_spec("hb+rem_lock+naive+split")],
                        workers_list=[1], repeats=1, forest=True)
    assert len(rows) == 4
    assert all(float(r["time_ms"]) >= 0 for r in rows)


def test_make_stream_composition():
    g = path_graph(101)  # 100 undirected edges
    ops = make_stream(g, ratio=4, seed=3)
    inserts = [op for op in ops if isinstance(op, Insert)]
    queries = [op for op in ops if isinstance(op, Query)]
    assert len(inserts) == 100
    assert len(queries) == 25  # one query per `ratio` inserts
    got = {tuple(sorted((op.u, op.v))) for op in inserts}
    want = {tuple(e) for e in g.undirected_edges().tolist()}
    assert got == want  # a permutation of the true edge set
    assert all(0 <= op.u < g.n and 0 <= op.v < g.n for op in queries)
    again = make_stream(g, ratio=4, seed=3)
    assert ops == again
    assert ops != make_stream(g, ratio=4, seed=4)


def test_make_stream_insert_only_when_ratio_zero():
    ops = make_stream(path_graph(10), ratio=0, seed=1)
    assert len(ops) == 9
    assert all(isinstance(op, Insert) for op in ops)


def test_chunk_boundaries():
    ops = list(range(10))
    assert [len(b) for b in _chunk(ops, 4)] == [4, 4, 2]
    assert [len(b) for b in _chunk(ops, 100)] == [10]
    assert sum(_chunk(ops, 3), []) == ops


def test_sweep_incremental_rows(suite):
    graphs = [e for e in suite if e[0] == "gnp_200_sparse"]
    specs = [parse_spec("none+async+halve"), parse_spec("none+sv")]
    rows = sweep_incremental(graphs, specs, batch_sizes=[16, 10**9],
                             ratios=[2], workers_list=[1])
    assert len(rows) == 4
    for row in rows:
        assert row["batch_size"] in (16, 10**9)
        assert row["ratio"] == 2
        assert float(row["time_ms"]) > 0
        assert float(row["throughput_eps"]) > 0
        assert row["cov"] == "" and row["ic"] == ""  # static-only metrics
        assert int(row["inspections_finish"]) > 0


def test_edge_inspection_report_counts_insert_reads(suite):
    entry = next(e for e in suite if e[0] == "rmat_s7_ef4")
    specs = [parse_spec("none+async+halve"), parse_spec("none+lt_crfa")]
    rows = edge_inspection_report(entry, specs, batch_sizes=[16, 64])
    assert len(rows) == 4
    assert all(int(r["inspections_finish"]) > 0 for r in rows)
    assert all(int(r["components"]) >= 1 for r in rows)
    # union-find inspections are one per inserted edge, batch size aside
    uf = [r for r in rows if r["finish"] == "async"]
    assert uf[0]["inspections_finish"] == uf[1]["inspections_finish"]


def test_write_csv_and_text_roundtrip(tmp_path, suite):
    graphs = [e for e in suite if e[0] == "clique_16"]
    rows = sweep_static(graphs, [parse_spec("bfs+lp")], [1], repeats=1)
    out = tmp_path / "bench.csv"
    write_csv(rows, out)
    with open(out, newline="") as fh:  # keep csv's own line endings
        text = fh.read()
    assert text.splitlines()[0] == EXPECTED_HEADER
    assert rows_to_csv_text(rows) == text
    back = list(csv.DictReader(io.StringIO(text)))
    assert len(back) == len(rows)
    assert back[0]["graph"] == "clique_16"
    assert back[0]["spec"] == "bfs+lp"
