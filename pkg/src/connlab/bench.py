"""Benchmark harness: variant sweeps over graph suites, batch-size and
insert/query-ratio sweeps for the incremental driver, and edge-inspection
reports.

Rows are dicts keyed by CSV_COLUMNS. Every timed measurement is preceded by
an untimed run whose labels are checked against the BFS oracle — no row is
emitted for an incorrect result. Reported times cover sampling + finish +
finalization (graph loading and metric computation excluded). Static rows
report throughput as undirected edges per second; incremental rows as
stream ops per second. Columns that do not apply to a row kind are left
empty.
"""

from __future__ import annotations

import csv
import io
import os
import statistics

import numpy as np

from .driver import (
    AlgorithmSpec,
    FinishKind,
    Insert,
    Query,
    format_spec,
    incremental,
    spanning_forest,
    static_connectivity,
)
from .errors import VerificationError
from .graphs import (
    Graph,
    build_csr,
    clique_graph,
    disjoint_union,
    gen_ba,
    gen_rmat,
    gnp_graph,
    grid_graph,
    path_graph,
    star_graph,
)
from .validate import oracle_components, partition_equal

CSV_COLUMNS = [
    "graph", "spec", "sample", "finish", "find", "splice", "workers",
    "batch_size", "ratio", "time_ms", "throughput_eps", "cov", "ic",
    "ratio_sampling", "inspections_sample", "inspections_finish", "rounds",
    "components",
]

DEFAULT_REPEATS = 5
DEFAULT_BATCH_SIZES = [64, 256, 1024, 4096]
DEFAULT_RATIOS = [1, 10, 100]


def desk_suite() -> list[tuple[str, Graph]]:
    """The default graph suite: spans the long-diameter / high-degree /
    scale-free / multi-component axes while staying desk-sized."""
    def gnp_deg(n, d, seed):
        return gnp_graph(n, d / (n - 1), seed=seed)

    return [
        ("path_65536", path_graph(1 << 16)),
        ("grid_256x256", grid_graph(256, 256)),
        ("star_65536", star_graph(1 << 16)),
        ("clique_1024", clique_graph(1 << 10)),
        ("gnp_4096_d4", gnp_deg(4096, 4, 11)),
        ("gnp_4096_d16", gnp_deg(4096, 16, 12)),
        ("gnp_4096_d64", gnp_deg(4096, 64, 13)),
        ("rmat_s14_ef10", build_csr(gen_rmat(14, 10, seed=1))),
        ("ba_16384_a5", build_csr(gen_ba(1 << 14, 5, seed=1))),
        ("two_comp", disjoint_union([gnp_deg(2048, 8, 14), gnp_deg(2048, 8, 15)])),
        ("comps_1000", disjoint_union([path_graph(8)] * 1000)),
    ]


def small_suite() -> list[tuple[str, Graph]]:
    """A minutes-not-hours suite with the same shape coverage, used by the
    exhaustive correctness sweeps."""
    return [
        ("path_200", path_graph(200)),
        ("star_150", star_graph(150)),
        ("clique_16", clique_graph(16)),
        ("clique_64", clique_graph(64)),
        ("grid_12x12", grid_graph(12, 12)),
        ("gnp_200_sparse", gnp_graph(200, 0.02, seed=5)),
        ("gnp_200_dense", gnp_graph(200, 0.10, seed=6)),
        ("gnp_64_frag", gnp_graph(64, 0.03, seed=7)),
        ("rmat_s7_ef4", build_csr(gen_rmat(7, 4, seed=2))),
        ("ba_120_a3", build_csr(gen_ba(120, 3, seed=3))),
        ("two_comp", disjoint_union([path_graph(50), star_graph(60)])),
        ("comps_30", disjoint_union([path_graph(7)] * 30)),
    ]


def _spec_fields(spec: AlgorithmSpec) -> dict:
    find = splice = ""
    if spec.is_union_finish():
        find = spec.cfg.find.value
        if spec.cfg.splice.value != "none":
            splice = spec.cfg.splice.value
        finish = spec.finish.value
    elif spec.finish is FinishKind.LT:
        finish = f"lt_{spec.lt_variant.name}"
    else:
        finish = spec.finish.value
    return {
        "spec": format_spec(spec),
        "sample": spec.sample.value,
        "finish": finish,
        "find": find,
        "splice": splice,
    }


def _base_row(name, spec, workers) -> dict:
    row = {c: "" for c in CSV_COLUMNS}
    row["graph"] = name
    row["workers"] = workers
    row.update(_spec_fields(spec))
    return row


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def sweep_static(graphs, specs, workers_list, repeats=DEFAULT_REPEATS,
                 forest=False) -> list[dict]:
    """One row per (graph, spec, workers): median-of-repeats wall time after
    an untimed oracle-checked warmup run. ``forest=True`` drives the
    spanning-forest entry point instead (root-based specs only)."""
    rows = []
    for name, g in graphs:
        oracle = oracle_components(g)
        for spec in specs:
            for workers in workers_list:
                if forest:
                    fe, stats = spanning_forest(g, spec, workers)
                    expect = g.n - len(np.unique(oracle))
                    if len(fe) != expect:
                        raise VerificationError(
                            f"{name} {format_spec(spec)} w={workers}: forest"
                            f" has {len(fe)} edges, oracle wants {expect}"
                        )
                else:
                    labels, stats = static_connectivity(g, spec, workers)
                    if not partition_equal(labels, oracle):
                        raise VerificationError(
                            f"{name} {format_spec(spec)} w={workers}:"
                            " labels disagree with the oracle"
                        )
                times = []
                for _ in range(repeats):
                    if forest:
                        _, st = spanning_forest(g, spec, workers)
                    else:
                        _, st = static_connectivity(g, spec, workers)
                    times.append(sum(st.phase_times.values()))
                med = statistics.median(times)
                row = _base_row(name, spec, workers)
                row["time_ms"] = _fmt(med * 1e3)
                row["throughput_eps"] = _fmt((g.m / 2) / med) if med > 0 else ""
                row["cov"] = _fmt(stats.cov)
                row["ic"] = _fmt(stats.ic)
                row["ratio_sampling"] = _fmt(stats.sampling_ratio)
                row["inspections_sample"] = stats.edge_inspections.get("sample", 0)
                row["inspections_finish"] = stats.edge_inspections.get("finish", 0)
                row["rounds"] = stats.rounds
                row["components"] = stats.component_count
                rows.append(row)
    return rows


def make_stream(g: Graph, ratio, seed=1):
    """A randomly permuted insert stream over g's undirected edges; for
    ratio r, one random-pair query is mixed in per r inserts (r falsy means
    insert-only)."""
    rng = np.random.default_rng(seed)
    ue = g.undirected_edges()
    ue = ue[rng.permutation(len(ue))]
    ops = [Insert(int(u), int(v)) for u, v in ue]
    if ratio:
        n_q = int(round(len(ops) / ratio))
        pairs = rng.integers(0, max(g.n, 1), size=(n_q, 2))
        ops += [Query(int(u), int(v)) for u, v in pairs]
        order = rng.permutation(len(ops))
        ops = [ops[i] for i in order]
    return ops


def _chunk(ops, batch_size):
    if batch_size <= 0:
        return [ops]
    return [ops[i:i + batch_size] for i in range(0, len(ops), batch_size)]


def sweep_incremental(graphs, specs, batch_sizes=None, ratios=None,
                      workers_list=(1,), seed=1) -> list[dict]:
    """Batch-size x insert/query-ratio grid; throughput is stream ops per
    wall-second. The untimed check compares the final partition with the
    whole graph's oracle."""
    batch_sizes = batch_sizes or DEFAULT_BATCH_SIZES
    ratios = ratios or DEFAULT_RATIOS
    rows = []
    for name, g in graphs:
        oracle = oracle_components(g)
        for spec in specs:
            for ratio in ratios:
                ops = make_stream(g, ratio, seed)
                for batch_size in batch_sizes:
                    batches = _chunk(ops, batch_size)
                    for workers in workers_list:
                        labels, _, _ = incremental(None, spec, batches,
                                                   workers, capacity=g.n)
                        if not partition_equal(labels, oracle):
                            raise VerificationError(
                                f"{name} {format_spec(spec)}"
                                f" bs={batch_size} r={ratio} w={workers}:"
                                " final labels disagree with the oracle"
                            )
                        _, _, stats = incremental(None, spec, batches,
                                                  workers, capacity=g.n)
                        dt = sum(stats.phase_times.values())
                        row = _base_row(name, spec, workers)
                        row["batch_size"] = batch_size
                        row["ratio"] = ratio
                        row["time_ms"] = _fmt(dt * 1e3)
                        row["throughput_eps"] = (
                            _fmt(len(ops) / dt) if dt > 0 else ""
                        )
                        ins = stats.edge_inspections
                        row["inspections_finish"] = ins.get("insert", 0)
                        row["rounds"] = stats.rounds
                        row["components"] = stats.component_count
                        rows.append(row)
    return rows


def edge_inspection_report(graph_entry, specs, batch_sizes=None,
                           seed=1) -> list[dict]:
    """Insert-phase adjacency inspections per (spec, batch size) over an
    insert-only permuted stream of one graph."""
    name, g = graph_entry
    batch_sizes = batch_sizes or DEFAULT_BATCH_SIZES
    ops = make_stream(g, ratio=0, seed=seed)
    rows = []
    for spec in specs:
        for batch_size in batch_sizes:
            _, _, stats = incremental(None, spec, _chunk(ops, batch_size),
                                      capacity=g.n)
            row = _base_row(name, spec, 1)
            row["batch_size"] = batch_size
            row["inspections_finish"] = stats.edge_inspections.get("insert", 0)
            row["rounds"] = stats.rounds
            row["components"] = stats.component_count
            rows.append(row)
    return rows


def write_csv(rows, out) -> None:
    """Write rows (dicts keyed by CSV_COLUMNS) as CSV to a path or file."""
    own = isinstance(out, (str, bytes, os.PathLike))
    fh = open(out, "w", newline="") if own else out
    try:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for row in rows:
            w.writerow(row)
    finally:
        if own:
            fh.close()


def rows_to_csv_text(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()
