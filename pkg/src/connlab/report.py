"""Render benchmark CSV rows into PNG figures.

Three figure kinds, matching the three row kinds the harness emits:
static-run times (bars per spec), incremental throughput vs batch size
(lines per spec/ratio), and insert-phase inspections vs batch size. Only
figures with matching rows are written; the list of written paths is
returned.
"""

from __future__ import annotations

import csv
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def load_rows(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _split(rows):
    static, thrpt, inspect = [], [], []
    for r in rows:
        if not r.get("batch_size"):
            static.append(r)
        elif r.get("time_ms"):
            thrpt.append(r)
        else:
            inspect.append(r)
    return static, thrpt, inspect


def _per_graph_axes(groups, width=8.0, row_height=2.6):
    fig, axes = plt.subplots(
        len(groups), 1, figsize=(width, max(row_height * len(groups), 3.0)),
        squeeze=False,
    )
    return fig, [ax for (ax,) in axes]


def _static_figure(rows, path):
    by_graph = defaultdict(list)
    for r in rows:
        label = f"{r['spec']} w={r['workers']}"
        by_graph[r["graph"]].append((label, float(r["time_ms"])))
    fig, axes = _per_graph_axes(by_graph)
    for ax, (graph, entries) in zip(axes, by_graph.items()):
        labels = [e[0] for e in entries]
        times = [e[1] for e in entries]
        ax.barh(range(len(entries)), times)
        ax.set_yticks(range(len(entries)), labels, fontsize=6)
        ax.invert_yaxis()
        ax.set_xlabel("time (ms)")
        ax.set_title(graph, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _line_figure(rows, ycol, ylabel, path):
    by_graph = defaultdict(lambda: defaultdict(list))
    for r in rows:
        key = r["spec"] + (f" r={r['ratio']}" if r.get("ratio") else "")
        key += f" w={r['workers']}"
        by_graph[r["graph"]][key].append(
            (int(r["batch_size"]), float(r[ycol]))
        )
    fig, axes = _per_graph_axes(by_graph)
    for ax, (graph, series) in zip(axes, by_graph.items()):
        for key, pts in series.items():
            pts.sort()
            ax.plot([p[0] for p in pts], [p[1] for p in pts],
                    marker="o", markersize=3, label=key)
        ax.set_xscale("log", base=2)
        ax.set_xlabel("batch size")
        ax.set_ylabel(ylabel)
        ax.set_title(graph, fontsize=9)
        ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render(rows, outdir, stem="bench") -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    static, thrpt, inspect = _split(rows)
    written = []
    if static:
        p = os.path.join(outdir, f"{stem}_static.png")
        _static_figure(static, p)
        written.append(p)
    if thrpt:
        p = os.path.join(outdir, f"{stem}_throughput.png")
        _line_figure(thrpt, "throughput_eps", "ops/s", p)
        written.append(p)
    if inspect:
        p = os.path.join(outdir, f"{stem}_inspections.png")
        _line_figure(inspect, "inspections_finish", "edge inspections", p)
        written.append(p)
    return written
