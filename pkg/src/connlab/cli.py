"""Command-line front end.

Subcommands: gen (synthetic graphs), static (two-phase connectivity),
forest (spanning forest + verification), incremental (batched updates),
bench (CSV sweeps, with figures rendered next to the CSV), validate
(oracle census), report (render figures from an existing CSV).

Algorithm selection uses spec strings (``sample+finish[+find[+splice]]``)
via --spec, or the individual --sample/--finish/--find/--splice flags.
The CONN_LAB_THREADS environment variable sets the default worker count.
Exit codes: 0 on success (including all requested verifications), 1 on a
failed verification, 2 on configuration or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .bench import (
    DEFAULT_BATCH_SIZES,
    DEFAULT_RATIOS,
    DEFAULT_REPEATS,
    desk_suite,
    edge_inspection_report,
    make_stream,
    small_suite,
    sweep_incremental,
    sweep_static,
    write_csv,
)
from .driver import (
    Insert,
    Query,
    format_spec,
    incremental,
    parse_spec,
    spanning_forest,
    static_connectivity,
)
from .errors import ConfigError, MalformedInputError, VerificationError
from .graphs import (
    build_csr,
    gen_ba,
    gen_rmat,
    load_graph,
    save_edge_list,
    save_graph_binary,
)
from .report import load_rows, render
from .sampling import KOutMode
from .validate import (
    SequentialUF,
    check_forest,
    oracle_components,
    oracle_components_unionfind,
    partition_equal,
    report_to_json,
)

DEFAULT_BENCH_SPECS = [
    "none+async+halve",
    "none+rem_cas+split+splice",
    "kout+async+halve",
    "hb+async+halve",
    "bfs+async+halve",
    "none+sv",
    "none+lt_prs",
    "none+lp",
]


def _env_workers() -> int:
    try:
        return max(1, int(os.environ.get("CONN_LAB_THREADS", "1")))
    except ValueError:
        return 1


def _spec_from_args(args):
    if getattr(args, "spec", None):
        text = args.spec
    else:
        text = f"{args.sample}+{args.finish}"
        if args.find:
            text += f"+{args.find}"
        if args.splice:
            text += f"+{args.splice}"
    overrides = {"seed": args.seed}
    if getattr(args, "kout_k", None):
        overrides["kout_k"] = args.kout_k
    if getattr(args, "kout_mode", None):
        overrides["kout_mode"] = (
            KOutMode.FIRST_PLUS_RANDOM
            if args.kout_mode == "rand"
            else KOutMode.FIRST_K
        )
    return parse_spec(text, **overrides)


def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", help="full spec string, e.g. kout+async+halve")
    p.add_argument("--sample", default="none",
                   choices=["none", "kout", "hb", "bfs"])
    p.add_argument("--finish", default="async",
                   help="finish algorithm token (default async)")
    p.add_argument("--find", help="find rule for union-find finishes")
    p.add_argument("--splice", help="splice rule for the rem finishes")
    p.add_argument("--kout-k", type=int, help="edges per vertex for kout")
    p.add_argument("--kout-mode", choices=["first", "rand"], default="first")
    p.add_argument("--workers", type=int, default=_env_workers())
    p.add_argument("--seed", type=int, default=1)


def cmd_gen(args) -> int:
    if args.kind == "rmat":
        el = gen_rmat(args.scale, args.ef, args.a, args.b, args.c, args.seed)
    else:
        el = gen_ba(args.n, args.attach, args.seed)
    if args.binary:
        g = build_csr(el)
        save_graph_binary(g, args.out)
        print(f"wrote {args.out}: n={g.n} m={g.m} (binary csr)")
    else:
        save_edge_list(el, args.out)
        print(f"wrote {args.out}: n={el.n} pairs={len(el)}")
    return 0


def cmd_static(args) -> int:
    g = load_graph(args.graph)
    spec = _spec_from_args(args)
    labels, stats = static_connectivity(g, spec, workers=args.workers)
    print(f"graph: n={g.n} m={g.m // 2} (undirected)")
    print(f"spec: {format_spec(spec)}  workers: {args.workers}")
    print(f"components: {stats.component_count}")
    pt = stats.phase_times
    print(
        f"time_ms: {stats.total_time() * 1e3:.3f}"
        f" (sample {pt['sample'] * 1e3:.3f},"
        f" finish {pt['finish'] * 1e3:.3f},"
        f" finalize {pt['finalize'] * 1e3:.3f})"
    )
    if spec.sample.value != "none":
        print(
            f"cov: {stats.cov:.4f}  ic: {stats.ic:.4f}"
            f"  ratio_sampling: {stats.sampling_ratio:.4f}"
        )
    if stats.rounds:
        print(f"rounds: {stats.rounds}")
    for note in stats.notes:
        print(f"note: {note}")
    if args.out:
        np.savetxt(args.out, labels, fmt="%d")
        print(f"labels written to {args.out}")
    if args.verify:
        if partition_equal(labels, oracle_components(g)):
            print("verify: ok")
        else:
            print("verify: FAILED — labels disagree with the oracle")
            return 1
    return 0


def cmd_forest(args) -> int:
    g = load_graph(args.graph)
    spec = _spec_from_args(args)
    fe, stats = spanning_forest(g, spec, workers=args.workers)
    print(f"graph: n={g.n} m={g.m // 2} (undirected)")
    print(f"spec: {format_spec(spec)}  workers: {args.workers}")
    print(f"forest edges: {len(fe)}  components: {stats.component_count}")
    print(f"time_ms: {stats.total_time() * 1e3:.3f}")
    if args.out:
        with open(args.out, "w") as fh:
            for e in fe.edges:
                if e is not None:
                    fh.write(f"{e[0]} {e[1]}\n")
        print(f"forest written to {args.out}")
    if not args.no_verify:
        report = check_forest(g, fe, oracle_components(g))
        print(report_to_json(report))
        if not report["passed"]:
            return 1
        print("verify: ok")
    return 0


def load_stream(path):
    """Text update stream: ``i u v`` inserts, ``q u v`` queries, one per
    line; a bare ``u v`` counts as an insert, so edge-list files load as
    insert-only streams. '#'/'%' lines are comments."""
    ops = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line[0] in "#%":
                continue
            parts = line.split()
            try:
                if parts[0] in ("i", "q") and len(parts) == 3:
                    cls = Insert if parts[0] == "i" else Query
                    ops.append(cls(int(parts[1]), int(parts[2])))
                elif len(parts) == 2:
                    ops.append(Insert(int(parts[0]), int(parts[1])))
                else:
                    raise ValueError
            except ValueError:
                raise MalformedInputError(
                    f"{path}:{lineno}: expected 'i u v', 'q u v' or 'u v',"
                    f" got {line!r}"
                ) from None
    return ops


def _chunk_ops(ops, batch_size):
    if batch_size <= 0:
        return [ops]
    return [ops[i:i + batch_size] for i in range(0, len(ops), batch_size)]


def _verify_stream(batches, results, racy=False) -> bool:
    cap = 0
    for b in batches:
        for op in b:
            cap = max(cap, op.u + 1, op.v + 1)
    uf = SequentialUF(cap)
    for bi, (batch, bits) in enumerate(zip(batches, results)):
        for op in batch:
            if isinstance(op, Insert):
                uf.union(op.u, op.v)
        for idx, op in enumerate(batch):
            if not isinstance(op, Query):
                continue
            expect = uf.connected(op.u, op.v)
            got = bool(bits[idx])
            if racy:
                # interleaving makes misses legal; hits must still be real
                ok = expect or not got
            else:
                ok = got == expect
            if not ok:
                print(
                    f"verify: FAILED — batch {bi} query ({op.u},{op.v})"
                    f" returned {got}, prefix oracle says {expect}"
                )
                return False
    return True


def cmd_incremental(args) -> int:
    if args.from_graph:
        g = load_graph(args.from_graph)
        ops = make_stream(g, args.ratio, args.seed)
        capacity = g.n
    elif args.stream:
        ops = load_stream(args.stream)
        capacity = 0
    else:
        raise ConfigError("need a stream file or --from-graph")
    spec = _spec_from_args(args)
    batches = _chunk_ops(ops, args.batch_size)
    marks = []
    t0 = time.perf_counter()
    labels, results, stats = incremental(
        None, spec, batches, workers=args.workers, capacity=capacity,
        racy=args.racy, on_batch=lambda bi, state: marks.append(time.perf_counter()),
    )
    for bi, batch in enumerate(batches):
        dur = marks[bi] - (marks[bi - 1] if bi else t0)
        rate = len(batch) / dur if dur > 0 else float("inf")
        print(
            f"batch {bi}: ops={len(batch)}"
            f" queries_true={int(results[bi].sum())}"
            f" ops_per_s={rate:.0f}"
        )
    print(
        f"total: batches={len(batches)} ops={len(ops)}"
        f" components={stats.component_count}"
        f" time_ms={stats.total_time() * 1e3:.3f}"
    )
    for note in stats.notes:
        print(f"note: {note}")
    if args.verify:
        if not _verify_stream(batches, results, racy=args.racy):
            return 1
        print("verify: ok")
    return 0


def cmd_validate(args) -> int:
    g = load_graph(args.graph)
    labels = oracle_components(g)
    if not partition_equal(labels, oracle_components_unionfind(g)):
        raise VerificationError("the two oracles disagree")  # pragma: no cover
    _, sizes = np.unique(labels, return_counts=True)
    census = {
        "n": g.n,
        "m_undirected": g.m // 2,
        "components": int(len(sizes)),
        "largest": int(sizes.max()) if len(sizes) else 0,
        "sizes_top10": sorted((int(s) for s in sizes), reverse=True)[:10],
    }
    if args.json:
        print(json.dumps(census, indent=2))
    else:
        print(f"n: {census['n']}")
        print(f"m (undirected): {census['m_undirected']}")
        print(f"components: {census['components']}")
        print(f"largest component: {census['largest']}")
    return 0


def _parse_int_list(text) -> list[int]:
    try:
        return [int(tok) for tok in str(text).split(",") if tok]
    except ValueError:
        raise ConfigError(f"expected a comma-separated int list, got {text!r}") from None


def cmd_bench(args) -> int:
    suite = small_suite() if args.suite == "small" else desk_suite()
    if args.graphs:
        wanted = set(args.graphs.split(","))
        unknown = wanted - {name for name, _ in suite}
        if unknown:
            raise ConfigError(
                f"unknown graphs {sorted(unknown)}; suite has: "
                + ", ".join(name for name, _ in suite)
            )
        suite = [(n, g) for n, g in suite if n in wanted]
    spec_texts = args.specs.split(",") if args.specs else DEFAULT_BENCH_SPECS
    specs = [parse_spec(t, seed=args.seed) for t in spec_texts]
    workers_list = _parse_int_list(args.workers)
    if args.mode == "static":
        rows = sweep_static(suite, specs, workers_list, args.repeats)
    elif args.mode == "forest":
        rows = sweep_static(suite, specs, workers_list, args.repeats,
                            forest=True)
    elif args.mode == "incremental":
        bad = [format_spec(s) for s in specs if not s.incremental_capable()]
        if bad:
            raise ConfigError(
                "incremental sweep needs root-based specs; drop: "
                + ", ".join(bad)
            )
        rows = sweep_incremental(
            suite, specs, _parse_int_list(args.batch_sizes),
            _parse_int_list(args.ratios), workers_list, args.seed,
        )
    else:  # inspect
        rows = edge_inspection_report(
            suite[0], specs, _parse_int_list(args.batch_sizes), args.seed
        )
    if args.out:
        write_csv(rows, args.out)
        print(f"wrote {args.out}: {len(rows)} rows")
        if not args.no_figures:
            outdir = os.path.dirname(os.path.abspath(args.out))
            stem = os.path.splitext(os.path.basename(args.out))[0]
            for p in render(rows, outdir, stem):
                print(f"wrote {p}")
    else:
        write_csv(rows, sys.stdout)
    return 0


def cmd_report(args) -> int:
    rows = load_rows(args.csv)
    stem = os.path.splitext(os.path.basename(args.csv))[0]
    paths = render(rows, args.outdir, stem)
    for p in paths:
        print(f"wrote {p}")
    if not paths:
        print("no rows to plot")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="connlab",
        description="min-based graph connectivity: drivers, validation, benchmarks",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic graph file")
    p.add_argument("kind", choices=["rmat", "ba"])
    p.add_argument("--scale", type=int, default=10, help="rmat: n = 2^scale")
    p.add_argument("--ef", type=int, default=8, help="rmat: edges = ef * n")
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--b", type=float, default=0.1)
    p.add_argument("--c", type=float, default=0.1)
    p.add_argument("--n", type=int, default=1024, help="ba: vertex count")
    p.add_argument("--attach", type=int, default=4, help="ba: edges per vertex")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--binary", action="store_true",
                   help="write binary CSR instead of a text edge list")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("static", help="two-phase static connectivity")
    p.add_argument("graph")
    _add_spec_flags(p)
    p.add_argument("--out", help="write one label per line here")
    p.add_argument("--verify", action="store_true",
                   help="compare the partition against the oracle")
    p.set_defaults(func=cmd_static)

    p = sub.add_parser("forest", help="spanning forest (root-based specs)")
    p.add_argument("graph")
    _add_spec_flags(p)
    p.add_argument("--out", help="write forest edges here")
    p.add_argument("--no-verify", action="store_true",
                   help="skip the four-clause forest check")
    p.set_defaults(func=cmd_forest)

    p = sub.add_parser("incremental", help="batched inserts + queries")
    p.add_argument("stream", nargs="?",
                   help="update stream file ('i u v' / 'q u v' lines)")
    p.add_argument("--from-graph",
                   help="build a permuted stream from this graph file")
    p.add_argument("--batch-size", type=int, default=1024)
    p.add_argument("--ratio", type=float, default=10,
                   help="inserts per query for --from-graph streams")
    p.add_argument("--racy", action="store_true",
                   help="interleave ops instead of insert/query sub-phases")
    p.add_argument("--verify", action="store_true",
                   help="check query bits against a prefix oracle")
    _add_spec_flags(p)
    p.set_defaults(func=cmd_incremental)

    p = sub.add_parser("bench", help="run sweeps, emit CSV (+ figures)")
    p.add_argument("--suite", choices=["desk", "small"], default="desk")
    p.add_argument("--graphs", help="comma-separated suite-graph filter")
    p.add_argument("--specs", help="comma-separated spec strings")
    p.add_argument("--mode",
                   choices=["static", "forest", "incremental", "inspect"],
                   default="static")
    p.add_argument("--workers", default=str(_env_workers()),
                   help="comma-separated worker counts")
    p.add_argument("--repeats", type=int, default=DEFAULT_REPEATS)
    p.add_argument("--batch-sizes",
                   default=",".join(map(str, DEFAULT_BATCH_SIZES)))
    p.add_argument("--ratios", default=",".join(map(str, DEFAULT_RATIOS)))
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--no-figures", action="store_true",
                   help="skip PNG rendering next to --out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("validate", help="print the oracle component census")
    p.add_argument("graph")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="render figures from a bench CSV")
    p.add_argument("csv")
    p.add_argument("--outdir", default=".")
    p.set_defaults(func=cmd_report)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, MalformedInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
