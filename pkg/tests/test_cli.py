"""Command-line interface: subcommands, file formats, exit codes."""

import json

import numpy as np
import pytest

from connlab.cli import main
from connlab.graphs import (
    disjoint_union,
    graph_to_edge_list,
    load_graph,
    path_graph,
    save_edge_list,
    star_graph,
)


@pytest.fixture
def path_file(tmp_path):
    p = tmp_path / "path10.txt"
    save_edge_list(graph_to_edge_list(path_graph(10)), p)
    return str(p)


@pytest.fixture
def two_comp_file(tmp_path):
    g = disjoint_union([path_graph(6), star_graph(5)])
    p = tmp_path / "two.txt"
    save_edge_list(graph_to_edge_list(g), p)
    return str(p)


def test_gen_is_deterministic_and_loadable(tmp_path, capsys):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    for out in (a, b):
        assert main(["gen", "rmat", "--scale", "5", "--ef", "3",
                     "--seed", "2", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    g = load_graph(a)
    assert g.n == 32


def test_gen_binary_matches_text(tmp_path):
    t = tmp_path / "g.txt"
    bn = tmp_path / "g.bin"
    assert main(["gen", "ba", "--n", "64", "--attach", "2", "--seed", "3",
                 "--out", str(t)]) == 0
    assert main(["gen", "ba", "--n", "64", "--attach", "2", "--seed", "3",
                 "--out", str(bn), "--binary"]) == 0
    gt, gb = load_graph(t), load_graph(bn)
    assert np.array_equal(gt.offsets, gb.offsets)
    assert np.array_equal(gt.targets, gb.targets)


def test_static_verifies_and_dumps_labels(path_file, tmp_path, capsys):
    out = tmp_path / "labels.txt"
    rc = main(["static", path_file, "--spec", "kout+rem_cas+naive+splice",
               "--verify", "--out", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    assert "components: 1" in text
    assert "verify: ok" in text
    assert np.loadtxt(out, dtype=np.int64).tolist() == [0] * 10


def test_static_flag_spec_composition(path_file, capsys):
    rc = main(["static", path_file, "--sample", "hb", "--finish", "rem_lock",
               "--find", "split", "--splice", "halve"])
    assert rc == 0
    assert "hb+rem_lock+split+halve" in capsys.readouterr().out


def test_invalid_spec_exits_2(path_file, capsys):
    rc = main(["static", path_file, "--spec", "none+async+splice"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_missing_graph_file_exits_2(capsys):
    rc = main(["static", "/nonexistent/graph.txt",
               "--spec", "none+async+halve"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_forest_passes_and_rejects(two_comp_file, capsys):
    rc = main(["forest", two_comp_file, "--spec", "none+early+halve"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "forest edges: 9" in out  # 11 vertices, 2 components
    assert '"passed": true' in out

    rc = main(["forest", two_comp_file, "--spec", "none+lp"])
    assert rc == 2
    assert "root-based" in capsys.readouterr().err


def test_validate_census(two_comp_file, capsys):
    rc = main(["validate", two_comp_file, "--json"])
    assert rc == 0
    census = json.loads(capsys.readouterr().out)
    assert census["n"] == 11
    assert census["components"] == 2
    assert census["largest"] == 6
    assert census["sizes_top10"] == [6, 5]


def test_incremental_stream_file(tmp_path, capsys):
    sp = tmp_path / "s.txt"
    sp.write_text("# a stream\ni 0 1\nq 0 1\ni 1 2\nq 0 2\n")
    rc = main(["incremental", str(sp), "--batch-size", "2", "--verify"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "batch 0: ops=2 queries_true=1" in out
    assert "batch 1: ops=2 queries_true=1" in out
    assert "verify: ok" in out


def test_incremental_bare_pairs_are_inserts(tmp_path, capsys):
    sp = tmp_path / "s.txt"
    sp.write_text("0 1\n1 2\nq 0 2\n")
    rc = main(["incremental", str(sp), "--batch-size", "10", "--verify"])
    assert rc == 0
    assert "queries_true=1" in capsys.readouterr().out


def test_incremental_malformed_stream(tmp_path, capsys):
    sp = tmp_path / "bad.txt"
    sp.write_text("i 0 1\nx 3 4\n")
    rc = main(["incremental", str(sp)])
    assert rc == 2
    assert "2" in capsys.readouterr().err  # offending line number


def test_incremental_from_graph(path_file, capsys):
    rc = main(["incremental", "--from-graph", path_file, "--ratio", "2",
               "--batch-size", "4", "--verify"])
    assert rc == 0
    assert "verify: ok" in capsys.readouterr().out


def test_incremental_racy_spec_guard(path_file, capsys):
    rc = main(["incremental", "--from-graph", path_file, "--racy",
               "--spec", "none+rem_cas+naive+splice"])
    assert rc == 2


def test_bench_static_writes_csv_and_figures(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    rc = main(["bench", "--suite", "small", "--graphs", "path_200,two_comp",
               "--specs", "none+async+halve,kout+sv", "--workers", "1",
               "--repeats", "1", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 4  # header + 2 graphs x 2 specs
    assert (tmp_path / "bench_static.png").exists()


def test_bench_no_figures(tmp_path):
    out = tmp_path / "b.csv"
    rc = main(["bench", "--suite", "small", "--graphs", "clique_16",
               "--specs", "none+sv", "--workers", "1", "--repeats", "1",
               "--out", str(out), "--no-figures"])
    assert rc == 0
    assert out.exists()
    assert not list(tmp_path.glob("*.png"))


def test_bench_stdout_when_no_out(capsys):
    rc = main(["bench", "--suite", "small", "--graphs", "clique_16",
               "--specs", "none+async+naive", "--workers", "1",
               "--repeats", "1", "--no-figures"])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("graph,spec,")


def test_bench_unknown_graph_listed(capsys):
    rc = main(["bench", "--suite", "small", "--graphs", "nosuch",
               "--specs", "none+sv", "--no-figures"])
    assert rc == 2
    err = capsys.readouterr().err
    assert "nosuch" in err and "path_200" in err


def test_bench_incremental_rejects_incapable_specs(capsys):
    rc = main(["bench", "--suite", "small", "--graphs", "clique_16",
               "--mode", "incremental", "--specs", "none+lp",
               "--no-figures"])
    assert rc == 2
    assert "none+lp" in capsys.readouterr().err


def test_bench_incremental_and_inspect_modes(tmp_path):
    out = tmp_path / "inc.csv"
    rc = main(["bench", "--suite", "small", "--graphs", "clique_16",
               "--mode", "incremental", "--specs", "none+async+halve",
               "--batch-sizes", "8", "--ratios", "2", "--repeats", "1",
               "--out", str(out), "--no-figures"])
    assert rc == 0
    assert len(out.read_text().splitlines()) == 2

    out2 = tmp_path / "ins.csv"
    rc = main(["bench", "--suite", "small", "--graphs", "clique_16",
               "--mode", "inspect", "--specs", "none+async+halve",
               "--batch-sizes", "4,16", "--out", str(out2), "--no-figures"])
    assert rc == 0
    assert len(out2.read_text().splitlines()) == 3


def test_report_renders_figures(tmp_path):
    csv_path = tmp_path / "bench.csv"
    rc = main(["bench", "--suite", "small", "--graphs", "path_200",
               "--specs", "none+async+halve", "--workers", "1",
               "--repeats", "1", "--out", str(csv_path), "--no-figures"])
    assert rc == 0
    outdir = tmp_path / "figs"
    outdir.mkdir()
    rc = main(["report", str(csv_path), "--outdir", str(outdir)])
    assert rc == 0
    assert list(outdir.glob("*.png"))
