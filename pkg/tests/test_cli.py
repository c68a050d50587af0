import json

import pytest

from congestcycles import cli
from congestcycles.adversarial import generate_g6, generate_gk, save_labels
from congestcycles.graphs import load_graph, save_graph


def run(*argv):
    return cli.main(list(argv))


# ----------------------------------------------------------------- generate

def test_generate_gk_and_verify(tmp_path):
    g = tmp_path / "g7.txt"
    labels = tmp_path / "g7.json"
    assert run("generate", "gk", "--k", "7", "--N", "2",
               "-o", str(g), "--labels", str(labels)) == 0
    loaded = load_graph(g)
    assert loaded.n == 14 + 4 + 12 + 16
    out = tmp_path / "report.json"
    assert run("verify", "gk", "-i", str(g), "--labels", str(labels),
               "-o", str(out)) == 0
    report = json.loads(out.read_text())
    assert report["unique"] and report["spectrum_match"]


def test_generate_bipartite_and_verify(tmp_path):
    g = tmp_path / "ag3.txt"
    assert run("generate", "c4free-bipartite", "--d", "3", "-o", str(g)) == 0
    loaded = load_graph(g)
    assert loaded.n == 18 and loaded.m == 27
    assert run("verify", "bipartite", "-i", str(g)) == 0


def test_verify_fails_on_tampered_instance(tmp_path):
    inst = generate_gk(7, 2)
    from congestcycles.graphs import Graph

    n = inst.graph.n
    edges = list(inst.graph.edges()) + [(1, n), (n, n + 1), (n + 1, 4)]
    gpath, lpath = tmp_path / "bad.txt", tmp_path / "bad.json"
    save_graph(Graph(n + 2, edges), gpath)
    save_labels(inst, lpath)
    assert run("verify", "gk", "-i", str(gpath), "--labels", str(lpath),
               "--no-spectrum") == cli.EXIT_VERIFY_FAILED


def test_generate_planted_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for out in (a, b):
        assert run("generate", "planted", "--n", "24", "--L", "12",
                   "--seed", "7", "-o", str(out)) == 0
    assert a.read_text() == b.read_text()


# ------------------------------------------------------------------- detect

def test_detect_free_tree(tmp_path):
    g = tmp_path / "tree.txt"
    run("generate", "random", "--n", "10", "--p", "0", "-o", str(g))
    out = tmp_path / "v.json"
    code = run("detect", "c2k", "--k", "2", "-i", str(g),
               "--color-reps", "5", "--source-reps", "3", "-o", str(out))
    assert code == cli.EXIT_FREE
    verdict = json.loads(out.read_text())
    assert verdict["outcome"] == "free" and verdict["witness"] is None


def test_detect_family_finds_planted_c4(tmp_path):
    g = tmp_path / "c4.txt"
    run("generate", "planted", "--n", "4", "--L", "4", "-o", str(g))
    out = tmp_path / "v.json"
    code = run("detect", "family", "--variant", "4l", "--kmax", "2",
               "-i", str(g), "--seed", "2", "-o", str(out))
    assert code == cli.EXIT_CYCLE_FOUND
    verdict = json.loads(out.read_text())
    assert len(verdict["witness"]) == 4


def test_detect_forced_coloring_flag(tmp_path):
    g = tmp_path / "p12.txt"
    labels = tmp_path / "p12.json"
    run("generate", "planted", "--n", "24", "--L", "12",
        "--pendants", "0:10", "--seed", "3", "-o", str(g))
    loaded = load_graph(g)
    pendants = [v for v in loaded.adj[0] if loaded.degree(v) == 1]
    labels.write_text(json.dumps({
        "cycle": list(range(12)),
        "forced_sources": pendants,
    }))
    out = tmp_path / "v.json"
    code = run("detect", "c12c14", "-i", str(g), "--seed", "4",
               "--color-reps", "6",
               "--force-witness-coloring", str(labels), "-o", str(out))
    assert code == cli.EXIT_CYCLE_FOUND
    verdict = json.loads(out.read_text())
    assert verdict["forced_coloring"] is True
    assert len(verdict["witness"]) == 12


def test_detect_output_replayable(tmp_path):
    g = tmp_path / "c4.txt"
    run("generate", "planted", "--n", "4", "--L", "4", "-o", str(g))
    outs = []
    for name in ("x.json", "y.json"):
        out = tmp_path / name
        run("detect", "family", "--variant", "4l", "--kmax", "2",
            "-i", str(g), "--seed", "2", "-o", str(out))
        outs.append(out.read_text())
    assert outs[0] == outs[1]


# ------------------------------------------------------------------- oracle

def test_oracle_count_and_membership(tmp_path):
    g = tmp_path / "c8.txt"
    run("generate", "planted", "--n", "8", "--L", "8", "-o", str(g))
    out = tmp_path / "o.json"
    assert run("oracle", "-i", str(g), "--length", "8", "-o", str(out)) == 0
    payload = json.loads(out.read_text())
    assert payload["count"] == 1
    assert run("oracle", "-i", str(g), "--length", "8", "--node", "3",
               "-o", str(out)) == 0
    assert json.loads(out.read_text())["in_cycle"] is True


def test_oracle_budget_refusal(tmp_path):
    g = tmp_path / "dense.txt"
    run("generate", "random", "--n", "14", "--p", "0.9", "--seed", "1", "-o", str(g))
    assert run("oracle", "-i", str(g), "--length", "12",
               "--budget", "100") == cli.EXIT_BUDGET


def test_usage_error_exit_code(tmp_path):
    assert run("detect", "c2k", "-i", "nope.txt") == cli.EXIT_USAGE  # missing --k
    assert run("nonsense") == cli.EXIT_USAGE
    g = tmp_path / "c8.txt"
    run("generate", "planted", "--n", "8", "--L", "8", "-o", str(g))
    assert run("detect", "c2k", "--k", "6", "-i", str(g)) == cli.EXIT_USAGE


# --------------------------------------------------------------- experiments

def test_sweep_csv_schema_and_replay(tmp_path):
    g, labels = tmp_path / "g7.txt", tmp_path / "g7.json"
    run("generate", "gk", "--k", "7", "--N", "2", "-o", str(g), "--labels", str(labels))
    texts = []
    for name in ("s1.csv", "s2.csv"):
        out = tmp_path / name
        assert run("experiment", "sweep", "-i", str(g), "--labels", str(labels),
                   "--grid", "1:3", "--trials", "10", "--seed", "5",
                   "-o", str(out)) == 0
        texts.append(out.read_text())
    assert texts[0] == texts[1]
    header, *rows = texts[0].strip().splitlines()
    assert header.split(",") == cli.SWEEP_COLUMNS
    assert len(rows) == 3
    first = dict(zip(cli.SWEEP_COLUMNS, rows[0].split(",")))
    assert first["schema_version"] == "1"
    assert 0.0 <= float(first["rate"]) <= 1.0


def test_congestion_bundle_csv_and_summary(tmp_path):
    out, summary = tmp_path / "c.csv", tmp_path / "c.json"
    assert run("congestion", "--bundle", "8:2", "--trials", "100",
               "--threshold", "1", "--seed", "3",
               "-o", str(out), "--summary", str(summary)) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].split(",") == cli.CONGESTION_COLUMNS
    assert len(lines) == 101
    payload = json.loads(summary.read_text())
    assert payload["n_paths"] == 8 and payload["schema_version"] == 1
    # per-row seeds allow replay of any single trial
    row = dict(zip(cli.CONGESTION_COLUMNS, lines[1].split(",")))
    import random

    rng = random.Random(int(row["seed"]))
    cols = [rng.randrange(4) for _ in range(2 + 8 * 2)]
    direct = sum(1 for q in range(8) if cols[2 + 2 * q] == 0 and cols[3 + 2 * q] == 1)
    assert direct == int(row["x"])


def test_congestion_instance_mode(tmp_path):
    g, labels = tmp_path / "g6.txt", tmp_path / "g6.json"
    run("generate", "g6", "--d", "2", "-o", str(g), "--labels", str(labels))
    out = tmp_path / "c.csv"
    assert run("congestion", "-i", str(g), "--labels", str(labels),
               "--trials", "50", "--seed", "1", "-o", str(out)) == 0
    assert len(out.read_text().strip().splitlines()) == 51


def test_congestion_replay_and_jobs_identical(tmp_path):
    paths = [tmp_path / name for name in ("a.csv", "b.csv", "c.csv")]
    for path, jobs in zip(paths, ("1", "1", "2")):
        assert run("congestion", "--bundle", "6:2", "--trials", "40",
                   "--seed", "9", "--jobs", jobs, "-o", str(path)) == 0
    texts = [p.read_text() for p in paths]
    assert texts[0] == texts[1] == texts[2]


# ------------------------------------------------------------------ bad-sets

def test_bad_sets_cli(tmp_path):
    from tests.helpers import b1_gadget

    g, colors, starts = b1_gadget()
    gpath = tmp_path / "b1.txt"
    save_graph(g, gpath)
    out = tmp_path / "report.json"
    assert run("bad-sets", "-i", str(gpath),
               "--cstar", ",".join(str(v) for v in range(14)),
               "--seed", "2", "-o", str(out)) == 0
    report = json.loads(out.read_text())
    assert set(report["sets"]) == {str(i) for i in range(1, 7)}


# -------------------------------------------------------------------- config

def test_config_file_overrides_flags(tmp_path):
    g = tmp_path / "c8.txt"
    run("generate", "planted", "--n", "8", "--L", "8", "-o", str(g))
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"length": 6}))
    out = tmp_path / "o.json"
    assert run("oracle", "-i", str(g), "--length", "8",
               "--config", str(cfgfile), "-o", str(out)) == 0
    assert json.loads(out.read_text())["length"] == 6


def test_outdir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("CONGESTCYCLES_OUTDIR", str(tmp_path))
    assert run("generate", "planted", "--n", "8", "--L", "8", "-o", "sub/c8.txt") == 0
    assert (tmp_path / "sub" / "c8.txt").exists()
