"""Command-line front end.

Subcommands: generate, detect, oracle, verify, experiment, bad-sets,
congestion.  Exit codes: 0 free/verified, 10 cycle-found, 20 verification
failure, 1 usage error, 2 budget refusal.  A --config JSON file overrides
matching flags, and CONGESTCYCLES_OUTDIR supplies the default output
directory for relative paths.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import adversarial, analysis, detectors, graphs
from .coloring import ColorAssignment, ThresholdTable, color_bfs
from .util import SCHEMA_VERSION, canonical_json, derive_seed

EXIT_FREE = 0
EXIT_CYCLE_FOUND = 10
EXIT_VERIFY_FAILED = 20
EXIT_USAGE = 1
EXIT_BUDGET = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _outpath(path_str: str) -> Path:
    path = Path(path_str)
    if not path.is_absolute():
        base = os.environ.get("CONGESTCYCLES_OUTDIR", "")
        if base:
            path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _apply_config(args: argparse.Namespace) -> None:
    if getattr(args, "config", None):
        overrides = json.loads(Path(args.config).read_text())
        for key, value in overrides.items():
            setattr(args, key.replace("-", "_"), value)


def _write(path_str: str | None, text: str) -> None:
    if path_str:
        _outpath(path_str).write_text(text)
    else:
        sys.stdout.write(text)


def _load_table(path_str: str) -> ThresholdTable:
    return ThresholdTable.from_json(json.loads(Path(path_str).read_text()))


# ----------------------------------------------------------------------
# generate
# ----------------------------------------------------------------------

def _cmd_generate(args) -> int:
    kind = args.what
    labels = None
    if kind == "gk":
        inst = adversarial.generate_gk(args.k, args.N)
        g, labels = inst.graph, inst
        comments = [f"gk k={args.k} N={args.N}"]
    elif kind == "g6":
        inst = adversarial.generate_g6(args.d)
        g, labels = inst.graph, inst
        comments = [f"g6 d={args.d}"]
    elif kind == "c4free-bipartite":
        g = adversarial.generate_c4free_bipartite(args.d)
        comments = [f"c4free-bipartite d={args.d}"]
    elif kind == "planted":
        pend = None
        if args.pendants:
            pos, count = args.pendants.split(":")
            pend = (int(pos), int(count))
        g, _cycle = graphs.plant_cycle(
            args.n, args.L, pendants=pend, clean=not args.no_clean, seed=args.seed
        )
        comments = [f"planted n={args.n} L={args.L} seed={args.seed}"]
    elif kind == "random":
        g = graphs.random_graph(args.n, p=args.p, d=args.d, seed=args.seed)
        comments = [f"random n={args.n} seed={args.seed}"]
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown generator {kind}")
    graphs.save_graph(g, _outpath(args.output), comments=comments)
    if labels is not None and args.labels:
        adversarial.save_labels(labels, _outpath(args.labels))
    print(f"wrote {args.output}: {g.n} nodes, {g.m} edges")
    return EXIT_FREE


# ----------------------------------------------------------------------
# detect
# ----------------------------------------------------------------------

def _forced_from_labels(labels_path: str) -> detectors.ForcedColoring:
    obj = json.loads(Path(labels_path).read_text())
    cycle = obj["cycle"]
    sources = obj.get("forced_sources", obj.get("sources", []))
    return detectors.ForcedColoring.for_cycle(cycle, sources)


def _run_config(args) -> detectors.RunConfig:
    forced = None
    if getattr(args, "force_witness_coloring", None):
        forced = _forced_from_labels(args.force_witness_coloring)
    return detectors.RunConfig(
        seed=args.seed,
        source_repetitions=args.source_reps,
        color_repetitions=args.color_reps,
        c1=args.trials_scale,
        c2=args.trials_scale,
        loop_order=args.loop_order,
        forced=forced,
    )


def _cmd_detect(args) -> int:
    g = graphs.load_graph(args.input)
    cfg = _run_config(args)
    if args.detector == "c2k":
        if args.thresholds:
            table = _load_table(args.thresholds)
        elif args.k in detectors.EXTERNAL_DEFAULT_TABLES:
            table = detectors.EXTERNAL_DEFAULT_TABLES[args.k]
        elif args.k == 2:
            table = detectors.incremental_thresholds(1, "4l")
        else:
            raise UsageError(
                f"no built-in threshold table for k={args.k}; pass --thresholds"
            )
        verdict = detectors.decide_c2k_freeness(g, args.k, cfg, table)
    elif args.detector == "c12c14":
        verdict = detectors.decide_c12_c14_freeness(g, cfg)
    elif args.detector == "c10c12":
        table = (
            _load_table(args.t5_table)
            if args.t5_table
            else detectors.EXTERNAL_DEFAULT_TABLES[5]
        )
        verdict = detectors.decide_c10_c12_freeness(g, cfg, table)
    elif args.detector == "family":
        variant = "4l" if args.variant == "4l" else "4l+2"
        verdict = detectors.decide_family_freeness(g, variant, args.kmax, cfg)
    else:  # pragma: no cover
        raise UsageError(f"unknown detector {args.detector}")
    payload = {
        "schema_version": SCHEMA_VERSION,
        "detector": args.detector,
        "seed": args.seed,
        "forced_coloring": bool(cfg.forced),
        **verdict.to_json(),
    }
    _write(args.output, canonical_json(payload))
    return EXIT_CYCLE_FOUND if verdict.found else EXIT_FREE


# ----------------------------------------------------------------------
# oracle
# ----------------------------------------------------------------------

def _cmd_oracle(args) -> int:
    g = graphs.load_graph(args.input)
    if args.node is not None:
        member = graphs.node_in_cycle_of_length(
            g, args.node, args.length, step_budget=args.budget
        )
        payload = {
            "schema_version": SCHEMA_VERSION,
            "node": args.node,
            "length": args.length,
            "in_cycle": member,
        }
        _write(args.output, canonical_json(payload))
        return EXIT_FREE
    cycles = graphs.enumerate_cycles(g, args.length, step_budget=args.budget)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "length": args.length,
        "count": len(cycles),
        "cycles": [list(c) for c in cycles],
    }
    _write(args.output, canonical_json(payload))
    return EXIT_FREE


# ----------------------------------------------------------------------
# verify
# ----------------------------------------------------------------------

def _cmd_verify(args) -> int:
    g = graphs.load_graph(args.input)
    if args.what == "gk":
        inst = adversarial.load_instance(g, args.labels)
        report = adversarial.verify_unique_cycle(
            inst, spectrum=not args.no_spectrum, step_budget=args.budget
        )
        _write(args.output, canonical_json(report))
        ok = report["unique"] and report.get("spectrum_match", True)
        return EXIT_FREE if ok else EXIT_VERIFY_FAILED
    if args.what == "bipartite":
        half = g.n // 2
        degrees = {g.degree(v) for v in range(g.n)}
        four_cycles = graphs.enumerate_cycles(g, 4, step_budget=args.budget)
        d = next(iter(degrees)) if len(degrees) == 1 else None
        report = {
            "schema_version": SCHEMA_VERSION,
            "nodes": g.n,
            "edges": g.m,
            "regular": d,
            "part_size": half,
            "c4free": not four_cycles,
        }
        _write(args.output, canonical_json(report))
        ok = d is not None and not four_cycles and g.m == d * half
        return EXIT_FREE if ok else EXIT_VERIFY_FAILED
    raise UsageError(f"unknown verify target {args.what}")  # pragma: no cover


# ----------------------------------------------------------------------
# experiment sweep
# ----------------------------------------------------------------------

def _sweep_one_cap(inst: adversarial.GkInstance, cap: int, trials: int, seed: int):
    g = inst.graph
    k = inst.k
    palette = 2 * k
    setup = analysis.CongestionSetup.from_instance(inst)
    r = (1.0 / palette) ** setup.path_len
    cls = graphs.classify_nodes(g, k)
    table = ThresholdTable.uniform(k, cap)
    detections = 0
    rounds_total = 0
    for trial in range(trials):
        tseed = derive_seed(seed, "sweep", cap, trial)
        rng = random.Random(tseed)
        colors = [rng.randrange(palette) for _ in range(g.n)]
        for j, v in enumerate(inst.cycle):
            colors[v] = j
        s = inst.sources[rng.randrange(len(inst.sources))]
        colors[s] = -1
        ca = ColorAssignment(k=k, include_minus_one=True, colors=tuple(colors))
        heavy_w = [w for w in g.adj[s] if cls.is_heavy(w) and colors[w] == 0]
        found = False
        if heavy_w:
            outcome, trace = color_bfs(g, k, heavy_w, ca, table)
            rounds_total += trace.total_rounds
            found = outcome.rejected
        detections += int(found)
    return {
        "schema_version": SCHEMA_VERSION,
        "threshold": cap,
        "trials": trials,
        "detections": detections,
        "rate": detections / trials,
        "mean_rounds": rounds_total / trials,
        "theory_tail": analysis.binom_cdf(setup.n_paths, cap, r),
        "base_seed": seed,
    }


def sweep_rows(inst: adversarial.GkInstance, grid, trials: int, seed: int, jobs: int = 1):
    """One row per cap value: detection rate of the capped flood on the
    instance under a pinned favorable cycle coloring and a random start node
    from S, next to the matching Binomial tail.  Non-cycle nodes draw from
    {0..2k-1}; the start node is pinned to -1.  Rows come back in grid
    order regardless of jobs."""
    grid = list(grid)
    if jobs <= 1 or len(grid) < 2:
        return [_sweep_one_cap(inst, cap, trials, seed) for cap in grid]
    import multiprocessing
    from functools import partial

    with multiprocessing.Pool(jobs) as pool:
        rows = pool.map(partial(_sweep_one_cap, inst, trials=trials, seed=seed), grid)
    return sorted(rows, key=lambda row: grid.index(row["threshold"]))


SWEEP_COLUMNS = [
    "schema_version", "threshold", "trials", "detections",
    "rate", "mean_rounds", "theory_tail", "base_seed",
]


def _csv_text(columns, rows) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def _cmd_experiment(args) -> int:
    if args.what != "sweep":  # pragma: no cover
        raise UsageError(f"unknown experiment {args.what}")
    g = graphs.load_graph(args.input)
    inst = adversarial.load_instance(g, args.labels)
    lo, hi = (int(x) for x in args.grid.split(":"))
    rows = sweep_rows(inst, range(lo, hi + 1), args.trials, args.seed, jobs=args.jobs)
    _write(args.output, _csv_text(SWEEP_COLUMNS, rows))
    return EXIT_FREE


# ----------------------------------------------------------------------
# congestion
# ----------------------------------------------------------------------

CONGESTION_COLUMNS = ["schema_version", "trial", "seed", "x", "within"]


def _cmd_congestion(args) -> int:
    if args.bundle:
        n_paths, path_len = (int(x) for x in args.bundle.split(":"))
        setup = analysis.CongestionSetup.bundle(n_paths, path_len)
    else:
        if not (args.input and args.labels):
            raise UsageError("congestion needs either --bundle N:LEN or -i graph --labels file")
        g = graphs.load_graph(args.input)
        inst = adversarial.load_instance(g, args.labels)
        setup = analysis.CongestionSetup.from_instance(inst)
    samples, summary = analysis.congestion_experiment(
        setup, args.trials, args.threshold, seed=args.seed,
        palette_size=args.palette, jobs=args.jobs,
    )
    rows = [
        {
            "schema_version": SCHEMA_VERSION,
            "trial": s.trial,
            "seed": s.seed,
            "x": s.x,
            "within": int(s.within),
        }
        for s in samples
    ]
    _write(args.output, _csv_text(CONGESTION_COLUMNS, rows))
    if args.summary:
        _write(args.summary, canonical_json(summary))
    return EXIT_FREE


# ----------------------------------------------------------------------
# bad-sets
# ----------------------------------------------------------------------

def _cmd_bad_sets(args) -> int:
    g = graphs.load_graph(args.input)
    if args.cstar:
        cstar = tuple(int(x) for x in args.cstar.split(","))
    else:
        obj = json.loads(Path(args.labels).read_text())
        cstar = tuple(obj["cycle"])
    rng = random.Random(args.seed)
    colors = [rng.randrange(-1, 14) for _ in range(g.n)]
    for j, v in enumerate(cstar):
        colors[v] = j
    report = analysis.compute_bad_sets(
        g, colors, cstar, include_reverse=args.reverse
    )
    _write(args.output, canonical_json(report.to_json()))
    return EXIT_FREE


# ----------------------------------------------------------------------
# parser wiring
# ----------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="congestcycles")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write instance files")
    gsub = p.add_subparsers(dest="what", required=True)
    for name in ("gk", "g6", "c4free-bipartite", "planted", "random"):
        q = gsub.add_parser(name)
        q.add_argument("-o", "--output", required=True)
        q.add_argument("--labels")
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--config")
        if name == "gk":
            q.add_argument("--k", type=int, required=True)
            q.add_argument("--N", type=int, required=True)
        elif name in ("g6", "c4free-bipartite"):
            q.add_argument("--d", type=int, required=True)
        elif name == "planted":
            q.add_argument("--n", type=int, required=True)
            q.add_argument("--L", type=int, required=True)
            q.add_argument("--pendants", help="POS:COUNT leaf neighbors on a cycle node")
            q.add_argument("--no-clean", action="store_true")
        elif name == "random":
            q.add_argument("--n", type=int, required=True)
            q.add_argument("--p", type=float)
            q.add_argument("--d", type=int)
        q.set_defaults(func=_cmd_generate)

    p = sub.add_parser("detect", help="run a freeness decider")
    dsub = p.add_subparsers(dest="detector", required=True)
    for name in ("c2k", "c12c14", "c10c12", "family"):
        q = dsub.add_parser(name)
        q.add_argument("-i", "--input", required=True)
        q.add_argument("-o", "--output")
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--source-reps", type=int)
        q.add_argument("--color-reps", type=int)
        q.add_argument("--trials-scale", type=float, default=1.0)
        q.add_argument("--loop-order", default="colors-outer",
                       choices=["colors-outer", "sources-outer"])
        q.add_argument("--force-witness-coloring", metavar="LABELS_JSON",
                       help="pin the labeled cycle to canonical colors (non-algorithmic)")
        q.add_argument("--config")
        if name == "c2k":
            q.add_argument("--k", type=int, required=True)
            q.add_argument("--thresholds", help="threshold table JSON")
        elif name == "c10c12":
            q.add_argument("--t5-table", help="threshold table JSON for the length-10 stage")
        elif name == "family":
            q.add_argument("--variant", required=True, choices=["4l", "4l+2"])
            q.add_argument("--kmax", type=int, required=True)
        q.set_defaults(func=_cmd_detect)

    p = sub.add_parser("oracle", help="exhaustive cycle enumeration")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--node", type=int, help="membership test instead of enumeration")
    p.add_argument("--budget", type=int, default=graphs.DEFAULT_STEP_BUDGET)
    p.add_argument("-o", "--output")
    p.add_argument("--config")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("verify", help="check generated instances")
    vsub = p.add_subparsers(dest="what", required=True)
    for name in ("gk", "bipartite"):
        q = vsub.add_parser(name)
        q.add_argument("-i", "--input", required=True)
        q.add_argument("-o", "--output")
        q.add_argument("--budget", type=int, default=graphs.DEFAULT_STEP_BUDGET)
        q.add_argument("--config")
        if name == "gk":
            q.add_argument("--labels", required=True)
            q.add_argument("--no-spectrum", action="store_true")
        q.set_defaults(func=_cmd_verify)

    p = sub.add_parser("experiment", help="threshold sweeps")
    esub = p.add_subparsers(dest="what", required=True)
    q = esub.add_parser("sweep")
    q.add_argument("-i", "--input", required=True)
    q.add_argument("--labels", required=True)
    q.add_argument("--grid", default="1:20", help="LO:HI inclusive cap range")
    q.add_argument("--trials", type=int, default=200)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("-o", "--output")
    q.add_argument("--config")
    q.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("congestion", help="identifier-count experiments")
    p.add_argument("-i", "--input")
    p.add_argument("--labels")
    p.add_argument("--bundle", metavar="N:LEN", help="synthetic reduced-scale setup")
    p.add_argument("--palette", type=int)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--threshold", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output")
    p.add_argument("--summary")
    p.add_argument("--config")
    p.set_defaults(func=_cmd_congestion)

    p = sub.add_parser("bad-sets", help="bad-neighbor set report")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--labels")
    p.add_argument("--cstar", help="comma-separated 14-cycle node list")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reverse", action="store_true")
    p.add_argument("-o", "--output")
    p.add_argument("--config")
    p.set_defaults(func=_cmd_bad_sets)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except graphs.OracleBudgetError as exc:
        print(f"budget refusal: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError, KeyError, graphs.GenerationError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
