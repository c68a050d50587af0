import math
import random

import pytest

from congestcycles import analysis as an
from congestcycles.coloring import ColorAssignment, ThresholdTable, color_bfs
from congestcycles.adversarial import generate_g6, generate_gk
from congestcycles.graphs import Graph, classify_nodes, random_graph
from congestcycles.util import derive_seed
from tests.helpers import (
    b1_gadget,
    b2_gadget,
    b3_gadget,
    b4_gadget,
    b5_gadget,
    b6_gadget,
    blocking_gadget,
    random_c14_host,
)


# ------------------------------------------------------------- path packing

def test_packing_single_path():
    g = Graph(3, [(0, 1), (1, 2)])
    res = an.max_disjoint_wellcolored_paths(g, (-1, 0, 1), 0, 2, 1)
    assert res.rho == 1 and res.paths == ((0, 1, 2),)


def test_packing_theta():
    g = Graph(6, [(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)])
    res = an.max_disjoint_wellcolored_paths(g, (-1, 0, 1, 0, 1, 2), 0, 5, 2)
    assert res.rho == 2
    inner = [set(p[1:-1]) for p in res.paths]
    assert not (inner[0] & inner[1])


def test_packing_validates_endpoints():
    g = Graph(3, [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        an.max_disjoint_wellcolored_paths(g, (0, 0, 1), 0, 2, 1)
    with pytest.raises(ValueError):
        an.max_disjoint_wellcolored_paths(g, (-1, 0, 2), 0, 2, 1)


def test_flow_equals_bruteforce_packing():
    rng = random.Random(17)
    for trial in range(80):
        n = rng.randrange(6, 12)
        g = random_graph(n, p=rng.uniform(0.25, 0.55), seed=2000 + trial)
        i = rng.randrange(1, 5)
        colors = [rng.randrange(-1, i + 2) for _ in range(n)]
        colors[0] = -1
        colors[n - 1] = i
        res = an.max_disjoint_wellcolored_paths(g, colors, 0, n - 1, i)
        brute = an.exhaustive_max_packing(
            an.enumerate_wellcolored_paths(g, colors, 0, n - 1, i)
        )
        assert res.rho == brute
        assert len(res.paths) == res.rho
        seen = set()
        for p in res.paths:
            interior = set(p[1:-1])
            assert not (interior & seen)
            seen |= interior


# ---------------------------------------------------------------- bad sets

def test_bad_sets_trivial_instance_all_empty():
    g, colors = random_c14_host(1)
    report = an.compute_bad_sets(g, colors, tuple(range(14)))
    # every start has at most a handful of disjoint routes, far below f
    assert all(len(report.sets[i]) == 0 for i in range(1, 7))
    assert report.f == an.DEFAULT_BAD_SET_LIMITS


def test_f_values_materialized():
    assert an.DEFAULT_BAD_SET_LIMITS == {1: 60, 2: 10, 3: 10, 4: 5, 5: 5, 6: 6}


def test_b1_gadget_bound():
    g, colors, starts = b1_gadget()
    report = an.compute_bad_sets(g, colors, tuple(range(14)))
    assert report.sets[1] == tuple(starts)
    assert all(report.rho[(1, s)] == 62 for s in starts)
    assert report.bounds_ok() == {i: True for i in range(1, 7)} | {"union": True}
    assert len(report.sets[1]) <= report.deg_u0 / 4


def test_b2_b3_b4_gadget_bounds():
    for builder, idx, expected in ((b2_gadget, 2, 3), (b3_gadget, 3, 2), (b4_gadget, 4, 1)):
        g, colors, starts = builder()
        report = an.compute_bad_sets(g, colors, tuple(range(14)))
        assert len(report.sets[idx]) == expected
        assert set(report.sets[idx]) == set(starts)
        assert all(v for v in report.bounds_ok().values())


def test_b5_b6_emptied_by_cycle_membership():
    # six disjoint routes exist, but they put the start on a 12- or 14-cycle,
    # so the membership filter must exclude it
    for builder in (b5_gadget, b6_gadget):
        g, colors, starts = builder()
        report = an.compute_bad_sets(g, colors, tuple(range(14)))
        assert tuple(starts) == report.excluded_by_cycle
        assert report.sets[5] == () and report.sets[6] == ()


def test_cstar_coloring_is_validated():
    g, colors = random_c14_host(3)
    colors = list(colors)
    colors[5] = 9
    with pytest.raises(ValueError):
        an.compute_bad_sets(g, colors, tuple(range(14)))
    with pytest.raises(ValueError):
        an.compute_bad_sets(g, colors, tuple(range(12)))


def test_good_neighbor_fraction_trivial():
    g, colors = random_c14_host(2)
    report = an.compute_bad_sets(g, colors, tuple(range(14)), include_reverse=True)
    frac = an.good_neighbor_fraction(report)
    assert frac == 1


def test_good_neighbor_fraction_with_bad_sets():
    g, colors, starts = b1_gadget()
    report = an.compute_bad_sets(g, colors, tuple(range(14)), include_reverse=True)
    frac = an.good_neighbor_fraction(report)
    assert 0 < frac < 1
    assert report.deg_u0 - len(report.union) >= report.deg_u0 / 36 - 6


def test_path_family_extension():
    # with f(1) >= (b-1)*1 + |{u_0}|, a chosen path family around one bad
    # start must leave room for a disjoint route from another bad start
    g, colors, (s1, s2) = b1_gadget()
    first = an.max_disjoint_wellcolored_paths(g, colors, s1, 1, 1).paths[0]
    forbidden = {0} | set(first[1:-1])
    res = an.max_disjoint_paths_with_forbidden(g, colors, s2, 1, 1, forbidden)
    assert res.rho >= 1
    assert all(v not in forbidden for p in res.paths for v in p[1:-1])


def test_random_hosts_respect_all_bounds():
    for seed in range(30):
        g, colors = random_c14_host(seed)
        report = an.compute_bad_sets(g, colors, tuple(range(14)))
        assert all(v for v in report.bounds_ok().values()), (seed, report.sets)


# --------------------------------------------------- received-count inequality

def test_received_identifiers_bounded_by_packing_times_cap():
    # the capped flood can deliver at most rho * T(i-1) identifiers to a
    # node colored i; check on the congestion gadget where the count is tight
    g, colors, star, plain = blocking_gadget()
    ca = ColorAssignment(4, True, tuple(colors))
    table = ThresholdTable.uniform(4, 100)
    cls = classify_nodes(g, 4)
    heavy_w = [w for w in g.adj[star] if cls.is_heavy(w) and colors[w] == 0]
    out, _ = color_bfs(g, 4, heavy_w, ca, table, probes=(2,))
    received = len(out.probe_received[2])
    rho = an.max_disjoint_wellcolored_paths(g, colors, star, 2, 2).rho
    assert received == 6
    assert rho == 6
    assert received <= rho * table.cap(1)


# ------------------------------------------------------------- binomials

def test_binom_helpers():
    assert an.binom_pmf(4, 0, 0.5) == pytest.approx(0.0625)
    assert an.binom_cdf(4, 4, 0.3) == pytest.approx(1.0)
    assert an.binom_cdf(10, -1, 0.5) == 0.0
    total = sum(an.binom_pmf(6, t, 0.2) for t in range(7))
    assert total == pytest.approx(1.0)


# ------------------------------------------------------------- congestion

def test_bundle_engine_count_matches_direct_count():
    setup = an.CongestionSetup.bundle(12, 2)
    samples, summary = an.congestion_experiment(setup, 500, threshold=1, seed=3)
    for s in samples:
        rng = random.Random(s.seed)
        cols = [rng.randrange(4) for _ in range(setup.graph.n)]
        direct = sum(
            1
            for q in range(12)
            if cols[2 + 2 * q] == 0 and cols[3 + 2 * q] == 1
        )
        assert direct == s.x
        assert s.within == (s.x <= 1)
    assert summary["r"] == pytest.approx(1 / 16)


def test_bundle_mean_within_three_standard_errors():
    trials = 20_000
    setup = an.CongestionSetup.bundle(20, 2)
    _, summary = an.congestion_experiment(setup, trials, threshold=0, seed=11)
    se = math.sqrt(summary["theory"]["variance"] / trials)
    assert abs(summary["empirical"]["mean"] - summary["theory"]["mean"]) <= 3 * se


def test_threshold_zero_matches_closed_form():
    trials = 20_000
    setup = an.CongestionSetup.bundle(16, 2)
    _, summary = an.congestion_experiment(setup, trials, threshold=0, seed=5)
    r = summary["r"]
    closed = (1 - r) ** 16
    assert summary["theory"]["p_within"] == pytest.approx(closed)
    p = summary["empirical"]["p_within"]
    se = math.sqrt(closed * (1 - closed) / trials)
    assert abs(p - closed) <= 3 * se


def test_ks_distance_small_in_reduced_palette_mode():
    setup = an.CongestionSetup.bundle(20, 2)
    _, summary = an.congestion_experiment(setup, 100_000, threshold=0, seed=21)
    assert summary["ks_distance"] < 0.05


def test_instance_setup_parameters():
    inst7 = generate_gk(7, 3)
    setup7 = an.CongestionSetup.from_instance(inst7)
    assert setup7.n_paths == 3 and setup7.path_len == 4
    assert setup7.probe == inst7.attach and setup7.probe_color == 4
    inst6 = generate_g6(2)
    setup6 = an.CongestionSetup.from_instance(inst6)
    assert setup6.n_paths == 2 and setup6.path_len == 3  # Binomial over sqrt(N)=d


def test_instance_congestion_runs_and_excludes_u0():
    inst = generate_gk(7, 2)
    setup = an.CongestionSetup.from_instance(inst)
    samples, summary = an.congestion_experiment(setup, 300, threshold=0, seed=2)
    assert summary["r"] == pytest.approx((1 / 14) ** 4)
    assert all(s.x <= inst.N for s in samples)


def test_palette_too_small_rejected():
    setup = an.CongestionSetup.bundle(4, 3)
    with pytest.raises(ValueError):
        an.congestion_experiment(setup, 10, threshold=0, palette_size=3)


# ------------------------------------------------------------- calibration

def test_wellcolored_rate_small_scale():
    rate = an.wellcolored_path_rate(2, 4, 200_000, seed=9)
    assert abs(rate - 1 / 16) / (1 / 16) < 0.05


def test_seed_derivation_stability():
    assert derive_seed(1, "a", 2) == derive_seed(1, "a", 2)
    assert derive_seed(1, "a", 2) != derive_seed(1, "a", 3)
