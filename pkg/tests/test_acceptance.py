"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line."""

import math
from fractions import Fraction

import numpy as np
import pytest

from planarperc.adic import AdicParams, implicit_corridor, lr_boundary
from planarperc.boundary import ArmSpec, arm_event_occurs, f_boundary, separation_count
from planarperc.engine import (LazyTree, clusters, configuration_at, domination_violations,
                               estimate_pc, explore_zero_cluster, or_projection, sample_uniforms)
from planarperc.experiments import (audit_structure, block_connection_probe, boundary_pairs,
                                    cone_law, crossing_frequency, fit_decay, fit_points,
                                    verify_distance_bounds)
from planarperc.graph import bfs_distance, interior
from planarperc.phi import cutset_inequality_check, le85_bound, phi_value

from conftest import FAMILIES, family_graph, lattice, path_graph, record, tilde
from test_boundary import centre, sector_config
from test_engine import uf_clusters
from test_phi import naive_phi


def grow(rng, g, start, size, within=None, avoid=()):
    """Random connected set of up to ``size`` vertices grown from ``start``."""
    S = {start}
    while len(S) < size:
        options = sorted({w for x in S for w in g.rotation[x]} - S - set(avoid))
        if within is not None:
            options = [w for w in options if w in within]
        if not options:
            break
        S.add(int(rng.choice(options)))
    return S


def test_c01_tree_threshold():
    grid = np.round(np.arange(0.05, 0.2001, 0.01), 2)
    rep = estimate_pc(LazyTree(8), (8, 10, 12), grid, 2000, 2024)
    ok = abs(rep.estimate - 0.125) <= 0.03
    record(1, ok, f"tree T_8 crossing estimate {rep.estimate:.4f} (target 0.125 +- 0.03), "
                  f"pairwise crossings {', '.join(f'{c:.4f}' for c in rep.crossings)}")
    assert ok


def test_c02_triangular_crossing():
    freq, err = crossing_frequency(32, [0.5], 10_000, 7, threads=4)
    ok = abs(freq[0] - 0.5) <= 0.02
    record(2, ok, f"side-32 rhombus crossing at p=0.5: {freq[0]:.4f} +- {err[0]:.4f}")
    assert ok


def test_c03_distance_bound():
    audit = verify_distance_bounds(2, 3, 6, 4)
    literal = not audit.violations and audit.stable
    rows = audit.rows
    split_bad = sum(r["violations"] for r in rows if r["case"] == 1 and r["split"])
    other_bad = sum(r["violations"] for r in rows if not (r["case"] == 1 and r["split"]))
    other_slack = min(r["min_slack"] for r in rows if not (r["case"] == 1 and r["split"]))
    record(3, literal,
           f"{audit.pairs} pairs, {len(audit.violations)} violations, stable={audit.stable}; "
           f"all violations are case-1 pairs in different blocks ({split_bad}); same-block "
           f"case 1 and cases 2/3: {other_bad} violations, min slack {other_slack} "
           "(literal zero-violation target unattainable, analysis in the decisions ledger)")
    # the criterion as stated cannot hold; what is asserted is the diagnosis
    assert audit.stable
    assert split_bad == len(audit.violations) > 0 and other_bad == 0 and other_slack >= 0
    assert all(v[0] == 1 for v in audit.violations)
    # the smallest counterexample, measured on the explicit graph by plain BFS
    g = tilde(2, 3, 5)
    p = AdicParams(2, 3, 5)
    copy = g.labels[0].copy
    a = g.label_index[(copy, *lr_boundary(p, (0, 0, 0, 0), 4, "R"))]
    b = g.label_index[(copy, *lr_boundary(p, (0, 0, 0, 1), 4, "L"))]
    assert bfs_distance(g, a, b) == 3 < 4
    assert (1, 4, (0, 0, 0, 1), 4, (0, 0, 0, 0), 3) in audit.violations


def test_c04_or_projection():
    g = implicit_corridor(AdicParams(2, 3, 8), (0, 1, 1, 0, 1, 0, 0, 1), doubled=True)
    assert len(g) >= 100_000
    proj = or_projection(g)
    n = len(proj.quotient)
    details, ok = [], True
    for k, p in enumerate((0.2, 0.5, 0.8)):
        dens = [proj.project(configuration_at(sample_uniforms(g, 1000 + 10 * k + t), p)).open.mean()
                for t in range(5)]
        want = 2 * p - p * p
        se = math.sqrt(want * (1 - want) / (n * len(dens)))
        good = abs(np.mean(dens) - want) <= 3 * se
        ok &= good
        details.append(f"p={p}: {np.mean(dens):.5f} vs {want:.5f} (3se {3 * se:.5f})")
    bad = 0
    for t in range(1000):
        p = (0.2, 0.5, 0.8)[t % 3]
        bad += len(domination_violations(proj, configuration_at(sample_uniforms(g, 5000 + t), p)))
    ok &= bad == 0
    record(4, ok, f"{len(g)} vertices; " + "; ".join(details) + f"; domination counterexamples {bad}/1000 samples")
    assert ok


def phi_corpus():
    rng = np.random.default_rng(5)
    corpus = [(path_graph(9), Fraction(p, 10), 4, set(range(2, 7))) for p in (3, 5, 7)]
    while len(corpus) < 60:
        g = lattice(int(rng.integers(3, 7)))
        v = int(rng.integers(len(g)))
        S = grow(rng, g, v, int(rng.integers(1, 16)))
        if len(interior(g, S)) <= 12:
            corpus.append((g, Fraction(int(rng.integers(0, 11)), 10), v, S))
    return corpus


def test_c05_phi_exactness():
    corpus = phi_corpus()
    mismatches = sum(phi_value(g, p, v, S).value != naive_phi(g, p, v, S) for g, p, v, S in corpus)
    path_ok = all(phi_value(g, p, v, S).value == 2 * p * p for g, p, v, S in corpus[:3])
    ok = mismatches == 0 and path_ok
    record(5, ok, f"{len(corpus)} instances, {mismatches} mismatches vs naive enumeration, "
                  f"path instance phi = 2p^2: {path_ok}")
    assert ok


def test_c06_cutset():
    rng = np.random.default_rng(6)
    g = lattice(5)
    reports = []
    while len(reports) < 25:
        u = int(rng.integers(len(g)))
        A = grow(rng, g, u, int(rng.integers(4, 15)))
        S = grow(rng, g, u, int(rng.integers(1, 5)), within=A)
        rest = sorted(A - S)
        if not rest:
            continue
        B = set(rng.choice(rest, size=min(2, len(rest)), replace=False).tolist())
        p = Fraction(int(rng.integers(1, 10)), 10)
        reports.append(cutset_inequality_check(g, p, u, S, A, B))
    bad = sum(not r.holds for r in reports)
    ok = bad == 0 and all(r.tolerance == 0 for r in reports)
    record(6, ok, f"{len(reports)} exact instances with |A| <= 14, {bad} violations")
    assert ok


def test_c07_exploration():
    rng = np.random.default_rng(7)
    bad = 0
    for t in range(1000):
        g = family_graph(FAMILIES[t % len(FAMILIES)])
        v0 = int(rng.integers(len(g)))
        p1 = float(rng.uniform(0.1, 0.9))
        s = sample_uniforms(g, 70_000 + t)
        trace = explore_zero_cluster(g, s, p1, v0)
        cfg = configuration_at(s, p1)
        oracle = [c for c in uf_clusters(g, ~cfg.open) if v0 in c]
        C = oracle[0] if oracle else frozenset()
        boundary = {w for v in C for w in g.rotation[v] if cfg.open[w]}
        bad += trace.C != C or trace.boundary != boundary
    record(7, bad == 0, f"1000 (family, seed, v0) triples, {bad} mismatches vs union-find")
    assert bad == 0


def test_c08_monotonicity():
    rng = np.random.default_rng(8)
    g = lattice(12)
    bad = 0
    for t in range(1000):
        p1, p2 = sorted(rng.uniform(0.05, 0.95, 2))
        s = sample_uniforms(g, 80_000 + t)
        low, high = clusters(g, configuration_at(s, p1)), clusters(g, configuration_at(s, p2))
        for c in range(low.count):
            ids = set(high.cluster_id[low.cluster_id == c].tolist())
            bad += len(ids) != 1 or -1 in ids
    record(8, bad == 0, f"1000 coupled samples, {bad} clusters not inside one cluster at p2")
    assert bad == 0


def test_c09_arm_separation():
    g = lattice(8)
    c = centre(8)
    sets = [{c}, {c, c + 1}, {c} | set(g.rotation[c])]
    rng = np.random.default_rng(9)
    bad = events = 0
    for t in range(1000):
        S = sets[t % 3]
        fb = f_boundary(g, S, g.frontier)
        k = int(rng.integers(1, 3))
        spec = ArmSpec.equal_split(fb, k)
        p = (0.4, 0.5, 0.6)[t % 3]
        cfg = configuration_at(sample_uniforms(g, 90_000 + t), p)
        if arm_event_occurs(g, cfg, S, spec).occurs:
            events += 1
            bad += separation_count(g, cfg, S, spec) < k
    built = 0
    for side, S, k in ((8, {c}, 1), (12, None, 2)):
        h = lattice(side)
        m = centre(side)
        S = S if S is not None else {m} | set(h.rotation[m])
        spec = ArmSpec.equal_split(f_boundary(h, S, h.frontier), k)
        cfg = sector_config(h, m, spec, 2 * k)
        assert arm_event_occurs(h, cfg, S, spec).occurs
        built += 1
        bad += separation_count(h, cfg, S, spec) < k
    ok = bad == 0 and events > 0
    record(9, ok, f"1000 samples at p in {{0.4, 0.5, 0.6}} with {events} arm events, "
                  f"{built} constructed instances, {bad} separation violations")
    assert ok


def test_c10_structure():
    reps = [audit_structure(AdicParams(2, 3, N)) for N in (3, 4, 5)]
    ok = all(r.ok for r in reps)
    detail = "; ".join(
        f"N={r.N}: euler {r.euler}, non-triangles {r.nontriangular}, max up {r.max_up}, "
        f"min interior degree {r.min_interior_degree}, swap symmetric before fan {r.automorphism}, "
        f"swap defects after fan {r.asymmetric_after_fan}" for r in reps)
    record(10, ok, detail)
    assert ok


def test_c11_cone_law():
    law = cone_law(3, 0.5, 10_000, 11)
    ok = abs(law.fraction - 0.5) <= 0.02 and law.unique_when_open == law.apex_open
    record(11, ok, f"apex open {law.fraction:.4f} at p=0.5; unique open frontier cluster in "
                   f"{law.unique_when_open}/{law.apex_open} apex-open samples")
    assert ok


def test_c12_deep_block_probe():
    words = [(0, 0, 0), (2, 2, 2), (4, 4, 4), (0, 2, 4)]
    probe = block_connection_probe(5, 3, 0.05, 3, words, 10_000, 12)
    assert probe.bound == pytest.approx(le85_bound(5, 0.05, 3).value)
    record(12, probe.consistent,
           f"p1={probe.p1:.6f}, max MC estimate {probe.estimate:.2e}, 95% one-sided upper "
           f"{probe.worst_upper:.2e} vs bound {probe.bound:.4f} (probe, reported either way)")
    assert 0 <= probe.estimate <= 1


def test_c13_decay_sign():
    params = AdicParams(2, 3, 4)
    word = (0, 0, 0, 0)
    g = implicit_corridor(params, word)
    fit = fit_decay(g, 0.15, boundary_pairs(g, params, word), 20_000, 13)
    xs = np.arange(1, 11, dtype=float)
    synthetic = fit_points(xs, 1.37 * xs - 0.4)
    rel = abs(synthetic.slope - 1.37) / 1.37
    ok = fit.slope > 0 and rel < 1e-12
    record(13, ok, f"slope {fit.slope:.4f}, R^2 {fit.r2:.4f}, censored {fit.censored}; "
                   f"synthetic slope relative error {rel:.1e}")
    assert ok
