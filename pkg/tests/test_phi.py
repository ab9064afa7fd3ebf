import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from planarperc.errors import BadParameters, InteriorTooLargeForExact, VertexNotInS
from planarperc.generators import bary_tree
from planarperc.graph import interior
from planarperc.phi import (BoundParams, cutset_inequality_check, le85_bound, phi_threshold_scan,
                            phi_value, supercritical_lower_bound)

from conftest import lattice, path_graph


def naive_phi(g, p, v, S):
    """Sum over every open/closed assignment of the interior, one BFS per assignment."""
    S = set(S)
    inner = sorted(interior(g, S))
    if v not in inner:
        return Fraction(1)
    outer = sorted(S - set(inner))
    total = Fraction(0)
    for bits in itertools.product((False, True), repeat=len(inner)):
        is_open = dict(zip(inner, bits))
        w = Fraction(1)
        for b in bits:
            w *= p if b else 1 - p
        reach = set()
        if is_open[v]:
            reach, stack = {v}, [v]
            while stack:
                x = stack.pop()
                for y in g.rotation[x]:
                    if is_open.get(y) and y not in reach:
                        reach.add(y)
                        stack.append(y)
        for y in outer:
            if reach & set(g.rotation[y]):
                total += w
    return total


def test_path_instance():
    g = path_graph(9)
    S = set(range(2, 7))
    for p in (Fraction(1, 2), Fraction(1, 3), Fraction(3, 4)):
        assert phi_value(g, p, 4, S).value == 2 * p * p
    assert phi_value(g, 0.5, 4, S).value == 0.5


def test_boundary_vertex_gives_one():
    g = path_graph(9)
    for p in (0.0, 0.3, 1.0):
        assert phi_value(g, p, 2, set(range(2, 7))).value == 1


def test_zero_p():
    g = lattice(4)
    S = {6, 7, 8, 11, 12, 13, 16, 17, 18}
    assert phi_value(g, 0.0, 12, S).value == 0


def test_phi_errors():
    g = lattice(6)
    with pytest.raises(VertexNotInS):
        phi_value(g, 0.5, 0, {1, 2})
    with pytest.raises(InteriorTooLargeForExact):
        phi_value(g, 0.5, 24, set(range(len(g))))


@st.composite
def phi_instances(draw):
    g = lattice(draw(st.integers(3, 6)))
    n = len(g)
    v = draw(st.integers(0, n - 1))
    S = {v}
    for _ in range(draw(st.integers(0, 14))):
        options = sorted({w for x in S for w in g.rotation[x]} - S)
        S.add(draw(st.sampled_from(options)))
    if len(interior(g, S)) > 12:
        S = set(list(sorted(S))[:1])
        v = next(iter(S))
    p = Fraction(draw(st.integers(0, 10)), 10)
    return g, p, v, S


@given(phi_instances())
def test_exact_matches_naive(inst):
    g, p, v, S = inst
    assert phi_value(g, p, v, S).value == naive_phi(g, p, v, S)


@given(phi_instances())
def test_exact_monotone_in_p(inst):
    g, _, v, S = inst
    vals = [phi_value(g, Fraction(k, 8), v, S).value for k in range(9)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_monte_carlo_agrees():
    g = lattice(6)
    c = 3 * 7 + 3
    S = {c, c + 1} | set(g.rotation[c]) | set(g.rotation[c + 1])
    exact = float(phi_value(g, 0.6, c, S).value)
    mc = phi_value(g, 0.6, c, S, mode="monte_carlo", trials=4000, seed=3)
    assert mc.method == "monte_carlo" and mc.stderr > 0
    assert abs(mc.value - exact) < 4 * mc.stderr


def test_cutset_unreachable_target():
    g = path_graph(10)
    rep = cutset_inequality_check(g, Fraction(1, 2), 2, {1, 2, 3}, {0, 1, 2, 3, 4}, {9})
    assert rep.lhs == 0 and rep.holds


def test_cutset_boundary_source_is_equality():
    g = path_graph(8)
    S, A, B = {2, 3, 4}, set(range(8)), {7}
    rep = cutset_inequality_check(g, Fraction(2, 5), 2, S, A, B)
    assert rep.holds and rep.rhs == rep.lhs


def test_cutset_two_block_graph():
    # two 5-vertex blocks of the lattice joined through a narrow neck
    g = lattice(5)
    left = {0, 1, 6, 7, 12}
    right = {13, 14, 8, 9, 19}
    A = left | right
    rep = cutset_inequality_check(g, Fraction(1, 2), 6, left, A, {19})
    assert rep.holds and rep.tolerance == 0


@st.composite
def cutset_instances(draw):
    g = lattice(4)
    u = draw(st.integers(0, len(g) - 1))
    A = {u}
    for _ in range(draw(st.integers(2, 12))):
        options = sorted({w for x in A for w in g.rotation[x]} - A)
        A.add(draw(st.sampled_from(options)))
    S = {u}
    for _ in range(draw(st.integers(0, 4))):
        options = sorted({w for x in S for w in g.rotation[x]} & A - S)
        if options:
            S.add(draw(st.sampled_from(options)))
    rest = sorted(A - S)
    if not rest:
        return None
    B = set(draw(st.lists(st.sampled_from(rest), min_size=1, max_size=3)))
    return g, Fraction(draw(st.integers(1, 9)), 10), u, S, A, B


@given(cutset_instances())
def test_cutset_holds_exactly(inst):
    if inst is None:
        return
    rep = cutset_inequality_check(*inst)
    assert rep.holds and rep.lhs <= rep.rhs


def test_scan_tree_balls():
    B, eps = 8, 0.1
    g = bary_tree(B, 3)
    depth = [lab.depth for lab in g.labels]
    balls = [{v for v in range(len(g)) if depth[v] <= r} for r in (1, 2)]
    grid = [k / 1000 for k in range(1, 200)]
    rep = phi_threshold_scan(g, 0, balls, grid, eps)
    # phi on the radius-r ball is (B p)^r, so the largest grid p below 1 - eps is known
    best = max((1 - eps) ** (1 / r) / B for r in (1, 2))
    assert rep.proxy == max(p for p in grid if p <= best + 1e-12)
    assert all(rep.monotone)


def test_scan_extremes():
    g = path_graph(7)
    S = [set(range(1, 6))]
    rep = phi_threshold_scan(g, 3, S, [0.0, 1.0], 0.2)
    assert rep.values[0, 0] == 0 and rep.values[0, 1] >= 1
    assert rep.proxy == 0.0


def test_bound_examples():
    assert supercritical_lower_bound(BoundParams(0.5, 0.5, 0.1)) == 0
    assert supercritical_lower_bound(BoundParams(0.3, 0.3, 0.2)) == 0
    assert supercritical_lower_bound(BoundParams(0.5, 0.3, 0.1)) == pytest.approx(
        1 - (0.5 / 0.7) ** 0.9)
    assert supercritical_lower_bound(BoundParams(1 - 1e-12, 0.3, 0.1)) == pytest.approx(1, abs=1e-9)
    b = BoundParams(0.5, 0.3, 0.05, M=40)
    assert b.theta == pytest.approx(0.15) and b.converges
    assert not BoundParams(0.5, 0.3, 0.05, M=20).converges
    with pytest.raises(BadParameters):
        BoundParams(0.2, 0.3, 0.1)


@given(st.floats(0.01, 0.98), st.floats(0.0, 0.98), st.floats(0.01, 0.99), st.floats(0, 1))
def test_bound_monotone(p1, dp, eps, t):
    p = p1 + (0.99 - p1) * t
    base = supercritical_lower_bound(BoundParams(p, p1, eps))
    assert 0 <= base < 1
    higher = supercritical_lower_bound(BoundParams(min(0.99, p + dp * (0.99 - p)), p1, eps))
    assert higher >= base - 1e-15
    lower_p1 = supercritical_lower_bound(BoundParams(p, p1 * t if p1 * t > 0 else p1, eps))
    assert lower_p1 >= base - 1e-15


def test_le85_examples():
    b = le85_bound(5, 0.05, 3)
    assert b.value == pytest.approx(0.89 ** 3) and not b.vacuous
    assert le85_bound(2, 0.05, 1).vacuous
    with pytest.raises(BadParameters):
        le85_bound(5, 0.05, 0)
    assert math.isclose(le85_bound(17, 0.01, 2).base, 4 / 17 + 0.09 / 17)
