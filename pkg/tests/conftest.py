import functools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from planarperc.adic import AdicParams
from planarperc.generators import bary_tree, cone_tree, fan_triangulate, strip_graph, triangular_lattice
from planarperc.graph import build_graph, induced_subgraph

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def path_graph(n, frontier=()):
    rot = [[u for u in (v - 1, v + 1) if 0 <= u < n] for v in range(n)]
    coords = [(float(v), 0.0) for v in range(n)]
    return build_graph(n, rot, None, coords, frontier)


@functools.lru_cache(maxsize=None)
def lattice(side):
    return triangular_lattice(side)


@functools.lru_cache(maxsize=None)
def tilde(M, d, N):
    return fan_triangulate(strip_graph(AdicParams(M, d, N)))


@functools.lru_cache(maxsize=None)
def family_graph(name):
    if name == "lattice":
        return lattice(6)
    if name == "tree":
        return bary_tree(3, 4)
    if name == "cone":
        return cone_tree(2)
    return tilde(2, 3, 2)


FAMILIES = ("lattice", "tree", "cone", "tilde")


@st.composite
def lattice_patches(draw, min_side=2, max_side=5, frontier=False):
    """Connected induced subgraph of a small lattice, optionally keeping its frontier."""
    side = draw(st.integers(min_side, max_side))
    g = lattice(side)
    n = len(g)
    bits = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    keep = {v for v in range(n) if bits[v]} or {0}
    start = min(keep)
    comp, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for y in g.rotation[x]:
            if y in keep and y not in comp:
                comp.add(y)
                stack.append(y)
    front = [v for v in comp if v in g.frontier] if frontier else []
    h, _ = induced_subgraph(g, comp, front)
    return h


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


CRITERIA = {}


def record(n, ok, detail):
    """Remember one acceptance line; printed in the terminal summary."""
    CRITERIA[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(CRITERIA[n])


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[n])
