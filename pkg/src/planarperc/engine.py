"""Site percolation under the standard coupling.

One uniform ``U(v)`` per vertex fixes the configuration at every level ``p`` at
once: ``v`` is open at level ``p`` iff ``U(v) <= p``.
"""

import heapq
import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import (BadProbability, EmptyGrid, PreconditionViolated,
                     RegionTooLargeForExact, UnpairedVertex)
from .graph import build_graph
from .rng import derive_seed, uniform, uniforms

OPEN, CLOSED = 1, 0
EXACT_LIMIT = 20


def check_p(p):
    if not 0 <= p <= 1:
        raise BadProbability(f"p must lie in [0, 1], got {p}")
    return p


@dataclass(frozen=True, eq=False)
class PercolationSample:
    graph: object
    master_seed: int

    @cached_property
    def u(self):
        return uniforms(self.master_seed, np.arange(len(self.graph)))

    def value(self, v):
        return uniform(self.master_seed, v)


def sample_uniforms(g, seed):
    return PercolationSample(g, int(seed))


@dataclass(frozen=True, eq=False)
class Configuration:
    p: float
    open: np.ndarray
    sample: Optional[PercolationSample] = None

    @property
    def open_set(self):
        return set(np.flatnonzero(self.open).tolist())

    def state(self, v):
        return OPEN if self.open[v] else CLOSED


def configuration_at(sample, p):
    check_p(p)
    return Configuration(p, sample.u <= p, sample)


def configuration_from_open(g, open_vertices, p=None):
    mask = np.zeros(len(g), dtype=bool)
    if len(open_vertices):
        mask[list(open_vertices)] = True
    return Configuration(p, mask, None)


@dataclass(frozen=True, eq=False)
class ClusterPartition:
    state: int
    cluster_id: np.ndarray
    sizes: np.ndarray
    frontier_touching: np.ndarray

    @property
    def count(self):
        return len(self.sizes)

    @property
    def frontier_count(self):
        return int(self.frontier_touching.sum())

    def cluster_of(self, v):
        c = self.cluster_id[v]
        if c < 0:
            return frozenset()
        return frozenset(np.flatnonzero(self.cluster_id == c).tolist())


def clusters(g, config, state=OPEN):
    mask = config.open if state == OPEN else ~config.open
    labels, count = g.component_labels(mask)
    inside = labels[labels >= 0]
    sizes = np.bincount(inside, minlength=count)
    touching = np.zeros(count, dtype=bool)
    fl = labels[g.frontier_mask]
    touching[fl[fl >= 0]] = True
    return ClusterPartition(state, labels, sizes, touching)


def frontier_cluster_count(g, config, state=OPEN):
    return clusters(g, config, state).frontier_count


@dataclass(frozen=True)
class ExplorationTrace:
    v0: int
    p1: float
    order: tuple
    C: frozenset
    boundary: frozenset
    steps: tuple = field(repr=False)


def explore_zero_cluster(g, sample, p1, v0, vertex_order=None):
    """Grow the closed cluster of ``v0`` one vertex at a time.

    At each step the first vertex (in ``vertex_order``) adjacent to the current
    cluster and not yet examined is looked at: closed vertices join the cluster,
    open ones join its boundary.
    """
    v0 = g.check_vertex(v0)
    check_p(p1)
    n = len(g)
    if vertex_order is None:
        rank = list(range(n))
    else:
        if sorted(vertex_order) != list(range(n)):
            raise PreconditionViolated("vertex_order must be a permutation of the vertex ids")
        rank = [0] * n
        for i, v in enumerate(vertex_order):
            rank[v] = i
    u = sample.u
    order = (tuple(range(n)) if vertex_order is None else tuple(vertex_order))
    if u[v0] <= p1:
        return ExplorationTrace(v0, p1, order, frozenset(), frozenset(), ())
    C, dC = {v0}, set()
    steps = [(0, v0, CLOSED)]
    heap = []
    queued = {v0}
    for w in g.rotation[v0]:
        queued.add(w)
        heapq.heappush(heap, (rank[w], w))
    i = 0
    while heap:
        _, w = heapq.heappop(heap)
        i += 1
        if u[w] <= p1:
            dC.add(w)
            steps.append((i, w, OPEN))
            continue
        C.add(w)
        steps.append((i, w, CLOSED))
        for x in g.rotation[w]:
            if x not in queued:
                queued.add(x)
                heapq.heappush(heap, (rank[x], x))
    return ExplorationTrace(v0, p1, order, frozenset(C), frozenset(dC), tuple(steps))


# two copies collapsed by OR

@dataclass(frozen=True, eq=False)
class ORProjection:
    graph: object
    quotient: object
    first: np.ndarray
    second: np.ndarray
    image: np.ndarray

    def project(self, config):
        """Quotient configuration: a vertex is open if either copy is open."""
        mask = config.open[self.first] | config.open[self.second]
        return Configuration(config.p, mask, None)

    def project_uniforms(self, sample):
        """Per-vertex ``min`` of the two copies, whose law at level ``p`` is ``2p - p^2``."""
        return np.minimum(sample.u[self.first], sample.u[self.second])


def or_projection(g):
    """Quotient of a doubled graph that identifies the two copies of each label."""
    pos = {}
    for v, lab in enumerate(g.labels):
        if lab.copy not in (1, 2):
            raise UnpairedVertex(f"vertex {v} has no copy label")
        key = (lab.depth, lab.index)
        pos.setdefault(key, [None, None])[lab.copy - 1] = v
    keys = sorted(pos)
    first = np.empty(len(keys), dtype=np.int64)
    second = np.empty(len(keys), dtype=np.int64)
    for x, key in enumerate(keys):
        a, b = pos[key]
        if a is None or b is None:
            raise UnpairedVertex(f"label {key} is present in one copy only")
        first[x], second[x] = a, b
    image = np.empty(len(g), dtype=np.int64)
    image[first] = np.arange(len(keys))
    image[second] = np.arange(len(keys))
    nbrs = [set() for _ in keys]
    us, vs = g.edges
    for a, b in zip(image[us].tolist(), image[vs].tolist()):
        if a != b:
            nbrs[a].add(b)
            nbrs[b].add(a)
    frontier = sorted({int(image[v]) for v in g.frontier})
    q = build_graph(len(keys), [sorted(s) for s in nbrs], [(None, d, i) for d, i in keys],
                    None, frontier, dict(g.meta, family="quotient"))
    return ORProjection(g, q, first, second, image)


def domination_violations(proj, config, targets=None, min_depth=0):
    """Vertices whose open connection in the doubled graph is lost in the quotient.

    For every vertex ``v`` of depth ``>= min_depth`` (either copy) that is joined by
    an open path to a lifted target, its image must be joined to a target under the
    OR-projected configuration.  Returns the list of violating vertices.
    """
    g, q = proj.graph, proj.quotient
    if targets is None:
        targets = sorted(q.frontier)
    targets = np.asarray(sorted(targets), dtype=np.int64)
    up = clusters(g, config, OPEN)
    down = clusters(q, proj.project(config), OPEN)
    lifted = np.concatenate([proj.first[targets], proj.second[targets]])
    hit_up = np.zeros(up.count, dtype=bool)
    ids = up.cluster_id[lifted]
    hit_up[ids[ids >= 0]] = True
    hit_down = np.zeros(down.count, dtype=bool)
    ids = down.cluster_id[targets]
    hit_down[ids[ids >= 0]] = True
    depth = np.array([lab.depth for lab in g.labels])
    bad = []
    for v in np.flatnonzero((up.cluster_id >= 0) & (depth >= min_depth)):
        if hit_up[up.cluster_id[v]]:
            c = down.cluster_id[proj.image[v]]
            if c < 0 or not hit_down[c]:
                bad.append(int(v))
    return bad


# two-point connectivity

@dataclass(frozen=True)
class ConnectivityEstimate:
    value: object
    stderr: float
    method: str
    trials: int = 0


def _open_reach(g, source, targets, region, is_open):
    """Whether an open path inside ``region`` joins ``source`` to ``targets``."""
    if not is_open(source):
        return False
    if source in targets:
        return True
    seen = {source}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in g.rotation[x]:
            if y in seen or (region is not None and y not in region):
                continue
            seen.add(y)
            if is_open(y):
                if y in targets:
                    return True
                queue.append(y)
    return False


def connected_set_weights(g, source, region, stop=None):
    """Enumerate open clusters of ``source`` inside ``region``.

    Yields ``(C, closed_boundary)`` pairs, one per connected ``C`` containing
    ``source``, where the boundary is every region neighbour of ``C``.  The event
    "the open cluster of ``source`` in the region is ``C``" has probability
    ``p^|C| (1-p)^|boundary|``.  When ``stop(C)`` is true the branch is cut short and
    its boundary holds only the vertices examined so far, so the pair then stands
    for the event "``C`` open and those vertices closed".
    """
    region = set(region)
    nbrs = {v: [w for w in g.rotation[v] if w in region] for v in region}

    def rec(C, cand, banned):
        if stop is not None and stop(C):
            yield C, banned
            return
        if not cand:
            yield C, banned
            return
        w = min(cand)
        rest = cand - {w}
        yield from rec(C, rest, banned | {w})
        grow = {x for x in nbrs[w] if x not in C and x not in banned}
        yield from rec(C | {w}, (rest | grow) - {w}, banned)

    start = frozenset([source])
    yield from rec(start, frozenset(nbrs[source]), frozenset())


def connectivity_probability(g, source, targets, p, region=None, trials=1000, seed=0,
                             exact=False):
    """Probability that an open path inside ``region`` joins ``source`` to ``targets``.

    All vertices on the path, ``source`` and the target included, must be open.  In
    exact mode ``p`` may be a :class:`~fractions.Fraction` and the result is exact.
    """
    source = g.check_vertex(source)
    targets = {g.check_vertex(t) for t in targets}
    check_p(p)
    if region is not None:
        region = {g.check_vertex(v) for v in region}
        if source not in region:
            raise PreconditionViolated(f"source {source} is not in the region")
    if exact:
        if region is None:
            region = set(range(len(g)))
        if len(region) > EXACT_LIMIT:
            raise RegionTooLargeForExact(f"|region| = {len(region)} > {EXACT_LIMIT}")
        one = Fraction(1) if isinstance(p, Fraction) else 1.0
        total = 0 * one
        for C, banned in connected_set_weights(g, source, region, stop=lambda C: bool(C & targets)):
            if C & targets:
                total += p ** len(C) * (one - p) ** len(banned)
        return ConnectivityEstimate(total, 0.0, "exact")
    hits = 0
    for t in range(trials):
        s = derive_seed(seed, t)
        if _open_reach(g, source, targets, region, lambda v, s=s: uniform(s, v) <= p):
            hits += 1
    phat = hits / trials
    return ConnectivityEstimate(phat, math.sqrt(phat * (1 - phat) / trials), "monte_carlo",
                                trials)


# threshold estimation on trees

class LazyTree:
    """Infinite ``B``-ary tree with breadth-first ids; children of ``i`` are ``B*i+1 .. B*i+B``."""

    def __init__(self, B):
        if B < 2:
            raise PreconditionViolated(f"B must be >= 2, got {B}")
        self.B = B

    def children(self, v):
        first = self.B * v + 1
        return range(first, first + self.B)

    def bottlenecks(self, seed, depth):
        """Smallest level ``p`` at which the root reaches each depth ``0..depth``.

        Best-first search on ``max U`` along the path: the first vertex popped at
        depth ``n`` carries the minimax value for that depth.
        """
        out = [math.inf] * (depth + 1)
        u0 = uniform(seed, 0)
        heap = [(u0, 0, 0)]
        found = 0
        B = self.B
        while heap:
            b, negd, v = heapq.heappop(heap)
            n = -negd
            if out[n] == math.inf:
                out[n] = b
                found += 1
                if found == depth + 1:
                    break
            if n == depth:
                continue
            first = B * v + 1
            for c in range(first, first + B):
                uc = uniform(seed, c)
                heapq.heappush(heap, (uc if uc > b else b, negd - 1, c))
        return out


def graph_bottleneck(g, source, targets, u):
    """Minimax of ``max U`` over paths from ``source`` to any target in an explicit graph."""
    targets = set(targets)
    best = {source: u[source]}
    heap = [(u[source], source)]
    while heap:
        b, v = heapq.heappop(heap)
        if v in targets:
            return b
        if b > best.get(v, math.inf):
            continue
        for w in g.rotation[v]:
            nb = max(b, u[w])
            if nb < best.get(w, math.inf):
                best[w] = nb
                heapq.heappush(heap, (nb, w))
    return math.inf


@dataclass(frozen=True)
class CrossingReport:
    depths: tuple
    p_grid: tuple
    trials: int
    seed: int
    survival: np.ndarray
    stderr: np.ndarray
    scaled: np.ndarray
    crossings: tuple
    estimate: float
    resolution: float

    def rows(self):
        for a, n in enumerate(self.depths):
            for b, p in enumerate(self.p_grid):
                yield {"depth": n, "p": p, "trials": self.trials,
                       "survival": float(self.survival[a, b]), "stderr": float(self.stderr[a, b])}


def crossing_point(p_grid, f, g):
    """Where ``f`` drops from above ``g`` to below it, linearly interpolated.

    The last such grid interval is used; stretches where both curves vanish are
    ignored, so sampling noise deep in the subcritical regime does not register.
    """
    diff = np.asarray(f, dtype=float) - np.asarray(g, dtype=float)
    for k in range(len(diff) - 2, -1, -1):
        a, b = diff[k], diff[k + 1]
        if a > 0 and b <= 0:
            return float(p_grid[k] + (p_grid[k + 1] - p_grid[k]) * a / (a - b))
    return math.nan


def _tree_chunk(args):
    B, depth, seed, lo, hi = args
    tree = LazyTree(B)
    return [tree.bottlenecks(derive_seed(seed, t), depth) for t in range(lo, hi)]


def _graph_chunk(args):
    family, depths, seed, lo, hi = args
    rows = []
    graphs = {n: family(n) for n in depths}
    for t in range(lo, hi):
        s = derive_seed(seed, t)
        row = []
        for n in depths:
            g = graphs[n]
            u = uniforms(s, np.arange(len(g)))
            row.append(graph_bottleneck(g, 0, g.frontier, u))
        rows.append(row)
    return rows


def _chunks(trials, threads):
    k = max(1, min(threads, trials))
    step = -(-trials // k)
    return [(lo, min(trials, lo + step)) for lo in range(0, trials, step)]


def run_chunks(fn, args, threads):
    if threads <= 1:
        return [r for a in args for r in fn(a)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return [r for part in pool.map(fn, args) for r in part]


def estimate_pc(family, depths, p_grid, trials, seed, threads=1):
    """Root-to-frontier survival curves and their crossing points.

    ``family`` is a :class:`LazyTree` or a callable ``depth -> EmbeddedGraph`` whose
    vertex 0 is the root.  All depths and all ``p`` share one coupled sample per
    trial, so every curve is exactly nondecreasing in ``p``.  Raw survival curves
    on trees decrease in depth at every ``p``; at criticality survival to depth
    ``n`` falls like ``1/n``, so the crossing is taken between the curves
    ``n * survival_n`` of adjacent depths.
    """
    depths = tuple(sorted(int(n) for n in depths))
    p_grid = tuple(float(p) for p in p_grid)
    if not p_grid or len(depths) < 2:
        raise EmptyGrid("need a nonempty p grid and at least two depths")
    if list(p_grid) != sorted(p_grid):
        raise EmptyGrid("p grid must be sorted")
    for p in p_grid:
        check_p(p)
    spans = _chunks(trials, threads)
    if isinstance(family, LazyTree):
        raw = run_chunks(_tree_chunk, [(family.B, depths[-1], seed, lo, hi) for lo, hi in spans],
                         threads)
        values = np.array([[r[n] for n in depths] for r in raw])
    else:
        raw = run_chunks(_graph_chunk, [(family, depths, seed, lo, hi) for lo, hi in spans],
                         threads)
        values = np.array(raw)
    grid = np.array(p_grid)
    survival = (values[:, :, None] <= grid[None, None, :]).mean(axis=0)
    stderr = np.sqrt(survival * (1 - survival) / trials)
    scaled = survival * np.array(depths)[:, None]
    crossings = tuple(crossing_point(grid, scaled[k], scaled[k + 1])
                      for k in range(len(depths) - 1))
    finite = [c for c in crossings if not math.isnan(c)]
    estimate = float(np.mean(finite)) if finite else math.nan
    resolution = float(np.min(np.diff(grid))) if len(grid) > 1 else math.nan
    return CrossingReport(depths, p_grid, trials, seed, survival, stderr, scaled, crossings,
                          estimate, resolution)

