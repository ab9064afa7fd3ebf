"""Finite truncations of embedded planar graphs.

A graph is stored as a rotation system: for every vertex the counterclockwise cyclic
list of its neighbours.  Vertices are dense integers ``0..n-1``; optional per-vertex
labels ``(copy, depth, index)`` and planar coordinates are carried along.  Frontier
vertices mark where the infinite graph was cut off.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (AsymmetricRotation, DuplicateNeighbor, GraphError, SelfLoop,
                     UnknownVertex)


class VertexLabel(NamedTuple):
    copy: Optional[int] = None
    depth: Optional[int] = None
    index: Optional[int] = None


NO_LABEL = VertexLabel()


@dataclass(frozen=True, eq=False)
class EmbeddedGraph:
    rotation: tuple
    labels: tuple
    coords: Optional[tuple] = None
    frontier: frozenset = field(default_factory=frozenset)
    meta: dict = field(default_factory=dict)

    @property
    def vertex_count(self):
        return len(self.rotation)

    def __len__(self):
        return len(self.rotation)

    def neighbors(self, v):
        return self.rotation[v]

    def degree(self, v):
        return len(self.rotation[v])

    def is_frontier(self, v):
        return v in self.frontier

    def check_vertex(self, v):
        if not (isinstance(v, (int, np.integer)) and 0 <= v < len(self.rotation)):
            raise UnknownVertex(v)
        return int(v)

    @cached_property
    def edge_count(self):
        return sum(len(r) for r in self.rotation) // 2

    @cached_property
    def edges(self):
        """Undirected edges as two int arrays with ``u < v``."""
        us, vs = [], []
        for u, rot in enumerate(self.rotation):
            for v in rot:
                if u < v:
                    us.append(u)
                    vs.append(v)
        return np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)

    @cached_property
    def frontier_mask(self):
        mask = np.zeros(len(self.rotation), dtype=bool)
        if self.frontier:
            mask[list(self.frontier)] = True
        return mask

    @cached_property
    def label_index(self):
        """Map from label to vertex id (labelled vertices only)."""
        return {lab: v for v, lab in enumerate(self.labels) if lab != NO_LABEL}

    def vertex(self, copy=None, depth=None, index=None):
        try:
            return self.label_index[VertexLabel(copy, depth, index)]
        except KeyError:
            raise UnknownVertex((copy, depth, index)) from None

    @cached_property
    def max_depth(self):
        depths = [lab.depth for lab in self.labels if lab.depth is not None]
        return max(depths) if depths else None

    def component_labels(self, mask):
        """Connected-component ids of the subgraph induced by boolean ``mask``.

        Vertices outside the mask get ``-1``.  Returns ``(labels, count)``.
        """
        n = len(self.rotation)
        us, vs = self.edges
        keep = mask[us] & mask[vs]
        adj = coo_matrix((np.ones(int(keep.sum()), dtype=np.int8), (us[keep], vs[keep])),
                         shape=(n, n)).tocsr()
        _, raw = connected_components(adj, directed=False)
        labels = np.full(n, -1, dtype=np.int64)
        inside = np.flatnonzero(mask)
        if inside.size == 0:
            return labels, 0
        _, dense = np.unique(raw[inside], return_inverse=True)
        labels[inside] = dense
        return labels, int(dense.max()) + 1


def build_graph(vertices, rotations, labels=None, coords=None, frontier=(), meta=None):
    """Validate and freeze a rotation system.

    ``vertices`` is a vertex count or an iterable of ids that must be exactly
    ``0..n-1``.  ``rotations`` maps (or indexes) each id to its counterclockwise
    neighbour list.
    """
    if isinstance(vertices, (int, np.integer)):
        n = int(vertices)
    else:
        ids = sorted(vertices)
        n = len(ids)
        if ids != list(range(n)):
            bad = next(v for i, v in enumerate(ids) if v != i)
            raise UnknownVertex(bad)
    if isinstance(rotations, dict):
        for v in rotations:
            if not (isinstance(v, (int, np.integer)) and 0 <= v < n):
                raise UnknownVertex(v)
        rot = [tuple(int(u) for u in rotations.get(v, ())) for v in range(n)]
    else:
        rot = [tuple(int(u) for u in r) for r in rotations]
        if len(rot) != n:
            raise GraphError(f"expected {n} rotation lists, got {len(rot)}")
    nbr_sets = []
    for v, r in enumerate(rot):
        s = set()
        for u in r:
            if not 0 <= u < n:
                raise UnknownVertex(u)
            if u == v:
                raise SelfLoop(v)
            if u in s:
                raise DuplicateNeighbor(v, u)
            s.add(u)
        nbr_sets.append(s)
    for v, s in enumerate(nbr_sets):
        for u in s:
            if v not in nbr_sets[u]:
                raise AsymmetricRotation(v, u)

    if labels is None:
        labs = (NO_LABEL,) * n
    else:
        if isinstance(labels, dict):
            labels = [labels.get(v) for v in range(n)]
        labs = tuple(NO_LABEL if lab is None else VertexLabel(*lab) for lab in labels)
        if len(labs) != n:
            raise GraphError(f"expected {n} labels, got {len(labs)}")
        seen = {}
        for v, lab in enumerate(labs):
            if lab == NO_LABEL:
                continue
            if lab.copy not in (None, 1, 2):
                raise GraphError(f"vertex {v}: copy must be 1, 2 or none")
            if lab in seen:
                raise GraphError(f"vertices {seen[lab]} and {v} share label {tuple(lab)}")
            seen[lab] = v

    pts = None
    if coords is not None:
        if isinstance(coords, dict):
            coords = [coords.get(v) for v in range(n)]
        pts = tuple(None if c is None else (float(c[0]), float(c[1])) for c in coords)
        if len(pts) != n:
            raise GraphError(f"expected {n} coordinates, got {len(pts)}")
        where = {}
        for v, c in enumerate(pts):
            if c is None:
                continue
            if c in where:
                raise GraphError(f"vertices {where[c]} and {v} share the point {c}")
            where[c] = v

    front = frozenset(int(v) for v in frontier)
    for v in front:
        if not 0 <= v < n:
            raise UnknownVertex(v)
    return EmbeddedGraph(tuple(rot), labs, pts, front, dict(meta or {}))


def graph_from_adjacency(n, adjacency, labels=None, coords=None, frontier=(), meta=None):
    """Build a graph whose rotations are the angular order of straight-line edges."""
    rot = [sort_ccw(coords[v], adjacency[v], coords) for v in range(n)]
    return build_graph(n, rot, labels, coords, frontier, meta)


def sort_ccw(center, nbrs, coords):
    cx, cy = center
    return sorted(nbrs, key=lambda u: np.arctan2(coords[u][1] - cy, coords[u][0] - cx))


@dataclass(frozen=True)
class FaceCycle:
    edges: tuple
    finite: bool

    @property
    def vertices(self):
        return tuple(u for u, _ in self.edges)

    def __len__(self):
        return len(self.edges)


def next_dart(g, u, v):
    """Face successor of the directed edge ``u -> v`` (face on the left)."""
    rot = g.rotation[v]
    i = rot.index(u)
    return v, rot[i - 1]


def faces(g):
    """All faces of the rotation system as closed walks of directed edges.

    The successor of ``u -> v`` is ``v -> w`` with ``w`` the neighbour preceding
    ``u`` in the counterclockwise rotation at ``v``; bounded faces of a straight-line
    drawing are therefore walked counterclockwise.  A face is flagged non-finite
    when its walk touches a frontier vertex.
    """
    pos = [{u: i for i, u in enumerate(r)} for r in g.rotation]
    seen = set()
    out = []
    front = g.frontier
    for a, rot in enumerate(g.rotation):
        for b in rot:
            if (a, b) in seen:
                continue
            walk = []
            u, v = a, b
            while (u, v) not in seen:
                seen.add((u, v))
                walk.append((u, v))
                r = g.rotation[v]
                u, v = v, r[pos[v][u] - 1]
            finite = not any(x in front for x, _ in walk)
            out.append(FaceCycle(tuple(walk), finite))
    return out


def signed_area(g, cycle):
    pts = [g.coords[v] for v in cycle]
    s = 0.0
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        s += x1 * y2 - x2 * y1
    return 0.5 * s


@dataclass(frozen=True)
class EndApproximation:
    removed: frozenset
    components: list
    infinite_proxies: list


def components_after_removal(g, K):
    K = frozenset(g.check_vertex(v) for v in K)
    mask = np.ones(len(g), dtype=bool)
    if K:
        mask[list(K)] = False
    labels, count = g.component_labels(mask)
    comps = [[] for _ in range(count)]
    for v in np.flatnonzero(mask):
        comps[labels[v]].append(int(v))
    # order components by smallest vertex for reproducibility
    comps.sort(key=lambda c: c[0])
    components = [frozenset(c) for c in comps]
    proxies = [i for i, c in enumerate(components) if c & g.frontier]
    return EndApproximation(K, components, proxies)


def bfs_distance(g, u, v):
    """Hop distance, or ``None`` when ``v`` is unreachable from ``u``."""
    u, v = g.check_vertex(u), g.check_vertex(v)
    if u == v:
        return 0
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in g.rotation[x]:
            if y not in dist:
                if y == v:
                    return dist[x] + 1
                dist[y] = dist[x] + 1
                queue.append(y)
    return None


def bfs_distances(g, source, within=None):
    """All hop distances from ``source``, optionally restricted to a vertex set."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in g.rotation[x]:
            if y not in dist and (within is None or y in within):
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def interior(g, S):
    """Vertices of ``S`` whose whole neighbourhood lies in ``S``.

    Frontier vertices are never interior: their true neighbourhood was cut away.
    """
    S = {g.check_vertex(v) for v in S}
    return {v for v in S
            if v not in g.frontier and all(u in S for u in g.rotation[v])}


def is_connected_subset(g, S):
    S = set(S)
    if not S:
        return False
    start = next(iter(S))
    return len(bfs_distances(g, start, S)) == len(S)


def induced_subgraph(g, keep, frontier=None):
    """Induced subgraph on ``keep`` (ids renumbered in increasing order).

    Rotations are restricted, which preserves planarity.  Returns the new graph and
    the old-to-new id map.
    """
    keep = sorted(set(keep))
    new_id = {v: i for i, v in enumerate(keep)}
    rot = [[new_id[u] for u in g.rotation[v] if u in new_id] for v in keep]
    labels = [g.labels[v] for v in keep]
    coords = None if g.coords is None else [g.coords[v] for v in keep]
    if frontier is None:
        frontier = [v for v in keep if v in g.frontier]
    front = [new_id[v] for v in frontier]
    return build_graph(len(keep), rot, labels, coords, front, g.meta), new_id
