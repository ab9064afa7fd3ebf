"""Boundary of a finite set as seen from one end direction, and arm events across it.

The outside of a finite connected set ``S`` splits into faces of the drawing of
``S``.  The face ``Q`` holding the target frontier vertices is walked clockwise
around one of its interior points, and each boundary vertex contributes the
neighbours it sees inside ``Q`` (its wedge neighbours).  Repeated neighbours are
pruned by cutting ``Q`` along the two edges that reach them, until every entry of
the cyclic list is distinct.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .engine import CLOSED, OPEN
from .errors import (DisconnectedS, EventAbsent, FrontierNotInOneComponent, GraphError,
                     PreconditionViolated, SeparationViolation, SpecMismatch)
from .graph import is_connected_subset


@dataclass(frozen=True)
class FBoundary:
    S: frozenset
    F_direction: frozenset
    walk: tuple
    wedges: tuple
    unfiltered: tuple
    pruned: tuple
    prune_log: tuple
    initial: tuple
    region: frozenset = field(repr=False)
    S_Q: frozenset = field(repr=False)

    def __len__(self):
        return len(self.pruned)


class _Scaffold:
    """``S`` plus the vertices and edges added by pruning, as a rotation subsystem."""

    def __init__(self, g, S):
        self.g = g
        self.S = frozenset(S)
        self.vertices = set(S)
        self.nbrs = {v: {w for w in g.rotation[v] if w in self.S} for v in S}

    def add(self, u, *ends):
        self.vertices.add(u)
        self.nbrs.setdefault(u, set())
        for v in ends:
            self.nbrs[v].add(u)
            self.nbrs[u].add(v)

    def rot(self, v):
        return [w for w in self.g.rotation[v] if w in self.nbrs[v]]

    def face_walk(self, h, w):
        """Vertices of the face containing dart ``h -> w``, face on the left."""
        walk = []
        a, b = h, w
        while True:
            walk.append(a)
            r = self.rot(b)
            c = r[r.index(a) - 1]
            a, b = b, c
            if (a, b) == (h, w):
                return walk

    def corner_dart(self, h, k):
        """Dart of ``h`` starting the scaffold corner in which the edge ``h -- k`` leaves."""
        rot = self.g.rotation[h]
        i = rot.index(k)
        for step in range(1, len(rot) + 1):
            w = rot[i - step]
            if w in self.nbrs[h]:
                return h, w
        return None


def _components_outside(g, blocked):
    mask = np.ones(len(g), dtype=bool)
    mask[list(blocked)] = False
    labels, _ = g.component_labels(mask)
    return labels


def _face_region(g, scaffold, F):
    """Face of the scaffold holding ``F``: its walk and the vertices inside it."""
    labels = _components_outside(g, scaffold.vertices)
    outside = [f for f in F if f not in scaffold.vertices]
    if not outside:
        raise FrontierNotInOneComponent("every target vertex lies on the set itself")
    comps = {int(labels[f]) for f in outside}
    if len(comps) != 1:
        raise FrontierNotInOneComponent("target vertices lie in several components of the complement")
    target = comps.pop()

    def attach(c):
        for v in np.flatnonzero(labels == c):
            for h in g.rotation[v]:
                if h in scaffold.vertices:
                    return h, int(v)
        return None

    h, k = attach(target)
    dart = scaffold.corner_dart(h, k)
    if dart is None:
        return [h], set(np.flatnonzero(labels >= 0).tolist())
    walk = scaffold.face_walk(*dart)
    darts = set(zip(walk, walk[1:] + walk[:1]))
    region = set()
    for c in set(labels[labels >= 0].tolist()):
        hk = attach(c)
        if hk is None:
            continue
        if scaffold.corner_dart(*hk) in darts:
            region.update(np.flatnonzero(labels == c).tolist())
    return walk, region


def _good_interior(g, region):
    """Vertices of the region's interior from which the frontier is reachable inside it."""
    inner = {x for x in region
             if x not in g.frontier and all(y in region for y in g.rotation[x])}
    seeds = [x for x in inner if any(y in g.frontier for y in g.rotation[x])]
    good = set(seeds)
    queue = deque(seeds)
    while queue:
        x = queue.popleft()
        for y in g.rotation[x]:
            if y in inner and y not in good:
                good.add(y)
                queue.append(y)
    return good


def _wedge_lists(g, scaffold, walk, region, S_Q):
    """Clockwise listing of the face and the wedge neighbours of its vertices of ``S``."""
    if len(walk) == 1:
        v = walk[0]
        raw = [w for w in g.rotation[v] if w in region]
        return [v], [(v, tuple(w for w in raw if w in S_Q))], [(v, tuple(raw))]
    cw = walk[::-1]
    start = cw.index(min(cw))
    cw = cw[start:] + cw[:start]
    n = len(cw)
    wedges, raw_lists = [], []
    for j, v in enumerate(cw):
        prev, nxt = cw[j - 1], cw[(j + 1) % n]
        if v not in scaffold.S:
            continue
        rot = g.rotation[v]
        i, stop = rot.index(prev), rot.index(nxt)
        raw = []
        while True:
            i = (i + 1) % len(rot)
            if i == stop:
                break
            if rot[i] in region:
                raw.append(rot[i])
        wedges.append((v, tuple(w for w in raw if w in S_Q)))
        raw_lists.append((v, tuple(raw)))
    return cw, wedges, raw_lists


def _concatenate(wedges):
    """Joined wedge lists with equal terms at list joints removed.

    Returns entries paired with the index of the wedge list they came from.
    """
    seq = []
    for k, (_, lst) in enumerate(wedges):
        for w in lst:
            if seq and seq[-1][0] == w:
                continue
            seq.append((w, k))
    if len(seq) > 1 and seq[0][0] == seq[-1][0]:
        seq.pop()
    return seq


def f_boundary(g, S, F_direction):
    """Pruned cyclic boundary of ``S`` toward the frontier vertices ``F_direction``."""
    S = frozenset(g.check_vertex(v) for v in S)
    F = frozenset(g.check_vertex(v) for v in F_direction)
    if not is_connected_subset(g, S):
        raise DisconnectedS("S must be nonempty and induce a connected subgraph")
    if not F or not F <= g.frontier:
        raise PreconditionViolated("F_direction must be a nonempty set of frontier vertices")
    if F & S:
        raise FrontierNotInOneComponent("F_direction meets S")
    scaffold = _Scaffold(g, S)
    adjacent_to_S = {w for v in S for w in g.rotation[v]} - S
    log = []
    previous = None
    initial = None
    while True:
        walk, region = _face_region(g, scaffold, F)
        good = _good_interior(g, region)
        S_Q = frozenset(u for u in adjacent_to_S & region
                        if any(x in good for x in g.rotation[u]))
        cw, wedges, raw = _wedge_lists(g, scaffold, walk, region, S_Q)
        seq = _concatenate(wedges)
        if previous is not None:
            if len(seq) >= previous[0]:
                raise GraphError("pruning did not shorten the wedge sequence")
            u, vx, vy, before = previous[1]
            log.append((u, vx, vy, before - len(region)))
        values = [w for w, _ in seq]
        if initial is None:
            initial = tuple(values)
        if len(set(values)) == len(values):
            return FBoundary(S, F, tuple(cw), tuple(wedges), tuple(raw), tuple(values),
                             tuple(log), initial, frozenset(region), S_Q)
        counts = {}
        for w in values:
            counts[w] = counts.get(w, 0) + 1
        a = next(i for i, w in enumerate(values) if counts[w] > 1)
        u = values[a]
        b = next(i for i in range(a + 1, len(values)) if values[i] == u)
        vx, vy = wedges[seq[a][1]][0], wedges[seq[b][1]][0]
        scaffold.add(u, vx, vy)
        previous = (len(seq), (u, vx, vy, len(region)))


# alternating arms

@dataclass(frozen=True)
class ArmSpec:
    boundary: FBoundary
    indices: tuple

    def __post_init__(self):
        h = len(self.boundary.pruned)
        idx = tuple(int(i) for i in self.indices)
        if len(idx) < 2 or len(idx) % 2:
            raise PreconditionViolated("an arm spec needs an even, positive number of indices")
        if list(idx) != sorted(set(idx)) or idx[0] < 0 or idx[-1] >= h:
            raise PreconditionViolated(f"indices must increase strictly inside 0..{h - 1}")
        object.__setattr__(self, "indices", idx)

    @property
    def k(self):
        return len(self.indices) // 2

    @property
    def arcs(self):
        """``Arc_j`` runs from just after ``i_{j-1}`` through ``i_j``, cyclically."""
        u = self.boundary.pruned
        h = len(u)
        out = []
        for j, end in enumerate(self.indices):
            start = self.indices[j - 1] + 1
            length = (end - start) % h + 1
            out.append(tuple(u[(start + t) % h] for t in range(length)))
        return tuple(out)

    @classmethod
    def equal_split(cls, boundary, k):
        h = len(boundary.pruned)
        if k < 1 or 2 * k > h:
            raise PreconditionViolated(f"cannot cut {h} boundary entries into {2 * k} arcs")
        return cls(boundary, tuple((j + 1) * h // (2 * k) - 1 for j in range(2 * k)))


@dataclass(frozen=True)
class ArmResult:
    occurs: bool
    open_paths: tuple
    closed_paths: tuple


def _path(g, allowed, start, goals):
    prev = {start: None}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if x in goals:
            path = []
            while x is not None:
                path.append(x)
                x = prev[x]
            return tuple(reversed(path))
        for y in g.rotation[x]:
            if y in allowed and y not in prev:
                prev[y] = x
                queue.append(y)
    return None


def _check_spec(spec, S):
    if frozenset(S) != spec.boundary.S:
        raise SpecMismatch("the arm spec was built for a different set")


def _arm_clusters(g, config, S):
    """Open and closed cluster labels on the complement of ``S``."""
    out = {}
    for state in (OPEN, CLOSED):
        mask = config.open.copy() if state == OPEN else ~config.open
        mask[list(S)] = False
        labels, _ = g.component_labels(mask)
        out[state] = labels
    return out


def arm_event_occurs(g, config, S, spec, F_direction=None):
    """Every arc reaches the target vertices both by an open and by a closed path off ``S``."""
    _check_spec(spec, S)
    F = spec.boundary.F_direction if F_direction is None else frozenset(F_direction)
    if F != spec.boundary.F_direction:
        raise SpecMismatch("the arm spec was built for a different target set")
    labs = _arm_clusters(g, config, S)
    paths = {OPEN: [], CLOSED: []}
    for state in (OPEN, CLOSED):
        labels = labs[state]
        reach = {int(labels[f]) for f in F if labels[f] >= 0}
        for arc in spec.arcs:
            start = next((a for a in arc if labels[a] >= 0 and int(labels[a]) in reach), None)
            if start is None:
                return ArmResult(False, tuple(paths[OPEN]), tuple(paths[CLOSED]))
            c = labels[start]
            members = set(np.flatnonzero(labels == c).tolist())
            paths[state].append(_path(g, members, start, F))
    return ArmResult(True, tuple(paths[OPEN]), tuple(paths[CLOSED]))


def separation_count(g, config, R, spec):
    """Open clusters off ``R`` that meet an odd arc and reach the frontier.

    Raises :class:`SeparationViolation` when fewer than ``k`` are found while the
    arm event holds.
    """
    res = arm_event_occurs(g, config, R, spec)
    if not res.occurs:
        raise EventAbsent("the alternating-arm event does not occur")
    labels = _arm_clusters(g, config, R)[OPEN]
    frontier_ids = {int(labels[f]) for f in g.frontier if labels[f] >= 0}
    found = set()
    for j, arc in enumerate(spec.arcs):
        if j % 2:
            continue
        for a in arc:
            c = int(labels[a])
            if c >= 0 and c in frontier_ids:
                found.add(c)
    if len(found) < spec.k:
        raise SeparationViolation(f"{len(found)} separated open clusters, expected >= {spec.k}")
    return len(found)
