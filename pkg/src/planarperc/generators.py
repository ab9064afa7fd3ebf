"""Explicit constructors for the graph families.

Everything here builds a full :class:`EmbeddedGraph`.  The strip tree gets its
rotations from the angular order of straight-line edges; triangulation and gluing
then edit rotations combinatorially, face corner by face corner.
"""

import math

from .adic import DEFAULT_CAP, AdicParams, block_range, check_word, glue_kind
from .errors import (BadParameters, GraphError, LabelMismatch, MissingCoordinates,
                     SizeOverflow, WordLengthMismatch)
from .graph import build_graph, faces, graph_from_adjacency, induced_subgraph, signed_area


def _check_cap(count, cap):
    if count > cap:
        raise SizeOverflow(f"{count} vertices exceeds the cap of {cap}")


def bary_tree(B, depth, cap=DEFAULT_CAP):
    """Rooted ``B``-ary tree truncated at ``depth``, deepest level marked frontier.

    Vertex ``(n, j)`` sits at ``(j * B**(depth - n), -n)`` so each parent is drawn
    above its last child and sibling blocks stay left to right.
    """
    if B < 2 or depth < 0:
        raise BadParameters(f"need B >= 2 and depth >= 0, got B={B}, depth={depth}")
    total = (B ** (depth + 1) - 1) // (B - 1)
    _check_cap(total, cap)
    adj = [[] for _ in range(total)]
    labels, coords = [], []
    v = 0
    for n in range(depth + 1):
        for j in range(1, B ** n + 1):
            labels.append((None, n, j))
            coords.append((j * B ** (depth - n), -n))
            if n > 0:
                parent = (v - 1) // B
                adj[v].append(parent)
                adj[parent].append(v)
            v += 1
    frontier = range(total - B ** depth, total)
    meta = {"family": "tree", "B": B, "depth": depth}
    return graph_from_adjacency(total, adj, labels, coords, frontier, meta)


def strip_graph(params):
    """Tree edges plus horizontal edges inside every block of every level."""
    p = params
    total = p.copy_size
    _check_cap(total, p.cap)
    tree = bary_tree(p.B, p.N, p.cap)
    adj = [list(r) for r in tree.rotation]
    for n in range(1, p.N + 1):
        base = p.offset(n)
        s = p.s(n)
        for j in range(1, p.level_size(n)):
            if j % s:
                u, w = base + j - 1, base + j
                adj[u].append(w)
                adj[w].append(u)
    meta = {"family": "strip", "M": p.M, "d": p.d, "N": p.N}
    return graph_from_adjacency(total, adj, tree.labels, tree.coords, tree.frontier, meta)


def _apex_position(g, cyc):
    return min(range(len(cyc)), key=lambda i: (-g.coords[cyc[i]][1], g.coords[cyc[i]][0]))


def fan_triangulate(g):
    """Fan every finite face of length >= 4 from its uppermost-then-leftmost vertex.

    Diagonals are placed into the face corners they cross, so the result is again a
    valid rotation system.  A diagonal that already exists as an edge is skipped.
    """
    if g.coords is None or any(c is None for c in g.coords):
        raise MissingCoordinates("fan triangulation needs coordinates on every vertex")
    rot = [list(r) for r in g.rotation]
    adj = [set(r) for r in g.rotation]
    for face in faces(g):
        if not face.finite or len(face) < 4:
            continue
        cyc = list(face.vertices)
        if len(set(cyc)) != len(cyc):
            raise GraphError(f"non-simple finite face through {cyc[0]}")
        k = _apex_position(g, cyc)
        cyc = cyc[k:] + cyc[:k]
        L = len(cyc)
        c0 = cyc[0]
        at = rot[c0].index(cyc[1]) + 1
        for i in range(2, L - 1):
            ci = cyc[i]
            if ci in adj[c0]:
                continue
            rot[c0].insert(at, ci)
            at += 1
            rot[ci].insert(rot[ci].index(cyc[i + 1]) + 1, c0)
            adj[c0].add(ci)
            adj[ci].add(c0)
    return build_graph(len(g), rot, g.labels, g.coords, g.frontier, g.meta)


def double_and_glue(g_tilde, params):
    """Two copies of ``g_tilde`` joined at the left and right block walls.

    Copy 1 is lifted to ``y + N + 1`` and copy 2 is its mirror image, so the two
    roots are the top and bottom of the drawing.  Every glue edge enters its
    endpoint through the unique corner that faces the outer face.
    """
    p = params
    n = len(g_tilde)
    if any(lab.depth is None or lab.index is None for lab in g_tilde.labels):
        raise LabelMismatch("double_and_glue needs (depth, index) labels on every vertex")
    if g_tilde.coords is None:
        raise MissingCoordinates("double_and_glue needs coordinates")
    _check_cap(2 * n, p.cap)
    outer = [f for f in faces(g_tilde) if signed_area(g_tilde, f.vertices) < 0]
    if len(outer) != 1:
        raise GraphError(f"expected one outer face, found {len(outer)}")
    outer_darts = {}
    for a, b in outer[0].edges:
        outer_darts.setdefault(a, []).append(b)

    rot1 = [list(r) for r in g_tilde.rotation]
    glued = 0
    for v, lab in enumerate(g_tilde.labels):
        if glue_kind(p, lab.depth, lab.index) is None:
            continue
        darts = outer_darts.get(v, [])
        if len(darts) != 1:
            raise GraphError(f"glued vertex {v} has {len(darts)} outer corners")
        r = rot1[v]
        r.insert(r.index(darts[0]) + 1, v + n)
        glued += 1

    def other(x):
        return x + n if x < n else x - n

    rotation = rot1 + [[other(x) for x in reversed(r)] for r in rot1]
    labels = [(1, lab.depth, lab.index) for lab in g_tilde.labels]
    labels += [(2, lab.depth, lab.index) for lab in g_tilde.labels]
    coords = [(x, y + p.N + 1) for x, y in g_tilde.coords]
    coords += [(x, -y) for x, y in coords]
    frontier = list(g_tilde.frontier) + [v + n for v in g_tilde.frontier]
    meta = dict(g_tilde.meta, family="glued", glue_edges=glued)
    return build_graph(2 * n, rotation, labels, coords, frontier, meta)


def counterexample_graph(params):
    """Fan-triangulated gluing of two fan-triangulated strip trees."""
    params.check_size(2 * params.copy_size)
    g = double_and_glue(fan_triangulate(strip_graph(params)), params)
    out = fan_triangulate(g)
    return build_graph(len(out), out.rotation, out.labels, out.coords, out.frontier,
                       dict(out.meta, family="counterexample"))


def corridor_subgraph(g, word, doubled=False):
    """Induced corridor of an explicit strip-family graph.

    Keeps the roots and, at each level ``n``, the block of the prefix of length ``n``.
    """
    M = g.meta.get("M")
    if M is None:
        raise LabelMismatch("graph carries no M-adic parameters")
    params = AdicParams(M, g.meta["d"], g.meta["N"])
    word = check_word(M, word)
    if len(word) != params.N:
        raise WordLengthMismatch(f"word length {len(word)} != depth {params.N}")
    ranges = [(1, 1)] + [block_range(params, word[:n]) for n in range(1, params.N + 1)]
    copies = {1, 2} if doubled else {None, 1}
    keep = [v for v, lab in enumerate(g.labels)
            if lab.copy in copies and ranges[lab.depth][0] <= lab.index <= ranges[lab.depth][1]]
    front = [v for v in keep if g.labels[v].depth == params.N]
    sub, _ = induced_subgraph(g, keep, front)
    return sub


# reference graphs

def triangular_lattice(side, cap=DEFAULT_CAP):
    """Rhombic patch ``0 <= i, j <= side`` of the triangular lattice.

    The boundary is the frontier; ``meta["sides"]`` lists the four sides so that
    left-right crossings can be tested.
    """
    if side < 1:
        raise BadParameters(f"side must be >= 1, got {side}")
    m = side + 1
    _check_cap(m * m, cap)

    def vid(i, j):
        return j * m + i

    adj = [[] for _ in range(m * m)]
    coords = []
    for j in range(m):
        for i in range(m):
            coords.append((i + j / 2, j * math.sqrt(3) / 2))
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)):
                a, b = i + di, j + dj
                if 0 <= a < m and 0 <= b < m:
                    adj[vid(i, j)].append(vid(a, b))
    sides = {
        "left": tuple(vid(0, j) for j in range(m)),
        "right": tuple(vid(side, j) for j in range(m)),
        "bottom": tuple(vid(i, 0) for i in range(m)),
        "top": tuple(vid(i, side) for i in range(m)),
    }
    frontier = set().union(*sides.values())
    meta = {"family": "triangular", "side": side, "sides": sides}
    return graph_from_adjacency(m * m, adj, None, coords, frontier, meta)


def cone_tree(depth, cap=DEFAULT_CAP):
    """Tree with root degree 7 and all other degrees 8, plus an apex joined to all of it.

    The apex is the last vertex.  Its degree grows with depth, so the family is not
    locally finite in the limit; ``meta`` records this.
    """
    if depth < 1:
        raise BadParameters(f"depth must be >= 1, got {depth}")
    k = 7
    tree_size = (k ** (depth + 1) - 1) // (k - 1)
    _check_cap(tree_size + 1, cap)
    apex = tree_size
    rot = [[] for _ in range(tree_size + 1)]
    labels = []
    v = 0
    for n in range(depth + 1):
        for j in range(1, k ** n + 1):
            labels.append((None, n, j))
            v += 1
    for v in range(1, tree_size):
        parent = (v - 1) // k
        rot[v].append(parent)
    for v in range(tree_size):
        first = k * v + 1
        if first < tree_size:
            rot[v].extend(range(first, first + k))
    # walk the single face of the tree and put the apex into the first corner of each vertex
    order = []
    seen = set()
    a, b = 0, rot[0][0]
    start = (a, b)
    while True:
        r = rot[b]
        c = r[r.index(a) - 1]
        if b not in seen:
            seen.add(b)
            order.append((b, c))
        a, b = b, c
        if (a, b) == start:
            break
    for u, w in order:
        rot[u].insert(rot[u].index(w) + 1, apex)
    rot[apex] = [u for u, _ in order]
    labels.append(None)
    frontier = range(tree_size - k ** depth, tree_size)
    meta = {"family": "cone", "depth": depth, "apex": apex, "locally_finite_limit": False}
    return build_graph(tree_size + 1, rot, labels, None, frontier, meta)


def reference_graph(family, size, cap=DEFAULT_CAP):
    if family == "triangular_lattice":
        return triangular_lattice(size, cap)
    if family == "cone_tree":
        return cone_tree(size, cap)
    raise BadParameters(f"unknown reference family {family!r}")
