"""M-adic strip-tree family: parameters, block arithmetic and implicit rotations.

Vertices are addressed by ``(copy, depth, index)`` with 1-based ``index``.  The
single-copy triangulated strip tree uses ``copy=None``; the doubled and glued graph
uses copies 1 and 2.  The functions here compute rotations of any vertex locally,
without building the truncation, which is what makes corridors and distance audits
at depth 8 to 10 affordable.  The explicit constructors in :mod:`generators` build
the same graphs the slow way and the test suite checks the two agree.
"""

from dataclasses import dataclass
from functools import lru_cache

from .errors import (BadParameters, DepthOutOfRange, DigitOutOfRange, GraphError,
                     SizeOverflow, WordLengthMismatch)
from .graph import build_graph

DEFAULT_CAP = 1 << 26


@dataclass(frozen=True)
class AdicParams:
    M: int
    d: int
    N: int
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.M < 2:
            raise BadParameters(f"M must be >= 2, got {self.M}")
        if self.d < 3:
            raise BadParameters(f"d must be >= 3, got {self.d}")
        if self.N < 1:
            raise DepthOutOfRange(f"depth N must be >= 1, got {self.N}")

    @property
    def B(self):
        return self.M ** self.d

    def s(self, n):
        """Block width at level ``n``."""
        return self.M ** ((self.d - 1) * n)

    def level_size(self, n):
        return self.B ** n

    def offset(self, n):
        """Id of ``(n, 1)`` in breadth-first numbering of one copy."""
        return (self.B ** n - 1) // (self.B - 1)

    @property
    def copy_size(self):
        return self.offset(self.N + 1)

    def check_size(self, count):
        if count > self.cap:
            raise SizeOverflow(f"{count} vertices exceeds the cap of {self.cap}")

    def with_depth(self, N):
        return AdicParams(self.M, self.d, N, self.cap)


def check_word(M, word):
    word = tuple(int(b) for b in word)
    for b in word:
        if not 0 <= b < M:
            raise DigitOutOfRange(f"digit {b} not in 0..{M - 1}")
    return word


def addr(word, M):
    """Base-``M`` value of a digit word, most significant digit first."""
    a = 0
    for b in check_word(M, word):
        a = a * M + b
    return a


def block_range(params, word):
    """Index range ``(first, last)`` of the block of ``word`` at level ``len(word)``."""
    n = len(word)
    s = params.s(n)
    a = addr(word, params.M)
    return a * s + 1, (a + 1) * s


def block_word(params, n, j):
    """Digit word of the block containing ``(n, j)``."""
    a = (j - 1) // params.s(n)
    digits = []
    for _ in range(n):
        a, r = divmod(a, params.M)
        digits.append(r)
    return tuple(reversed(digits))


def lr_boundary(params, word, n, side):
    """Left (``"L"``) or right (``"R"``) boundary vertex ``(n, index)`` of the corridor."""
    word = check_word(params.M, word)
    if not 0 <= n <= len(word):
        raise DepthOutOfRange(f"n={n} outside 0..{len(word)}")
    A = addr(word[:n], params.M)
    s = params.s(n)
    if side == "L":
        return n, A * s + 1
    if side == "R":
        return n, (A + 1) * s
    raise BadParameters(f"side must be 'L' or 'R', got {side!r}")


def glue_kind(params, n, j):
    """``"l"`` or ``"r"`` when ``(n, j)`` is a glued vertex, else ``None``."""
    if n < 1:
        return None
    s = params.s(n)
    blocks = params.M ** n
    if (j - 1) % s == 0 and (j - 1) // s + 1 <= blocks - 1:
        return "l"
    if j % s == 0 and j // s <= blocks - 1:
        return "r"
    return None


# single copy, triangulated (Step 3 output)

def _joined(params, n, j):
    """Whether the horizontal edge ``(n, j)``--``(n, j + 1)`` exists."""
    return n >= 1 and j < params.level_size(n) and j % params.s(n) != 0


def _down_diagonal(params, n, i):
    # quad (n,i),(n,i+1),(n+1,Bi+1),(n+1,Bi) gets the diagonal from its upper-left corner
    return n + 1 < params.N and _joined(params, n, i) and _joined(params, n + 1, params.B * i)


def tilde_rotation(params, n, j):
    """Counterclockwise neighbours of ``(n, j)`` in the triangulated strip tree."""
    B, N = params.B, params.N
    if not (0 <= n <= N and 1 <= j <= params.level_size(n)):
        raise GraphError(f"no vertex ({n}, {j}) at depth {N}")
    rot = []
    if n > 0:
        rot.append((n - 1, (j - 1) // B + 1))
        if (j - 1) % B == 0 and j > 1 and _down_diagonal(params, n - 1, (j - 1) // B):
            rot.append((n - 1, (j - 1) // B))
        if j > 1 and _joined(params, n, j - 1):
            rot.append((n, j - 1))
    if n < N:
        rot.extend((n + 1, c) for c in range((j - 1) * B + 1, j * B + 1))
        if _down_diagonal(params, n, j):
            rot.append((n + 1, B * j + 1))
    if _joined(params, n, j):
        rot.append((n, j + 1))
    return rot


# doubled and glued (Step 4 output)

def g0_rotation(params, c, n, j):
    rot = [(1, m, k) for m, k in tilde_rotation(params, n, j)]
    kind = glue_kind(params, n, j)
    if kind == "l":
        rot.insert(1, (2, n, j))
    elif kind == "r":
        rot.append((2, n, j))
    if c == 1:
        return rot
    return [(1 if x[0] == 2 else 2, x[1], x[2]) for x in reversed(rot)]


def _apex_key(params, lab):
    c, n, j = lab
    height = params.N + 1 - n
    return (-height if c == 1 else height, j)


class ImplicitGraph:
    """Lazy rotations of the fully triangulated doubled graph (Step 5 output).

    Each finite non-triangular face of the glued graph is fanned from its uppermost,
    then leftmost, vertex.  Faces meeting the deepest level are left alone.
    """

    def __init__(self, params, face_cap=None):
        self.params = params
        self.face_cap = face_cap or 8 * params.N + 16
        self._g0 = lru_cache(maxsize=None)(self._g0_raw)
        self._rot = {}

    def _g0_raw(self, lab):
        return g0_rotation(self.params, *lab)

    def _face(self, v, w):
        """Vertices of the glued-graph face containing the dart ``v -> w``."""
        cyc = [v]
        a, b = v, w
        N = self.params.N
        while True:
            if b[1] == N:
                return None
            r = self._g0(b)
            c = r[r.index(a) - 1]
            if b == v and c == w:
                return cyc
            cyc.append(b)
            if len(cyc) > self.face_cap:
                raise GraphError(f"face through {v} longer than {self.face_cap}")
            a, b = b, c

    def _diagonal_here(self, v, cyc, k):
        """Whether the apex ``cyc[k]`` placed its diagonal to ``v`` in this face.

        An apex meeting the same far vertex in several faces (the top root, for
        ``M >= 3``) keeps only the first diagonal, so the far end has to look it up.
        """
        if k in (1, len(cyc) - 1):
            return False
        rot = self.rotation(cyc[k])
        if v not in rot:
            return False
        m = len(rot)
        lo = rot.index(cyc[(k + 1) % len(cyc)])
        return 0 < (rot.index(v) - lo) % m < (rot.index(cyc[k - 1]) - lo) % m

    def rotation(self, lab):
        got = self._rot.get(lab)
        if got is not None:
            return got
        base = self._g0(lab)
        if lab[1] == self.params.N:
            self._rot[lab] = base
            return base
        adjacent = set(base)
        out = []
        for w in base:
            out.append(w)
            cyc = self._face(lab, w)
            if cyc is None or len(cyc) == 3:
                continue
            if len(set(cyc)) != len(cyc):
                raise GraphError(f"non-simple finite face through {lab}")
            k = min(range(len(cyc)), key=lambda i: _apex_key(self.params, cyc[i]))
            if k == 0:
                for x in cyc[2:-1]:
                    if x not in adjacent:
                        adjacent.add(x)
                        out.append(x)
            elif cyc[k] not in adjacent and self._diagonal_here(lab, cyc, k):
                out.append(cyc[k])
        self._rot[lab] = out
        return out


class ImplicitTilde:
    """Same interface as :class:`ImplicitGraph` for the single-copy strip tree."""

    def __init__(self, params):
        self.params = params
        self._rot = {}

    def rotation(self, lab):
        got = self._rot.get(lab)
        if got is None:
            got = [(None, m, k) for m, k in tilde_rotation(self.params, lab[1], lab[2])]
            self._rot[lab] = got
        return got


def corridor_labels(params, word, doubled):
    word = check_word(params.M, word)
    if len(word) != params.N:
        raise WordLengthMismatch(f"word length {len(word)} != depth {params.N}")
    copies = (1, 2) if doubled else (None,)
    labels = []
    for c in copies:
        labels.append((c, 0, 1))
        for n in range(1, params.N + 1):
            lo, hi = block_range(params, word[:n])
            labels.extend((c, n, j) for j in range(lo, hi + 1))
    return labels


def implicit_corridor(params, word, doubled=False):
    """Induced corridor subgraph built from lazy rotations.

    Single copy: the triangulated strip tree.  Doubled: the fully triangulated
    glued graph, both copies.
    """
    labels = corridor_labels(params, word, doubled)
    params.check_size(len(labels))
    oracle = ImplicitGraph(params) if doubled else ImplicitTilde(params)
    ids = {lab: i for i, lab in enumerate(labels)}
    rot = [[ids[u] for u in oracle.rotation(lab) if u in ids] for lab in labels]
    frontier = [i for i, lab in enumerate(labels) if lab[1] == params.N]
    meta = {"family": "corridor", "M": params.M, "d": params.d, "N": params.N,
            "word": tuple(word), "doubled": doubled}
    return build_graph(len(labels), rot, labels, None, frontier, meta)
