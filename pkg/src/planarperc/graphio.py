"""Line-oriented text format for embedded graphs.

::

    pg 1
    v 0 copy=1 depth=0 index=1 x=0 y=0
    r 0 1 2 3
    f 3

Vertex lines carry optional ``copy``, ``depth``, ``index`` and the coordinate pair
``x``/``y``.  Rotation lines list neighbours counterclockwise; ``f`` marks a frontier
vertex.  Blank lines and ``#`` comments are ignored.
"""

from .errors import GraphFormatError
from .graph import NO_LABEL, build_graph

_INT_KEYS = ("copy", "depth", "index")


def _fmt_float(x):
    return repr(float(x))


def emit(g):
    """Canonical text for ``g``."""
    lines = ["pg 1"]
    for v in range(len(g)):
        parts = ["v", str(v)]
        lab = g.labels[v]
        for key in _INT_KEYS:
            val = getattr(lab, key)
            if val is not None:
                parts.append(f"{key}={val}")
        if g.coords is not None and g.coords[v] is not None:
            x, y = g.coords[v]
            parts.append(f"x={_fmt_float(x)}")
            parts.append(f"y={_fmt_float(y)}")
        lines.append(" ".join(parts))
    for v, rot in enumerate(g.rotation):
        lines.append(" ".join(["r", str(v), *map(str, rot)]))
    for v in sorted(g.frontier):
        lines.append(f"f {v}")
    return "\n".join(lines) + "\n"


def parse(text):
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0].split() != ["pg", "1"]:
        raise GraphFormatError("missing 'pg 1' header")
    labels, coords, rots, frontier = {}, {}, {}, []
    for lineno, ln in enumerate(lines[1:], start=2):
        tok = ln.split()
        kind = tok[0]
        try:
            if kind == "v":
                v = int(tok[1])
                if v in labels:
                    raise GraphFormatError(f"line {lineno}: vertex {v} declared twice")
                fields = {}
                for kv in tok[2:]:
                    key, sep, val = kv.partition("=")
                    if not sep or key not in (*_INT_KEYS, "x", "y") or key in fields:
                        raise GraphFormatError(f"line {lineno}: bad key {kv!r}")
                    fields[key] = float(val) if key in ("x", "y") else int(val)
                if ("x" in fields) != ("y" in fields):
                    raise GraphFormatError(f"line {lineno}: x and y must come together")
                labels[v] = tuple(fields.get(k) for k in _INT_KEYS)
                if "x" in fields:
                    coords[v] = (fields["x"], fields["y"])
            elif kind == "r":
                v = int(tok[1])
                if v in rots:
                    raise GraphFormatError(f"line {lineno}: rotation of {v} given twice")
                rots[v] = [int(t) for t in tok[2:]]
            elif kind == "f":
                if len(tok) != 2:
                    raise GraphFormatError(f"line {lineno}: expected 'f <id>'")
                frontier.append(int(tok[1]))
            else:
                raise GraphFormatError(f"line {lineno}: unknown record {kind!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(f"line {lineno}: {exc}") from None
    n = len(labels)
    if coords and len(coords) != n:
        raise GraphFormatError("coordinates must be given for all vertices or none")
    labs = [None if labels[v] == tuple(NO_LABEL) else labels[v] for v in sorted(labels)]
    pts = [coords[v] for v in sorted(labels)] if coords else None
    return build_graph(sorted(labels), rots, labs, pts, frontier)


def read_graph(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write_graph(g, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit(g))
