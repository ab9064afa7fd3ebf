"""Batch experiments: sweeps, distance audits, decay fits and structural audits."""

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import beta

from . import __version__
from .adic import AdicParams, ImplicitTilde, check_word, implicit_corridor, lr_boundary
from .engine import (LazyTree, check_p, clusters, configuration_at,
                     estimate_pc, run_chunks, sample_uniforms, _chunks)
from .errors import AllCensored, BadParameters, ConfigParse
from .generators import (cone_tree, counterexample_graph, double_and_glue, fan_triangulate,
                         strip_graph, triangular_lattice)
from .graph import bfs_distance, faces
from .phi import le85_bound
from .rng import derive_seed, uniform

KINDS = ("sweep", "crossing", "distances", "decay", "audit-structure", "cone-law")


# distance audit

@dataclass(frozen=True)
class DistanceAudit:
    M: int
    d: int
    maxdepth: int
    margin: int
    pairs: int
    per_case: dict
    violations: tuple
    min_slack: float
    stable: bool
    rows: tuple = field(repr=False)


def _capped_ball(oracle, source, maxdepth, cap):
    """Hop distances below ``cap`` from ``source`` to vertices of depth ``<= maxdepth``.

    A vertex at depth ``m > maxdepth`` is at least ``m - maxdepth`` steps away from
    every such vertex, which bounds how far the search needs to go down.
    """
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        r = dist[x] + 1
        for y in oracle.rotation(x):
            if y in dist:
                continue
            if r + max(0, y[1] - maxdepth) >= cap:
                continue
            dist[y] = r
            queue.append(y)
    return {lab: r for lab, r in dist.items() if lab[1] <= maxdepth}


def _audit_distances(params, maxdepth):
    oracle = ImplicitTilde(params)
    M = params.M
    words = {t: list(itertools.product(range(M), repeat=t)) for t in range(maxdepth + 1)}

    def vertex(w, side):
        n, j = lr_boundary(params, w, len(w), side)
        return (None, n, j)

    table = {}
    for side in ("L", "R"):
        for t1 in range(maxdepth + 1):
            cap = (t1 + maxdepth) // 2 + 1
            for w1 in words[t1]:
                ball = _capped_ball(oracle, vertex(w1, side), maxdepth, cap)
                table[(side, w1)] = (ball, cap)
    return table, words


def verify_distance_bounds(M, d, maxdepth, margin):
    """Check ``dist(v1, v2) >= (t1 + t2) / 2`` for every boundary pair of the three cases.

    Case 1 pairs a left boundary vertex at level ``t1`` with a right one at ``t2``;
    cases 2 and 3 pair two left (right) boundary vertices whose words differ in
    their first ``min(t1, t2)`` digits.  Rows and violations of case 1 are split
    by the same test (``split=1`` when the words differ there): a right wall and
    the left wall of the next block are close, so the split case-1 pairs are
    where the inequality can fail.  Distances are taken in the triangulated
    strip tree truncated at ``maxdepth + margin`` and capped just above the largest
    bound a source can need.  The audit is repeated with the margin raised by two.
    """
    if maxdepth < 1:
        raise BadParameters(f"maxdepth must be >= 1, got {maxdepth}")
    params = AdicParams(M, d, maxdepth + margin)
    deeper = AdicParams(M, d, maxdepth + margin + 2)
    table, words = _audit_distances(params, maxdepth)
    table2, _ = _audit_distances(deeper, maxdepth)
    stable = all(table[k][0] == table2[k][0] for k in table)

    def vertex(w, side):
        n, j = lr_boundary(params, w, len(w), side)
        return (None, n, j)

    per_case = {1: 0, 2: 0, 3: 0}
    violations = []
    rows = []
    min_slack = math.inf
    cases = ((1, "L", "R", False), (2, "L", "L", True), (3, "R", "R", True))
    for case, s1, s2, need_split in cases:
        for t1, t2 in itertools.product(range(maxdepth + 1), repeat=2):
            t = min(t1, t2)
            bound = (t1 + t2) / 2
            for split in (False, True):
                if need_split and not split:
                    continue
                count, worst, bad = 0, math.inf, 0
                for w1 in words[t1]:
                    ball, cap = table[(s1, w1)]
                    for w2 in words[t2]:
                        if (w1[:t] != w2[:t]) != split:
                            continue
                        dist = ball.get(vertex(w2, s2), cap)
                        count += 1
                        worst = min(worst, dist - bound)
                        if dist < bound:
                            bad += 1
                            violations.append((case, t1, w1, t2, w2, dist))
                if count:
                    per_case[case] += count
                    min_slack = min(min_slack, worst)
                    rows.append({"case": case, "split": int(split), "t1": t1, "t2": t2,
                                 "pairs": count, "bound": bound, "min_slack": worst,
                                 "violations": bad})
    return DistanceAudit(M, d, maxdepth, margin, sum(per_case.values()), per_case,
                         tuple(violations), min_slack, stable, tuple(rows))


# decay fits

@dataclass(frozen=True)
class DecayFit:
    points: tuple
    slope: float
    intercept: float
    r2: float
    censored: int


def fit_points(distances, neglogs, censored=0):
    """Least-squares line through ``(distance, -log p)`` points."""
    x = np.asarray(distances, dtype=float)
    y = np.asarray(neglogs, dtype=float)
    if len(x) == 0:
        raise AllCensored("no uncensored points to fit")
    if len(set(x.tolist())) < 2:
        raise BadParameters("need at least two distinct distances to fit a slope")
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    slope = float(np.sum((x - xm) * (y - ym))) / sxx
    intercept = float(ym - slope * xm)
    ss_tot = float(np.sum((y - ym) ** 2))
    ss_res = float(np.sum((y - (intercept + slope * x)) ** 2))
    r2 = 1.0 if ss_tot == 0 else min(1.0, max(0.0, 1 - ss_res / ss_tot))
    return DecayFit(tuple(zip(x.tolist(), y.tolist())), slope, intercept, r2, censored)


def pair_connectivity(g, q, pairs, trials, seed):
    """Monte Carlo two-point connectivity for each pair; one cluster per source and trial."""
    by_source = {}
    for k, (u, v) in enumerate(pairs):
        by_source.setdefault(u, []).append((k, v))
    hits = np.zeros(len(pairs))
    for u, items in by_source.items():
        targets = {v for _, v in items}
        for t in range(trials):
            s = derive_seed(seed, t)
            if uniform(s, u) > q:
                continue
            seen, queue = {u}, deque([u])
            reached = {u} & targets
            while queue:
                x = queue.popleft()
                for y in g.rotation[x]:
                    if y not in seen:
                        seen.add(y)
                        if uniform(s, y) <= q:
                            queue.append(y)
                            if y in targets:
                                reached.add(y)
            for k, v in items:
                if v in reached:
                    hits[k] += 1
    return hits / trials


def fit_decay(g, q, pairs, trials, seed):
    """Fit ``-log P(u <-> v)`` against ``dist(u, v)``; zero estimates are censored."""
    if not 0 < q <= 1:
        raise BadParameters(f"q must lie in (0, 1], got {q}")
    pairs = [(g.check_vertex(u), g.check_vertex(v)) for u, v in pairs]
    phat = pair_connectivity(g, q, pairs, trials, seed)
    xs, ys = [], []
    censored = 0
    for (u, v), ph in zip(pairs, phat):
        dist = bfs_distance(g, u, v)
        if dist is None:
            raise BadParameters(f"pair ({u}, {v}) is not connected")
        if ph == 0:
            censored += 1
            continue
        xs.append(dist)
        ys.append(-math.log(ph))
    if not xs:
        raise AllCensored("every connectivity estimate is zero")
    return fit_points(xs, ys, censored)


def boundary_pairs(g, params, word):
    """Case-1 pairs ``(left boundary at t1, right boundary at t2)`` of a corridor."""
    word = check_word(params.M, word)
    index = g.label_index
    copy = g.labels[0].copy
    out = []
    for t1 in range(params.N + 1):
        for t2 in range(params.N + 1):
            a = index[(copy, *lr_boundary(params, word, t1, "L"))]
            b = index[(copy, *lr_boundary(params, word, t2, "R"))]
            if a != b:
                out.append((a, b))
    return out


@dataclass(frozen=True)
class BlockProbe:
    M: int
    d: int
    eps: float
    n: int
    p1: float
    trials: int
    words: tuple
    hits: tuple
    upper: tuple
    bound: float

    @property
    def estimate(self):
        return max(self.hits) / self.trials

    @property
    def worst_upper(self):
        return max(self.upper)

    @property
    def consistent(self):
        return self.worst_upper <= self.bound


def clopper_pearson_upper(hits, trials, level=0.95):
    """One-sided upper confidence limit for a binomial proportion."""
    if hits >= trials:
        return 1.0
    return float(beta.ppf(level, hits + 1, trials - hits))


def block_connection_probe(M, d, eps, n, words, trials, seed, level=0.95):
    """MC probability that the copy-1 root reaches depth ``n`` inside a doubled corridor.

    The target is the union of both copies of the depth-``n`` block of each word;
    hits are compared against ``le85_bound`` through a one-sided upper limit.
    """
    params = AdicParams(M, d, n)
    p1 = M ** -d * (1 + 2 * eps)
    hits = []
    for k, word in enumerate(words):
        g = implicit_corridor(params, word, doubled=True)
        root = g.label_index[(1, 0, 1)]
        deep = {v for v, lab in enumerate(g.labels) if lab.depth == n}
        count = 0
        for t in range(trials):
            s = derive_seed(seed, k, t)
            if uniform(s, root) > p1:
                continue
            seen, queue = {root}, deque([root])
            while queue:
                x = queue.popleft()
                if x in deep:
                    count += 1
                    break
                for y in g.rotation[x]:
                    if y not in seen:
                        seen.add(y)
                        if uniform(s, y) <= p1:
                            queue.append(y)
        hits.append(count)
    upper = tuple(clopper_pearson_upper(h, trials, level) for h in hits)
    return BlockProbe(M, d, eps, n, p1, trials, tuple(map(tuple, words)), tuple(hits), upper,
                      le85_bound(M, eps, n).value)


# structural audit

@dataclass(frozen=True)
class StructureReport:
    N: int
    vertices: int
    edges: int
    faces: int
    euler: int
    nontriangular: int
    max_up: int
    min_interior_degree: int
    automorphism: bool
    asymmetric_after_fan: int

    @property
    def ok(self):
        return (self.nontriangular == 0 and self.max_up <= 2 and self.min_interior_degree >= 8
                and self.automorphism and self.euler == 2)


def _canonical(cycle):
    if not cycle:
        return ()
    k = cycle.index(min(cycle))
    return tuple(cycle[k:] + cycle[:k])


def swap_defects(g):
    """Vertices whose rotation is not the mirrored rotation of their copy partner.

    Assumes copy 2 is numbered like copy 1, shifted by half the vertex count.
    """
    half = len(g) // 2

    def swap(x):
        return x + half if x < half else x - half

    bad = []
    for v in range(len(g)):
        mirrored = _canonical([swap(w) for w in reversed(g.rotation[v])])
        if g.labels[swap(v)][1:] != g.labels[v][1:] or mirrored != _canonical(list(g.rotation[swap(v)])):
            bad.append(v)
    return bad


def audit_structure(params):
    """Face, parent-count, degree and symmetry checks of the counterexample graph.

    The copy swap is checked on the glued graph before the final fan.  The fan
    apex of a face spanning both copies always lies in copy 1, so the final graph
    is not swap-symmetric; the number of vertices it breaks is reported.
    """
    glued = double_and_glue(fan_triangulate(strip_graph(params)), params)
    g = counterexample_graph(params)
    F = faces(g)
    nontri = sum(1 for f in F if f.finite and len(f) != 3)
    depth = [lab.depth for lab in g.labels]
    max_up = 0
    min_deg = math.inf
    for v, rot in enumerate(g.rotation):
        n = depth[v]
        if n >= 1:
            up = sum(1 for w in rot if depth[w] == n - 1)
            max_up = max(max_up, up)
        if v not in g.frontier:
            min_deg = min(min_deg, len(rot))
    return StructureReport(params.N, len(g), g.edge_count, len(F), len(g) - g.edge_count + len(F),
                           nontri, max_up, int(min_deg), not swap_defects(glued),
                           len(swap_defects(g)))


# reference-graph experiments

def lr_crossing(g, config):
    sides = g.meta["sides"]
    labels = clusters(g, config).cluster_id
    left = {int(c) for c in labels[list(sides["left"])] if c >= 0}
    return any(int(c) in left for c in labels[list(sides["right"])] if c >= 0)


def _crossing_chunk(args):
    side, p_grid, seed, lo, hi = args
    g = triangular_lattice(side)
    out = []
    for t in range(lo, hi):
        sample = sample_uniforms(g, derive_seed(seed, t))
        out.append([lr_crossing(g, configuration_at(sample, p)) for p in p_grid])
    return out


def crossing_frequency(side, p_grid, trials, seed, threads=1):
    """Left-right open crossing frequency of a lattice rhombus, one coupled sample per trial."""
    for p in p_grid:
        check_p(p)
    args = [(side, tuple(p_grid), seed, lo, hi) for lo, hi in _chunks(trials, threads)]
    hits = np.array(run_chunks(_crossing_chunk, args, threads), dtype=float)
    freq = hits.mean(axis=0)
    return freq, np.sqrt(freq * (1 - freq) / trials)


@dataclass(frozen=True)
class ConeLaw:
    p: float
    trials: int
    apex_open: int
    unique_when_open: int

    @property
    def fraction(self):
        return self.apex_open / self.trials

    @property
    def stderr(self):
        f = self.fraction
        return math.sqrt(f * (1 - f) / self.trials)


def cone_law(depth, p, trials, seed):
    """Apex-open frequency and the open frontier-cluster count when the apex is open."""
    g = cone_tree(depth)
    apex = g.meta["apex"]
    opened = unique = 0
    for t in range(trials):
        sample = sample_uniforms(g, derive_seed(seed, t))
        if sample.value(apex) > p:
            continue
        opened += 1
        cfg = configuration_at(sample, p)
        if clusters(g, cfg).frontier_count == 1:
            unique += 1
    return ConeLaw(p, trials, opened, unique)


# configs and the driver

@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    family: str = "tree"
    M: int = 2
    d: int = 3
    N: int = 4
    B: int = 8
    side: int = 32
    depth: int = 3
    p_grid: tuple = (0.5,)
    depths: tuple = (8, 10, 12)
    trials: int = 1000
    seed: int = 0
    q: float = 0.15
    maxdepth: int = 6
    margin: int = 4
    word: tuple = ()
    out: str = None
    format: str = "csv"
    threads: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigParse(f"unknown experiment kind {self.kind!r}")
        if self.format not in ("csv", "jsonl"):
            raise ConfigParse(f"unknown format {self.format!r}")
        if not self.p_grid or not self.depths:
            raise ConfigParse("p_grid and depths must be nonempty")
        if self.trials < 1 or self.threads < 1:
            raise ConfigParse("trials and threads must be positive")


def _parse_floats(text):
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigParse(f"range must be start:stop:step, got {text!r}")
        a, b, s = map(float, parts)
        if s <= 0:
            raise ConfigParse("range step must be positive")
        count = int(math.floor((b - a) / s + 1e-9)) + 1
        return tuple(round(a + i * s, 12) for i in range(count))
    return tuple(float(x) for x in text.split(",") if x.strip())


def _parse_ints(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


_FIELDS = {
    "kind": str, "family": str, "M": int, "d": int, "N": int, "B": int, "side": int,
    "depth": int, "p_grid": _parse_floats, "depths": _parse_ints, "trials": int, "seed": int,
    "q": float, "maxdepth": int, "margin": int, "word": _parse_ints, "out": str,
    "format": str, "threads": int,
}


def parse_config(text, **overrides):
    """``key=value`` lines with ``#`` comments; keyword overrides win."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not sep or key not in _FIELDS:
            raise ConfigParse(f"line {lineno}: bad entry {raw!r}")
        try:
            values[key] = _FIELDS[key](val)
        except ValueError as exc:
            raise ConfigParse(f"line {lineno}: {exc}") from None
    values.update({k: v for k, v in overrides.items() if v is not None})
    if "kind" not in values:
        raise ConfigParse("config has no kind")
    try:
        return ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigParse(str(exc)) from None


def _rows(config):
    """Header fields and data rows for one experiment."""
    c = config
    if c.kind == "sweep":
        if c.family == "tree":
            rep = estimate_pc(LazyTree(c.B), c.depths, c.p_grid, c.trials, c.seed, c.threads)
            head = {"crossings": ";".join(f"{x:.6f}" for x in rep.crossings),
                    "estimate": f"{rep.estimate:.6f}"}
            return head, list(rep.rows())
        if c.family == "triangular":
            rows = []
            for side in c.depths:
                freq, err = crossing_frequency(side, c.p_grid, c.trials, c.seed, c.threads)
                rows += [{"depth": side, "p": p, "trials": c.trials, "survival": float(f),
                          "stderr": float(e)} for p, f, e in zip(c.p_grid, freq, err)]
            return {}, rows
        raise ConfigParse(f"sweep supports family tree or triangular, got {c.family!r}")
    if c.kind == "crossing":
        freq, err = crossing_frequency(c.side, c.p_grid, c.trials, c.seed, c.threads)
        return {}, [{"side": c.side, "p": p, "trials": c.trials, "crossing": float(f),
                     "stderr": float(e)} for p, f, e in zip(c.p_grid, freq, err)]
    if c.kind == "distances":
        audit = verify_distance_bounds(c.M, c.d, c.maxdepth, c.margin)
        head = {"pairs": audit.pairs, "violations": len(audit.violations),
                "min_slack": audit.min_slack, "stable": int(audit.stable)}
        return head, list(audit.rows)
    if c.kind == "decay":
        params = AdicParams(c.M, c.d, c.N)
        word = c.word or (0,) * c.N
        g = implicit_corridor(params, word)
        pairs = boundary_pairs(g, params, word)
        phat = pair_connectivity(g, c.q, pairs, c.trials, c.seed)
        rows = []
        for (u, v), ph in zip(pairs, phat):
            rows.append({"u": u, "v": v, "distance": bfs_distance(g, u, v), "q": c.q,
                         "phat": float(ph), "stderr": math.sqrt(ph * (1 - ph) / c.trials)})
        kept = [r for r in rows if r["phat"] > 0]
        head = {"censored": len(rows) - len(kept)}
        if kept:
            fit = fit_points([r["distance"] for r in kept], [-math.log(r["phat"]) for r in kept],
                             len(rows) - len(kept))
            head.update(slope=fit.slope, intercept=fit.intercept, r2=fit.r2)
        return head, rows
    if c.kind == "audit-structure":
        rows = []
        for N in c.depths:
            rep = audit_structure(AdicParams(c.M, c.d, N))
            rows.append({"N": N, "vertices": rep.vertices, "edges": rep.edges, "faces": rep.faces,
                         "euler": rep.euler, "nontriangular": rep.nontriangular,
                         "max_up": rep.max_up, "min_interior_degree": rep.min_interior_degree,
                         "automorphism": int(rep.automorphism),
                         "asymmetric_after_fan": rep.asymmetric_after_fan, "ok": int(rep.ok)})
        return {}, rows
    if c.kind == "cone-law":
        rows = []
        for k, p in enumerate(c.p_grid):
            law = cone_law(c.depth, p, c.trials, derive_seed(c.seed, k))
            rows.append({"p": p, "trials": c.trials, "apex_open": law.fraction,
                         "stderr": law.stderr, "apex_open_samples": law.apex_open,
                         "unique_frontier_cluster": law.unique_when_open})
        return {}, rows
    raise ConfigParse(f"unknown experiment kind {c.kind!r}")


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


def render(config, head, rows):
    meta = {"version": __version__, "kind": config.kind, "seed": config.seed}
    params = {k: v for k, v in vars(config).items() if k not in ("kind", "seed", "out", "format", "threads")}
    meta.update(params)
    meta.update(head)
    if config.format == "jsonl":
        lines = [json.dumps({"header": {k: (list(v) if isinstance(v, tuple) else v)
                                        for k, v in meta.items()}}, sort_keys=True)]
        lines += [json.dumps(r, sort_keys=False) for r in rows]
        return "\n".join(lines) + "\n"
    lines = [f"# {k}={','.join(map(str, v)) if isinstance(v, tuple) else v}"
             for k, v in meta.items()]
    if rows:
        cols = list(rows[0])
        lines.append(",".join(cols))
        lines += [",".join(_fmt(r[c]) for c in cols) for r in rows]
    return "\n".join(lines) + "\n"


def run_experiment(config):
    """Run one experiment; writes to ``config.out`` when set and returns the text."""
    head, rows = _rows(config)
    text = render(config, head, rows)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def with_overrides(config, **kw):
    return replace(config, **{k: v for k, v in kw.items() if v is not None})
