"""Command-line entry point: ``planarperc <subcommand> [options]``."""

import argparse
import json
import sys

from . import __version__
from .adic import AdicParams, implicit_corridor
from .boundary import ArmSpec, arm_event_occurs, f_boundary, separation_count
from .engine import clusters, configuration_at, sample_uniforms
from .errors import ConfigParse, EventAbsent, PercolationError
from .experiments import _parse_floats, parse_config, run_experiment
from .generators import (bary_tree, cone_tree, counterexample_graph, fan_triangulate,
                         strip_graph, triangular_lattice)
from .graphio import emit, read_graph
from .phi import phi_value
from .rng import derive_seed

EXPERIMENTS = ("sweep", "crossing", "distances", "decay", "audit-structure", "cone-law")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigParse(message)


def _ints(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _floats(text):
    try:
        return _parse_floats(text)
    except (ValueError, ConfigParse):
        raise argparse.ArgumentTypeError(f"expected floats or start:stop:step, got {text!r}")


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "jsonl"))
    p.add_argument("--threads", type=int)
    p.add_argument("--config", help="key=value file; command-line flags override it")
    return p


def build_parser():
    common = _common()
    top = _Parser(prog="planarperc", description="Site percolation on embedded planar graphs.")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="write a generated graph")
    g.add_argument("family", choices=("tree", "strip", "tilde", "counterexample", "corridor",
                                      "triangular", "cone"))
    g.add_argument("--M", type=int, default=2)
    g.add_argument("--d", type=int, default=3)
    g.add_argument("--N", type=int, default=2)
    g.add_argument("--B", type=int, default=8)
    g.add_argument("--size", type=int, default=4)
    g.add_argument("--word", type=_ints, default=None)
    g.add_argument("--doubled", action="store_true")

    s = sub.add_parser("sample", parents=[common], help="cluster statistics of sampled configurations")
    s.add_argument("graph")
    s.add_argument("--p", type=_floats, default=(0.5,))

    ph = sub.add_parser("phi", parents=[common], help="evaluate the cutset functional")
    ph.add_argument("graph")
    ph.add_argument("--p", type=float, required=True)
    ph.add_argument("--v", type=int, required=True)
    ph.add_argument("--S", type=_ints, required=True)
    ph.add_argument("--mode", choices=("exact", "monte_carlo"), default="exact")

    a = sub.add_parser("arms", parents=[common], help="boundary of S and alternating-arm events")
    a.add_argument("graph")
    a.add_argument("--S", type=_ints, required=True)
    a.add_argument("--F", type=_ints, default=None, help="target frontier vertices (default: all)")
    a.add_argument("--k", type=int, default=1)
    a.add_argument("--p", type=float, default=0.5)

    for name in EXPERIMENTS:
        e = sub.add_parser(name, parents=[common], help=f"{name} experiment")
        e.add_argument("--family")
        for key in ("M", "d", "N", "B", "side", "depth", "maxdepth", "margin"):
            e.add_argument(f"--{key}", type=int)
        e.add_argument("--q", type=float)
        e.add_argument("--p-grid", dest="p_grid", type=_floats)
        e.add_argument("--depths", type=_ints)
        e.add_argument("--word", type=_ints)
    return top


def _config_text(args):
    if not args.config:
        return ""
    try:
        with open(args.config, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigParse(f"cannot read config: {exc}") from None


def _write(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _gen(args):
    if args.family == "tree":
        return bary_tree(args.B, args.N)
    if args.family == "triangular":
        return triangular_lattice(args.size)
    if args.family == "cone":
        return cone_tree(args.size)
    params = AdicParams(args.M, args.d, args.N)
    if args.family == "strip":
        return strip_graph(params)
    if args.family == "tilde":
        return fan_triangulate(strip_graph(params))
    if args.family == "counterexample":
        return counterexample_graph(params)
    word = args.word if args.word is not None else (0,) * args.N
    return implicit_corridor(params, word, args.doubled)


def _records(args, rows, head=None):
    fmt = args.format or "csv"
    if fmt == "jsonl":
        lines = [json.dumps({"header": dict(head or {}, version=__version__)})]
        lines += [json.dumps(r) for r in rows]
        return "\n".join(lines) + "\n"
    lines = [f"# version={__version__}"] + [f"# {k}={v}" for k, v in (head or {}).items()]
    if rows:
        cols = list(rows[0])
        lines.append(",".join(cols))
        lines += [",".join(str(r[c]) for c in cols) for r in rows]
    return "\n".join(lines) + "\n"


def _sample(args):
    g = read_graph(args.graph)
    seed = args.seed or 0
    rows = []
    for t in range(args.trials or 1):
        sample = sample_uniforms(g, derive_seed(seed, t))
        for p in args.p:
            cfg = configuration_at(sample, p)
            part = clusters(g, cfg)
            rows.append({"trial": t, "p": p, "open": int(cfg.open.sum()), "clusters": part.count,
                         "frontier_clusters": part.frontier_count,
                         "largest": int(max(part.sizes, default=0))})
    return _records(args, rows, {"seed": seed, "graph": args.graph})


def _phi(args):
    g = read_graph(args.graph)
    est = phi_value(g, args.p, args.v, args.S, args.mode, args.trials or 10000, args.seed or 0)
    row = {"p": args.p, "v": args.v, "value": float(est.value), "exact": str(est.value),
           "method": est.method, "stderr": est.stderr, "digest": est.digest}
    return _records(args, [row], {"seed": args.seed or 0})


def _arms(args):
    g = read_graph(args.graph)
    F = args.F if args.F is not None else sorted(g.frontier)
    fb = f_boundary(g, args.S, F)
    spec = ArmSpec.equal_split(fb, args.k)
    seed = args.seed or 0
    rows = []
    for t in range(args.trials or 100):
        cfg = configuration_at(sample_uniforms(g, derive_seed(seed, t)), args.p)
        occurs = arm_event_occurs(g, cfg, args.S, spec).occurs
        try:
            count = separation_count(g, cfg, args.S, spec)
        except EventAbsent:
            count = 0
        rows.append({"trial": t, "p": args.p, "occurs": int(occurs), "separated": count})
    head = {"seed": seed, "boundary": " ".join(map(str, fb.pruned)),
            "prune_steps": len(fb.prune_log), "arcs": len(spec.arcs)}
    return _records(args, rows, head)


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.command == "gen":
            _write(emit(_gen(args)), args.out)
        elif args.command == "sample":
            _write(_sample(args), args.out)
        elif args.command == "phi":
            _write(_phi(args), args.out)
        elif args.command == "arms":
            _write(_arms(args), args.out)
        else:
            keys = ("family", "M", "d", "N", "B", "side", "depth", "maxdepth", "margin", "q",
                    "p_grid", "depths", "word", "seed", "trials", "out", "format", "threads")
            over = {k: getattr(args, k) for k in keys}
            config = parse_config(_config_text(args), kind=args.command, **over)
            text = run_experiment(config)
            if not config.out:
                sys.stdout.write(text)
        return 0
    except PercolationError as exc:
        print(f"planarperc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
