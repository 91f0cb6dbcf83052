"""Command-line front end.

Exit codes: 0 success, 1 no strategy within the schedule (or a failed
``--check``), 2 usage, input or internal errors.
"""
import argparse
import logging
import os
import sys

from . import bench
from .encoding import ROLE_NAMES, StrategyVar, encode_sequential, encode_true_concurrent, formula_stats
from .errors import PetriError
from .pgformat import load_pg, parse_pgstrat, print_pg, print_pgstrat
from .semantics import enumerate_traces, format_trace
from .solving import ExternalBackend, InternalBackend, BruteForceBackend, to_qcir, to_qdimacs
from .synthesis import DEFAULT_MAX_BOUND, DEFAULT_MAX_N, DEFAULT_TIMEOUT, build_strategy_net, strategy_pairs, synthesize
from .unfolding import unfold

EXIT_OK, EXIT_EXHAUSTED, EXIT_ERROR = 0, 1, 2


def _backend(args):
    if args.solver == "internal":
        return InternalBackend()
    if args.solver == "bruteforce":
        return BruteForceBackend()
    return ExternalBackend(cmd=args.solver_cmd, fmt=args.solver_format, timeout=args.timeout)


def _add_solver_args(p):
    p.add_argument("--solver", choices=("internal", "external", "bruteforce"), default="internal")
    p.add_argument("--solver-cmd", help="external solver command; '{file}' is replaced by the formula path")
    p.add_argument("--solver-format", choices=("qcir", "qdimacs"), default=None)
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT, help="seconds")


def _kind(name):
    return {"seq": "sequential", "tc": "true_concurrent"}[name]


def cmd_synth(args):
    game = load_pg(args.file)
    run = synthesize(game, _kind(args.encoding), backend=_backend(args), timeout=args.timeout,
                     max_bound=args.max_bound, max_n=args.max_n, artifact_dir=args.out)
    print(f"{'b':>3} {'n':>3}  {'status':<8} time_s")
    for it in run.iterations:
        print(f"{it.bound:>3} {it.n:>3}  {it.status:<8} {it.wall_time:.3f}")
    print(f"iterations: {len(run.iterations)}  runtime_s: {run.wall_time:.3f}  outcome: {run.outcome}")
    if not run.found:
        return EXIT_EXHAUSTED
    pairs = strategy_pairs(run.assignment)
    print(f"strategy (bound {run.unfolding.bound}):")
    for p, t in pairs:
        print(f"  {p} {t}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "strategy.pgstrat"), "w") as fh:
            fh.write(print_pgstrat(run.unfolding.bound, pairs))
        with open(os.path.join(args.out, "strategy.dot"), "w") as fh:
            fh.write(run.strategy.to_dot())
    return EXIT_OK


def cmd_encode(args):
    game = load_pg(args.file)
    u = unfold(game, args.bound)
    if args.encoding == "seq":
        q = encode_sequential(u, args.n)
    else:
        q = encode_true_concurrent(u, args.n, stalling=not args.no_stall)
    text = to_qcir(q) if args.format == "qcir" else to_qdimacs(q)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.stats:
        stats = formula_stats(q)
        out = sys.stderr if not args.out else sys.stdout
        for key in list(ROLE_NAMES.values()) + ["exists", "forall", "gates"]:
            print(f"{key}: {stats[key]}", file=out)
    return EXIT_OK


def _strategy_net(game, path):
    with open(path) as fh:
        bound, pairs = parse_pgstrat(fh.read())
    u = unfold(game, bound)
    places = set(u.net.places)
    for p, t in pairs:
        if p not in places:
            raise PetriError(f"strategy mentions unknown place copy {p!r}")
        if t not in game.net.transitions:
            raise PetriError(f"strategy mentions unknown transition {t!r}")
    return build_strategy_net(u, {StrategyVar(p, t): True for p, t in pairs}).net


def cmd_simulate(args):
    game = load_pg(args.file)
    net = _strategy_net(game, args.strategy) if args.strategy else game.net
    traces = enumerate_traces(net, args.semantics, args.max_steps)
    print(f"{len(traces)} maximal {args.semantics} traces")
    for k, tr in enumerate(traces, 1):
        print(f"trace {k} (length {len(tr)})")
        if len(tr):
            print(format_trace(tr))
    return EXIT_OK


def _param_range(text):
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def cmd_bench(args):
    families = [f.strip().upper() for item in args.family for f in item.split(",") if f.strip()]
    for f in families:
        if f not in bench.FAMILIES:
            raise ValueError(f"unknown benchmark family {f!r}")
    params = _param_range(args.param_range)
    kinds = {"seq": ["sequential"], "tc": ["true_concurrent"],
             "both": ["sequential", "true_concurrent"]}[args.encoding]
    rows, text = bench.run_suite(families, params, kinds, backend=_backend(args), max_n=args.max_n,
                                 timeout=args.timeout, jobs=args.jobs)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.check:
        ok = True
        by_key = {(r["family"], r["param"], r["encoding"]): r for r in rows}
        for (f, m, enc), r in by_key.items():
            other = by_key.get((f, m, "seq"))
            if enc == "tc" and other and r["iterations"] != "" and other["iterations"] != "":
                if r["iterations"] > other["iterations"]:
                    print(f"check failed: {f}({m}) tc {r['iterations']} > seq {other['iterations']}",
                          file=sys.stderr)
                    ok = False
        if not ok:
            return EXIT_EXHAUSTED
    return EXIT_OK


def cmd_generate(args):
    inst = bench.generate(args.family, args.param)
    sys.stdout.write(f"# {inst.family}({inst.param}), bench bound {inst.bound}\n")
    sys.stdout.write(print_pg(inst.game))
    return EXIT_OK


def cmd_dot(args):
    game = load_pg(args.file)
    text = unfold(game, args.bound).to_dot() if args.bound else game.to_dot()
    sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="petrisynth", description="Bounded synthesis for safety Petri games.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="search a winning system strategy")
    p.add_argument("file")
    p.add_argument("--encoding", choices=("seq", "tc"), default="tc")
    _add_solver_args(p)
    p.add_argument("--max-bound", type=int, default=DEFAULT_MAX_BOUND)
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.add_argument("--out", help="directory for strategy.pgstrat and strategy.dot")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("encode", help="write the QBF for one (bound, n)")
    p.add_argument("file")
    p.add_argument("--encoding", choices=("seq", "tc"), default="tc")
    p.add_argument("--bound", type=int, default=1)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--format", choices=("qcir", "qdimacs"), default="qcir")
    p.add_argument("--out")
    p.add_argument("--stats", action="store_true", help="print variable counts per role")
    p.add_argument("--no-stall", action="store_true", help="drop stall variables (diagnostic only)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("simulate", help="list all maximal traces")
    p.add_argument("file")
    p.add_argument("--semantics", choices=("seq", "tc"), default="seq")
    p.add_argument("--strategy", help=".pgstrat file; simulate the strategy net instead of the game")
    p.add_argument("--max-steps", type=int, default=20)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="run benchmark families and write CSV")
    p.add_argument("--family", action="append", required=True, help="AS, CA, DR, PL, DW (comma separated)")
    p.add_argument("--param-range", default="1-2", help="e.g. 1-3 or 1,2,4")
    p.add_argument("--encoding", choices=("seq", "tc", "both"), default="both")
    _add_solver_args(p)
    p.add_argument("--max-n", type=int, default=24)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--check", action="store_true", help="fail unless tc iterations <= seq iterations")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("generate", help="print a benchmark instance as .pg")
    p.add_argument("family")
    p.add_argument("param", type=int)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("dot", help="print a game (or its unfolding) as DOT")
    p.add_argument("file")
    p.add_argument("--bound", type=int)
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (OSError, PetriError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
