"""Command-line entry point: ``sfattack {generate,classify,attack,plot}``.

Every flag can also be set through an environment variable named
``SFATTACK_<FLAG>`` (upper case, dashes as underscores), e.g.
``SFATTACK_SEED=7`` or ``SFATTACK_MAX_STEPS=50``. Explicit flags win.
"""
import argparse
import json
import logging
import os
import sys

from . import __version__
from .attacks import STRATEGIES
from .classifier import ClassifierConfig, classify, read_degree_sequences
from .errors import SFAttackError
from .harness import ExperimentConfig, cmd_attack, cmd_generate
from .plot import cmd_plot

ENV_PREFIX = "SFATTACK_"


def _csv_ints(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _csv_strategies(text):
    out = [x.strip().upper() for x in text.split(",") if x.strip()]
    for s in out:
        if s not in STRATEGIES:
            raise argparse.ArgumentTypeError(f"unknown strategy {s!r} (choose from {','.join(STRATEGIES)})")
    return out


def _env_default(name, default, conv=str):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None:
        return default
    return conv(raw)


def _flag(p, name, conv, default, help):
    p.add_argument(f"--{name}", type=conv, default=_env_default(name, default, conv), help=help)


def _common(p, out_default):
    _flag(p, "sizes", _csv_ints, [500], "comma-separated node counts")
    _flag(p, "bootstrap", int, 100, "bootstrap replicates for the goodness-of-fit p-value")
    _flag(p, "seed", int, 0, "base seed")
    _flag(p, "out", str, out_default, "output directory")
    _flag(p, "jobs", int, 1, "worker processes")


def build_parser():
    parser = argparse.ArgumentParser(prog="sfattack", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate and classify BA graphs")
    _common(g, "dataset")
    _flag(g, "count", int, 30, "graphs per size")
    _flag(g, "m-attach", int, 2, "links added per new node")

    c = sub.add_parser("classify", help="classify one edge-list file")
    c.add_argument("path")
    c.add_argument("--directed", action="store_true", default=_env_default("directed", False, lambda s: s == "1"))
    c.add_argument("--no-total", action="store_true", help="omit the undirected total-degree sequence")
    _flag(c, "bootstrap", int, 100, "bootstrap replicates")
    _flag(c, "seed", int, 0, "seed")

    a = sub.add_parser("attack", help="attack the strong graphs of a dataset")
    a.add_argument("dataset")
    _common(a, "results")
    _flag(a, "reps", int, 20, "repetitions per network and strategy")
    _flag(a, "strategies", _csv_strategies, list(STRATEGIES), "comma-separated subset of RLR,DALR,DILR")
    _flag(a, "gamma", float, 0.20, "DILR large-degree fraction")
    _flag(a, "beta", float, 0.50, "DILR medium-degree cutoff fraction")
    _flag(a, "max-steps", int, None, "abort a run after this many rewirings (default: number of links)")
    _flag(a, "networks", int, None, "attack at most this many strong graphs per size (random subset)")
    _flag(a, "screen-bootstrap", int, 0, "bootstrap replicates for a per-step p-value check (0: off)")
    a.add_argument("--no-logs", action="store_true", help="skip per-run step logs")
    a.add_argument("--save-adversarial", action="store_true", help="write adversarial edge lists")

    p = sub.add_parser("plot", help="render SVG figures from a results directory")
    p.add_argument("results")
    _flag(p, "out", str, None, "output directory (default: the results directory)")
    return parser


def _run(args):
    if args.command == "generate":
        cfg = ExperimentConfig(sizes=args.sizes, count=args.count, bootstrap=args.bootstrap, seed=args.seed,
                               out=args.out, jobs=args.jobs, m_attach=args.m_attach)
        manifest = cmd_generate(cfg)
        for size, fr in manifest["fractions"].items():
            parts = ", ".join(f"{k} {v:.1%}" for k, v in fr.items())
            print(f"n={size}: {parts}")
        return 0

    if args.command == "classify":
        seqs = read_degree_sequences(args.path, args.directed, include_total=not args.no_total)
        result = classify(seqs, ClassifierConfig(gof_reps=args.bootstrap), args.seed)
        doc = result.as_dict()
        for v in result.sequences:
            if v.error:
                print(f"diagnostic: {v.error}", file=sys.stderr)
        json.dump(doc, sys.stdout, indent=2)
        print()
        return 0

    if args.command == "attack":
        cfg = ExperimentConfig(sizes=args.sizes, reps=args.reps, strategies=args.strategies, gamma=args.gamma,
                               beta=args.beta, bootstrap=args.bootstrap, seed=args.seed, out=args.out,
                               jobs=args.jobs, max_steps=args.max_steps, attack_networks=args.networks,
                               screen_bootstrap=args.screen_bootstrap, step_logs=not args.no_logs,
                               save_adversarial=args.save_adversarial)
        rows, summary = cmd_attack(cfg, args.dataset)
        for r in summary.rows:
            if r["target"] == "overall":
                dm = r["mean_delta_m"]
                dm = f"{dm:.2%}" if isinstance(dm, float) else dm
                print(f"n={r['size']} {r['strategy']}: runs {r['count']}, aborted {r['aborted']}, mean dM {dm}")
        return 0

    if args.command == "plot":
        for path in cmd_plot(args.results, args.out):
            print(path)
        return 0
    raise AssertionError(args.command)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _run(args)
    except SFAttackError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: IoError: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
