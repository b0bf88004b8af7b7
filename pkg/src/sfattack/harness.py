"""Experiment orchestration: dataset generation, attack campaigns, persistence.

Every random quantity is derived from the base seed with :func:`derive_seed`,
so a (config, seed) pair fixes every output byte. Wall-clock timestamps and
absolute paths go to ``run_info.json`` only.
"""
import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import metrics
from ._accel import backend
from .attacks import STRATEGIES, DilrConfig, attack_until_exit
from .classifier import CATEGORY_ORDER, Category, ClassifierConfig, classify_graph
from .errors import ConfigInvalid, EmptyInput, NoStrongNetworks
from .generators import BaConfig, generate_ba
from .graph import format_edgelist, read_edgelist

SCHEMA_VERSION = 1

# first spawn-key component of derive_seed, one per purpose
PURPOSE_GENERATE = 0
PURPOSE_CLASSIFY = 1
PURPOSE_ATTACK = 2

OUTCOME_FIELDS = (
    "network_id", "size", "strategy", "repetition", "seed", "steps", "n_edges",
    "delta_m", "category", "aborted", "delta_l", "delta_c", "delta_d",
    "L_before", "L_after", "C_before", "C_after", "D_before", "D_after",
)
SUMMARY_FIELDS = (
    "size", "strategy", "target", "count", "aborted",
    "mean_delta_m", "se_delta_m", "mean_delta_l", "se_delta_l",
    "mean_delta_c", "se_delta_c", "mean_delta_d", "se_delta_d",
)


def derive_seed(base, *keys):
    """64-bit seed for a task: ``SeedSequence(base, spawn_key=keys)``'s first
    two 32-bit state words, high word first."""
    hi, lo = np.random.SeedSequence(int(base), spawn_key=tuple(int(k) for k in keys)).generate_state(2)
    return (int(hi) << 32) | int(lo)


@dataclass
class ExperimentConfig:
    sizes: list = field(default_factory=lambda: [500])
    count: int = 30
    reps: int = 20
    strategies: list = field(default_factory=lambda: list(STRATEGIES))
    gamma: float = 0.20
    beta: float = 0.50
    bootstrap: int = 100
    screen_bootstrap: int = 0
    seed: int = 0
    out: str = "results"
    jobs: int = 1
    max_steps: int | None = None
    m_attach: int = 2
    attack_networks: int | None = None
    step_logs: bool = True
    save_adversarial: bool = False

    def validate(self):
        if not self.sizes:
            raise ConfigInvalid("sizes must be non-empty")
        if self.count < 1:
            raise ConfigInvalid("count must be >= 1")
        if self.reps < 1:
            raise ConfigInvalid("reps must be >= 1")
        if self.bootstrap < 1:
            raise ConfigInvalid("bootstrap must be >= 1")
        if self.jobs < 1:
            raise ConfigInvalid("jobs must be >= 1")
        if self.max_steps is not None and self.max_steps < 1:
            raise ConfigInvalid("max_steps must be >= 1")
        for s in self.strategies:
            if s not in STRATEGIES:
                raise ConfigInvalid(f"unknown strategy {s!r}")
        for n in self.sizes:
            BaConfig(n, self.m_attach).validate()
        DilrConfig(self.gamma, self.beta).validate()

    def classifier(self):
        return ClassifierConfig(gof_reps=self.bootstrap)


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_csv(path, fields, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for row in rows:
        w.writerow([_fmt(row.get(f)) for f in fields])
    Path(path).write_text(buf.getvalue())


def _write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _run_info(path, command, cfg, **extra):
    # the only file allowed to vary between identical runs
    _write_json(path, {"command": command, "schema_version": SCHEMA_VERSION, "backend": backend(),
                       "metadata": {"created": time.strftime("%Y-%m-%dT%H:%M:%S%z")},
                       "config": asdict(cfg), **extra})


# --- generate -------------------------------------------------------------

def _generate_one(task):
    size, idx, cfg_dict = task
    cfg = ExperimentConfig(**cfg_dict)
    gseed = derive_seed(cfg.seed, PURPOSE_GENERATE, size, idx)
    cseed = derive_seed(cfg.seed, PURPOSE_CLASSIFY, size, idx)
    g = generate_ba(BaConfig(size, cfg.m_attach, gseed))
    verdict = classify_graph(g, cfg.classifier(), cseed)
    return size, idx, gseed, cseed, format_edgelist(g), verdict.as_dict()


def _map(fn, tasks, jobs):
    if jobs == 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=1))


def cmd_generate(cfg):
    """Write BA graphs and their classifications under ``cfg.out``.

    Layout: ``n{size}/net{index:04d}.edges`` plus ``manifest.json`` holding
    the per-network verdicts and per-size category fractions.
    """
    cfg.validate()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    tasks = [(size, idx, asdict(cfg)) for size in cfg.sizes for idx in range(cfg.count)]
    networks = []
    for size, idx, gseed, cseed, text, verdict in _map(_generate_one, tasks, cfg.jobs):
        rel = Path(f"n{size}") / f"net{idx:04d}.edges"
        (out / rel).parent.mkdir(parents=True, exist_ok=True)
        (out / rel).write_text(text)
        networks.append({"id": f"n{size}-{idx:04d}", "size": size, "index": idx, "path": rel.as_posix(),
                         "seed": gseed, "classify_seed": cseed, "classification": verdict})
    fractions = {}
    for size in cfg.sizes:
        cats = [net["classification"]["category"] for net in networks if net["size"] == size]
        fractions[str(size)] = {c.value: cats.count(c.value) / len(cats) for c in CATEGORY_ORDER}
    manifest = {"schema_version": SCHEMA_VERSION, "kind": "dataset", "m_attach": cfg.m_attach,
                "bootstrap": cfg.bootstrap, "seed": cfg.seed, "fractions": fractions, "networks": networks}
    _write_json(out / "manifest.json", manifest)
    _run_info(out / "run_info.json", "generate", cfg)
    return manifest


# --- attack ---------------------------------------------------------------

def _attack_network(task):
    net, root, cfg_dict = task
    cfg = ExperimentConfig(**cfg_dict)
    g = read_edgelist(Path(root) / net["path"])
    base = metrics.measure(g)
    ccfg = cfg.classifier()
    dilr = DilrConfig(cfg.gamma, cfg.beta)
    rows = []
    for strategy in cfg.strategies:
        sid = STRATEGIES.index(strategy)
        for rep in range(cfg.reps):
            seed = derive_seed(cfg.seed, PURPOSE_ATTACK, net["size"], net["index"], sid, rep)
            o = attack_until_exit(g, strategy, ccfg, max_steps=cfg.max_steps, seed=seed, dilr=dilr,
                                  check_initial=False, baseline=base, log_steps=cfg.step_logs,
                                  screen_reps=cfg.screen_bootstrap)
            rep_c = o.concealment
            after = rep_c.after if rep_c else None
            rows.append({
                "network_id": net["id"], "size": net["size"], "strategy": strategy, "repetition": rep,
                "seed": seed, "steps": o.steps, "n_edges": o.n_edges, "delta_m": o.delta_m,
                "category": o.category.value, "aborted": o.aborted,
                "delta_l": o.delta_l, "delta_c": o.delta_c, "delta_d": o.delta_d,
                "L_before": base.L, "C_before": base.C, "D_before": base.D,
                "L_after": after.L if after else None, "C_after": after.C if after else None,
                "D_after": after.D if after else None,
                "_log": o.step_log, "_degrees": np.bincount(o.adversarial.degrees).tolist(),
                "_edges": format_edgelist(o.adversarial) if cfg.save_adversarial else None,
            })
    return net["id"], np.bincount(g.degrees).tolist(), rows


def load_manifest(dataset):
    path = Path(dataset) / "manifest.json"
    if not path.exists():
        raise EmptyInput(f"no manifest at {path}")
    return json.loads(path.read_text())


def select_strong(manifest, cfg):
    chosen = []
    for size in cfg.sizes:
        strong = [net for net in manifest["networks"]
                  if net["size"] == size and net["classification"]["category"] == Category.STRONG.value]
        strong.sort(key=lambda net: net["index"])
        if cfg.attack_networks is not None and len(strong) > cfg.attack_networks:
            rng = np.random.default_rng(derive_seed(cfg.seed, PURPOSE_ATTACK, size))
            keep = np.sort(rng.choice(len(strong), cfg.attack_networks, replace=False))
            strong = [strong[i] for i in keep]
        chosen.extend(strong)
    if not chosen:
        raise NoStrongNetworks("dataset contains no strong networks for the requested sizes")
    return chosen


def _hist_rows(key_fields, hist):
    return [dict(key_fields, degree=d, count=c) for d, c in enumerate(hist) if c]


def cmd_attack(cfg, dataset):
    """Attack every selected strong network and write the result tables.

    Outputs in ``cfg.out``: ``outcomes.csv`` (one row per run, sorted by
    network, strategy, repetition), ``summary.csv``, ``frequencies.csv``,
    ``violins.csv``, ``degrees.csv``, ``summary.json``, ``logs/*.jsonl``
    and optionally ``adversarial/*.edges``.
    """
    cfg.validate()
    manifest = load_manifest(dataset)
    nets = select_strong(manifest, cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    tasks = [(net, str(Path(dataset).resolve()), asdict(cfg)) for net in nets]
    results = _map(_attack_network, tasks, cfg.jobs)

    order = {s: i for i, s in enumerate(STRATEGIES)}
    rows = [r for _, _, rs in results for r in rs]
    rows.sort(key=lambda r: (r["network_id"], order[r["strategy"]], r["repetition"]))
    _write_csv(out / "outcomes.csv", OUTCOME_FIELDS, rows)

    by_group = sorted(rows, key=lambda r: (r["size"], order[r["strategy"]]))
    summary = metrics.aggregate(by_group, ("size", "strategy"))
    _write_csv(out / "summary.csv", SUMMARY_FIELDS, summary.rows)
    freq_rows = []
    for key, freqs in summary.frequencies.items():
        size, strategy = ("all", "all") if key == "pooled" else key
        for cat, value in freqs.items():
            freq_rows.append({"size": size, "strategy": strategy, "category": cat, "frequency": value})
    _write_csv(out / "frequencies.csv", ("size", "strategy", "category", "frequency"), freq_rows)
    _write_csv(out / "violins.csv", ("strategy", "size", "metric", "phase", "value"), summary.violins)

    degree_rows = []
    for net_id, hist, _ in results:
        degree_rows += _hist_rows({"network_id": net_id, "strategy": "", "repetition": "", "phase": "before"}, hist)
    for r in rows:
        degree_rows += _hist_rows({"network_id": r["network_id"], "strategy": r["strategy"],
                                   "repetition": r["repetition"], "phase": "after"}, r["_degrees"])
    _write_csv(out / "degrees.csv", ("network_id", "strategy", "repetition", "phase", "degree", "count"), degree_rows)

    if cfg.step_logs:
        (out / "logs").mkdir(exist_ok=True)
    if cfg.save_adversarial:
        (out / "adversarial").mkdir(exist_ok=True)
    for r in rows:
        stem = f"{r['network_id']}_{r['strategy']}_{r['repetition']:04d}"
        if cfg.step_logs:
            text = "".join(json.dumps(entry, sort_keys=True) + "\n" for entry in r["_log"])
            (out / "logs" / f"{stem}.jsonl").write_text(text)
        if cfg.save_adversarial:
            (out / "adversarial" / f"{stem}.edges").write_text(r["_edges"])

    doc = {"schema_version": SCHEMA_VERSION, "kind": "attack-results", "dataset_seed": manifest["seed"],
           "networks": [net["id"] for net in nets], "rows": summary.rows,
           "frequencies": {("pooled" if k == "pooled" else f"{k[0]}/{k[1]}"): v for k, v in summary.frequencies.items()}}
    _write_json(out / "summary.json", doc)
    _run_info(out / "run_info.json", "attack", cfg, dataset=str(Path(dataset).resolve()))
    return rows, summary
