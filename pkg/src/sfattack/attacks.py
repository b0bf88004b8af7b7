"""Link-rewiring attacks that push strong scale-free graphs out of the strong class.

Every strategy returns a :class:`RewiringStep` computed on the graph as it is
at the start of the step (delete and add rules see the same degree snapshot);
:func:`apply_step` then deletes one link and adds one, so node and link
counts are preserved.
"""
import bisect
import math
from dataclasses import dataclass, field

import numpy as np

from . import metrics, powerlaw
from .classifier import Category, ClassifierConfig, classify_graph, strong_screen
from .errors import (
    ConfigInvalid,
    GraphComplete,
    MaxStepsExceeded,
    NoEdges,
    NoHubEdge,
    NoMediumNonEdge,
    NotStrongInitially,
)

STRATEGIES = ("RLR", "DALR", "DILR")


@dataclass(frozen=True)
class RewiringStep:
    deleted: tuple
    added: tuple

    def as_dict(self):
        return {"deleted": list(self.deleted), "added": list(self.added)}


@dataclass(frozen=True)
class DilrConfig:
    gamma: float = 0.20
    beta: float = 0.50

    def validate(self):
        if not 0.0 < self.gamma < self.beta <= 1.0:
            raise ConfigInvalid(f"need 0 < gamma < beta <= 1 (got gamma={self.gamma}, beta={self.beta})")


def apply_step(g, step):
    g.remove_edge(*step.deleted)
    g.add_edge(*step.added)


def _require_rewirable(g):
    if g.num_edges == 0:
        raise NoEdges("no link to delete")
    if g.num_edges >= g.max_edges:
        raise GraphComplete("no link to add")


def rlr_step(g, rng):
    """Uniform link to delete, uniform non-link to add."""
    _require_rewirable(g)
    deleted = g.sample_edge(rng)
    added = g.sample_non_edge(rng)
    return RewiringStep(deleted, added)


def _max_sum_edge(g):
    e = g.edge_array()
    deg = g.degrees
    s = deg[e[:, 0]] + deg[e[:, 1]]
    top = e[s == s.max()]
    i = np.lexsort((top[:, 1], top[:, 0]))[0]
    return (int(top[i, 0]), int(top[i, 1]))


def _first_free_partner(g, x, partners):
    """Smallest y in sorted ``partners`` with y > x and (x, y) not a link."""
    nb = g.neighbors(x)
    for j in range(bisect.bisect_right(partners, x), len(partners)):
        y = partners[j]
        if y not in nb:
            return y
    return None


def _lexmin_free_pair(g, A, B):
    """Lexicographically smallest non-link (x, y), x < y, joining A and B.

    ``A`` and ``B`` are ascending node lists; ``A is B`` means pairs within A.
    """
    same = A is B
    in_a = None if same else set(A)
    for x in (A if same else sorted(A + B)):
        y = _first_free_partner(g, x, B if same or x in in_a else A)
        if y is not None:
            return (x, y)
    return None


def _min_sum_non_edge(g):
    deg = g.degrees
    by_deg = {}
    for node in np.argsort(deg, kind="stable"):
        by_deg.setdefault(int(deg[node]), []).append(int(node))
    levels = sorted(by_deg)
    for s in sorted({a + b for i, a in enumerate(levels) for b in levels[i:]}):
        found = []
        for a in levels:
            b = s - a
            if b < a:
                break
            if b in by_deg:
                pair = _lexmin_free_pair(g, by_deg[a], by_deg[a] if a == b else by_deg[b])
                if pair is not None:
                    found.append(pair)
        if found:
            return min(found)
    raise GraphComplete("no link to add")


def dalr_step(g):
    """Delete the link with the largest degree sum, add the non-link with the
    smallest; ties go to the lexicographically smallest canonical pair."""
    _require_rewirable(g)
    return RewiringStep(_max_sum_edge(g), _min_sum_non_edge(g))


def degree_rank(g):
    """Nodes ordered by degree descending, node id ascending within ties."""
    deg = g.degrees
    return np.lexsort((np.arange(g.n), -deg))


def dilr_sets(g, cfg=DilrConfig()):
    """``(V_L, V_M)``: top ceil(gamma n) ranked nodes, then ranks up to floor(beta n)."""
    cfg.validate()
    order = degree_rank(g)
    n_large = math.ceil(round(cfg.gamma * g.n, 9))
    n_medium_end = math.floor(round(cfg.beta * g.n, 9))
    return order[:n_large], order[n_large:max(n_large, n_medium_end)]


def _sample_pair_non_edge(g, nodes, rng):
    k = len(nodes)
    total = k * (k - 1) // 2
    member = set(int(v) for v in nodes)
    internal = sum(1 for v in member for w in g.neighbors(v) if w in member) // 2
    free = total - internal
    if free <= 0:
        raise NoMediumNonEdge("every pair of medium-degree nodes is already linked")
    if free * 2 >= total:
        while True:
            i, j = rng.integers(k, size=2)
            if i != j:
                u, v = int(nodes[i]), int(nodes[j])
                if not g.has_edge(u, v):
                    return (u, v) if u < v else (v, u)
    ordered = sorted(member)
    options = [(u, v) for a, u in enumerate(ordered) for v in ordered[a + 1:] if not g.has_edge(u, v)]
    return options[int(rng.integers(len(options)))]


def dilr_step(g, cfg=DilrConfig(), rng=None):
    """Cut a hub from its highest-degree neighbour, link two medium nodes.

    The hub ``v_i`` is uniform over ``V_L`` nodes with at least one link; its
    partner is the neighbour of largest degree (smallest id on ties), which
    may or may not itself lie in ``V_L``.
    """
    large, medium = dilr_sets(g, cfg)
    deg = g.degrees
    eligible = [int(v) for v in large if deg[v] > 0]
    if not eligible:
        raise NoHubEdge("no large-degree node has a link")
    vi = eligible[int(rng.integers(len(eligible)))]
    vj = min(g.neighbors(vi), key=lambda w: (-deg[w], w))
    added = _sample_pair_non_edge(g, medium, rng)
    deleted = (vi, vj) if vi < vj else (vj, vi)
    return RewiringStep(deleted, added)


def make_step(strategy, g, rng, dilr=DilrConfig()):
    if strategy == "RLR":
        return rlr_step(g, rng)
    if strategy == "DALR":
        return dalr_step(g)
    if strategy == "DILR":
        return dilr_step(g, dilr, rng)
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass
class AttackOutcome:
    strategy: str
    steps: int
    n_edges: int
    category: Category
    delta_m: float
    concealment: metrics.ConcealmentReport | None
    seed: int
    aborted: bool = False
    step_log: list = field(default_factory=list)
    adversarial: object = field(default=None, repr=False, compare=False)

    @property
    def delta_l(self):
        return self.concealment.delta_l if self.concealment else None

    @property
    def delta_c(self):
        return self.concealment.delta_c if self.concealment else None

    @property
    def delta_d(self):
        return self.concealment.delta_d if self.concealment else None


def attack_until_exit(g, strategy, cfg=ClassifierConfig(), max_steps=None, seed=0,
                      dilr=DilrConfig(), check_initial=True, baseline=None,
                      log_steps=False, raise_on_abort=False, classify_seed=None,
                      screen_reps=0):
    """Rewire ``g`` one step at a time until it stops being Strong.

    After each step the cheap :func:`strong_screen` (alpha, n_tail, R) is
    evaluated; the first step that fails it ends the attack and the terminal
    category is taken from a full classification with bootstrap. ``g`` is
    not modified. Runs that reach ``max_steps`` (default: number of links)
    are returned with ``aborted=True`` and category Strong, or raise
    :class:`MaxStepsExceeded` if ``raise_on_abort``.
    """
    rng = np.random.default_rng(seed)
    if classify_seed is None:
        classify_seed = int(rng.integers(2 ** 63))
    if check_initial:
        initial = classify_graph(g, cfg, classify_seed)
        if initial.category is not Category.STRONG:
            raise NotStrongInitially(f"input classified as {initial.category.value}")
    if max_steps is None:
        max_steps = g.num_edges
    if max_steps < 1:
        raise ConfigInvalid("max_steps must be >= 1")
    if strategy == "DILR":
        dilr.validate()
    work = g.copy()
    log = []
    category = Category.STRONG
    steps = 0
    aborted = True
    while steps < max_steps:
        step = make_step(strategy, work, rng, dilr)
        apply_step(work, step)
        steps += 1
        if log_steps:
            log.append({"step": steps, **step.as_dict()})
        ok, verdict = strong_screen(work.degrees, cfg)
        if ok and screen_reps:
            p = powerlaw.gof_pvalue(work.degrees, verdict.fit, screen_reps, (classify_seed, steps)).p_value
            ok = p >= cfg.p_threshold
        if not ok:
            category = classify_graph(work, cfg, classify_seed).category
            if category is Category.STRONG:
                continue
            aborted = False
            break
    if aborted and raise_on_abort:
        raise MaxStepsExceeded(f"still strong after {steps} steps")
    report = None if aborted else metrics.concealment(g, work, baseline=baseline)
    return AttackOutcome(
        strategy=strategy,
        steps=steps,
        n_edges=g.num_edges,
        category=category,
        delta_m=metrics.effectiveness(steps, g.num_edges),
        concealment=report,
        seed=int(seed) if not isinstance(seed, np.random.SeedSequence) else int(seed.generate_state(1)[0]),
        aborted=aborted,
        step_log=log,
        adversarial=work,
    )
