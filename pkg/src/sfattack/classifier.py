"""Five-way scale-free strength classification of networks."""
import enum
from dataclasses import dataclass, field, replace

import numpy as np

from . import powerlaw
from .errors import EmptySequenceSet, FitError, ParseError
from .graph import Graph, _node_count, parse_edge_lines


class Category(str, enum.Enum):
    STRONG = "strong"
    WEAK = "weak"
    WEAKEST = "weakest"
    SUPER_WEAK = "super-weak"
    NON_SCALE_FREE = "non-scale-free"

    def __str__(self):
        return self.value


CATEGORY_ORDER = (
    Category.STRONG,
    Category.WEAK,
    Category.WEAKEST,
    Category.SUPER_WEAK,
    Category.NON_SCALE_FREE,
)


@dataclass(frozen=True)
class ClassifierConfig:
    gof_reps: int = 100
    p_threshold: float = 0.1
    tail_min: int = 50
    alpha_lo: float = 2.0
    alpha_hi: float = 3.0
    lr_threshold: float = 0.1
    alternative: str = "exponential"
    vote: float = 0.5
    include_total: bool = True

    def with_reps(self, reps):
        return replace(self, gof_reps=reps)


@dataclass
class SequenceVerdict:
    """Indicators for one degree sequence; ``gof`` is None for screen-only verdicts."""

    fit: powerlaw.TailFit | None = None
    gof: powerlaw.GofResult | None = None
    lr: powerlaw.LrResult | None = None
    error: str | None = None

    def gof_pass(self, cfg):
        return self.gof is not None and self.gof.p_value >= cfg.p_threshold

    def tail_big(self, cfg):
        return self.fit is not None and self.fit.n_tail >= cfg.tail_min

    def alpha_in_range(self, cfg):
        return self.fit is not None and cfg.alpha_lo < self.fit.alpha < cfg.alpha_hi

    def pl_not_disfavored(self, cfg):
        return self.lr is not None and (self.lr.r > 0 or self.lr.p_r >= cfg.lr_threshold)

    def as_dict(self):
        f, g, lr = self.fit, self.gof, self.lr
        return {
            "alpha": None if f is None else f.alpha,
            "x_min": None if f is None else f.x_min,
            "n_tail": None if f is None else f.n_tail,
            "ks": None if f is None else f.ks,
            "p": None if g is None else g.p_value,
            "r": None if lr is None else lr.r,
            "p_r": None if lr is None else lr.p_r,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d, alternative="exponential"):
        fit = gof = lr = None
        if d.get("alpha") is not None:
            fit = powerlaw.TailFit(d["alpha"], d["x_min"], d["n_tail"], d["ks"], 0)
        if d.get("p") is not None:
            gof = powerlaw.GofResult(d["p"], 0)
        if d.get("r") is not None:
            lr = powerlaw.LrResult(d["r"], d["p_r"], alternative)
        return cls(fit, gof, lr, d.get("error"))


@dataclass
class Classification:
    category: Category
    sequences: list = field(default_factory=list)

    def as_dict(self):
        return {"category": self.category.value, "sequences": [v.as_dict() for v in self.sequences]}


def _frac(flags):
    return sum(flags) / len(flags)


def category_from_verdicts(verdicts, cfg=ClassifierConfig()):
    """Category implied by per-sequence verdicts (majority vote per predicate)."""
    if not verdicts:
        raise EmptySequenceSet("no degree sequences to classify")
    vote = cfg.vote
    gof = [v.gof_pass(cfg) for v in verdicts]
    big = [g and v.tail_big(cfg) for g, v in zip(gof, verdicts)]
    full = [b and v.alpha_in_range(cfg) for b, v in zip(big, verdicts)]
    super_weak = _frac([v.pl_not_disfavored(cfg) for v in verdicts]) >= vote
    weakest = _frac(gof) >= vote
    weak = weakest and _frac(big) >= vote
    strong = weak and super_weak and _frac(full) >= vote
    if strong:
        return Category.STRONG
    if weak:
        return Category.WEAK
    if weakest:
        return Category.WEAKEST
    if super_weak:
        return Category.SUPER_WEAK
    return Category.NON_SCALE_FREE


def evaluate_sequence(degrees, cfg=ClassifierConfig(), rng=None, bootstrap=True):
    """Fit, (optionally) bootstrap and likelihood-ratio test one sequence."""
    verdict = SequenceVerdict()
    try:
        verdict.fit = powerlaw.fit_tail(degrees)
    except FitError as exc:
        verdict.error = f"{type(exc).__name__}: {exc}"
        return verdict
    try:
        verdict.lr = powerlaw.likelihood_ratio(degrees, verdict.fit, cfg.alternative)
    except FitError as exc:
        verdict.error = f"{type(exc).__name__}: {exc}"
    if bootstrap:
        verdict.gof = powerlaw.gof_pvalue(degrees, verdict.fit, cfg.gof_reps, rng)
    return verdict


def classify(sequences, cfg=ClassifierConfig(), seed=0):
    """Classify a set of degree sequences.

    Sequence ``i`` bootstraps with child ``i`` of ``SeedSequence(seed)``.
    """
    sequences = list(sequences)
    if not sequences:
        raise EmptySequenceSet("no degree sequences to classify")
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    verdicts = [evaluate_sequence(s, cfg, child) for s, child in zip(sequences, ss.spawn(len(sequences)))]
    return Classification(category_from_verdicts(verdicts, cfg), verdicts)


def classify_graph(g, cfg=ClassifierConfig(), seed=0):
    return classify([g.degrees], cfg, seed)


def strong_screen(degrees, cfg=ClassifierConfig()):
    """Cheap Strong test for a single sequence: alpha, n_tail and R only.

    Returns ``(passes, verdict)``. A ``False`` here guarantees the full
    classification is not Strong, since the bootstrap only adds a condition.
    """
    v = evaluate_sequence(degrees, cfg, bootstrap=False)
    ok = v.tail_big(cfg) and v.alpha_in_range(cfg) and v.pl_not_disfavored(cfg)
    return ok, v


# --- preprocessing of raw edge lists -------------------------------------

def extract_degree_sequences(pairs, directed=False, n=None, include_total=True):
    """Degree sequences of a raw edge list.

    Undirected input yields one sequence. Directed input yields the in-degree
    and out-degree sequences plus (unless ``include_total`` is off) the degree
    sequence of the undirected simplification. Duplicate arcs are collapsed.
    """
    pairs = list(pairs)
    for u, v in pairs:
        if u == v:
            raise ParseError(f"self-loop {u} {v} rejected")
    if n is None:
        n = _node_count(pairs, None)
    simple = Graph.from_pairs(n, pairs)
    if not directed:
        return [simple.degrees.copy()]
    arcs = np.unique(np.asarray(pairs, dtype=np.int64).reshape(-1, 2), axis=0)
    out = np.bincount(arcs[:, 0], minlength=n)
    ins = np.bincount(arcs[:, 1], minlength=n)
    seqs = [ins, out]
    if include_total:
        seqs.append(simple.degrees.copy())
    return seqs


def read_degree_sequences(path, directed=False, include_total=True):
    with open(path) as fh:
        pairs, n_hint = parse_edge_lines(fh)
    return extract_degree_sequences(pairs, directed, _node_count(pairs, n_hint), include_total)
