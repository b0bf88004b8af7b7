"""Attack effectiveness, concealment and result aggregation."""
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyInput, UndefinedBaseline, ZeroEdges
from .graph import avg_clustering, diagonal_distance, shortest_path_stats

MISSING = "--"
TERMINAL_CATEGORIES = ("weak", "weakest", "super-weak", "non-scale-free")


def effectiveness(m_r, m):
    """Fraction of links rewired."""
    if m <= 0:
        raise ZeroEdges("graph has no links")
    if m_r < 0:
        raise ValueError("m_r must be non-negative")
    return m_r / m


@dataclass(frozen=True)
class Structure:
    L: float | None
    C: float
    D: float
    connected_pairs: int = 0


def measure(g):
    if g.num_edges:
        L, pairs = shortest_path_stats(g)
    else:
        L, pairs = None, 0
    return Structure(L, avg_clustering(g), diagonal_distance(g), pairs)


def relative_change(before, after, name):
    if before is None or after is None or before == 0:
        raise UndefinedBaseline(name)
    return abs(after - before) / before


@dataclass
class ConcealmentReport:
    before: Structure
    after: Structure
    delta_l: float | None = None
    delta_c: float | None = None
    delta_d: float | None = None
    undefined: list = field(default_factory=list)


def concealment(original, adversarial, baseline=None):
    """Relative changes of L, C and D between two graphs on the same nodes.

    A metric whose original value is zero is left as ``None`` and named in
    ``undefined``; the others are still reported. ``baseline`` may carry a
    precomputed :class:`Structure` of ``original``.
    """
    if original.n != adversarial.n:
        raise ValueError("graphs must have the same node count")
    before = baseline if baseline is not None else measure(original)
    after = measure(adversarial)
    rep = ConcealmentReport(before, after)
    for name, attr in (("L", "delta_l"), ("C", "delta_c"), ("D", "delta_d")):
        try:
            setattr(rep, attr, relative_change(getattr(before, name), getattr(after, name), name))
        except UndefinedBaseline as exc:
            rep.undefined.append(exc.metric)
    return rep


# --- aggregation ----------------------------------------------------------

def _mean(xs):
    xs = [x for x in xs if x is not None]
    return sum(xs) / len(xs) if xs else None


def _sem(xs):
    xs = [x for x in xs if x is not None]
    if len(xs) < 2:
        return None
    return float(np.std(xs, ddof=1) / math.sqrt(len(xs)))


@dataclass
class Summary:
    rows: list
    frequencies: dict
    violins: list


def aggregate(outcomes, group_keys=("size", "strategy")):
    """Table rows, terminal-category frequencies and raw violin samples.

    ``outcomes`` are mappings with at least ``delta_m``, ``category``,
    ``aborted``, ``delta_l/c/d``, ``L/C/D_before``, ``L/C/D_after`` and the
    ``group_keys``. Aborted runs are counted but excluded from the means.
    Each group gets one row per terminal category plus an ``overall`` row;
    empty cells carry :data:`MISSING`. Groups appear in first-seen order.
    """
    outcomes = list(outcomes)
    if not outcomes:
        raise EmptyInput("no outcomes to aggregate")
    groups = defaultdict(list)
    for o in outcomes:
        groups[tuple(o[k] for k in group_keys)].append(o)

    rows = []
    frequencies = {}
    for key in groups:
        members = groups[key]
        done = [o for o in members if not o["aborted"]]
        n_aborted = len(members) - len(done)
        counts = Counter(o["category"] for o in done)
        frequencies[key] = {c: (counts[c] / len(done) if done else 0.0) for c in TERMINAL_CATEGORIES}
        for label in TERMINAL_CATEGORIES + ("overall",):
            sel = done if label == "overall" else [o for o in done if o["category"] == label]
            row = dict(zip(group_keys, key))
            row["target"] = label
            row["count"] = len(sel)
            row["aborted"] = n_aborted if label == "overall" else 0
            for metric in ("delta_m", "delta_l", "delta_c", "delta_d"):
                mean = _mean(o[metric] for o in sel)
                row[f"mean_{metric}"] = MISSING if mean is None else mean
                sem = _sem([o[metric] for o in sel])
                row[f"se_{metric}"] = MISSING if sem is None else sem
            rows.append(row)

    pooled = Counter(o["category"] for o in outcomes if not o["aborted"])
    total = sum(pooled.values())
    frequencies["pooled"] = {c: (pooled[c] / total if total else 0.0) for c in TERMINAL_CATEGORIES}

    violins = []
    for o in outcomes:
        if o["aborted"]:
            continue
        for metric in ("L", "C", "D"):
            for phase in ("before", "after"):
                value = o.get(f"{metric}_{phase}")
                if value is not None:
                    violins.append({"strategy": o.get("strategy"), "size": o.get("size"),
                                    "metric": metric, "phase": phase, "value": value})
    return Summary(rows, frequencies, violins)
