"""Preferential-attachment graphs and a configuration-model oracle."""
from dataclasses import dataclass

import numpy as np

from .errors import ConfigInvalid, NotGraphical, RetriesExhausted
from .graph import Graph


@dataclass(frozen=True)
class BaConfig:
    n: int
    m_attach: int = 2
    seed: int = 0

    def validate(self):
        if self.m_attach < 1:
            raise ConfigInvalid("m_attach must be >= 1")
        if self.n <= self.m_attach + 1:
            raise ConfigInvalid(f"n must exceed m_attach + 1 (got n={self.n}, m_attach={self.m_attach})")


def ba_edge_count(n, m_attach):
    return m_attach * (m_attach + 1) // 2 + m_attach * (n - m_attach - 1)


def generate_ba(cfg):
    """Barabasi-Albert graph.

    Starts from a clique on ``m_attach + 1`` nodes; every later node links to
    ``m_attach`` distinct earlier nodes drawn with probability proportional to
    their current degree (repeat draws within a step are rejected).
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    m0 = cfg.m_attach + 1
    g = Graph(cfg.n)
    # each node appears once per incident edge end -> uniform draw is degree-proportional
    ends = np.empty(2 * ba_edge_count(cfg.n, cfg.m_attach), dtype=np.int64)
    k = 0
    for u in range(m0):
        for v in range(u + 1, m0):
            g.add_edge(u, v)
            ends[k] = u
            ends[k + 1] = v
            k += 2
    for new in range(m0, cfg.n):
        chosen = []
        while len(chosen) < cfg.m_attach:
            t = int(ends[rng.integers(k)])
            if t not in chosen:
                chosen.append(t)
        for t in chosen:
            g.add_edge(new, t)
            ends[k] = new
            ends[k + 1] = t
            k += 2
    return g


def is_graphical(degrees):
    """Erdos-Gallai test."""
    d = np.sort(np.asarray(degrees, dtype=np.int64))[::-1]
    if d.size == 0:
        return True
    if d[-1] < 0 or d.sum() % 2:
        return False
    n = d.size
    csum = np.cumsum(d)
    for r in range(1, n + 1):
        rhs = r * (r - 1) + np.minimum(d[r:], r).sum()
        if csum[r - 1] > rhs:
            return False
    return True


def generate_configuration_model(degrees, rng, max_attempts=1000):
    """Simple graph with exactly the given degrees by stub matching.

    A full matching is redrawn whenever it produces a self-loop or a repeated
    pair; after ``max_attempts`` failures :class:`RetriesExhausted` is raised.
    """
    d = np.asarray(degrees, dtype=np.int64)
    if not is_graphical(d):
        raise NotGraphical("degree sequence is not graphical")
    stubs = np.repeat(np.arange(d.size), d)
    for _ in range(max_attempts):
        perm = rng.permutation(stubs).reshape(-1, 2)
        if np.any(perm[:, 0] == perm[:, 1]):
            continue
        lo = np.minimum(perm[:, 0], perm[:, 1])
        hi = np.maximum(perm[:, 0], perm[:, 1])
        keys = lo * d.size + hi
        if np.unique(keys).size != keys.size:
            continue
        return Graph(d.size, zip(lo.tolist(), hi.tolist()))
    raise RetriesExhausted(f"no simple matching after {max_attempts} attempts")
