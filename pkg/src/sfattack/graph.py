"""Undirected simple graphs and the structural measurements L, C and D."""
import math
from pathlib import Path

import numpy as np

from . import _graphkernels
from .errors import (
    EdgeExists,
    EdgeMissing,
    GraphComplete,
    NoConnectedPairs,
    NoEdges,
    ParseError,
    SelfLoop,
)


def canon(u, v):
    """Canonical (small, large) form of an undirected edge."""
    u = int(u)
    v = int(v)
    if u == v:
        raise SelfLoop(f"self-loop on node {u}")
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected simple graph on nodes ``0..n-1``.

    The edge set, per-node neighbour sets and the degree array are kept in
    sync by :meth:`add_edge` / :meth:`remove_edge`, the only mutators. An
    insertion-ordered edge list backs O(1) uniform edge sampling.
    """

    __slots__ = ("n", "_adj", "_edges", "_pos", "_deg")

    def __init__(self, n, edges=()):
        if n < 0:
            raise ValueError("n must be non-negative")
        self.n = int(n)
        self._adj = [set() for _ in range(self.n)]
        self._edges = []
        self._pos = {}
        self._deg = np.zeros(self.n, dtype=np.int64)
        for u, v in edges:
            self.add_edge(u, v)

    @classmethod
    def from_pairs(cls, n, pairs):
        """Build a graph, silently collapsing duplicate and reversed pairs."""
        g = cls(n)
        for u, v in pairs:
            if not g.has_edge(u, v):
                g.add_edge(u, v)
        return g

    def _check(self, u, v):
        e = canon(u, v)
        if e[0] < 0 or e[1] >= self.n:
            raise IndexError(f"edge {e} outside 0..{self.n - 1}")
        return e

    def add_edge(self, u, v):
        e = self._check(u, v)
        if e in self._pos:
            raise EdgeExists(f"edge {e} already present")
        a, b = e
        self._adj[a].add(b)
        self._adj[b].add(a)
        self._deg[a] += 1
        self._deg[b] += 1
        self._pos[e] = len(self._edges)
        self._edges.append(e)

    def remove_edge(self, u, v):
        e = self._check(u, v)
        idx = self._pos.pop(e, None)
        if idx is None:
            raise EdgeMissing(f"edge {e} not present")
        last = self._edges.pop()
        if idx < len(self._edges):
            self._edges[idx] = last
            self._pos[last] = idx
        a, b = e
        self._adj[a].discard(b)
        self._adj[b].discard(a)
        self._deg[a] -= 1
        self._deg[b] -= 1

    def has_edge(self, u, v):
        if u == v:
            return False
        return (u, v) in self._pos if u < v else (v, u) in self._pos

    def neighbors(self, u):
        return self._adj[u]

    def degree(self, u):
        return int(self._deg[u])

    @property
    def degrees(self):
        """Degree array (read-only view; copy before mutating)."""
        view = self._deg.view()
        view.flags.writeable = False
        return view

    @property
    def num_edges(self):
        return len(self._edges)

    @property
    def max_edges(self):
        return self.n * (self.n - 1) // 2

    def edges(self):
        """Sorted list of canonical edges."""
        return sorted(self._edges)

    def edge_array(self):
        """``(m, 2)`` int array of edges in internal (history-dependent) order."""
        if not self._edges:
            return np.empty((0, 2), dtype=np.int64)
        return np.asarray(self._edges, dtype=np.int64)

    def edge_at(self, i):
        return self._edges[i]

    def copy(self):
        g = Graph.__new__(Graph)
        g.n = self.n
        g._adj = [set(s) for s in self._adj]
        g._edges = list(self._edges)
        g._pos = dict(self._pos)
        g._deg = self._deg.copy()
        return g

    def relabel(self, perm):
        """New graph with node ``i`` renamed to ``perm[i]``."""
        return Graph.from_pairs(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def csr(self):
        """``(indptr, indices)`` with sorted neighbour lists."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self._deg, out=indptr[1:])
        indices = np.empty(indptr[-1], dtype=np.int64)
        for u, nb in enumerate(self._adj):
            indices[indptr[u]:indptr[u + 1]] = sorted(nb)
        return indptr, indices

    def sample_edge(self, rng):
        if not self._edges:
            raise NoEdges("graph has no edges")
        return self._edges[int(rng.integers(len(self._edges)))]

    def sample_non_edge(self, rng):
        """Uniform draw from the complement edge set."""
        m = len(self._edges)
        total = self.max_edges
        if m >= total:
            raise GraphComplete("graph is complete")
        if m <= total // 2:
            while True:
                u, v = rng.integers(self.n, size=2)
                if u != v:
                    e = (int(u), int(v)) if u < v else (int(v), int(u))
                    if e not in self._pos:
                        return e
        # dense: enumerate the complement
        missing = [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if (u, v) not in self._pos]
        return missing[int(rng.integers(len(missing)))]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._pos.keys() == other._pos.keys()

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"

    def check_invariants(self):
        """Raise AssertionError if any internal view disagrees with another."""
        assert len(self._pos) == len(self._edges)
        for i, (u, v) in enumerate(self._edges):
            assert 0 <= u < v < self.n
            assert self._pos[(u, v)] == i
            assert v in self._adj[u] and u in self._adj[v]
        assert sum(len(s) for s in self._adj) == 2 * len(self._edges)
        assert all(len(s) == d for s, d in zip(self._adj, self._deg))
        assert int(self._deg.sum()) == 2 * len(self._edges)


def degree_sequence(g):
    return [int(d) for d in g.degrees]


def shortest_path_stats(g):
    """Mean BFS distance over connected unordered pairs, and the pair count."""
    if g.num_edges == 0:
        raise NoConnectedPairs("graph has no edges")
    indptr, indices = g.csr()
    total, pairs = _graphkernels.distance_sum(indptr, indices, g.n)
    return total / pairs, pairs


def avg_shortest_path(g):
    return shortest_path_stats(g)[0]


def local_clustering(g):
    indptr, indices = g.csr()
    tri = _graphkernels.triangles(indptr, indices, g.n).astype(np.float64)
    k = g.degrees.astype(np.float64)
    out = np.zeros(g.n)
    ok = k >= 2
    out[ok] = 2.0 * tri[ok] / (k[ok] * (k[ok] - 1.0))
    return out


def avg_clustering(g):
    if g.n == 0:
        return 0.0
    return float(local_clustering(g).mean())


def diagonal_distance(g, double_count=False):
    """Mean distance of adjacency nonzeros from the main diagonal.

    Each undirected edge is counted once unless ``double_count`` is set, in
    which case both symmetric matrix cells contribute (twice the value).
    """
    if g.n == 0 or g.num_edges == 0:
        return 0.0
    e = g.edge_array()
    s = float(np.abs(e[:, 1] - e[:, 0]).sum())
    if double_count:
        s *= 2.0
    return s / (math.sqrt(2.0) * g.n * g.n)


# --- edge-list text format -------------------------------------------------

def parse_edge_lines(lines):
    """Parse edge-list text into ``(pairs, n_hint)``.

    One edge per line as two non-negative integers; ``#`` lines are comments,
    except that ``# nodes: N`` records the node count so isolated trailing
    nodes survive a round trip. Self-loops raise :class:`ParseError`.
    Pairs are returned as read (orientation and duplicates preserved).
    """
    pairs = []
    n_hint = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("nodes:"):
                try:
                    n_hint = int(body.split(":", 1)[1])
                except ValueError:
                    raise ParseError(f"bad node-count directive {line!r}", lineno) from None
            continue
        fields = line.split()
        if len(fields) < 2:
            raise ParseError(f"expected two node ids, got {line!r}", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"non-integer node id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError(f"negative node id in {line!r}", lineno)
        if u == v:
            raise ParseError(f"self-loop {u} {v} rejected", lineno)
        pairs.append((u, v))
    return pairs, n_hint


def _node_count(pairs, n_hint):
    n = max((max(u, v) for u, v in pairs), default=-1) + 1
    if n_hint is not None:
        if n_hint < n:
            raise ParseError(f"node-count directive {n_hint} smaller than max id {n - 1}")
        n = n_hint
    return n


def read_edgelist(path):
    with open(path) as fh:
        pairs, n_hint = parse_edge_lines(fh)
    return Graph.from_pairs(_node_count(pairs, n_hint), pairs)


def format_edgelist(g):
    lines = [f"# nodes: {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def write_edgelist(g, path):
    Path(path).write_text(format_edgelist(g))
