"""BFS and triangle-count kernels over CSR adjacency (numba and numpy paths)."""
import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from ._accel import USE_NUMBA, njit


@njit
def _distance_sum_jit(indptr, indices, n):
    dist = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    total = 0
    pairs = 0
    for src in range(n):
        for i in range(n):
            dist[i] = -1
        dist[src] = 0
        head = 0
        tail = 1
        queue[0] = src
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u] + 1
            for p in range(indptr[u], indptr[u + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = du
                    queue[tail] = w
                    tail += 1
                    if w > src:
                        total += du
                        pairs += 1
    return total, pairs


def _distance_sum_np(indptr, indices, n):
    adj = sparse.csr_matrix((np.ones(indices.size), indices, indptr), shape=(n, n))
    d = csgraph.shortest_path(adj, method="D", directed=False, unweighted=True)
    iu = np.triu_indices(n, k=1)
    upper = d[iu]
    finite = np.isfinite(upper)
    return int(upper[finite].sum()), int(finite.sum())


@njit
def _triangles_jit(indptr, indices, n):
    mark = np.zeros(n, np.int64)
    tri = np.zeros(n, np.int64)
    for u in range(n):
        for p in range(indptr[u], indptr[u + 1]):
            mark[indices[p]] = u + 1
        links = 0
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            for q in range(indptr[v], indptr[v + 1]):
                if mark[indices[q]] == u + 1:
                    links += 1
        tri[u] = links // 2
    return tri


def _triangles_np(indptr, indices, n):
    adj = sparse.csr_matrix((np.ones(indices.size, dtype=np.int64), indices, indptr), shape=(n, n))
    return np.asarray((adj @ adj).multiply(adj).sum(axis=1)).ravel().astype(np.int64) // 2


def distance_sum(indptr, indices, n):
    """Sum of BFS distances over unordered connected pairs, and the pair count."""
    if USE_NUMBA:
        total, pairs = _distance_sum_jit(indptr, indices, n)
        return int(total), int(pairs)
    return _distance_sum_np(indptr, indices, n)


def triangles(indptr, indices, n):
    """Number of links among the neighbours of each node."""
    if USE_NUMBA:
        return _triangles_jit(indptr, indices, n)
    return _triangles_np(indptr, indices, n)


distance_sum_numba = _distance_sum_jit
distance_sum_numpy = _distance_sum_np
triangles_numba = _triangles_jit
triangles_numpy = _triangles_np
