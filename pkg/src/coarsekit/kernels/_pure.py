"""Pure-Python reference kernels (fallback for the Cython extension)."""

import heapq
from collections import deque

import numpy as np


def bfs_levels(indptr, indices, source, n):
    """Hop distance from ``source`` to every vertex; -1 where unreachable."""
    level = np.full(n, -1, dtype=np.int32)
    level[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        lu = level[u]
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if level[v] < 0:
                level[v] = lu + 1
                queue.append(v)
    return level


def dijkstra(indptr, indices, weights, source, n):
    """Weighted single-source distances.

    ``weights`` is aligned with ``indices`` (one entry per directed edge).
    Ties on the heap break by vertex index so repeated runs settle the same
    tentative distances in the same order.
    """
    dist = np.full(n, np.inf, dtype=np.float64)
    dist[source] = 0.0
    done = np.zeros(n, dtype=bool)
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if done[v]:
                continue
            nd = d + weights[k]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist
