# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels; mirrors kernels._pure exactly."""

import numpy as np

cimport numpy as cnp
from libcpp.queue cimport priority_queue
from libcpp.pair cimport pair

cnp.import_array()


def bfs_levels(cnp.int64_t[::1] indptr, cnp.int32_t[::1] indices, long source, long n):
    level_arr = np.full(n, -1, dtype=np.int32)
    cdef cnp.int32_t[::1] level = level_arr
    queue_arr = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] queue = queue_arr
    cdef long head = 0, tail = 0
    cdef long u, k, v, lu
    level[source] = 0
    queue[tail] = <cnp.int32_t> source
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        lu = level[u]
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if level[v] < 0:
                level[v] = <cnp.int32_t> (lu + 1)
                queue[tail] = <cnp.int32_t> v
                tail += 1
    return level_arr


def dijkstra(cnp.int64_t[::1] indptr, cnp.int32_t[::1] indices,
             cnp.float64_t[::1] weights, long source, long n):
    dist_arr = np.full(n, np.inf, dtype=np.float64)
    cdef cnp.float64_t[::1] dist = dist_arr
    done_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] done = done_arr
    # Max-heap of (-distance, -vertex): pops smallest distance, then
    # smallest vertex index, matching the pure-Python heap order.
    cdef priority_queue[pair[double, long]] heap
    cdef pair[double, long] top
    cdef long u, k, v
    cdef double d, nd
    dist[source] = 0.0
    heap.push(pair[double, long](0.0, -source))
    while not heap.empty():
        top = heap.top()
        heap.pop()
        d = -top.first
        u = -top.second
        if done[u]:
            continue
        done[u] = 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if done[v]:
                continue
            nd = d + weights[k]
            if nd < dist[v]:
                dist[v] = nd
                heap.push(pair[double, long](-nd, -v))
    return dist_arr
