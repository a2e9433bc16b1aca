"""Locally finite graphs and their finite truncations.

A graph is given by a root vertex and a neighbor oracle; nothing global is
ever materialised.  A :class:`Truncation` is the ball around a center
vertex, stored in CSR form so the kernels can run breadth-first and
weighted searches over it.  Vertex order inside a truncation is level by
level with a canonical sort inside each level, which makes every derived
artifact reproducible.
"""

from collections import deque

import numpy as np

from .errors import CarrierMismatch, InvalidSpace, PreconditionError
from . import kernels


def vertex_key(v):
    """Canonical sort key that works for ints, strings and nested tuples."""
    if isinstance(v, bool):
        return (0, int(v), "")
    if isinstance(v, int):
        return (0, v, "")
    if isinstance(v, tuple):
        return (1, tuple(vertex_key(x) for x in v), "")
    return (2, 0, str(v))


class Graph:
    """A locally finite graph: a root plus a neighbor oracle."""

    def __init__(self, name, root, neighbor_fn):
        self.name = name
        self.root = root
        self._neighbor_fn = neighbor_fn
        self._cache = {}

    def neighbors(self, v):
        got = self._cache.get(v)
        if got is None:
            got = tuple(sorted(self._neighbor_fn(v), key=vertex_key))
            self._cache[v] = got
        return got

    def __repr__(self):
        return "Graph(%s)" % self.name


def line_graph(step=1):
    """The integer line; with ``step=2`` the even integers 2Z."""
    if step < 1:
        raise PreconditionError("step must be a positive integer")

    def nbrs(v):
        return (v - step, v + step)

    name = "line" if step == 1 else "line-step%d" % step
    return Graph(name, 0, nbrs)


def grid_graph():
    """The square lattice Z^2."""

    def nbrs(v):
        i, j = v
        return ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1))

    return Graph("grid", (0, 0), nbrs)


def regular_tree(k=3):
    """The k-regular tree.

    Vertices are words over {0..k-1} with no letter repeated twice in a
    row (each letter acts as an involution), so the root has k neighbors
    and every other vertex has k-1 children plus its parent.
    """
    if k < 2:
        raise PreconditionError("tree degree must be at least 2")

    def nbrs(v):
        out = []
        for a in range(k):
            if v and v[-1] == a:
                out.append(v[:-1])
            else:
                out.append(v + (a,))
        return out

    return Graph("tree%d" % k, (), nbrs)


def cycle_graph(n=8):
    if n < 3:
        raise PreconditionError("cycle needs at least 3 vertices")

    def nbrs(v):
        return ((v - 1) % n, (v + 1) % n)

    return Graph("cycle%d" % n, 0, nbrs)


def graph_from_file(path):
    """Adjacency-list text file, one vertex per line: ``id: n1 n2 ...``."""
    adjacency = {}
    order = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if ":" not in line:
                raise InvalidSpace("bad adjacency line: %r" % line)
            head, _, rest = line.partition(":")
            vid = head.strip()
            nbrs = rest.split()
            if vid not in adjacency:
                adjacency[vid] = set()
                order.append(vid)
            adjacency[vid].update(nbrs)
    if not order:
        raise InvalidSpace("graph file is empty")
    known = set(order)
    for vid, nbrs in list(adjacency.items()):
        for w in nbrs:
            adjacency.setdefault(w, set()).add(vid)
            if w not in known:
                known.add(w)
                order.append(w)

    def nbr_fn(v):
        if v not in adjacency:
            raise CarrierMismatch("unknown vertex %r" % (v,))
        return tuple(adjacency[v])

    return Graph("file", order[0], nbr_fn)


def build_graph(spec):
    """Parse a graph description like ``line``, ``tree:3`` or ``file:p.txt``."""
    head, _, arg = spec.partition(":")
    if head == "line":
        return line_graph(int(arg) if arg else 1)
    if head == "grid":
        return grid_graph()
    if head == "tree":
        return regular_tree(int(arg) if arg else 3)
    if head == "cycle":
        return cycle_graph(int(arg) if arg else 8)
    if head == "file":
        if not arg:
            raise PreconditionError("file graph needs a path: file:PATH")
        return graph_from_file(arg)
    raise PreconditionError("unknown graph kind %r" % head)


class Truncation:
    """The ball of a given radius around a center vertex, in CSR form.

    ``level[i]`` is the graph distance from the center to ``vertices[i]``;
    vertices are ordered by level, canonically sorted within each level.
    """

    def __init__(self, graph, radius, center=None):
        if radius < 0:
            raise PreconditionError("radius must be non-negative")
        self.graph = graph
        self.center = graph.root if center is None else center
        self.radius = radius
        levels = {self.center: 0}
        ordered = [self.center]
        frontier = [self.center]
        for depth in range(1, radius + 1):
            found = set()
            for u in frontier:
                for w in graph.neighbors(u):
                    if w not in levels and w not in found:
                        found.add(w)
            frontier = sorted(found, key=vertex_key)
            for w in frontier:
                levels[w] = depth
            ordered.extend(frontier)
            if not frontier:
                break
        self.vertices = tuple(ordered)
        self.index = {v: i for i, v in enumerate(ordered)}
        self.n = len(ordered)
        self.level = np.array([levels[v] for v in ordered], dtype=np.int32)
        indptr = [0]
        indices = []
        for v in ordered:
            for w in graph.neighbors(v):
                j = self.index.get(w)
                if j is not None:
                    indices.append(j)
            indptr.append(len(indices))
        self.indptr = np.array(indptr, dtype=np.int64)
        self.indices = np.array(indices, dtype=np.int32)
        self._hop_cache = {}

    def contains(self, v):
        return v in self.index

    def require(self, v):
        i = self.index.get(v)
        if i is None:
            raise CarrierMismatch("vertex %r is outside ball(%r, %d)"
                                  % (v, self.center, self.radius))
        return i

    def ball_vertices(self, r):
        """Vertices within distance r of the center (a prefix of the order)."""
        cut = int(np.searchsorted(self.level, r + 1))
        return self.vertices[:cut]

    def shell_vertices(self, r_min, r_max=None):
        hi = self.radius if r_max is None else r_max
        return tuple(v for i, v in enumerate(self.vertices)
                     if r_min <= self.level[i] <= hi)

    def hop_distances_from(self, v):
        """Graph distances from v within the truncation (-1 = unreachable)."""
        i = self.require(v)
        got = self._hop_cache.get(i)
        if got is None:
            got = kernels.bfs_levels(self.indptr, self.indices, i, self.n)
            self._hop_cache[i] = got
        return got

    def distance(self, x, y):
        return int(self.hop_distances_from(x)[self.require(y)])

    def weighted_distances_from(self, v, weights):
        i = self.require(v)
        return kernels.dijkstra(self.indptr, self.indices, weights, i, self.n)

    def set_distances(self, pts):
        """Hop distance from the vertex set ``pts`` (multi-source BFS)."""
        dist = np.full(self.n, -1, dtype=np.int32)
        queue = deque()
        for p in pts:
            i = self.require(p)
            if dist[i] < 0:
                dist[i] = 0
                queue.append(i)
        while queue:
            u = queue.popleft()
            for k in range(self.indptr[u], self.indptr[u + 1]):
                w = self.indices[k]
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def distances_avoiding(self, source, min_level):
        """BFS distances from ``source`` using only vertices at level >= min_level."""
        i = self.require(source)
        dist = np.full(self.n, -1, dtype=np.int32)
        if self.level[i] < min_level:
            return dist
        dist[i] = 0
        queue = deque([i])
        while queue:
            u = queue.popleft()
            for k in range(self.indptr[u], self.indptr[u + 1]):
                w = self.indices[k]
                if dist[w] < 0 and self.level[w] >= min_level:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def directed_edges(self):
        """Yield (i, k, j): source index, CSR slot, target index."""
        for i in range(self.n):
            for k in range(self.indptr[i], self.indptr[i + 1]):
                yield i, k, int(self.indices[k])


def geodesic_rays(trunc, p, length, budget=4096):
    """Geodesic segments of the given length starting at p.

    Each returned tuple (v_0 .. v_length) satisfies d(p, v_k) = k inside
    the truncation.  Depth-first order with canonically sorted branching,
    truncated at ``budget`` rays.
    """
    if length < 0:
        raise PreconditionError("ray length must be non-negative")
    dist = trunc.hop_distances_from(p)
    out = []
    stack = [(p,)]
    while stack and len(out) < budget:
        path = stack.pop()
        k = len(path) - 1
        if k == length:
            out.append(path)
            continue
        here = trunc.index[path[-1]]
        nxt = []
        for slot in range(trunc.indptr[here], trunc.indptr[here + 1]):
            j = int(trunc.indices[slot])
            if dist[j] == k + 1:
                nxt.append(trunc.vertices[j])
        for w in sorted(nxt, key=vertex_key, reverse=True):
            stack.append(path + (w,))
    return out


def spread_rays(trunc, p, length, count, budget=4096):
    """A subset of geodesic rays chosen greedily to maximise endpoint spread.

    Depth-first enumeration visits sibling rays consecutively, which makes
    naive prefixes cluster together; the greedy max-min pick keeps rays
    that diverge as early as possible.
    """
    rays = geodesic_rays(trunc, p, length, budget)
    if not rays or count <= 0:
        return []
    chosen = [rays[0]]
    chosen_dists = [trunc.hop_distances_from(rays[0][-1])]
    while len(chosen) < min(count, len(rays)):
        best = None
        best_gap = -1
        for ray in rays:
            if ray in chosen:
                continue
            j = trunc.index[ray[-1]]
            gap = min(int(d[j]) for d in chosen_dists)
            if gap > best_gap:
                best_gap = gap
                best = ray
        if best is None or best_gap <= 0:
            break
        chosen.append(best)
        chosen_dists.append(trunc.hop_distances_from(best[-1]))
    return chosen
