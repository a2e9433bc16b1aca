"""Rescaled path metrics on graph truncations and their boundary charts.

A scaling function rescales every edge by its distance from a basepoint;
the rescaled shortest-path distance on a ball is a certified upper bound
for the limit metric, with an analytic tail bound quantifying what paths
outside the ball could still contribute.  Boundary points are approximated
by clusters of deep geodesic-ray anchors.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import CarrierMismatch, PreconditionError
from .graphs import Truncation, spread_rays, vertex_key


class FloydFunction:
    """A positive summable edge-scaling function with certified tail bounds.

    Built-in families: geometric ``lam**n``, power ``(1+n)**-a`` with a>1,
    and an explicit table with a geometric tail.  Each family carries a
    closed-form upper bound ``tail(R) >= sum_{n>=R} f(n)`` and the ratio
    bound k with ``1 <= f(n)/f(n+1) <= k``.
    """

    def __init__(self, kind, label, ratio_bound, is_floyd=True, **params):
        self.kind = kind
        self.label = label
        self.ratio_bound = ratio_bound
        self.is_floyd = is_floyd
        self.params = params

    # -- constructors -----------------------------------------------------

    @classmethod
    def geometric(cls, lam) -> "FloydFunction":
        lam = Fraction(lam)
        if not 0 < lam < 1:
            raise PreconditionError("geometric ratio must satisfy 0 < lam < 1")
        return cls("geometric", "geom:%s" % format(float(lam), "g"),
                   float(1 / lam), lam=lam)

    @classmethod
    def power(cls, a) -> "FloydFunction":
        a = float(a)
        if a <= 1:
            raise PreconditionError("power exponent must be > 1 for summability")
        return cls("power", "power:%s" % format(a, "g"), 2.0 ** a, a=a)

    @classmethod
    def table(cls, values, tail_ratio) -> "FloydFunction":
        values = [Fraction(v) for v in values]
        tail_ratio = Fraction(tail_ratio)
        if not values:
            raise PreconditionError("table needs at least one value")
        if not 0 < tail_ratio < 1:
            raise PreconditionError("tail ratio must satisfy 0 < ratio < 1")
        if any(v <= 0 for v in values):
            raise PreconditionError("table values must be positive")
        ratios = [values[i] / values[i + 1] for i in range(len(values) - 1)]
        ratios.append(values[-1] / (values[-1] * tail_ratio))
        if any(r < 1 for r in ratios):
            raise PreconditionError("table values must be non-increasing")
        k = max(max(ratios), 1 / tail_ratio)
        return cls("table", "table:%d" % len(values), float(k),
                   values=values, tail_ratio=tail_ratio)

    @classmethod
    def constant(cls, c=1.0) -> "FloydFunction":
        """Control chart: constant weights.  Not summable, flagged as such."""
        return cls("constant", "const:%s" % format(float(c), "g"), 1.0,
                   is_floyd=False, c=float(c))

    @classmethod
    def parse(cls, text) -> "FloydFunction":
        head, _, arg = text.partition(":")
        if head == "geom":
            return cls.geometric(Fraction(arg))
        if head == "power":
            return cls.power(float(arg))
        if head == "const":
            return cls.constant(float(arg) if arg else 1.0)
        if head == "table":
            *vals, ratio = arg.split(",")
            return cls.table([Fraction(v) for v in vals], Fraction(ratio))
        raise PreconditionError("unknown scaling function %r" % text)

    # -- evaluation --------------------------------------------------------

    def value(self, n: int) -> float:
        if self.kind == "geometric":
            return float(self.params["lam"]) ** n
        if self.kind == "power":
            return (1.0 + n) ** (-self.params["a"])
        if self.kind == "table":
            values = self.params["values"]
            if n < len(values):
                return float(values[n])
            return float(values[-1]) * float(self.params["tail_ratio"]) ** (
                n - len(values) + 1)
        return self.params["c"]

    def values_array(self, levels: np.ndarray) -> np.ndarray:
        if self.kind == "geometric":
            return float(self.params["lam"]) ** levels.astype(np.float64)
        if self.kind == "power":
            return (1.0 + levels.astype(np.float64)) ** (-self.params["a"])
        return np.array([self.value(int(n)) for n in levels], dtype=np.float64)

    @property
    def is_exact(self) -> bool:
        return self.kind in ("geometric", "table")

    def exact_value(self, n: int) -> Fraction:
        if self.kind == "geometric":
            return self.params["lam"] ** n
        if self.kind == "table":
            values = self.params["values"]
            if n < len(values):
                return values[n]
            return values[-1] * self.params["tail_ratio"] ** (n - len(values) + 1)
        raise PreconditionError("%s has no exact evaluation" % self.label)

    def tail(self, R: int) -> float:
        """Certified upper bound for the remaining series from index R."""
        if self.kind == "geometric":
            lam = self.params["lam"]
            return float(lam ** R / (1 - lam))
        if self.kind == "power":
            a = self.params["a"]
            if R <= 0:
                return 1.0 + 1.0 / (a - 1.0)
            return float(R) ** (1.0 - a) / (a - 1.0)
        if self.kind == "table":
            values = self.params["values"]
            lam = self.params["tail_ratio"]
            last = values[-1]
            m = len(values)
            if R >= m:
                return float(last * lam ** (R - m + 1) / (1 - lam))
            head = sum(values[R:], Fraction(0))
            return float(head + last * lam / (1 - lam))
        return float("inf")


class FloydChart:
    """Rescaled shortest-path distances on the ball of a given radius.

    Edge {a,b} is weighted by f(min(level(a), level(b))); distances are
    upper bounds for the limit metric with slack bounded by the tail.
    """

    def __init__(self, graph, func: FloydFunction, radius: int, center=None):
        if radius < 1:
            raise PreconditionError("chart radius must be at least 1")
        self.graph = graph
        self.func = func
        self.radius = radius
        self.trunc = Truncation(graph, radius, center)
        self.center = self.trunc.center
        counts = np.diff(self.trunc.indptr)
        src = np.repeat(np.arange(self.trunc.n), counts)
        min_levels = np.minimum(self.trunc.level[src],
                                self.trunc.level[self.trunc.indices])
        self.weights = func.values_array(min_levels)
        self.tail = func.tail(radius)
        self._cache: Dict[int, np.ndarray] = {}

    @property
    def is_floyd(self) -> bool:
        return self.func.is_floyd

    def distances_from(self, x) -> np.ndarray:
        i = self.trunc.require(x)
        got = self._cache.get(i)
        if got is None:
            got = self.trunc.weighted_distances_from(x, self.weights)
            self._cache[i] = got
        return got

    def distance(self, x, y) -> float:
        return float(self.distances_from(x)[self.trunc.require(y)])

    def diameter_of(self, points) -> float:
        pts = [p for p in points if self.trunc.contains(p)]
        if len(pts) < 2:
            return 0.0
        best = 0.0
        for p in pts:
            row = self.distances_from(p)
            for q in pts:
                d = float(row[self.trunc.index[q]])
                if d > best:
                    best = d
        return best

    def separation_report(self, e, radii=None) -> Dict[str, object]:
        """Boundary-separation check for an entourage against this chart.

        Deep pairs of the entourage must shrink in the rescaled metric
        (their boundary limits can then only meet on the diagonal).  The
        report carries the defect table across the radius schedule, the
        two condition readings, and whether they agree.
        """
        pairs = _as_pairs(e)
        if radii is None:
            hi = max(2, self.radius - 2)
            radii = sorted({max(1, hi // 4), max(1, hi // 2), hi})
        defects = {}
        for r in radii:
            defects[r] = perspectivity_defect(self, pairs, r)
        seen = [defects[r] for r in sorted(defects) if defects[r] is not None]
        if not seen:
            return {"radii": list(radii), "defects": defects,
                    "shrinking": True, "limit_diagonal": True,
                    "equivalent": True, "vacuous": True}
        scale = 4.0 * self.func.tail(max(radii)) if self.is_floyd else 0.0
        monotone = all(b <= a + 1e-12 for a, b in zip(seen, seen[1:]))
        limit_diagonal = seen[-1] <= scale + 1e-12
        shrinking = monotone and (seen[-1] < seen[0] - 1e-15 or limit_diagonal)
        return {"radii": list(radii), "defects": defects,
                "shrinking": shrinking, "limit_diagonal": limit_diagonal,
                "equivalent": shrinking == limit_diagonal, "vacuous": False}


def constant_chart(graph, radius: int, center=None) -> FloydChart:
    """Unit-weight control chart (graph metric; no boundary shrinking)."""
    return FloydChart(graph, FloydFunction.constant(1.0), radius, center)


def floyd_distance(graph, func: FloydFunction, x, y, R: int,
                   center=None) -> Tuple[float, float]:
    """Rescaled distance within ball(center, R) plus the certified tail."""
    chart = FloydChart(graph, func, R, center)
    return chart.distance(x, y), chart.tail


def refine_radius(graph, func: FloydFunction, x, y, tol: float,
                  start_radius: Optional[int] = None, max_rounds: int = 12,
                  node_budget: int = 200000, center=None) -> Dict[str, object]:
    """Double the chart radius until the value stabilises within tol.

    Stable means both |value(R) - value(2R)| < tol and tail(R) < tol; the
    certified bracket for the limit is [value - slack, value].
    """
    if tol <= 0:
        raise PreconditionError("tolerance must be positive")
    if not func.is_floyd:
        raise PreconditionError("%s is not summable; no tail certificate"
                                % func.label)
    root = graph.root if center is None else center
    R = start_radius if start_radius else 2
    while True:
        probe = Truncation(graph, R, root)
        if probe.contains(x) and probe.contains(y):
            break
        R *= 2
        if R > 2 ** 20:
            raise CarrierMismatch("vertices unreachable from the center")
    history: List[Tuple[int, float]] = []
    value = FloydChart(graph, func, R, root).distance(x, y)
    history.append((R, value))
    for _ in range(max_rounds):
        chart = FloydChart(graph, func, 2 * R, root)
        value2 = chart.distance(x, y)
        history.append((2 * R, value2))
        gap = abs(value - value2)
        if gap < tol and func.tail(R) < tol:
            return {"value": value2, "radius": 2 * R, "stable": True,
                    "history": history, "slack": gap + func.tail(R),
                    "tail": func.tail(2 * R)}
        R, value = 2 * R, value2
        next_size = _ball_size_estimate(graph, 2 * R)
        if next_size > node_budget:
            break
    return {"value": value, "radius": R, "stable": False,
            "history": history[-2:], "slack": None, "tail": func.tail(R)}


def _ball_size_estimate(graph, radius):
    # degree-bounded overestimate; only used to stop runaway doubling
    deg = max(1, len(graph.neighbors(graph.root)))
    if deg <= 2:
        return deg * radius + 1
    return deg * (deg - 1) ** (radius - 1)


def karlsson_defect(graph, func: FloydFunction, R: int,
                    chart_radius: Optional[int] = None, pair_budget: int = 24,
                    center=None) -> float:
    """Largest rescaled distance over sampled geodesic pairs avoiding ball(v,R).

    A pair (p,q) qualifies when some graph geodesic between them stays at
    level >= R; its endpoints' rescaled distance (computed on the full
    chart, light detours included) is the smallness measure.
    """
    if chart_radius is None:
        chart_radius = R + 6
    if chart_radius <= R:
        raise PreconditionError("chart radius must exceed the avoided ball")
    chart = FloydChart(graph, func, chart_radius, center)
    trunc = chart.trunc
    shell = [v for v in trunc.shell_vertices(R, min(R + 2, chart_radius - 1))]
    if len(shell) > pair_budget:
        picks = np.linspace(0, len(shell) - 1, pair_budget).astype(int)
        shell = [shell[i] for i in sorted(set(picks.tolist()))]
    best = None
    for p in shell:
        avoid = trunc.distances_avoiding(p, R)
        full = trunc.hop_distances_from(p)
        row = None
        for q in shell:
            j = trunc.index[q]
            if avoid[j] < 0 or avoid[j] != full[j]:
                continue
            if row is None:
                row = chart.distances_from(p)
            d = float(row[j])
            if best is None or d > best:
                best = d
    if best is None:
        raise PreconditionError(
            "no geodesic pairs avoid ball(%r, %d) inside the chart"
            % (trunc.center, R))
    return best


@dataclass
class BoundaryCluster:
    cluster_id: str
    ray_ids: Tuple[int, ...]
    rays: Tuple[Tuple, ...]
    anchors: Tuple
    depth: int
    threshold: float
    internal_diameter: float
    separation: float

    def to_json(self):
        return {
            "cluster_id": self.cluster_id,
            "ray_ids": list(self.ray_ids),
            "rays": [[str(v) for v in ray] for ray in self.rays],
            "internal_diameter": self.internal_diameter,
            "separation": self.separation,
            "depth": self.depth,
            "threshold": self.threshold,
        }


def boundary_clusters(chart: FloydChart, rays: Sequence[Tuple],
                      depth: Optional[int] = None,
                      threshold: Optional[float] = None) -> List[BoundaryCluster]:
    """Single-linkage clustering of ray anchors at the given depth.

    Rays must be geodesic prefixes from the chart center reaching at least
    the anchor depth.  Default threshold is four times the certified tail,
    so the resolution scales with the chart.
    """
    if not rays:
        raise PreconditionError("at least one ray is required")
    if depth is None:
        depth = min(len(r) - 1 for r in rays)
    if depth < 1:
        raise PreconditionError("cluster depth must be at least 1")
    if threshold is None:
        threshold = 4.0 * chart.func.tail(depth)
    if not (threshold > 0) or not np.isfinite(threshold):
        raise PreconditionError("merge threshold must be positive and finite")
    trunc = chart.trunc
    for ray in rays:
        if len(ray) - 1 < depth:
            raise PreconditionError("ray %r shorter than depth %d" % (ray, depth))
        if ray[0] != chart.center:
            raise PreconditionError("rays must start at the chart center")
        for k in (0, depth):
            if trunc.level[trunc.require(ray[k])] != k:
                raise PreconditionError("ray is not a geodesic prefix")
    anchors = [ray[depth] for ray in rays]
    parent = list(range(len(rays)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    rows = {a: chart.distances_from(a) for a in anchors}

    def delta(i, j):
        return float(rows[anchors[i]][trunc.index[anchors[j]]])

    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            if delta(i, j) <= threshold:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: Dict[int, List[int]] = {}
    for i in range(len(rays)):
        groups.setdefault(find(i), []).append(i)
    ordered = sorted(groups.values(), key=lambda g: g[0])
    clusters = []
    for num, members in enumerate(ordered):
        internal = max((delta(i, j) for i in members for j in members),
                       default=0.0)
        outside = [i for i in range(len(rays)) if i not in members]
        separation = min((delta(i, j) for i in members for j in outside),
                         default=float("inf"))
        clusters.append(BoundaryCluster(
            cluster_id="c%02d" % num,
            ray_ids=tuple(members),
            rays=tuple(rays[i] for i in members),
            anchors=tuple(anchors[i] for i in members),
            depth=depth,
            threshold=threshold,
            internal_diameter=internal,
            separation=separation,
        ))
    return clusters


class GraphCompactification:
    """A chart plus boundary clusters plus the adherence rule.

    ``assign(A)`` returns the ids of clusters adherent to the vertex set A:
    those whose anchors come within the attach threshold of some point of
    A at anchor depth or deeper.  Monotone in A; empty for sets with no
    deep points.
    """

    def __init__(self, chart: FloydChart, clusters: List[BoundaryCluster],
                 depth: int, attach_threshold: Optional[float] = None):
        self.chart = chart
        self.clusters = clusters
        self.depth = depth
        if attach_threshold is None:
            attach_threshold = clusters[0].threshold if clusters else 0.0
        self.attach_threshold = attach_threshold

    @classmethod
    def build(cls, chart: FloydChart, depth: Optional[int] = None,
              ray_count: int = 8, threshold: Optional[float] = None,
              ray_budget: int = 4096) -> "GraphCompactification":
        if depth is None:
            depth = max(1, chart.radius - 2)
        rays = spread_rays(chart.trunc, chart.center, depth, ray_count,
                           ray_budget)
        if not rays:
            raise PreconditionError("no geodesic rays of length %d" % depth)
        clusters = boundary_clusters(chart, rays, depth, threshold)
        return cls(chart, clusters, depth)

    def cluster_ids(self) -> Tuple[str, ...]:
        return tuple(c.cluster_id for c in self.clusters)

    def assign(self, points) -> Tuple[str, ...]:
        trunc = self.chart.trunc
        deep = [trunc.index[p] for p in points
                if trunc.contains(p) and trunc.level[trunc.index[p]] >= self.depth]
        if not deep:
            return ()
        out = []
        for cluster in self.clusters:
            hit = False
            for anchor in cluster.anchors:
                row = self.chart.distances_from(anchor)
                if min(float(row[i]) for i in deep) <= self.attach_threshold:
                    hit = True
                    break
            if hit:
                out.append(cluster.cluster_id)
        return tuple(out)

    def is_unbounded_at_scale(self, points) -> bool:
        trunc = self.chart.trunc
        return any(trunc.contains(p)
                   and trunc.level[trunc.index[p]] >= self.depth
                   for p in points)


def compactness_criterion(comp: GraphCompactification,
                          samples: Sequence[Sequence]) -> bool:
    """Every sampled unbounded set must be adherent to some boundary cluster."""
    for A in samples:
        if comp.is_unbounded_at_scale(A) and not comp.assign(A):
            return False
    return True


def _as_pairs(e):
    if hasattr(e, "pairs"):
        return e.pairs()
    return list(e)


def width_pairs(trunc: Truncation, w: int, min_level: int = 0) -> List[Tuple]:
    """All vertex pairs at graph distance <= w, both at level >= min_level."""
    out = []
    for i, p in enumerate(trunc.vertices):
        if trunc.level[i] < min_level:
            continue
        reach = {i: 0}
        frontier = [i]
        for _ in range(w):
            nxt = []
            for u in frontier:
                for k in range(trunc.indptr[u], trunc.indptr[u + 1]):
                    v = int(trunc.indices[k])
                    if v not in reach:
                        reach[v] = reach[u] + 1
                        nxt.append(v)
            frontier = nxt
        for j in reach:
            if trunc.level[j] >= min_level:
                out.append((p, trunc.vertices[j]))
    return out


def perspectivity_defect(chart: FloydChart, e, R: int,
                         pair_cap: int = 4000,
                         source_cap: int = 80) -> Optional[float]:
    """Sup of rescaled distances over entourage pairs at level >= R.

    Pairs are taken shallowest-first (the sup of a depth-decaying chart
    lives at the shallowest qualifying level), capped for budget.  Returns
    None when no pair qualifies (nothing to measure at this radius).
    """
    trunc = chart.trunc
    qualifying = []
    for (p, q) in _as_pairs(e):
        if not (trunc.contains(p) and trunc.contains(q)):
            continue
        lp = trunc.level[trunc.index[p]]
        lq = trunc.level[trunc.index[q]]
        if min(lp, lq) >= R:
            qualifying.append((min(lp, lq), vertex_key(p), vertex_key(q), p, q))
    if not qualifying:
        return None
    qualifying.sort(key=lambda t: t[:3])
    qualifying = qualifying[:pair_cap]
    sources = []
    defect = 0.0
    for _, _, _, p, q in qualifying:
        if p not in sources:
            if len(sources) >= source_cap:
                continue
            sources.append(p)
        row = chart.distances_from(p)
        d = float(row[trunc.index[q]])
        if d > defect:
            defect = d
    return defect


def closesameboundary_check(comp: GraphCompactification, A, B, e,
                            strict: bool = True) -> bool:
    """If A is inside the e-neighborhood of B, A's clusters are among B's."""
    pairs = _as_pairs(e)
    partners = {}
    for (p, q) in pairs:
        partners.setdefault(p, set()).add(q)
    trunc = comp.chart.trunc
    bset = set(B)
    for a in A:
        if not trunc.contains(a):
            continue
        if not partners.get(a, set()) & bset:
            if strict:
                raise PreconditionError(
                    "%r has no e-partner in B; A is not in the e-neighborhood"
                    % (a,))
            return False
    return set(comp.assign(A)) <= set(comp.assign(B))


class affine_alpha:
    """Non-decreasing integer reparametrisation n -> (mul*n + add) // div."""

    def __init__(self, mul: int, div: int = 1, add: int = 0):
        if mul < 0 or div < 1:
            raise PreconditionError("affine map must be non-decreasing")
        if (mul * 0 + add) // div < 0:
            raise PreconditionError("affine map must stay non-negative")
        self.mul, self.div, self.add = mul, div, add

    def __call__(self, n: int) -> int:
        return (self.mul * n + self.add) // self.div

    @property
    def label(self):
        return "(%d*n+%d)//%d" % (self.mul, self.add, self.div)


def _one_sided_analytic(f_top: FloydFunction, f_bot: FloydFunction,
                        alpha, D) -> Optional[bool]:
    """Exact all-n verdict for f_top(n) <= D * f_bot(alpha(n)), when available.

    Supported for geometric pairs with an affine alpha: splitting n by
    residue class modulo the divisor makes each class a geometric sequence,
    bounded for all n exactly when its step ratio is <= 1 and its first
    term is within D.
    """
    if not (isinstance(alpha, affine_alpha)
            and f_top.kind == "geometric" and f_bot.kind == "geometric"):
        return None
    lam_top = f_top.params["lam"]
    lam_bot = f_bot.params["lam"]
    D = Fraction(D)
    step_ok = lam_top ** alpha.div <= lam_bot ** alpha.mul
    if not step_ok:
        return False
    for r in range(alpha.div):
        c_r = (alpha.mul * r + alpha.add) // alpha.div
        if lam_top ** r > D * lam_bot ** c_r:
            return False
    return True


def qi_condition_check(alpha, f1: FloydFunction, f2: FloydFunction,
                       D, n_max: int = 64) -> Dict[str, object]:
    """Ratio conditions coupling two scaling functions through alpha.

    forward: f2(n) <= D * f1(alpha(n)) for all n (extension direction);
    backward: f1(n) <= D * f2(alpha(n)).  Both are checked numerically up
    to n_max, and exactly for all n when the analytic fast path applies.
    One-sided passing supports boundary-map extension; two-sided passing
    supports a boundary homeomorphism.
    """
    if n_max < 1:
        raise PreconditionError("n_max must be positive")
    values = [alpha(n) for n in range(n_max + 1)]
    if any(b < a for a, b in zip(values, values[1:])) or values[0] < 0:
        raise PreconditionError("alpha must be non-decreasing and non-negative")

    def holds(f_top, f_bot):
        if f_top.is_exact and f_bot.is_exact:
            DD = Fraction(D)
            return all(f_top.exact_value(n) <= DD * f_bot.exact_value(alpha(n))
                       for n in range(n_max + 1))
        return all(f_top.value(n) <= float(D) * f_bot.value(alpha(n))
                   for n in range(n_max + 1))

    forward = holds(f2, f1)
    backward = holds(f1, f2)
    forward_analytic = _one_sided_analytic(f2, f1, alpha, D)
    backward_analytic = _one_sided_analytic(f1, f2, alpha, D)
    fwd = forward if forward_analytic is None else (forward and forward_analytic)
    bwd = backward if backward_analytic is None else (backward and backward_analytic)
    if fwd and bwd:
        verdict = "homeomorphism"
    elif fwd:
        verdict = "extension"
    else:
        verdict = "none"
    return {
        "forward": forward, "backward": backward,
        "forward_analytic": forward_analytic,
        "backward_analytic": backward_analytic,
        "D": float(D), "n_max": n_max, "verdict": verdict,
    }


def induced_boundary_map(pi, comp_target: GraphCompactification,
                         comp_source: GraphCompactification,
                         quasi_inverse=None) -> Dict[str, object]:
    """Transport source-chart clusters through a vertex map pi.

    Each source cluster's rays are mapped through pi; the image's cluster
    assignment in the target compactification must be a single cluster.
    With a quasi-inverse the reverse transport must invert the mapping.
    """
    mapping = {}
    failures = []
    for cluster in comp_source.clusters:
        image = [pi(v) for ray in cluster.rays for v in ray]
        assigned = comp_target.assign(image)
        if len(assigned) == 1:
            mapping[cluster.cluster_id] = assigned[0]
        else:
            failures.append({"cluster": cluster.cluster_id,
                             "assigned": list(assigned),
                             "rays": [[str(v) for v in r] for r in cluster.rays]})
    verdict = {
        "total": not failures,
        "injective": len(set(mapping.values())) == len(mapping),
        "surjective": set(mapping.values()) == set(comp_target.cluster_ids()),
    }
    if quasi_inverse is not None:
        reverse = induced_boundary_map(quasi_inverse, comp_source, comp_target)
        back = reverse["mapping"]
        round_trip = all(back.get(c1) == c2 for c2, c1 in mapping.items())
        verdict["inverse_induced"] = (reverse["verdict"]["total"] and round_trip)
    verdict["bijective"] = (verdict["total"] and verdict["injective"]
                            and verdict["surjective"])
    return {"mapping": mapping, "failures": failures, "verdict": verdict}


def hyperbolic_to_floyd_projection(ray_classes,
                                   comp: GraphCompactification) -> Dict[str, object]:
    """Project ray classes onto boundary clusters; report the surjection.

    Every cluster must be hit, and all rays of one class must land in one
    cluster (otherwise the class is reported as split with witness rays).
    """
    class_to_cluster = {}
    split = []
    for idx, rc in enumerate(ray_classes):
        hits = set()
        for ray in rc.rays:
            hits.update(comp.assign(ray))
        if len(hits) == 1:
            class_to_cluster[idx] = next(iter(hits))
        else:
            split.append({"class": idx, "clusters": sorted(hits),
                          "rays": [[str(v) for v in r] for r in rc.rays]})
    hit = set(class_to_cluster.values())
    unhit = [c for c in comp.cluster_ids() if c not in hit]
    return {
        "class_to_cluster": class_to_cluster,
        "split": split,
        "unhit": unhit,
        "well_defined": not split,
        "surjective": not unhit,
    }
