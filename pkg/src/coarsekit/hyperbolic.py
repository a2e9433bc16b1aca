"""Gromov products, four-point hyperbolicity estimates, geodesic-ray
boundaries with Hausdorff-distance classes, accessibility of boundary
clusters from a basepoint, and quasi-isometric ray transport.

All distances are hop counts inside a fixed truncation; rays are finite
geodesic prefixes, so every boundary statement is asserted at an explicit
working length that appears in the report.
"""

import itertools
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import PreconditionError
from .floyd import GraphCompactification
from .graphs import Truncation, geodesic_rays, vertex_key


class RaySegment:
    """A path from a basepoint, flagged geodesic when d(base, v_k) = k."""

    def __init__(self, vertices: Sequence, trunc: Truncation):
        self.vertices = tuple(vertices)
        if not self.vertices:
            raise PreconditionError("a ray needs at least its basepoint")
        self.base = self.vertices[0]
        self.length = len(self.vertices) - 1
        hops = trunc.hop_distances_from(self.base)
        self.geodesic = True
        prev = None
        for k, v in enumerate(self.vertices):
            i = trunc.require(v)
            if prev is not None and v not in trunc.graph.neighbors(prev):
                raise PreconditionError(
                    "ray vertices %r -> %r are not adjacent" % (prev, v))
            if int(hops[i]) != k:
                self.geodesic = False
            prev = v

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def __getitem__(self, k):
        return self.vertices[k]

    def __repr__(self):
        return "RaySegment(%r..%r, length=%d, geodesic=%s)" % (
            self.base, self.vertices[-1], self.length, self.geodesic)

    def to_json(self):
        return {"vertices": [str(v) for v in self.vertices],
                "length": self.length, "geodesic": self.geodesic}


def gromov_product(trunc: Truncation, x, y, p) -> float:
    """Half of d(x,p) + d(y,p) - d(x,y); how long geodesics from p to x
    and to y travel together."""
    dxp = trunc.distance(x, p)
    dyp = trunc.distance(y, p)
    dxy = trunc.distance(x, y)
    if min(dxp, dyp, dxy) < 0:
        raise PreconditionError("points are not connected in the truncation")
    return 0.5 * (dxp + dyp - dxy)


def _quadruple_defect(d, a, b, c, e) -> float:
    s1 = d[a][b] + d[c][e]
    s2 = d[a][c] + d[b][e]
    s3 = d[a][e] + d[b][c]
    hi, mid, _ = sorted((s1, s2, s3), reverse=True)
    return (hi - mid) / 2.0


def delta_estimate(trunc: Truncation, quadruples=None,
                   cap: int = 200000) -> float:
    """Max four-point defect over the sampled quadruples.

    Without an explicit sample, all vertex quadruples are scanned when
    their count fits the cap, otherwise an evenly strided vertex subset
    of the largest admissible size is used.
    """
    verts = list(trunc.vertices)
    if quadruples is None:
        n = len(verts)
        m = n
        while m > 4 and (m * (m - 1) * (m - 2) * (m - 3)) // 24 > cap:
            m -= 1
        if m < n:
            idx = [round(i * (n - 1) / (m - 1)) for i in range(m)]
            verts = [verts[i] for i in sorted(set(idx))]
        if len(verts) < 4:
            return 0.0
        quadruples = itertools.combinations(verts, 4)
    dist: Dict = {}

    def row(v):
        got = dist.get(v)
        if got is None:
            hops = trunc.hop_distances_from(v)
            got = {w: int(hops[trunc.index[w]]) for w in trunc.vertices}
            dist[v] = got
        return got

    best = 0.0
    for a, b, c, e in quadruples:
        d = {v: row(v) for v in (a, b, c, e)}
        if min(d[a][b], d[a][c], d[a][e], d[b][c], d[b][e], d[c][e]) < 0:
            raise PreconditionError("quadruple spans disconnected vertices")
        defect = _quadruple_defect(d, a, b, c, e)
        if defect > best:
            best = defect
    return best


def rays_from(trunc: Truncation, p, length: int,
              budget: int = 4096) -> List[RaySegment]:
    """All geodesic segments of the given length from p, in canonical
    depth-first order, truncated at the budget."""
    return [RaySegment(t, trunc)
            for t in geodesic_rays(trunc, p, length, budget)]


def ray_hausdorff(trunc: Truncation, r1, r2) -> int:
    """Hop Hausdorff distance between the two vertex images."""
    pts1 = list(r1)
    pts2 = list(r2)
    d2 = trunc.set_distances(pts2)
    d1 = trunc.set_distances(pts1)
    h1 = max(int(d2[trunc.require(v)]) for v in pts1)
    h2 = max(int(d1[trunc.require(v)]) for v in pts2)
    if h1 < 0 or h2 < 0:
        raise PreconditionError("rays are not connected in the truncation")
    return max(h1, h2)


def ray_equivalence(trunc: Truncation, r1, r2, bound: float) -> bool:
    return ray_hausdorff(trunc, r1, r2) <= bound


class RayClass:
    """Rays whose images stay at small mutual Hausdorff distance.

    ``bound`` is the realized maximum over pairs in the class (merging is
    transitive, so it can exceed the requested grouping bound on graphs
    where divergence is not tree-like).
    """

    def __init__(self, rays: List[RaySegment], bound: float):
        self.rays = list(rays)
        self.bound = bound

    def __repr__(self):
        return "RayClass(%d rays, bound=%s)" % (len(self.rays), self.bound)


def ray_classes(trunc: Truncation, rays: Sequence[RaySegment],
                bound: float) -> List[RayClass]:
    """Group rays by Hausdorff distance <= bound (transitive closure)."""
    rays = list(rays)
    n = len(rays)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    pair_h = {}
    for i in range(n):
        for j in range(i + 1, n):
            pair_h[i, j] = ray_hausdorff(trunc, rays[i], rays[j])
            if pair_h[i, j] <= bound:
                parent[find(i)] = find(j)
    groups: Dict[int, List[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = []
    for members in sorted(groups.values(), key=lambda ms: ms[0]):
        realized = 0
        for i, j in itertools.combinations(members, 2):
            realized = max(realized, pair_h[i, j])
        out.append(RayClass([rays[i] for i in members], realized))
    return out


class AccessibilityWitness:
    """One boundary cluster together with a ray whose tail is assigned
    exactly that cluster."""

    def __init__(self, cluster_id: str, ray: RaySegment, assignment: Tuple):
        self.cluster_id = cluster_id
        self.ray = ray
        self.assignment = tuple(assignment)

    def to_json(self):
        return {"cluster": self.cluster_id, "ray": self.ray.to_json(),
                "assignment": list(self.assignment)}


def accessibility_witnesses(comp: GraphCompactification, p, length: int,
                            ray_budget: int = 4096):
    """Search geodesic rays from p for one per boundary cluster whose tail
    assignment is that singleton cluster.

    Rays assigned no cluster at all are counted (they point past the
    chart's cluster resolution) but only multi-cluster assignments refute
    the singleton condition.  A saturated ray budget with missing clusters
    is flagged inconclusive rather than failed.
    """
    trunc = comp.chart.trunc
    trunc.require(p)
    rays = rays_from(trunc, p, length, ray_budget)
    witnesses: Dict[str, AccessibilityWitness] = {}
    multi = []
    unassigned = 0
    for ray in rays:
        assignment = comp.assign(ray.vertices)
        if len(assignment) == 1:
            cid = assignment[0]
            if cid not in witnesses:
                witnesses[cid] = AccessibilityWitness(cid, ray, assignment)
        elif len(assignment) > 1:
            multi.append({"ray": ray.to_json(),
                          "assignment": list(assignment)})
        else:
            unassigned += 1
    missing = [c for c in comp.cluster_ids() if c not in witnesses]
    budget_saturated = len(rays) >= ray_budget
    verdict = {
        "clusters": list(comp.cluster_ids()),
        "witnessed": sorted(witnesses),
        "missing_clusters": missing,
        "multi_assigned": multi,
        "unassigned_rays": unassigned,
        "rays_scanned": len(rays),
        "fully_accessible": not missing and not multi,
        "inconclusive": bool(missing) and budget_saturated,
    }
    return list(witnesses.values()), verdict


def basepoint_change_check(comp: GraphCompactification, p, q,
                           length: int, ray_budget: int = 4096) -> bool:
    """Full accessibility from both basepoints, witnessing the same
    cluster set."""
    _, vp = accessibility_witnesses(comp, p, length, ray_budget)
    _, vq = accessibility_witnesses(comp, q, length, ray_budget)
    return (vp["fully_accessible"] and vq["fully_accessible"]
            and vp["witnessed"] == vq["witnessed"])


class TransportReport:
    def __init__(self, ray: RaySegment, bound: float, tube_width: float,
                 ok: bool, image: Tuple, round_trip_defect: Optional[int]):
        self.ray = ray
        self.bound = bound
        self.tube_width = tube_width
        self.ok = ok
        self.image = image
        self.round_trip_defect = round_trip_defect

    def to_json(self):
        return {"ray": self.ray.to_json(), "bound": self.bound,
                "tube_width": self.tube_width, "ok": self.ok,
                "round_trip_defect": self.round_trip_defect}


def qi_ray_transport(pi: Callable, varpi: Callable, ray,
                     source_trunc: Truncation,
                     tube_width: Optional[float] = None,
                     add_const: int = 1,
                     target_trunc: Optional[Truncation] = None) -> TransportReport:
    """Trace a geodesic near the transported image of a ray.

    The ray lives where ``varpi`` starts; its image under ``varpi`` seeds a
    tube in the source truncation (width defaults to twice a local
    four-point estimate plus the additive constant), and a geodesic from
    the transported basepoint to the transported endpoint is walked with
    in-tube preference.  The realized Hausdorff bound between the geodesic
    and the image is reported; ok means it stayed within the tube width.
    """
    image = [varpi(v) for v in ray]
    for v in image:
        source_trunc.require(v)
    start, end = image[0], image[-1]
    total = source_trunc.distance(start, end)
    if total < 0:
        raise PreconditionError("transported endpoints are disconnected")
    if tube_width is None:
        seeds = sorted(set(image), key=vertex_key)
        if len(seeds) > 10:
            step = (len(seeds) - 1) / 9.0
            seeds = [seeds[round(i * step)] for i in range(10)]
        quads = list(itertools.combinations(seeds, 4))
        local = delta_estimate(source_trunc, quads) if quads else 0.0
        tube_width = 2 * local + add_const
    d_img = source_trunc.set_distances(set(image))
    d_start = source_trunc.hop_distances_from(start)
    d_end = source_trunc.hop_distances_from(end)
    path = [start]
    cur = start
    for k in range(total):
        options = []
        for w in source_trunc.graph.neighbors(cur):
            i = source_trunc.index.get(w)
            if i is None:
                continue
            if int(d_start[i]) == k + 1 and int(d_end[i]) == total - k - 1:
                options.append((int(d_img[i]) > tube_width, vertex_key(w), w))
        if not options:
            raise PreconditionError("geodesic walk left the truncation")
        options.sort()
        cur = options[0][2]
        path.append(cur)
    lam = RaySegment(path, source_trunc)
    bound = ray_hausdorff(source_trunc, path, image)
    round_trip = None
    if target_trunc is not None and pi is not None:
        round_trip = 0
        for v in ray:
            back = pi(varpi(v))
            round_trip = max(round_trip, target_trunc.distance(back, v))
    return TransportReport(lam, float(bound), float(tube_width),
                           bound <= tube_width, tuple(image), round_trip)
