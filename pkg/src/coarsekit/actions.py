"""Group actions on graphs: saturations, the induced coarse structure,
orbit maps with desk-scale certificates, and group-side transfer maps.

Every search is grounded by transporters — the finite sets
``{g : g.x = y}`` — so saturation membership, recurrence sets, and orbit
covers terminate by construction.
"""

from typing import Dict, List, Optional, Sequence, Tuple

from .coarse import CarrierMap, Relation, TriState
from .errors import PreconditionError
from .floyd import FloydChart, GraphCompactification
from .graphs import Graph, Truncation, vertex_key
from .groups import (GroupOracle, ZnGroup, FreeGroup, FinitePermGroup,
                     InvolutionProductGroup, cayley_graph)


class GraphAction:
    """A group acting on a graph by automorphisms.

    ``act(g, v)`` is the action; ``transporter(x, y)`` enumerates the
    finitely many elements carrying x to y.
    """

    def __init__(self, name, group: GroupOracle, graph: Graph, act,
                 transporter):
        self.name = name
        self.group = group
        self.graph = graph
        self._act = act
        self._transporter = transporter

    def act(self, g, v):
        return self._act(g, v)

    def transporter(self, x, y) -> Tuple:
        return tuple(self._transporter(x, y))

    def orbit_overlaps(self, x, y) -> bool:
        return bool(self.transporter(x, y))

    def check_axioms(self, radius=3, sample=24) -> bool:
        """Identity, associativity-on-samples, and edge preservation."""
        trunc = Truncation(self.graph, radius)
        verts = trunc.vertices[:sample]
        ball = self.group.ball(2)[:sample]
        e = self.group.identity()
        for v in verts:
            if self.act(e, v) != v:
                return False
        for g in ball:
            for h in ball[:6]:
                gh = self.group.normal_form(self.group.multiply(g, h))
                for v in verts[:6]:
                    if self.act(gh, v) != self.act(g, self.act(h, v)):
                        return False
        for g in ball[:8]:
            for v in verts[:8]:
                for w in self.graph.neighbors(v):
                    gv, gw = self.act(g, v), self.act(g, w)
                    if gw not in self.graph.neighbors(gv):
                        return False
        return True


# ---------------------------------------------------------------------------
# Built-in wirings
# ---------------------------------------------------------------------------

def integer_translation() -> GraphAction:
    from .graphs import line_graph
    group = ZnGroup(1)
    return GraphAction(
        "Z-on-line", group, line_graph(),
        act=lambda g, v: v + g[0],
        transporter=lambda x, y: ((y - x,),),
    )


def even_translation() -> GraphAction:
    """The integers acting on the line by doubled shifts (orbit = parity class)."""
    from .graphs import line_graph
    group = ZnGroup(1)

    def transporter(x, y):
        d = y - x
        return (((d // 2),),) if d % 2 == 0 else ()

    return GraphAction("2Z-on-line", group, line_graph(),
                       act=lambda g, v: v + 2 * g[0],
                       transporter=transporter)


def grid_translation() -> GraphAction:
    from .graphs import grid_graph
    group = ZnGroup(2)
    return GraphAction(
        "Z2-on-grid", group, grid_graph(),
        act=lambda g, v: (v[0] + g[0], v[1] + g[1]),
        transporter=lambda x, y: ((y[0] - x[0], y[1] - x[1]),),
    )


def cayley_left_action(group: GroupOracle, name=None) -> GraphAction:
    """The group on its own Cayley graph by left multiplication.

    The induced saturation structure is the group's word-metric coarse
    structure, so no separate code path exists for groups.
    """
    graph = cayley_graph(group)

    def act(g, v):
        return group.normal_form(group.multiply(g, v))

    def transporter(x, y):
        return (group.normal_form(group.multiply(y, group.invert(x))),)

    return GraphAction(name or ("left-%s" % group.name), group, graph,
                       act, transporter)


def free_group_action(rank=2) -> GraphAction:
    return cayley_left_action(FreeGroup(rank), "F%d-on-tree" % rank)


def involution_tree_action(count=3) -> GraphAction:
    """The free product of `count` involutions on the regular tree whose
    vertices are its own reduced words."""
    from .graphs import regular_tree
    group = InvolutionProductGroup(count)

    def transporter(x, y):
        return (group.multiply(y, group.invert(x)),)

    return GraphAction("W%d-on-tree" % count, group, regular_tree(count),
                       act=lambda g, v: group.multiply(g, v),
                       transporter=transporter)


def swap_action() -> GraphAction:
    """The two-element group swapping the endpoints of a single edge."""
    group = FinitePermGroup([(1, 0)], name="swap")
    vertices = ("a", "b")
    graph = Graph("pair", "a",
                  lambda v: ("b",) if v == "a" else ("a",))

    def act(g, v):
        return vertices[g[vertices.index(v)]]

    def transporter(x, y):
        return tuple(g for g in group.elements() if act(g, x) == y)

    return GraphAction("swap-pair", group, graph, act, transporter)


def trivial_action(graph: Graph) -> GraphAction:
    group = ZnGroup(0)
    return GraphAction(
        "trivial-%s" % graph.name, group, graph,
        act=lambda g, v: v,
        transporter=lambda x, y: (((),) if x == y else ()),
    )


# ---------------------------------------------------------------------------
# Saturations and the induced coarse structure
# ---------------------------------------------------------------------------

class SaturationRelation:
    """All pairs of simultaneous translates of base points.

    (p, q) is a member when p = g.x and q = g.x' for one group element g
    and base points x, x'; membership is decided through transporters.
    """

    def __init__(self, action: GraphAction, base: Sequence):
        base = tuple(sorted(set(base), key=vertex_key))
        if not base:
            raise PreconditionError("saturation base must be non-empty")
        self.action = action
        self.base = base

    def member(self, p, q) -> bool:
        for x in self.base:
            for g in self.action.transporter(x, p):
                for x2 in self.base:
                    if self.action.act(g, x2) == q:
                        return True
        return False

    def pairs_on(self, vertices) -> List[Tuple]:
        """All member pairs with both endpoints in the given vertex set."""
        vset = set(vertices)
        out = set()
        for p in vertices:
            for x in self.base:
                for g in self.action.transporter(x, p):
                    for x2 in self.base:
                        q = self.action.act(g, x2)
                        if q in vset:
                            out.add((p, q))
        return sorted(out, key=lambda pq: (vertex_key(pq[0]),
                                           vertex_key(pq[1])))

    def materialize(self, carrier) -> Relation:
        return Relation.from_pairs(tuple(carrier), self.pairs_on(carrier))


def saturation(action: GraphAction, base) -> SaturationRelation:
    return SaturationRelation(action, base)


def eps_phi_member(action: GraphAction, e: Relation, depth: int,
                   base_radius: int = 2, base: Optional[Sequence] = None,
                   trunc: Optional[Truncation] = None) -> Tuple[TriState, Dict]:
    """Is the relation dominated by a composition of saturations?

    Candidates are Sat(B)^(composed n times) for n <= depth, with B the
    base-radius ball around the truncation center unless given explicitly.
    YES carries the witness; NO is only possible when the graph is finite
    and even the whole-carrier saturation was exhausted, otherwise the
    verdict is INCONCLUSIVE.
    """
    if depth < 1:
        raise PreconditionError("composition depth must be at least 1")
    if trunc is None:
        trunc = Truncation(action.graph, max(base_radius + 2, 6))
    carrier = e.carrier
    if base is None:
        base = [v for v in trunc.ball_vertices(base_radius)]
    else:
        base = list(base)
    sat = saturation(action, base).materialize(carrier)
    composed = sat
    for n in range(1, depth + 1):
        if composed.contains(e):
            return TriState.YES, {"depth": n, "base": base}
        composed = composed.compose(sat)
    finite_graph = (Truncation(action.graph, trunc.radius + 1).n == trunc.n
                    and set(carrier) <= set(trunc.vertices))
    if finite_graph:
        # The whole carrier is the largest admissible base, and its
        # saturation contains every smaller one, so one maximal candidate
        # exhausts the search space.
        big = saturation(action, trunc.vertices).materialize(carrier)
        composed = big
        for n in range(1, depth + 1):
            if composed.contains(e):
                return TriState.YES, {"depth": n, "base": list(trunc.vertices)}
            composed = composed.compose(big)
        return TriState.NO, {"depth": depth, "base": list(trunc.vertices)}
    return TriState.INCONCLUSIVE, {"depth": depth, "base": base}


# ---------------------------------------------------------------------------
# Proper discontinuity, cocompactness
# ---------------------------------------------------------------------------

def overlap_elements(action: GraphAction, K) -> Tuple:
    """{g : g.K meets K} — the recurrence set, finite via transporters."""
    K = tuple(K)
    if not K:
        raise PreconditionError("K must be non-empty")
    out = set()
    for x in K:
        for y in K:
            out.update(action.transporter(x, y))
    return tuple(sorted(out, key=vertex_key))


def is_properly_discontinuous(action: GraphAction, K, radius=None) -> bool:
    """True when the recurrence set of K is finite.

    The transporter interface forces every enumeration to terminate, so
    the materialised set itself is the finiteness witness; a radius
    restricts K to the visible ball first.
    """
    K = tuple(K)
    if radius is not None:
        trunc = Truncation(action.graph, radius)
        K = tuple(v for v in K if trunc.contains(v))
        if not K:
            raise PreconditionError("K does not meet the radius ball")
    overlap_elements(action, K)
    return True


def tuple_finiteness(action: GraphAction, sets: Sequence[Sequence]) -> List[Tuple]:
    """All chains (g_1..g_n) whose consecutive translates overlap.

    The last set is anchored by the identity: g_i.B_i must meet
    g_{i+1}.B_{i+1} for every i, with g_{n+1} the identity.  Enumerated
    right to left through transporters.
    """
    if len(sets) < 2:
        raise PreconditionError("need at least two sets")
    sets = [tuple(S) for S in sets]
    if any(not S for S in sets):
        raise PreconditionError("sets must be non-empty")
    n = len(sets) - 1
    suffixes = [()]
    for i in range(n - 1, -1, -1):
        nxt = []
        for suffix in suffixes:
            if suffix:
                targets = [action.act(suffix[0], y) for y in sets[i + 1]]
            else:
                targets = list(sets[i + 1])
            options = set()
            for x in sets[i]:
                for t in targets:
                    options.update(action.transporter(x, t))
            for g in sorted(options, key=vertex_key):
                nxt.append((g,) + suffix)
        suffixes = nxt
    return sorted(set(suffixes), key=lambda tup: tuple(vertex_key(g)
                                                       for g in tup))


class FundamentalDomain:
    def __init__(self, vertices, ok, covering, radius):
        self.vertices = tuple(vertices)
        self.ok = ok
        self.covering = covering
        self.radius = radius

    def __repr__(self):
        return "FundamentalDomain(%r, ok=%s)" % (list(self.vertices), self.ok)


def find_fundamental_domain(action: GraphAction, radius: int,
                            budget: int = 64) -> FundamentalDomain:
    """Greedy orbit cover of the radius ball, starting at the center.

    Walks the canonical truncation order and keeps every vertex not yet
    covered by a translate of the kept set.  A kept set larger than the
    budget reports non-cocompact-at-this-radius instead of an answer.
    """
    trunc = Truncation(action.graph, radius)
    K: List = []
    covering: Dict = {}
    for v in trunc.vertices:
        hit = None
        for k in K:
            trans = action.transporter(k, v)
            if trans:
                hit = (k, trans[0])
                break
        if hit is None:
            K.append(v)
            covering[v] = (v, action.group.identity())
            if len(K) > budget:
                return FundamentalDomain(K, False, covering, radius)
        else:
            covering[v] = hit
    return FundamentalDomain(K, True, covering, radius)


# ---------------------------------------------------------------------------
# The orbit map and its certificates
# ---------------------------------------------------------------------------

def milnor_svarc_map(action: GraphAction, x0, radius: int,
                     K: Optional[Sequence] = None) -> Tuple[CarrierMap, Dict]:
    """The orbit map g -> g.x0 on a radius ball, with proof-step certificates.

    Certificates: (i) the image of each generator's multiplication
    relation lies inside the saturation of {x0, s.x0} — exact containment
    on the whole sampled ball; (ii) properness of the orbit map on sampled
    bounded sets (preimages stable under domain growth); (iii) the orbit
    is Sat(K)-quasi-dense — exact, via the orbit cover's witnesses.
    """
    trunc = Truncation(action.graph, radius, x0)
    domain = [g for g in action.group.ball(radius)
              if trunc.contains(action.act(g, x0))]
    domain.sort(key=lambda g: (action.group.word_length(g), vertex_key(g)))
    mapping = {g: action.act(g, x0) for g in domain}
    carrier_map = CarrierMap(tuple(domain), trunc.vertices, mapping)

    certificates: Dict[str, object] = {}
    failed = None

    gen_report = {}
    for s in action.group.generators:
        sx0 = action.act(s, x0)
        target = saturation(action, (x0, sx0))
        ok = True
        for g in domain:
            gs = action.group.normal_form(action.group.multiply(g, s))
            if gs not in mapping:
                continue
            if not target.member(mapping[g], mapping[gs]):
                ok = False
                break
        gen_report[str(s)] = ok
    certificates["generator_images"] = gen_report
    if not all(gen_report.values()):
        failed = failed or "generator_images"

    shrunk = [g for g in action.group.ball(max(1, radius - 2))
              if trunc.contains(action.act(g, x0))]
    proper_report = {}
    for r in sorted({max(1, radius // 4), max(1, radius // 2), radius - 2}):
        bounded = set(trunc.ball_vertices(r))
        pre_full = [g for g in domain if mapping[g] in bounded]
        pre_shrunk = [g for g in shrunk if action.act(g, x0) in bounded]
        proper_report[r] = (len(pre_full) == len(pre_shrunk))
    certificates["properness"] = proper_report
    if not all(proper_report.values()):
        failed = failed or "properness"

    if K is None:
        domain_report = find_fundamental_domain(action, radius)
        K = domain_report.vertices
        cover_ok = domain_report.ok
        covering = domain_report.covering
    else:
        K = tuple(K)
        domain_report = None
        cover_ok = True
        covering = None
    if x0 not in K:
        raise PreconditionError("x0 must belong to the orbit cover K")
    sat_k = saturation(action, K)
    quasi_dense = cover_ok
    if cover_ok:
        for v in trunc.vertices:
            if covering is not None:
                k, g = covering[v]
                w = action.act(g, x0)
            else:
                w = None
                for k in K:
                    trans = action.transporter(k, v)
                    if trans:
                        w = action.act(trans[0], x0)
                        break
            if w is None or not sat_k.member(v, w):
                quasi_dense = False
                break
    certificates["quasi_density"] = quasi_dense
    if not quasi_dense:
        failed = failed or "quasi_density"

    report = {
        "ok": failed is None,
        "failed": failed,
        "certificates": certificates,
        "K": list(K),
        "radius": radius,
    }
    return carrier_map, report


# ---------------------------------------------------------------------------
# Transfer maps
# ---------------------------------------------------------------------------

def pi_K(action: GraphAction, K, S) -> Tuple:
    """{g : g.K meets S}, evaluated literally through transporters."""
    out = set()
    for k in K:
        for s in S:
            out.update(action.transporter(k, s))
    return tuple(sorted(out, key=vertex_key))


def lambda_K(action: GraphAction, K, F) -> Tuple:
    """The union of translates g.K over g in F."""
    out = {action.act(g, k) for g in F for k in K}
    return tuple(sorted(out, key=vertex_key))


def compare_pullbacks(action: GraphAction, x0,
                      comps: Sequence[GraphCompactification],
                      group_sets: Sequence[Sequence], K) -> Dict:
    """Boundary assignments of orbit images vs K-translate images.

    For each sampled group subset F, the clusters adherent to
    {g.x0 : g in F} must equal the clusters adherent to the union of
    translates g.K — the value-level shadow of the two pullback maps
    agreeing at infinity.  Checked on every supplied compactification
    (typically two radii).
    """
    if not comps:
        raise PreconditionError("at least one compactification is required")
    mismatches = []
    per_set = {}
    for idx, F in enumerate(group_sets):
        orbit_image = [action.act(g, x0) for g in F]
        translate_image = lambda_K(action, K, F)
        rows = []
        for ci, comp in enumerate(comps):
            a = comp.assign(orbit_image)
            b = comp.assign(translate_image)
            rows.append({"chart": ci, "orbit": list(a), "translates": list(b)})
            if a != b:
                mismatches.append({"set": idx, "chart": ci,
                                   "orbit": list(a), "translates": list(b)})
        per_set[idx] = rows
    return {"ok": not mismatches, "mismatches": mismatches,
            "checked": len(group_sets), "per_set": per_set}


def group_perspectivity_defect(action: GraphAction, K, chart: FloydChart,
                               R: int, element_cap: int = 400) -> Optional[float]:
    """Largest chart diameter of a K-translate not contained in ball(v,R).

    Translates must be fully visible in the chart; returns None when no
    translate qualifies (truncation too small to see any).
    """
    trunc = chart.trunc
    K = tuple(K)
    if not K:
        raise PreconditionError("K must be non-empty")
    candidates = action.group.ball(chart.radius + 2)
    best = None
    seen = 0
    for g in candidates:
        image = [action.act(g, k) for k in K]
        if not all(trunc.contains(p) for p in image):
            continue
        levels = [trunc.level[trunc.index[p]] for p in image]
        if max(levels) <= R:
            continue
        seen += 1
        if seen > element_cap:
            break
        diam = chart.diameter_of(image)
        if best is None or diam > best:
            best = diam
    return best
