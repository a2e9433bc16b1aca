"""Verification suites behind ``verify``.

Each suite re-checks one family of stated properties at manifest scale:
exhaustive where the instance space is small enough to enumerate, seeded
sampling elsewhere, and independent oracles (full-lattice closures,
simple-path minima, brute-force family scans) wherever a second opinion
is computable.  A suite returns a SuiteReport whose counterexample
payloads are enough to replay the failing instance standalone.
"""

import itertools
import random

from .. import actions as actions_mod
from .. import hyperbolic as hyper
from ..coarse import (CarrierMap, CoarseStructure, Relation, StructureSequence,
                      TriState, basis_closure, full_rule, is_coarse_equivalence,
                      is_coarse_map, is_quasi_dense, metric_structure,
                      quasi_dense_witness, quasi_inverse_from_image,
                      width_relation, width_rule)
from ..finitetop import (AdmissibleMap, FinSpace, PointMap,
                         check_eight_lemma, check_pullback_composition,
                         check_pullback_universal, compose,
                         composition_strictness_witness,
                         enumerate_admissible_maps, enumerate_topologies,
                         glue, id_glue_continuous, pullback, relabel)
from ..floyd import (FloydChart, FloydFunction, GraphCompactification,
                     affine_alpha, closesameboundary_check,
                     compactness_criterion, constant_chart, floyd_distance,
                     hyperbolic_to_floyd_projection, induced_boundary_map,
                     karlsson_defect, perspectivity_defect,
                     qi_condition_check, spread_rays, width_pairs)
from ..graphs import Graph, Truncation
from ..groups import geodesic_words
from .reports import SuiteReport


def _rng(man, suite_id):
    return random.Random("%d:%s" % (man.seed, suite_id))


def _vstr(v):
    return str(v)


# ---------------------------------------------------------------------------
# Finite topology suites
# ---------------------------------------------------------------------------

def _topology_count_brute(n):
    """Count subset families on n points closed under union and
    intersection that contain the empty set and the whole set."""
    full = (1 << n) - 1
    count = 0
    for fam_bits in range(1 << (1 << n)):
        if not (fam_bits >> 0) & 1 or not (fam_bits >> full) & 1:
            continue
        sets = [m for m in range(1 << n) if (fam_bits >> m) & 1]
        ok = True
        for a in sets:
            for b in sets:
                if not (fam_bits >> (a | b)) & 1 or not (fam_bits >> (a & b)) & 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
    return count


def suite_topo_enumeration(man):
    rep = SuiteReport("topo-enumeration")
    expected = {1: 1, 2: 4, 3: 29}
    ids = ("a", "b", "c")
    for n in sorted(expected):
        spaces = enumerate_topologies(n, ids[:n])
        distinct = {frozenset(sp.closed_masks) for sp in spaces}
        brute = _topology_count_brute(n)
        ok = (len(spaces) == expected[n] == brute
              and len(distinct) == expected[n])
        rep.record(ok, None if ok else {
            "n": n, "enumerated": len(spaces), "distinct": len(distinct),
            "brute_force": brute, "expected": expected[n]})
        rep.details["count_%d" % n] = len(spaces)
    return rep


def _spaces_on(ids, max_n):
    pool = []
    for n in range(1, max_n + 1):
        pool.extend(enumerate_topologies(n, ids[:n]))
    return pool


def _random_admissible(rng, x, y):
    choices = y.sorted_closed
    return AdmissibleMap(x, y, {c: rng.choice(choices)
                                for c in x.distinct_closures})


def _random_continuous(rng, src, tgt):
    for _ in range(40):
        pm = PointMap(src, tgt, {p: rng.choice(tgt.points)
                                 for p in src.points})
        if pm.is_continuous():
            return pm
    q = rng.choice(tgt.points)
    return PointMap(src, tgt, {p: q for p in src.points})


def suite_topo_glue_subspaces(man):
    """Glueing leaves the base open and restricts back to both pieces."""
    rep = SuiteReport("topo-glue-subspaces")
    xs = _spaces_on(("x0", "x1"), 2)
    ys = _spaces_on(("y0", "y1"), 2)
    for x in xs:
        for y in ys:
            for f in enumerate_admissible_maps(x, y):
                glued = glue(x, y, f)
                ok = (glued.base_is_open
                      and glued.space.subspace(x.points) == x
                      and glued.space.subspace(y.points) == y)
                rep.record(ok, None if ok else {
                    "x": sorted(map(_vstr, x.points)),
                    "y": sorted(map(_vstr, y.points)),
                    "table": {str(k): v for k, v in f.closure_table.items()}})
    rng = _rng(man, rep.suite_id)
    xs3 = _spaces_on(("x0", "x1", "x2"), 3)
    ys3 = _spaces_on(("y0", "y1", "y2"), 3)
    for _ in range(40):
        x = rng.choice(xs3)
        y = rng.choice(ys3)
        f = _random_admissible(rng, x, y)
        glued = glue(x, y, f)
        ok = (glued.base_is_open
              and glued.space.subspace(x.points) == x
              and glued.space.subspace(y.points) == y)
        rep.record(ok, None if ok else {
            "x_closed": sorted(x.closed_masks),
            "y_closed": sorted(y.closed_masks),
            "table": {str(k): v for k, v in f.closure_table.items()}})
    return rep


def suite_topo_glue_identity(man):
    """Identity between two glueings is continuous exactly when the first
    attaching map is tablewise dominated by the second."""
    rep = SuiteReport("topo-glue-identity")
    xs = _spaces_on(("x0", "x1"), 2)
    ys = _spaces_on(("y0", "y1"), 2)
    for x in xs:
        for y in ys:
            maps = enumerate_admissible_maps(x, y)
            for f in maps:
                for g in maps:
                    expected = all(f.evaluate(a) & ~g.evaluate(a) == 0
                                   for a in x.closed_masks)
                    got = id_glue_continuous(f, g)
                    rep.record(got == expected, None if got == expected else {
                        "f": {str(k): v for k, v in f.closure_table.items()},
                        "g": {str(k): v for k, v in g.closure_table.items()},
                        "expected": expected, "got": got})
    rng = _rng(man, rep.suite_id)
    xs3 = _spaces_on(("x0", "x1", "x2"), 3)
    ys3 = _spaces_on(("y0", "y1", "y2"), 3)
    for _ in range(60):
        x = rng.choice(xs3)
        y = rng.choice(ys3)
        f = _random_admissible(rng, x, y)
        g = _random_admissible(rng, x, y)
        expected = all(f.evaluate(a) & ~g.evaluate(a) == 0
                       for a in x.closed_masks)
        got = id_glue_continuous(f, g)
        rep.record(got == expected, None if got == expected else {
            "f": {str(k): v for k, v in f.closure_table.items()},
            "g": {str(k): v for k, v in g.closure_table.items()},
            "expected": expected, "got": got})
    return rep


def _sample_square(rng, xs, ws, ys, zs):
    x = rng.choice(xs)
    w = rng.choice(ws)
    y = rng.choice(ys)
    z = rng.choice(zs)
    f = _random_admissible(rng, x, w)
    pi = _random_continuous(rng, y, x)
    varpi = _random_continuous(rng, z, w)
    return f, pi, varpi


def _relabel_to(space, prefix):
    mapping = {p: "%s%d" % (prefix, i) for i, p in enumerate(space.points)}
    return relabel(space, mapping)


def suite_topo_pullback_composition(man):
    """Pullbacks compose: the iterated pullback contains the one-step
    pullback, with equality when all four point maps are continuous."""
    rep = SuiteReport("topo-pullback-composition")
    rng = _rng(man, rep.suite_id)
    xs = _spaces_on(("x0", "x1", "x2"), 3)
    ws = _spaces_on(("w0", "w1", "w2"), 3)
    ys = _spaces_on(("y0", "y1", "y2"), 3)
    zs = _spaces_on(("z0", "z1", "z2"), 3)
    small_x = [s for s in xs if s.n <= 2]
    small_w = [s for s in ws if s.n <= 2]
    for _ in range(20):
        x = rng.choice(xs)
        w = rng.choice(ws)
        f = _random_admissible(rng, x, w)
        id_x = PointMap.identity(x)
        id_w = PointMap.identity(w)
        ok = (check_pullback_composition(f, id_x, id_w, id_x, id_w)
              and composition_strictness_witness(f, id_x, id_w, id_x, id_w)
              is None)
        rep.record(ok, None if ok else {"stage": "identity-chain"})
    for _ in range(40):
        f, pi, varpi = _sample_square(rng, xs, ws, ys, zs)
        u = _relabel_to(rng.choice(small_x), "u")
        v = _relabel_to(rng.choice(small_w), "v")
        rho = _random_continuous(rng, u, pi.source)
        varrho = _random_continuous(rng, v, varpi.source)
        contained = check_pullback_composition(f, pi, varpi, rho, varrho)
        witness = composition_strictness_witness(f, pi, varpi, rho, varrho)
        star = pullback(f, pi, varpi)
        iterated = pullback(star, rho, varrho)
        one_step = pullback(f, compose(pi, rho), compose(varpi, varrho))
        ok = contained and witness is None and iterated == one_step
        rep.record(ok, None if ok else {
            "stage": "continuous-chain", "contained": contained,
            "witness": witness})
    for _ in range(20):
        f, pi, varpi = _sample_square(rng, xs, ws, ys, zs)
        star = pullback(f, pi, varpi)
        ok = check_pullback_universal(f, pi, varpi, star)
        rep.record(ok, None if ok else {"stage": "universal-self"})
    return rep


def suite_topo_eight_lemma(man):
    """The nine-arrow continuity report holds on sampled glueing squares."""
    rep = SuiteReport("topo-eight-lemma")
    rng = _rng(man, rep.suite_id)
    xs = _spaces_on(("x0", "x1", "x2"), 3)
    ws = _spaces_on(("w0", "w1", "w2"), 3)
    ys = _spaces_on(("y0", "y1", "y2"), 3)
    zs = _spaces_on(("z0", "z1", "z2"), 3)
    for _ in range(80):
        f, pi, varpi = _sample_square(rng, xs, ws, ys, zs)
        ok = check_eight_lemma(f, pi, varpi)
        rep.record(ok, None if ok else {
            "f": {str(k): v for k, v in f.closure_table.items()},
            "pi": {str(k): str(v) for k, v in pi.assignment.items()},
            "varpi": {str(k): str(v) for k, v in varpi.assignment.items()}})
    for _ in range(30):
        f, pi, varpi = _sample_square(rng, xs, ws, ys, zs)
        both = pullback(f, pi, varpi)
        shrunk = {}
        for c, v in both.closure_table.items():
            subsets = [m for m in both.target.sorted_closed if m & ~v == 0]
            shrunk[c] = rng.choice(subsets)
        g = AdmissibleMap(both.source, both.target, shrunk)
        ok = check_eight_lemma(f, pi, varpi, g)
        rep.record(ok, None if ok else {"stage": "explicit-attaching"})
    return rep


# ---------------------------------------------------------------------------
# Coarse structure suites
# ---------------------------------------------------------------------------

def _oracle_members(carrier, generators):
    """Fixpoint closure over the full relation lattice (tiny carriers)."""
    pts = list(carrier)
    diag = frozenset((p, p) for p in pts)
    members = {frozenset(g) for g in generators}
    members.add(diag)
    while True:
        add = set()
        current = list(members)
        for e in current:
            inv = frozenset((b, a) for (a, b) in e)
            if inv not in members:
                add.add(inv)
            for f in current:
                u = e | f
                if u not in members:
                    add.add(u)
                comp = frozenset((a, b) for (a, c) in f for (c2, b) in e
                                 if c == c2)
                if comp not in members:
                    add.add(comp)
        for e in list(members | add):
            for r in range(len(e)):
                for combo in itertools.combinations(sorted(e), r):
                    sub = frozenset(combo)
                    if sub not in members and sub not in add:
                        add.add(sub)
        if not add:
            return members
        members |= add


def suite_coarse_closure_oracle(man):
    """Generated-structure membership against the full-lattice fixpoint."""
    rep = SuiteReport("coarse-closure-oracle")
    carrier = (0, 1, 2)
    generator_sets = [
        [{(0, 1)}],
        [{(0, 1)}, {(1, 2)}],
        [{(0, 1), (2, 1)}],
        [{(0, 0), (1, 2), (2, 0)}],
    ]
    rng = _rng(man, rep.suite_id)
    pairs = [(a, b) for a in carrier for b in carrier]
    for _ in range(3):
        generator_sets.append(
            [{p for p in pairs if rng.random() < 0.2} for _ in range(2)])
    all_pairsets = []
    for bits in range(1 << len(pairs)):
        all_pairsets.append(frozenset(
            p for k, p in enumerate(pairs) if (bits >> k) & 1))
    for gens in generator_sets:
        eps = CoarseStructure.from_generators(
            [Relation.from_pairs(carrier, g) for g in gens])
        oracle = _oracle_members(carrier, gens)
        bad = []
        for pairset in all_pairsets:
            e = Relation.from_pairs(carrier, pairset)
            if eps.is_member(e) != (pairset in oracle):
                bad.append(sorted(map(list, pairset)))
        rep.record(not bad, None if not bad else {
            "generators": [sorted(map(list, g)) for g in gens],
            "disagreements": bad[:5]})
    rep.details["relations_scanned"] = len(all_pairsets)
    return rep


def suite_coarse_axioms(man):
    """Closed bases on up-to-five-point carriers satisfy every axiom."""
    rep = SuiteReport("coarse-axioms")
    rng = _rng(man, rep.suite_id)
    for n in (2, 3, 4, 5):
        carrier = tuple(range(n))
        pairs = [(a, b) for a in carrier for b in carrier]
        for _ in range(6):
            gens = [{p for p in pairs if rng.random() < 0.15}
                    for _ in range(rng.randint(1, 3))]
            basis = basis_closure([Relation.from_pairs(carrier, g)
                                   for g in gens])
            report = basis.condition_report()
            ok = all(report.values())
            rep.record(ok, None if ok else {
                "carrier": list(carrier),
                "generators": [sorted(map(list, g)) for g in gens],
                "conditions": report})
    for n in (3, 5):
        carrier = tuple(range(n))
        eps = metric_structure(carrier, lambda a, b: abs(a - b), [1, 2])
        report = eps.basis.condition_report()
        rep.record(all(report.values()),
                   None if all(report.values()) else {"metric_on": n,
                                                      "conditions": report})
    return rep


def suite_coarse_bounded_sets(man):
    """Boundedness of a set, its square, and its single-point anchor agree."""
    rep = SuiteReport("coarse-bounded-sets")
    rng = _rng(man, rep.suite_id)
    carrier = (0, 1, 2, 3, 4)
    pairs = [(a, b) for a in carrier for b in carrier]
    for _ in range(8):
        gens = [{p for p in pairs if rng.random() < 0.1} for _ in range(2)]
        eps = CoarseStructure.from_generators(
            [Relation.from_pairs(carrier, g) for g in gens])
        bad = []
        for r in range(len(carrier) + 1):
            for sub in itertools.combinations(carrier, r):
                direct = eps.is_bounded(sub)
                witness = eps.bounded_witness(sub)
                square = Relation.from_pairs(
                    carrier, [(a, b) for a in sub for b in sub])
                if direct != (witness is not None):
                    bad.append({"subset": list(sub), "kind": "witness"})
                if sub and direct != eps.is_member(square):
                    bad.append({"subset": list(sub), "kind": "square"})
        rep.record(not bad, None if not bad else {
            "generators": [sorted(map(list, g)) for g in gens],
            "disagreements": bad[:5]})
    return rep


def suite_coarse_quasi_inverse(man):
    """A quasi-dense inclusion is a coarse equivalence with an inferred
    quasi-inverse; the certificate carries the witnessing relations."""
    rep = SuiteReport("coarse-quasi-inverse")
    carrier = tuple(range(-8, 9))
    eps = metric_structure(carrier, lambda a, b: abs(a - b), [1, 2])
    evens = tuple(p for p in carrier if p % 2 == 0)
    rep.record(is_quasi_dense(evens, eps), {"stage": "quasi-dense"})
    witness = quasi_dense_witness(evens, eps)
    rep.record(witness is not None, {"stage": "witness"})
    sub = eps.subspace(evens)
    incl = CarrierMap(evens, carrier, {p: p for p in evens})
    rep.record(is_coarse_map(incl, sub, eps), {"stage": "inclusion-coarse"})
    back = quasi_inverse_from_image(incl, eps)
    rep.record(back is not None, {"stage": "inverse-found"})
    if back is not None:
        result = is_coarse_equivalence(incl, back, sub, eps)
        rep.record(result.ok, None if result.ok else {
            "stage": "equivalence", "failed": result.failed})
    full = quasi_dense_witness(carrier, eps)
    rep.record(full is not None and full.contains(Relation.diagonal(carrier)),
               {"stage": "identity-witness"})
    return rep


def suite_coarse_truncation_verdicts(man):
    """Stabilised verdicts across nested finite windows of the line."""
    rep = SuiteReport("coarse-truncation-verdicts")
    dist = lambda a, b: abs(a - b)
    carriers = [tuple(range(-r, r + 1)) for r in (8, 32, 128)]
    seq = StructureSequence(carriers, [width_rule(dist, w)
                                       for w in (1, 2, 4)])
    evens = tuple(range(-128, 129, 2))
    checks = [
        ("proper", seq.is_proper(), TriState.YES),
        ("exhaustive-not-proper",
         StructureSequence(carriers, [full_rule()]).is_proper(), TriState.NO),
        ("evens-quasi-dense", seq.is_quasi_dense(evens), TriState.YES),
        ("pair-not-quasi-dense", seq.is_quasi_dense((0, 1)), TriState.NO),
        ("shift-close", seq.are_close(lambda s: s, lambda s: s + 1),
         TriState.YES),
        ("doubling-not-close", seq.are_close(lambda s: s, lambda s: 2 * s),
         TriState.NO),
    ]
    narrow = StructureSequence(carriers, [width_rule(dist, w)
                                          for w in (1, 2)])
    wide = StructureSequence(carriers, [width_rule(dist, w)
                                        for w in (1, 2, 4)])
    checks += [
        ("doubling-bornologous",
         narrow.is_bornologous_map(lambda s: 2 * s, wide), TriState.YES),
        ("doubling-proper",
         narrow.is_proper_map(lambda s: 2 * s, wide), TriState.YES),
        ("halving-coarse",
         narrow.is_coarse_map(lambda s: s // 2, wide), TriState.YES),
        ("constant-not-proper",
         narrow.is_proper_map(lambda s: 0, wide), TriState.NO),
    ]
    for label, got, want in checks:
        rep.record(got is want, None if got is want else {
            "check": label, "got": got.name, "want": want.name})
    return rep


# ---------------------------------------------------------------------------
# Floyd metric suites
# ---------------------------------------------------------------------------

def _oracle_min_path(adjacency, levels, func, x, y):
    best = [float("inf")]

    def walk(v, seen, acc):
        if acc >= best[0]:
            return
        if v == y:
            best[0] = acc
            return
        for w in sorted(adjacency[v]):
            if w not in seen:
                step = func.value(min(levels[v], levels[w]))
                walk(w, seen | {w}, acc + step)

    walk(x, {x}, 0.0)
    return best[0]


def _random_connected_graph(rng, n):
    adjacency = {i: set() for i in range(n)}
    for i in range(1, n):
        j = rng.randrange(i)
        adjacency[i].add(j)
        adjacency[j].add(i)
    extras = rng.randint(0, n)
    for _ in range(extras):
        a, b = rng.sample(range(n), 2)
        adjacency[a].add(b)
        adjacency[b].add(a)
    return Graph("random%d" % n, 0, lambda v: tuple(adjacency[v])), adjacency


def suite_floyd_metric_oracle(man):
    """Rescaled shortest paths against a simple-path minimum, both
    scaling families, random small graphs."""
    rep = SuiteReport("floyd-metric-oracle")
    rng = _rng(man, rep.suite_id)
    count = int(man.budgets.get("oracle_graphs", 50))
    max_n = int(man.budgets.get("oracle_max_vertices", 12))
    functions = [FloydFunction.geometric("1/2"), FloydFunction.power(2)]
    for _ in range(count):
        n = rng.randint(4, max_n)
        graph, adjacency = _random_connected_graph(rng, n)
        worst = 0.0
        bad = None
        for func in functions:
            chart = FloydChart(graph, func, n)
            levels = {v: int(chart.trunc.level[chart.trunc.index[v]])
                      for v in chart.trunc.vertices}
            for _ in range(6):
                x, y = rng.sample(range(n), 2)
                expected = _oracle_min_path(adjacency, levels, func, x, y)
                got = chart.distance(x, y)
                gap = abs(got - expected)
                worst = max(worst, gap)
                if gap > 1e-12:
                    bad = {"n": n, "func": func.kind, "x": x, "y": y,
                           "expected": expected, "got": got,
                           "edges": sorted([a, b] for a in adjacency
                                           for b in adjacency[a] if a < b)}
        rep.record(bad is None, bad)
    rep.details["graphs"] = count
    rep.details["tolerance"] = 1e-12
    return rep


def suite_floyd_karlsson_decay(man):
    """Deep-detour defects stay under the geometric tail bound and
    strictly decrease with the avoided radius."""
    rep = SuiteReport("floyd-karlsson-decay")
    radii = [int(r) for r in man.budgets.get("karlsson_radii", [4, 6, 8])]
    func = FloydFunction.geometric("1/2")
    for name in ("line", "grid", "tree3"):
        graph = man.graph(name)
        defects = []
        for R in radii:
            d = karlsson_defect(graph, func, R)
            bound = 2.0 ** (3 - R)
            ok = d <= bound + 1e-12
            rep.record(ok, None if ok else {
                "graph": name, "R": R, "defect": d, "bound": bound})
            defects.append(d)
        decreasing = all(b < a for a, b in zip(defects, defects[1:]))
        if len(defects) >= 2:
            rep.record(decreasing, None if decreasing else {
                "graph": name, "defects": defects, "radii": radii})
        rep.details[name] = {str(r): d for r, d in zip(radii, defects)}
    return rep


def _sat_pairs(man, which, carrier):
    if which == "line":
        action = man.action("z-line")
        K = [0, 1]
    elif which == "grid":
        action = man.action("z2-grid")
        K = [(0, 0), (1, 0)]
    else:
        action = man.action("w3-tree")
        K = [action.graph.root, (0,)]
    return actions_mod.saturation(action, K).pairs_on(carrier), K


def suite_floyd_perspectivity(man):
    """Bounded-width and orbit-saturated entourages separate from the
    boundary: defects shrink through the radius schedule; the unit-weight
    control chart shows no shrinking."""
    rep = SuiteReport("floyd-perspectivity")
    radii = [int(r) for r in man.budgets.get("perspectivity_radii",
                                             [4, 8, 12])]
    charts = [("line", "line-14"), ("grid", "grid-14"), ("tree", "tree3-13")]
    for which, chart_name in charts:
        chart = man.chart(chart_name)
        entourages = [("width-1", width_pairs(chart.trunc, 1))]
        sat, K = _sat_pairs(man, which, chart.trunc.vertices)
        entourages.append(("sat", sat))
        for label, pairs in entourages:
            defects = []
            for R in radii:
                defects.append(perspectivity_defect(chart, pairs, R))
            seen = [d for d in defects if d is not None]
            if not seen or defects[-1] is None:
                rep.record(None, {"chart": chart_name, "entourage": label,
                                  "radii": radii, "defects": defects,
                                  "reason": "deepest radius outside chart"})
                continue
            non_increasing = all(b <= a + 1e-12
                                 for a, b in zip(seen, seen[1:]))
            vanishing = seen[-1] < 1e-2
            ok = non_increasing and vanishing
            rep.record(ok, None if ok else {
                "chart": chart_name, "entourage": label,
                "defects": defects, "radii": radii})
            report = chart.separation_report(pairs, radii=radii)
            rep.record(report["equivalent"], None if report["equivalent"]
                       else {"chart": chart_name, "entourage": label,
                             "separation": report})
            rep.details["%s-%s" % (chart_name, label)] = defects
    control = man.chart("line-const-12")
    d = perspectivity_defect(control, width_pairs(control.trunc, 1),
                             radii[0])
    ok = d is not None and d > 0.5
    rep.record(ok, None if ok else {"chart": "line-const-12", "defect": d})
    rep.details["control-defect"] = d
    return rep


def suite_floyd_boundary_clusters(man):
    """Cluster counts match the end structure: two line ends, one grid
    boundary point, one cluster per sampled tree end."""
    rep = SuiteReport("floyd-boundary-clusters")
    cases = [
        ("line-12", 6, 2, 2),
        ("grid-14", 8, 8, 1),
        ("tree3-8", 6, 12, 12),
    ]
    for chart_name, depth, ray_count, expected in cases:
        comp = GraphCompactification.build(man.chart(chart_name),
                                           depth=depth, ray_count=ray_count)
        got = len(comp.clusters)
        rep.record(got == expected, None if got == expected else {
            "chart": chart_name, "clusters": got, "expected": expected})
        rep.details[chart_name] = got
    return rep


def suite_floyd_close_boundary(man):
    """Sets within an entourage of each other adhere to nested cluster
    sets; far ends stay separated."""
    rep = SuiteReport("floyd-close-boundary")
    comp = GraphCompactification.build(man.chart("line-12"), depth=6,
                                       ray_count=2)
    A = [8, 9, 10, 11]
    B = [7, 8, 9, 10, 11, 12]
    e = ([(v, v + 1) for v in range(-12, 12)]
         + [(v + 1, v) for v in range(-12, 12)]
         + [(v, v) for v in range(-12, 13)])
    rep.record(closesameboundary_check(comp, A, B, e) is True,
               {"stage": "same-end"})
    negB = sorted(-v for v in B)
    rep.record(closesameboundary_check(comp, A, negB, e, strict=False)
               is False, {"stage": "opposite-ends"})
    samples = [list(range(-12, 13)), [0, 1, 2], [12, 11, 10], [-12, -11]]
    rep.record(compactness_criterion(comp, samples) is True,
               {"stage": "compactness"})
    return rep


def suite_floyd_qi_transfer(man):
    """Scaling-function compatibility plus the induced boundary bijection
    for the inclusion of the doubled line into the line."""
    rep = SuiteReport("floyd-qi-transfer")
    gh = man.function("geom-half")
    gq = man.function("geom-quarter")
    fwd = qi_condition_check(affine_alpha(2), gh, gq, 1)
    ok = fwd["forward"] and fwd["forward_analytic"] is True
    rep.record(ok, None if ok else {"direction": "into-doubled", "report":
                                    {k: str(v) for k, v in fwd.items()}})
    bwd = qi_condition_check(affine_alpha(1, 2), gq, gh, 1)
    ok = bwd["forward"] and bwd["forward_analytic"] is True
    rep.record(ok, None if ok else {"direction": "into-line", "report":
                                    {k: str(v) for k, v in bwd.items()}})
    comp_x = GraphCompactification.build(man.chart("line-16"), depth=12,
                                         ray_count=2)
    comp_y = GraphCompactification.build(man.chart("line2-8"), depth=6,
                                         ray_count=2)
    induced = induced_boundary_map(lambda v: v, comp_x, comp_y,
                                   quasi_inverse=lambda v: 2 * (v // 2))
    verdict = induced["verdict"]
    ok = verdict["bijective"] and verdict["inverse_induced"]
    rep.record(ok, None if ok else {"stage": "induced-map",
                                    "verdict": verdict})
    reverse = induced_boundary_map(lambda v: 2 * (v // 2), comp_y, comp_x)
    ok = reverse["verdict"]["bijective"]
    rep.record(ok, None if ok else {"stage": "reverse-map",
                                    "verdict": reverse["verdict"]})
    return rep


# ---------------------------------------------------------------------------
# Group action suites
# ---------------------------------------------------------------------------

def suite_action_saturation(man):
    """Axiom checks for every registered action plus exact saturations."""
    rep = SuiteReport("action-saturation")
    for name in sorted(man.data.get("actions", {})):
        action = man.action(name)
        try:
            action.check_axioms()
            rep.record(True)
        except Exception as exc:  # report, don't crash the runner
            rep.record(False, {"action": name, "error": str(exc)})
    zline = man.action("z-line")
    carrier = tuple(range(-6, 7))
    sat = actions_mod.saturation(zline, [0]).pairs_on(carrier)
    ok = sorted(sat) == [(v, v) for v in carrier]
    rep.record(ok, None if ok else {"stage": "origin-diagonal",
                                    "pairs": sorted(map(list, sat))[:10]})
    sat01 = actions_mod.saturation(zline, [0, 1]).pairs_on(carrier)
    want = set(width_pairs(Truncation(man.graph("line"), 6), 1))
    ok = set(sat01) == want
    rep.record(ok, None if ok else {"stage": "unit-width"})
    e = width_relation(carrier, lambda a, b: abs(a - b), 1)
    verdict, info = actions_mod.eps_phi_member(zline, e, 1)
    rep.record(verdict is TriState.YES, None if verdict is TriState.YES else
               {"stage": "width-membership", "verdict": verdict.name,
                "info": {k: str(v) for k, v in info.items()}})
    cyc = man.graph("cycle6")
    triv = actions_mod.trivial_action(cyc)
    carrier6 = Truncation(cyc, 3).vertices
    ecyc = Relation.from_pairs(carrier6, [(0, 1), (1, 0)])
    verdict, _ = actions_mod.eps_phi_member(triv, ecyc, 1)
    rep.record(verdict is TriState.YES,
               None if verdict is TriState.YES else
               {"stage": "identity-cover", "verdict": verdict.name})
    even = man.action("even-line")
    verdict, _ = actions_mod.eps_phi_member(even, e, 1, base=[0])
    rep.record(verdict is TriState.INCONCLUSIVE,
               None if verdict is TriState.INCONCLUSIVE else
               {"stage": "parity-gap", "verdict": verdict.name})
    return rep


def suite_action_discreteness(man):
    """Overlap sets are terminating enumerations and tuple chains match
    brute force on a free-group ball."""
    rep = SuiteReport("action-discreteness")
    zline = man.action("z-line")
    got = actions_mod.overlap_elements(zline, [0])
    rep.record(got == ((0,),), None if got == ((0,),) else
               {"stage": "line-origin", "got": [list(g) for g in got]})
    rep.record(actions_mod.is_properly_discontinuous(zline, [0, 1]),
               {"stage": "line-proper"})
    f2 = man.action("f2-tree")
    K = [f2.graph.root] + [n for n in f2.graph.neighbors(f2.graph.root)]
    got = set(actions_mod.overlap_elements(f2, K))
    kset = set(K)
    brute = {g for g in f2.group.ball(2)
             if any(f2.act(g, x) in kset for x in K)}
    rep.record(got == brute, None if got == brute else {
        "stage": "free-overlap", "got": sorted(map(str, got)),
        "brute": sorted(map(str, brute))})
    chains = actions_mod.tuple_finiteness(zline, [[0, 1], [0, 1]])
    want = [((-1,),), ((0,),), ((1,),)]
    rep.record(chains == want, None if chains == want else {
        "stage": "line-chains", "got": [list(map(str, c)) for c in chains]})
    B = [(), (1,)]
    chains2 = set(actions_mod.tuple_finiteness(f2, [B, B, B]))
    ball = f2.group.ball(4)
    bset = set(B)
    brute2 = set()
    for g2 in ball:
        img2 = {f2.act(g2, x) for x in B}
        if not (img2 & bset):
            continue
        for g1 in ball:
            img1 = {f2.act(g1, x) for x in B}
            if img1 & img2:
                brute2.add((g1, g2))
    rep.record(chains2 == brute2, None if chains2 == brute2 else {
        "stage": "free-chains", "got": sorted(map(str, chains2)),
        "brute": sorted(map(str, brute2))})
    dom = actions_mod.find_fundamental_domain(zline, 4)
    rep.record(dom.ok and len(dom.vertices) == 1,
               None if dom.ok else {"stage": "line-domain"})
    return rep


def suite_action_msvarc(man):
    """Orbit maps carry complete certificates on the three model pairs;
    the trivial action is rejected at the density step."""
    rep = SuiteReport("action-msvarc")
    radius = int(man.budgets.get("msvarc_radius", 6))
    for name, x0 in (("z-line", 0), ("z2-grid", (0, 0)), ("f2-tree", ())):
        action = man.action(name)
        cm, report = actions_mod.milnor_svarc_map(action, x0, radius)
        certs = report["certificates"]
        ok = report["ok"] and all(certs.values())
        rep.record(ok, None if ok else {
            "action": name, "failed": report["failed"],
            "certificates": {k: bool(v) for k, v in certs.items()}})
        rep.details[name] = {"K": [str(k) for k in report["K"]],
                             "radius": radius}
    trivial = man.action("trivial-grid")
    # rejection requires a window larger than the transversal budget
    cm, report = actions_mod.milnor_svarc_map(trivial, (0, 0),
                                              max(radius, 6))
    ok = (not report["ok"]) and report["failed"] == "quasi_density"
    rep.record(ok, None if ok else {
        "action": "trivial-grid", "ok": report["ok"],
        "failed": report["failed"]})
    return rep


_PULLBACK_PATTERNS = {
    "z-line": [(((1,),), 14), (((-1,),), 14), (((2,),), 14), (((-2,),), 14),
               (((3,),), 14), (((-3,),), 14), (((4,),), 14), (((-4,),), 14),
               (((5,),), 14), (((-5,),), 14)],
    "z2-grid": [((( 1, 0),), 12), (((-1, 0),), 12), (((0, 1),), 12),
                (((0, -1),), 12), (((1, 0), (0, 1)), 12),
                (((-1, 0), (0, 1)), 12), (((1, 0), (0, -1)), 12),
                (((-1, 0), (0, -1)), 12), (((1, 0), (1, 0), (0, 1)), 12),
                (((0, 1), (0, 1), (1, 0)), 12)],
    "f2-tree": [((((1,),)), 8), ((((-1,),)), 8), ((((2,),)), 8),
                ((((-2,),)), 8), (((1,), (2,)), 8), (((-1,), (2,)), 8),
                (((1,), (-2,)), 8), (((-1,), (-2,)), 8), (((2,), (1,)), 8),
                (((-2,), (-1,)), 8)],
}


def suite_action_pullback_agreement(man):
    """Orbit images and translate unions of the transversal assign to the
    same boundary clusters at two chart radii."""
    rep = SuiteReport("action-pullback-agreement")
    ray_budget = int(man.budgets.get("pullback_rays", 10))
    cases = [
        ("z-line", 0, [0, 1], [("line-12", 6, 2), ("line-16", 14, 2)]),
        ("z2-grid", (0, 0), [(0, 0), (1, 0)],
         [("grid-12", 8, 8), ("grid-16", 10, 8)]),
        ("f2-tree", (), [()],
         [("cayley-f2-6", 4, 12), ("cayley-f2-8", 5, 12)]),
    ]
    for name, x0, K, chart_specs in cases:
        action = man.action(name)
        comps = [GraphCompactification.build(man.chart(cn), depth=d,
                                             ray_count=rc)
                 for cn, d, rc in chart_specs]
        sets = []
        for pattern, length in _PULLBACK_PATTERNS[name][:ray_budget]:
            sets.append(geodesic_words(action.group, pattern, length))
        out = actions_mod.compare_pullbacks(action, x0, comps, sets, K)
        ok = out["ok"] and not out["mismatches"] \
            and out["checked"] >= min(ray_budget, 10)
        rep.record(ok, None if ok else {
            "action": name, "mismatches": out["mismatches"][:3],
            "checked": out["checked"]})
        rep.details[name] = {"checked": out["checked"],
                             "charts": [c[0] for c in chart_specs]}
    return rep


def suite_action_group_defect(man):
    """Group-translate perspectivity defect decays on shrinking charts and
    stays large on the unit-weight control."""
    rep = SuiteReport("action-group-defect")
    radii = [int(r) for r in man.budgets.get("perspectivity_radii",
                                             [4, 8, 12])]
    cases = [
        ("z-line", [0, 1], "line-14"),
        ("w3-tree", None, "tree3-13"),
    ]
    for name, K, chart_name in cases:
        action = man.action(name)
        if K is None:
            K = [action.graph.root, (0,)]
        chart = man.chart(chart_name)
        defects = [actions_mod.group_perspectivity_defect(action, K, chart, R)
                   for R in radii]
        seen = [d for d in defects if d is not None]
        if not seen or defects[-1] is None:
            rep.record(None, {"action": name, "chart": chart_name,
                              "radii": radii, "defects": defects,
                              "reason": "no qualifying translates at the "
                              "deepest radius"})
            continue
        non_increasing = all(b <= a + 1e-12 for a, b in zip(seen, seen[1:]))
        ok = non_increasing and seen[-1] < 1e-2
        rep.record(ok, None if ok else {
            "action": name, "chart": chart_name, "defects": defects})
        rep.details["%s-%s" % (name, chart_name)] = defects
    zline = man.action("z-line")
    control = man.chart("line-const-12")
    d = actions_mod.group_perspectivity_defect(zline, [0, 1], control,
                                               radii[0])
    ok = d is not None and d > 0.5
    rep.record(ok, None if ok else {"action": "z-line",
                                    "chart": "line-const-12", "defect": d})
    return rep


# ---------------------------------------------------------------------------
# Hyperbolicity suites
# ---------------------------------------------------------------------------

def suite_hyper_delta(man):
    """Thinness: zero on trees and the line, one on the six-cycle,
    growing without bound on the grid."""
    rep = SuiteReport("hyper-delta")
    cap = int(man.budgets.get("delta_cap", 120000))
    tree = Truncation(man.graph("tree3"), 5)
    rep.record(hyper.delta_estimate(tree, cap=cap) == 0.0, {"graph": "tree3"})
    line = Truncation(man.graph("line"), 8)
    rep.record(hyper.delta_estimate(line, cap=cap) == 0.0, {"graph": "line"})
    cyc = Truncation(man.graph("cycle6"), 3)
    got = hyper.delta_estimate(cyc, cap=cap)
    rep.record(got == 1.0, None if got == 1.0 else {"graph": "cycle6",
                                                    "delta": got})
    d4 = hyper.delta_estimate(Truncation(man.graph("grid"), 4), cap=cap)
    d6 = hyper.delta_estimate(Truncation(man.graph("grid"), 6), cap=cap)
    ok = d4 >= 1.0 and d6 > d4
    rep.record(ok, None if ok else {"graph": "grid", "delta4": d4,
                                    "delta6": d6})
    rep.details["grid-growth"] = [d4, d6]
    rng = _rng(man, rep.suite_id)
    verts = list(tree.vertices)
    bad = None
    for _ in range(200):
        x, y, p = (rng.choice(verts) for _ in range(3))
        gp = hyper.gromov_product(tree, x, y, p)
        if not (0 <= gp <= min(tree.distance(x, p), tree.distance(y, p))):
            bad = {"x": str(x), "y": str(y), "p": str(p), "product": gp}
            break
    rep.record(bad is None, bad)
    return rep


def suite_hyper_accessibility(man):
    """Every boundary cluster is witnessed by a geodesic ray from each
    sampled basepoint."""
    rep = SuiteReport("hyper-accessibility")
    length = int(man.budgets.get("ray_length", 10))
    tiny = man.budgets.get("profile") == "tiny"
    comp_line = GraphCompactification.build(man.chart("line-12"), depth=6,
                                            ray_count=2)
    root = man.graph("tree3").root
    line_points = (0,) if tiny else (0, 3)
    tree_points = (root,) if tiny else (root, (0,))
    for p in line_points:
        witnesses, verdict = hyper.accessibility_witnesses(
            comp_line, p, min(length, 9))
        ok = verdict["fully_accessible"]
        rep.record(ok, None if ok else {"chart": "line-12", "basepoint": p,
                                        "verdict": verdict})
    if not tiny:
        rep.record(hyper.basepoint_change_check(comp_line, 0, 3,
                                                min(length, 9)),
                   {"stage": "line-basepoint-change"})
    comp_tree = GraphCompactification.build(man.chart("tree3-8"), depth=6,
                                            ray_count=12)
    for p in tree_points:
        witnesses, verdict = hyper.accessibility_witnesses(
            comp_tree, p, min(length, 7))
        ok = verdict["fully_accessible"]
        rep.record(ok, None if ok else {"chart": "tree3-8",
                                        "basepoint": str(p),
                                        "verdict": verdict})
    collapsed = GraphCompactification.build(man.chart("line-12"), depth=6,
                                            ray_count=2, threshold=8.0)
    witnesses, verdict = hyper.accessibility_witnesses(collapsed, 0, 6)
    ok = verdict["fully_accessible"] and len(collapsed.clusters) == 1
    rep.record(ok, None if ok else {"stage": "collapsed",
                                    "clusters": len(collapsed.clusters)})
    return rep


def suite_hyper_transport(man):
    """Ray transport along quasi-isometries lands within a uniform
    Hausdorff bound; identity transport is exact."""
    rep = SuiteReport("hyper-transport")
    tree = Truncation(man.graph("tree3"), 6)
    gamma = hyper.rays_from(tree, (), 6)[0]
    report = hyper.qi_ray_transport(lambda v: v, lambda v: v, gamma, tree,
                                    target_trunc=tree)
    ok = report.ok and report.bound == 0.0 and report.round_trip_defect == 0
    rep.record(ok, None if ok else {"stage": "identity",
                                    "bound": report.bound})
    x_trunc = Truncation(man.graph("line"), 14)
    y_trunc = Truncation(man.graph("line2"), 6)
    bounds = []
    for gamma in hyper.rays_from(y_trunc, 0, 6):
        report = hyper.qi_ray_transport(lambda v: 2 * (v // 2),
                                        lambda v: v, gamma, x_trunc,
                                        target_trunc=y_trunc)
        ok = report.ok and report.bound <= 1.0 \
            and report.round_trip_defect == 0
        rep.record(ok, None if ok else {"stage": "doubled-line",
                                        "bound": report.bound})
        bounds.append(report.bound)
    rep.record(len(set(bounds)) == 1, None if len(set(bounds)) == 1 else
               {"stage": "uniformity", "bounds": bounds})
    tree8 = Truncation(man.graph("tree3"), 8)
    parent_bounds = set()
    for gamma in hyper.rays_from(tree8, (), 6)[:6]:
        report = hyper.qi_ray_transport(None, lambda v: v[:-1] if v else v,
                                        gamma, tree8)
        rep.record(report.ok, None if report.ok else {"stage": "parent-map"})
        parent_bounds.add(report.bound)
    rep.record(parent_bounds == {0.0}, None if parent_bounds == {0.0} else
               {"stage": "parent-uniformity",
                "bounds": sorted(parent_bounds)})
    rep.details["doubled-line-bounds"] = bounds
    return rep


def suite_hyper_floyd_coherence(man):
    """Transported rays land in the clusters the induced boundary map
    predicts, and ray classes project onto clusters without splitting."""
    rep = SuiteReport("hyper-floyd-coherence")
    comp_x = GraphCompactification.build(man.chart("line-16"), depth=12,
                                         ray_count=2)
    comp_y = GraphCompactification.build(man.chart("line2-8"), depth=6,
                                         ray_count=2)
    induced = induced_boundary_map(lambda v: v, comp_x, comp_y)
    rep.record(induced["verdict"]["total"], None
               if induced["verdict"]["total"] else
               {"stage": "induced-total", "verdict": induced["verdict"]})
    for gamma in hyper.rays_from(comp_y.chart.trunc, 0, 6):
        source_cluster = comp_y.assign(gamma.vertices)
        ok = len(source_cluster) == 1
        if ok:
            report = hyper.qi_ray_transport(lambda v: 2 * (v // 2),
                                            lambda v: v, gamma,
                                            comp_x.chart.trunc)
            target_cluster = comp_x.assign(report.ray.vertices)
            ok = target_cluster == (induced["mapping"][source_cluster[0]],)
        rep.record(ok, None if ok else {
            "stage": "transport-assignment",
            "ray_end": str(gamma.vertices[-1])})
    comp_line = GraphCompactification.build(man.chart("line-12"), depth=6,
                                            ray_count=2)
    lt = comp_line.chart.trunc
    lrays = [r for r in hyper.rays_from(lt, 0, 8)
             if comp_line.assign(r.vertices)]
    classes = hyper.ray_classes(lt, lrays, 2)
    proj = hyperbolic_to_floyd_projection(classes, comp_line)
    ok = proj["well_defined"] and proj["surjective"]
    rep.record(ok, None if ok else {"stage": "line-projection",
                                    "split": proj["split"],
                                    "unhit": proj["unhit"]})
    comp_tree = GraphCompactification.build(man.chart("tree3-8"), depth=6,
                                            ray_count=12)
    tt = comp_tree.chart.trunc
    srays = [r for r in spread_rays(tt, (), 8, 24) if comp_tree.assign(r)]
    tclasses = hyper.ray_classes(tt, srays, 2)
    tproj = hyperbolic_to_floyd_projection(tclasses, comp_tree)
    ok = tproj["well_defined"] and tproj["surjective"]
    rep.record(ok, None if ok else {"stage": "tree-projection",
                                    "split": tproj["split"],
                                    "unhit": tproj["unhit"]})
    return rep


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

SUITES = {
    "topo-enumeration": suite_topo_enumeration,
    "topo-glue-subspaces": suite_topo_glue_subspaces,
    "topo-glue-identity": suite_topo_glue_identity,
    "topo-pullback-composition": suite_topo_pullback_composition,
    "topo-eight-lemma": suite_topo_eight_lemma,
    "coarse-closure-oracle": suite_coarse_closure_oracle,
    "coarse-axioms": suite_coarse_axioms,
    "coarse-bounded-sets": suite_coarse_bounded_sets,
    "coarse-quasi-inverse": suite_coarse_quasi_inverse,
    "coarse-truncation-verdicts": suite_coarse_truncation_verdicts,
    "floyd-metric-oracle": suite_floyd_metric_oracle,
    "floyd-karlsson-decay": suite_floyd_karlsson_decay,
    "floyd-perspectivity": suite_floyd_perspectivity,
    "floyd-boundary-clusters": suite_floyd_boundary_clusters,
    "floyd-close-boundary": suite_floyd_close_boundary,
    "floyd-qi-transfer": suite_floyd_qi_transfer,
    "action-saturation": suite_action_saturation,
    "action-discreteness": suite_action_discreteness,
    "action-msvarc": suite_action_msvarc,
    "action-pullback-agreement": suite_action_pullback_agreement,
    "action-group-defect": suite_action_group_defect,
    "hyper-delta": suite_hyper_delta,
    "hyper-accessibility": suite_hyper_accessibility,
    "hyper-transport": suite_hyper_transport,
    "hyper-floyd-coherence": suite_hyper_floyd_coherence,
}

GROUPS = ("topo", "coarse", "floyd", "action", "hyper")


def resolve_selector(selector):
    """Suite ids matching a selector: exact id, group prefix, or 'all'."""
    if selector == "all":
        return sorted(SUITES)
    if selector in SUITES:
        return [selector]
    if selector in GROUPS:
        return sorted(s for s in SUITES if s.startswith(selector + "-"))
    return []


def run_suites(man, selector):
    """Run the selected suites in id order; returns the report list."""
    ids = resolve_selector(selector)
    if not ids:
        raise KeyError(selector)
    reports = []
    for suite_id in ids:
        reports.append(SUITES[suite_id](man))
    return reports
