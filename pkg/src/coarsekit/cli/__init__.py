"""Command-line front end.

Subcommands build graphs, evaluate rescaled metrics and defect tables,
exercise the group-action machinery, and run the verification suites.
Artifacts (JSON/CSV, optional SVG) land in the output directory; with a
fixed manifest and seed the JSON/CSV bytes are reproducible run to run.

Exit codes: 0 all checks passed, 1 failures, 2 inconclusive-only runs,
3 usage or manifest errors.
"""

import argparse
import os
import sys
import time

from .. import actions as actions_mod
from .. import hyperbolic as hyper
from ..coarse import (CarrierMap, Relation, basis_closure,
                      is_coarse_equivalence, is_coarse_map, is_quasi_dense,
                      metric_structure, quasi_inverse_from_image)
from ..errors import CoarseKitError
from ..floyd import (FloydFunction, GraphCompactification, floyd_distance,
                     karlsson_defect)
from ..graphs import Truncation
from .manifest import Manifest, ManifestError, load_manifest
from .reports import (SuiteReport, format_cell, pin, write_csv, write_json,
                      write_svg)
from .suites import SUITES, resolve_selector

__all__ = ["main"]


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """argparse that reports usage problems instead of exiting."""

    def error(self, message):
        raise UsageError("%s: %s" % (self.prog, message))


def parse_vertex(text):
    """Vertex literals: integers, comma tuples, '()' for an empty tuple,
    anything else as a plain string."""
    if text in ("()", ""):
        return ()
    try:
        return int(text)
    except ValueError:
        pass
    if "," in text:
        parts = [p for p in text.split(",") if p != ""]
        try:
            return tuple(int(p) for p in parts)
        except ValueError:
            return tuple(parts)
    return text


def parse_int_list(text):
    return [int(p) for p in text.split(",") if p != ""]


def build_parser():
    parser = Parser(prog="coarsekit")
    parser.add_argument("--manifest", help="JSON manifest overriding the "
                        "built-in registry")
    parser.add_argument("--budget", choices=["default", "tiny"],
                        default=None, help="budget profile")
    parser.add_argument("--out", default=None,
                        help="output directory (default $COARSEKIT_OUT "
                        "or ./artifacts)")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the manifest seed")
    parser.add_argument("--svg", action="store_true",
                        help="emit SVG point clouds where supported")
    sub = parser.add_subparsers(dest="command")

    graph = sub.add_parser("graph", parents=[], prog="coarsekit graph")
    graph_sub = graph.add_subparsers(dest="graph_command")
    build = graph_sub.add_parser("build")
    build.add_argument("--graph", required=True)
    build.add_argument("--radius", type=int, default=6)

    floyd = sub.add_parser("floyd")
    floyd_sub = floyd.add_subparsers(dest="floyd_command")
    dist = floyd_sub.add_parser("dist")
    dist.add_argument("--graph", required=True)
    dist.add_argument("--f", default="geom:0.5")
    dist.add_argument("--x", required=True)
    dist.add_argument("--y", required=True)
    dist.add_argument("--R", type=int, required=True)
    dist.add_argument("--center", default=None)
    clusters = floyd_sub.add_parser("clusters")
    clusters.add_argument("--chart", required=True)
    clusters.add_argument("--depth", type=int, default=None)
    clusters.add_argument("--rays", type=int, default=8)
    karlsson = floyd_sub.add_parser("karlsson")
    karlsson.add_argument("--graph", required=True)
    karlsson.add_argument("--f", default="geom:0.5")
    karlsson.add_argument("--radii", default=None)

    coarse = sub.add_parser("coarse")
    coarse_sub = coarse.add_subparsers(dest="coarse_command")
    closure = coarse_sub.add_parser("closure")
    closure.add_argument("--carrier", required=True,
                         help="comma list, e.g. 0,1,2")
    closure.add_argument("--pairs", required=True,
                         help="semicolon-separated generators, pairs as "
                         "a:b comma lists, e.g. 0:1,1:2;0:2")
    closure.add_argument("--check", default=None,
                         help="relation to test for membership, "
                         "pairs as a:b comma list")
    certify = coarse_sub.add_parser("certify")
    certify.add_argument("--radius", type=int, default=8)

    action = sub.add_parser("action")
    action_sub = action.add_subparsers(dest="action_command")
    sat = action_sub.add_parser("sat")
    sat.add_argument("--action", required=True)
    sat.add_argument("--base", required=True, help="semicolon list of "
                     "vertex literals, e.g. 0;1")
    sat.add_argument("--radius", type=int, default=6)
    msvarc = action_sub.add_parser("msvarc")
    msvarc.add_argument("--action", required=True)
    msvarc.add_argument("--x0", required=True)
    msvarc.add_argument("--radius", type=int, default=None)
    pullbacks = action_sub.add_parser("pullbacks")
    pullbacks.add_argument("--action", required=True,
                           choices=["z-line", "z2-grid", "f2-tree"])
    defect = action_sub.add_parser("defect")
    defect.add_argument("--action", required=True)
    defect.add_argument("--chart", required=True)
    defect.add_argument("--K", required=True, help="semicolon list of "
                        "vertex literals")
    defect.add_argument("--radii", default=None)

    hyp = sub.add_parser("hyperbolic")
    hyp_sub = hyp.add_subparsers(dest="hyperbolic_command")
    delta = hyp_sub.add_parser("delta")
    delta.add_argument("--graph", required=True)
    delta.add_argument("--radius", type=int, default=5)
    delta.add_argument("--cap", type=int, default=None)
    rays = hyp_sub.add_parser("rays")
    rays.add_argument("--graph", required=True)
    rays.add_argument("--radius", type=int, default=8)
    rays.add_argument("--from", dest="origin", default="0")
    rays.add_argument("--length", type=int, default=6)
    transport = hyp_sub.add_parser("transport")
    transport.add_argument("--case", default="doubled-line",
                           choices=["identity", "doubled-line", "parent"])
    transport.add_argument("--length", type=int, default=6)

    verify = sub.add_parser("verify")
    verify.add_argument("selector",
                        help="suite id, group prefix, or 'all'")
    return parser


def outdir_from(args):
    if args.out:
        return args.out
    return os.environ.get("COARSEKIT_OUT", "artifacts")


# ---------------------------------------------------------------------------
# Subcommand bodies: each returns the exit code.
# ---------------------------------------------------------------------------

def cmd_graph_build(man, args, outdir):
    graph = man.graph(args.graph)
    trunc = Truncation(graph, args.radius)
    edges = sum(1 for _ in trunc.directed_edges()) // 2
    payload = {
        "graph": args.graph,
        "radius": args.radius,
        "vertices": trunc.n,
        "edges": edges,
        "shell": [str(v) for v in trunc.shell_vertices(args.radius,
                                                       args.radius)][:16],
    }
    write_json(outdir, "graph-%s-%d.json" % (args.graph, args.radius),
               payload)
    print("graph %s radius %d: %d vertices, %d edges"
          % (args.graph, args.radius, trunc.n, edges))
    return 0


def cmd_floyd_dist(man, args, outdir):
    graph = man.graph(args.graph)
    func = FloydFunction.parse(args.f)
    x = parse_vertex(args.x)
    y = parse_vertex(args.y)
    center = parse_vertex(args.center) if args.center is not None else None
    value, tail = floyd_distance(graph, func, x, y, args.R, center=center)
    payload = {"graph": args.graph, "function": args.f, "x": str(x),
               "y": str(y), "R": args.R, "value": value, "tail": tail}
    write_json(outdir, "floyd-dist.json", payload)
    print("value %s" % format_cell(value))
    print("tail %s" % format_cell(tail))
    return 0


def cmd_floyd_clusters(man, args, outdir):
    comp = GraphCompactification.build(man.chart(args.chart),
                                       depth=args.depth,
                                       ray_count=args.rays)
    payload = {
        "chart": args.chart,
        "depth": comp.depth,
        "attach_threshold": comp.attach_threshold,
        "clusters": [c.to_json() for c in comp.clusters],
    }
    write_json(outdir, "floyd-clusters-%s.json" % args.chart, payload)
    print("%d clusters at depth %d" % (len(comp.clusters), comp.depth))
    for c in comp.clusters:
        print("  %s: %d rays" % (c.cluster_id, len(c.rays)))
    return 0


def cmd_floyd_karlsson(man, args, outdir):
    graph = man.graph(args.graph)
    func = FloydFunction.parse(args.f)
    radii = (parse_int_list(args.radii) if args.radii
             else [int(r) for r in man.budgets.get("karlsson_radii",
                                                   [4, 6, 8])])
    rows = []
    for R in radii:
        d = karlsson_defect(graph, func, R)
        rows.append((R, d, 2.0 ** (3 - R)))
    write_json(outdir, "karlsson-%s.json" % args.graph,
               {"graph": args.graph, "function": args.f,
                "table": [{"R": r, "defect": d, "bound": b}
                          for r, d, b in rows]})
    write_csv(outdir, "karlsson-%s.csv" % args.graph,
              ["R", "defect", "bound"], rows)
    if args.svg:
        write_svg(outdir, "karlsson-%s.svg" % args.graph,
                  [(float(r), d, "R=%d" % r) for r, d, b in rows])
    for r, d, b in rows:
        print("R=%d defect %s bound %s"
              % (r, format_cell(d), format_cell(b)))
    return 0


def _parse_pairs(text):
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, b = chunk.split(":")
        pairs.append((parse_vertex(a), parse_vertex(b)))
    return pairs


def cmd_coarse_closure(man, args, outdir):
    carrier = tuple(parse_vertex(p) for p in args.carrier.split(","))
    generators = [Relation.from_pairs(carrier, _parse_pairs(chunk))
                  for chunk in args.pairs.split(";") if chunk.strip()]
    basis = basis_closure(generators)
    report = basis.condition_report()
    payload = {
        "carrier": [str(p) for p in carrier],
        "generators": len(generators),
        "basis_size": len(basis.elements),
        "conditions": report,
    }
    if args.check:
        member = Relation.from_pairs(carrier, _parse_pairs(args.check))
        payload["check_member"] = bool(basis.dominating(member) is not None)
    write_json(outdir, "coarse-closure.json", payload)
    print("basis size %d; conditions %s"
          % (len(basis.elements),
             "ok" if all(report.values()) else "violated"))
    if "check_member" in payload:
        print("member: %s" % ("yes" if payload["check_member"] else "no"))
    return 0 if all(report.values()) else 1


def cmd_coarse_certify(man, args, outdir):
    radius = args.radius
    carrier = tuple(range(-radius, radius + 1))
    eps = metric_structure(carrier, lambda a, b: abs(a - b), [1, 2])
    evens = tuple(p for p in carrier if p % 2 == 0)
    sub = eps.subspace(evens)
    incl = CarrierMap(evens, carrier, {p: p for p in evens})
    back = quasi_inverse_from_image(incl, eps)
    if back is None:
        print("no quasi-inverse found")
        return 1
    result = is_coarse_equivalence(incl, back, sub, eps)
    payload = {"radius": radius, "dense": is_quasi_dense(evens, eps),
               "coarse_map": is_coarse_map(incl, sub, eps),
               "certificate": result.to_json()}
    write_json(outdir, "coarse-certify.json", payload)
    print("equivalence certificate: %s"
          % ("ok" if result.ok else "failed at %s" % result.failed))
    return 0 if result.ok else 1


def cmd_action_sat(man, args, outdir):
    action = man.action(args.action)
    base = [parse_vertex(p) for p in args.base.split(";") if p != ""]
    trunc = Truncation(action.graph, args.radius)
    pairs = actions_mod.saturation(action, base).pairs_on(trunc.vertices)
    payload = {
        "action": args.action,
        "base": [str(p) for p in base],
        "radius": args.radius,
        "pair_count": len(pairs),
        "sample": [[str(a), str(b)] for a, b in sorted(pairs)[:24]],
    }
    write_json(outdir, "action-sat-%s.json" % args.action, payload)
    print("%d saturated pairs on %d vertices" % (len(pairs), trunc.n))
    return 0


def cmd_action_msvarc(man, args, outdir):
    action = man.action(args.action)
    x0 = parse_vertex(args.x0)
    radius = args.radius or int(man.budgets.get("msvarc_radius", 6))
    carrier_map, report = actions_mod.milnor_svarc_map(action, x0, radius)
    payload = {
        "action": args.action,
        "x0": str(x0),
        "radius": radius,
        "ok": report["ok"],
        "failed": report["failed"],
        "K": [str(k) for k in report["K"]],
        "certificates": {k: bool(v)
                         for k, v in report["certificates"].items()},
    }
    write_json(outdir, "action-msvarc-%s.json" % args.action, payload)
    print("orbit map %s: %s" % (args.action,
                                "complete certificate" if report["ok"]
                                else "failed at %s" % report["failed"]))
    return 0 if report["ok"] else 1


_PULLBACK_CASES = {
    "z-line": (0, [0, 1], [("line-12", 6, 2), ("line-16", 14, 2)]),
    "z2-grid": ((0, 0), [(0, 0), (1, 0)],
                [("grid-12", 8, 8), ("grid-16", 10, 8)]),
    "f2-tree": ((), [()], [("cayley-f2-6", 4, 12), ("cayley-f2-8", 5, 12)]),
}


def cmd_action_pullbacks(man, args, outdir):
    from .suites import _PULLBACK_PATTERNS
    from ..groups import geodesic_words
    action = man.action(args.action)
    x0, K, chart_specs = _PULLBACK_CASES[args.action]
    comps = [GraphCompactification.build(man.chart(cn), depth=d,
                                         ray_count=rc)
             for cn, d, rc in chart_specs]
    sets = [geodesic_words(action.group, pattern, length)
            for pattern, length in _PULLBACK_PATTERNS[args.action]]
    out = actions_mod.compare_pullbacks(action, x0, comps, sets, K)
    payload = {
        "action": args.action,
        "charts": [c[0] for c in chart_specs],
        "checked": out["checked"],
        "ok": out["ok"],
        "mismatches": out["mismatches"],
    }
    write_json(outdir, "action-pullbacks-%s.json" % args.action, payload)
    print("%d ray sets, %s" % (out["checked"],
                               "agree" if out["ok"] else "mismatch"))
    return 0 if out["ok"] else 1


def cmd_action_defect(man, args, outdir):
    action = man.action(args.action)
    chart = man.chart(args.chart)
    K = [parse_vertex(p) for p in args.K.split(";") if p != ""]
    radii = (parse_int_list(args.radii) if args.radii
             else [int(r) for r in man.budgets.get("perspectivity_radii",
                                                   [4, 8, 12])])
    rows = []
    inconclusive = False
    for R in radii:
        d = actions_mod.group_perspectivity_defect(action, K, chart, R)
        rows.append((R, d))
        if d is None:
            inconclusive = True
    write_json(outdir, "action-defect-%s.json" % args.action,
               {"action": args.action, "chart": args.chart,
                "K": [str(k) for k in K],
                "table": [{"R": r, "defect": d} for r, d in rows]})
    for r, d in rows:
        print("R=%d defect %s" % (r, format_cell(d) if d is not None
                                  else "none"))
    return 2 if inconclusive else 0


def cmd_hyperbolic_delta(man, args, outdir):
    trunc = Truncation(man.graph(args.graph), args.radius)
    cap = args.cap or int(man.budgets.get("delta_cap", 120000))
    value = hyper.delta_estimate(trunc, cap=cap)
    payload = {"graph": args.graph, "radius": args.radius, "cap": cap,
               "delta": value}
    write_json(outdir, "hyper-delta-%s.json" % args.graph, payload)
    if args.svg:
        write_svg(outdir, "hyper-delta-%s.svg" % args.graph,
                  [(float(args.radius), value, args.graph)])
    print("delta %s" % format_cell(value))
    return 0


def cmd_hyperbolic_rays(man, args, outdir):
    trunc = Truncation(man.graph(args.graph), args.radius)
    origin = parse_vertex(args.origin)
    rays = hyper.rays_from(trunc, origin, args.length)
    payload = {
        "graph": args.graph, "radius": args.radius, "origin": str(origin),
        "length": args.length, "count": len(rays),
        "rays": [[str(v) for v in r] for r in rays[:12]],
    }
    write_json(outdir, "hyper-rays-%s.json" % args.graph, payload)
    print("%d geodesic rays of length %d" % (len(rays), args.length))
    return 0


def cmd_hyperbolic_transport(man, args, outdir):
    length = args.length
    if args.case == "identity":
        trunc = Truncation(man.graph("tree3"), max(length, 6))
        gamma = hyper.rays_from(trunc, (), length)[0]
        reports = [hyper.qi_ray_transport(lambda v: v, lambda v: v, gamma,
                                          trunc, target_trunc=trunc)]
    elif args.case == "doubled-line":
        x_trunc = Truncation(man.graph("line"), 2 * length + 2)
        y_trunc = Truncation(man.graph("line2"), length)
        reports = [hyper.qi_ray_transport(lambda v: 2 * (v // 2),
                                          lambda v: v, gamma, x_trunc,
                                          target_trunc=y_trunc)
                   for gamma in hyper.rays_from(y_trunc, 0, length)]
    else:
        trunc = Truncation(man.graph("tree3"), length + 2)
        reports = [hyper.qi_ray_transport(None,
                                          lambda v: v[:-1] if v else v,
                                          gamma, trunc)
                   for gamma in hyper.rays_from(trunc, (), length)[:6]]
    payload = {
        "case": args.case,
        "length": length,
        "bounds": [r.bound for r in reports],
        "ok": all(r.ok for r in reports),
        "rays": [r.ray.to_json() for r in reports[:4]],
    }
    write_json(outdir, "hyper-transport-%s.json" % args.case, payload)
    print("max bound %s over %d rays"
          % (format_cell(max(r.bound for r in reports)), len(reports)))
    return 0 if payload["ok"] else 1


def cmd_verify(man, args, outdir):
    ids = resolve_selector(args.selector)
    if not ids:
        raise UsageError("unknown suite selector %r (try 'all' or one of "
                         "%s)" % (args.selector, ", ".join(sorted(SUITES))))
    reports = []
    for suite_id in ids:
        start = time.time()
        rep = SUITES[suite_id](man)
        rep.wall_clock = time.time() - start
        reports.append(rep)
        print("%-28s %-12s %3d/%d  (%.2fs)"
              % (rep.suite_id, rep.status, rep.passed, rep.instances,
                 rep.wall_clock))
        write_json(outdir, "verify-%s.json" % rep.suite_id,
                   rep.to_artifact())
    summary = {
        "selector": args.selector,
        "profile": man.budgets.get("profile", "default"),
        "seed": man.seed,
        "suites": [rep.to_artifact() for rep in reports],
        "failed": sum(rep.failed for rep in reports),
        "inconclusive": sum(rep.inconclusive for rep in reports),
    }
    write_json(outdir, "summary.json", summary)
    write_csv(outdir, "summary.csv",
              ["suite", "status", "instances", "passed", "failed",
               "inconclusive"],
              [(rep.suite_id, rep.status, rep.instances, rep.passed,
                rep.failed, rep.inconclusive) for rep in reports])
    print("total: %d suites, %d failed, %d inconclusive"
          % (len(reports), summary["failed"], summary["inconclusive"]))
    if summary["failed"]:
        return 1
    if summary["inconclusive"]:
        return 2
    return 0


# ---------------------------------------------------------------------------

def dispatch(args):
    outdir = outdir_from(args)
    man = load_manifest(args.manifest, budget_profile=args.budget)
    if args.seed is not None:
        man.data["seed"] = args.seed
        man = Manifest(man.data)
    if args.command == "graph":
        if args.graph_command == "build":
            return cmd_graph_build(man, args, outdir)
        raise UsageError("graph: choose a subcommand (build)")
    if args.command == "floyd":
        if args.floyd_command == "dist":
            return cmd_floyd_dist(man, args, outdir)
        if args.floyd_command == "clusters":
            return cmd_floyd_clusters(man, args, outdir)
        if args.floyd_command == "karlsson":
            return cmd_floyd_karlsson(man, args, outdir)
        raise UsageError("floyd: choose a subcommand (dist, clusters, "
                         "karlsson)")
    if args.command == "coarse":
        if args.coarse_command == "closure":
            return cmd_coarse_closure(man, args, outdir)
        if args.coarse_command == "certify":
            return cmd_coarse_certify(man, args, outdir)
        raise UsageError("coarse: choose a subcommand (closure, certify)")
    if args.command == "action":
        if args.action_command == "sat":
            return cmd_action_sat(man, args, outdir)
        if args.action_command == "msvarc":
            return cmd_action_msvarc(man, args, outdir)
        if args.action_command == "pullbacks":
            return cmd_action_pullbacks(man, args, outdir)
        if args.action_command == "defect":
            return cmd_action_defect(man, args, outdir)
        raise UsageError("action: choose a subcommand (sat, msvarc, "
                         "pullbacks, defect)")
    if args.command == "hyperbolic":
        if args.hyperbolic_command == "delta":
            return cmd_hyperbolic_delta(man, args, outdir)
        if args.hyperbolic_command == "rays":
            return cmd_hyperbolic_rays(man, args, outdir)
        if args.hyperbolic_command == "transport":
            return cmd_hyperbolic_transport(man, args, outdir)
        raise UsageError("hyperbolic: choose a subcommand (delta, rays, "
                         "transport)")
    if args.command == "verify":
        return cmd_verify(man, args, outdir)
    raise UsageError("no command given (graph, floyd, coarse, action, "
                     "hyperbolic, verify)")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return dispatch(args)
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 3
    except ManifestError as exc:
        print("manifest error: %s" % exc, file=sys.stderr)
        return 3
    except CoarseKitError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
