"""The manifest: named graphs, groups, actions, scaling functions, charts,
and budgets, resolved into live objects with every cross-reference checked.

The default manifest covers all built-in instances; a JSON file can
override or extend any section, and command-line flags win over both.
"""

import copy
import json

from .. import actions as actions_mod
from ..errors import CoarseKitError, PreconditionError
from ..floyd import FloydChart, FloydFunction
from ..graphs import build_graph
from ..groups import (FinitePermGroup, FreeGroup, InvolutionProductGroup,
                      ZnGroup, cayley_graph, trivial_group)


class ManifestError(CoarseKitError):
    """An unresolved reference or malformed manifest entry."""


DEFAULT_MANIFEST = {
    "seed": 8141,
    "graphs": {
        "line": {"kind": "line"},
        "line2": {"kind": "line", "step": 2},
        "grid": {"kind": "grid"},
        "tree3": {"kind": "tree", "branching": 3},
        "tree4": {"kind": "tree", "branching": 4},
        "cycle6": {"kind": "cycle", "size": 6},
        "cycle8": {"kind": "cycle", "size": 8},
        "cayley-f2": {"kind": "cayley", "group": "f2"},
    },
    "groups": {
        "z": {"kind": "zn", "rank": 1},
        "z2": {"kind": "zn", "rank": 2},
        "f2": {"kind": "free", "rank": 2},
        "w3": {"kind": "involutions", "count": 3},
        "swap": {"kind": "perm", "generators": [[1, 0]]},
        "trivial": {"kind": "zn", "rank": 0},
    },
    "actions": {
        "z-line": {"kind": "integer-translation"},
        "even-line": {"kind": "even-translation"},
        "z2-grid": {"kind": "grid-translation"},
        "f2-tree": {"kind": "free-tree", "rank": 2},
        "w3-tree": {"kind": "involution-tree", "count": 3},
        "swap-pair": {"kind": "swap"},
        "trivial-line": {"kind": "trivial", "graph": "line"},
        "trivial-grid": {"kind": "trivial", "graph": "grid"},
    },
    "functions": {
        "geom-half": "geom:0.5",
        "geom-quarter": "geom:0.25",
        "power-2": "power:2",
        "const-1": "const:1",
    },
    "charts": {
        "line-12": {"graph": "line", "function": "geom-half", "radius": 12},
        "line-14": {"graph": "line", "function": "geom-half", "radius": 14},
        "line-16": {"graph": "line", "function": "geom-half", "radius": 16},
        "line2-8": {"graph": "line2", "function": "geom-quarter", "radius": 8},
        "grid-12": {"graph": "grid", "function": "geom-half", "radius": 12},
        "grid-14": {"graph": "grid", "function": "geom-half", "radius": 14},
        "grid-16": {"graph": "grid", "function": "geom-half", "radius": 16},
        "tree3-13": {"graph": "tree3", "function": "geom-half", "radius": 13},
        "tree3-8": {"graph": "tree3", "function": "geom-half", "radius": 8},
        "cayley-f2-6": {"graph": "cayley-f2", "function": "geom-half",
                        "radius": 6},
        "cayley-f2-8": {"graph": "cayley-f2", "function": "geom-half",
                        "radius": 8},
        "line-const-12": {"graph": "line", "function": "const-1",
                          "radius": 12},
    },
    "budgets": {
        "profile": "default",
        "oracle_graphs": 50,
        "oracle_max_vertices": 12,
        "karlsson_radii": [4, 6, 8],
        "perspectivity_radii": [4, 8, 12],
        "msvarc_radius": 6,
        "pullback_rays": 10,
        "ray_length": 10,
        "tolerance": 1e-9,
        "delta_cap": 120000,
    },
}

TINY_BUDGETS = {
    "profile": "tiny",
    "oracle_graphs": 6,
    "oracle_max_vertices": 8,
    "karlsson_radii": [4],
    "perspectivity_radii": [4, 20],
    "msvarc_radius": 3,
    "pullback_rays": 4,
    "ray_length": 6,
    "tolerance": 1e-9,
    "delta_cap": 20000,
}


def _merge(base, override):
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def load_manifest(path=None, budget_profile=None):
    data = copy.deepcopy(DEFAULT_MANIFEST)
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            try:
                override = json.load(fh)
            except ValueError as exc:
                raise ManifestError("manifest %s is not valid JSON: %s"
                                    % (path, exc))
        if not isinstance(override, dict):
            raise ManifestError("manifest root must be a JSON object")
        data = _merge(data, override)
    if budget_profile == "tiny":
        data["budgets"] = dict(TINY_BUDGETS)
    elif budget_profile not in (None, "default"):
        raise ManifestError("unknown budget profile %r" % budget_profile)
    return Manifest(data)


class Manifest:
    """Resolved registry with memoised builders."""

    def __init__(self, data):
        self.data = data
        self.seed = int(data.get("seed", 0))
        self.budgets = dict(data.get("budgets", {}))
        for key, value in self.budgets.items():
            if key == "profile":
                continue
            values = value if isinstance(value, list) else [value]
            if any(v <= 0 for v in values):
                raise ManifestError("budget %s must be positive" % key)
        self._graphs = {}
        self._groups = {}
        self._actions = {}
        self._functions = {}
        self._charts = {}
        self._validate_references()

    def _validate_references(self):
        for name, spec in self.data.get("graphs", {}).items():
            if spec.get("kind") == "cayley" and \
                    spec.get("group") not in self.data.get("groups", {}):
                raise ManifestError(
                    "graph %r references unknown group %r"
                    % (name, spec.get("group")))
        for name, spec in self.data.get("actions", {}).items():
            graph = spec.get("graph")
            if graph is not None and graph not in self.data.get("graphs", {}):
                raise ManifestError(
                    "action %r references unknown graph %r" % (name, graph))
        for name, spec in self.data.get("charts", {}).items():
            if spec.get("graph") not in self.data.get("graphs", {}):
                raise ManifestError(
                    "chart %r references unknown graph %r"
                    % (name, spec.get("graph")))
            if spec.get("function") not in self.data.get("functions", {}):
                raise ManifestError(
                    "chart %r references unknown function %r"
                    % (name, spec.get("function")))

    def graph_names(self):
        return sorted(self.data.get("graphs", {}))

    def graph(self, name):
        if name in self._graphs:
            return self._graphs[name]
        specs = self.data.get("graphs", {})
        if name in specs:
            spec = specs[name]
            kind = spec.get("kind")
            if kind == "line":
                got = build_graph("line") if spec.get("step", 1) == 1 else \
                    build_graph("line:%d" % spec["step"])
            elif kind == "grid":
                got = build_graph("grid")
            elif kind == "tree":
                got = build_graph("tree:%d" % spec.get("branching", 3))
            elif kind == "cycle":
                got = build_graph("cycle:%d" % spec.get("size", 6))
            elif kind == "cayley":
                got = cayley_graph(self.group(spec["group"]))
            elif kind == "file":
                got = build_graph("file:%s" % spec["path"])
            else:
                raise ManifestError("unknown graph kind %r" % kind)
        else:
            try:
                got = build_graph(name)
            except (CoarseKitError, ValueError):
                raise ManifestError("unknown graph %r" % name)
        self._graphs[name] = got
        return got

    def group(self, name):
        if name in self._groups:
            return self._groups[name]
        spec = self.data.get("groups", {}).get(name)
        if spec is None:
            raise ManifestError("unknown group %r" % name)
        kind = spec.get("kind")
        if kind == "zn":
            got = ZnGroup(spec.get("rank", 1))
        elif kind == "free":
            got = FreeGroup(spec.get("rank", 2))
        elif kind == "involutions":
            got = InvolutionProductGroup(spec.get("count", 3))
        elif kind == "perm":
            got = FinitePermGroup([tuple(g) for g in spec["generators"]],
                                  name=name)
        else:
            raise ManifestError("unknown group kind %r" % kind)
        self._groups[name] = got
        return got

    def action(self, name):
        if name in self._actions:
            return self._actions[name]
        spec = self.data.get("actions", {}).get(name)
        if spec is None:
            raise ManifestError("unknown action %r" % name)
        kind = spec.get("kind")
        if kind == "integer-translation":
            got = actions_mod.integer_translation()
        elif kind == "even-translation":
            got = actions_mod.even_translation()
        elif kind == "grid-translation":
            got = actions_mod.grid_translation()
        elif kind == "free-tree":
            got = actions_mod.free_group_action(spec.get("rank", 2))
        elif kind == "involution-tree":
            got = actions_mod.involution_tree_action(spec.get("count", 3))
        elif kind == "swap":
            got = actions_mod.swap_action()
        elif kind == "trivial":
            got = actions_mod.trivial_action(self.graph(spec["graph"]))
        elif kind == "cayley-left":
            got = actions_mod.cayley_left_action(self.group(spec["group"]))
        else:
            raise ManifestError("unknown action kind %r" % kind)
        self._actions[name] = got
        return got

    def function(self, name):
        if name in self._functions:
            return self._functions[name]
        spec = self.data.get("functions", {}).get(name, name)
        try:
            got = FloydFunction.parse(spec)
        except (CoarseKitError, ValueError):
            raise ManifestError("cannot parse scaling function %r" % name)
        self._functions[name] = got
        return got

    def chart(self, name):
        if name in self._charts:
            return self._charts[name]
        spec = self.data.get("charts", {}).get(name)
        if spec is None:
            raise ManifestError("unknown chart %r" % name)
        try:
            got = FloydChart(self.graph(spec["graph"]),
                             self.function(spec["function"]),
                             int(spec["radius"]))
        except PreconditionError as exc:
            raise ManifestError("chart %r: %s" % (name, exc))
        self._charts[name] = got
        return got
