"""Finite topological spaces, union-additive closed-set maps, and glueings.

A space on n points is stored as a family of bitmasks: point ``i`` is bit
``i``, a subset of the space is an ``int`` below ``2**n``, and the closed
sets form a ``frozenset`` of such masks.  Everything here is exact integer
arithmetic; continuity of a point map is always decided by enumerating
preimages of closed sets, never by a shortcut criterion, so the pointwise
characterizations stay independently testable.

The central construction is the glued space ``X +_f Y`` attached along an
admissible map ``f``: a subset ``S`` of the disjoint union is closed exactly
when ``S ∩ X`` is closed in ``X``, ``S ∩ Y`` is closed in ``Y``, and
``f(S ∩ X) ⊆ S``.  Pullbacks of admissible maps along point maps, their
universal property, their behaviour under composition, and the nine-arrow
continuity diagram they generate are all exposed as checkable operations.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import BudgetExceeded, CarrierMismatch, InvalidSpace, PreconditionError

ENUM_POINT_BUDGET = 4


def _bits(mask: int) -> Iterable[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


class FinSpace:
    """A finite topological space presented by its closed sets.

    ``points`` fixes an ordering used for the bitmask encoding; the family
    must contain the empty set and the full point set and be closed under
    pairwise union and intersection.
    """

    def __init__(self, points: Sequence, closed_sets: Iterable[Iterable]):
        self.points: Tuple = tuple(points)
        self.index: Dict = {p: i for i, p in enumerate(self.points)}
        if len(self.index) != len(self.points):
            raise InvalidSpace("duplicate point ids")
        self.n = len(self.points)
        self.full = (1 << self.n) - 1
        masks = frozenset(self.mask(c) for c in closed_sets)
        if 0 not in masks or self.full not in masks:
            raise InvalidSpace("closed sets must include the empty set and the whole space")
        for a in masks:
            for b in masks:
                if (a | b) not in masks or (a & b) not in masks:
                    raise InvalidSpace("closed sets must be union- and intersection-closed")
        self.closed_masks: frozenset = masks
        self.sorted_closed: Tuple[int, ...] = tuple(sorted(masks))
        self.point_closures: Tuple[int, ...] = tuple(
            self.closure(1 << i) for i in range(self.n)
        )
        self.distinct_closures: Tuple[int, ...] = tuple(sorted(set(self.point_closures)))

    def mask(self, subset: Iterable) -> int:
        m = 0
        for p in subset:
            i = self.index.get(p)
            if i is None:
                raise InvalidSpace("unknown point id: %r" % (p,))
            m |= 1 << i
        return m

    def members(self, mask: int) -> Tuple:
        """The points of ``mask``, in the space's point order."""
        return tuple(self.points[i] for i in _bits(mask))

    def closure(self, mask: int) -> int:
        """Smallest closed superset of ``mask``."""
        out = self.full
        for c in self.closed_masks:
            if c & mask == mask:
                out &= c
        return out

    def is_closed(self, mask: int) -> bool:
        return mask in self.closed_masks

    def subspace(self, points: Sequence) -> "FinSpace":
        """Subspace topology on ``points`` (which keep their ids)."""
        sub = tuple(points)
        keep = self.mask(sub)
        fams = {frozenset(self.members(c & keep)) for c in self.closed_masks}
        return FinSpace(sub, fams)

    def family_of_sets(self) -> frozenset:
        """The closed sets as a frozenset of frozensets of point ids."""
        return frozenset(frozenset(self.members(c)) for c in self.closed_masks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinSpace):
            return NotImplemented
        return (
            frozenset(self.points) == frozenset(other.points)
            and self.family_of_sets() == other.family_of_sets()
        )

    def __hash__(self) -> int:
        return hash((frozenset(self.points), self.family_of_sets()))

    def __repr__(self) -> str:
        return "FinSpace(%r, %d closed sets)" % (list(self.points), len(self.closed_masks))

    def _sort_key(self, mask: int) -> Tuple:
        return (bin(mask).count("1"), tuple(_bits(mask)))

    def to_json(self) -> dict:
        sets = sorted(self.closed_masks, key=self._sort_key)
        return {
            "points": [str(p) for p in self.points],
            "closed_sets": [[str(p) for p in self.members(c)] for c in sets],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FinSpace":
        return cls(data["points"], data["closed_sets"])


def relabel(space: FinSpace, mapping: Dict) -> FinSpace:
    """Rename the points of ``space`` via an injective ``mapping``."""
    new_points = [mapping[p] for p in space.points]
    if len(set(new_points)) != len(new_points):
        raise InvalidSpace("relabeling must be injective")
    fams = [[mapping[p] for p in space.members(c)] for c in space.closed_masks]
    return FinSpace(new_points, fams)


class AdmissibleMap:
    """A union-preserving, empty-preserving map between closed-set families.

    The map is stored by its values on the distinct point closures of the
    source; every closed set is the union of its points' closures, so
    evaluation ``f(A) = ∪_{x∈A} table[cl{x}]`` determines the map completely
    and makes additivity structural.
    """

    def __init__(self, source: FinSpace, target: FinSpace, closure_table: Dict[int, int]):
        self.source = source
        self.target = target
        if set(closure_table) != set(source.distinct_closures):
            raise InvalidSpace("table keys must be exactly the distinct point closures")
        for value in closure_table.values():
            if value not in target.closed_masks:
                raise InvalidSpace("table values must be closed in the target")
        self.closure_table: Dict[int, int] = {k: closure_table[k] for k in sorted(closure_table)}
        self._point_value: Tuple[int, ...] = tuple(
            self.closure_table[source.point_closures[i]] for i in range(source.n)
        )

    @classmethod
    def from_sets(cls, source: FinSpace, target: FinSpace, table: Dict) -> "AdmissibleMap":
        """Build from a table keyed by closures given as point collections."""
        by_mask = {source.mask(k): target.mask(v) for k, v in table.items()}
        return cls(source, target, by_mask)

    @classmethod
    def empty(cls, source: FinSpace, target: FinSpace) -> "AdmissibleMap":
        """The map sending every closed set to the empty set."""
        return cls(source, target, {c: 0 for c in source.distinct_closures})

    def evaluate(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            out |= self._point_value[i]
        return out

    def dominates(self, other: "AdmissibleMap") -> bool:
        """True when ``other(A) ⊆ self(A)`` for every closed ``A``."""
        if self.source != other.source or self.target != other.target:
            raise CarrierMismatch("maps must share source and target")
        return all(
            other.evaluate(a) & ~self.evaluate(a) == 0 for a in self.source.closed_masks
        )

    def signature(self) -> Tuple[Tuple[int, int], ...]:
        """Evaluation on each distinct point closure; determines the map.

        Two tables can induce the same map (a table value may be absorbed
        by the values of smaller closures), so equality is extensional.
        """
        return tuple((c, self.evaluate(c)) for c in self.source.distinct_closures)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AdmissibleMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.signature() == other.signature()
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.signature()))

    def __repr__(self) -> str:
        parts = [
            "%r->%r" % (self.source.members(k), self.target.members(v))
            for k, v in self.closure_table.items()
        ]
        return "AdmissibleMap(%s)" % ", ".join(parts)

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "table": [
                {
                    "closure": [str(p) for p in self.source.members(k)],
                    "value": [str(p) for p in self.target.members(v)],
                }
                for k, v in self.closure_table.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "AdmissibleMap":
        source = FinSpace.from_json(data["source"])
        target = FinSpace.from_json(data["target"])
        table = {tuple(row["closure"]): tuple(row["value"]) for row in data["table"]}
        return cls.from_sets(source, target, table)


class PointMap:
    """A total map on points between two finite spaces."""

    def __init__(self, source: FinSpace, target: FinSpace, assignment: Dict):
        self.source = source
        self.target = target
        self.assignment: Dict = dict(assignment)
        bits = []
        for p in source.points:
            if p not in self.assignment:
                raise InvalidSpace("assignment must be total on source points")
            q = self.assignment[p]
            if q not in target.index:
                raise InvalidSpace("assignment value %r is not a target point" % (q,))
            bits.append(target.index[q])
        self._bit: Tuple[int, ...] = tuple(bits)

    @classmethod
    def identity(cls, space: FinSpace) -> "PointMap":
        return cls(space, space, {p: p for p in space.points})

    def __call__(self, p):
        return self.assignment[p]

    def image_mask(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            out |= 1 << self._bit[i]
        return out

    def preimage_mask(self, mask: int) -> int:
        out = 0
        for i in range(self.source.n):
            if (mask >> self._bit[i]) & 1:
                out |= 1 << i
        return out

    def is_continuous(self) -> bool:
        """Exhaustive preimage test: every closed set pulls back closed."""
        return all(
            self.preimage_mask(c) in self.source.closed_masks
            for c in self.target.closed_masks
        )

    def __repr__(self) -> str:
        return "PointMap(%r)" % (self.assignment,)


def compose(outer: PointMap, inner: PointMap) -> PointMap:
    """The point map ``outer ∘ inner``."""
    if inner.target != outer.source:
        raise CarrierMismatch("inner target must equal outer source")
    return PointMap(
        inner.source, outer.target, {p: outer(inner(p)) for p in inner.source.points}
    )


class GluedSpace:
    """The space ``X +_f Y``: the disjoint union of X and Y glued along f.

    ``space`` is the resulting FinSpace on ``X.points + Y.points``; the base
    X always carries its original topology as an open subspace, and the
    boundary Y its original topology as a closed subspace.
    """

    def __init__(self, base: FinSpace, boundary: FinSpace, attaching: AdmissibleMap,
                 space: FinSpace):
        self.base = base
        self.boundary = boundary
        self.attaching = attaching
        self.space = space
        self.base_mask = space.mask(base.points)
        self.boundary_mask = space.mask(boundary.points)

    @property
    def base_is_open(self) -> bool:
        return self.space.is_closed(self.boundary_mask)

    @property
    def closed_sets(self) -> frozenset:
        return self.space.closed_masks

    def __repr__(self) -> str:
        return "GluedSpace(%r + %r, %d closed sets)" % (
            list(self.base.points), list(self.boundary.points), len(self.space.closed_masks)
        )


def glue(x: FinSpace, y: FinSpace, f: AdmissibleMap) -> GluedSpace:
    """Glue ``y`` onto ``x`` along the admissible map ``f``.

    A subset ``A ∪ B`` (A ⊆ X, B ⊆ Y) is closed exactly when A is closed in
    X, B is closed in Y, and ``f(A) ⊆ B``; the resulting family is validated
    to be a topology on the disjoint union.
    """
    if f.source != x or f.target != y:
        raise CarrierMismatch("attaching map must go from the base to the boundary")
    if set(x.points) & set(y.points):
        raise InvalidSpace("point sets must be disjoint")
    points = x.points + y.points
    shift = x.n
    families: List[Tuple] = []
    for a in x.sorted_closed:
        fa = f.evaluate(a)
        for b in y.sorted_closed:
            if fa & ~b == 0:
                families.append(
                    tuple(x.members(a)) + tuple(y.members(b))
                )
    space = FinSpace(points, families)
    if len(space.closed_masks) != len(families):
        raise InvalidSpace("glue produced duplicate closed sets")
    return GluedSpace(x, y, f, space)


def glued_map(pi: PointMap, varpi: PointMap, source: GluedSpace,
              target: GluedSpace) -> PointMap:
    """The point map ``pi + varpi`` between two glued spaces."""
    if pi.source != source.base or varpi.source != source.boundary:
        raise CarrierMismatch("component sources must match the glued source")
    if pi.target != target.base or varpi.target != target.boundary:
        raise CarrierMismatch("component targets must match the glued target")
    assignment = {p: pi(p) for p in source.base.points}
    assignment.update({q: varpi(q) for q in source.boundary.points})
    return PointMap(source.space, target.space, assignment)


def id_glue_continuous(f: AdmissibleMap, g: AdmissibleMap) -> bool:
    """Whether the identity ``X +_f Y → X +_g Y`` is continuous.

    Decided by the preimage-of-closed test on the two glueings; equivalent
    to ``f(A) ⊆ g(A)`` for every closed A, which the tests assert separately.
    """
    if f.source != g.source or f.target != g.target:
        raise CarrierMismatch("maps must share source and target")
    gf = glue(f.source, f.target, f)
    gg = glue(g.source, g.target, g)
    idb = PointMap.identity(f.source)
    idy = PointMap.identity(f.target)
    return glued_map(idb, idy, gf, gg).is_continuous()


def pullback_formula(f: AdmissibleMap, pi: PointMap, varpi: PointMap, mask: int) -> int:
    """Direct evaluation ``Cl(varpi⁻¹(f(Cl(pi(mask)))))`` for one subset."""
    x = f.source
    z = varpi.source
    return z.closure(varpi.preimage_mask(f.evaluate(x.closure(pi.image_mask(mask)))))


def pullback(f: AdmissibleMap, pi: PointMap, varpi: PointMap) -> AdmissibleMap:
    """Pull ``f`` back along the continuous point maps ``pi`` and ``varpi``.

    For ``f: Closed(X) → Closed(W)``, ``pi: Y → X`` and ``varpi: Z → W``,
    the result sends a closed set A of Y to the closure in Z of
    ``varpi⁻¹(f(Cl_X(pi(A))))``.  Non-continuous ``pi`` or ``varpi`` is an
    error, detected by the preimage test.
    """
    if pi.target != f.source:
        raise CarrierMismatch("pi must land in the source space of f")
    if varpi.target != f.target:
        raise CarrierMismatch("varpi must land in the target space of f")
    if not pi.is_continuous():
        raise PreconditionError("pi is not continuous")
    if not varpi.is_continuous():
        raise PreconditionError("varpi is not continuous")
    y = pi.source
    z = varpi.source
    table = {c: pullback_formula(f, pi, varpi, c) for c in y.distinct_closures}
    return AdmissibleMap(y, z, table)


def check_pullback_universal(f: AdmissibleMap, pi: PointMap, varpi: PointMap,
                             fprime: AdmissibleMap) -> bool:
    """Universal property of the pullback.

    Requires that ``pi + varpi`` is continuous from the glueing along
    ``fprime`` to the glueing along ``f`` (a PreconditionError otherwise,
    so a malformed question is never reported as a counterexample); returns
    whether the identity into the glueing along the pullback is continuous.
    """
    y = pi.source
    z = varpi.source
    if fprime.source != y or fprime.target != z:
        raise CarrierMismatch("fprime must map Closed(Y) to Closed(Z)")
    fstar = pullback(f, pi, varpi)
    g_prime = glue(y, z, fprime)
    g_target = glue(f.source, f.target, f)
    if not glued_map(pi, varpi, g_prime, g_target).is_continuous():
        raise PreconditionError("pi + varpi is not continuous from the fprime glueing")
    g_star = glue(y, z, fstar)
    idy = PointMap.identity(y)
    idz = PointMap.identity(z)
    return glued_map(idy, idz, g_prime, g_star).is_continuous()


def check_pullback_composition(f: AdmissibleMap, pi: PointMap, varpi: PointMap,
                               rho: PointMap, varrho: PointMap) -> bool:
    """Pulling back in two steps dominates pulling back in one.

    With ``rho: U → Y`` and ``varrho: V → Z`` continuous, the pullback along
    the composites is contained in the iterated pullback on every closed set.
    """
    if rho.target != pi.source:
        raise CarrierMismatch("rho must land in the source of pi")
    if varrho.target != varpi.source:
        raise CarrierMismatch("varrho must land in the source of varpi")
    fstar = pullback(f, pi, varpi)
    iterated = pullback(fstar, rho, varrho)
    onestep = pullback(f, compose(pi, rho), compose(varpi, varrho))
    u = rho.source
    return all(
        onestep.evaluate(a) & ~iterated.evaluate(a) == 0 for a in u.closed_masks
    )


def composition_strictness_witness(f: AdmissibleMap, pi: PointMap, varpi: PointMap,
                                   rho: PointMap, varrho: PointMap) -> Optional[dict]:
    """A closed set where the iterated pullback strictly exceeds the one-step one.

    Returns None when the two pullbacks agree everywhere; the containment
    itself is guaranteed, strictness is not, so a witness is only reported
    when found.
    """
    fstar = pullback(f, pi, varpi)
    iterated = pullback(fstar, rho, varrho)
    onestep = pullback(f, compose(pi, rho), compose(varpi, varrho))
    u = rho.source
    v = varrho.source
    for a in u.sorted_closed:
        one = onestep.evaluate(a)
        two = iterated.evaluate(a)
        if one != two and one & ~two == 0:
            return {
                "closed_set": u.members(a),
                "one_step": v.members(one),
                "iterated": v.members(two),
            }
    return None


def eight_lemma_report(f: AdmissibleMap, pi: PointMap, varpi: PointMap,
                       g: Optional[AdmissibleMap] = None) -> Dict[str, bool]:
    """Continuity verdicts for each arrow of the pullback diagram.

    ``f: Closed(X) → Closed(W)``, ``pi: Y → X`` and ``varpi: Z → W``
    continuous, and ``g: Closed(Y) → Closed(Z)`` any admissible map making
    ``pi + varpi`` continuous between the glueings (defaults to the pullback
    of f along both maps, which always qualifies).  The report keys name the
    arrows with f* (pullback along pi only), f' (pullback along varpi only),
    f** (pullback along both), and their iterates (f*)* and (f')'.
    """
    x = f.source
    w = f.target
    y = pi.source
    z = varpi.source
    id_x = PointMap.identity(x)
    id_y = PointMap.identity(y)
    id_z = PointMap.identity(z)
    id_w = PointMap.identity(w)
    fstar = pullback(f, pi, id_w)
    fstar_star = pullback(fstar, id_y, varpi)
    fboth = pullback(f, pi, varpi)
    fprime = pullback(f, id_x, varpi)
    fprime_prime = pullback(fprime, pi, id_z)
    if g is None:
        g = fboth
    if g.source != y or g.target != z:
        raise CarrierMismatch("g must map Closed(Y) to Closed(Z)")

    g_xw = glue(x, w, f)
    g_g = glue(y, z, g)
    g_both = glue(y, z, fboth)
    g_ss = glue(y, z, fstar_star)
    g_sw = glue(y, w, fstar)
    g_pp = glue(y, z, fprime_prime)
    g_pz = glue(x, z, fprime)

    if not glued_map(pi, varpi, g_g, g_xw).is_continuous():
        raise PreconditionError("pi + varpi is not continuous from the g glueing")

    report = {
        "id+id: Y+gZ -> Y+f**Z":
            glued_map(id_y, id_z, g_g, g_both).is_continuous(),
        "id+id: Y+f**Z -> Y+(f*)*Z":
            glued_map(id_y, id_z, g_both, g_ss).is_continuous(),
        "id+varpi: Y+(f*)*Z -> Y+f*W":
            glued_map(id_y, varpi, g_ss, g_sw).is_continuous(),
        "pi+id: Y+f*W -> X+fW":
            glued_map(pi, id_w, g_sw, g_xw).is_continuous(),
        "pi+varpi: Y+gZ -> X+fW":
            glued_map(pi, varpi, g_g, g_xw).is_continuous(),
        "id+id: Y+f**Z -> Y+(f')'Z":
            glued_map(id_y, id_z, g_both, g_pp).is_continuous(),
        "pi+id: Y+(f')'Z -> X+f'Z":
            glued_map(pi, id_z, g_pp, g_pz).is_continuous(),
        "id+varpi: X+f'Z -> X+fW":
            glued_map(id_x, varpi, g_pz, g_xw).is_continuous(),
        "id+varpi: Y+gZ -> Y+f*W":
            glued_map(id_y, varpi, g_g, g_sw).is_continuous(),
    }
    return report


def check_eight_lemma(f: AdmissibleMap, pi: PointMap, varpi: PointMap,
                      g: Optional[AdmissibleMap] = None) -> bool:
    """True when every arrow of the pullback diagram is continuous."""
    return all(eight_lemma_report(f, pi, varpi, g).values())


def enumerate_topologies(n: int, points: Optional[Sequence] = None) -> List[FinSpace]:
    """All topologies on an n-point set, as closed-set families.

    Works through the order-theoretic presentation: a topology on a finite
    set is the family of down-closed sets of a reflexive transitive reach
    relation, giving 1, 4, 29, 355 topologies for n = 1..4.
    """
    if n < 1 or n > ENUM_POINT_BUDGET:
        raise BudgetExceeded("topology enumeration supports 1..%d points" % ENUM_POINT_BUDGET)
    if points is None:
        points = tuple("p%d" % i for i in range(n))
    else:
        points = tuple(points)
        if len(points) != n:
            raise InvalidSpace("expected %d point ids" % n)
    row_choices = []
    for i in range(n):
        base = 1 << i
        rest = [j for j in range(n) if j != i]
        rows = []
        for extra in range(1 << len(rest)):
            m = base
            for k, j in enumerate(rest):
                if (extra >> k) & 1:
                    m |= 1 << j
            rows.append(m)
        row_choices.append(sorted(rows))
    families = set()
    for reach in itertools.product(*row_choices):
        transitive = True
        for i in range(n):
            acc = reach[i]
            for j in _bits(reach[i]):
                if reach[j] & ~acc:
                    transitive = False
                    break
            if not transitive:
                break
        if not transitive:
            continue
        fam = []
        for s in range(1 << n):
            ok = True
            for i in _bits(s):
                if reach[i] & ~s:
                    ok = False
                    break
            if ok:
                fam.append(s)
        families.add(tuple(sorted(fam)))
    spaces = []
    for fam in sorted(families):
        spaces.append(FinSpace(points, [[points[i] for i in _bits(m)] for m in fam]))
    return spaces


def enumerate_admissible_maps(x: FinSpace, y: FinSpace) -> List[AdmissibleMap]:
    """All admissible maps from Closed(X) to Closed(Y), one per table.

    The count is ``|Closed(Y)| ** (number of distinct point closures of X)``.
    """
    if x.n > ENUM_POINT_BUDGET or y.n > ENUM_POINT_BUDGET:
        raise BudgetExceeded("map enumeration supports spaces of up to %d points"
                             % ENUM_POINT_BUDGET)
    closures = x.distinct_closures
    maps = []
    for values in itertools.product(y.sorted_closed, repeat=len(closures)):
        maps.append(AdmissibleMap(x, y, dict(zip(closures, values))))
    return maps
