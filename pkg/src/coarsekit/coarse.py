"""Coarse structures on finite and truncated carriers.

Relations (entourages) on a finite carrier are stored row-wise as bitmasks:
``rows[a]`` is the mask of all ``b`` with ``(a, b)`` in the relation, so
union, intersection, inverse, composition, and containment are integer
arithmetic.  A coarse structure is never materialized as its full
downward-closed family — membership means "contained in some basis
element", where the basis is the closure of the generators under union,
inverse, and composition.

Infinite carriers are handled as truncation sequences: nested finite
carriers with a fixed family of entourage rules evaluated on each level.
Verdicts over a sequence are tri-state — YES and NO require stability
across the last two truncations, anything unstable is INCONCLUSIVE and is
never coerced.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import BudgetExceeded, CarrierMismatch, PreconditionError

BASIS_ROUND_BUDGET = 4096


class TriState(enum.Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


def _combine_all(verdicts: Iterable[TriState]) -> TriState:
    """All must hold: any NO refutes, any INCONCLUSIVE blocks a YES."""
    out = TriState.YES
    for v in verdicts:
        if v is TriState.NO:
            return TriState.NO
        if v is TriState.INCONCLUSIVE:
            out = TriState.INCONCLUSIVE
    return out


def _combine_any(verdicts: Iterable[TriState]) -> TriState:
    """At least one must hold: any YES suffices, all NO refutes."""
    out = TriState.NO
    for v in verdicts:
        if v is TriState.YES:
            return TriState.YES
        if v is TriState.INCONCLUSIVE:
            out = TriState.INCONCLUSIVE
    return out


def stable_bool(values: Sequence[bool]) -> TriState:
    """Verdict of a per-level boolean: the last two levels must agree."""
    if len(values) < 2:
        return TriState.INCONCLUSIVE
    if values[-1] == values[-2]:
        return TriState.YES if values[-1] else TriState.NO
    return TriState.INCONCLUSIVE


class Relation:
    """A set of ordered pairs over a fixed finite carrier."""

    def __init__(self, carrier: Tuple, rows: Tuple[int, ...]):
        self.carrier = carrier
        self.rows = rows

    @classmethod
    def from_pairs(cls, carrier: Sequence, pairs: Iterable[Tuple]) -> "Relation":
        carrier = tuple(carrier)
        index = {p: i for i, p in enumerate(carrier)}
        rows = [0] * len(carrier)
        for a, b in pairs:
            if a not in index or b not in index:
                raise CarrierMismatch("pair (%r, %r) is outside the carrier" % (a, b))
            rows[index[a]] |= 1 << index[b]
        return cls(carrier, tuple(rows))

    @classmethod
    def empty(cls, carrier: Sequence) -> "Relation":
        carrier = tuple(carrier)
        return cls(carrier, (0,) * len(carrier))

    @classmethod
    def diagonal(cls, carrier: Sequence) -> "Relation":
        carrier = tuple(carrier)
        return cls(carrier, tuple(1 << i for i in range(len(carrier))))

    @classmethod
    def full(cls, carrier: Sequence) -> "Relation":
        carrier = tuple(carrier)
        every = (1 << len(carrier)) - 1
        return cls(carrier, (every,) * len(carrier))

    @classmethod
    def product(cls, carrier: Sequence, left: Iterable, right: Iterable) -> "Relation":
        """The rectangle ``left × right``."""
        carrier = tuple(carrier)
        index = {p: i for i, p in enumerate(carrier)}
        right_mask = 0
        for p in right:
            right_mask |= 1 << index[p]
        rows = [0] * len(carrier)
        for p in left:
            rows[index[p]] = right_mask
        return cls(carrier, tuple(rows))

    def _check(self, other: "Relation") -> None:
        if self.carrier != other.carrier:
            raise CarrierMismatch("relations live on different carriers")

    def union(self, other: "Relation") -> "Relation":
        self._check(other)
        return Relation(self.carrier, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def intersect(self, other: "Relation") -> "Relation":
        self._check(other)
        return Relation(self.carrier, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def inverse(self) -> "Relation":
        n = len(self.carrier)
        rows = [0] * n
        for a in range(n):
            row = self.rows[a]
            b = 0
            while row:
                if row & 1:
                    rows[b] |= 1 << a
                row >>= 1
                b += 1
        return Relation(self.carrier, tuple(rows))

    def compose(self, other: "Relation") -> "Relation":
        """Pairs ``(a, b)`` with ``(a, c)`` in ``other`` and ``(c, b)`` in ``self``."""
        self._check(other)
        n = len(self.carrier)
        rows = [0] * n
        for a in range(n):
            mid = other.rows[a]
            acc = 0
            c = 0
            while mid:
                if mid & 1:
                    acc |= self.rows[c]
                mid >>= 1
                c += 1
            rows[a] = acc
        return Relation(self.carrier, tuple(rows))

    def contains(self, other: "Relation") -> bool:
        self._check(other)
        return all(b & ~a == 0 for a, b in zip(self.rows, other.rows))

    def pair_count(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    def is_empty(self) -> bool:
        return all(r == 0 for r in self.rows)

    def pairs(self) -> List[Tuple]:
        out = []
        for a in range(len(self.carrier)):
            row = self.rows[a]
            b = 0
            while row:
                if row & 1:
                    out.append((self.carrier[a], self.carrier[b]))
                row >>= 1
                b += 1
        return out

    def restrict(self, sub_carrier: Sequence) -> "Relation":
        """The relation intersected with ``sub × sub``, on the sub carrier."""
        sub = tuple(sub_carrier)
        index = {p: i for i, p in enumerate(self.carrier)}
        positions = [index[p] for p in sub]
        rows = []
        for pos in positions:
            row = self.rows[pos]
            m = 0
            for j, q in enumerate(positions):
                if (row >> q) & 1:
                    m |= 1 << j
            rows.append(m)
        return Relation(sub, tuple(rows))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return self.carrier == other.carrier and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.carrier, self.rows))

    def __repr__(self) -> str:
        return "Relation(%d points, %d pairs)" % (len(self.carrier), self.pair_count())

    def to_json(self) -> list:
        return sorted([str(a), str(b)] for a, b in self.pairs())


def neighborhood(y: Iterable, u: Relation) -> Tuple:
    """``{x : (x, b) ∈ u for some b ∈ y}``, in carrier order."""
    index = {p: i for i, p in enumerate(u.carrier)}
    mask = 0
    for p in y:
        if p not in index:
            raise CarrierMismatch("point %r is outside the carrier" % (p,))
        mask |= 1 << index[p]
    return tuple(p for i, p in enumerate(u.carrier) if u.rows[i] & mask)


def is_small(u: Relation, y: Iterable) -> bool:
    """Whether ``y × y ⊆ u``."""
    return u.contains(Relation.product(u.carrier, tuple(y), tuple(y)))


def basis_closure(generators: Sequence[Relation],
                  max_rounds: int = BASIS_ROUND_BUDGET) -> "CoarseBasis":
    """Close the generators (plus the diagonal) under union, inverse, composition.

    On a finite carrier the closure is principal: every member is dominated
    by the reflexive-symmetric-transitive closure of the union of the
    generators, and every relation below that closure is itself a member
    (it is a finite union/composition expression followed by monotonicity).
    The returned basis is therefore that single maximal element.
    """
    if not generators:
        raise PreconditionError("at least one generator relation is required")
    carrier = generators[0].carrier
    for g in generators:
        if g.carrier != carrier:
            raise CarrierMismatch("generators live on different carriers")
    e = Relation.diagonal(carrier)
    for g in generators:
        e = e.union(g)
    for _ in range(max_rounds):
        bigger = e.union(e.inverse()).union(e.compose(e))
        if bigger.rows == e.rows:
            return CoarseBasis(carrier, (e,))
        e = bigger
    raise BudgetExceeded("basis closure did not stabilise in %d rounds" % max_rounds)


class CoarseBasis:
    """A family of relations satisfying the generated-basis conditions.

    The conditions are checked in domination form: the diagonal, every
    pairwise union, every inverse, and every pairwise composition must be
    contained in some element of the family.
    """

    def __init__(self, carrier: Tuple, elements: Tuple[Relation, ...]):
        self.carrier = carrier
        self.elements = tuple(
            sorted(elements, key=lambda r: (r.pair_count(), r.rows))
        )

    def dominating(self, e: Relation) -> Optional[Relation]:
        """Smallest element containing ``e`` (pair count, then row order)."""
        if e.carrier != self.carrier:
            raise CarrierMismatch("relation lives on a different carrier")
        for b in self.elements:
            if b.contains(e):
                return b
        return None

    def condition_report(self) -> Dict[str, bool]:
        diag = Relation.diagonal(self.carrier)
        report = {
            "diagonal_dominated": self.dominating(diag) is not None,
            "unions_dominated": True,
            "inverses_dominated": True,
            "compositions_dominated": True,
        }
        for e in self.elements:
            if self.dominating(e.inverse()) is None:
                report["inverses_dominated"] = False
            for f in self.elements:
                if self.dominating(e.union(f)) is None:
                    report["unions_dominated"] = False
                if self.dominating(e.compose(f)) is None:
                    report["compositions_dominated"] = False
        return report

    def satisfies_conditions(self) -> bool:
        return all(self.condition_report().values())


class CoarseStructure:
    """A coarse structure presented by a basis; membership is domination.

    ``topologically_bounded`` is the carrier's topological boundedness
    predicate (for discrete graph carriers: finiteness, which on a finite
    truncation means "strictly inside the truncation" and is supplied by
    the caller).  ``diagonal_witness`` is the relation whose membership
    certifies that some entourage is a neighborhood of the diagonal; it
    defaults to the diagonal itself, the right witness for discrete
    carriers.
    """

    def __init__(self, basis: CoarseBasis,
                 topologically_bounded: Optional[Callable[[Tuple], bool]] = None,
                 diagonal_witness: Optional[Relation] = None):
        self.basis = basis
        self.carrier = basis.carrier
        self.topologically_bounded = topologically_bounded
        self.diagonal_witness = diagonal_witness

    @classmethod
    def from_generators(cls, generators: Sequence[Relation],
                        topologically_bounded=None,
                        diagonal_witness=None,
                        max_rounds: int = BASIS_ROUND_BUDGET) -> "CoarseStructure":
        return cls(basis_closure(generators, max_rounds=max_rounds),
                   topologically_bounded, diagonal_witness)

    def is_member(self, e: Relation) -> bool:
        return self.basis.dominating(e) is not None

    def dominating(self, e: Relation) -> Optional[Relation]:
        return self.basis.dominating(e)

    def is_bounded(self, b: Iterable) -> bool:
        pts = tuple(b)
        return self.is_member(Relation.product(self.carrier, pts, pts))

    def bounded_witness(self, b: Iterable) -> Optional[Tuple]:
        """Smallest carrier point ``p`` (in carrier order) with ``B×{p}`` a member."""
        pts = tuple(b)
        for p in self.carrier:
            if self.is_member(Relation.product(self.carrier, pts, (p,))):
                return p
        return None

    def is_coarsely_connected(self) -> bool:
        n = len(self.carrier)
        every = (1 << n) - 1
        union_rows = [0] * n
        for e in self.basis.elements:
            for i in range(n):
                union_rows[i] |= e.rows[i]
        return all(r == every for r in union_rows)

    def is_proper_space(self) -> bool:
        """Some entourage is a neighborhood of the diagonal, and every
        bounded set is topologically bounded.

        Every bounded set lies inside ``𝔅({p}, e)`` for a basis element e
        and a point p, and those neighborhoods are themselves bounded, so
        scanning them decides the boundedness half exactly.
        """
        if self.topologically_bounded is None:
            raise PreconditionError("a topological boundedness predicate is required")
        witness = self.diagonal_witness or Relation.diagonal(self.carrier)
        if not self.is_member(witness):
            return False
        for e in self.basis.elements:
            for p in self.carrier:
                if not self.topologically_bounded(neighborhood((p,), e)):
                    return False
        return True

    def subspace(self, points: Sequence) -> "CoarseStructure":
        """The structure ``{e : e ⊆ A × A}`` on the sub carrier A."""
        sub = tuple(points)
        restricted = [e.restrict(sub) for e in self.basis.elements]
        maximal = []
        for e in restricted:
            if not any(o is not e and o.contains(e) and o.rows != e.rows
                       for o in restricted):
                maximal.append(e)
        seen = set()
        unique = []
        for e in maximal:
            if e.rows not in seen:
                seen.add(e.rows)
                unique.append(e)
        bounded = self.topologically_bounded
        return CoarseStructure(CoarseBasis(sub, tuple(unique)), bounded)


def width_relation(carrier: Sequence, dist: Callable, r: float) -> Relation:
    """The metric entourage ``{(a, b) : d(a, b) ≤ r}``."""
    carrier = tuple(carrier)
    n = len(carrier)
    rows = [0] * n
    for i, a in enumerate(carrier):
        for j, b in enumerate(carrier):
            if dist(a, b) <= r:
                rows[i] |= 1 << j
    return Relation(carrier, tuple(rows))


def metric_structure(carrier: Sequence, dist: Callable, grid: Sequence[float],
                     topologically_bounded=None) -> CoarseStructure:
    """The bounded-width structure with basis sampled on a width grid.

    The grid is extended with the sums of grid pairs (capped at the largest
    finite width present) so that compositions stay dominated.
    """
    carrier = tuple(carrier)
    widths = sorted(set(grid))
    top = max(widths)
    extended = set(widths)
    for a in widths:
        for b in widths:
            extended.add(min(a + b, 2 * top))
    basis = [width_relation(carrier, dist, r) for r in sorted(extended)]
    diag_witness = width_relation(carrier, dist, min(widths))
    return CoarseStructure.from_generators(
        basis, topologically_bounded=topologically_bounded,
        diagonal_witness=diag_witness,
    )


class CarrierMap:
    """A total assignment between two carriers."""

    def __init__(self, source: Sequence, target: Sequence, assignment):
        self.source = tuple(source)
        self.target = tuple(target)
        if callable(assignment):
            self.assignment = {p: assignment(p) for p in self.source}
        else:
            self.assignment = dict(assignment)
        t = set(self.target)
        for p in self.source:
            if p not in self.assignment:
                raise CarrierMismatch("assignment must be total on the source")
            if self.assignment[p] not in t:
                raise CarrierMismatch("image of %r is outside the target" % (p,))

    @classmethod
    def identity(cls, carrier: Sequence) -> "CarrierMap":
        carrier = tuple(carrier)
        return cls(carrier, carrier, {p: p for p in carrier})

    def __call__(self, p):
        return self.assignment[p]

    def image_relation(self, e: Relation) -> Relation:
        """The pair image ``{(f(a), f(b)) : (a, b) ∈ e}`` on the target."""
        if e.carrier != self.source:
            raise CarrierMismatch("relation lives on a different carrier")
        index = {p: i for i, p in enumerate(self.target)}
        bit = [index[self.assignment[p]] for p in self.source]
        rows = [0] * len(self.target)
        for a in range(len(self.source)):
            row = e.rows[a]
            b = 0
            acc = 0
            while row:
                if row & 1:
                    acc |= 1 << bit[b]
                row >>= 1
                b += 1
            rows[bit[a]] |= acc
        return Relation(self.target, tuple(rows))

    def preimage_points(self, pts: Iterable) -> Tuple:
        wanted = set(pts)
        return tuple(p for p in self.source if self.assignment[p] in wanted)


def compose_carrier_maps(outer: CarrierMap, inner: CarrierMap) -> CarrierMap:
    if inner.target != outer.source:
        raise CarrierMismatch("inner target must equal outer source")
    return CarrierMap(inner.source, outer.target,
                      {p: outer(inner(p)) for p in inner.source})


def is_bornologous(f: CarrierMap, eps: CoarseStructure, zeta: CoarseStructure) -> bool:
    """Images of the basis elements must be members of the target structure.

    Checking the basis suffices: images commute with unions and dominate
    compositions, so domination transfers to every member.
    """
    if f.source != eps.carrier or f.target != zeta.carrier:
        raise CarrierMismatch("map endpoints must match the structures")
    return all(zeta.is_member(f.image_relation(e)) for e in eps.basis.elements)


def is_proper_map(f: CarrierMap, eps: CoarseStructure, zeta: CoarseStructure) -> bool:
    """Preimages of bounded sets must be bounded.

    Every bounded target set lies in some ``𝔅({p}, e)`` with e a basis
    element, and preimages are monotone, so those neighborhoods decide it.
    """
    if f.source != eps.carrier or f.target != zeta.carrier:
        raise CarrierMismatch("map endpoints must match the structures")
    for e in zeta.basis.elements:
        for p in zeta.carrier:
            back = f.preimage_points(neighborhood((p,), e))
            if not eps.is_bounded(back):
                return False
    return True


def is_coarse_map(f: CarrierMap, eps: CoarseStructure, zeta: CoarseStructure) -> bool:
    return is_bornologous(f, eps, zeta) and is_proper_map(f, eps, zeta)


def closeness_relation(f: CarrierMap, g: CarrierMap) -> Relation:
    """``{(f(s), g(s)) : s in the shared source}`` on the shared target."""
    if f.source != g.source or f.target != g.target:
        raise CarrierMismatch("maps must share source and target")
    return Relation.from_pairs(f.target, [(f(s), g(s)) for s in f.source])


def are_close(f: CarrierMap, g: CarrierMap, eps_target: CoarseStructure) -> bool:
    rel = closeness_relation(f, g)
    if rel.carrier != eps_target.carrier:
        raise CarrierMismatch("maps do not land in the structure's carrier")
    return eps_target.is_member(rel)


@dataclass
class CertificateResult:
    """Outcome of a coarse-equivalence check.

    ``ok`` with dominating entourages for the two closeness conditions, or
    the first failing condition in the fixed order: f coarse, g coarse,
    f∘g close to the identity, g∘f close to the identity.
    """
    ok: bool
    failed: Optional[str] = None
    certificates: Dict[str, Relation] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "failed": self.failed,
            "certificates": {k: v.to_json() for k, v in self.certificates.items()},
        }


def is_coarse_equivalence(f: CarrierMap, g: CarrierMap, eps: CoarseStructure,
                          zeta: CoarseStructure) -> CertificateResult:
    """Check that ``g`` is a coarse quasi-inverse of the coarse map ``f``."""
    if not is_coarse_map(f, eps, zeta):
        return CertificateResult(False, failed="f_not_coarse")
    if not is_coarse_map(g, zeta, eps):
        return CertificateResult(False, failed="g_not_coarse")
    fg = closeness_relation(compose_carrier_maps(f, g), CarrierMap.identity(zeta.carrier))
    dom_fg = zeta.dominating(fg)
    if dom_fg is None:
        return CertificateResult(False, failed="fg_not_close_to_identity")
    gf = closeness_relation(compose_carrier_maps(g, f), CarrierMap.identity(eps.carrier))
    dom_gf = eps.dominating(gf)
    if dom_gf is None:
        return CertificateResult(False, failed="gf_not_close_to_identity")
    return CertificateResult(True, certificates={"fg_close": dom_fg, "gf_close": dom_gf})


def is_quasi_dense(a: Iterable, eps: CoarseStructure) -> bool:
    return quasi_dense_witness(a, eps) is not None


def quasi_dense_witness(a: Iterable, eps: CoarseStructure) -> Optional[Relation]:
    """Smallest basis element whose neighborhood of ``a`` covers the carrier."""
    pts = tuple(a)
    for e in eps.basis.elements:
        if len(neighborhood(pts, e)) == len(eps.carrier):
            return e
    return None


def quasi_inverse_from_image(f: CarrierMap, zeta: CoarseStructure) -> Optional[CarrierMap]:
    """A backward assignment picking, for each target point, a source point
    whose image is within a quasi-density witness of it.

    Returns None when the image is not quasi-dense.
    """
    image_points = tuple(dict.fromkeys(f(p) for p in f.source))
    witness = quasi_dense_witness(image_points, zeta)
    if witness is None:
        return None
    index = {p: i for i, p in enumerate(zeta.carrier)}
    back = {}
    for y in zeta.carrier:
        row = witness.rows[index[y]]
        chosen = None
        for s in f.source:
            if (row >> index[f(s)]) & 1:
                chosen = s
                break
        if chosen is None:
            return None
        back[y] = chosen
    return CarrierMap(zeta.carrier, f.source, back)


def perspectivity_conditions_equiv(e, chart, radii: Optional[Sequence[int]] = None):
    """Separation of an entourage from the boundary of a chart.

    Delegates to the chart's boundary machinery: for every boundary cluster
    and sampled neighborhood V there must be a smaller neighborhood U with
    no pair of ``e`` joining U to the complement of V.
    """
    if chart is None:
        raise PreconditionError("a boundary chart is required")
    return chart.separation_report(e, radii=radii)


# ---------------------------------------------------------------------------
# Truncation sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RelationRule:
    """A named entourage rule evaluated on each truncation carrier."""
    name: str
    build: Callable[[Tuple], Relation]

    def on(self, carrier: Tuple) -> Relation:
        rel = self.build(carrier)
        if rel.carrier != carrier:
            raise CarrierMismatch("rule %r built a relation on the wrong carrier" % self.name)
        return rel


def width_rule(dist: Callable, r: float) -> RelationRule:
    return RelationRule("width<=%s" % r, lambda carrier: width_relation(carrier, dist, r))


def full_rule() -> RelationRule:
    return RelationRule("all-pairs", Relation.full)


class StructureSequence:
    """Entourage rules evaluated on nested finite truncations of one space.

    The rules are fixed across levels — verdicts ask for a single rule that
    works on every truncation, with stability across the last two levels as
    the finite stand-in for "every".
    """

    def __init__(self, carriers: Sequence[Sequence], rules: Sequence[RelationRule]):
        self.carriers: Tuple[Tuple, ...] = tuple(tuple(c) for c in carriers)
        if len(self.carriers) < 2:
            raise PreconditionError("at least two truncation levels are required")
        for small, big in zip(self.carriers, self.carriers[1:]):
            if not set(small) <= set(big):
                raise PreconditionError("truncation carriers must be nested")
        self.rules = tuple(rules)
        self._cache: Dict[Tuple[int, str], Relation] = {}

    def relation(self, level: int, rule: RelationRule) -> Relation:
        key = (level, rule.name)
        if key not in self._cache:
            self._cache[key] = rule.on(self.carriers[level])
        return self._cache[key]

    def levels(self) -> range:
        return range(len(self.carriers))

    def _growth_verdict(self, sets_per_level: List[Tuple]) -> TriState:
        """YES when the family stabilized; NO when it keeps exhausting the
        whole truncation; INCONCLUSIVE for growth that may still settle."""
        last, prev = sets_per_level[-1], sets_per_level[-2]
        if set(last) == set(prev):
            return TriState.YES
        if (set(prev) == set(self.carriers[-2]) and set(last) == set(self.carriers[-1])):
            return TriState.NO
        return TriState.INCONCLUSIVE

    def is_proper(self, witness_points: Optional[Sequence] = None) -> TriState:
        """Bounded sets must stop growing as the truncation grows.

        Every bounded set sits inside a rule neighborhood of a single
        point, so those neighborhoods are tracked across levels for witness
        points from the smallest truncation.
        """
        if witness_points is None:
            witness_points = self.carriers[0]
        verdicts = []
        for rule in self.rules:
            for p in witness_points:
                sets = [
                    neighborhood((p,), self.relation(level, rule))
                    for level in self.levels()
                ]
                verdicts.append(self._growth_verdict(sets))
        return _combine_all(verdicts)

    def is_quasi_dense(self, points: Sequence) -> TriState:
        """Some single rule's neighborhood of the point set must cover every
        truncation."""
        pts = set(points)
        verdicts = []
        for rule in self.rules:
            per_level = []
            for level in self.levels():
                carrier = self.carriers[level]
                inside = tuple(p for p in carrier if p in pts)
                covered = neighborhood(inside, self.relation(level, rule))
                per_level.append(len(covered) == len(carrier))
            verdicts.append(stable_bool(per_level))
        return _combine_any(verdicts)

    def _restricted_pairs(self, f: Callable, g: Callable, level: int) -> List[Tuple]:
        carrier = self.carriers[level]
        inside = set(carrier)
        return [
            (f(s), g(s)) for s in carrier if f(s) in inside and g(s) in inside
        ]

    def are_close(self, f: Callable, g: Callable) -> TriState:
        """The pair set ``{(f(s), g(s))}`` must fit one rule on every level."""
        verdicts = []
        for rule in self.rules:
            per_level = []
            for level in self.levels():
                pairs = self._restricted_pairs(f, g, level)
                rel = Relation.from_pairs(self.carriers[level], pairs)
                per_level.append(self.relation(level, rule).contains(rel))
            verdicts.append(stable_bool(per_level))
        return _combine_any(verdicts)

    def is_bornologous_map(self, f: Callable, target: "StructureSequence") -> TriState:
        """Each source rule's image must fit some single target rule."""
        if len(target.carriers) != len(self.carriers):
            raise PreconditionError("sequences must share the level schedule")
        outer = []
        for rule in self.rules:
            inner = []
            for tgt_rule in target.rules:
                per_level = []
                for level in self.levels():
                    src_carrier = self.carriers[level]
                    tgt_carrier = target.carriers[level]
                    inside = set(tgt_carrier)
                    pairs = []
                    rel = self.relation(level, rule)
                    for a, b in rel.pairs():
                        fa, fb = f(a), f(b)
                        if fa in inside and fb in inside:
                            pairs.append((fa, fb))
                    image = Relation.from_pairs(tgt_carrier, pairs)
                    per_level.append(target.relation(level, tgt_rule).contains(image))
                inner.append(stable_bool(per_level))
            outer.append(_combine_any(inner))
        return _combine_all(outer)

    def is_proper_map(self, f: Callable, target: "StructureSequence",
                      witness_points: Optional[Sequence] = None) -> TriState:
        """Preimages of single-point rule neighborhoods must stop growing."""
        if len(target.carriers) != len(self.carriers):
            raise PreconditionError("sequences must share the level schedule")
        if witness_points is None:
            witness_points = target.carriers[0]
        verdicts = []
        for rule in target.rules:
            for p in witness_points:
                sets = []
                for level in self.levels():
                    ball = set(neighborhood((p,), target.relation(level, rule)))
                    back = tuple(s for s in self.carriers[level] if f(s) in ball)
                    sets.append(back)
                verdicts.append(self._growth_verdict(sets))
        return _combine_all(verdicts)

    def is_coarse_map(self, f: Callable, target: "StructureSequence") -> TriState:
        return _combine_all([
            self.is_bornologous_map(f, target),
            self.is_proper_map(f, target),
        ])
