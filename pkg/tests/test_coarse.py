"""Checks for the coarse-structure machinery.

The central oracle re-derives generated structures by fixpoint over the
entire lattice of relations on a tiny carrier (every one of the 2^(n*n)
relations is classified), which the basis-domination membership must match
exactly.
"""

import itertools
import random

import pytest

from coarsekit.coarse import (
    CarrierMap,
    CertificateResult,
    CoarseStructure,
    Relation,
    RelationRule,
    StructureSequence,
    TriState,
    are_close,
    basis_closure,
    closeness_relation,
    compose_carrier_maps,
    full_rule,
    is_bornologous,
    is_coarse_equivalence,
    is_coarse_map,
    is_proper_map,
    is_quasi_dense,
    is_small,
    metric_structure,
    neighborhood,
    perspectivity_conditions_equiv,
    quasi_dense_witness,
    quasi_inverse_from_image,
    stable_bool,
    width_relation,
    width_rule,
)
from coarsekit.errors import CarrierMismatch, PreconditionError

SEED = 8141


# ---------------------------------------------------------------------------
# Oracle: full-lattice closure on tiny carriers
# ---------------------------------------------------------------------------

def oracle_members(carrier, generators):
    """Every member of the generated structure, as frozensets of pairs.

    Fixpoint over the full lattice: close the generators plus the diagonal
    under subsets, pairwise unions, inverses, and compositions.
    """
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
                comp = frozenset(
                    (a, b) for (a, c) in f for (c2, b) in e if c == c2
                )
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


def all_relations(carrier):
    pts = list(carrier)
    pairs = [(a, b) for a in pts for b in pts]
    for bits in range(1 << len(pairs)):
        yield frozenset(p for k, p in enumerate(pairs) if (bits >> k) & 1)


def test_membership_matches_full_lattice_oracle():
    carrier = (0, 1, 2)
    generator_sets = [
        [{(0, 1)}],
        [{(0, 1)}, {(1, 2)}],
        [{(0, 1), (2, 1)}],
        [{(0, 0), (1, 2), (2, 0)}],
    ]
    for gens in generator_sets:
        eps = CoarseStructure.from_generators(
            [Relation.from_pairs(carrier, g) for g in gens]
        )
        oracle = oracle_members(carrier, gens)
        for pairs in all_relations(carrier):
            e = Relation.from_pairs(carrier, pairs)
            assert eps.is_member(e) == (pairs in oracle), pairs


def test_membership_matches_oracle_on_random_generators():
    rng = random.Random(SEED)
    carrier = (0, 1, 2)
    pairs = [(a, b) for a in carrier for b in carrier]
    for _ in range(6):
        gens = []
        for _ in range(rng.randint(1, 3)):
            gens.append({p for p in pairs if rng.random() < 0.25})
        eps = CoarseStructure.from_generators(
            [Relation.from_pairs(carrier, g) for g in gens]
        )
        oracle = oracle_members(carrier, gens)
        for candidate in all_relations(carrier):
            e = Relation.from_pairs(carrier, candidate)
            assert eps.is_member(e) == (candidate in oracle)


# ---------------------------------------------------------------------------
# Relation algebra
# ---------------------------------------------------------------------------

def test_relation_algebra_basics():
    carrier = (0, 1, 2)
    e = Relation.from_pairs(carrier, [(0, 1)])
    assert e.inverse().pairs() == [(1, 0)]
    assert e.compose(e).is_empty()
    assert e.inverse().compose(e).pairs() == [(0, 0)]
    assert e.compose(e.inverse()).pairs() == [(1, 1)]
    assert Relation.diagonal(carrier).contains(Relation.empty(carrier))
    assert Relation.full(carrier).pair_count() == 9
    rect = Relation.product(carrier, [0, 1], [2])
    assert sorted(rect.pairs()) == [(0, 2), (1, 2)]


def test_relation_carrier_mismatch():
    e = Relation.from_pairs((0, 1), [(0, 1)])
    f = Relation.from_pairs((0, 2), [(0, 2)])
    with pytest.raises(CarrierMismatch):
        e.union(f)
    with pytest.raises(CarrierMismatch):
        Relation.from_pairs((0, 1), [(0, 7)])


def test_relation_restrict_and_json():
    carrier = (0, 1, 2)
    e = Relation.from_pairs(carrier, [(0, 1), (1, 2), (2, 2)])
    r = e.restrict((0, 1))
    assert r.pairs() == [(0, 1)]
    assert e.to_json() == [["0", "1"], ["1", "2"], ["2", "2"]]


def test_basis_closure_of_diagonal_is_diagonal():
    carrier = (0, 1, 2)
    basis = basis_closure([Relation.diagonal(carrier)])
    assert list(basis.elements) == [Relation.diagonal(carrier)]


def test_basis_closure_single_pair_example():
    carrier = (0, 1, 2)
    eps = CoarseStructure.from_generators([Relation.from_pairs(carrier, [(0, 1)])])
    for pairs in [{(1, 0)}, {(0, 0)}, {(1, 1)}, {(0, 1), (1, 0), (0, 0), (1, 1)}]:
        assert eps.is_member(Relation.from_pairs(carrier, pairs))
    # everything inside {0,1}x{0,1} union the diagonal is a member
    block = {(a, b) for a in (0, 1) for b in (0, 1)} | {(2, 2)}
    assert eps.is_member(Relation.from_pairs(carrier, block))
    assert not eps.is_member(Relation.from_pairs(carrier, [(0, 2)]))


def test_basis_closure_of_full_relation_contains_everything():
    carrier = (0, 1, 2)
    eps = CoarseStructure.from_generators([Relation.full(carrier)])
    for pairs in all_relations(carrier):
        assert eps.is_member(Relation.from_pairs(carrier, pairs))


def test_basis_closure_collapses_to_single_maximal_element():
    carrier = tuple(range(5))
    chain = [Relation.from_pairs(carrier, [(a, a + 1)]) for a in range(4)]
    basis = basis_closure(chain)
    assert len(basis.elements) == 1
    assert basis.elements[0] == Relation.full(carrier)
    disconnected = basis_closure(
        [Relation.from_pairs(carrier, [(0, 1)]), Relation.from_pairs(carrier, [(3, 4)])]
    )
    assert len(disconnected.elements) == 1
    blocks = {(a, b) for a in (0, 1) for b in (0, 1)}
    blocks |= {(a, b) for a in (3, 4) for b in (3, 4)}
    blocks |= {(2, 2)}
    assert disconnected.elements[0] == Relation.from_pairs(carrier, blocks)


def test_basis_conditions_hold_after_closure():
    rng = random.Random(SEED + 1)
    carrier = (0, 1, 2, 3)
    pairs = [(a, b) for a in carrier for b in carrier]
    for _ in range(5):
        gens = [{p for p in pairs if rng.random() < 0.15} for _ in range(2)]
        basis = basis_closure([Relation.from_pairs(carrier, g) for g in gens])
        report = basis.condition_report()
        assert all(report.values()), report


def test_membership_is_monotone():
    rng = random.Random(SEED + 2)
    carrier = (0, 1, 2, 3)
    eps = metric_structure(carrier, lambda a, b: abs(a - b), [1])
    for _ in range(50):
        pairs = [(a, b) for a in carrier for b in carrier if rng.random() < 0.3]
        e = Relation.from_pairs(carrier, pairs)
        if eps.is_member(e):
            smaller = Relation.from_pairs(carrier, pairs[: len(pairs) // 2])
            assert eps.is_member(smaller)


def test_intersection_of_structures():
    # membership in the intersection of two generated structures is exactly
    # membership in both
    carrier = (0, 1, 2)
    eps1 = CoarseStructure.from_generators([Relation.from_pairs(carrier, [(0, 1)])])
    eps2 = CoarseStructure.from_generators([Relation.from_pairs(carrier, [(1, 2)])])
    inter = [
        e1.intersect(e2)
        for e1 in eps1.basis.elements
        for e2 in eps2.basis.elements
    ]
    both = CoarseStructure.from_generators(inter)
    for pairs in all_relations(carrier):
        e = Relation.from_pairs(carrier, pairs)
        assert both.is_member(e) == (eps1.is_member(e) and eps2.is_member(e))


# ---------------------------------------------------------------------------
# Bounded sets, neighborhoods, smallness
# ---------------------------------------------------------------------------

def test_bounded_examples():
    carrier = tuple(range(5))
    eps = metric_structure(carrier, lambda a, b: abs(a - b), [1, 2])
    assert eps.is_bounded(())
    assert eps.is_bounded((3,))
    assert eps.is_bounded((0, 1, 2))


def test_bounded_equivalence_with_single_point_criterion():
    rng = random.Random(SEED + 3)
    carrier = (0, 1, 2, 3, 4)
    pairs = [(a, b) for a in carrier for b in carrier]
    for _ in range(8):
        gens = [{p for p in pairs if rng.random() < 0.1} for _ in range(2)]
        eps = CoarseStructure.from_generators(
            [Relation.from_pairs(carrier, g) for g in gens]
        )
        for r in range(len(carrier) + 1):
            for sub in itertools.combinations(carrier, r):
                direct = eps.is_bounded(sub)
                witness = eps.bounded_witness(sub)
                assert direct == (witness is not None)


def test_neighborhood_examples():
    carrier = (0, 1, 2)
    assert neighborhood((0, 2), Relation.diagonal(carrier)) == (0, 2)
    assert neighborhood((0,), Relation.from_pairs(carrier, [(1, 0)])) == (1,)
    seg = tuple(range(-4, 5))
    ball = neighborhood((0,), width_relation(seg, lambda a, b: abs(a - b), 1))
    assert ball == (-1, 0, 1)


def test_is_small_examples():
    carrier = (0, 1, 2)
    diag = Relation.diagonal(carrier)
    assert is_small(diag, (1,))
    assert not is_small(diag, carrier)
    assert is_small(Relation.full(carrier), carrier)


def test_smallness_agrees_with_diameter():
    seg = tuple(range(-6, 7))
    dist = lambda a, b: abs(a - b)
    rng = random.Random(SEED + 4)
    for _ in range(30):
        sub = tuple(sorted(rng.sample(seg, rng.randint(1, 5))))
        r = rng.randint(1, 6)
        u = width_relation(seg, dist, r)
        diameter = max(dist(a, b) for a in sub for b in sub)
        assert is_small(u, sub) == (diameter <= r)


def test_coarsely_connected():
    carrier = (0, 1, 2)
    assert CoarseStructure.from_generators([Relation.full(carrier)]).is_coarsely_connected()
    assert not CoarseStructure.from_generators(
        [Relation.diagonal(carrier)]
    ).is_coarsely_connected()


def test_proper_space_on_finite_metric_carrier():
    carrier = tuple(range(-4, 5))
    eps = metric_structure(carrier, lambda a, b: abs(a - b), [1, 2],
                           topologically_bounded=lambda pts: True)
    assert eps.is_proper_space()
    bare = metric_structure(carrier, lambda a, b: abs(a - b), [1])
    with pytest.raises(PreconditionError):
        bare.is_proper_space()


# ---------------------------------------------------------------------------
# Maps between coarse spaces
# ---------------------------------------------------------------------------

def segment_structure(radius, grid=(1, 2)):
    carrier = tuple(range(-radius, radius + 1))
    return carrier, metric_structure(carrier, lambda a, b: abs(a - b), grid)


def test_identity_is_coarse_and_close_to_itself():
    carrier, eps = segment_structure(6)
    ident = CarrierMap.identity(carrier)
    assert is_coarse_map(ident, eps, eps)
    assert are_close(ident, ident, eps)
    result = is_coarse_equivalence(ident, ident, eps, eps)
    assert result.ok
    assert set(result.certificates) == {"fg_close", "gf_close"}


def test_constant_map_is_bornologous():
    carrier, eps = segment_structure(5)
    const = CarrierMap(carrier, carrier, {p: 0 for p in carrier})
    assert is_bornologous(const, eps, eps)


def test_halving_map_is_coarse():
    carrier, eps = segment_structure(8)
    half = CarrierMap(carrier, carrier, {p: p // 2 for p in carrier})
    assert is_coarse_map(half, eps, eps)


def test_shift_map_is_close_to_identity():
    carrier, eps = segment_structure(8)
    shift = CarrierMap(carrier, carrier, {p: min(p + 1, 8) for p in carrier})
    assert are_close(CarrierMap.identity(carrier), shift, eps)


def test_bornologous_via_basis_agrees_with_all_members():
    # exhaustive over every relation on a four-point carrier
    carrier = (0, 1, 2, 3)
    eps = metric_structure(carrier, lambda a, b: abs(a - b), [1])
    zeta_small = CoarseStructure.from_generators(
        [Relation.from_pairs(carrier, [(0, 1), (1, 0), (0, 0), (1, 1)])]
    )
    maps = [
        CarrierMap.identity(carrier),
        CarrierMap(carrier, carrier, {p: 0 for p in carrier}),
        CarrierMap(carrier, carrier, {0: 0, 1: 1, 2: 0, 3: 1}),
    ]
    pair_list = [(a, b) for a in carrier for b in carrier]
    for f in maps:
        for zeta in (eps, zeta_small):
            via_basis = is_bornologous(f, eps, zeta)
            definitional = True
            for bits in range(1 << 16):
                pairs = [p for k, p in enumerate(pair_list) if (bits >> k) & 1]
                e = Relation.from_pairs(carrier, pairs)
                if eps.is_member(e) and not zeta.is_member(f.image_relation(e)):
                    definitional = False
                    break
            assert via_basis == definitional


def test_equivalence_failure_is_reported_in_order():
    carrier = (0, 1, 2, 3)
    eps = CoarseStructure.from_generators([Relation.diagonal(carrier)])
    tiny = (0,)
    eps_tiny = CoarseStructure.from_generators([Relation.diagonal(tiny)])
    incl = CarrierMap(tiny, carrier, {0: 0})
    back = CarrierMap(carrier, tiny, {p: 0 for p in carrier})
    result = is_coarse_equivalence(incl, back, eps_tiny, eps)
    assert not result.ok
    assert result.failed == "g_not_coarse"
    assert result.to_json()["ok"] is False


def test_quasi_density_and_inferred_inverse():
    carrier, eps = segment_structure(8, grid=(1, 2))
    evens = tuple(p for p in carrier if p % 2 == 0)
    assert is_quasi_dense(evens, eps)
    witness = quasi_dense_witness(evens, eps)
    assert witness is not None
    sub = eps.subspace(evens)
    incl = CarrierMap(evens, carrier, {p: p for p in evens})
    assert is_coarse_map(incl, sub, eps)
    back = quasi_inverse_from_image(incl, eps)
    assert back is not None
    result = is_coarse_equivalence(incl, back, sub, eps)
    assert result.ok, result.failed


def test_quasi_density_trivial_case():
    carrier, eps = segment_structure(4)
    assert quasi_dense_witness(carrier, eps).contains(Relation.diagonal(carrier))


def test_subspace_restriction():
    carrier, eps = segment_structure(6)
    evens = tuple(p for p in carrier if p % 2 == 0)
    sub = eps.subspace(evens)
    assert sub.carrier == evens
    inside = Relation.from_pairs(evens, [(0, 2), (2, 0)])
    assert sub.is_member(inside)


def test_perspectivity_requires_chart():
    with pytest.raises(PreconditionError):
        perspectivity_conditions_equiv(Relation.diagonal((0,)), None)


# ---------------------------------------------------------------------------
# Truncation sequences
# ---------------------------------------------------------------------------

def line_sequence(radii=(8, 32, 128), widths=(1, 2, 4)):
    dist = lambda a, b: abs(a - b)
    carriers = [tuple(range(-r, r + 1)) for r in radii]
    rules = [width_rule(dist, w) for w in widths]
    return StructureSequence(carriers, rules)


def test_sequence_requires_nesting():
    dist = lambda a, b: abs(a - b)
    with pytest.raises(PreconditionError):
        StructureSequence([(0, 1), (5, 6)], [width_rule(dist, 1)])
    with pytest.raises(PreconditionError):
        StructureSequence([(0, 1)], [width_rule(dist, 1)])


def test_sequence_properness():
    seq = line_sequence()
    assert seq.is_proper() is TriState.YES
    exhaustive = StructureSequence(
        [tuple(range(-r, r + 1)) for r in (8, 32, 128)], [full_rule()]
    )
    assert exhaustive.is_proper() is TriState.NO


def test_sequence_quasi_density():
    seq = line_sequence()
    evens = tuple(range(-128, 129, 2))
    assert seq.is_quasi_dense(evens) is TriState.YES
    assert seq.is_quasi_dense((0, 1)) is TriState.NO


def test_sequence_quasi_density_inconclusive():
    dist = lambda a, b: abs(a - b)
    seq = StructureSequence([(0,), (0, 1), (0, 1, 2)], [width_rule(dist, 1)])
    assert seq.is_quasi_dense((0,)) is TriState.INCONCLUSIVE


def test_sequence_closeness():
    seq = line_sequence()
    assert seq.are_close(lambda s: s, lambda s: s + 1) is TriState.YES
    assert seq.are_close(lambda s: s, lambda s: 2 * s) is TriState.NO


def test_sequence_map_classes():
    seq = line_sequence(widths=(1, 2))
    target = line_sequence(widths=(1, 2, 4))
    assert seq.is_bornologous_map(lambda s: 2 * s, target) is TriState.YES
    assert seq.is_proper_map(lambda s: 2 * s, target) is TriState.YES
    assert seq.is_coarse_map(lambda s: 2 * s, target) is TriState.YES
    assert seq.is_coarse_map(lambda s: s // 2, target) is TriState.YES
    assert seq.is_proper_map(lambda s: 0, target) is TriState.NO


def test_stable_bool_combinator():
    assert stable_bool([True, True]) is TriState.YES
    assert stable_bool([True, False]) is TriState.INCONCLUSIVE
    assert stable_bool([True, False, False]) is TriState.NO
    assert stable_bool([True]) is TriState.INCONCLUSIVE
