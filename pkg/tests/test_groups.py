import pytest
from hypothesis import given, settings, strategies as st

from coarsekit.errors import BudgetExceeded, PreconditionError
from coarsekit.groups import (FinitePermGroup, FreeGroup,
                              InvolutionProductGroup, ZnGroup, cayley_graph,
                              geodesic_words, left_multiplication_pairs,
                              trivial_group)


def test_zn_basics():
    z2 = ZnGroup(2)
    assert z2.identity() == (0, 0)
    assert z2.multiply((1, 2), (3, -1)) == (4, 1)
    assert z2.invert((1, -2)) == (-1, 2)
    assert z2.word_length((3, -4)) == 7
    assert z2.generators == ((1, 0), (0, 1))


def test_zn_ball_sizes_and_order():
    assert len(ZnGroup(2).ball(2)) == 13
    assert len(ZnGroup(1).ball(3)) == 7
    ball = ZnGroup(1).ball(2)
    assert ball == ((0,), (-1,), (1,), (-2,), (2,))
    assert trivial_group().ball(5) == ((),)


def test_zn_ball_matches_generic_bfs():
    z2 = ZnGroup(2)
    generic = super(ZnGroup, z2).ball(3)
    assert set(generic) == set(z2.ball(3))


def test_free_group_reduction():
    f2 = FreeGroup(2)
    assert f2.multiply((1, 2), (-2,)) == (1,)
    assert f2.multiply((1, -2), (2, -1)) == ()
    assert f2.invert((1, 2, -1)) == (1, -2, -1)
    assert f2.multiply((1, 2, -1), f2.invert((1, 2, -1))) == ()
    assert f2.word_length((1, 2, 1)) == 3


def test_free_group_ball_count():
    f2 = FreeGroup(2)
    assert len(f2.ball(2)) == 17
    assert len(f2.ball(6)) == 1457


def test_involution_product_group():
    w3 = InvolutionProductGroup(3)
    assert w3.multiply((0, 1), (1, 2)) == (0, 2)
    assert w3.multiply((0,), (0,)) == ()
    assert w3.invert((0, 1, 2)) == (2, 1, 0)
    assert len(w3.ball(4)) == 46
    with pytest.raises(PreconditionError):
        InvolutionProductGroup(1)


def test_involution_cayley_matches_tree_builder():
    from coarsekit.graphs import regular_tree
    w3 = InvolutionProductGroup(3)
    graph = cayley_graph(w3)
    tree = regular_tree(3)
    for v in [(), (0,), (0, 1), (2, 1, 0)]:
        assert graph.neighbors(v) == tree.neighbors(v)


def test_perm_group_closure_and_lengths():
    s3 = FinitePermGroup([(1, 0, 2), (1, 2, 0)], name="S3")
    assert len(s3.elements()) == 6
    assert s3.word_length((0, 1, 2)) == 0
    assert s3.word_length((1, 0, 2)) == 1
    assert s3.word_length((0, 2, 1)) == 2
    assert s3.invert((1, 2, 0)) == (2, 0, 1)
    assert s3.multiply((1, 0, 2), (1, 2, 0)) == (0, 2, 1)
    assert s3.ball(1) == ((0, 1, 2), (1, 0, 2), (1, 2, 0), (2, 0, 1))


def test_perm_group_validation():
    with pytest.raises(PreconditionError):
        FinitePermGroup([])
    with pytest.raises(PreconditionError):
        FinitePermGroup([(0, 0, 1)])


def test_cayley_graph_neighbors():
    f2 = FreeGroup(2)
    graph = cayley_graph(f2)
    assert graph.root == ()
    assert graph.neighbors(()) == ((-2,), (-1,), (1,), (2,))
    assert graph.neighbors((1,)) == ((), (1, -2), (1, 1), (1, 2))
    with pytest.raises(PreconditionError):
        cayley_graph(trivial_group())


def test_left_multiplication_pairs():
    z = ZnGroup(1)
    elements = [(-2,), (-1,), (0,), (1,), (2,)]
    pairs = left_multiplication_pairs(z, (1,), elements)
    assert pairs == [((-2,), (-1,)), ((-1,), (0,)), ((0,), (1,)),
                     ((1,), (2,)), ((2,), (3,))]


def test_geodesic_words():
    z = ZnGroup(1)
    assert geodesic_words(z, [(1,)], 3) == [(0,), (1,), (2,), (3,)]
    assert geodesic_words(z, [(-1,)], 2, prefix=(5,)) == [(5,), (4,), (3,)]
    f2 = FreeGroup(2)
    ray = geodesic_words(f2, [(1,), (2,)], 4)
    assert ray == [(), (1,), (1, 2), (1, 2, 1), (1, 2, 1, 2)]
    with pytest.raises(PreconditionError):
        geodesic_words(z, [], 3)


def test_ball_budget():
    with pytest.raises(BudgetExceeded):
        ZnGroup(2).ball(40, budget=100)
    with pytest.raises(BudgetExceeded):
        FreeGroup(2).ball(12, budget=1000)


words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=6)


@settings(max_examples=60, deadline=None)
@given(words, words, words)
def test_free_group_laws(a, b, c):
    f2 = FreeGroup(2)
    ra = f2.multiply((), tuple(a))
    rb = f2.multiply((), tuple(b))
    rc = f2.multiply((), tuple(c))
    assert f2.multiply(f2.multiply(ra, rb), rc) == \
        f2.multiply(ra, f2.multiply(rb, rc))
    assert f2.multiply(ra, f2.invert(ra)) == ()
    assert f2.invert(f2.invert(ra)) == ra
    assert f2.word_length(f2.multiply(ra, rb)) <= \
        f2.word_length(ra) + f2.word_length(rb)
