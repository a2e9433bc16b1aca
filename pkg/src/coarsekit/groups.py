"""Group oracles with normal forms, word metrics, and Cayley graphs.

Built-in families: free abelian groups (integer tuples), free groups
(reduced signed words), and finite permutation groups (image tuples,
closed by breadth-first search).  Every oracle exposes the same interface:
generators, identity, multiply, invert, normal_form, word_length, and a
deterministic ball enumeration.
"""

import itertools

from .errors import BudgetExceeded, PreconditionError
from .graphs import Graph, vertex_key


class GroupOracle:
    """Shared ball machinery; subclasses provide the algebra."""

    name = "group"
    generators = ()

    def identity(self):
        raise NotImplementedError

    def multiply(self, a, b):
        raise NotImplementedError

    def invert(self, a):
        raise NotImplementedError

    def normal_form(self, a):
        return a

    def word_length(self, a):
        raise NotImplementedError

    def symmetric_generators(self):
        out = []
        for s in self.generators:
            for g in (s, self.invert(s)):
                g = self.normal_form(g)
                if g not in out and g != self.identity():
                    out.append(g)
        return tuple(out)

    def ball(self, radius, budget=200000):
        """Elements of word length <= radius, sorted by (length, key)."""
        seen = {self.identity(): 0}
        frontier = [self.identity()]
        for depth in range(1, radius + 1):
            found = set()
            for g in frontier:
                for s in self.symmetric_generators():
                    h = self.normal_form(self.multiply(g, s))
                    if h not in seen and h not in found:
                        found.add(h)
            frontier = sorted(found, key=vertex_key)
            for h in frontier:
                seen[h] = depth
            if len(seen) > budget:
                raise BudgetExceeded("group ball exceeded %d elements" % budget)
            if not frontier:
                break
        return tuple(sorted(seen, key=lambda g: (seen[g], vertex_key(g))))


class ZnGroup(GroupOracle):
    """Free abelian group of the given rank; elements are integer tuples."""

    def __init__(self, rank):
        if rank < 0:
            raise PreconditionError("rank must be non-negative")
        self.rank = rank
        self.name = "Z^%d" % rank
        self.generators = tuple(
            tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)
        )

    def identity(self):
        return (0,) * self.rank

    def multiply(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def invert(self, a):
        return tuple(-x for x in a)

    def word_length(self, a):
        return sum(abs(x) for x in a)

    def ball(self, radius, budget=200000):
        rng = range(-radius, radius + 1)
        out = [g for g in itertools.product(rng, repeat=self.rank)
               if self.word_length(g) <= radius]
        if len(out) > budget:
            raise BudgetExceeded("group ball exceeded %d elements" % budget)
        return tuple(sorted(out, key=lambda g: (self.word_length(g),
                                                vertex_key(g))))


class FreeGroup(GroupOracle):
    """Free group of the given rank; elements are reduced signed-letter words.

    Letter i of the basis is the integer i+1; its inverse is -(i+1).
    """

    def __init__(self, rank):
        if rank < 1:
            raise PreconditionError("free group rank must be positive")
        self.rank = rank
        self.name = "F_%d" % rank
        self.generators = tuple((i + 1,) for i in range(rank))

    def identity(self):
        return ()

    def multiply(self, a, b):
        out = list(a)
        for letter in b:
            if out and out[-1] == -letter:
                out.pop()
            else:
                out.append(letter)
        return tuple(out)

    def invert(self, a):
        return tuple(-letter for letter in reversed(a))

    def word_length(self, a):
        return len(a)


class FinitePermGroup(GroupOracle):
    """Permutation group generated by image tuples on {0..n-1}."""

    def __init__(self, generators, name="perm"):
        gens = [tuple(g) for g in generators]
        if not gens:
            raise PreconditionError("at least one permutation is required")
        n = len(gens[0])
        for g in gens:
            if sorted(g) != list(range(n)):
                raise PreconditionError("%r is not a permutation" % (g,))
        self.degree = n
        self.name = name
        self.generators = tuple(gens)
        self._lengths = {self.identity(): 0}
        frontier = [self.identity()]
        depth = 0
        while frontier:
            depth += 1
            found = set()
            for g in frontier:
                for s in self.symmetric_generators():
                    h = self.multiply(g, s)
                    if h not in self._lengths and h not in found:
                        found.add(h)
            frontier = sorted(found, key=vertex_key)
            for h in frontier:
                self._lengths[h] = depth
            if len(self._lengths) > 40320:
                raise BudgetExceeded("permutation group too large to close")

    def identity(self):
        return tuple(range(self.degree))

    def multiply(self, a, b):
        return tuple(a[b[i]] for i in range(self.degree))

    def invert(self, a):
        out = [0] * self.degree
        for i, img in enumerate(a):
            out[img] = i
        return tuple(out)

    def word_length(self, a):
        return self._lengths[tuple(a)]

    def elements(self):
        return tuple(sorted(self._lengths,
                            key=lambda g: (self._lengths[g], vertex_key(g))))

    def ball(self, radius, budget=200000):
        return tuple(g for g in self.elements()
                     if self._lengths[g] <= radius)


class InvolutionProductGroup(GroupOracle):
    """Free product of k order-two generators; elements are words over
    {0..k-1} with no repeated adjacent letter.

    Its Cayley graph is the (k)-regular tree with the same vertex labels
    as the tree builder, so the group acts on that tree directly.
    """

    def __init__(self, count):
        if count < 2:
            raise PreconditionError("need at least two involutions")
        self.count = count
        self.name = "W_%d" % count
        self.generators = tuple((a,) for a in range(count))

    def identity(self):
        return ()

    def multiply(self, a, b):
        out = list(a)
        for letter in b:
            if out and out[-1] == letter:
                out.pop()
            else:
                out.append(letter)
        return tuple(out)

    def invert(self, a):
        return tuple(reversed(a))

    def word_length(self, a):
        return len(a)


def trivial_group():
    return ZnGroup(0)


def cayley_graph(group: GroupOracle) -> Graph:
    """Right-multiplication Cayley graph; left multiplication acts on it."""
    if not group.symmetric_generators():
        raise PreconditionError("cayley graph needs at least one generator")

    def nbrs(v):
        return tuple(group.normal_form(group.multiply(v, s))
                     for s in group.symmetric_generators())

    return Graph("cayley-%s" % group.name, group.identity(), nbrs)


def left_multiplication_pairs(group: GroupOracle, g, elements):
    """The pairs (h, h*g) over the given elements — one generator relation
    of the group's word-metric coarse structure."""
    return [(h, group.normal_form(group.multiply(h, g))) for h in elements]


def geodesic_words(group: GroupOracle, pattern, length, prefix=None):
    """Successive products prefix, prefix*p0, prefix*p0*p1, ... cycling
    through the pattern; a discrete ray in the group."""
    if not pattern:
        raise PreconditionError("pattern must be non-empty")
    g = group.identity() if prefix is None else prefix
    out = [group.normal_form(g)]
    for i in range(length):
        g = group.normal_form(group.multiply(g, pattern[i % len(pattern)]))
        out.append(g)
    return out
