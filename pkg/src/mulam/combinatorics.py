"""Bag-splitting combinatorics used by the linear substitution operators.

A weak composition of a bag into n parts is an ordered tuple of n sub-bags
whose multiset union is the bag.  An index assignment sends each bag slot to
a part index; distinct assignments can induce the same composition, and the
number that do is the composition's multiplicity (a product of multinomials,
one per group of equal elements).  The exact-count semiring needs those
multiplicities; the idempotent one only needs the composition set.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from .syntax import Bag, ResTerm, mkbag, multinomial

IndexAssignment = tuple[int, ...]
WeakComposition = tuple[Bag, ...]


def compositions_of(m: int, k: int) -> Iterator[tuple[int, ...]]:
    """All tuples of k non-negative ints summing to m, lexicographically."""
    assert m >= 0 and k >= 0, (m, k)
    if k == 0:
        if m == 0:
            yield ()
        return
    if k == 1:
        yield (m,)
        return
    for first in range(m + 1):
        for rest in compositions_of(m - first, k - 1):
            yield (first,) + rest


def weak_compositions_with_counts(bag: Bag, nparts: int) -> Iterator[tuple[WeakComposition, int]]:
    """Weak compositions of ``bag`` into ``nparts`` parts with multiplicities.

    Each composition is yielded exactly once; its count is the number of
    index assignments inducing it.  Equal bag elements are grouped, so the
    count for a group sending m copies as (m_0, ..., m_{n-1}) is the
    multinomial m! / prod(m_i!), and counts multiply across groups.
    """
    assert nparts >= 0, nparts
    if nparts == 0:
        if not bag:
            yield ((), 1)  # type: ignore[misc]  -- zero parts, empty tuple
        return
    groups = [(elem, len(list(g))) for elem, g in itertools.groupby(bag)]
    per_group: list[list[tuple[tuple[int, ...], int]]] = []
    for _, mult in groups:
        per_group.append(
            [(alloc, multinomial(alloc)) for alloc in compositions_of(mult, nparts)]
        )
    for combo in itertools.product(*per_group):
        parts: list[list[ResTerm]] = [[] for _ in range(nparts)]
        count = 1
        for (elem, _), (alloc, cnt) in zip(groups, combo):
            count *= cnt
            for i, copies in enumerate(alloc):
                parts[i].extend([elem] * copies)
        # Elements are appended in bag order (already sorted), and equal
        # elements stay adjacent, so each part is canonical as built.
        yield tuple(tuple(p) for p in parts), count


def weak_compositions(bag: Bag, nparts: int) -> list[WeakComposition]:
    """The set of weak compositions, without multiplicities."""
    return [wc for wc, _ in weak_compositions_with_counts(bag, nparts)]


def index_assignments(bag: Bag, n: int) -> Iterator[IndexAssignment]:
    """All maps from bag slots into {0, ..., n}, in counter order.

    There are (n + 1) ** len(bag) of them; ``assignment_to_composition``
    recovers the induced weak composition into n + 1 parts.
    """
    assert n >= 0, n
    return itertools.product(range(n + 1), repeat=len(bag))


def assignment_to_composition(bag: Bag, assignment: Sequence[int], n: int) -> WeakComposition:
    parts: list[list[ResTerm]] = [[] for _ in range(n + 1)]
    assert len(assignment) == len(bag), (assignment, bag)
    for elem, i in zip(bag, assignment):
        assert 0 <= i <= n, (i, n)
        parts[i].append(elem)
    return tuple(mkbag(p) for p in parts)
