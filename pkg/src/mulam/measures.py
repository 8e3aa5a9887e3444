"""Termination measures for the resource calculus.

The interesting quantity for a bag occurrence is how many mu binders could
still act on it from above: the number of mu nodes in the whole term minus
the number of mu ancestors of the occurrence.  Collecting that over all bag
occurrences gives a multiset of naturals; lambda and mu steps shrink it in
the Dershowitz-Manna order, the naming-merge step can leave it unchanged but
then shrinks the mu count, and the term size breaks the final tie.
"""

from __future__ import annotations

from .syntax import Pos, RApp, RLam, RMu, RVar, ResTerm

Multiset = tuple[int, ...]
BoldMeasure = tuple[Multiset, int, int]


def mu_degree(t: ResTerm) -> int:
    return t.nmu


def bag_depths(t: ResTerm) -> list[int]:
    """Mu-ancestor count of every bag occurrence (every application node,
    including those carrying an empty bag), in preorder."""
    out: list[int] = []

    def go(u: ResTerm, d: int) -> None:
        match u:
            case RVar():
                pass
            case RLam(body=b):
                go(b, d)
            case RMu(body=b):
                go(b, d + 1)
            case RApp(head=h, bag=bag):
                out.append(d)
                go(h, d)
                for e in bag:
                    go(e, d)

    go(t, 0)
    return out


def ms(t: ResTerm) -> Multiset:
    """Multiset of (mu count minus depth) per bag, sorted descending."""
    n = t.nmu
    return tuple(sorted((n - d for d in bag_depths(t)), reverse=True))


def bold_ms(t: ResTerm) -> BoldMeasure:
    return (ms(t), t.nmu, t.size)


def compare_multiset(a: Multiset, b: Multiset) -> int:
    """Dershowitz-Manna comparison of multisets of naturals (-1, 0 or 1).

    On descending-sorted tuples this is the lexicographic order where a
    proper prefix loses.
    """
    a = tuple(sorted(a, reverse=True))
    b = tuple(sorted(b, reverse=True))
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    if len(a) != len(b):
        return -1 if len(a) < len(b) else 1
    return 0


def multiset_less_brute(a: Multiset, b: Multiset) -> bool:
    """Direct quantifier form of the Dershowitz-Manna order, as a cross-check:
    a < b iff they differ and wherever a has more copies of some value, b has
    more copies of some strictly larger value."""
    from collections import Counter

    ca, cb = Counter(a), Counter(b)
    if ca == cb:
        return False
    for n in set(ca) | set(cb):
        if ca[n] > cb[n] and not any(m > n and cb[m] > ca[m] for m in set(ca) | set(cb)):
            return False
    return True


def compare_bold(a: BoldMeasure, b: BoldMeasure) -> int:
    c = compare_multiset(a[0], b[0])
    if c:
        return c
    for x, y in zip(a[1:], b[1:]):
        if x != y:
            return -1 if x < y else 1
    return 0


def graft(t: ResTerm, pos: Pos, sub: ResTerm) -> ResTerm:
    """Structural subterm replacement, capture-permitting.

    Only meaningful for measure experiments (the measures ignore binding);
    the term engine never uses this.
    """
    if not pos:
        return sub
    i, rest = pos[0], pos[1:]
    match t:
        case RLam(body=b):
            assert i == 0, (i, t)
            return RLam(graft(b, rest, sub))
        case RMu(named=nr, body=b):
            assert i == 0, (i, t)
            return RMu(nr, graft(b, rest, sub))
        case RApp(head=h, bag=bag):
            if i == 0:
                return RApp(graft(h, rest, sub), bag)
            assert 1 <= i <= len(bag), (i, t)
            return RApp(h, bag[: i - 1] + (graft(bag[i - 1], rest, sub),) + bag[i:])
    raise AssertionError((t, pos))


def mu_depth_at(t: ResTerm, pos: Pos) -> int:
    """Number of mu binders strictly above the given position."""
    d = 0
    u = t
    for i in pos:
        match u:
            case RMu(body=b):
                assert i == 0
                d += 1
                u = b
            case RLam(body=b):
                assert i == 0
                u = b
            case RApp(head=h, bag=bag):
                u = h if i == 0 else bag[i - 1]
            case _:
                raise AssertionError((t, pos))
    return d
