"""Reduction engine for the resource calculus.

Terms apply to finite multisets (bags) and reduction is multilinear: a
lambda redex distributes its bag over the occurrences of the bound variable
(zero unless the counts match exactly), and a mu redex distributes its bag
over the namings of the bound name via the linear named application.  Both
distributions sum over weak compositions of the bag; under the exact-count
semiring each composition is weighted by the number of index assignments
inducing it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .combinatorics import weak_compositions_with_counts
from .syntax import (
    BOOL,
    Bag,
    Pos,
    RApp,
    RLam,
    RMu,
    RVar,
    ResTerm,
    Sum,
    _strip_quote,
    close_rname,
    close_rvar,
    degree,
    fresh_atom,
    lift_app,
    mkbag,
    open_mu_binder,
    open_rvar,
)
from .lamu import rho_inner_parts

# ---------- linear substitution ----------


def _lsubst(t: ResTerm, x: str, bag: Bag, semiring: str) -> Sum:
    # Nonzero only when the bag size matches the number of occurrences,
    # hereditarily; checking the degree up front prunes the composition sum
    # to the only branches that can survive.
    if degree(x, t) != len(bag):
        return Sum.zero(semiring)
    match t:
        case RVar(ref=r):
            return Sum.unit(bag[0] if r == x else t, semiring)
        case RLam(body=b):
            return _lsubst(b, x, bag, semiring).map(RLam)
        case RMu(named=nr, body=b):
            return _lsubst(b, x, bag, semiring).map(lambda u: RMu(nr, u))
        case RApp(head=h, bag=elems):
            n = len(elems)
            dh = degree(x, h)
            de = [degree(x, e) for e in elems]
            total = Sum.zero(semiring)
            for parts, count in weak_compositions_with_counts(bag, n + 1):
                if len(parts[0]) != dh or any(
                    len(parts[i + 1]) != de[i] for i in range(n)
                ):
                    continue
                sh = _lsubst(h, x, parts[0], semiring)
                if sh.is_zero:
                    continue
                args = [_lsubst(e, x, parts[i + 1], semiring) for i, e in enumerate(elems)]
                if any(a.is_zero for a in args):
                    continue
                total = total.add(lift_app(sh, args).scale(count))
            return total
    raise AssertionError(t)


def linear_subst(t: ResTerm, x: str, bag, semiring: str) -> Sum:
    """t<[bag]/x>: replace the occurrences of ``x`` by the bag elements in
    all possible ways; zero when the counts cannot match."""
    return _lsubst(t, x, mkbag(bag), semiring)


# ---------- linear named application ----------


def _lna_term(t: ResTerm, alpha: str, bag: Bag, semiring: str) -> Sum:
    if degree("'" + alpha, t) == 0:
        # No naming of alpha anywhere: the empty bag is the identity, any
        # other bag has nowhere to go.
        if bag:
            return Sum.zero(semiring)
        return Sum.unit(t, semiring)
    match t:
        case RVar():
            raise AssertionError(t)  # degree is 0, handled above
        case RLam(body=b):
            return _lna_term(b, alpha, bag, semiring).map(RLam)
        case RMu(named=nr, body=b):
            return _lna_named(nr, b, alpha, bag, semiring).map(lambda u: RMu(nr, u))
        case RApp(head=h, bag=elems):
            n = len(elems)
            total = Sum.zero(semiring)
            for parts, count in weak_compositions_with_counts(bag, n + 1):
                sh = _lna_term(h, alpha, parts[0], semiring)
                if sh.is_zero:
                    continue
                args = [
                    _lna_term(e, alpha, parts[i + 1], semiring)
                    for i, e in enumerate(elems)
                ]
                if any(a.is_zero for a in args):
                    continue
                total = total.add(lift_app(sh, args).scale(count))
            return total
    raise AssertionError(t)


def _lna_named(named: int | str, body: ResTerm, alpha: str, bag: Bag, semiring: str) -> Sum:
    """Linear named application on a named pair ``<named| body>``.

    Returns the sum of new bodies; the naming itself never changes.  At a
    naming of ``alpha`` the bag splits in two: one part goes inside
    recursively, the other becomes a new application at the naming, and the
    application node appears even when that part is empty.
    """
    if named != alpha:
        return _lna_term(body, alpha, bag, semiring)
    total = Sum.zero(semiring)
    for (w1, w2), count in weak_compositions_with_counts(bag, 2):
        s = _lna_term(body, alpha, w1, semiring)
        if s.is_zero:
            continue
        total = total.add(s.map(lambda u: RApp(u, w2)).scale(count))
    return total


def linear_named_app(t: ResTerm, alpha: str, bag, semiring: str) -> Sum:
    """<t>_alpha [bag]: distribute the bag over the namings of ``alpha``."""
    return _lna_term(t, _strip_quote(alpha), mkbag(bag), semiring)


def linear_named_app_named(eta: str, t: ResTerm, alpha: str, bag, semiring: str) -> Sum:
    """The named-pair form ``<<eta| t>>_alpha [bag]``, as a sum of bodies
    (the naming stays ``eta``)."""
    return _lna_named(_strip_quote(eta), t, _strip_quote(alpha), mkbag(bag), semiring)


# ---------- redexes and single steps ----------


def redex_kind_res(t: ResTerm) -> str | None:
    match t:
        case RApp(head=RLam()):
            return "lam"
        case RApp(head=RMu()):
            return "mu"
        case RMu(body=RMu()):
            return "rho"
    return None


def redexes_res(t: ResTerm) -> list[tuple[Pos, str]]:
    out: list[tuple[Pos, str]] = []

    def go(u: ResTerm, pos: Pos) -> None:
        k = redex_kind_res(u)
        if k is not None:
            out.append((pos, k))
        match u:
            case RLam(body=b) | RMu(body=b):
                go(b, pos + (0,))
            case RApp(head=h, bag=bag):
                go(h, pos + (0,))
                for i, e in enumerate(bag):
                    go(e, pos + (i + 1,))

    go(t, ())
    return out


def is_normal_res(t: ResTerm) -> bool:
    return not redexes_res(t)


def contract_res(t: ResTerm, semiring: str) -> Sum:
    """Contract a root redex (term opened with respect to outer binders)."""
    match t:
        case RApp(head=RLam(body=b), bag=bag):
            x = fresh_atom("v")
            return _lsubst(open_rvar(b, x), x, bag, semiring)
        case RApp(head=RMu() as m, bag=bag):
            a = fresh_atom("n")
            named, body = open_mu_binder(m, a)
            s = _lna_named(named, body, a, bag, semiring)
            closed = 0 if named == a else named
            return s.map(lambda u: RMu(closed, close_rname(u, a)))
        case RMu(named=nr, body=RMu() as inner):
            new_named, body = rho_inner_parts(nr, inner.named, inner.body)
            return Sum.unit(RMu(new_named, body), semiring)
    raise ValueError(f"not a redex: {t!r}")


def step_r(t: ResTerm, pos: Pos, semiring: str) -> Sum:
    """One reduction step at a given position, as a sum."""

    def go(u: ResTerm, p: Pos) -> Sum:
        if not p:
            return contract_res(u, semiring)
        i, rest = p[0], p[1:]
        match u:
            case RLam(body=b):
                assert i == 0, (i, u)
                x = fresh_atom("v")
                return go(open_rvar(b, x), rest).map(lambda w: RLam(close_rvar(w, x)))
            case RMu() as m:
                assert i == 0, (i, u)
                a = fresh_atom("n")
                named, body = open_mu_binder(m, a)
                closed = 0 if named == a else named
                return go(body, rest).map(lambda w: RMu(closed, close_rname(w, a)))
            case RApp(head=h, bag=bag):
                if i == 0:
                    return go(h, rest).map(lambda w: RApp(w, bag))
                assert 1 <= i <= len(bag), (i, u)
                return go(bag[i - 1], rest).map(
                    lambda w: RApp(h, bag[: i - 1] + (w,) + bag[i:])
                )
        raise AssertionError((u, p))

    return go(t, pos)


# ---------- stepping whole sums ----------


@dataclass(frozen=True)
class SumStep:
    """What a single sum-level step did (for traces and oracles)."""

    term: ResTerm
    coeff: int
    pos: Pos
    kind: str


def reducible_addends(s: Sum) -> list[tuple[ResTerm, int, list[tuple[Pos, str]]]]:
    out = []
    for t, c in s.items:
        rs = redexes_res(t)
        if rs:
            out.append((t, c, rs))
    return out


def _apply_sum_step(s: Sum, step: SumStep, mode: str) -> Sum:
    reduct = step_r(step.term, step.pos, s.semiring)
    rest = Sum(s.semiring, ((t, c) for t, c in s.items if t != step.term))
    if s.semiring == BOOL or mode == "coeff":
        # Coefficient-preserving: the addend steps with its whole weight.
        return rest.add(reduct.scale(step.coeff))
    assert mode == "occurrence", mode
    # One unit of the coefficient steps at a time.
    if step.coeff > 1:
        rest = rest.add(Sum(s.semiring, ((step.term, step.coeff - 1),)))
    return rest.add(reduct)


def pick_step(s: Sum, strategy: str, rng: random.Random | None = None) -> SumStep:
    cands = reducible_addends(s)
    if not cands:
        raise ValueError("sum is in normal form")
    if strategy == "leftmost":
        t, c, rs = cands[0]
        pos, kind = rs[0]
    elif strategy == "rightmost":
        t, c, rs = cands[-1]
        pos, kind = rs[-1]
    elif strategy == "random":
        assert rng is not None, "random strategy needs an rng"
        pairs = [(t, c, pos, kind) for t, c, rs in cands for pos, kind in rs]
        t, c, pos, kind = rng.choice(pairs)
    else:
        raise ValueError(f"unknown strategy: {strategy}")
    return SumStep(t, c, pos, kind)


def step_sum(
    s: Sum,
    strategy: str = "leftmost",
    rng: random.Random | None = None,
    mode: str = "coeff",
) -> Sum:
    """Rewrite one reducible addend of the sum; error on normal forms.

    ``mode`` is "coeff" (an addend steps with its whole coefficient) or
    "occurrence" (one unit at a time); they only differ over the exact-count
    semiring.
    """
    return _apply_sum_step(s, pick_step(s, strategy, rng), mode)


# ---------- normalization ----------


def normalize_r(x: ResTerm | Sum, semiring: str) -> Sum:
    """The (unique) normal form, computed addend-wise with memoization.

    Iterative worklist so deep reduction chains cannot hit the recursion
    limit; strong normalization guarantees the worklist drains.
    """
    if isinstance(x, ResTerm):
        start = Sum.unit(x, semiring)
    else:
        assert x.semiring == semiring, (x.semiring, semiring)
        start = x
    memo: dict[ResTerm, Sum] = {}
    steps: dict[ResTerm, Sum] = {}
    for root, _ in start.items:
        stack = [root]
        while stack:
            u = stack[-1]
            if u in memo:
                stack.pop()
                continue
            if u not in steps:
                rs = redexes_res(u)
                if not rs:
                    memo[u] = Sum.unit(u, semiring)
                    stack.pop()
                    continue
                steps[u] = step_r(u, rs[0][0], semiring)
            reduct = steps[u]
            pending = [v for v, _ in reduct.items if v not in memo]
            if pending:
                stack.extend(pending)
                continue
            memo[u] = reduct.bind(lambda v: memo[v])
            stack.pop()
    return start.bind(lambda t: memo[t])


# ---------- head reduction ----------


def head_redex_pos_res(t: ResTerm) -> tuple[Pos, str] | None:
    """Mirror of the head-position rule on resource terms."""
    pos: list[int] = []
    u = t
    while True:
        match u:
            case RMu(body=RMu()):
                return tuple(pos), "rho"
            case RLam(body=b) | RMu(body=b):
                pos.append(0)
                u = b
            case _:
                break
    nargs = 0
    while isinstance(u, RApp):
        nargs += 1
        u = u.head
    if nargs == 0 or isinstance(u, RVar):
        return None
    kind = "lam" if isinstance(u, RLam) else "mu"
    return tuple(pos) + (0,) * (nargs - 1), kind


def is_hnf_res(t: ResTerm) -> bool:
    return head_redex_pos_res(t) is None


def head_step_res(t: ResTerm, semiring: str = BOOL) -> Sum:
    """One head step as a sum; zero on head normal forms (they are erased,
    not kept, under iteration)."""
    hit = head_redex_pos_res(t)
    if hit is None:
        return Sum.zero(semiring)
    return step_r(t, hit[0], semiring)


def head_stages(t: ResTerm, n: int, semiring: str = BOOL) -> list[Sum]:
    """[stage 0, ..., stage n]: iterated head reduction, addend-wise."""
    stages = [Sum.unit(t, semiring)]
    for _ in range(n):
        stages.append(stages[-1].bind(lambda u: head_step_res(u, semiring)))
    return stages
