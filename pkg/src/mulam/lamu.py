"""Reduction engine for the lambda-mu calculus.

Three redex shapes: a lambda applied to an argument, a mu applied to an
argument (which pushes the argument through the body at every naming of the
mu's own name), and a mu whose body is directly another mu (which merges the
two namings).  Head reduction prefers the leftmost merge redex in the binder
prefix and otherwise fires the head redex, following the standard head-shape
decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    App,
    Lam,
    Mu,
    Pos,
    Ref,
    Term,
    Var,
    _strip_quote,
    close_name,
    close_var,
    fresh_atom,
    is_locally_closed,
    open_mu_binder,
    open_var,
)

# ---------- substitution and named application ----------


def subst(t: Term, x: str, n: Term) -> Term:
    """Capture-free substitution of the free variable atom ``x`` by ``n``.

    With locally nameless terms this is a plain graft: binders are indices,
    so they cannot capture atoms of ``n``.
    """

    def go(u: Term) -> Term:
        match u:
            case Var(ref=r):
                return n if r == x else u
            case Lam(body=b):
                return Lam(go(b))
            case Mu(named=nr, body=b):
                return Mu(nr, go(b))
            case App(fun=f, arg=a):
                return App(go(f), go(a))
        raise AssertionError(u)

    return go(t)


def named_app(t: Term, alpha: str, n: Term) -> Term:
    """(t)_alpha n: duplicate the argument at every naming of ``alpha``.

    Clauses: variables untouched; abstractions and applications structural;
    ``mu b.<g| m>`` maps to ``mu b.<g| (m)_alpha n>`` when g is not alpha and
    to ``mu b.<alpha| ((m)_alpha n) n>`` when it is.
    """
    alpha = _strip_quote(alpha)

    def go(u: Term) -> Term:
        match u:
            case Var():
                return u
            case Lam(body=b):
                return Lam(go(b))
            case App(fun=f, arg=a):
                return App(go(f), go(a))
            case Mu(named=nr, body=b):
                inner = go(b)
                if nr == alpha:
                    inner = App(inner, n)
                return Mu(nr, inner)
        raise AssertionError(u)

    return go(t)


# ---------- the naming-merge (rho) rule ----------


def _rho_map_ref(r: Ref, a_ref: Ref, d: int) -> Ref:
    """Image of a naming reference under removal of the inner binder.

    ``d`` is the index that resolved to the inner binder at this naming
    position; the outer binder sat at ``d + 1`` and moves down to ``d``;
    references to the inner binder become the outer naming ``a_ref``
    (re-indexed into the new scope when it is itself bound outside).
    """
    if isinstance(r, str):
        return r
    if r < d:
        return r
    if r == d:
        return a_ref if isinstance(a_ref, str) else d + a_ref
    if r == d + 1:
        return d
    return r - 1


def _rho_rename(u, a_ref: Ref, d: int):
    """Shared body walk for the merge rule of both calculi."""
    from .syntax import RApp, RLam, RMu, RVar

    match u:
        case Var() | RVar():
            return u
        case Lam(body=b):
            return Lam(_rho_rename(b, a_ref, d))
        case RLam(body=b):
            return RLam(_rho_rename(b, a_ref, d))
        case App(fun=f, arg=a):
            return App(_rho_rename(f, a_ref, d), _rho_rename(a, a_ref, d))
        case RApp(head=h, bag=bag):
            return RApp(
                _rho_rename(h, a_ref, d), [_rho_rename(e, a_ref, d) for e in bag]
            )
        case Mu(named=nr, body=b):
            return Mu(_rho_map_ref(nr, a_ref, d), _rho_rename(b, a_ref, d + 1))
        case RMu(named=nr, body=b):
            return RMu(_rho_map_ref(nr, a_ref, d), _rho_rename(b, a_ref, d + 1))
    raise AssertionError(u)


def rho_inner_parts(outer_named: Ref, inner_named: Ref, inner_body):
    """New naming and body for ``mu g.<a| mu b.<e| m>>  ->  mu g.<e{a/b}| m{a/b}>``.

    Works for both calculi (the body walk dispatches on node type).
    """
    if inner_named == 0:
        new_named = outer_named
    elif isinstance(inner_named, int):
        new_named = inner_named - 1
    else:
        new_named = inner_named
    return new_named, _rho_rename(inner_body, outer_named, 1)


def rho_term(t: Mu) -> Mu:
    assert isinstance(t, Mu) and isinstance(t.body, Mu), t
    new_named, body = rho_inner_parts(t.named, t.body.named, t.body.body)
    return Mu(new_named, body)


# ---------- redexes and single-step reduction ----------


def redex_kind(t: Term) -> str | None:
    match t:
        case App(fun=Lam()):
            return "lam"
        case App(fun=Mu()):
            return "mu"
        case Mu(body=Mu()):
            return "rho"
    return None


def redexes(t: Term) -> list[tuple[Pos, str]]:
    """All redex positions with their kind, in leftmost-outermost order."""
    out: list[tuple[Pos, str]] = []

    def go(u: Term, pos: Pos) -> None:
        k = redex_kind(u)
        if k is not None:
            out.append((pos, k))
        match u:
            case Lam(body=b) | Mu(body=b):
                go(b, pos + (0,))
            case App(fun=f, arg=a):
                go(f, pos + (0,))
                go(a, pos + (1,))

    go(t, ())
    return out


def contract(t: Term) -> Term:
    """Contract a redex at the root.  The term must already be opened with
    respect to any surrounding binders (free references are atoms)."""
    match t:
        case App(fun=Lam(body=b), arg=n):
            x = fresh_atom("v")
            return subst(open_var(b, x), x, n)
        case App(fun=Mu() as m, arg=n):
            a = fresh_atom("n")
            named, body = open_mu_binder(m, a)
            body = named_app(body, a, n)
            if named == a:
                body = App(body, n)
            return Mu(0 if named == a else named, close_name(body, a))
        case Mu(body=Mu()):
            return rho_term(t)
    raise ValueError(f"not a redex: {t!r}")


def reduce_redex(t: Term, pos: Pos) -> Term:
    """Contract the redex at ``pos``; binders along the path are opened so
    the contraction can graft siblings without index shifts."""

    def go(u: Term, p: Pos) -> Term:
        if not p:
            return contract(u)
        i, rest = p[0], p[1:]
        match u:
            case Lam(body=b):
                assert i == 0, (i, u)
                x = fresh_atom("v")
                return Lam(close_var(go(open_var(b, x), rest), x))
            case Mu() as m:
                assert i == 0, (i, u)
                a = fresh_atom("n")
                named, body = open_mu_binder(m, a)
                out = go(body, rest)
                return Mu(0 if named == a else named, close_name(out, a))
            case App(fun=f, arg=arg):
                if i == 0:
                    return App(go(f, rest), arg)
                assert i == 1, (i, u)
                return App(f, go(arg, rest))
        raise AssertionError((u, p))

    return go(t, pos)


# ---------- head shape ----------


@dataclass(frozen=True)
class HeadShape:
    """Binder prefix, head and spine of a term.

    ``blocks`` is a sequence of (lambda-run length, naming reference) pairs;
    a ``None`` naming only occurs in a final block of trailing lambdas.  The
    head is a variable or, when an abstraction sits under the spine, the
    innermost application (a redex); the spine holds the remaining
    arguments.  Subterms keep their de Bruijn references into the prefix, so
    the shape reassembles exactly; display whole terms, not parts.
    """

    blocks: tuple[tuple[int, Ref | None], ...]
    head: Term
    spine: tuple[Term, ...]


def head_decompose(t: Term) -> HeadShape:
    blocks: list[tuple[int, Ref | None]] = []
    lams = 0
    u = t
    while True:
        match u:
            case Lam(body=b):
                lams += 1
                u = b
            case Mu(named=nr, body=b):
                blocks.append((lams, nr))
                lams = 0
                u = b
            case _:
                break
    if lams:
        blocks.append((lams, None))
    args: list[Term] = []
    while isinstance(u, App):
        args.append(u.arg)
        u = u.fun
    args.reverse()
    if isinstance(u, (Lam, Mu)) and args:
        # The head is the redex itself: the abstraction applied once.
        return HeadShape(tuple(blocks), App(u, args[0]), tuple(args[1:]))
    return HeadShape(tuple(blocks), u, tuple(args))


def reassemble(shape: HeadShape) -> Term:
    t = shape.head
    for a in shape.spine:
        t = App(t, a)
    for lams, named in reversed(shape.blocks):
        if named is not None:
            t = Mu(named, t)
        for _ in range(lams):
            t = Lam(t)
    return t


def is_hnf(t: Term) -> bool:
    """Head normal: head variable and no adjacent namings in the prefix."""
    shape = head_decompose(t)
    if not isinstance(shape.head, Var):
        return False
    bs = shape.blocks
    for i in range(len(bs) - 1):
        if bs[i][1] is not None and bs[i + 1][1] is not None and bs[i + 1][0] == 0:
            return False
    return True


def head_redex_pos(t: Term) -> tuple[Pos, str] | None:
    """Position of the next head-reduction step, or None on a head normal
    form.  A naming merge in the prefix wins over the head redex."""
    pos: list[int] = []
    u = t
    while True:
        match u:
            case Mu(body=Mu()):
                return tuple(pos), "rho"
            case Lam(body=b) | Mu(body=b):
                pos.append(0)
                u = b
            case _:
                break
    nargs = 0
    while isinstance(u, App):
        nargs += 1
        u = u.fun
    if nargs == 0 or isinstance(u, Var):
        return None
    kind = "lam" if isinstance(u, Lam) else "mu"
    return tuple(pos) + (0,) * (nargs - 1), kind


def head_step(t: Term) -> Term | None:
    """One head-reduction step; None exactly on head normal forms."""
    hit = head_redex_pos(t)
    if hit is None:
        return None
    return reduce_redex(t, hit[0])


@dataclass(frozen=True)
class Hnf:
    steps: int
    term: Term


@dataclass(frozen=True)
class FuelExhausted:
    fuel: int
    term: Term


def head_run(t: Term, fuel: int) -> Hnf | FuelExhausted:
    """Iterate head reduction up to ``fuel`` steps."""
    assert is_locally_closed(t), t
    u = t
    for n in range(fuel + 1):
        nxt = head_step(u)
        if nxt is None:
            return Hnf(n, u)
        u = nxt
    return FuelExhausted(fuel, u)
