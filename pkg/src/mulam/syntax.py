"""Term representations for the lambda-mu calculus and its resource refinement.

Both syntaxes are stored locally nameless: bound occurrences are de Bruijn
indices counted per binder kind (lambda binders for variables, mu binders for
names), and free occurrences are plain string atoms.  The two namespaces are
independent, so a lambda binder never shifts a name index and vice versa.
Alpha-equivalent terms are structurally identical, and every node caches a
canonical byte encoding ``enc``; equality, hashing, bag ordering and sum
ordering all derive from that one total order.

A mu node ``Mu(named, body)`` fuses the binder and the naming: it stands for
"mu a. <b| body>" where ``named`` is the reference for ``b`` resolved in the
scope that includes the mu's own binder (index 0 is the mu itself).  Named
terms therefore never float free; they only occur under a mu, which matches
the grammar.
"""

from __future__ import annotations

import math
import threading
from typing import Callable, Iterable, Iterator

# ---------- identifiers ----------

# A reference is either a de Bruijn index (int, >= 0) or a free atom (str).
Ref = int | str

_fresh_lock = threading.Lock()
_fresh_counter = 0


def fresh_atom(stem: str = "g") -> str:
    """Return a globally fresh atom.

    The tilde keeps fresh atoms disjoint from anything the grammar can
    produce, so terms that leak one would fail to round-trip; they are only
    ever used transiently while rewriting under binders.
    """
    global _fresh_counter
    with _fresh_lock:
        _fresh_counter += 1
        n = _fresh_counter
    return f"{stem}~{n}"


def _enc_vref(ref: Ref) -> bytes:
    if isinstance(ref, int):
        assert ref >= 0, ref
        return b"%d;" % ref
    assert isinstance(ref, str) and ref, ref
    return b"." + ref.encode() + b";"


def _enc_nref(ref: Ref) -> bytes:
    if isinstance(ref, int):
        assert ref >= 0, ref
        return b"%d;" % ref
    assert isinstance(ref, str) and ref, ref
    return b"'" + ref.encode() + b";"


# ---------- lambda-mu terms ----------


class Term:
    """Base class for lambda-mu terms."""

    __slots__ = ()
    enc: bytes

    def __eq__(self, other: object) -> bool:
        return self.__class__ is other.__class__ and self.enc == other.enc  # type: ignore[attr-defined]

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash(self.enc)

    def __repr__(self) -> str:
        from . import textio

        return f"<{self.__class__.__name__} {textio.print_term(self)}>"


class Var(Term):
    __slots__ = ("ref", "enc")

    def __init__(self, ref: Ref):
        self.ref = ref
        self.enc = b"V" + _enc_vref(ref)


class Lam(Term):
    __slots__ = ("body", "enc")

    def __init__(self, body: Term):
        assert isinstance(body, Term), body
        self.body = body
        self.enc = b"L" + body.enc


class App(Term):
    __slots__ = ("fun", "arg", "enc")

    def __init__(self, fun: Term, arg: Term):
        assert isinstance(fun, Term) and isinstance(arg, Term), (fun, arg)
        self.fun = fun
        self.arg = arg
        self.enc = b"A" + fun.enc + arg.enc


class Mu(Term):
    __slots__ = ("named", "body", "enc")

    def __init__(self, named: Ref, body: Term):
        assert isinstance(body, Term), body
        self.named = named
        self.body = body
        self.enc = b"M" + _enc_nref(named) + body.enc


# ---------- resource terms ----------


class ResTerm:
    """Base class for resource terms.

    ``size`` is the node count weighted so that an application contributes
    1 + (number of bag elements) on top of its subterms; ``nmu`` counts mu
    nodes (used by the termination measures).
    """

    __slots__ = ()
    enc: bytes
    size: int
    nmu: int

    def __eq__(self, other: object) -> bool:
        return self.__class__ is other.__class__ and self.enc == other.enc  # type: ignore[attr-defined]

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash(self.enc)

    def __repr__(self) -> str:
        from . import textio

        return f"<{self.__class__.__name__} {textio.print_res(self)}>"


class RVar(ResTerm):
    __slots__ = ("ref", "enc", "size", "nmu")

    def __init__(self, ref: Ref):
        self.ref = ref
        self.enc = b"V" + _enc_vref(ref)
        self.size = 1
        self.nmu = 0


class RLam(ResTerm):
    __slots__ = ("body", "enc", "size", "nmu")

    def __init__(self, body: ResTerm):
        assert isinstance(body, ResTerm), body
        self.body = body
        self.enc = b"L" + body.enc
        self.size = 1 + body.size
        self.nmu = body.nmu


class RApp(ResTerm):
    __slots__ = ("head", "bag", "enc", "size", "nmu")

    def __init__(self, head: ResTerm, bag: Iterable[ResTerm], *, _raw: bool = False):
        assert isinstance(head, ResTerm), head
        if _raw:
            # Internal: keep the given element order.  Used only while a
            # surrounding binder is opened; closing re-canonicalizes.
            bag = tuple(bag)
        else:
            bag = mkbag(bag)
        self.head = head
        self.bag = bag
        self.enc = b"A" + head.enc + b"[" + b"".join(e.enc for e in bag) + b"]"
        self.size = 1 + len(bag) + head.size + sum(e.size for e in bag)
        self.nmu = head.nmu + sum(e.nmu for e in bag)


class RMu(ResTerm):
    __slots__ = ("named", "body", "enc", "size", "nmu")

    def __init__(self, named: Ref, body: ResTerm):
        assert isinstance(body, ResTerm), body
        self.named = named
        self.body = body
        self.enc = b"M" + _enc_nref(named) + body.enc
        self.size = 1 + body.size
        self.nmu = 1 + body.nmu


Bag = tuple[ResTerm, ...]


def _bag_key(t: ResTerm) -> tuple[int, bytes]:
    return (len(t.enc), t.enc)


def mkbag(elems: Iterable[ResTerm]) -> Bag:
    """Canonical bag: elements sorted by their encoding (multiset order)."""
    return tuple(sorted(elems, key=_bag_key))


def size(t: ResTerm) -> int:
    return t.size


def alpha_eq(a: Term | ResTerm, b: Term | ResTerm) -> bool:
    """Alpha-equivalence; with this representation, plain equality."""
    return a == b


# ---------- free atoms, degree, renaming ----------


def free_vars(t: Term | ResTerm) -> set[str]:
    out: set[str] = set()
    stack: list[Term | ResTerm] = [t]
    while stack:
        u = stack.pop()
        match u:
            case Var(ref=r) | RVar(ref=r):
                if isinstance(r, str):
                    out.add(r)
            case Lam(body=b) | RLam(body=b) | Mu(body=b) | RMu(body=b):
                stack.append(b)
            case App(fun=f, arg=a):
                stack.append(f)
                stack.append(a)
            case RApp(head=h, bag=bag):
                stack.append(h)
                stack.extend(bag)
    return out


def free_names(t: Term | ResTerm) -> set[str]:
    out: set[str] = set()
    stack: list[Term | ResTerm] = [t]
    while stack:
        u = stack.pop()
        match u:
            case Mu(named=n, body=b) | RMu(named=n, body=b):
                if isinstance(n, str):
                    out.add(n)
                stack.append(b)
            case Lam(body=b) | RLam(body=b):
                stack.append(b)
            case App(fun=f, arg=a):
                stack.append(f)
                stack.append(a)
            case RApp(head=h, bag=bag):
                stack.append(h)
                stack.extend(bag)
    return out


def degree(nu: str, t: Term | ResTerm) -> int:
    """Number of free occurrences of a variable or name.

    ``nu`` is written grammar-style: ``"x"`` counts a variable, ``"'a"``
    counts a name (names only ever occur in naming position).
    """
    assert nu, nu
    if nu.startswith("'"):
        atom = nu[1:]
        kind = "name"
    else:
        atom = nu
        kind = "var"
    n = 0
    stack: list[Term | ResTerm] = [t]
    while stack:
        u = stack.pop()
        match u:
            case Var(ref=r) | RVar(ref=r):
                if kind == "var" and r == atom:
                    n += 1
            case Lam(body=b) | RLam(body=b):
                stack.append(b)
            case Mu(named=nr, body=b) | RMu(named=nr, body=b):
                if kind == "name" and nr == atom:
                    n += 1
                stack.append(b)
            case App(fun=f, arg=a):
                stack.append(f)
                stack.append(a)
            case RApp(head=h, bag=bag):
                stack.append(h)
                stack.extend(bag)
    return n


def deg_bag(nu: str, bag: Bag) -> int:
    return sum(degree(nu, e) for e in bag)


def _strip_quote(name: str) -> str:
    return name[1:] if name.startswith("'") else name


def rename_name(t, alpha: str, beta: str):
    """Apply the renaming {alpha/beta}: free name beta becomes alpha.

    Accepts terms, resource terms or sums; names may be given with or
    without the leading quote.
    """
    alpha = _strip_quote(alpha)
    beta = _strip_quote(beta)
    if isinstance(t, Sum):
        return t.map(lambda u: rename_name(u, alpha, beta))
    if alpha == beta:
        return t

    def go(u):
        match u:
            case Var() | RVar():
                return u
            case Lam(body=b):
                return Lam(go(b))
            case RLam(body=b):
                return RLam(go(b))
            case App(fun=f, arg=a):
                return App(go(f), go(a))
            case RApp(head=h, bag=bag):
                return RApp(go(h), [go(e) for e in bag])
            case Mu(named=nr, body=b):
                return Mu(alpha if nr == beta else nr, go(b))
            case RMu(named=nr, body=b):
                return RMu(alpha if nr == beta else nr, go(b))
        raise AssertionError(u)

    return go(t)


def term_nodes(t: Term) -> int:
    """Plain node count for lambda-mu terms (generator budgets, nothing else)."""
    match t:
        case Var():
            return 1
        case Lam(body=b) | Mu(body=b):
            return 1 + term_nodes(b)
        case App(fun=f, arg=a):
            return 1 + term_nodes(f) + term_nodes(a)
    raise AssertionError(t)


# ---------- sums ----------

BOOL = "bool"
NAT = "nat"


class Sum:
    """Finite formal sum of resource terms with coefficients in a semiring.

    ``semiring`` is ``BOOL`` (idempotent: coefficients saturate at 1) or
    ``NAT`` (exact counts).  Items are kept sorted by term encoding, merged,
    and never carry a zero coefficient, so equal sums compare equal.
    """

    __slots__ = ("semiring", "items")

    def __init__(self, semiring: str, items: Iterable[tuple[ResTerm, int]]):
        assert semiring in (BOOL, NAT), semiring
        merged: dict[ResTerm, int] = {}
        for t, c in items:
            assert isinstance(t, ResTerm), t
            assert isinstance(c, int) and c >= 0, c
            if c == 0:
                continue
            merged[t] = merged.get(t, 0) + c
        if semiring == BOOL:
            for t in merged:
                merged[t] = 1
        self.semiring = semiring
        self.items = tuple(sorted(merged.items(), key=lambda tc: _bag_key(tc[0])))

    # -- constructors --

    @classmethod
    def zero(cls, semiring: str) -> "Sum":
        return cls(semiring, ())

    @classmethod
    def unit(cls, t: ResTerm, semiring: str) -> "Sum":
        return cls(semiring, ((t, 1),))

    # -- queries --

    @property
    def is_zero(self) -> bool:
        return not self.items

    def terms(self) -> tuple[ResTerm, ...]:
        return tuple(t for t, _ in self.items)

    def coeff(self, t: ResTerm) -> int:
        for u, c in self.items:
            if u == t:
                return c
        return 0

    def __iter__(self) -> Iterator[tuple[ResTerm, int]]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, t: ResTerm) -> bool:
        return self.coeff(t) > 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Sum)
            and self.semiring == other.semiring
            and self.items == other.items
        )

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return hash((self.semiring, self.items))

    def __repr__(self) -> str:
        from . import textio

        return f"<Sum:{self.semiring} {textio.print_sum(self)}>"

    # -- arithmetic --

    def add(self, other: "Sum") -> "Sum":
        assert self.semiring == other.semiring, (self.semiring, other.semiring)
        return Sum(self.semiring, self.items + other.items)

    __add__ = add

    def scale(self, k: int) -> "Sum":
        assert isinstance(k, int) and k >= 0, k
        if k == 0:
            return Sum.zero(self.semiring)
        if k == 1:
            return self
        return Sum(self.semiring, ((t, c * k) for t, c in self.items))

    def map(self, f: Callable[[ResTerm], ResTerm]) -> "Sum":
        """Apply a term constructor addend-wise (linearity of constructors)."""
        return Sum(self.semiring, ((f(t), c) for t, c in self.items))

    def bind(self, f: Callable[[ResTerm], "Sum"]) -> "Sum":
        """Substitute each addend by a whole sum, scaling by its coefficient."""
        total = Sum.zero(self.semiring)
        for t, c in self.items:
            total = total.add(f(t).scale(c))
        return total

    def support(self) -> "Sum":
        """Forget multiplicities: the same addends over the Bool semiring."""
        return Sum(BOOL, ((t, 1) for t, _ in self.items))

    def to_semiring(self, semiring: str) -> "Sum":
        if semiring == self.semiring:
            return self
        if semiring == BOOL:
            return self.support()
        return Sum(NAT, self.items)


def lift_app(head: Sum, args: list[Sum]) -> Sum:
    """Multilinear application: distribute a sum head over sums of bag slots."""
    semiring = head.semiring
    total_items: list[tuple[ResTerm, int]] = []
    for h, ch in head.items:
        choices: list[tuple[list[ResTerm], int]] = [([], ch)]
        for arg in args:
            assert arg.semiring == semiring
            choices = [
                (picked + [t], c * ct) for picked, c in choices for t, ct in arg.items
            ]
        for picked, c in choices:
            total_items.append((RApp(h, picked), c))
    return Sum(semiring, total_items)


# ---------- opening and closing binders ----------
#
# Rewriting below a binder works on an "opened" copy whose bound references
# are fresh atoms; results are closed back afterwards.  Opening preserves bag
# element order (positions computed on the closed term stay valid), closing
# rebuilds canonically.


def open_rvar(t: ResTerm, atom: str) -> ResTerm:
    def go(u: ResTerm, d: int) -> ResTerm:
        match u:
            case RVar(ref=r):
                return RVar(atom) if r == d else u
            case RLam(body=b):
                return RLam(go(b, d + 1))
            case RMu(named=nr, body=b):
                return RMu(nr, go(b, d))
            case RApp(head=h, bag=bag):
                return RApp(go(h, d), [go(e, d) for e in bag], _raw=True)
        raise AssertionError(u)

    return go(t, 0)


def close_rvar(t: ResTerm, atom: str) -> ResTerm:
    def go(u: ResTerm, d: int) -> ResTerm:
        match u:
            case RVar(ref=r):
                return RVar(d) if r == atom else u
            case RLam(body=b):
                return RLam(go(b, d + 1))
            case RMu(named=nr, body=b):
                return RMu(nr, go(b, d))
            case RApp(head=h, bag=bag):
                return RApp(go(h, d), [go(e, d) for e in bag])
        raise AssertionError(u)

    return go(t, 0)


def open_rname(t: ResTerm, atom: str) -> ResTerm:
    # d is the index that resolves to the opened binder at naming positions
    # of the current node; a naming scope counts the node's own binder as 0,
    # so the walk starts at 1.
    def go(u: ResTerm, d: int) -> ResTerm:
        match u:
            case RVar():
                return u
            case RLam(body=b):
                return RLam(go(b, d))
            case RMu(named=nr, body=b):
                return RMu(atom if nr == d else nr, go(b, d + 1))
            case RApp(head=h, bag=bag):
                return RApp(go(h, d), [go(e, d) for e in bag], _raw=True)
        raise AssertionError(u)

    return go(t, 1)


def close_rname(t: ResTerm, atom: str) -> ResTerm:
    def go(u: ResTerm, d: int) -> ResTerm:
        match u:
            case RVar():
                return u
            case RLam(body=b):
                return RLam(go(b, d))
            case RMu(named=nr, body=b):
                return RMu(d if nr == atom else nr, go(b, d + 1))
            case RApp(head=h, bag=bag):
                return RApp(go(h, d), [go(e, d) for e in bag])
        raise AssertionError(u)

    return go(t, 1)


def open_var(t: Term, atom: str) -> Term:
    def go(u: Term, d: int) -> Term:
        match u:
            case Var(ref=r):
                return Var(atom) if r == d else u
            case Lam(body=b):
                return Lam(go(b, d + 1))
            case Mu(named=nr, body=b):
                return Mu(nr, go(b, d))
            case App(fun=f, arg=a):
                return App(go(f, d), go(a, d))
        raise AssertionError(u)

    return go(t, 0)


def close_var(t: Term, atom: str) -> Term:
    def go(u: Term, d: int) -> Term:
        match u:
            case Var(ref=r):
                return Var(d) if r == atom else u
            case Lam(body=b):
                return Lam(go(b, d + 1))
            case Mu(named=nr, body=b):
                return Mu(nr, go(b, d))
            case App(fun=f, arg=a):
                return App(go(f, d), go(a, d))
        raise AssertionError(u)

    return go(t, 0)


def open_name(t: Term, atom: str) -> Term:
    # Same depth convention as open_rname: start at 1 because a naming scope
    # counts its own binder as 0.
    def go(u: Term, d: int) -> Term:
        match u:
            case Var():
                return u
            case Lam(body=b):
                return Lam(go(b, d))
            case Mu(named=nr, body=b):
                return Mu(atom if nr == d else nr, go(b, d + 1))
            case App(fun=f, arg=a):
                return App(go(f, d), go(a, d))
        raise AssertionError(u)

    return go(t, 1)


def close_name(t: Term, atom: str) -> Term:
    def go(u: Term, d: int) -> Term:
        match u:
            case Var():
                return u
            case Lam(body=b):
                return Lam(go(b, d))
            case Mu(named=nr, body=b):
                return Mu(d if nr == atom else nr, go(b, d + 1))
            case App(fun=f, arg=a):
                return App(go(f, d), go(a, d))
        raise AssertionError(u)

    return go(t, 1)


def open_mu_binder(t: Mu | RMu, atom: str):
    """Open a mu node's own binder; returns (named_ref, body) with the bound
    name replaced by ``atom`` in both the naming position and the body."""
    named = atom if t.named == 0 else t.named
    if isinstance(t, Mu):
        body = open_name(t.body, atom)
    else:
        body = open_rname(t.body, atom)
    return named, body


# ---------- positions ----------
#
# A position is a tuple of child indices.  Bodies are child 0; an
# application's function is child 0 and its argument child 1; a resource
# application's head is child 0 and bag elements are children 1..n in
# canonical bag order.

Pos = tuple[int, ...]


def children(t: Term | ResTerm) -> list[tuple[int, Term | ResTerm]]:
    match t:
        case Var() | RVar():
            return []
        case Lam(body=b) | Mu(body=b) | RLam(body=b) | RMu(body=b):
            return [(0, b)]
        case App(fun=f, arg=a):
            return [(0, f), (1, a)]
        case RApp(head=h, bag=bag):
            return [(0, h)] + [(i + 1, e) for i, e in enumerate(bag)]
    raise AssertionError(t)


def subterm_at(t: Term | ResTerm, pos: Pos) -> Term | ResTerm:
    u = t
    for i in pos:
        kids = dict(children(u))
        assert i in kids, (pos, i, u)
        u = kids[i]
    return u


# ---------- contexts ----------
#
# Contexts are surface-named lambda-mu trees with indexed holes; filling is
# capture-permitting, which is the entire reason they are not plain terms.


class Ctx:
    __slots__ = ()


class CVar(Ctx):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name


class CLam(Ctx):
    __slots__ = ("var", "body")

    def __init__(self, var: str, body: Ctx):
        self.var = var
        self.body = body


class CApp(Ctx):
    __slots__ = ("fun", "arg")

    def __init__(self, fun: Ctx, arg: Ctx):
        self.fun = fun
        self.arg = arg


class CMu(Ctx):
    __slots__ = ("bind", "named", "body")

    def __init__(self, bind: str, named: str, body: Ctx):
        self.bind = bind
        self.named = named
        self.body = body


class CHole(Ctx):
    __slots__ = ("index",)

    def __init__(self, index: int):
        assert index >= 1, index
        self.index = index


class ContextArityError(ValueError):
    pass


def holes(c: Ctx) -> tuple[int, ...]:
    out: set[int] = set()

    def go(u: Ctx) -> None:
        match u:
            case CHole(index=i):
                out.add(i)
            case CVar():
                pass
            case CLam(body=b):
                go(b)
            case CMu(body=b):
                go(b)
            case CApp(fun=f, arg=a):
                go(f)
                go(a)

    go(c)
    return tuple(sorted(out))


def fill(c: Ctx, args: dict[int, Term] | list[Term]) -> Term:
    """Plug terms into a context's holes, permitting capture.

    Free atoms of a plugged term that coincide with binders in scope at the
    hole become bound; this is deliberate (it is what separates contexts
    from terms).
    """
    if isinstance(args, list):
        args = {i + 1: t for i, t in enumerate(args)}
    need = holes(c)
    missing = [i for i in need if i not in args]
    if missing:
        raise ContextArityError(f"no argument for hole(s) {missing}")

    def graft(u: Term, vmap: dict[str, int], nmap: dict[str, int], ld: int, nd: int) -> Term:
        def go(w: Term, dl: int, dn: int) -> Term:
            match w:
                case Var(ref=r):
                    if isinstance(r, str) and r in vmap:
                        return Var(ld + dl - 1 - vmap[r])
                    return w
                case Lam(body=b):
                    return Lam(go(b, dl + 1, dn))
                case Mu(named=nr, body=b):
                    if isinstance(nr, str) and nr in nmap:
                        nr = nd + dn - nmap[nr]
                    return Mu(nr, go(b, dl, dn + 1))
                case App(fun=f, arg=a):
                    return App(go(f, dl, dn), go(a, dl, dn))
            raise AssertionError(w)

        return go(u, 0, 0)

    def go(u: Ctx, vmap: dict[str, int], nmap: dict[str, int], ld: int, nd: int) -> Term:
        match u:
            case CHole(index=i):
                return graft(args[i], vmap, nmap, ld, nd)
            case CVar(name=x):
                if x in vmap:
                    return Var(ld - 1 - vmap[x])
                return Var(x)
            case CLam(var=x, body=b):
                return Lam(go(b, {**vmap, x: ld}, nmap, ld + 1, nd))
            case CMu(bind=a, named=e, body=b):
                nmap2 = {**nmap, a: nd}
                named: Ref = (nd - nmap2[e]) if e in nmap2 else e
                return Mu(named, go(b, vmap, nmap2, ld, nd + 1))
            case CApp(fun=f, arg=a2):
                return App(go(f, vmap, nmap, ld, nd), go(a2, vmap, nmap, ld, nd))
        raise AssertionError(u)

    return go(c, {}, {}, 0, 0)


# ---------- combinatorial checks ----------


def is_locally_closed(t: Term | ResTerm) -> bool:
    """True when no de Bruijn index points outside the term."""

    def go(u, dl: int, dn: int) -> bool:
        match u:
            case Var(ref=r) | RVar(ref=r):
                return not (isinstance(r, int) and r >= dl)
            case Lam(body=b) | RLam(body=b):
                return go(b, dl + 1, dn)
            case Mu(named=nr, body=b) | RMu(named=nr, body=b):
                if isinstance(nr, int) and nr > dn:
                    return False
                return go(b, dl, dn + 1)
            case App(fun=f, arg=a):
                return go(f, dl, dn) and go(a, dl, dn)
            case RApp(head=h, bag=bag):
                return go(h, dl, dn) and all(go(e, dl, dn) for e in bag)
        raise AssertionError(u)

    return go(t, 0, 0)


def multinomial(counts: Iterable[int]) -> int:
    counts = list(counts)
    total = sum(counts)
    out = math.factorial(total)
    for c in counts:
        out //= math.factorial(c)
    return out
