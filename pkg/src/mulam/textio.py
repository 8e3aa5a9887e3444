"""Concrete syntax: parsing with source spans, deterministic printing, JSON.

Grammar (ASCII; whitespace insensitive; ``mu`` is a keyword):

    term    := '\\' VAR '.' term
             | 'mu' NAME '.' '<' NAME '>' term      (bodies extend maximally)
             | atom atom*                            (application, left assoc)
    atom    := VAR | '(' term ')'

    rterm   := '\\' VAR '.' rterm
             | 'mu' NAME '.' '<' NAME '>' rterm
             | ratom rarg*
    rarg    := '[' (rterm (',' rterm)*)? ']' | '1'   ('1' is the empty bag)
    ratom   := VAR | '(' rterm ')'

    sum     := '0' | addend ('+' addend)*
    addend  := (NUM '*')? rterm

    context := term grammar extended with holes '_1', '_2', ...

    VAR  := [A-Za-z_][A-Za-z0-9_]*   NAME := '\\'' VAR   NUM := [0-9]+

Printers choose binder display names deterministically (never clashing with
a free atom or an enclosing binder), so printing is a pure function of the
term and parsing is its inverse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .syntax import (
    App,
    BOOL,
    CApp,
    CHole,
    CLam,
    CMu,
    Ctx,
    CVar,
    Lam,
    Mu,
    NAT,
    RApp,
    Ref,
    RLam,
    RMu,
    RVar,
    ResTerm,
    Sum,
    Term,
    Var,
    free_names,
    free_vars,
)

# ---------- lexer ----------


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int


class ParseError(ValueError):
    """Syntax error with the half-open source span it points at."""

    def __init__(self, message: str, start: int, end: int):
        super().__init__(f"parse error at {start}..{end}: {message}")
        self.message = message
        self.start = start
        self.end = end


_PUNCT = {
    "\\": "LAM",
    ".": "DOT",
    "(": "LPAR",
    ")": "RPAR",
    "[": "LBRACK",
    "]": "RBRACK",
    ",": "COMMA",
    "+": "PLUS",
    "*": "STAR",
    "<": "LT",
    ">": "GT",
}


def _is_ident_start(c: str) -> bool:
    return "a" <= c <= "z"


def _is_ident_char(c: str) -> bool:
    return "a" <= c <= "z" or "A" <= c <= "Z" or "0" <= c <= "9" or c == "_"


def lex(src: str) -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c in _PUNCT:
            toks.append(Token(_PUNCT[c], c, i, i + 1))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(Token("NUM", src[i:j], i, j))
            i = j
            continue
        if c == "'":
            j = i + 1
            if j >= n or not _is_ident_start(src[j]):
                raise ParseError("expected identifier after quote", i, i + 1)
            while j < n and _is_ident_char(src[j]):
                j += 1
            toks.append(Token("NAME", src[i + 1 : j], i, j))
            i = j
            continue
        if c == "_" and i + 1 < n and src[i + 1].isdigit():
            j = i + 1
            while j < n and src[j].isdigit():
                j += 1
            toks.append(Token("HOLE", src[i + 1 : j], i, j))
            i = j
            continue
        if _is_ident_start(c):
            j = i
            while j < n and _is_ident_char(src[j]):
                j += 1
            word = src[i:j]
            toks.append(Token("MU" if word == "mu" else "VAR", word, i, j))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i, i + 1)
    toks.append(Token("EOF", "", n, n))
    return toks


# ---------- parser scaffolding ----------


class _Parser:
    def __init__(self, src: str):
        self.toks = lex(src)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, what: str | None = None) -> Token:
        t = self.peek()
        if t.kind != kind:
            found = t.text or "end of input"
            raise ParseError(f"expected {what or kind}, found {found!r}", t.start, t.end)
        return self.next()

    def done(self) -> None:
        t = self.peek()
        if t.kind != "EOF":
            raise ParseError(f"unexpected trailing input {t.text!r}", t.start, t.end)


@dataclass
class _Scope:
    """Name-resolution environment shared by both term parsers."""

    venv: dict[str, int]
    nenv: dict[str, int]
    ld: int
    nd: int

    def push_var(self, x: str) -> "_Scope":
        return _Scope({**self.venv, x: self.ld}, self.nenv, self.ld + 1, self.nd)

    def push_name(self, a: str) -> "_Scope":
        return _Scope(self.venv, {**self.nenv, a: self.nd}, self.ld, self.nd + 1)

    def var_ref(self, x: str) -> Ref:
        if x in self.venv:
            return self.ld - 1 - self.venv[x]
        return x


def _empty_scope() -> _Scope:
    return _Scope({}, {}, 0, 0)


# ---------- lambda-mu terms ----------


def _parse_term(p: _Parser, sc: _Scope) -> Term:
    t = p.peek()
    if t.kind == "LAM":
        p.next()
        x = p.expect("VAR", "a variable").text
        p.expect("DOT", "'.'")
        return Lam(_parse_term(p, sc.push_var(x)))
    if t.kind == "MU":
        p.next()
        a = p.expect("NAME", "a name like 'a").text
        p.expect("DOT", "'.'")
        p.expect("LT", "'<'")
        e = p.expect("NAME", "a name like 'a").text
        p.expect("GT", "'>'")
        inner = sc.push_name(a)
        named = (inner.nd - 1 - inner.nenv[e]) if e in inner.nenv else e
        return Mu(named, _parse_term(p, inner))
    return _parse_app(p, sc)


def _parse_app(p: _Parser, sc: _Scope) -> Term:
    fun = _parse_atom(p, sc)
    while p.peek().kind in ("VAR", "LPAR"):
        fun = App(fun, _parse_atom(p, sc))
    return fun


def _parse_atom(p: _Parser, sc: _Scope) -> Term:
    t = p.peek()
    if t.kind == "VAR":
        p.next()
        return Var(sc.var_ref(t.text))
    if t.kind == "LPAR":
        p.next()
        inner = _parse_term(p, sc)
        p.expect("RPAR", "')'")
        return inner
    found = t.text or "end of input"
    raise ParseError(f"expected a term, found {found!r}", t.start, t.end)


def parse_term(src: str) -> Term:
    p = _Parser(src)
    out = _parse_term(p, _empty_scope())
    p.done()
    return out


# ---------- resource terms and sums ----------


def _parse_res(p: _Parser, sc: _Scope) -> ResTerm:
    t = p.peek()
    if t.kind == "LAM":
        p.next()
        x = p.expect("VAR", "a variable").text
        p.expect("DOT", "'.'")
        return RLam(_parse_res(p, sc.push_var(x)))
    if t.kind == "MU":
        p.next()
        a = p.expect("NAME", "a name like 'a").text
        p.expect("DOT", "'.'")
        p.expect("LT", "'<'")
        e = p.expect("NAME", "a name like 'a").text
        p.expect("GT", "'>'")
        inner = sc.push_name(a)
        named = (inner.nd - 1 - inner.nenv[e]) if e in inner.nenv else e
        return RMu(named, _parse_res(p, inner))
    return _parse_rchain(p, sc)


def _parse_rchain(p: _Parser, sc: _Scope) -> ResTerm:
    out = _parse_ratom(p, sc)
    while True:
        t = p.peek()
        if t.kind == "LBRACK":
            p.next()
            elems: list[ResTerm] = []
            if p.peek().kind != "RBRACK":
                elems.append(_parse_res(p, sc))
                while p.peek().kind == "COMMA":
                    p.next()
                    elems.append(_parse_res(p, sc))
            p.expect("RBRACK", "']'")
            out = RApp(out, elems)
        elif t.kind == "NUM":
            if t.text != "1":
                raise ParseError(
                    f"expected '1' (the empty bag) or '[', found {t.text!r}",
                    t.start,
                    t.end,
                )
            p.next()
            out = RApp(out, ())
        else:
            return out


def _parse_ratom(p: _Parser, sc: _Scope) -> ResTerm:
    t = p.peek()
    if t.kind == "VAR":
        p.next()
        return RVar(sc.var_ref(t.text))
    if t.kind == "LPAR":
        p.next()
        inner = _parse_res(p, sc)
        p.expect("RPAR", "')'")
        return inner
    found = t.text or "end of input"
    raise ParseError(f"expected a resource term, found {found!r}", t.start, t.end)


def parse_res(src: str) -> ResTerm:
    p = _Parser(src)
    out = _parse_res(p, _empty_scope())
    p.done()
    return out


def parse_sum(src: str, semiring: str = NAT) -> Sum:
    p = _Parser(src)
    t = p.peek()
    if t.kind == "NUM" and t.text == "0":
        nxt = p.toks[p.i + 1]
        if nxt.kind == "EOF":
            return Sum.zero(semiring)
    items: list[tuple[ResTerm, int]] = []
    while True:
        coeff = 1
        t = p.peek()
        if t.kind == "NUM" and p.toks[p.i + 1].kind == "STAR":
            coeff = int(t.text)
            p.next()
            p.next()
        items.append((_parse_res(p, _empty_scope()), coeff))
        if p.peek().kind != "PLUS":
            break
        p.next()
    p.done()
    return Sum(semiring, items)


# ---------- contexts ----------


def _parse_ctx(p: _Parser) -> Ctx:
    t = p.peek()
    if t.kind == "LAM":
        p.next()
        x = p.expect("VAR", "a variable").text
        p.expect("DOT", "'.'")
        return CLam(x, _parse_ctx(p))
    if t.kind == "MU":
        p.next()
        a = p.expect("NAME", "a name like 'a").text
        p.expect("DOT", "'.'")
        p.expect("LT", "'<'")
        e = p.expect("NAME", "a name like 'a").text
        p.expect("GT", "'>'")
        return CMu(a, e, _parse_ctx(p))
    out = _parse_ctx_atom(p)
    while p.peek().kind in ("VAR", "LPAR", "HOLE"):
        out = CApp(out, _parse_ctx_atom(p))
    return out


def _parse_ctx_atom(p: _Parser) -> Ctx:
    t = p.peek()
    if t.kind == "VAR":
        p.next()
        return CVar(t.text)
    if t.kind == "HOLE":
        p.next()
        return CHole(int(t.text))
    if t.kind == "LPAR":
        p.next()
        inner = _parse_ctx(p)
        p.expect("RPAR", "')'")
        return inner
    found = t.text or "end of input"
    raise ParseError(f"expected a context, found {found!r}", t.start, t.end)


def parse_context(src: str) -> Ctx:
    p = _Parser(src)
    out = _parse_ctx(p)
    p.done()
    return out


# ---------- printers ----------

_VAR_BASES = ("x", "y", "z", "u", "v", "w")
_NAME_BASES = ("a", "b", "g", "d", "e", "h")


def _candidates(bases: tuple[str, ...]):
    yield from bases
    for k in itertools.count(1):
        for b in bases:
            yield f"{b}{k}"


def _pick(bases: tuple[str, ...], avoid: set[str]) -> str:
    for c in _candidates(bases):
        if c not in avoid:
            return c
    raise AssertionError("unreachable")


class _Namer:
    """Deterministic display names for binders: structure decides, nothing
    else, and no choice ever collides with a free atom or an active binder."""

    def __init__(self, value):
        vs: set[str] = set()
        ns: set[str] = set()
        todo = [value]
        while todo:
            v = todo.pop()
            if isinstance(v, Sum):
                todo.extend(v.terms())
            else:
                vs |= free_vars(v)
                ns |= free_names(v)
        self.free_v = vs
        self.free_n = ns

    def fresh_var(self, active: list[str]) -> str:
        return _pick(_VAR_BASES, self.free_v | set(active))

    def fresh_name(self, active: list[str]) -> str:
        return _pick(_NAME_BASES, self.free_n | set(active))


def _disp_ref(ref: Ref, stack: list[str]) -> str:
    if isinstance(ref, str):
        return ref
    if 0 <= ref < len(stack):
        return stack[-1 - ref]
    # Dangling reference: the fragment was cut below its binder (head
    # decomposition does this).  '#' is not lexable, so this cannot be
    # mistaken for a canonical printing.
    return f"#{ref}"


def print_term(t: Term) -> str:
    nm = _Namer(t)

    def go(u: Term, vs: list[str], ns: list[str]) -> str:
        match u:
            case Var(ref=r):
                return _disp_ref(r, vs)
            case Lam(body=b):
                x = nm.fresh_var(vs)
                return f"\\{x}.{go(b, vs + [x], ns)}"
            case Mu(named=nr, body=b):
                a = nm.fresh_name(ns)
                ns2 = ns + [a]
                return f"mu '{a}.<'{_disp_ref(nr, ns2)}> {go(b, vs, ns2)}"
            case App(fun=f, arg=arg):
                fs = go(f, vs, ns)
                if isinstance(f, (Lam, Mu)):
                    fs = f"({fs})"
                as_ = go(arg, vs, ns)
                if not isinstance(arg, Var):
                    as_ = f"({as_})"
                return f"{fs} {as_}"
        raise AssertionError(u)

    return go(t, [], [])


def print_res(t: ResTerm) -> str:
    nm = _Namer(t)

    def go(u: ResTerm, vs: list[str], ns: list[str]) -> str:
        match u:
            case RVar(ref=r):
                return _disp_ref(r, vs)
            case RLam(body=b):
                x = nm.fresh_var(vs)
                return f"\\{x}.{go(b, vs + [x], ns)}"
            case RMu(named=nr, body=b):
                a = nm.fresh_name(ns)
                ns2 = ns + [a]
                return f"mu '{a}.<'{_disp_ref(nr, ns2)}> {go(b, vs, ns2)}"
            case RApp(head=h, bag=bag):
                hs = go(h, vs, ns)
                if isinstance(h, (RLam, RMu)):
                    hs = f"({hs})"
                if not bag:
                    return f"{hs} 1"
                inner = ",".join(go(e, vs, ns) for e in bag)
                return f"{hs}[{inner}]"
        raise AssertionError(u)

    return go(t, [], [])


def print_sum(s: Sum) -> str:
    if s.is_zero:
        return "0"
    parts = []
    for t, c in s.items:
        rendered = print_res(t)
        parts.append(rendered if c == 1 else f"{c}*{rendered}")
    return " + ".join(parts)


# ---------- JSON export ----------


def term_to_json(t: Term) -> dict:
    nm = _Namer(t)

    def go(u: Term, vs: list[str], ns: list[str]) -> dict:
        match u:
            case Var(ref=r):
                return {"tag": "var", "name": _disp_ref(r, vs)}
            case Lam(body=b):
                x = nm.fresh_var(vs)
                return {"tag": "lam", "binder": x, "body": go(b, vs + [x], ns)}
            case Mu(named=nr, body=b):
                a = nm.fresh_name(ns)
                ns2 = ns + [a]
                return {
                    "tag": "mu",
                    "binder": a,
                    "named": _disp_ref(nr, ns2),
                    "body": go(b, vs, ns2),
                }
            case App(fun=f, arg=arg):
                return {"tag": "app", "fun": go(f, vs, ns), "arg": go(arg, vs, ns)}
        raise AssertionError(u)

    return go(t, [], [])


def res_to_json(t: ResTerm) -> dict:
    nm = _Namer(t)

    def go(u: ResTerm, vs: list[str], ns: list[str]) -> dict:
        match u:
            case RVar(ref=r):
                return {"tag": "var", "name": _disp_ref(r, vs)}
            case RLam(body=b):
                x = nm.fresh_var(vs)
                return {"tag": "lam", "binder": x, "body": go(b, vs + [x], ns)}
            case RMu(named=nr, body=b):
                a = nm.fresh_name(ns)
                ns2 = ns + [a]
                return {
                    "tag": "mu",
                    "binder": a,
                    "named": _disp_ref(nr, ns2),
                    "body": go(b, vs, ns2),
                }
            case RApp(head=h, bag=bag):
                return {
                    "tag": "bagapp",
                    "head": go(h, vs, ns),
                    "bag": [go(e, vs, ns) for e in bag],
                }
        raise AssertionError(u)

    return go(t, [], [])


def sum_to_json(s: Sum) -> dict:
    return {
        "tag": "sum",
        "semiring": s.semiring,
        "addends": [{"coeff": c, "term": res_to_json(t)} for t, c in s.items],
    }


def to_json(value) -> dict:
    if isinstance(value, Sum):
        return sum_to_json(value)
    if isinstance(value, ResTerm):
        return res_to_json(value)
    if isinstance(value, Term):
        return term_to_json(value)
    raise TypeError(f"cannot export {type(value).__name__}")


_ = BOOL  # re-exported semiring tags are part of this module's CLI surface
