"""Core representation: canonical encodings, binder open/close, sums."""

import random

import pytest
from hypothesis import given, strategies as st

from mulam.gen import gen_res, gen_term
from mulam.syntax import (
    BOOL,
    NAT,
    App,
    ContextArityError,
    Lam,
    Mu,
    RApp,
    RLam,
    RMu,
    RVar,
    Sum,
    Var,
    alpha_eq,
    close_rvar,
    deg_bag,
    degree,
    fill,
    free_names,
    free_vars,
    fresh_atom,
    holes,
    is_locally_closed,
    lift_app,
    mkbag,
    multinomial,
    open_mu_binder,
    open_rvar,
    size,
    subterm_at,
)
from mulam.textio import ParseError, parse_context, parse_res, parse_term

# ---------- alpha equality and canonical bags ----------


def test_alpha_equality_ignores_binder_names():
    assert parse_term(r"\x.x") == parse_term(r"\y.y")
    assert parse_term(r"mu 'a.<'a> x") == parse_term(r"mu 'b.<'b> x")
    assert parse_term(r"\x.x") != parse_term(r"\x.y")


def test_bags_are_canonically_sorted():
    a = parse_res("x[y,z 1]")
    b = parse_res("x[z 1,y]")
    assert a == b
    assert a.bag == b.bag


def test_bag_keeps_duplicates():
    t = parse_res("x[y,y]")
    assert len(t.bag) == 2


def test_terms_hash_consistently():
    s = {parse_res("x[y,z]"), parse_res("x[z,y]"), parse_res("x[y]")}
    assert len(s) == 2


# ---------- naming scope of mu ----------


def test_mu_naming_resolves_through_its_own_binder():
    # the naming slot counts the mu's own binder as reference 0
    assert parse_term(r"mu 'a.<'a> x").named == 0
    assert parse_term(r"mu 'a.<'b> x").named == "b"
    outer = parse_term(r"mu 'a.<'a> mu 'b.<'a> x")
    inner = outer.body
    assert isinstance(inner, Mu) and inner.named == 1


def test_open_mu_binder_roundtrip():
    t = parse_term(r"mu 'a.<'a> x (mu 'b.<'a> y)")
    named, body = open_mu_binder(t, "f~1")
    assert named == "f~1"
    assert "f~1" in free_names(body)


# ---------- open and close ----------


def test_open_is_identity_on_locally_closed_terms():
    for seed in range(50):
        t = gen_res(random.Random(seed), 12)
        assert is_locally_closed(t)
        assert open_rvar(t, "w~9") == t


def test_close_undoes_open_under_a_binder():
    for seed in range(50):
        t = gen_res(random.Random(seed), 12)
        body = RLam(t).body
        a = fresh_atom("x")
        assert close_rvar(open_rvar(body, a), a) == body


# ---------- free variables, names, degrees ----------


def test_free_vars_and_names():
    t = parse_term(r"\x.mu 'a.<'b> x y")
    assert free_vars(t) == {"y"}
    assert free_names(t) == {"b"}


def test_degree_counts_occurrences():
    t = parse_res("x[x,y] 1")
    assert degree("x", t) == 2
    assert degree("y", t) == 1
    assert degree("z", t) == 0


def test_name_degree_counts_namings():
    t = parse_res("mu 'g.<'a> x[mu 'd.<'a> y]")
    assert degree("'a", t) == 2
    assert deg_bag("'a", t.body.bag) == 1


# ---------- sums ----------


def test_sum_merges_equal_addends():
    x, y = RVar("x"), RVar("y")
    s = Sum(NAT, [(x, 1), (y, 2), (x, 3)])
    assert s.coeff(x) == 4 and s.coeff(y) == 2
    assert len(s) == 2


def test_bool_sums_saturate():
    x = RVar("x")
    s = Sum(BOOL, [(x, 1), (x, 5)])
    assert s.coeff(x) == 1


def test_zero_coefficients_vanish():
    x = RVar("x")
    assert Sum(NAT, [(x, 0)]).is_zero
    assert Sum.unit(x, NAT).scale(0).is_zero


def test_sum_equality_is_semiring_sensitive():
    x = RVar("x")
    assert Sum.unit(x, NAT) != Sum.unit(x, BOOL)
    assert Sum(NAT, [(x, 2)]).support() == Sum.unit(x, BOOL)


def test_bind_scales_by_coefficient():
    x, y = RVar("x"), RVar("y")
    s = Sum(NAT, [(x, 3)])
    out = s.bind(lambda t: Sum(NAT, [(y, 2)]))
    assert out == Sum(NAT, [(y, 6)])


def test_lift_app_is_multilinear():
    x, y, z = RVar("x"), RVar("y"), RVar("z")
    head = Sum(NAT, [(x, 2)])
    arg = Sum(NAT, [(y, 1), (z, 3)])
    out = lift_app(head, [arg])
    assert out == Sum(NAT, [(RApp(x, [y]), 2), (RApp(x, [z]), 6)])


def test_lift_app_annihilates_on_zero():
    x = RVar("x")
    assert lift_app(Sum.unit(x, NAT), [Sum.zero(NAT)]).is_zero


# ---------- positions ----------


def test_subterm_at_follows_children():
    t = parse_term(r"(\x.x) (mu 'a.<'a> y)")
    assert subterm_at(t, ()) == t
    assert isinstance(subterm_at(t, (0,)), Lam)
    assert isinstance(subterm_at(t, (1,)), Mu)
    assert subterm_at(t, (1, 0)) == Var("y")


def test_subterm_at_resource_bags():
    t = parse_res("x[y,z 1]")
    got = {subterm_at(t, (1,)), subterm_at(t, (2,))}
    assert got == {RVar("y"), parse_res("z 1")}


# ---------- contexts ----------


def test_fill_is_capture_permitting():
    c = parse_context(r"\x._1")
    assert fill(c, [Var("x")]) == parse_term(r"\x.x")


def test_fill_captures_names_too():
    c = parse_context(r"mu 'a.<'a> _1")
    filled = fill(c, [parse_term(r"mu 'b.<'a> x")])
    # the free 'a of the argument is captured by the context's mu
    assert free_names(filled) == set()


def test_fill_checks_arity():
    c = parse_context("_1 _2")
    assert holes(c) == (1, 2)
    with pytest.raises(ContextArityError):
        fill(c, [Var("x")])


# ---------- fresh atoms ----------


def test_fresh_atoms_do_not_collide_or_parse():
    a, b = fresh_atom("x"), fresh_atom("x")
    assert a != b and "~" in a
    with pytest.raises(ParseError):
        parse_term(a)


# ---------- generated terms stay well formed ----------


@given(st.integers(min_value=0, max_value=10_000))
def test_generated_resource_terms_are_locally_closed(seed):
    t = gen_res(random.Random(seed), 16)
    assert is_locally_closed(t)
    assert 1 <= size(t) <= 16


@given(st.integers(min_value=0, max_value=10_000))
def test_generated_lamu_terms_are_locally_closed(seed):
    t = gen_term(random.Random(seed), 12)
    assert is_locally_closed(t)


def test_size_counts_bag_slots():
    assert size(parse_res("x")) == 1
    assert size(parse_res("x 1")) == 2
    assert size(parse_res("x[y]")) == 4
    assert size(parse_res("x[y,z]")) == 6
    assert size(parse_res(r"\x.x")) == 2
    assert size(parse_res("mu 'a.<'a> x")) == 2


def test_multinomial():
    assert multinomial([2, 1]) == 3
    assert multinomial([1, 1, 1]) == 6
    assert multinomial([3]) == 1
    assert multinomial([]) == 1
