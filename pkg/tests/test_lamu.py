"""Classical lambda-mu reduction: beta, structural mu, renaming collapse."""

import pytest

from mulam.lamu import (
    FuelExhausted,
    Hnf,
    contract,
    head_decompose,
    head_redex_pos,
    head_run,
    head_step,
    is_hnf,
    named_app,
    reassemble,
    redex_kind,
    redexes,
    reduce_redex,
    rho_term,
    subst,
)
from mulam.syntax import App, Lam, Mu, Var, is_locally_closed
from mulam.taylor import church_true, omega
from mulam.textio import parse_term, print_term


def _p(src):
    return parse_term(src)


# ---------- substitution and named application ----------


def test_subst_replaces_free_occurrences():
    t = subst(_p("x (\\y.x)"), "x", _p("z w"))
    assert t == _p("(z w) (\\y.z w)")


def test_subst_leaves_other_atoms():
    assert subst(_p("y"), "x", _p("z")) == _p("y")


def test_named_app_appends_at_namings():
    t = _p("mu 'b.<'a> x (mu 'g.<'a> y)")
    _, body = t.named, t.body
    got = named_app(t, "a", _p("z"))
    assert got == _p("mu 'b.<'a> (x (mu 'g.<'a> y z)) z")


def test_named_app_skips_other_names():
    t = _p("mu 'b.<'g> x")
    assert named_app(t, "a", _p("z")) == t


# ---------- the three contractions ----------


def test_beta_contraction():
    assert contract(_p("(\\x.x x) y")) == _p("y y")


def test_mu_contraction_threads_the_argument():
    t = _p("(mu 'a.<'a> x) y")
    assert contract(t) == _p("mu 'a.<'a> x y")


def test_mu_contraction_under_a_different_name():
    t = _p("(mu 'a.<'b> x) y")
    assert contract(t) == _p("mu 'a.<'b> x")


def test_rho_merges_consecutive_namings():
    assert rho_term(_p("mu 'g.<'a> mu 'b.<'h> x")) == _p("mu 'g.<'h> x")


def test_rho_renames_the_inner_name():
    # the collapsed binder's occurrences are renamed to the outer naming
    t = _p("mu 'g.<'a> mu 'b.<'b> x (mu 'd.<'b> y)")
    assert rho_term(t) == _p("mu 'g.<'a> x (mu 'd.<'a> y)")


def test_rho_targets_self_naming():
    t = _p("mu 'g.<'g> mu 'b.<'b> x")
    assert rho_term(t) == _p("mu 'g.<'g> x")


def test_redex_kinds():
    assert redex_kind(_p("(\\x.x) y")) == "lam"
    assert redex_kind(_p("(mu 'a.<'a> x) y")) == "mu"
    assert redex_kind(_p("mu 'a.<'b> mu 'g.<'d> x")) == "rho"
    assert redex_kind(_p("x y")) is None


def test_redexes_find_every_position():
    t = _p("(\\x.x) ((mu 'a.<'a> y) z)")
    assert {(pos, kind) for pos, kind in redexes(t)} == {
        ((), "lam"),
        ((1,), "mu"),
    }


def test_reduce_redex_below_a_binder():
    t = _p("\\x.x ((\\y.y) z)")
    assert reduce_redex(t, (0, 1)) == _p("\\x.x z")


def test_reduce_redex_below_mu():
    t = _p("mu 'a.<'a> (\\x.x) y")
    assert reduce_redex(t, (0,)) == _p("mu 'a.<'a> y")


# ---------- head machinery ----------


def test_head_decompose_roundtrips():
    for src in (
        "(\\y.y) z w",
        "\\x.mu 'a.<'b> x y z",
        "x y z",
        "\\x.\\y.mu 'a.<'a> (\\z.z) x",
        "mu 'a.<'a> mu 'b.<'a> x",
    ):
        t = _p(src)
        assert reassemble(head_decompose(t)) == t, src


def test_head_of_an_application_redex_is_the_redex():
    shape = head_decompose(_p("(\\y.y) z w"))
    assert shape.head == _p("(\\y.y) z")
    assert len(shape.spine) == 1


def test_hnf_recognition():
    assert is_hnf(_p("\\x.x y"))
    assert is_hnf(_p("mu 'a.<'b> x y"))
    assert not is_hnf(_p("(\\x.x) y"))
    assert not is_hnf(_p("mu 'a.<'b> mu 'g.<'d> x"))  # collapsible prefix
    assert is_hnf(_p("\\x.x ((\\y.y) z)"))  # spine redexes do not block hnf


def test_head_redex_prefers_prefix_collapse():
    t = _p("mu 'a.<'b> mu 'g.<'d> (\\x.x) y")
    assert head_redex_pos(t) == ((), "rho")


def test_head_redex_in_the_spine():
    t = _p("(\\x.x) y z")
    assert head_redex_pos(t) == ((0,), "lam")


def test_head_step_sequence():
    t = _p("(\\x.x x) (\\y.y)")
    t1 = head_step(t)
    t2 = head_step(t1)
    assert t1 == _p("(\\y.y) (\\y.y)")
    assert t2 == _p("\\y.y")
    assert head_step(t2) is None


def test_head_run_reaches_hnf():
    out = head_run(_p("(\\x.x x) (\\y.y)"), 10)
    assert isinstance(out, Hnf)
    assert out.steps == 2 and out.term == _p("\\y.y")


def test_head_run_gives_up_honestly():
    out = head_run(omega(), 25)
    assert isinstance(out, FuelExhausted)
    assert out.fuel == 25


def test_callcc_is_already_head_normal():
    cc = _p("\\y. mu 'a.<'a> y (\\x. mu 'd.<'a> x)")
    assert is_hnf(cc)
    out = head_run(cc, 5)
    assert isinstance(out, Hnf) and out.steps == 0


# ---------- printing stays in sync ----------


def test_reduction_preserves_local_closure():
    t = _p("(\\x.mu 'a.<'a> x ((\\y.y) z)) w")
    seen = [t]
    while True:
        rs = redexes(seen[-1])
        if not rs:
            break
        nxt = reduce_redex(seen[-1], rs[0][0])
        assert is_locally_closed(nxt), print_term(seen[-1])
        seen.append(nxt)
    assert seen[-1] == _p("mu 'a.<'a> w z")
