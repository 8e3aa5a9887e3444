"""Random term generators: determinism, coverage, and bounds."""

import random

import pytest

from mulam.gen import FREE_NAMES, FREE_VARS, gen_bag, gen_random, gen_res, gen_term
from mulam.syntax import (
    App,
    Lam,
    Mu,
    RApp,
    RLam,
    RMu,
    RVar,
    children,
    is_locally_closed,
    size,
    term_nodes,
)


def _nodes(t):
    yield t
    for _, kid in children(t):
        yield from _nodes(kid)


def test_seeded_generation_is_deterministic():
    for seed in range(40):
        assert gen_random("resterm", 20, seed) == gen_random("resterm", 20, seed)
        assert gen_random("term", 20, seed) == gen_random("term", 20, seed)


def test_unknown_kind_is_rejected():
    with pytest.raises(ValueError):
        gen_random("multiset", 10, 0)


def test_res_sizes_stay_within_budget():
    for seed in range(300):
        t = gen_random("resterm", 14, seed)
        assert 1 <= size(t) <= 14
        assert is_locally_closed(t)


def test_term_sizes_stay_within_budget():
    for seed in range(300):
        t = gen_random("term", 14, seed)
        assert 1 <= term_nodes(t) <= 14
        assert is_locally_closed(t)


def _constructors(t):
    return {type(u).__name__ for u in _nodes(t)}


def test_res_generator_covers_all_constructors():
    seen = set()
    nonempty_bag = False
    for seed in range(1000):
        t = gen_random("resterm", 18, seed)
        seen |= _constructors(t)
        for u in _nodes(t):
            if isinstance(u, RApp) and u.bag:
                nonempty_bag = True
    assert seen == {"RVar", "RLam", "RApp", "RMu"}
    assert nonempty_bag


def test_term_generator_covers_all_constructors():
    seen = set()
    for seed in range(1000):
        seen |= _constructors(gen_random("term", 18, seed))
    assert seen == {"Var", "Lam", "App", "Mu"}


def test_free_atoms_come_from_the_fixed_pools():
    for seed in range(200):
        t = gen_random("resterm", 16, seed)
        for u in _nodes(t):
            if isinstance(u, RVar) and isinstance(u.ref, str):
                assert u.ref in FREE_VARS
            if isinstance(u, RMu) and isinstance(u.named, str):
                assert u.named in FREE_NAMES


def test_mu_nesting_is_capped():
    def depth(t, d=0):
        worst = d
        if isinstance(t, (RMu, Mu)):
            d += 1
            worst = d
        if isinstance(t, (RLam, Lam)):
            worst = max(worst, depth(t.body, d))
        elif isinstance(t, (RMu, Mu)):
            worst = max(worst, depth(t.body, d))
        elif isinstance(t, RApp):
            worst = max(worst, depth(t.head, d))
            for e in t.bag:
                worst = max(worst, depth(e, d))
        elif isinstance(t, App):
            worst = max(worst, depth(t.fun, d), depth(t.arg, d))
        return worst

    for seed in range(300):
        assert depth(gen_random("resterm", 30, seed)) <= 3
        assert depth(gen_random("term", 30, seed)) <= 3


def test_gen_bag_respects_length_cap():
    rng = random.Random(7)
    lengths = {len(gen_bag(rng, 5, max_len=2)) for _ in range(200)}
    assert lengths <= {0, 1, 2}
    assert lengths == {0, 1, 2}  # all arities show up


def test_direct_entry_points_accept_an_rng():
    rng = random.Random(3)
    t = gen_res(rng, 12)
    u = gen_term(rng, 12)
    assert is_locally_closed(t) and is_locally_closed(u)


def test_generated_population_is_not_degenerate():
    # a healthy mix: some terms with binders, some plain applicative spines
    binderful = sum(
        1
        for seed in range(400)
        if any(isinstance(u, (RLam, RMu)) for u in _nodes(gen_random("resterm", 16, seed)))
    )
    assert 100 < binderful < 400
