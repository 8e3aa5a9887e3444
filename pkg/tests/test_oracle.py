"""Exhaustive reduction graphs: sinks, acyclicity, joinability."""

import pytest

from mulam.oracle import (
    GraphOverflow,
    explore,
    is_dag,
    joinable,
    reachable_sums,
    unique_sink,
)
from mulam.resource import normalize_r
from mulam.syntax import BOOL, NAT, Sum
from mulam.textio import parse_res, parse_sum


def _p(src):
    return parse_res(src)


def test_graph_of_the_two_copy_example():
    g = explore(_p("(mu 'a.<'a> mu 'e.<'a> x)[y,y]"), NAT)
    assert is_dag(g)
    sink = unique_sink(g)
    assert sink == normalize_r(_p("(mu 'a.<'a> mu 'e.<'a> x)[y,y]"), NAT)
    assert len(g.nodes) > 3
    assert all(e.kind in ("lam", "mu", "rho") for e in g.edges)


def test_normal_forms_are_their_own_graph():
    g = explore(_p("x[y]"), BOOL)
    assert len(g.nodes) == 1 and g.sinks == [0]
    assert unique_sink(g) == Sum.unit(_p("x[y]"), BOOL)


def test_annihilation_has_the_empty_sink():
    g = explore(_p("(\\x.x) 1"), NAT)
    assert unique_sink(g) == Sum.zero(NAT)


def test_node_cap_raises_instead_of_truncating():
    with pytest.raises(GraphOverflow):
        explore(_p("(mu 'a.<'a> mu 'e.<'a> x)[y,y]"), NAT, node_cap=2)


def test_joinable_after_diverging_first_steps():
    # both orders of contracting the blocked pair meet again
    orig = _p("(mu 'a.<'a> mu 'g.<'h> x) 1")
    a = parse_sum("mu 'a.<'a> (mu 'g.<'h> x) 1", NAT)
    b = parse_sum("(mu 'a.<'h> x) 1", NAT)
    assert joinable(a, b, NAT)


def test_occurrence_mode_reaches_interleavings():
    from mulam.syntax import RApp

    s = _p("(\\z.z)[y]")
    start = Sum(NAT, [(RApp(s, [s]), 2)])
    mixed = Sum(NAT, [(RApp(_p("y"), [s]), 1), (RApp(s, [_p("y")]), 1)])
    assert mixed in reachable_sums(explore(start, NAT, mode="occurrence"))
    assert mixed not in reachable_sums(explore(start, NAT, mode="coeff"))
