import random

import pytest

from fdcalc.diagram import (
    Diagram, DiagramError, EMPTY, TypedDiagram, bare_edge, degree,
    disjoint_union, mark_root, symmetric_star, cyclic_star,
)
from fdcalc.iso import aut_order, are_isomorphic, canonical_code
from fdcalc.prop import (
    braiding, closures, compose, edge_pairings, identity, tensor,
)
from util import figure_eight, random_typed


def typed_with_src(rng: random.Random, k: int) -> TypedDiagram:
    """Random typed diagram with exactly k inputs, padded by plain wires."""
    for _ in range(40):
        t = random_typed(rng)
        if t.src == k:
            return t
        if t.src < k:
            return tensor(t, identity(k - t.src))
    return identity(k)


def test_identity_shape():
    t = identity(3)
    assert t.src == t.tgt == 3
    assert len(t.base.bare_pairs) == 3
    assert not t.base.vertices
    assert aut_order(t) == 1
    assert identity(0).base == EMPTY


def test_braiding_routes_wires():
    for m, n in [(1, 1), (2, 1), (2, 3), (0, 2), (3, 0)]:
        t = braiding(m, n)
        assert t.src == t.tgt == m + n
        p = t.base.partner
        for i in range(m):
            assert p[t.ins[i]] == t.outs[n + i]
        for j in range(n):
            assert p[t.ins[m + j]] == t.outs[j]


def test_braiding_involutive():
    for m, n in [(1, 1), (2, 1), (3, 2)]:
        twice = compose(braiding(n, m), braiding(m, n))
        assert are_isomorphic(twice, identity(m + n))


def test_snake_collapses_wire_chain():
    cup = TypedDiagram(bare_edge(), (), (0, 1))
    cap = TypedDiagram(bare_edge(), (0, 1), ())
    f = tensor(identity(1), cup)
    g = tensor(cap, identity(1))
    snake = compose(g, f)
    assert are_isomorphic(snake, identity(1))


def test_circle_is_rejected():
    cup = TypedDiagram(bare_edge(), (), (0, 1))
    cap = TypedDiagram(bare_edge(), (0, 1), ())
    with pytest.raises(DiagramError):
        compose(cap, cup)


def test_compose_arity_mismatch():
    with pytest.raises(DiagramError):
        compose(identity(2), identity(3))


def test_identity_laws():
    rng = random.Random(7)
    for _ in range(50):
        t = random_typed(rng)
        assert are_isomorphic(compose(identity(t.tgt), t), t)
        assert are_isomorphic(compose(t, identity(t.src)), t)


def test_compose_associative():
    rng = random.Random(11)
    done = 0
    while done < 30:
        f = random_typed(rng)
        g = typed_with_src(rng, f.tgt)
        h = typed_with_src(rng, g.tgt)
        try:
            left = compose(h, compose(g, f))
            right = compose(compose(h, g), f)
        except DiagramError:
            continue  # a circle can close either way; skip those triples
        assert are_isomorphic(left, right)
        done += 1


def test_braiding_natural():
    rng = random.Random(13)
    for _ in range(20):
        f = random_typed(rng)
        g = random_typed(rng)
        lhs = compose(braiding(f.tgt, g.tgt), tensor(f, g))
        rhs = compose(tensor(g, f), braiding(f.src, g.src))
        assert are_isomorphic(lhs, rhs)


def test_degree_additive():
    rng = random.Random(17)
    for _ in range(25):
        f = random_typed(rng)
        g = typed_with_src(rng, f.tgt)
        assert degree(tensor(f, g)) == degree(f) + degree(g)
        try:
            c = compose(g, f)
        except DiagramError:
            continue
        assert degree(c) == degree(f) + degree(g)


def test_edge_pairings_counts():
    assert len(edge_pairings(0)) == 1
    assert len(edge_pairings(2)) == 1
    assert len(edge_pairings(4)) == 3
    assert len(edge_pairings(6)) == 15
    assert len(edge_pairings(8)) == 105
    assert edge_pairings(3) == []
    assert edge_pairings(5) == []


def test_edge_pairings_rigid_and_distinct():
    seen = set()
    for t in edge_pairings(6):
        assert t.src == 0 and t.tgt == 6
        assert aut_order(t) == 1
        seen.add(canonical_code(t).code)
    assert len(seen) == 15


def test_two_stars_compose_to_theta():
    a = TypedDiagram(symmetric_star("phi3", 3), (), (0, 1, 2))
    b = TypedDiagram(symmetric_star("phi3", 3), (0, 1, 2), ())
    t = compose(b, a)
    assert t.base.is_closed
    assert degree(t) == 6
    assert aut_order(t.base) == 12


def test_closures_of_special_four_star():
    star = symmetric_star("x4", 4, special=True)
    out = closures(star)
    assert len(out) == 1
    rep, mult = out[0]
    assert mult == 3
    assert rep.is_closed
    assert are_isomorphic(rep, figure_eight("x4", special=True))
    assert aut_order(rep) == 8


def test_closures_odd_legs_empty():
    assert closures(symmetric_star("phi3", 3)) == []


def test_closures_of_empty_diagram():
    out = closures(EMPTY)
    assert len(out) == 1
    assert out[0][0] == EMPTY
    assert out[0][1] == 1


def test_closures_of_two_univalent_stars():
    d = disjoint_union(symmetric_star("a1", 1), symmetric_star("a1", 1))
    out = closures(d)
    assert len(out) == 1
    rep, mult = out[0]
    assert mult == 1
    assert aut_order(rep) == 2


def test_closures_of_two_four_stars():
    d = disjoint_union(symmetric_star("phi4", 4), symmetric_star("phi4", 4))
    out = closures(d)
    assert sum(m for _, m in out) == 105
    by_mult = {m: aut_order(rep) for rep, m in out}
    # 9 ways leave the stars separate, 24 tie them with four parallel edges,
    # 72 give one loop on each vertex plus a double edge between them.
    assert by_mult == {9: 128, 24: 48, 72: 16}


def test_closures_of_cyclic_four_star():
    out = closures(cyclic_star("c4", 4))
    by_mult = {m: aut_order(rep) for rep, m in out}
    assert by_mult == {2: 2, 1: 4}


def test_closures_of_bare_edge_is_a_circle():
    with pytest.raises(DiagramError):
        closures(bare_edge())


def test_closures_keep_root_marks():
    star = mark_root(symmetric_star("x4", 4, special=True))
    out = closures(star)
    assert len(out) == 1
    rep, mult = out[0]
    assert mult == 3
    assert rep.vertices[0].root
    assert aut_order(rep) == 8
    assert not are_isomorphic(rep, figure_eight("x4", special=True))
