import pytest

from fdcalc.diagram import (
    Diagram, DiagramError, TypedDiagram, Vertex, bare_edge, build_diagram,
    connected_components, degree, disjoint_union, forget_numbering, relabel,
    symmetric_star,
)

import util


def test_empty_diagram():
    d = Diagram()
    assert d.legs == ()
    assert d.is_closed
    assert degree(d) == 0
    assert connected_components(d) == []


def test_figure_eight_structure():
    d = util.figure_eight()
    assert degree(d) == 4
    assert d.is_closed
    assert len(connected_components(d)) == 1


def test_special_vertices_are_weightless():
    assert degree(util.figure_eight(special=True)) == 0
    assert degree(util.theta()) == 6


def test_bare_edge_legs():
    d = bare_edge()
    assert set(d.legs) == {0, 1}
    assert d.free_halves == {0, 1}
    assert not d.is_closed
    assert degree(d) == 0


def test_star_legs():
    d = symmetric_star("phi4", 4)
    assert d.legs == (0, 1, 2, 3)


def test_slot_normal_forms():
    a = Vertex("symmetric", "x", (3, 1, 2))
    assert a.slots == (1, 2, 3)
    b = Vertex("cyclic", "y", (2, 3, 1))
    c = Vertex("cyclic", "y", (1, 2, 3))
    assert b == c
    d = Vertex("cyclic", "y", (2, 1, 3))
    assert d != c  # rotation class differs, not a relabelling artefact
    k = Vertex("coupon", "t", (5, 4, 9), n_in=2)
    assert k.ins == (5, 4) and k.outs == (9,)


def test_vertex_validation():
    with pytest.raises(DiagramError):
        Vertex("symmetric", "x", (1, 1))
    with pytest.raises(DiagramError):
        Vertex("coupon", "x", (1, 2))
    with pytest.raises(DiagramError):
        Vertex("cyclic", "x", (1, 2), n_in=1)
    with pytest.raises(DiagramError):
        Vertex("hexagonal", "x", (1, 2))


def test_matching_validation():
    v = Vertex("symmetric", "x", (0, 1, 2))
    with pytest.raises(DiagramError):
        Diagram((v,), frozenset({(0, 0)}))
    with pytest.raises(DiagramError):
        Diagram((v,), frozenset({(0, 1), (1, 2)}))
    with pytest.raises(DiagramError):
        # slot half matched with a free half
        Diagram((v,), frozenset({(2, 7)}))
    with pytest.raises(DiagramError):
        Diagram((v, Vertex("symmetric", "x", (2, 3, 4))), frozenset())


def test_build_diagram_checks_table():
    t = util.quartic_table()
    d = build_diagram([("symmetric", "phi4", (0, 1, 2, 3))], {0: 1, 1: 0, 2: 3, 3: 2}, t)
    assert d == util.figure_eight()
    with pytest.raises(Exception):
        build_diagram([("symmetric", "phi5", (0, 1, 2, 3, 4))], {}, t)
    with pytest.raises(DiagramError):
        build_diagram([("symmetric", "phi4", (0, 1, 2))], {}, t)
    with pytest.raises(DiagramError):
        build_diagram([("symmetric", "phi4", (0, 1, 2, 3))], {0: 1}, t)


def test_typed_validation():
    d = symmetric_star("phi4", 4)
    t = TypedDiagram(d, (0, 1), (2, 3))
    assert t.src == 2 and t.tgt == 2
    with pytest.raises(DiagramError):
        TypedDiagram(d, (0, 1), (2,))
    with pytest.raises(DiagramError):
        TypedDiagram(d, (0, 0), (1, 2, 3))
    assert forget_numbering(t) == d


def test_components_and_degree_additivity():
    d = disjoint_union(util.figure_eight(), util.theta())
    comps = connected_components(d)
    assert len(comps) == 2
    assert sorted(degree(c) for c in comps) == [4, 6]
    assert degree(d) == 10


def test_components_of_bare_edges():
    d = disjoint_union(bare_edge(), util.figure_eight())
    comps = connected_components(d)
    assert len(comps) == 2
    assert any(c.bare_pairs for c in comps)


def test_relabel_roundtrip():
    import random
    rng = random.Random(7)
    for _ in range(50):
        d = util.random_diagram(rng)
        f = util.random_relabelling(d, rng)
        back = {v: k for k, v in f.items()}
        assert relabel(relabel(d, f), back) == d


def test_legs_partition():
    import random
    rng = random.Random(11)
    for _ in range(50):
        d = util.random_diagram(rng)
        matched = {h for p in d.pairs for h in p if h not in d.free_halves}
        assert set(d.legs) | matched == set(d.half_edges)
        assert not (set(d.legs) - set(d.free_halves)) & matched
