"""Enumeration of closed diagrams over a colour table, up to isomorphism.

A closed diagram of bounded degree decomposes into a multiset of ordinary
stars (one per vertex) plus a perfect matching of their legs.  Special
colours are excluded from the star supply: they carry no degree, so admitting
them would make every degree class infinite.  A fixed open piece may be
passed as ``root``; it is marked as distinguished, its legs join the
matching, and its own vertices may be special.

Matchings are not enumerated one by one.  The loose legs of a symmetric
vertex are interchangeable, so only the induced leg multigraph matters: its
nodes are symmetric-vertex leg buckets and individual cyclic or coupon
slots, and a matching is a loop count per node plus an edge multiplicity per
node pair.  One matching per multigraph is instantiated and canonical codes
remove the isomorphs that remain (vertex swaps, cyclic rotations).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .colours import ColourEntry, ColourTable
from .diagram import (
    Diagram, DiagramError, EMPTY, connected_components, degree,
    disjoint_union, mark_root, star_for,
)
from .iso import canonical_code

MAX_DEGREE = 16


@dataclass(frozen=True)
class DiagramClass:
    """One isomorphism class: a representative, its |Aut| and its degree."""

    rep: Diagram
    aut: int
    degree: int
    key: bytes

    def __repr__(self):
        return f"DiagramClass(degree={self.degree}, aut={self.aut})"


def enumerate_closed(table: ColourTable, *, max_degree: int,
                     root: Diagram | None = None,
                     connected: bool = False,
                     reduced: bool = False) -> list[DiagramClass]:
    """All closed diagrams of degree at most ``max_degree``, one per class.

    ``connected`` keeps single-component diagrams only (this drops the empty
    diagram).  ``reduced`` keeps diagrams in which every component touches
    the root marking; with an empty root that leaves the empty diagram alone.
    Classes come back sorted by degree, then by canonical code.
    """
    if max_degree < 0:
        raise DiagramError("max_degree must be nonnegative")
    if max_degree > MAX_DEGREE:
        raise DiagramError(
            f"max_degree {max_degree} exceeds the supported bound {MAX_DEGREE}")
    piece = EMPTY if root is None else mark_root(root)
    budget = max_degree - degree(piece)
    found: dict[bytes, DiagramClass] = {}
    for stars in _star_multisets(table.ordinary(), budget):
        base = piece
        for entry, count in stars:
            for _ in range(count):
                base = disjoint_union(base, star_for(entry))
        if len(base.legs) % 2:
            continue
        nodes = _leg_nodes(base)
        caps = tuple(len(ns) for ns in nodes)
        for graph in _multigraphs(caps):
            pairs = _instantiate(nodes, graph)
            d = Diagram(base.vertices, base.pairs | pairs, base.root_pairs)
            if connected and len(connected_components(d)) != 1:
                continue
            if reduced and not _is_reduced(d):
                continue
            code = canonical_code(d)
            if code.code not in found:
                found[code.code] = DiagramClass(d, code.aut_order, degree(d),
                                                code.code)
    return sorted(found.values(), key=lambda c: (c.degree, c.key))


def _is_reduced(d: Diagram) -> bool:
    return all(any(v.root for v in comp.vertices)
               for comp in connected_components(d))


def symmetric_power_aut(d: Diagram) -> int:
    """|Aut| predicted from the connected pieces of ``d``.

    A disjoint union is a multiset of connected diagrams, so its
    automorphisms are the automorphisms of the pieces extended by the
    permutations of equal pieces: |Aut| = prod over distinct components c of
    multiplicity! * |Aut c|^multiplicity.
    """
    mult: dict[bytes, tuple[int, int]] = {}
    for comp in connected_components(d):
        code = canonical_code(comp)
        n, aut = mult.get(code.code, (0, code.aut_order))
        mult[code.code] = (n + 1, aut)
    out = 1
    for n, aut in mult.values():
        out *= factorial(n) * aut ** n
    return out


def symmetric_power_check(classes: list[DiagramClass]) -> bool:
    """Does every class's |Aut| factor through its connected components?"""
    return all(c.aut == symmetric_power_aut(c.rep) for c in classes)


def _star_multisets(entries: tuple[ColourEntry, ...], budget: int):
    """Multisets of ordinary colours with total valence within budget, as
    ((entry, count), ...) in table order."""
    entries = tuple(sorted(entries, key=lambda e: e.name))

    def rec(i: int, left: int):
        if i == len(entries):
            yield ()
            return
        e = entries[i]
        for count in range(left // e.valence + 1):
            head = ((e, count),) if count else ()
            for rest in rec(i + 1, left - count * e.valence):
                yield head + rest

    if budget < 0:
        return iter(())
    return rec(0, budget)


def _leg_nodes(base: Diagram) -> list[list[int]]:
    """Matchable leg groups: one bucket per symmetric vertex, one singleton
    per cyclic or coupon slot."""
    if base.free_halves:
        raise DiagramError("enumeration pieces may not contain bare edges")
    matched = base.partner
    nodes: list[list[int]] = []
    for v in base.vertices:
        loose = [h for h in v.slots if h not in matched]
        if not loose:
            continue
        if v.kind == "symmetric":
            nodes.append(loose)
        else:
            nodes.extend([h] for h in loose)
    return nodes


def _multigraphs(caps: tuple[int, ...]):
    """Loop counts and pairwise multiplicities filling every capacity.

    Yields tuples ``(loops_i, (m_{i,i+1}, ..., m_{i,n-1}))`` per node.
    """
    n = len(caps)

    def rec(i: int, rem: tuple[int, ...]):
        if i == n:
            yield ()
            return
        r = rem[i]
        for loops in range(r // 2 + 1):
            for combo in _distribute(r - 2 * loops, rem[i + 1:]):
                nxt = rem[:i + 1] + tuple(
                    rem[i + 1 + k] - combo[k] for k in range(n - i - 1))
                for tail in rec(i + 1, nxt):
                    yield ((loops, combo),) + tail

    return rec(0, caps)


def _distribute(total: int, limits: tuple[int, ...]):
    if not limits:
        if total == 0:
            yield ()
        return
    for m in range(min(total, limits[0]) + 1):
        for rest in _distribute(total - m, limits[1:]):
            yield (m,) + rest


def _instantiate(nodes: list[list[int]], graph) -> set[tuple[int, int]]:
    stacks = [list(ns) for ns in nodes]
    pairs: set[tuple[int, int]] = set()
    for i, (loops, combo) in enumerate(graph):
        for _ in range(loops):
            pairs.add((stacks[i].pop(0), stacks[i].pop(0)))
        for dj, m in enumerate(combo):
            j = i + 1 + dj
            for _ in range(m):
                pairs.add((stacks[i].pop(0), stacks[j].pop(0)))
    return pairs
