"""Wiring operations on typed diagrams.

Typed diagrams form a PROP-like structure: ``compose(g, f)`` plugs output
``k`` of ``f`` into input ``k`` of ``g``, ``tensor`` places diagrams side by
side, identities are rows of bare edges, and the braiding crosses two blocks
of wires.  Composition welds edges end to end, so chains of bare edges
collapse to a single edge.  A chain that closes onto itself would leave a
circle with no vertex or endpoint on it, which the half-edge representation
cannot hold; that raises :class:`DiagramError`.

``closures(d)`` composes a diagram against every perfect pairing of its legs
and groups the resulting closed diagrams into isomorphism classes.
"""
from __future__ import annotations

from .diagram import (
    Diagram, DiagramError, TypedDiagram, next_id, relabel_typed,
)
from .iso import canonical_code


def identity(n: int) -> TypedDiagram:
    pairs = frozenset((2 * k, 2 * k + 1) for k in range(n))
    d = Diagram((), pairs)
    return TypedDiagram(d, tuple(2 * k for k in range(n)),
                        tuple(2 * k + 1 for k in range(n)))


def braiding(m: int, n: int) -> TypedDiagram:
    """The wire crossing: input i exits at output n+i for i < m, and input
    m+j exits at output j for j < n."""
    pairs = frozenset((2 * k, 2 * k + 1) for k in range(m + n))
    d = Diagram((), pairs)
    ins = tuple(2 * k for k in range(m + n))
    outs = [0] * (m + n)
    for i in range(m):
        outs[n + i] = 2 * i + 1
    for j in range(n):
        outs[j] = 2 * (m + j) + 1
    return TypedDiagram(d, ins, tuple(outs))


def tensor(a: TypedDiagram, b: TypedDiagram) -> TypedDiagram:
    """Disjoint union; ``b``'s half-edge ids are shifted past ``a``'s and its
    endpoint numbers follow ``a``'s."""
    off = next_id(a.base)
    bb = relabel_typed(b, {h: h + off for h in b.base.half_edges})
    base = Diagram(a.base.vertices + bb.base.vertices,
                   a.base.pairs | bb.base.pairs,
                   a.base.root_pairs | bb.base.root_pairs)
    return TypedDiagram(base, a.ins + bb.ins, a.outs + bb.outs)


def compose(g: TypedDiagram, f: TypedDiagram) -> TypedDiagram:
    """Glue output k of ``f`` onto input k of ``g``.  The result takes
    ``f``'s inputs to ``g``'s outputs."""
    if g.src != f.tgt:
        raise DiagramError(
            f"arity mismatch: cannot plug {f.tgt} outputs into {g.src} inputs")
    off = next_id(f.base)
    gg = relabel_typed(g, {h: h + off for h in g.base.half_edges})

    anchored = f.base._slot_owner.keys() | gg.base._slot_owner.keys()
    mate = dict(f.base.partner)
    mate.update(gg.base.partner)
    glue: dict[int, int] = {}
    for x, y in zip(f.outs, gg.ins):
        glue[x] = y
        glue[y] = x

    # Each glued leg chain alternates matching links and glue links.  Its two
    # terminals are either loose slot halves (the welded edge attaches there)
    # or unglued free halves (legs of the composite).  A chain with no
    # terminal is a circle.
    visited: set[int] = set()

    def walk(start: int) -> int | None:
        h, use_mate = start, True
        while True:
            nxt = (mate if use_mate else glue).get(h)
            if nxt is None:
                return h
            if nxt == start:
                return None
            visited.add(h)
            visited.add(nxt)
            h, use_mate = nxt, not use_mate

    new_pairs: set[tuple[int, int]] = set()
    collapse: dict[int, int] = {}
    for seed in list(glue):
        if seed in visited:
            continue
        other = glue[seed]
        visited.add(seed)
        visited.add(other)
        left = walk(seed)
        if left is None:
            raise DiagramError("composition closed a circle carrying no vertex")
        right = walk(other)
        free_ends = [t for t in (left, right) if t not in anchored]
        if len(free_ends) == 0:
            new_pairs.add((left, right))
        elif len(free_ends) == 2:
            new_pairs.add((left, right))
        else:
            slot_end = left if right in free_ends else right
            collapse[free_ends[0]] = slot_end

    untouched = {p for p in f.base.pairs | gg.base.pairs
                 if p[0] not in visited and p[1] not in visited}
    base = Diagram(f.base.vertices + gg.base.vertices,
                   frozenset(untouched | new_pairs),
                   f.base.root_pairs | gg.base.root_pairs)
    return TypedDiagram(base,
                        tuple(collapse.get(h, h) for h in f.ins),
                        tuple(collapse.get(h, h) for h in gg.outs))


def edge_pairings(k: int) -> list[TypedDiagram]:
    """All perfect pairings of ``k`` numbered outputs, as rows of bare edges.

    Empty for odd ``k``, (k-1)!! diagrams otherwise, each rigid.
    """
    if k % 2:
        return []
    out: list[TypedDiagram] = []
    for pairing in _pairings(tuple(range(k))):
        pairs = frozenset((2 * i, 2 * i + 1) for i in range(k // 2))
        outs = [0] * k
        for i, (a, b) in enumerate(pairing):
            outs[a] = 2 * i
            outs[b] = 2 * i + 1
        out.append(TypedDiagram(Diagram((), pairs), (), tuple(outs)))
    return out


def _pairings(items: tuple[int, ...]):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for i, second in enumerate(rest):
        sub = rest[:i] + rest[i + 1:]
        for more in _pairings(sub):
            yield ((first, second),) + more


def closures(d: Diagram) -> list[tuple[Diagram, int]]:
    """Isomorphism classes of the closed diagrams produced by pairing off the
    legs of ``d``, with multiplicities.  Empty when the leg count is odd."""
    legs = d.legs
    if len(legs) % 2:
        return []
    typed = TypedDiagram(d, tuple(legs), ())
    found: dict[bytes, list] = {}
    for p in edge_pairings(len(legs)):
        closed = compose(typed, p).base
        key = canonical_code(closed).code
        if key in found:
            found[key][1] += 1
        else:
            found[key] = [closed, 1]
    return [(rep, mult) for _, (rep, mult) in sorted(found.items())]
