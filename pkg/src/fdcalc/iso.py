"""Canonical codes, isomorphism tests and automorphism counts.

Two diagrams are isomorphic when a bijection of half-edges and vertices
preserves kinds, colours, the matching, leg status and the slot structure:
coupon slots pointwise, cyclic slots up to rotation, symmetric slots up to
arbitrary permutation.  Untyped diagrams may permute legs; typed diagrams
must fix every numbered endpoint.  Rooted diagrams must map the marked
sub-diagram onto itself.

``canonical_code`` computes a complete invariant by searching over the
admissible labellings of a diagram: vertices are ordered class by class
(classes come from an iterated neighbourhood refinement and are themselves
isomorphism-invariant), each placed vertex emits an encoding block, and the
lexicographically least full encoding is the code.  The search counts every
labelling that attains the least encoding; since two labellings produce
identical encodings exactly when they differ by an automorphism, that count
*is* the automorphism order.  Slot arrangements that cannot influence the
remainder of the encoding (legs of untyped diagrams, both halves of a loop
closed within its own block) are not branched over but folded into a
multiplicity, which keeps the tree small on highly symmetric diagrams.

``aut_order_bruteforce`` is an independent oracle: it enumerates candidate
vertex bijections extended by explicit slot bijections and counts the maps
commuting with the matching.  It shares no logic with the canonical search.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .diagram import Diagram, TypedDiagram


@dataclass(frozen=True)
class CanonicalCode:
    code: bytes
    aut_order: int

    @property
    def hex(self) -> str:
        return self.code.hex()


def _cmp(a: list[str], b: list[str]) -> int:
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    return (len(a) > len(b)) - (len(a) < len(b))


def _leg_tokens(t: TypedDiagram) -> dict[int, str]:
    tok = {h: f"i{k:03d}" for k, h in enumerate(t.ins, 1)}
    tok.update({h: f"o{k:03d}" for k, h in enumerate(t.outs, 1)})
    return tok


def _slot_orders(v) -> tuple[tuple[int, ...], ...]:
    if v.kind == "coupon":
        return (v.slots,)
    if v.kind == "cyclic":
        n = v.valence
        return tuple(v.slots[i:] + v.slots[:i] for i in range(n)) or (v.slots,)
    return tuple(itertools.permutations(v.slots))


def _vertex_classes(d: Diagram, leg_tok: dict[int, str]) -> tuple[list[list[int]], list[int]]:
    """Isomorphism-invariant ordered partition of the vertex indices."""
    owner = d.vertex_of
    partner = d.partner
    rp = d.root_pairs

    def rflag(h: int, p: int) -> str:
        return "R" if (min(h, p), max(h, p)) in rp else ""

    keys: list[str] = []
    for i, v in enumerate(d.vertices):
        prof = []
        for h in v.slots:
            p = partner.get(h)
            if p is None:
                prof.append("L" + leg_tok.get(h, ""))
            elif owner(p) == i:
                prof.append("S" + rflag(h, p))
            else:
                w = d.vertices[owner(p)]
                prof.append("E" + rflag(h, p) + w.kind + "/" + w.colour)
        if v.kind == "coupon":
            shaped = tuple(prof)
        elif v.kind == "cyclic":
            shaped = min((tuple(prof[i:] + prof[:i]) for i in range(len(prof))), default=())
        else:
            shaped = tuple(sorted(prof))
        keys.append("|".join((v.kind, str(v.n_in), v.colour, str(int(v.special)),
                              str(int(v.root)), str(v.valence), repr(shaped))))

    for _ in range(3):
        fresh = []
        for i, v in enumerate(d.vertices):
            nb = sorted(("S" if owner(p) == i else "E") + rflag(h, p) + "#" + keys[owner(p)]
                        for h in v.slots
                        for p in (partner.get(h),)
                        if p is not None and owner(p) is not None)
            fresh.append(keys[i] + "&" + repr(nb))
        keys = fresh

    groups: dict[str, list[int]] = {}
    for i, k in enumerate(keys):
        groups.setdefault(k, []).append(i)
    class_members = [groups[k] for k in sorted(groups)]
    class_of_position = [ci for ci, members in enumerate(class_members) for _ in members]
    return class_members, class_of_position


def _search(d: Diagram, typed: TypedDiagram | None) -> tuple[list[str], int]:
    leg_tok = _leg_tokens(typed) if typed is not None else {}
    partner = d.partner
    rp = d.root_pairs
    verts = d.vertices
    nvert = len(verts)
    class_members, class_of_position = _vertex_classes(d, leg_tok)

    if typed is not None:
        header = f"T|{typed.src}|{typed.tgt}"
        wires = sorted("+".join(sorted((leg_tok[a], leg_tok[b]))) for a, b in d.bare_pairs)
        tail = "W|" + ";".join(wires)
    else:
        header = "D"
        tail = f"B|{len(d.bare_pairs)}"

    def rflag(h: int, p: int) -> str:
        return "R" if (min(h, p), max(h, p)) in rp else ""

    def make_block(v, order, labels, base_label):
        toks: list[str] = []
        assign: dict[int, int] = {}
        members = set(order)
        open_key: list[int] = []
        for j, h in enumerate(order):
            assign[h] = base_label + j
            p = partner.get(h)
            if p is None:
                toks.append("L" + leg_tok.get(h, ""))
            elif p in assign:
                toks.append(f"C{assign[p]:04d}" + rflag(h, p))
            elif p in labels:
                toks.append(f"C{labels[p]:04d}" + rflag(h, p))
            else:
                toks.append("O")
                if p not in members:
                    open_key.append(h)
        block = "|".join(("V", v.kind, str(v.n_in), v.colour, str(int(v.special)),
                          str(int(v.root)), ",".join(toks)))
        return block, tuple(open_key), assign

    best: list[str] | None = None
    best_count = 0
    placed = [False] * nvert
    labels: dict[int, int] = {}

    def rec(pos: int, next_label: int, enc: list[str], mult: int):
        nonlocal best, best_count
        if best is not None and _cmp(enc, best[: len(enc)]) > 0:
            return
        if pos == nvert:
            full = enc + [tail]
            if best is None:
                best, best_count = full, mult
                return
            c = _cmp(full, best)
            if c < 0:
                best, best_count = full, mult
            elif c == 0:
                best_count += mult
            return
        options: dict[str, dict[tuple, list]] = {}
        for vidx in class_members[class_of_position[pos]]:
            if placed[vidx]:
                continue
            v = verts[vidx]
            for order in _slot_orders(v):
                block, okey, assign = make_block(v, order, labels, next_label)
                grp = options.setdefault(block, {})
                entry = grp.get((vidx, okey))
                if entry is None:
                    grp[(vidx, okey)] = [1, assign]
                else:
                    entry[0] += 1
        least = min(options)
        for (vidx, _okey), (m, assign) in sorted(options[least].items()):
            placed[vidx] = True
            labels.update(assign)
            rec(pos + 1, next_label + len(assign), enc + [least], mult * m)
            for h in assign:
                del labels[h]
            placed[vidx] = False

    rec(0, 0, [header], 1)
    assert best is not None
    return best, best_count


@lru_cache(maxsize=None)
def canonical_code(d: Diagram | TypedDiagram) -> CanonicalCode:
    """Complete isomorphism invariant together with the automorphism order."""
    typed = d if isinstance(d, TypedDiagram) else None
    base = d.base if typed is not None else d
    sections, count = _search(base, typed)
    if typed is None:
        b = len(base.bare_pairs)
        count *= math.factorial(b) * 2 ** b
    return CanonicalCode(";".join(sections).encode(), count)


def aut_order(d: Diagram | TypedDiagram) -> int:
    return canonical_code(d).aut_order


def are_isomorphic(a: Diagram | TypedDiagram, b: Diagram | TypedDiagram) -> bool:
    return canonical_code(a).code == canonical_code(b).code


def aut_order_bruteforce(d: Diagram | TypedDiagram, bound: int = 16) -> int:
    """Count automorphisms by exhausting vertex and slot bijections.

    Guarded by ``bound`` on the number of half-edges; intended as the
    independent cross-check for :func:`canonical_code`.
    """
    typed = d if isinstance(d, TypedDiagram) else None
    base = d.base if typed is not None else d
    if len(base.half_edges) > bound:
        raise ValueError(f"diagram exceeds the brute-force bound of {bound} half-edges")
    verts = base.vertices
    nvert = len(verts)
    partner = base.partner
    rp = base.root_pairs

    def sig(v):
        return (v.kind, v.n_in, v.colour, v.special, v.root, v.valence)

    cand = [[j for j in range(nvert) if sig(verts[j]) == sig(verts[i])] for i in range(nvert)]
    used = [False] * nvert
    phi: dict[int, int] = {}
    count = 0

    def slot_maps(v, w):
        if v.kind == "coupon":
            yield tuple(zip(v.slots, w.slots))
        elif v.kind == "cyclic":
            for r in range(v.valence):
                yield tuple(zip(v.slots, w.slots[r:] + w.slots[:r]))
            if v.valence == 0:
                yield ()
        else:
            for pm in itertools.permutations(w.slots):
                yield tuple(zip(v.slots, pm))

    def consistent(sm) -> bool:
        tm = dict(sm)
        for h, k in sm:
            p = partner.get(h)
            q = partner.get(k)
            if (p is None) != (q is None):
                return False
            if p is None:
                if typed is not None and k != h:
                    return False
                continue
            if ((min(h, p), max(h, p)) in rp) != ((min(k, q), max(k, q)) in rp):
                return False
            img = phi.get(p, tm.get(p))
            if img is not None and img != q:
                return False
        return True

    def rec(i: int):
        nonlocal count
        if i == nvert:
            count += 1
            return
        v = verts[i]
        for j in cand[i]:
            if used[j]:
                continue
            for sm in slot_maps(v, verts[j]):
                if consistent(sm):
                    used[j] = True
                    phi.update(sm)
                    rec(i + 1)
                    for h, _ in sm:
                        del phi[h]
                    used[j] = False

    rec(0)
    if typed is None:
        b = len(base.bare_pairs)
        count *= math.factorial(b) * 2 ** b
    return count
