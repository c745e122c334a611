"""Evaluation of diagrams in a concrete tensor model.

An algebra assigns the coordinate space R^N to every wire, a symmetric
nondegenerate pairing matrix to edge formation, and one dense tensor to each
ordinary colour; the special partner of a colour shares its tensor (that is
the whole point of the partnership).  Cyclic and symmetric tensors consume
all of their slots, so every slot index is a lower index; coupon tensors map
their input slots to their output slots, so output indices are upper.

The amplitude of a typed diagram is the multilinear map obtained by
contracting vertex tensors along edges.  An edge joining two lower slots
inserts the copairing (the inverse matrix), one joining two upper slots
inserts the pairing, and a mixed edge composes directly.  Legs convert in
the same way so that input axes end up lower and output axes upper.  With
rational entries everything is exact; float entries switch the whole
algebra to double precision.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .colours import ColourEntry, ColourTable, ColourTableError
from .diagram import (
    Diagram, DiagramError, TypedDiagram, mark_root, star_for,
)
from .generate import enumerate_closed
from .iso import aut_order, canonical_code
from .poly import Poly
from .prop import closures
from .series import (
    DEFAULT_DEGREE, MultiSeries, VariableKey, groupoid_integral, variable_for,
)

SYMMETRY_TOL = 1e-10
COND_LIMIT = 1e12


class AlgebraError(ValueError):
    pass


# -- exact linear algebra helpers --------------------------------------------

def _invert_exact(mat: np.ndarray) -> np.ndarray:
    n = mat.shape[0]
    work = [[Fraction(mat[i, j]) for j in range(n)] for i in range(n)]
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            raise AlgebraError("pairing matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        p = work[col][col]
        work[col] = [x / p for x in work[col]]
        inv[col] = [x / p for x in inv[col]]
        for r in range(n):
            if r == col or not work[r][col]:
                continue
            f = work[r][col]
            work[r] = [x - f * y for x, y in zip(work[r], work[col])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = inv[i][j]
    return out


def _exact_entry(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _as_tensor(data, shape: tuple[int, ...], exact: bool) -> np.ndarray:
    arr = np.asarray(data, dtype=object)
    if arr.shape != shape:
        if arr.ndim == 1 and arr.size == int(np.prod(shape, dtype=object)):
            arr = arr.reshape(shape)
        else:
            raise AlgebraError(
                f"tensor has shape {arr.shape}, expected {shape}")
    if exact:
        out = np.empty(shape, dtype=object)
        for idx in np.ndindex(*shape):
            out[idx] = Fraction(arr[idx])
        return out
    return arr.astype(float)


def _tensors_equal(a: np.ndarray, b: np.ndarray, exact: bool) -> bool:
    if exact:
        return bool(np.all(a == b))
    return float(np.max(np.abs(a - b), initial=0.0)) <= SYMMETRY_TOL


def _rotations(n: int):
    if n <= 6:
        return [tuple(range(r, n)) + tuple(range(r)) for r in range(1, n)]
    return [tuple(range(1, n)) + (0,)]


def _permutations(n: int):
    if n <= 6:
        return [p for p in itertools.permutations(range(n))
                if p != tuple(range(n))]
    swap = (1, 0) + tuple(range(2, n))
    cycle = tuple(range(1, n)) + (0,)
    return [swap, cycle]


# -- the algebra --------------------------------------------------------------

class AlgebraSpec:
    """Pairing plus one tensor per ordinary colour, exact or floating.

    ``tensors`` maps ordinary colour names to arrays (or flat row-major
    lists) of shape ``(dim,) * valence``; coupon axes run inputs first, then
    outputs, matching slot order.  The mode is inferred: when the pairing
    and all tensor entries are ints or Fractions the algebra computes
    exactly, otherwise in doubles.  Cyclic and symmetric tensors must carry
    the invariance their kind promises; this is checked at construction
    (exhaustively up to valence 6, by generators beyond).
    """

    def __init__(self, dim: int, pairing, table: ColourTable, tensors: dict):
        if dim < 1:
            raise AlgebraError("dim must be positive")
        self.dim = dim
        self.table = table

        flat = list(np.asarray(pairing, dtype=object).flat)
        for t in tensors.values():
            flat.extend(np.asarray(t, dtype=object).flat)
        self.exact = all(_exact_entry(x) for x in flat)

        self.pairing = _as_tensor(pairing, (dim, dim), self.exact)
        if not _tensors_equal(self.pairing, self.pairing.T, self.exact):
            raise AlgebraError("pairing matrix must be symmetric")
        if self.exact:
            self.copairing = _invert_exact(self.pairing)
        else:
            if np.linalg.cond(self.pairing) > COND_LIMIT:
                raise AlgebraError("pairing matrix is ill conditioned")
            self.copairing = np.linalg.inv(self.pairing)
        if self.exact:
            self.eye = np.empty((dim, dim), dtype=object)
            for i in range(dim):
                for j in range(dim):
                    self.eye[i, j] = Fraction(int(i == j))
        else:
            self.eye = np.eye(dim)

        self.coupon_tensors: dict[str, np.ndarray] = {}
        self.cyclic_tensors: dict[str, np.ndarray] = {}
        self.symmetric_tensors: dict[str, np.ndarray] = {}
        self._ordinary_of = {e.bold: e.name for e in table.ordinary()}
        for name, data in tensors.items():
            entry = table[name]
            if entry.special:
                raise AlgebraError(
                    f"tensors attach to ordinary colours, not {name!r}")
            arr = _as_tensor(data, (dim,) * entry.valence, self.exact)
            if entry.kind == "cyclic":
                for perm in _rotations(entry.valence):
                    if not _tensors_equal(arr, arr.transpose(perm), self.exact):
                        raise AlgebraError(
                            f"tensor {name!r} is not rotation invariant")
                self.cyclic_tensors[name] = arr
            elif entry.kind == "symmetric":
                for perm in _permutations(entry.valence):
                    if not _tensors_equal(arr, arr.transpose(perm), self.exact):
                        raise AlgebraError(
                            f"tensor {name!r} is not permutation invariant")
                self.symmetric_tensors[name] = arr
            else:
                self.coupon_tensors[name] = arr

    def tensor_for(self, colour: str) -> np.ndarray:
        """The tensor of a colour; special colours borrow their partner's."""
        try:
            entry = self.table[colour]
        except ColourTableError as exc:
            raise AlgebraError(str(exc)) from None
        name = self._ordinary_of.get(colour, entry.name) if entry.special \
            else entry.name
        pool = {"coupon": self.coupon_tensors, "cyclic": self.cyclic_tensors,
                "symmetric": self.symmetric_tensors}[entry.kind]
        try:
            return pool[name]
        except KeyError:
            raise AlgebraError(f"no tensor loaded for colour {colour!r}") from None

    @property
    def is_orthonormal(self) -> bool:
        return _tensors_equal(self.pairing, self.eye, self.exact)

    def orthonormalized(self) -> "AlgebraSpec":
        """Equivalent algebra in a basis where the pairing is the identity.

        Uses the lower-triangular square root B of the copairing, so the new
        basis vectors are B's columns; lower tensor axes contract with B and
        coupon output axes with its transposed inverse.  The result is a
        floating-point algebra (the factorization leaves the rationals).
        """
        g = self.pairing.astype(float)
        b = np.linalg.cholesky(np.linalg.inv(g))
        b_up = np.linalg.inv(b).T

        def convert(arr, entry):
            arr = arr.astype(float)
            n_up = 0 if entry.kind != "coupon" else entry.arity[1]
            val = entry.valence
            for ax in range(val):
                mat = b_up if ax >= val - n_up else b
                arr = np.moveaxis(np.tensordot(arr, mat, axes=([ax], [0])),
                                  -1, ax)
            return arr

        tensors = {}
        for pool in (self.coupon_tensors, self.cyclic_tensors,
                     self.symmetric_tensors):
            for name, arr in pool.items():
                tensors[name] = convert(arr, self.table[name])
        return AlgebraSpec(self.dim, np.eye(self.dim), self.table, tensors)

    def one(self):
        return Fraction(1) if self.exact else 1.0


# -- amplitude engine ---------------------------------------------------------

def _upper_halves(d: Diagram) -> frozenset[int]:
    return frozenset(h for v in d.vertices if v.kind == "coupon"
                     for h in v.outs)


def _edge_operand(a: AlgebraSpec, up1: bool, up2: bool) -> np.ndarray:
    if up1 and up2:
        return a.pairing
    if up1 or up2:
        return a.eye
    return a.copairing


def _contract(ops: list[tuple[np.ndarray, list]], ext: list, a: AlgebraSpec):
    """Contract doubled labels away, in increasing label order."""
    ops = [(arr, list(labs)) for arr, labs in ops]
    internal = sorted({L for _, labs in ops for L in labs
                       if isinstance(L, int)})
    for lab in internal:
        locs = [(k, i) for k, (_, labs) in enumerate(ops)
                for i, L in enumerate(labs) if L == lab]
        if len(locs) != 2:
            raise AlgebraError(f"label {lab} appears {len(locs)} times")
        (k1, i1), (k2, i2) = locs
        if k1 == k2:
            arr, labs = ops[k1]
            arr = np.asarray(arr.diagonal(axis1=i1, axis2=i2).sum(-1),
                             dtype=arr.dtype)
            ops[k1] = (arr, [L for i, L in enumerate(labs)
                             if i not in (i1, i2)])
        else:
            (x, lx), (y, ly) = ops[k1], ops[k2]
            arr = np.asarray(np.tensordot(x, y, axes=([i1], [i2])),
                             dtype=x.dtype)
            labs = [L for i, L in enumerate(lx) if i != i1] + \
                   [L for i, L in enumerate(ly) if i != i2]
            ops[k1] = (arr, labs)
            del ops[k2]
    result, labels = None, []
    for arr, labs in ops:
        result = arr if result is None else np.asarray(
            np.multiply.outer(result, arr), dtype=arr.dtype)
        labels += labs
    if result is None:
        return a.one() if not ext else None
    if not ext:
        return result.item() if result.ndim == 0 else result
    perm = [labels.index(L) for L in ext]
    return result.transpose(perm)


def amplitude(t: TypedDiagram | Diagram, a: AlgebraSpec, *,
              _edge_override=None):
    """The multilinear map of a typed diagram, as a dense array.

    Axes run through the numbered inputs and then the numbered outputs; a
    closed diagram yields a plain scalar.  Every colour must have a tensor
    in ``a``.  A bare Diagram is accepted when closed.
    """
    if isinstance(t, Diagram):
        if not t.is_closed:
            raise AlgebraError("open diagrams need numbered endpoints")
        t = TypedDiagram(t, (), ())
    d = t.base
    upper = _upper_halves(d)
    role = {h: ("in", k) for k, h in enumerate(t.ins)}
    role.update({h: ("out", k) for k, h in enumerate(t.outs)})

    ops: list[tuple[np.ndarray, list]] = []
    for v in d.vertices:
        ops.append((a.tensor_for(v.colour), list(v.slots)))
    for p in sorted(d.pairs - d.bare_pairs):
        h1, h2 = p
        op = _edge_override(p) if _edge_override else None
        if op is None:
            op = _edge_operand(a, h1 in upper, h2 in upper)
        ops.append((op, [h1, h2]))
    for h in d.legs:
        if h in d.free_halves:
            continue
        want_up = role[h][0] == "out"
        is_up = h in upper
        if want_up == is_up:
            op = a.eye
        elif want_up:
            op = a.copairing
        else:
            op = a.pairing
        ops.append((op, [h, role[h]]))
    for f1, f2 in sorted(d.bare_pairs):
        r1, r2 = role[f1], role[f2]
        n_out = (r1[0] == "out") + (r2[0] == "out")
        op = (a.pairing, a.eye, a.copairing)[n_out]
        ops.append((op, [r1, r2]))

    ext = [("in", k) for k in range(t.src)] + \
          [("out", k) for k in range(t.tgt)]
    return _contract(ops, ext, a)


def leg_polynomial(d: Diagram, a: AlgebraSpec) -> Poly:
    """The polynomial v -> amplitude of ``d`` with every leg fed v.

    Independent of the order the legs are numbered in, since all of them
    receive the same vector.
    """
    legs = tuple(d.legs)
    amp = amplitude(TypedDiagram(d, legs, ()), a)
    if not legs:
        return Poly.constant(a.dim, amp)
    terms: dict[tuple[int, ...], object] = {}
    for idx in itertools.product(range(a.dim), repeat=len(legs)):
        c = amp[idx]
        if not c:
            continue
        e = tuple(idx.count(i) for i in range(a.dim))
        terms[e] = terms.get(e, 0) + c
    return Poly(a.dim, terms)


def interaction_terms(a: AlgebraSpec, table: ColourTable | None = None
                      ) -> tuple[tuple[VariableKey, Poly], ...]:
    """Interaction terms: one (variable, star polynomial / |Aut star|) per
    ordinary colour.  The star's own automorphisms supply the weight, which
    lands on 1/n! for symmetric, 1/n for cyclic and 1 for coupon colours.
    """
    table = a.table if table is None else table
    out = []
    for entry in sorted(table.ordinary(), key=lambda e: e.name):
        star = star_for(entry)
        p = leg_polynomial(star, a) * Fraction(1, aut_order(star))
        out.append((variable_for(table, entry.name), p))
    return tuple(out)


def expectation_value(g: Diagram, a: AlgebraSpec, *,
                      with_potential: bool = False,
                      max_degree: int = DEFAULT_DEGREE) -> MultiSeries:
    """Sum of closed-diagram amplitudes around ``g``, weighted by 1/|Aut|.

    Without the potential the sum runs over the closures of ``g`` alone and
    the series is constant; with it, over all closed diagrams of bounded
    degree containing ``g`` as the marked piece.  An odd number of legs
    leaves nothing to sum in the constant case, so the result is 0 rather
    than an error.
    """
    if with_potential:
        root = g if (g.vertices or g.pairs) else None
        classes = enumerate_closed(a.table, max_degree=max_degree, root=root)
        return groupoid_integral(classes, a.table, max_degree,
                                 weight=lambda rep: amplitude(rep, a))
    marked = mark_root(g)
    total = Fraction(0)
    for rep, _ in closures(marked):
        total += Fraction(amplitude(rep, a)) / canonical_code(rep).aut_order
    return MultiSeries.constant(total, max_degree)


# -- edge colourings ----------------------------------------------------------

@dataclass(frozen=True)
class EdgeColouring:
    """A diagram plus a basis index on each internal edge."""

    base: Diagram
    eta: tuple[tuple[tuple[int, int], int], ...]

    def __post_init__(self):
        eta = tuple(sorted((tuple(sorted(p)), c) for p, c in dict(self.eta).items()))
        object.__setattr__(self, "eta", eta)
        internal = sorted(self.base.pairs - self.base.bare_pairs)
        if [p for p, _ in self.eta] != internal:
            raise DiagramError("a colouring must cover the internal edges exactly")
        if any(c < 0 for _, c in self.eta):
            raise DiagramError("colour indices start at 0")

    def colour_of(self, pair: tuple[int, int]) -> int:
        return dict(self.eta)[tuple(sorted(pair))]


def expand_colourings(d: Diagram, dim: int) -> list[EdgeColouring]:
    """All dim^edges ways of putting a basis index on each internal edge."""
    internal = sorted(d.pairs - d.bare_pairs)
    out = []
    for combo in itertools.product(range(dim), repeat=len(internal)):
        out.append(EdgeColouring(d, tuple(zip(internal, combo))))
    return out


def amplitude_coloured(c: EdgeColouring, a: AlgebraSpec):
    """Amplitude with each coloured edge replaced by the projection onto its
    basis line.  Only meaningful over an orthonormal pairing; summing over
    all colourings then recovers the plain amplitude.
    """
    if not a.is_orthonormal:
        raise AlgebraError("edge colourings need an orthonormalized algebra")
    eta = dict(c.eta)

    def override(pair):
        k = eta[pair]
        proj = np.zeros((a.dim, a.dim), dtype=object if a.exact else float)
        proj[k, k] = a.one()
        return proj

    return amplitude(c.base, a, _edge_override=override)


# -- file format --------------------------------------------------------------

_KIND_NAMES = {"sym": "symmetric", "symmetric": "symmetric",
               "cyc": "cyclic", "cyclic": "cyclic", "coupon": "coupon"}


def _parse_number(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, bool):
        raise AlgebraError("booleans are not numbers")
    return float(x)


def load_algebra(src: str | dict) -> AlgebraSpec:
    """Read an algebra from its JSON document (text or parsed).

    Fields: ``dim``; ``colours`` (name, kind, valence or inputs/outputs,
    bold partner name); ``pairing`` and per-colour ``tensors`` as row-major
    flat arrays whose entries are numbers or exact "p/q" strings; optional
    ``orthonormalize`` flag.  All-string entries select the exact mode.
    """
    data = json.loads(src) if isinstance(src, str) else src
    try:
        dim = int(data["dim"])
        colours = data["colours"]
        pairing = [_parse_number(x) for x in data["pairing"]]
        raw_tensors = data["tensors"]
    except KeyError as exc:
        raise AlgebraError(f"algebra file lacks field {exc}") from None

    entries = []
    for c in colours:
        kind = _KIND_NAMES.get(c.get("kind"))
        if kind is None:
            raise AlgebraError(f"unknown colour kind {c.get('kind')!r}")
        if kind == "coupon":
            arity = (int(c["inputs"]), int(c["outputs"]))
        else:
            arity = int(c["valence"])
        bold = c.get("bold", c["name"].upper())
        entries.append(ColourEntry(bold, kind, arity, special=True))
        entries.append(ColourEntry(c["name"], kind, arity, bold=bold))
    try:
        table = ColourTable(entries)
    except ColourTableError as exc:
        raise AlgebraError(str(exc)) from None

    tensors = {name: [_parse_number(x) for x in flat]
               for name, flat in raw_tensors.items()}
    spec = AlgebraSpec(dim, np.asarray(pairing, dtype=object).reshape(dim, dim),
                       table, tensors)
    if data.get("orthonormalize"):
        spec = spec.orthonormalized()
    return spec
