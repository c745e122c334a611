"""Gaussian averages as an independent road to the diagram sums.

A centred Gaussian weight on R^N is fixed by a symmetric positive definite
matrix.  Moments of polynomials against it can be computed three ways that
share no code: summing over pairings (exact, the `wick_moment` tensors and
the memoized recursion behind `poly_average`), tensor-product Gauss-Hermite
quadrature after whitening, and the groupoid sums of the diagram modules.
`frt_check` and `taylor_stars` hold the roads against each other.

Rational inputs stay rational through every pairing sum; quadrature is
always floating point.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, pi, prod, sqrt

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .algebra import (AlgebraSpec, amplitude, expectation_value,
                      leg_polynomial, interaction_terms)
from .colours import standard_table
from .diagram import Diagram, Vertex
from .iso import canonical_code
from .poly import Poly
from .series import DEFAULT_DEGREE, MultiSeries, Monomial

WICK_LIMIT = 12
QUAD_DIM_LIMIT = 4
POTENTIAL_ORDER_LIMIT = 12
TAYLOR_DEGREE_LIMIT = 10
REL_TOL = 1e-9
ABS_TOL = 1e-12


class GaussianError(ValueError):
    pass


def _exact_entry(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _det_exact(rows: list[list[Fraction]]) -> Fraction:
    """Determinant by fraction-free-enough elimination; rows are consumed."""
    n = len(rows)
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if rows[r][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = -det
        det *= rows[c][c]
        inv = Fraction(1) / rows[c][c]
        for r in range(c + 1, n):
            f = rows[r][c] * inv
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return det


class GaussianSpec:
    """The weight exp(-q(v)/2) dv on R^dim, normalized to total mass one.

    ``pairing`` is the matrix of the quadratic form q.  It must be symmetric
    and positive definite, which is checked through the leading principal
    minors (exactly so when the entries are rational).  Moments are
    polynomials in the inverse matrix, kept exact in rational mode.
    """

    def __init__(self, dim: int, pairing):
        mat = [list(row) for row in pairing]
        if len(mat) != dim or any(len(row) != dim for row in mat):
            raise GaussianError("pairing must be a dim x dim matrix")
        self.dim = dim
        self.exact = all(_exact_entry(x) for row in mat for x in row)
        if self.exact:
            mat = [[Fraction(x) for x in row] for row in mat]
        else:
            mat = [[float(x) for x in row] for row in mat]
        for i in range(dim):
            for j in range(i):
                if mat[i][j] != mat[j][i]:
                    raise GaussianError("pairing must be symmetric")
        for k in range(1, dim + 1):
            lead = [row[:k] for row in mat[:k]]
            minor = _det_exact(lead) if self.exact else np.linalg.det(
                np.array(lead, dtype=float))
            if minor <= 0:
                raise GaussianError("pairing must be positive definite")
        if self.exact:
            self.pairing = np.empty((dim, dim), dtype=object)
            for i in range(dim):
                for j in range(dim):
                    self.pairing[i, j] = mat[i][j]
            self.covariance = _invert_spd_exact(mat)
        else:
            self.pairing = np.array(mat, dtype=float)
            self.covariance = np.linalg.inv(self.pairing)
        self._moments: dict[tuple[int, ...], object] = {(): self.one()}

    def one(self):
        return Fraction(1) if self.exact else 1.0

    def zero(self):
        return Fraction(0) if self.exact else 0.0

    def moment(self, idx: tuple[int, ...]):
        """⟨v_{i_1}···v_{i_k}⟩ for a multiset of coordinate indices."""
        idx = tuple(sorted(idx))
        if any(not 0 <= i < self.dim for i in idx):
            raise GaussianError("coordinate index out of range")
        return self._moment(idx)

    def _moment(self, idx: tuple[int, ...]):
        known = self._moments.get(idx)
        if known is not None:
            return known
        if len(idx) % 2:
            return self.zero()
        first, rest = idx[0], idx[1:]
        total = self.zero()
        for j in range(len(rest)):
            total += (self.covariance[first, rest[j]]
                      * self._moment(rest[:j] + rest[j + 1:]))
        self._moments[idx] = total
        return total


def _invert_spd_exact(mat: list[list[Fraction]]) -> np.ndarray:
    n = len(mat)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j))
                                          for j in range(n)]
            for i, row in enumerate(mat)]
    for c in range(n):
        pivot = next(r for r in range(c, n) if work[r][c])
        work[c], work[pivot] = work[pivot], work[c]
        inv = Fraction(1) / work[c][c]
        work[c] = [x * inv for x in work[c]]
        for r in range(n):
            if r != c and work[r][c]:
                f = work[r][c]
                work[r] = [x - f * y for x, y in zip(work[r], work[c])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = work[i][n + j]
    return out


# -- moment tensors ------------------------------------------------------------

def wick_moment(k: int, g: GaussianSpec) -> np.ndarray:
    """The dense order-k moment tensor; the zero tensor for odd k.

    Entry (i_1..i_k) is the sum over the (k-1)!! pairings of the product of
    covariance entries, built by a recursion that always pairs the first
    index, so the result is independent of any enumeration order.
    """
    if not 0 <= k <= WICK_LIMIT:
        raise GaussianError(f"moment order {k} out of range 0..{WICK_LIMIT}")
    shape = (g.dim,) * k
    dtype = object if g.exact else float
    if k % 2:
        return np.full(shape, g.zero(), dtype=dtype)
    level = np.full((), g.one(), dtype=dtype)
    for m in range(2, k + 1, 2):
        acc = np.full((g.dim,) * m, g.zero(), dtype=dtype)
        for j in range(1, m):
            acc = acc + np.moveaxis(
                np.multiply.outer(g.covariance, level), 1, j)
        level = acc
    return level


def poly_average(p: Poly, g: GaussianSpec):
    """⟨p⟩ against the Gaussian weight, term by term through pairings."""
    if p.dim != g.dim:
        raise GaussianError("polynomial and weight live on different spaces")
    total = g.zero()
    for e, c in p.terms.items():
        idx = tuple(i for i, k in enumerate(e) for _ in range(k))
        total += c * g.moment(idx)
    return total


def quadrature_average(p: Poly, g: GaussianSpec) -> float:
    """⟨p⟩ by tensor-product Gauss-Hermite quadrature.

    The quadratic form is whitened through the lower-triangular
    positive-diagonal factorization of its inverse, so the rule is exact for
    polynomials within the degree bound of the chosen order.
    """
    if g.dim > QUAD_DIM_LIMIT:
        raise GaussianError(f"quadrature limited to {QUAD_DIM_LIMIT} axes")
    order = (p.degree() + 1 + 1) // 2 + 2
    nodes, weights = hermgauss(order)
    ginv = np.linalg.inv(np.asarray(g.pairing, dtype=float))
    lower = np.linalg.cholesky(ginv)
    total = 0.0
    for combo in itertools.product(range(order), repeat=g.dim):
        u = np.array([nodes[i] for i in combo])
        v = sqrt(2.0) * (lower @ u)
        total += prod(weights[i] for i in combo) * float(p.evaluate(v))
    return total / pi ** (g.dim / 2)


# -- formal averages against a potential ---------------------------------------

def _potential_expansion(f: Poly, a: AlgebraSpec, keep) -> dict[Monomial, Fraction]:
    """Coefficients of ⟨f·e^S⟩ over the exponent vectors passing ``keep``."""
    gauss = GaussianSpec(a.dim, a.pairing.tolist())
    terms = interaction_terms(a)
    coeffs: dict[Monomial, Fraction] = {}

    def descend(i: int, expvec: tuple[int, ...]):
        if not keep(expvec + (0,) * (len(terms) - i)):
            return
        if i == len(terms):
            poly = f
            denom = 1
            for (key, part), e in zip(terms, expvec):
                poly = poly * part ** e
                denom *= factorial(e)
            val = poly_average(poly, gauss)
            if val:
                mono = tuple(sorted((key, e) for (key, _), e
                                    in zip(terms, expvec) if e))
                coeffs[mono] = Fraction(val) / denom
            return
        e = 0
        while keep(expvec + (e,) + (0,) * (len(terms) - i - 1)):
            descend(i + 1, expvec + (e,))
            e += 1

    descend(0, ())
    return coeffs


def average_with_potential(f: Poly, a: AlgebraSpec,
                           max_order: int = POTENTIAL_ORDER_LIMIT) -> MultiSeries:
    """⟨f·e^S⟩ as a series in the couplings, to total order ``max_order``.

    S is the interaction sum of ``a``'s colour table, one coupling variable
    per ordinary colour; the coefficient of a coupling monomial of total
    degree k comes from ⟨f·S^k⟩/k! and is a single finite Gaussian moment.
    Parity makes every odd combination vanish rather than fail.
    """
    if not 0 <= max_order <= POTENTIAL_ORDER_LIMIT:
        raise GaussianError(
            f"expansion order capped at {POTENTIAL_ORDER_LIMIT}")
    coeffs = _potential_expansion(f, a, lambda ev: sum(ev) <= max_order)
    bound = max_order * max((e.valence for e in a.table.ordinary()), default=1)
    return MultiSeries(coeffs, bound)


# -- holding the roads against each other --------------------------------------

@dataclass(frozen=True)
class FrtReport:
    match: bool
    lhs: MultiSeries
    rhs: MultiSeries
    diff: object

    def lines(self) -> list[str]:
        keys = sorted(set(self.lhs.coeffs) | set(self.rhs.coeffs))
        out = []
        for m in keys:
            mono = "*".join(f"{k.name}^{e}" if e > 1 else k.name
                            for k, e in m) or "1"
            out.append(f"{mono}\t{self.lhs.coefficient(m)}"
                       f"\t{self.rhs.coefficient(m)}")
        out.append(f"max deviation\t{self.diff}")
        return out


def frt_check(g: Diagram, a: AlgebraSpec, *, with_potential: bool = False,
              max_degree: int = DEFAULT_DEGREE) -> FrtReport:
    """Diagram-sum value of ``g`` against the direct Gaussian average.

    The left side sums amplitudes over closed diagrams around ``g`` weighted
    by 1/|Aut|; the right side averages the polynomial of ``g`` divided by
    |Aut g|, against the bare weight or against e^S when ``with_potential``
    is set.  Rational algebras must agree exactly; floating point ones to
    1e-9 relative.  ``max_degree`` bounds the valence-weighted degree on
    both sides.  The pairing of ``a`` doubles as the Gaussian matrix, so it
    must be positive definite.
    """
    lhs = expectation_value(g, a, with_potential=with_potential,
                            max_degree=max_degree)
    aut = canonical_code(g).aut_order
    f = leg_polynomial(g, a) * Fraction(1, aut)
    if with_potential:
        grades = {key: key.grade for key, _ in interaction_terms(a)}
        keys = [key for key, _ in interaction_terms(a)]

        def keep(ev):
            return sum(e * grades[k] for k, e in zip(keys, ev)) <= max_degree

        rhs = MultiSeries(_potential_expansion(f, a, keep), max_degree)
    else:
        gauss = GaussianSpec(a.dim, a.pairing.tolist())
        rhs = MultiSeries.constant(Fraction(poly_average(f, gauss)),
                                   max_degree)
    keys = set(lhs.coeffs) | set(rhs.coeffs)
    diff = max((abs(lhs.coefficient(m) - rhs.coefficient(m)) for m in keys),
               default=Fraction(0))
    if a.exact:
        match = diff == 0
    else:
        match = all(abs(lhs.coefficient(m) - rhs.coefficient(m))
                    <= ABS_TOL + REL_TOL * abs(lhs.coefficient(m))
                    for m in keys)
    return FrtReport(match, lhs, rhs, diff)


@dataclass(frozen=True)
class TaylorReport:
    groupoid_sum: object
    direct_value: object


def taylor_stars(phi: Poly, v) -> TaylorReport:
    """Rebuild phi(v) from one star diagram per derivative order.

    The order-n term attaches n copies of ``v`` to a fully symmetric vertex
    carrying the order-n derivative tensor of ``phi`` at zero; the diagram
    machinery supplies the 1/n! through |Aut| of the star.  The report pairs
    that sum with the plain evaluation phi(v).
    """
    if phi.degree() > TAYLOR_DEGREE_LIMIT:
        raise GaussianError(f"degree capped at {TAYLOR_DEGREE_LIMIT}")
    dim = phi.dim
    point = tuple(v)
    if len(point) != dim:
        raise GaussianError("point and polynomial dimensions differ")
    direct = phi.evaluate(point)
    exact = (all(_exact_entry(c) for c in phi.terms.values())
             and all(_exact_entry(x) for x in point))
    total = phi.terms.get((0,) * dim, Fraction(0) if exact else 0.0)
    orders = sorted({sum(e) for e in phi.terms if sum(e)})
    if not orders:
        return TaylorReport(total, direct)

    specs = [("symmetric", f"d{n}", n) for n in orders]
    specs.append(("symmetric", "vec", 1))
    table = standard_table(*specs)
    zero = Fraction(0) if exact else 0.0
    tensors = {}
    for n in orders:
        t = np.full((dim,) * n, zero, dtype=object if exact else float)
        for idx in np.ndindex(*t.shape):
            e = tuple(idx.count(i) for i in range(dim))
            c = phi.terms.get(e)
            if c:
                t[idx] = c * prod(factorial(k) for k in e)
        tensors[f"d{n}"] = t
    vec = np.empty((dim,), dtype=object) if exact else np.empty((dim,))
    for i, x in enumerate(point):
        vec[i] = Fraction(x) if exact else float(x)
    tensors["vec"] = vec
    eye = [[Fraction(int(i == j)) if exact else float(i == j)
            for j in range(dim)] for i in range(dim)]
    a = AlgebraSpec(dim, eye, table, tensors)

    for n in orders:
        star = Diagram(
            (Vertex("symmetric", f"d{n}", tuple(range(n))),)
            + tuple(Vertex("symmetric", "vec", (n + i,)) for i in range(n)),
            frozenset((i, n + i) for i in range(n)))
        aut = canonical_code(star).aut_order
        total = total + amplitude(star, a) / Fraction(aut)
    return TaylorReport(total, direct)
