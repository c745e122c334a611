"""Exact truncated power series over the rationals, and groupoid sums.

A series is stored as monomial -> Fraction with a weighted truncation
degree: every variable carries a positive integer grade, a monomial weighs
the grade-weighted sum of its exponents, and a series with ``max_degree D``
is exact on all monomials of weight at most D and silent above.  Binary
operations truncate to the smaller of the two bounds; differentiating by a
variable of grade g costs g degrees of precision.

Diagram counting plugs in via :func:`groupoid_integral`: each isomorphism
class contributes one monomial (a factor per ordinary vertex, graded by
valence) divided by the order of its automorphism group.  The partition
series sums closed diagrams, the free energy sums connected ones, and
rooted variants sum diagrams around a marked piece.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .colours import ColourTable
from .diagram import Diagram, DiagramError
from .generate import DiagramClass, enumerate_closed

DEFAULT_DEGREE = 12

Monomial = tuple  # tuple of (VariableKey, positive exponent), sorted


@dataclass(frozen=True, order=True)
class VariableKey:
    """A formal variable with the grade its exponents weigh in at."""

    name: str
    grade: int = 1

    def __post_init__(self):
        if self.grade < 1:
            raise ValueError(f"variable {self.name!r} needs a positive grade")


def _mono_weight(m: Monomial) -> int:
    return sum(e * k.grade for k, e in m)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    acc: dict[VariableKey, int] = dict(a)
    for k, e in b:
        acc[k] = acc.get(k, 0) + e
    return tuple(sorted(acc.items()))


class MultiSeries:
    """Immutable by convention; all operations return fresh values."""

    __slots__ = ("coeffs", "max_degree")

    def __init__(self, coeffs: dict, max_degree: int):
        self.max_degree = int(max_degree)
        clean = {}
        for m, c in coeffs.items():
            c = Fraction(c)
            if c and _mono_weight(m) <= self.max_degree:
                clean[m] = c
        self.coeffs = clean

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, max_degree: int) -> "MultiSeries":
        return cls({}, max_degree)

    @classmethod
    def constant(cls, c, max_degree: int) -> "MultiSeries":
        return cls({(): Fraction(c)}, max_degree)

    @classmethod
    def variable(cls, key: VariableKey, max_degree: int) -> "MultiSeries":
        return cls({((key, 1),): Fraction(1)}, max_degree)

    # -- ring structure ------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, MultiSeries)
                and self.max_degree == other.max_degree
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.max_degree, frozenset(self.coeffs.items())))

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self.coeffs)
        for m, c in other.coeffs.items():
            acc[m] = acc.get(m, Fraction(0)) + c
        return MultiSeries(acc, min(self.max_degree, other.max_degree))

    __radd__ = __add__

    def __neg__(self):
        return MultiSeries({m: -c for m, c in self.coeffs.items()},
                           self.max_degree)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultiSeries({m: c * other for m, c in self.coeffs.items()},
                               self.max_degree)
        bound = min(self.max_degree, other.max_degree)
        acc: dict[Monomial, Fraction] = {}
        for ma, ca in self.coeffs.items():
            wa = _mono_weight(ma)
            for mb, cb in other.coeffs.items():
                if wa + _mono_weight(mb) > bound:
                    continue
                m = _mono_mul(ma, mb)
                acc[m] = acc.get(m, Fraction(0)) + ca * cb
        return MultiSeries(acc, bound)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultiSeries({m: c / Fraction(other)
                                for m, c in self.coeffs.items()},
                               self.max_degree)
        return self * other.reciprocal()

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        acc = MultiSeries.constant(1, self.max_degree)
        for _ in range(n):
            acc = acc * self
        return acc

    def _coerce(self, other) -> "MultiSeries":
        if isinstance(other, MultiSeries):
            return other
        return MultiSeries.constant(other, self.max_degree)

    # -- queries ---------------------------------------------------------

    def coefficient(self, m: Monomial = ()) -> Fraction:
        return self.coeffs.get(tuple(sorted(m)), Fraction(0))

    def truncate(self, max_degree: int) -> "MultiSeries":
        if max_degree > self.max_degree:
            raise ValueError("cannot raise a truncation bound")
        return MultiSeries(self.coeffs, max_degree)

    @property
    def valuation(self) -> int:
        return min((_mono_weight(m) for m in self.coeffs),
                   default=self.max_degree + 1)

    # -- transcendental operations ----------------------------------------

    def exp(self) -> "MultiSeries":
        if self.coefficient(()):
            raise ValueError("exp needs a vanishing constant term")
        acc = MultiSeries.constant(1, self.max_degree)
        term = acc
        for k in range(1, self.max_degree + 1):
            term = term * self / k
            if not term.coeffs:
                break
            acc = acc + term
        return acc

    def log(self) -> "MultiSeries":
        if self.coefficient(()) != 1:
            raise ValueError("log needs constant term 1")
        t = self - 1
        acc = MultiSeries.zero(self.max_degree)
        power = MultiSeries.constant(1, self.max_degree)
        for k in range(1, self.max_degree + 1):
            power = power * t
            if not power.coeffs:
                break
            acc = acc + power * Fraction((-1) ** (k + 1), k)
        return acc

    def reciprocal(self) -> "MultiSeries":
        c = self.coefficient(())
        if not c:
            raise ValueError("cannot invert a series without constant term")
        t = self / c - 1
        acc = MultiSeries.zero(self.max_degree)
        power = MultiSeries.constant(1, self.max_degree)
        for _ in range(self.max_degree + 1):
            acc = acc + power
            power = power * (-t)
            if not power.coeffs:
                break
        return acc / c

    def derivative(self, key: VariableKey) -> "MultiSeries":
        acc: dict[Monomial, Fraction] = {}
        for m, c in self.coeffs.items():
            d = dict(m)
            e = d.get(key, 0)
            if not e:
                continue
            if e == 1:
                del d[key]
            else:
                d[key] = e - 1
            acc[tuple(sorted(d.items()))] = c * e
        return MultiSeries(acc, self.max_degree - key.grade)

    def __str__(self):
        if not self.coeffs:
            return f"0 (+O^{self.max_degree + 1})"
        bits = []
        for m, c in sorted(self.coeffs.items(),
                           key=lambda kv: (_mono_weight(kv[0]), kv[0])):
            mono = "*".join(f"{k.name}^{e}" if e > 1 else k.name for k, e in m)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits) + f" (+O^{self.max_degree + 1})"

    __repr__ = __str__


def format_monomial(m: Monomial) -> str:
    """Stable text form: ``x[colour,grade]`` factors with ``^e`` exponents,
    joined by ``*``; the empty monomial prints as ``1``."""
    if not m:
        return "1"
    return "*".join(f"x[{k.name},{k.grade}]" + (f"^{e}" if e > 1 else "")
                    for k, e in m)


def sorted_terms(s: MultiSeries) -> list[tuple[Monomial, Fraction]]:
    """Nonzero terms in (weight, variables) order."""
    return sorted(s.coeffs.items(), key=lambda kv: (_mono_weight(kv[0]), kv[0]))


# -- groupoid sums over diagram classes -------------------------------------

def variable_for(table: ColourTable, colour: str) -> VariableKey:
    entry = table[colour]
    if entry.special:
        raise DiagramError(f"special colour {colour!r} carries no coupling")
    return VariableKey(entry.name, entry.valence)


def diagram_monomial(d: Diagram, table: ColourTable) -> Monomial:
    counts: dict[VariableKey, int] = {}
    for v in d.vertices:
        if v.special:
            continue
        key = variable_for(table, v.colour)
        counts[key] = counts.get(key, 0) + 1
    return tuple(sorted(counts.items()))


def groupoid_integral(classes: list[DiagramClass], table: ColourTable,
                      max_degree: int, weight=None) -> MultiSeries:
    """Sum of weight(rep)·monomial(class)/|Aut| over the given classes.

    ``weight`` maps a representative to a coefficient and must be constant
    on isomorphism classes (the caller's promise); omitted it is 1 and the
    integral counts.  Non-rational weights are embedded exactly, so float
    weights survive into the series unchanged.
    """
    acc: dict[Monomial, Fraction] = {}
    for c in classes:
        w = Fraction(1) if weight is None else Fraction(weight(c.rep))
        if not w:
            continue
        m = diagram_monomial(c.rep, table)
        acc[m] = acc.get(m, Fraction(0)) + w / c.aut
    return MultiSeries(acc, max_degree)


def partition_series(table: ColourTable,
                     max_degree: int = DEFAULT_DEGREE) -> MultiSeries:
    """Closed-diagram generating series; constant term 1 for the empty one."""
    classes = enumerate_closed(table, max_degree=max_degree)
    return groupoid_integral(classes, table, max_degree)


def free_energy_series(table: ColourTable,
                       max_degree: int = DEFAULT_DEGREE) -> MultiSeries:
    classes = enumerate_closed(table, max_degree=max_degree, connected=True)
    return groupoid_integral(classes, table, max_degree)


def rooted_series(table: ColourTable, root: Diagram,
                  max_degree: int = DEFAULT_DEGREE, *,
                  reduced: bool = False) -> MultiSeries:
    """Generating series of closed diagrams containing the marked ``root``.

    The grading counts ordinary vertices only, so a special root contributes
    no variables.  With ``reduced`` every component must touch the root.
    """
    classes = enumerate_closed(table, max_degree=max_degree, root=root,
                               reduced=reduced)
    return groupoid_integral(classes, table, max_degree)
