"""Polynomials in the coordinates of one finite-dimensional vector.

Terms map an exponent tuple (one entry per coordinate) to a coefficient.
Coefficients may be Fractions, ints or floats; nothing here forces a choice,
so exact and numeric pipelines share the type.
"""
from __future__ import annotations


class Poly:
    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: dict | None = None):
        self.dim = dim
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, dim: int, c) -> "Poly":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def coordinate(cls, dim: int, i: int) -> "Poly":
        e = [0] * dim
        e[i] = 1
        return cls(dim, {tuple(e): 1})

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.dim == other.dim
                and self.terms == other.terms)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.dim, other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc.get(e, 0) + c
        return Poly(self.dim, acc)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Poly)
                       else Poly.constant(self.dim, -other))

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(self.dim, {e: c * other for e, c in self.terms.items()})
        acc: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                acc[e] = acc.get(e, 0) + ca * cb
        return Poly(self.dim, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        acc = Poly.constant(self.dim, 1)
        for _ in range(n):
            acc = acc * self
        return acc

    def evaluate(self, point):
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                for _ in range(k):
                    term = term * x
            total = total + term
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"v{i}^{k}" if k > 1 else f"v{i}"
                            for i, k in enumerate(e) if k)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)

    __repr__ = __str__
