from fractions import Fraction as F

import pytest

from fdcalc.diagram import disjoint_union, symmetric_star
from fdcalc.generate import enumerate_closed
from fdcalc.series import (
    MultiSeries, VariableKey, diagram_monomial, free_energy_series,
    groupoid_integral, partition_series, rooted_series, variable_for,
)
from util import cubic_table, mixed_table, quartic_table

X = VariableKey("phi4", 4)
G = VariableKey("phi3", 3)


def var(key, deg):
    return MultiSeries.variable(key, deg)


def series(deg, **powers_to_coeff):
    """Series in X and G from {"x2": c} style keys, for terse expectations."""
    coeffs = {}
    for spec, c in powers_to_coeff.items():
        mono = []
        for name, key in (("x", X), ("g", G)):
            if name in spec:
                tail = spec.split(name, 1)[1]
                e = int(tail[0]) if tail[:1].isdigit() else 1
                mono.append((key, e))
        coeffs[tuple(sorted(mono))] = F(c)
    return MultiSeries(coeffs, deg)


def test_weighted_truncation():
    x = var(X, 12)
    assert (x ** 3).coeffs
    assert not (x ** 4).coeffs
    assert x.valuation == 4
    assert MultiSeries.zero(12).valuation == 13


def test_ring_arithmetic():
    x = var(X, 12)
    assert (1 + x) * (1 - x) == 1 - x ** 2
    assert (1 + x) - (1 + x) == MultiSeries.zero(12)
    assert x / 2 + x / 2 == x
    assert (2 * x) * F(1, 2) == x
    s = 1 + x / 8
    assert s * s.reciprocal() == MultiSeries.constant(1, 12)
    assert s ** -2 == (s * s).reciprocal()


def test_mixed_truncation_takes_minimum():
    a = var(X, 12)
    b = MultiSeries.constant(1, 8)
    assert (a + b).max_degree == 8
    assert (a * b).max_degree == 8


def test_exp_log_roundtrip():
    u = VariableKey("u", 1)
    v = VariableKey("v", 2)
    s = var(u, 9) + var(v, 9) * F(3, 5) + var(u, 9) ** 2 * 7
    assert s.exp().log() == s
    assert (1 + s).log().exp() == 1 + s
    t = s.exp()
    assert t.coefficient(()) == 1
    assert t.coefficient(((u, 1),)) == 1
    assert t.coefficient(((u, 2),)) == F(15, 2)  # 7 + 1/2


def test_domain_errors():
    x = var(X, 8)
    with pytest.raises(ValueError):
        (1 + x).exp()
    with pytest.raises(ValueError):
        x.log()
    with pytest.raises(ValueError):
        x.reciprocal()
    with pytest.raises(ValueError):
        x.truncate(12)
    with pytest.raises(ValueError):
        VariableKey("bad", 0)


def test_derivative():
    s = series(12, x2=F(3), x1=F(5), **{"": F(7)})
    d = s.derivative(X)
    assert d.max_degree == 8
    assert d.coefficient(()) == 5
    assert d.coefficient(((X, 1),)) == 6
    # a second derivative costs another grade of precision
    assert d.derivative(X) == MultiSeries.constant(6, 4)


def test_diagram_monomial():
    table = mixed_table()
    d = disjoint_union(symmetric_star("phi3", 3), symmetric_star("phi4", 4))
    d = disjoint_union(d, symmetric_star("PHI4", 4, special=True))
    assert diagram_monomial(d, table) == ((G, 1), (X, 1))
    assert variable_for(table, "phi4") == X


# Expected coefficients below come from Gaussian moments: a closed-diagram
# sum over k stars of valence n weighs (nk-1)!! / (k! * n!^k).

def test_quartic_partition_series():
    z = partition_series(quartic_table(), 12)
    assert z == series(12, **{"": 1, "x1": F(1, 8), "x2": F(35, 384),
                              "x3": F(385, 3072)})


def test_cubic_partition_series():
    z = partition_series(cubic_table(), 12)
    assert z == series(12, **{"": 1, "g2": F(5, 24), "g4": F(385, 1152)})


def test_mixed_partition_series():
    z = partition_series(mixed_table(), 12)
    assert z == series(12, **{"": 1,
                              "g2": F(5, 24), "g4": F(385, 1152),
                              "x1": F(1, 8), "x2": F(35, 384),
                              "x3": F(385, 3072),
                              "g2x1": F(35, 64)})


def test_free_energy_series():
    f = free_energy_series(quartic_table(), 12)
    assert f == series(12, x1=F(1, 8), x2=F(1, 12), x3=F(11, 96))
    g = free_energy_series(cubic_table(), 12)
    assert g == series(12, g2=F(5, 24), g4=F(5, 16))


def test_exp_of_free_energy_is_partition():
    for table in (quartic_table(), cubic_table(), mixed_table()):
        assert free_energy_series(table, 12).exp() == partition_series(table, 12)
        assert partition_series(table, 12).log() == free_energy_series(table, 12)


def test_first_derivative_marks_one_star():
    table = quartic_table()
    root = symmetric_star("PHI4", 4, special=True)
    dz = partition_series(table, 12).derivative(X)
    assert dz == rooted_series(table, root, 8)
    assert dz.coefficient(()) == F(1, 8)
    assert dz.coefficient(((X, 1),)) == F(35, 192)


def test_second_derivative_needs_factorial():
    table = quartic_table()
    star = symmetric_star("PHI4", 4, special=True)
    two = disjoint_union(star, star)
    ddz = partition_series(table, 12).derivative(X).derivative(X)
    assert ddz == 2 * rooted_series(table, two, 4)
    assert ddz.coefficient(()) == F(35, 192)


def test_cross_derivative_mixed():
    table = mixed_table()
    root = disjoint_union(symmetric_star("PHI3", 3, special=True),
                          symmetric_star("PHI4", 4, special=True))
    z = partition_series(table, 12)
    dd = z.derivative(G).derivative(X)
    assert dd == rooted_series(table, root, 5)
    assert dd.coefficient(()) == 0
    assert dd.coefficient(((G, 1),)) == F(35, 32)


def test_reduced_series_factors_off_partition():
    table = quartic_table()
    root = symmetric_star("PHI4", 4, special=True)
    red = rooted_series(table, root, 8, reduced=True)
    assert red.coefficient(()) == F(1, 8)
    assert red.coefficient(((X, 1),)) == F(1, 6)
    assert red * partition_series(table, 8) == rooted_series(table, root, 8)


def test_weighted_groupoid_integral():
    table = quartic_table()
    classes = enumerate_closed(table, max_degree=8)
    # weight by vertex count: picks x*d/dx out of the counting integral
    weighted = groupoid_integral(
        classes, table, 8,
        weight=lambda d: sum(1 for v in d.vertices if not v.special))
    z12 = partition_series(table, 12)
    x = MultiSeries.variable(X, 12)
    assert weighted == x * z12.derivative(X)
