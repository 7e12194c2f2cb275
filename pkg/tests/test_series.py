from fractions import Fraction as F

import pytest
from flint import fmpq

from ppode.algebra.fields import QQ, AlgebraicField
from ppode.errors import DivisionByZeroSeries, UnsupportedExtension
from ppode.series import PuiseuxSeries as PS


def ser(terms, prec=None, K=QQ):
    return PS.from_terms(K, {F(e): c for e, c in terms.items()}, prec=prec, var="z")


def test_half_powers_multiply():
    r = ser({F(1, 2): 1}) * ser({F(1, 2): 1})
    assert r == ser({1: 1})
    assert r.ramification == 1


def test_geometric_inverse():
    inv = ser({0: 1, 1: -1}, prec=3).inverse()
    assert inv == ser({0: 1, 1: 1, 2: 1}, prec=3)


def test_fractional_power_by_squaring():
    a = ser({1: 1, 2: F(1, 2)}, prec=3)
    r = a.frac_pow(F(1, 2))
    assert r.coefficient(F(1, 2)) == 1
    assert r.coefficient(F(3, 2)) == fmpq(1, 4)
    assert (r * r - a).is_zero()


def test_fractional_power_needs_root():
    a = ser({0: 2, 1: 1}, prec=4)
    with pytest.raises(UnsupportedExtension):
        a.frac_pow(F(1, 2))
    L = AlgebraicField(QQ, [fmpq(-2), 0, 1])
    b = a.coerce(L)
    r = b.frac_pow(F(1, 2), root=L.gen)
    assert (r * r - b).is_zero()


def test_minimal_ramification():
    a = ser({F(2, 4): 1, F(4, 4): 3})
    assert a.ramification == 2
    assert (a * a).ramification == 2
    assert ser({F(1, 3): 1, F(2, 3): 1}).ramification == 3
    assert (ser({F(1, 2): 1}) - ser({F(1, 2): 1})).ramification == 1


def test_precision_tracks_minimum():
    a = ser({0: 1, 1: 2}, prec=5)
    b = ser({0: 1}, prec=3)
    assert (a + b).precision == 3
    assert (a * ser({2: 1})).precision == 7


def test_exact_zero_times_anything():
    z = PS.zero(QQ)
    assert (z * ser({0: 1}, prec=4)).is_zero()


def test_inverse_of_zero_raises():
    with pytest.raises(DivisionByZeroSeries):
        ser({}, prec=4).inverse()


def test_derivative():
    a = ser({F(3, 2): 2, 2: 1}, prec=4)
    assert a.deriv() == ser({F(1, 2): 3, 1: 2}, prec=3)


def test_leibniz_on_series():
    a = ser({F(1, 2): 1, 1: 3, F(3, 2): -2}, prec=4)
    b = ser({-1: 1, 0: 5, F(1, 2): 1}, prec=3)
    assert ((a * b).deriv() - (a.deriv() * b + a * b.deriv())).is_zero()


def test_reversion_roundtrip():
    a = PS.from_terms(QQ, {1: 1, 2: 3, 3: -1}, prec=9)
    inv = a.reversion()
    comp = a.compose(inv)
    x = PS.monomial(QQ, QQ.one, 1)
    assert (comp - x).is_zero()
    assert comp.precision >= 8


def test_compose_laurent():
    a = PS.from_terms(QQ, {-1: 1, 0: 1})
    inner = PS.from_terms(QQ, {1: 1, 2: 1}, prec=6)
    # 1/(x + x^2) + 1 = x^-1 - 1 + x - x^2 + ... + 1
    r = a.compose(inner)
    assert r.coefficient(-1) == 1 and r.coefficient(0) == 0 and r.coefficient(1) == 1


def test_render():
    a = ser({F(1, 2): 1, 1: F(-1, 4)}, prec=2)
    assert str(a) == "(z)^(1/2) - 1/4 * (z) + O((z)^(2))"


def test_shift_and_truncate():
    a = ser({0: 1, 1: 1, 2: 1}, prec=6)
    assert a.shift(F(1, 2)).valuation() == F(1, 2)
    assert a.truncate(2) == ser({0: 1, 1: 1}, prec=2)
