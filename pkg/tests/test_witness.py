import cmath
from fractions import Fraction as F

import pytest
from flint import fmpq

from ppode.algebra.fields import QQ, AlgebraicField
from ppode.classify import decide_pp
from ppode.errors import BadBasePoint, LeadingTermVanishes
from ppode.parser import parse_and_validate
from ppode.series import PuiseuxSeries as PS
from ppode.vectorfield import find_poles
from ppode.witness import (
    LocalEquation,
    branched_witness,
    lemma_series,
    root_choices,
    verify_solution,
)

PARABOLIC = "(y')^2 = y - z^2"
CUBIC_Z = "(y')^2 = y^3 + z"


def g_from(terms, zeta_order=12, w_order=12):
    return LocalEquation.from_function(QQ, lambda j, k: terms.get((j, k), 0), zeta_order, w_order)


def ode_residual(m, g, y):
    """(y^m)' - g(zeta, y) computed directly on the series."""
    K = y.K
    rhs = PS.zero(K, var=y.var)
    for (j, k), c in g.coeffs.items():
        rhs = rhs + PS.monomial(K, K(c), j, y.var) * y**k
    return (y**m).deriv() - rhs


class TestLemmaSeries:
    def test_constant_g(self):
        y = lemma_series(2, g_from({(0, 0): 1}), fmpq(1), 6)
        assert y.truncate(3) == PS.from_terms(QQ, {F(1, 2): 1}, prec=3, var="zeta")
        assert all(c == 0 for e, c in y.terms() if e != F(1, 2))

    def test_matches_fractional_power(self):
        # (y^2)' = 1 + zeta: y = (zeta + zeta^2/2)^(1/2)
        y = lemma_series(2, g_from({(0, 0): 1, (1, 0): 1}), fmpq(1), 9)
        closed = PS.from_terms(QQ, {1: 1, 2: F(1, 2)}, prec=6, var="zeta").frac_pow(F(1, 2))
        assert closed.coefficient(F(3, 2)) == fmpq(1, 4)
        common = min(y.precision, closed.precision)
        assert (y.truncate(common) - closed.truncate(common)).is_zero()

    def test_parabolic_local_equation(self):
        # g(zeta, w) = w - 2(1 + zeta): c^2 = -2
        g = g_from({(0, 0): -2, (1, 0): -2, (0, 1): 1})
        choices = root_choices(QQ, g.g00(), 2)
        assert len(choices) == 2
        for E, c in choices:
            assert E.is_zero(c * c + 2)
            assert abs(abs(E.approx(c)) - 2**0.5) < 1e-12
            y = lemma_series(2, g, c, 10)
            assert ode_residual(2, g, y).is_zero()

    def test_index_selects_root(self):
        g = g_from({(0, 0): 4})
        assert lemma_series(2, g, 0, 3).coefficient(F(1, 2)) == 2
        assert lemma_series(2, g, 1, 3).coefficient(F(1, 2)) == -2

    def test_extension_stability(self):
        g = g_from({(0, 0): 3, (1, 0): 1, (0, 1): -1, (1, 2): 2}, 20, 20)
        _, c = root_choices(QQ, g.g00(), 3)[0]
        short = lemma_series(3, g, c, 8)
        long = lemma_series(3, g, c, 16)
        assert (long.truncate(short.precision) - short).is_zero()

    def test_root_symmetry_w_free(self):
        g = g_from({(0, 0): 1, (1, 0): 2, (2, 0): -1})
        sols = [lemma_series(3, g, E_c[1], 9) for E_c in root_choices(QQ, g.g00(), 3)]
        base = sols[0]
        for y in sols[1:]:
            omega = complex(y.K.approx(y.coefficient(F(1, 3))) / base.K.approx(base.coefficient(F(1, 3))))
            assert abs(omega**3 - 1) < 1e-12
            for i in range(1, 9):
                e = F(i, 3)
                lhs = complex(y.K.approx(y.coefficient(e)))
                rhs = omega**i * complex(base.K.approx(base.coefficient(e)))
                assert abs(lhs - rhs) < 1e-9 * max(1, abs(rhs))

    def test_vanishing_leading_term(self):
        with pytest.raises(LeadingTermVanishes):
            lemma_series(2, g_from({(0, 1): 1}), 0, 4)

    def test_wrong_root_rejected(self):
        with pytest.raises(ValueError):
            lemma_series(2, g_from({(0, 0): 4}), fmpq(3), 4)


def pole(text):
    return find_poles(parse_and_validate(text))[0]


class TestBranchedWitness:
    def test_parabolic_at_one(self):
        eq = parse_and_validate(PARABOLIC)
        w = branched_witness(eq, pole(PARABOLIC), 1)
        e, c = w.leading
        assert e == F(3, 2)
        K = w.field
        assert K.is_zero(c * c + K(fmpq(8, 9)))
        assert w.y.coefficient(0) == 1
        assert w.residual_order >= w.target

    def test_parabolic_at_zero_is_bad(self):
        with pytest.raises(BadBasePoint):
            branched_witness(parse_and_validate(PARABOLIC), pole(PARABOLIC), 0)

    @pytest.mark.parametrize("choice", [0, 1])
    def test_cubic_z_both_signs(self, choice):
        eq = parse_and_validate(CUBIC_Z)
        w = branched_witness(eq, pole(CUBIC_Z), -1, c_choice=choice)
        e, c = w.leading
        assert e == F(3, 2)
        assert c == (fmpq(2, 3) if choice == 0 else fmpq(-2, 3))
        assert w.y.coefficient(0) == 1
        assert w.residual_order >= e + F(4, 2)

    def test_conjugate_series_also_solves(self):
        eq = parse_and_validate(PARABOLIC)
        w = branched_witness(eq, pole(PARABOLIC), 2)
        m = w.m
        conj = PS.from_terms(
            w.field,
            {e: c * (-1 if (e * m).numerator % 2 else 1) for e, c in w.y.terms()},
            prec=w.y.precision,
            var=w.y.var,
        )
        assert m == 2
        assert verify_solution(eq, conj, 2) >= w.target

    def test_minimal_ramification(self):
        w = branched_witness(parse_and_validate(PARABOLIC), pole(PARABOLIC), 3)
        assert w.m == 2 and w.y.ramification == 2
        assert w.leading[0].denominator == 2

    def test_numeric_fallback(self):
        eq = parse_and_validate(PARABOLIC)
        w = branched_witness(eq, pole(PARABOLIC), 1, numeric=True)
        e, c = w.leading
        assert e == F(3, 2)
        assert abs(complex(c) ** 2 + 8 / 9) < 1e-9
        assert w.residual_order >= w.target

    @pytest.mark.parametrize(
        "text",
        [PARABOLIC, CUBIC_Z, "(y')^2 = y^5 - 1", "y' = y^3", "(y')^3 + y^3 = 1", "(y')^2 = y^3 + z*y"],
    )
    def test_existence_at_sampled_points(self, text):
        eq = parse_and_validate(text)
        v = decide_pp(eq)
        assert not v.pp
        ok = 0
        for z1 in (fmpq(1), fmpq(2), fmpq(-3), fmpq(1, 2), fmpq(5, 3)):
            try:
                w = branched_witness(eq, v.poles[0], z1)
            except BadBasePoint:
                continue
            assert w.m > 1 and w.residual_order >= w.target
            ok += 1
        assert ok >= 4


class TestVerifySolution:
    def _holomorphic(self, prec=None):
        L = AlgebraicField(QQ, [fmpq(1), fmpq(-1), fmpq(4)])
        return L, PS.from_terms(L, {2: L.gen}, prec=prec, var="zeta")

    def test_exact_holomorphic(self):
        eq = parse_and_validate(PARABOLIC)
        _, y = self._holomorphic()
        assert verify_solution(eq, y, 0) == float("inf")

    def test_truncated_holomorphic(self):
        eq = parse_and_validate(PARABOLIC)
        _, y = self._holomorphic(prec=8)
        assert verify_solution(eq, y, 0) >= 6

    def test_shifted_base_point(self):
        # same solution y = a z^2 expanded at z = -1
        eq = parse_and_validate(PARABOLIC)
        L, _ = self._holomorphic()
        a = L.gen
        y = PS.from_terms(L, {0: a, 1: -2 * a, 2: a}, var="zeta")
        assert verify_solution(eq, y, -1) == float("inf")

    def test_corrupted_leading_coefficient(self):
        eq = parse_and_validate(PARABOLIC)
        w = branched_witness(eq, pole(PARABOLIC), 1)
        L = AlgebraicField(QQ, [fmpq(8, 9) - fmpq(1, 100), 0, 1])
        bad = {F(0): L.one, F(3, 2): L.gen}
        for e, c in w.y.terms():
            if e not in bad and e.denominator == 1:
                assert all(x == 0 for x in c.c[1:])
                bad[e] = L(c.c[0])
        y = PS.from_terms(L, bad, prec=w.y.precision, var="zeta")
        assert verify_solution(eq, y, 1) == 1

    def test_numeric_tolerance(self):
        eq = parse_and_validate(PARABOLIC)
        w = branched_witness(eq, pole(PARABOLIC), 1, numeric=True)
        y = w.y.map_coeffs(lambda c: c * (1 + 1e-3) if abs(c) > 0.9 else c)
        assert verify_solution(eq, y, 1) < w.target
        assert cmath.isfinite(complex(w.leading[1]))
