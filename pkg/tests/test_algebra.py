import random

import pytest
from flint import fmpq, fmpq_poly

from ppode.algebra import polys
from ppode.algebra.fields import QQ, QQz, AlgebraicField
from ppode.algebra.polys import CTX, S, T, Z
from ppode.algebra.ratfunc import RatFunc
from ppode.algebra.roots import univariate_roots


def sylvester_det(f, g, var):
    """Resultant by cofactor expansion of the Sylvester matrix."""
    a = list(reversed(polys.coefficients_in(f, var)))
    b = list(reversed(polys.coefficients_in(g, var)))
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    zero = polys.const(0)
    rows = []
    for i in range(n):
        rows.append([zero] * i + a + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + b + [zero] * (size - n - 1 - i))
    return _det(rows)


def _det(M):
    if len(M) == 1:
        return M[0][0]
    total = polys.const(0)
    for j, c in enumerate(M[0]):
        if c == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = c * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def random_poly(rng, degS=2, degT=2, degz=1, terms=4):
    f = polys.const(0)
    for _ in range(terms):
        f = f + rng.randint(-3, 3) * S ** rng.randint(0, degS) * T ** rng.randint(0, degT) * Z ** rng.randint(0, degz)
    return f


class TestPartials:
    def test_power_rule_examples(self):
        assert polys.poly_partial(S**2 - T + Z**2, "S") == 2 * S
        assert polys.poly_partial(S**2 - T**3 - Z, "T") == -3 * T**2
        assert polys.poly_partial(S**2 - T + Z**2, "z") == 2 * Z

    def test_degree_drops_by_one(self):
        f = S**3 * T - 2 * T**2 * Z + 1
        for v in ("S", "T", "z"):
            assert polys.degree_in(polys.poly_partial(f, v), v) == polys.degree_in(f, v) - 1

    def test_product_rule_random(self):
        rng = random.Random(11)
        for _ in range(50):
            f, g = random_poly(rng), random_poly(rng)
            for v in ("S", "T", "z"):
                lhs = polys.poly_partial(f * g, v)
                rhs = f * polys.poly_partial(g, v) + g * polys.poly_partial(f, v)
                assert lhs == rhs


class TestResultant:
    @pytest.mark.parametrize(
        "f, g, expected",
        [
            (S**2 - T, 2 * S, -4 * T),
            (S - T, S + T, 2 * T),
            (S**2, S, polys.const(0)),
        ],
    )
    def test_examples(self, f, g, expected):
        assert polys.resultant(f, g, "S") == expected

    def test_examples_match_sylvester(self):
        for f, g in [(S**2 - T, 2 * S), (S - T, S + T), (S**2, S)]:
            assert polys.resultant(f, g, "S") == sylvester_det(f, g, "S")

    def test_random_against_sylvester(self):
        rng = random.Random(5)
        checked = 0
        while checked < 40:
            f, g = random_poly(rng, 3, 2), random_poly(rng, 2, 2)
            if polys.degree_in(f, "S") < 1 or polys.degree_in(g, "S") < 1:
                continue
            assert polys.resultant(f, g, "S") == sylvester_det(f, g, "S")
            checked += 1

    def test_zero_input_rejected(self):
        with pytest.raises(ValueError):
            polys.resultant(polys.const(0), S, "S")

    def test_vanishes_iff_common_factor(self):
        rng = random.Random(8)
        for _ in range(40):
            h = S + rng.randint(-2, 2) * T + rng.randint(-2, 2)
            f, g = random_poly(rng, 2, 1) + S, random_poly(rng, 2, 1) + S
            if rng.random() < 0.5:
                f, g = f * h, g * h
            r = polys.resultant(f, g, "S")
            d = polys.degree_in(polys.poly_gcd(f, g, "S"), "S")
            assert (r == 0) == (d > 0)


class TestDiscriminant:
    def test_quadratic_in_S(self):
        Q = T**3 - T + Z
        assert polys.discriminant(S**2 - Q, "S") == 4 * Q

    def test_in_T(self):
        assert polys.discriminant(T**2 + 1, "T") == polys.const(-4)

    def test_weierstrass(self):
        assert polys.discriminant(S**2 - T**3 + T, "S") == 4 * (T**3 - T)

    def test_degree_too_small(self):
        with pytest.raises(ValueError):
            polys.discriminant(S - T, "S")


class TestGcd:
    def test_examples(self):
        assert polys.poly_gcd(S**2 - T**2, S - T, "S") == S - T
        assert polys.poly_gcd(S, T, "S") == polys.const(1)
        assert polys.poly_gcd((S - T) ** 2 * (S + 1), (S - T) * (S + 2), "S") == S - T

    def test_zero_zero(self):
        assert polys.poly_gcd(polys.const(0), polys.const(0), "S") == 0


class TestRoots:
    def test_rational_roots(self):
        hs = univariate_roots([0, -1, 0, 1])
        assert sorted(h.value for h in hs) == [-1, 0, 1]
        assert all(h.degree == 1 for h in hs)

    def test_gaussian(self):
        hs = univariate_roots([1, 0, 1])
        assert len(hs) == 2
        assert all(h.degree == 2 for h in hs)
        assert sorted(round(h.approx.imag, 12) for h in hs) == [-1, 1]

    def test_function_field_eisenstein(self):
        hs = univariate_roots([RatFunc(fmpq_poly([0, -1])), 0, 0, 0, 0, 1], QQz)
        assert len(hs) == 1 and hs[0].degree == 5

    def test_newton_step_stays_in_disk(self):
        rng = random.Random(3)
        for _ in range(30):
            coeffs = [rng.randint(-5, 5) for _ in range(rng.randint(2, 6))] + [1]
            if all(c == 0 for c in coeffs[:-1]):
                continue
            for h in univariate_roots(coeffs):
                if h.approx is None:
                    continue
                assert abs(h.newton_step() - h.approx) <= h.radius

    def test_multiplicity(self):
        hs = univariate_roots([1, -2, 1])
        assert len(hs) == 1 and hs[0].multiplicity == 2


class TestRatFunc:
    def test_field_inverse(self):
        rng = random.Random(2)
        for _ in range(50):
            num = fmpq_poly([rng.randint(-4, 4) for _ in range(3)])
            den = fmpq_poly([rng.randint(-4, 4) for _ in range(3)])
            if num == 0 or den == 0:
                continue
            a = RatFunc(num, den)
            assert a * (1 / a) == RatFunc(fmpq_poly([1]))

    def test_normal_form(self):
        r = RatFunc(fmpq_poly([0, 2]), fmpq_poly([0, 4]))
        assert r.den == fmpq_poly([1])
        assert r.num == fmpq_poly([fmpq(1, 2)])

    def test_taylor_pole(self):
        r = RatFunc(fmpq_poly([1]), fmpq_poly([0, 1]))
        with pytest.raises(ZeroDivisionError):
            r.taylor(fmpq(0), 3)
        assert r.taylor(fmpq(1), 3) == [1, -1, 1]


class TestAlgebraicField:
    def test_arithmetic_and_inverse(self):
        L = AlgebraicField(QQ, [fmpq(-2), fmpq(0), fmpq(1)])
        a = L.gen
        assert a * a == L(2)
        assert (1 + a) * (1 + a).field.inverse(1 + a) == L.one

    def test_factor_over_extension(self):
        L = AlgebraicField(QQ, [fmpq(-2), fmpq(0), fmpq(1)])
        facs = L.factor([L(-2), L.zero, L.one])
        assert sorted(len(f) for f, _ in facs) == [2, 2]

    def test_function_field_tower(self):
        L = AlgebraicField(QQz, [RatFunc(fmpq_poly([0, -1])), 0, 1])
        w = L.gen
        assert w * w == L(RatFunc(fmpq_poly([0, 1])))
        # d/dz sqrt(z) = 1/(2 sqrt(z)) = w / (2 z)
        assert L.diff(w) == w * L(RatFunc(fmpq_poly([1]), fmpq_poly([0, 2])))


def test_canonical_render():
    f = CTX.from_dict({(2, 0, 0): 1, (0, 1, 0): -1, (0, 0, 2): 1})
    assert polys.render(f) == "S^2 + z^2 - T"
