"""Painlevé verdicts and normal-form labels.

The verdict is exact: the equation has the Painlevé property iff the
vector field has no pole at any place.  Labels are extracted only where a
coordinate can be read off directly:

* riccati      ``D(x) = a0 + a1 x + a2 x^2`` for x = y, x = y', or the
               monomial-curve coordinate (s = x^q, t = x^p),
* weierstrass  ``(y')^2 = scale * P(y)`` with P a z-free squarefree cubic,
* constants    genus >= 2 and no poles,
* genus-only   everything else that is PP.
"""

from dataclasses import dataclass, field
from math import gcd

from flint import fmpq, fmpq_poly

from .algebra import polys
from .algebra.fields import fmt_rational
from .algebra.polys import CTX, S, T
from .algebra.ratfunc import RatFunc
from .parser import HEURISTIC, curve_equation
from .puiseux import base_field
from .vectorfield import find_poles, genus as curve_genus


# ---------------------------------------------------------------------------
# labels


@dataclass(frozen=True)
class Riccati:
    a0: object
    a1: object
    a2: object
    coordinate: str = "y"
    label = "riccati"

    def __post_init__(self):
        if not (self.a0 or self.a1 or self.a2):
            raise ValueError("Riccati form with all coefficients zero")

    def coefficients(self):
        return (self.a0, self.a1, self.a2)

    def describe(self):
        a = ", ".join(_fmt_base(c) for c in self.coefficients())
        return f"riccati D(x) = a0 + a1*x + a2*x^2 with (a0, a1, a2) = ({a}), x = {self.coordinate}"


@dataclass(frozen=True)
class WeierstrassType:
    cubic: tuple  # monic cubic over Q, low to high
    a: object
    b: object
    scale: object
    label = "weierstrass"

    def cubic_str(self, var="t"):
        terms = []
        for k in range(3, -1, -1):
            c = self.cubic[k]
            if c == 0:
                continue
            mon = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            cs = fmt_rational(c)
            if not mon:
                terms.append(cs)
            elif c == 1:
                terms.append(mon)
            elif c == -1:
                terms.append("-" + mon)
            else:
                terms.append(f"{cs}*{mon}")
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def describe(self):
        return (
            f"weierstrass (y')^2 = ({_fmt_base(self.scale)}) * ({self.cubic_str('y')}); "
            f"depressed a = {fmt_rational(self.a)}, b = {fmt_rational(self.b)}"
        )


@dataclass(frozen=True)
class ConstantsCase:
    genus: int
    note: str = "reduces to y' = 0 after a finite extension of the base field"
    label = "constants"

    def describe(self):
        return f"constants (genus {self.genus}); {self.note}"


@dataclass(frozen=True)
class GenusOnly:
    genus: int
    note: str = ""
    label = "genus-only"

    def describe(self):
        return f"genus {self.genus}" + (f"; {self.note}" if self.note else "")


def _fmt_base(c):
    if isinstance(c, RatFunc):
        return str(c)
    return fmt_rational(c)


# ---------------------------------------------------------------------------
# verdict


@dataclass
class Verdict:
    pp: bool
    poles: list
    genus: int
    classification: object = None
    witness: object = None
    conditional: bool = False
    warnings: list = field(default_factory=list)

    @property
    def tag(self):
        return "pp" if self.pp else "not-pp"


def decide_pp(eq, N=None, with_genus=True):
    """PP iff the derivation has no poles; labels PP equations."""
    poles = find_poles(eq, N)
    g = curve_genus(eq) if with_genus else None
    v = Verdict(
        pp=not poles,
        poles=poles,
        genus=g,
        conditional=eq.certificate == HEURISTIC,
        warnings=list(eq.warnings),
    )
    if v.pp:
        v.classification = classify(eq, v)
    return v


def classify(eq, verdict=None):
    g = verdict.genus if verdict is not None and verdict.genus is not None else curve_genus(eq)
    if verdict is not None and not verdict.pp:
        raise ValueError("classification applies to PP equations only")
    if g == 0:
        return riccati_form(eq) or GenusOnly(0, "no rational coordinate found by the linear or monomial routes")
    if g == 1:
        return weierstrass_form(eq) or GenusOnly(1, "not in the shape (y')^2 = scale * cubic(y)")
    return ConstantsCase(g)


# ---------------------------------------------------------------------------
# genus 0


def _coeffs_in(f, var):
    """Coefficients in ``var`` as {power: MultiPoly}."""
    return {k: c for k, c in enumerate(polys.coefficients_in(f, var)) if c != 0}


def _as_base(eq, p):
    """A polynomial in z only as a base-field element."""
    r = RatFunc(polys.z_poly(p))
    return r.constant_value() if eq.autonomous else r


def _polynomial_quotient(eq, num, den, var):
    """``num/den`` as a polynomial in ``var`` over the base field, or None."""
    g = num.gcd(den)
    num = divmod(num, g)[0]
    den = divmod(den, g)[0]
    if polys.degree_in(den, "S") > 0 or polys.degree_in(den, "T") > 0:
        return None
    d = RatFunc(polys.z_poly(den))
    out = []
    for c in polys.coefficients_in(num, var):
        r = RatFunc(polys.z_poly(c)) / d
        out.append(r.constant_value() if eq.autonomous and r.is_constant() else r)
    if eq.autonomous and any(isinstance(c, RatFunc) for c in out):
        return None
    return out


def _riccati_from(coeffs, coordinate, eq):
    K = base_field(eq)
    coeffs = list(coeffs)
    while coeffs and K.is_zero(K(coeffs[-1])):
        coeffs.pop()
    if len(coeffs) > 3 or not coeffs:
        return None
    coeffs += [K.zero] * (3 - len(coeffs))
    return Riccati(*coeffs, coordinate=coordinate)


def riccati_form(eq):
    f = eq.f
    if eq.degS == 1:
        cs = polys.coefficients_in(f, "S")
        q = _polynomial_quotient(eq, -cs[0], cs[1], "T")
        if q is not None:
            return _riccati_from(q, "y", eq)
    if eq.degT == 1:
        cs = polys.coefficients_in(f, "T")
        # t = R(s) = N/M ; D(s) = (s - R^z) / R_s
        N, M = -cs[0], cs[1]
        Nz, Mz = polys.poly_partial(N, "z"), polys.poly_partial(M, "z")
        NS, MS = polys.poly_partial(N, "S"), polys.poly_partial(M, "S")
        num = S * M * M - (Nz * M - N * Mz)
        den = NS * M - N * MS
        if den != 0:
            q = _polynomial_quotient(eq, num, den, "S")
            if q is not None:
                return _riccati_from(q, "y'", eq)
    mono = _monomial_shape(eq)
    if mono is not None:
        p, q, c = mono
        return _monomial_riccati(eq, p, q, c)
    return None


def _monomial_shape(eq):
    """``S^p - c*T^q`` with rational c and coprime p, q: returns (p, q, c)."""
    terms = polys.term_dict(eq.f)
    if len(terms) != 2 or not eq.autonomous:
        return None
    (e1, c1), (e2, c2) = sorted(terms.items(), reverse=True)
    if e1[1] != 0 or e2[0] != 0:
        return None
    p, q = e1[0], e2[1]
    if gcd(p, q) != 1:
        return None
    return p, q, -c2 / c1


def _monomial_riccati(eq, p, q, c):
    # s = lam x^q, t = mu x^p with lam^p = c mu^q: lam = c^b, mu = c^a, b p - a q = 1
    b = pow(p, -1, q) if q > 1 else 1
    a = (b * p - 1) // q
    lam = c**b if b >= 0 else 1 / c ** (-b)
    mu = c**a if a >= 0 else 1 / c ** (-a)
    k = q - p + 1
    if k < 0 or k > 2:
        return None
    coeff = lam / (mu * p)
    out = [fmpq(0)] * 3
    out[k] = coeff
    coord = f"x with y' = {_mono_str(lam, 'x', q)}, y = {_mono_str(mu, 'x', p)}"
    return Riccati(*out, coordinate=coord)


def _mono_str(c, var, k):
    mon = var if k == 1 else f"{var}^{k}"
    return mon if c == 1 else f"{fmt_rational(c)}*{mon}"


def monomial_family_check(p, q):
    """Closed-form PP criterion for ``(y')^p = y^q`` with coprime p, q."""
    if p < 1 or q < 1 or gcd(p, q) != 1:
        raise ValueError(f"exponents must be coprime positive integers, got ({p}, {q})")
    return q - p in (-1, 0, 1)


# ---------------------------------------------------------------------------
# genus 1


def weierstrass_form(eq):
    """Match ``A(z) s^2 + B(t, z) = 0`` with ``-B/A = scale(z) * P(t)``."""
    f = eq.f
    if eq.degS != 2 or eq.degT != 3:
        return None
    cs = polys.coefficients_in(f, "S")
    if cs[1] != 0 or polys.degree_in(cs[2], "T") > 0:
        return None
    A = RatFunc(polys.z_poly(cs[2]))
    Q = [-RatFunc(polys.z_poly(c)) / A for c in polys.coefficients_in(cs[0], "T")]
    scale = Q[3]
    P = [c / scale for c in Q]
    if not all(c.is_constant() for c in P):
        return None
    P = [c.constant_value() for c in P]
    if fmpq_poly(P).discriminant() == 0:
        return None
    p2, p1, p0 = P[2], P[1], P[0]
    a = p1 - p2 * p2 / 3
    b = p0 - p1 * p2 / 3 + 2 * p2**3 / 27
    sc = scale.constant_value() if eq.autonomous else scale
    return WeierstrassType(tuple(P), a, b, sc)


# ---------------------------------------------------------------------------
# Möbius changes of the unknown


def mobius_transform(eq, a, b, c, d):
    """Rewrite the equation for w with ``y = (a w + b) / (c w + d)``."""
    a, b, c, d = (fmpq(x) if not isinstance(x, fmpq) else x for x in (a, b, c, d))
    det = a * d - b * c
    if det == 0:
        raise ValueError("degenerate Möbius map")
    num_t = a * T + b
    den_t = c * T + d
    terms = polys.t_coefficients(eq.f)
    M = max(2 * i + j for i, j in terms)
    out = CTX.from_dict({})
    for (i, j), coeff in terms.items():
        cz = polys.from_z_poly(coeff.num)
        piece = cz * (det * S) ** i * num_t**j * den_t ** (M - 2 * i - j)
        out = out + piece
    return curve_equation(out, text=f"mobius({a}, {b}, {c}, {d}) of {eq.render()}")


__all__ = [
    "ConstantsCase",
    "GenusOnly",
    "Riccati",
    "Verdict",
    "WeierstrassType",
    "classify",
    "decide_pp",
    "mobius_transform",
    "monomial_family_check",
    "riccati_form",
    "weierstrass_form",
]
