"""The derivation D on the function field of the curve and its poles.

D is determined by ``D(z) = 1`` and ``D(t) = s``; ``D(f) = 0`` then forces
``D(s) = -(s f_T + f_z) / f_S``.  At a place with local parameter u the
vector field reads ``D = a(u) d/du`` with

    a(u) = D(u) = (s(u) - t^d(u)) / t'(u)

where ``t^d`` differentiates the coefficients of ``t(u)`` in z.
"""

from dataclasses import dataclass
from math import gcd, lcm

from flint import fmpq

from .algebra import polys
from .algebra.polys import S
from .errors import Reducible, TruncationTooSmall
from .series import PuiseuxSeries
from .puiseux import (
    Place,
    all_places,
    base_field,
    candidate_centers,
    default_truncation,
    places_above,
    series_substitute,
)

ST_NAMES = {"S": "s", "T": "t", "z": "z"}


def _prem(a, f):
    """Pseudo-remainder of ``a`` by ``f`` in S: returns (r, k) with
    ``lc^k * a = q * f + r`` and deg_S r < deg_S f."""
    n = polys.degree_in(f, "S")
    lcf = polys.leading_coefficient_in(f, "S")
    r = a
    k = 0
    while r != 0 and polys.degree_in(r, "S") >= n:
        d = polys.degree_in(r, "S")
        lcr = polys.leading_coefficient_in(r, "S")
        r = lcf * r - lcr * S ** (d - n) * f
        k += 1
    return r, k, lcf


def _integral(num, den):
    """Scale so both parts have coprime integer coefficients, den leading positive."""
    coeffs = [c for _, c in polys.sorted_terms(num)] + [c for _, c in polys.sorted_terms(den)]
    l, g = 1, 0
    for c in coeffs:
        l = lcm(l, int(c.q))
    for c in coeffs:
        g = gcd(g, int(c.p * (l // int(c.q))))
    scale = fmpq(l, g)
    if polys.sorted_terms(den)[0][1] < 0:
        scale = -scale
    return num * scale, den * scale


class FunctionFieldElement:
    """``num / den`` with numerator and denominator reduced modulo f in S."""

    __slots__ = ("eq", "num", "den")

    def __init__(self, eq, num, den=None):
        den = polys.const(1) if den is None else den
        f = eq.f
        num, kn, lcf = _prem(num, f)
        den, kd, _ = _prem(den, f)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes on the curve")
        # lc^kn * num_orig = r_n (mod f): num_orig/den_orig = r_n lc^kd / (r_d lc^kn)
        if kd > kn:
            num = num * lcf ** (kd - kn)
        elif kn > kd:
            den = den * lcf ** (kn - kd)
        if num == 0:
            den = polys.const(1)
        else:
            g = num.gcd(den)
            if not g.is_constant():
                num = divmod(num, g)[0]
                den = divmod(den, g)[0]
            num, den = _integral(num, den)
        self.eq = eq
        self.num = num
        self.den = den

    @classmethod
    def of(cls, eq, x):
        if isinstance(x, FunctionFieldElement):
            return x
        if isinstance(x, int):
            x = polys.const(x)
        return cls(eq, x)

    def __add__(self, o):
        o = FunctionFieldElement.of(self.eq, o)
        return FunctionFieldElement(self.eq, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return FunctionFieldElement(self.eq, -self.num, self.den)

    def __sub__(self, o):
        return self + (-FunctionFieldElement.of(self.eq, o))

    def __mul__(self, o):
        o = FunctionFieldElement.of(self.eq, o)
        return FunctionFieldElement(self.eq, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = FunctionFieldElement.of(self.eq, o)
        return FunctionFieldElement(self.eq, self.num * o.den, self.den * o.num)

    def is_zero(self):
        return self.num == 0

    def __eq__(self, o):
        o = FunctionFieldElement.of(self.eq, o)
        r, _, _ = _prem(self.num * o.den - o.num * self.den, self.eq.f)
        return r == 0

    __hash__ = None

    def series_at(self, place):
        K = place.field
        n = series_substitute(self.num, place.s, place.t, K)
        d = series_substitute(self.den, place.s, place.t, K)
        return n / d

    def fmt(self):
        n = polys.render(self.num, ST_NAMES)
        if self.den == 1:
            return n
        d = polys.render(self.den, ST_NAMES)
        if len(polys.sorted_terms(self.num)) > 1:
            n = f"({n})"
        if len(polys.sorted_terms(self.den)) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    __str__ = fmt

    def __repr__(self):
        return f"FunctionFieldElement({self.fmt()})"


@dataclass(frozen=True, eq=False)
class Derivation:
    eq: object
    Dt: FunctionFieldElement
    Ds: FunctionFieldElement
    delta: object
    autonomous: bool

    def apply(self, g):
        """D(g) for a function-field element: g_z + s g_t + D(s) g_s."""
        g = FunctionFieldElement.of(self.eq, g)

        def d(p):
            out = FunctionFieldElement(self.eq, polys.poly_partial(p, "T") * S)
            out = out + self.Ds * FunctionFieldElement(self.eq, polys.poly_partial(p, "S"))
            if not self.autonomous:
                out = out + FunctionFieldElement(self.eq, polys.poly_partial(p, "z"))
            return out

        num = FunctionFieldElement(self.eq, g.num)
        den = FunctionFieldElement(self.eq, g.den)
        return (d(g.num) * den - num * d(g.den)) / (den * den)

    def identity_residue(self):
        """s f_T + D(s) f_S + f_z reduced on the curve (zero when D(f) = 0)."""
        f = self.eq.f
        E = lambda p: FunctionFieldElement(self.eq, p)  # noqa: E731
        out = E(S * polys.poly_partial(f, "T")) + self.Ds * E(polys.poly_partial(f, "S"))
        if not self.autonomous:
            out = out + E(polys.poly_partial(f, "z"))
        return out


def derivation(eq):
    f = eq.f
    fS = polys.poly_partial(f, "S")
    num = -(S * polys.poly_partial(f, "T") + polys.poly_partial(f, "z"))
    return Derivation(
        eq=eq,
        Dt=FunctionFieldElement(eq, S),
        Ds=FunctionFieldElement(eq, num, fS),
        delta=fS,
        autonomous=eq.autonomous,
    )


# ---------------------------------------------------------------------------
# local analysis


def local_vector_field(D, place):
    """``a(u) = D(u)`` at ``place``; ``precision`` of the result is its valid order."""
    t, s = place.t, place.s
    td = t.zdiff() if not D.autonomous else PuiseuxSeries.zero(place.field)
    return (s - td) * t.deriv().inverse()


def certify_order(a, extra=3):
    return a.certified_order(extra)


def pole_order(D, place, retry=True):
    """u-order of D(u) at ``place`` (negative at a pole).

    The order is accepted once three further coefficients are known; the
    expansion is recomputed once at doubled truncation before giving up.
    """
    try:
        return int(local_vector_field(D, place).certified_order())
    except TruncationTooSmall:
        if not retry or place.reparametrized:
            raise
    bigger = places_above(D.eq, place.center, 2 * place.truncation)
    twin = _matching(bigger, place)
    try:
        return int(local_vector_field(D, twin).certified_order())
    except TruncationTooSmall as exc:
        raise TruncationTooSmall(
            f"pole order at {place.describe()} undetermined at truncation {2 * place.truncation}"
        ) from exc


def _matching(places, place):
    for p in places:
        if p.index == place.index:
            return p
    raise TruncationTooSmall("place not found after re-expansion")


@dataclass(frozen=True, eq=False)
class PoleReport:
    place: Place
    pole_order: int

    @property
    def m(self):
        """Ramification of the branched solutions attached to this pole."""
        return self.pole_order + 1

    def describe(self):
        return f"pole of order {self.pole_order} at {self.place.describe()}"


def find_poles(eq, N=None, D=None):
    D = D or derivation(eq)
    reports = []
    for c in candidate_centers(eq):
        for p in places_above(eq, c, N):
            k = pole_order(D, p)
            if k < 0:
                reports.append(PoleReport(p, -k))
    return reports


def ramification_total(eq, N=None):
    """Sum of (e - 1) over geometric places above the branch locus and infinity."""
    N = N if N is not None else 4
    return sum((p.e - 1) * p.degree for p in all_places(eq, N))


def genus(eq, N=None):
    n = eq.degS
    total = ramification_total(eq, N)
    two_g = total - 2 * n + 2
    if two_g < 0:
        # an irreducible curve has g >= 0: the curve splits over a finite extension
        raise Reducible(
            f"equation is reducible over an algebraic extension (ramification total {total} "
            f"for degree {n} gives negative genus)"
        )
    if two_g % 2:
        raise ArithmeticError(f"odd ramification total {total} for degree {n}")
    return two_g // 2


__all__ = [
    "Derivation",
    "FunctionFieldElement",
    "PoleReport",
    "derivation",
    "find_poles",
    "genus",
    "local_vector_field",
    "pole_order",
    "default_truncation",
    "base_field",
]
