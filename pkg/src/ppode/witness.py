"""Branched series solutions certifying that a pole of D is a movable
branch point.

At a place where ``D(u)`` has a pole of order ``m - 1`` the function
``D(u^m) = m u^(m-1) D(u)`` is a unit power series.  Along a solution,
``h = u`` satisfies ``(h^m)' = g(z - z1, h)``; the local solution
``h = c (z - z1)^(1/m) + ...`` with ``c^m = g(0, 0)`` comes from a
coefficient recurrence, and ``y = t(h)`` is the branched witness.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np
from flint import fmpq

from .algebra.fields import QQ, AlgebraicField, ComplexField, base_roots_numeric, polish_roots
from .algebra.ratfunc import RatFunc
from .errors import BadBasePoint, LeadingTermVanishes, TruncationTooSmall, UnsupportedExtension
from .puiseux import places_above, series_substitute
from .series import PuiseuxSeries
from .vectorfield import derivation, local_vector_field

NUMERIC_TOL = 1e-9


# ---------------------------------------------------------------------------
# specialization of coefficient towers at z = z1 + zeta


class Specialization:
    """Ring map from a tower over Q(z) (or Q) to power series in
    ``zeta = z - z1`` over a tower of Q, truncated at ``order``.

    Each generator is sent to the Newton lift of a simple root of its
    specialized minimal polynomial; linear factors are preferred so that
    rational data stays rational.
    """

    def __init__(self, L, z1, order, numeric=False):
        self.z1 = fmpq(z1) if not isinstance(z1, fmpq) else z1
        self.order = order
        self.numeric = numeric
        self.source = L
        self._gens = {}
        chain = L.chain()
        ground = chain[0]
        self.function_field = ground.is_function_field
        if numeric:
            self.target = ComplexField(NUMERIC_TOL)
        elif self.function_field:
            self.target = QQ
        else:
            self.target = L
        if not self.function_field:
            return
        for K in chain[1:]:
            self._adjoin(K)

    def _adjoin(self, K):
        P = [self(c) for c in K.minpoly]
        E = self.target
        P0 = [p.coefficient(0) if not p.is_zero() else E.zero for p in P]
        if self.numeric:
            roots = np.roots([complex(c) for c in reversed(P0)])
            roots = polish_roots([complex(c) for c in P0], roots)
            roots.sort(key=lambda r: (round(r.real, 9), round(r.imag, 9)))
            r0, E1 = roots[0], E
        else:
            facs = E.factor(P0)
            facs.sort(key=lambda fm: len(fm[0]))
            fac, mult = facs[0]
            if mult > 1:
                raise BadBasePoint(f"repeated root of a specialized minimal polynomial at z = {self.z1}")
            if len(fac) == 2:
                r0, E1 = -fac[0], E
            else:
                E1 = AlgebraicField(E, fac)
                r0 = E1.gen
        dP0 = sum((E1(P0[k]) * k * r0 ** (k - 1) for k in range(1, len(P0))), E1.zero)
        if E1.is_zero(dP0):
            raise BadBasePoint(f"specialized minimal polynomial has a multiple root at z = {self.z1}")
        self.target = E1
        Ps = [p.coerce(E1) for p in P]
        X = PuiseuxSeries(E1, [r0], 0, 1, None, "zeta")
        known = 1
        while known < self.order:
            known = min(2 * known, self.order)
            val = _horner(Ps, X, known)
            der = _horner([p.scale(E1(k)) for k, p in enumerate(Ps)][1:], X, known)
            X = (X - val * der.inverse()).truncate(known).exact()
        self._gens[id(K)] = X.truncate(self.order)

    def __call__(self, a):
        E = self.target
        order = self.order
        if isinstance(a, RatFunc):
            try:
                coeffs = a.taylor(self.z1, order)
            except ZeroDivisionError:
                raise BadBasePoint(f"coefficient {a} has a pole at z = {self.z1}") from None
            return PuiseuxSeries(E, [E(c) for c in coeffs], 0, 1, order, "zeta")
        if isinstance(a, (int, fmpq)):
            return PuiseuxSeries(E, [E(a)], 0, 1, order, "zeta")
        K = a.field
        if not self.function_field:
            c = K.approx(a) if self.numeric else a
            return PuiseuxSeries(E, [E(c)], 0, 1, order, "zeta")
        X = self._gens[id(K)].coerce(E)
        acc = PuiseuxSeries(E, [], 0, 1, None, "zeta")
        for c in reversed(a.c):
            acc = (acc * X).truncate(order) + self(c).coerce(E)
        return acc.truncate(order)


def _horner(P, X, prec):
    acc = PuiseuxSeries(X.K, [], 0, 1, None, X.var)
    for p in reversed(P):
        acc = (acc * X).truncate(prec) + p
    return acc.truncate(prec)


# ---------------------------------------------------------------------------
# the local equation (h^m)' = g(zeta, h)


@dataclass
class LocalEquation:
    """``g(zeta, w) = sum coeffs[(j, k)] zeta^j w^k`` known for
    ``j < zeta_order`` and ``k < w_order``."""

    K: object
    coeffs: dict
    zeta_order: int
    w_order: int

    def at(self, j, k):
        if j >= self.zeta_order or k >= self.w_order:
            raise TruncationTooSmall(f"coefficient zeta^{j} w^{k} of g not computed")
        return self.coeffs.get((j, k), self.K.zero)

    def g00(self):
        return self.at(0, 0)

    def coerce(self, K2):
        return LocalEquation(K2, {key: K2(c) for key, c in self.coeffs.items()}, self.zeta_order, self.w_order)

    @classmethod
    def from_function(cls, K, fn, zeta_order, w_order):
        coeffs = {}
        for j in range(zeta_order):
            for k in range(w_order):
                c = K(fn(j, k))
                if not K.is_zero(c):
                    coeffs[(j, k)] = c
        return cls(K, coeffs, zeta_order, w_order)


def root_choices(K, value, m):
    """The ``m`` roots of ``c^m = value`` as (field, c) pairs in a fixed order."""
    if K.is_zero(value):
        raise LeadingTermVanishes("g(0, 0) = 0")
    if not K.is_exact:
        v = complex(value)
        roots = [abs(v) ** (1 / m) * np.exp(1j * (np.angle(v) + 2 * np.pi * k) / m) for k in range(m)]
        return [(K, complex(r)) for r in _order(roots)]
    out = []
    poly = [-value] + [K.zero] * (m - 1) + [K.one]
    for fac, _ in K.factor(poly):
        if len(fac) == 2:
            out.append((K, -fac[0], K.approx(-fac[0]) if not K.is_function_field else 0))
            continue
        for r in base_roots_numeric(K, fac):
            E = AlgebraicField(K, fac, approx_value=r)
            out.append((E, E.gen, r))
    out.sort(key=lambda x: _key(x[2]))
    return [(E, c) for E, c, _ in out]


def _key(r):
    r = complex(r)
    return (-round(r.real, 9), -round(r.imag, 9))


def _order(roots):
    return sorted(roots, key=_key)


def lemma_series(m, g, c, N):
    """``y = sum_{i=1..N} c_i zeta^(i/m)`` solving ``(y^m)' = g(zeta, y)``.

    ``c`` is either a root of ``c^m = g(0, 0)`` (in ``g.K`` or an extension)
    or an integer selecting one from :func:`root_choices`.  Each new
    coefficient is fixed by ``m c^(m-1) c_a = (m/n) R_(a-1) - [rest of Y_n]``
    with ``n = a + m - 1``.
    """
    if m < 2:
        raise ValueError("ramification m must exceed 1")
    K = g.K
    g00 = g.g00()
    if K.is_zero(g00):
        raise LeadingTermVanishes("g(0, 0) = 0: no branched solution through this point")
    if isinstance(c, int):
        E, c = root_choices(K, g00, m)[c]
    else:
        E = c.field if hasattr(c, "field") and isinstance(getattr(c, "field"), AlgebraicField) else K
        if not E.is_zero(E(c) ** m - E(g00)):
            raise ValueError("c^m does not match g(0, 0)")
    if E is not K:
        g = g.coerce(E)
    c = E(c)
    coeffs = [E.zero, c]  # coefficient of x^i, x = zeta^(1/m)
    denom = E(m) * c ** (m - 1)
    inv_denom = E.one / denom
    for a in range(2, N + 1):
        n = a + m - 1
        y = PuiseuxSeries(E, coeffs, 0, 1, None, "x")
        # R_(a-1): coefficient of x^(a-1) in g(x^m, y)
        R = E.zero
        ypow = PuiseuxSeries(E, [E.one], 0, 1, None, "x")
        for k in range(a):
            if k:
                ypow = (ypow * y).truncate(a)
            for j in range((a - 1 - k) // m + 1):
                gjk = g.at(j, k)
                if E.is_zero(gjk):
                    continue
                R = R + gjk * ypow.coefficient(a - 1 - m * j) if ypow.val <= a - 1 - m * j else R
        Yn = (y**m).truncate(n + 1).coefficient(n)
        rhs = R * E(fmpq(m, n)) - Yn
        coeffs.append(rhs * inv_denom)
    return PuiseuxSeries(E, coeffs, 0, m, N + 1, "zeta")


# ---------------------------------------------------------------------------
# witnesses


@dataclass
class BranchWitness:
    base_point: object
    m: int
    y: PuiseuxSeries
    h: PuiseuxSeries
    residual_order: object
    target: object
    leading: tuple  # (exponent, coefficient) of the first branched term
    c: object
    numeric: bool = False
    notes: list = field(default_factory=list)

    @property
    def field(self):
        return self.y.K

    def passed(self):
        return self.residual_order >= self.target

    def leading_exact(self):
        e, c = self.leading
        return self.y.K.fmt(c)

    def leading_approx(self):
        e, c = self.leading
        K = self.y.K
        return complex(c) if not K.is_exact else K.approx(c)


def _local_g(eq, pole, z1, n_terms, numeric):
    """Specialized ``g(zeta, w)`` with enough terms for ``n_terms`` of h."""
    m = pole.pole_order + 1
    place = pole.place
    D = derivation(eq)
    trunc = place.truncation
    while True:
        a = local_vector_field(D, place)
        G = a.shift(m - 1).scale(place.field(m))
        if G.prec is None or G.prec >= n_terms:
            break
        trunc *= 2
        place = places_above(eq, place.center, trunc)[place.index]
    zeta_order = n_terms // m + 2
    spec = Specialization(place.field, z1, zeta_order, numeric=numeric)
    E = spec.target
    coeffs = {}
    for k in range(n_terms):
        ck = G.coefficient(k)
        if place.field.is_zero(ck):
            continue
        ser = spec(ck)
        for j, cj in enumerate(ser.coeffs):
            jj = ser.val + j
            if jj < zeta_order and not E.is_zero(cj):
                coeffs[(jj, k)] = cj
    return LocalEquation(E, coeffs, zeta_order, n_terms), spec, place


def _witness_y(place, spec, h):
    """``y = t(h)`` with t's coefficients specialized."""
    E = h.K
    y = PuiseuxSeries(E, [], 0, 1, None, "zeta")
    for e, c in place.t.terms():
        cs = spec(c).coerce(E)
        k = int(e)
        hp = h**k if k >= 0 else h.inverse() ** (-k)
        y = y + cs * hp
    return y


def branched_witness(eq, pole, z1, N=None, c_choice=0, target=None, numeric=None):
    """Construct and verify a branched solution through a base point ``z1``."""
    m = pole.pole_order + 1
    if m < 2:
        raise ValueError("a witness needs a pole of order at least 1")
    z1 = fmpq(z1) if not isinstance(z1, fmpq) else z1
    if numeric is None:
        try:
            return branched_witness(eq, pole, z1, N, c_choice, target, numeric=False)
        except UnsupportedExtension:
            return branched_witness(eq, pole, z1, N, c_choice, target, numeric=True)
    n_terms = N or 4 * m + 4
    for _ in range(4):
        g, spec, place = _local_g(eq, pole, z1, n_terms, numeric)
        if g.K.is_zero(g.g00()):
            raise BadBasePoint(f"D(u^{m}) vanishes at the place over z = {z1}; no branched solution starts there")
        choices = root_choices(g.K, g.g00(), m)
        E, c = choices[c_choice % len(choices)]
        h = lemma_series(m, g, c, n_terms)
        y = _witness_y(place, spec, h)
        lead = _leading_branched(y)
        if lead is None:
            raise BadBasePoint(f"no branched term in the solution through z = {z1}")
        tgt = lead[0] + Fraction(4, m) if target is None else Fraction(target)
        order = verify_solution(eq, y, z1, numeric=numeric)
        if order >= tgt:
            return BranchWitness(z1, y.m, y, h, order, tgt, lead, c, numeric)
        n_terms *= 2
    raise TruncationTooSmall(f"residual order {order} below target {tgt} at z = {z1}")


def _leading_branched(y):
    for e, c in y.terms():
        if e.denominator != 1:
            return e, c
    return None


def verify_solution(eq, y, z1=0, target=None, numeric=None):
    """Certified order of ``f(y', y, z)`` for ``z = z1 + zeta``.

    Returns the precision of the residual when it vanishes to that
    precision (``inf`` for an exact zero), otherwise the exponent of the
    first non-vanishing term.
    """
    E = y.K
    z = PuiseuxSeries.from_terms(E, {0: E(fmpq(z1) if not isinstance(z1, fmpq) else z1), 1: E.one}, var=y.var)
    r = series_substitute(eq.f, y.deriv(), y, E, z=z)
    if numeric or not E.is_exact:
        scale = max([1.0] + [abs(complex(c)) for c in y.coeffs])
        for e, c in r.terms():
            if abs(complex(c)) > NUMERIC_TOL * scale:
                return e
        return r.precision if r.precision is not None else math.inf
    if r.is_zero():
        return r.precision if r.precision is not None else math.inf
    return r.valuation()


__all__ = [
    "BranchWitness",
    "LocalEquation",
    "Specialization",
    "branched_witness",
    "lemma_series",
    "root_choices",
    "verify_solution",
]
