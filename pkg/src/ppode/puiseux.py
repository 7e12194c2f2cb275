"""Places of the curve ``f(s, t) = 0`` above a center of the t-line.

Expansions follow the rational Newton-polygon scheme: every edge of the
polygon is processed, each irreducible factor of its edge polynomial spawns
one branch, and new constants are adjoined as simple algebraic extensions
only when a factor is not linear.  A branch therefore comes out as

    t = t0 + gamma * u^e    (or  t = 1 / (gamma * u^e)  above infinity)
    s = Laurent series in u

with ``gamma`` and the coefficients in a finite extension of the base field.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

from flint import fmpq_poly

from .algebra import polys, upoly
from .algebra.ratfunc import RatFunc
from .algebra.fields import QQ, QQz, AlgebraicField, poly_to_str
from .algebra.roots import check_radical_tower
from .series import PuiseuxSeries


def base_field(eq):
    return QQ if eq.autonomous else QQz


def default_truncation(eq):
    return 2 * eq.degS * eq.degT + 6


# ---------------------------------------------------------------------------
# centers


@dataclass(frozen=True, eq=False)
class Center:
    """A closed point of the t-line: an irreducible factor over the base
    field, or infinity.  ``value`` lives in ``field``."""

    base: object
    factor: list | None
    field: object
    value: object

    @property
    def is_infinite(self):
        return self.factor is None

    @property
    def degree(self):
        return 1 if self.factor is None else len(self.factor) - 1

    def exact_str(self):
        if self.is_infinite:
            return "oo"
        if self.degree == 1:
            return self.base.fmt(self.value)
        return f"RootOf({poly_to_str(self.base, self.factor, 'T')})"

    def approx(self):
        """Numeric values of all conjugates (autonomous equations only)."""
        if self.is_infinite or self.base.is_function_field:
            return []
        if self.degree == 1:
            return [self.base.approx(self.value)]
        return [emb[-1] for emb in self.field.embeddings()]

    def __repr__(self):
        return f"Center({self.exact_str()})"


INFINITY = "oo"


def finite_center(K, factor):
    factor = upoly.monic(K, upoly.trim(K, [K(c) for c in factor]))
    if len(factor) == 2:
        return Center(K, factor, K, -factor[0])
    if K.is_function_field:
        check_radical_tower(factor)
    L = AlgebraicField(K, factor, name="t0")
    return Center(K, factor, L, L.gen)


def rational_center(K, value):
    return finite_center(K, [-K(value), K.one])


def infinite_center(K):
    return Center(K, None, K, None)


def _dense_in_T(K, p):
    """A MultiPoly in T (and z) as a dense list over K."""
    out = {}
    for (i, j, k), c in polys.term_dict(p).items():
        if i:
            raise ValueError("unexpected S in a polynomial in T")
        out.setdefault(j, {})[k] = c
    top = max(out) if out else -1
    dense = []
    for j in range(top + 1):
        d = out.get(j, {})
        kk = max(d) if d else 0
        rf = RatFunc(fmpq_poly([d.get(k, 0) for k in range(kk + 1)]))
        dense.append(K(rf) if K is QQ else rf)
    return upoly.trim(K, dense)


def candidate_centers(eq):
    """Centers where the derivation may have a pole: roots of res_S(f, f_S)
    (one per irreducible factor) and infinity."""
    K = base_field(eq)
    R = polys.resultant(eq.f, polys.poly_partial(eq.f, "S"), "S")
    dense = _dense_in_T(K, R)
    out = [finite_center(K, fac) for fac, _ in K.factor(dense)]
    out.sort(key=lambda c: (c.degree, c.exact_str()))
    out.append(infinite_center(K))
    return out


# ---------------------------------------------------------------------------
# places


@dataclass(frozen=True, eq=False)
class Place:
    """One closed place: ``degree`` conjugate geometric places of index ``e``."""

    eq: object
    center: Center
    e: int
    field: object
    t: PuiseuxSeries
    s: PuiseuxSeries
    truncation: int
    residue_degree: int = 1
    reparametrized: bool = False
    index: int = 0

    @property
    def degree(self):
        return self.center.degree * self.residue_degree

    @property
    def is_infinite(self):
        return self.center.is_infinite

    def s_value(self):
        """Exact value of s at the place, or ``oo``."""
        v = self.s.valuation()
        if v is not None and v < 0:
            return "oo"
        if v is None or v > 0:
            return "0"
        return self.field.fmt(self.s.coeffs[0])

    def s_approx(self):
        v = self.s.valuation()
        if v is not None and v < 0:
            return None
        if v is None or v > 0:
            return 0j
        if self.field.is_function_field:
            return None
        return self.field.approx(self.s.coeffs[0])

    def reparametrize(self, w):
        """Same place in the local parameter ``w`` (a series in ``u`` of order 1)."""
        if w.is_exact():
            w = w.truncate(w.val + self.truncation + 1)
        inv = w.reversion()
        t = self.t.compose(inv) if not self.t.is_exact() or self.t.val >= 0 else _compose_laurent(self.t, inv)
        s = _compose_laurent(self.s, inv)
        return Place(
            self.eq, self.center, self.e, self.field, t, s, self.truncation,
            self.residue_degree, True, self.index,
        )

    def describe(self):
        return f"t = {self.center.exact_str()}, s = {self.s_value()}, e = {self.e}"

    def __repr__(self):
        return f"Place({self.describe()})"


def _compose_laurent(a, inner):
    if a.val >= 0:
        return a.compose(inner)
    rel = a.relative_precision()
    if rel is None:
        rel = len(a.coeffs) + 1
    # a = u^v * b with b a power series
    b = a.shift(-a.valuation())
    ib = inner.truncate(inner.val + rel) if inner.prec is None else inner
    return b.compose(inner) * (ib.inverse() ** (-a.val))


@dataclass
class _Branch:
    field: object
    e: int
    gamma: object
    lead: int  # u-valuation of the S expansion
    build: object  # precision -> PuiseuxSeries for S


def local_equation(eq, center):
    """``F(S, x)`` with ``x = t - t0`` (finite) or ``x = 1/t`` as {(i, j): coeff}."""
    K = center.base
    L = center.field
    coeffs = polys.t_coefficients(eq.f)
    F = {}
    if center.is_infinite:
        n = eq.degT
        for (i, j), c in coeffs.items():
            F[(i, n - j)] = L(K(c) if K is QQ else c)
        return F
    t0 = center.value
    pw = [L.one]
    for _ in range(eq.degT):
        pw.append(pw[-1] * t0)
    for (i, j), c in coeffs.items():
        c = L(K(c) if K is QQ else c)
        for k in range(j + 1):
            term = c * pw[j - k] * comb(j, k)
            F[(i, k)] = F[(i, k)] + term if (i, k) in F else term
    return {key: v for key, v in F.items() if not L.is_zero(v)}


def _lower_hull(F):
    lowest = {}
    for i, j in F:
        if i not in lowest or j < lowest[i]:
            lowest[i] = j
    pts = sorted(lowest.items())
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _bezout(m, q):
    """(alpha, beta) with alpha*q - beta*m = 1 and 0 <= beta < q."""
    if q == 1:
        return 1, 0
    beta = (-pow(m, -1, q)) % q
    alpha = (1 + beta * m) // q
    return alpha, beta


def _branches(F, L, top):
    hull = _lower_hull(F)
    out = []
    if not top and hull and hull[0][0] > 0:
        # F(x, 0) == 0: S = 0 is an exact root
        out.append(_Branch(L, 1, L.one, None, lambda P, L=L: PuiseuxSeries(L, [], 0, 1, None)))
    for (i1, j1), (i2, j2) in zip(hull, hull[1:]):
        num, den = j1 - j2, i2 - i1
        if not top and num <= 0:
            continue
        g = gcd(abs(num), den)
        m, q = num // g, den // g
        phi = [F.get((i1 + q * k, j1 - m * k), L.zero) for k in range((i2 - i1) // q + 1)]
        alpha, beta = _bezout(m, q)
        for fac, mu in L.factor(phi):
            if len(fac) == 2:
                L1, xi = L, -fac[0]
            else:
                if L.is_function_field:
                    check_radical_tower(fac)
                L1 = AlgebraicField(L, fac)
                xi = L1.gen
            out.extend(_descend(F, L1, xi, m, q, alpha, beta, mu))
    return out


def _descend(F, L1, xi, m, q, alpha, beta, mu):
    xa = xi**alpha if alpha >= 0 else (L1.one / xi) ** (-alpha)
    xb = xi**beta
    shift = min(m * i + q * j for i, j in F)
    F1 = {}
    xb_pows = {}
    for (i, j), a in F.items():
        if j not in xb_pows:
            xb_pows[j] = xb**j
        base = L1(a) * xb_pows[j]
        v = m * i + q * j - shift
        for k in range(i + 1):
            c = base * comb(i, k) * xa ** (i - k)
            if L1.is_zero(c):
                continue
            F1[(k, v)] = F1[(k, v)] + c if (k, v) in F1 else c
    F1 = {key: c for key, c in F1.items() if not L1.is_zero(c)}
    if mu == 1:
        children = [_Branch(L1, 1, L1.one, 0, lambda P, F1=F1, L1=L1: _newton(F1, L1, P))]
    else:
        children = _branches(F1, L1, False)
    out = []
    for ch in children:
        L2 = ch.field
        g2 = ch.gamma
        gm = g2**m if m >= 0 else (L2.one / g2) ** (-m)
        lead = m * ch.e
        mono = PuiseuxSeries.monomial(L2, gm, lead)
        xa2 = L2(xa)

        def build(P, ch=ch, mono=mono, xa2=xa2, lead=lead, L2=L2):
            inner = ch.build(P - lead)
            return mono * (inner + PuiseuxSeries.monomial(L2, xa2, 0))

        out.append(_Branch(L2, q * ch.e, L2(xb) * g2**q, lead, build))
    return out


def _newton(F1, L, P):
    """Root ``sigma(u)`` with sigma(0) = 0 of F1(sigma, u) = 0, to precision P."""
    if P <= 1:
        return PuiseuxSeries(L, [], 0, 1, max(P, 0))
    rows = {}
    for (i, j), c in F1.items():
        rows.setdefault(i, {})[j] = c
    A = {}
    for i, d in rows.items():
        top = max(d)
        A[i] = PuiseuxSeries(L, [d.get(j, L.zero) for j in range(top + 1)], 0, 1, None)
    degS = max(A)
    dA = {i - 1: a.scale(L(i)) for i, a in A.items() if i > 0}
    if 0 not in dA or L.is_zero(dA[0].coefficient(0)):
        raise ArithmeticError("Newton step on a singular branch")

    def horner(coef, sig, deg, prec):
        acc = PuiseuxSeries(L, [], 0, 1, None)
        for i in range(deg, -1, -1):
            acc = (acc * sig).truncate(prec)
            if i in coef:
                acc = acc + coef[i]
        return acc.truncate(prec)

    sigma = PuiseuxSeries(L, [], 0, 1, None)
    known = 1
    while known < P:
        known = min(2 * known, P)
        val = horner(A, sigma, degS, known)
        der = horner(dA, sigma, degS - 1, known)
        sigma = (sigma - val * der.inverse()).truncate(known).exact()
    return sigma.truncate(P)


def places_above(eq, center, N=None):
    """All places above ``center`` with s expanded to ``N`` terms."""
    N = default_truncation(eq) if N is None else N
    F = local_equation(eq, center)
    L = center.field
    out = []
    for idx, br in enumerate(_branches(F, L, True)):
        Lp = br.field
        s = br.build(br.lead + N)
        if center.is_infinite:
            t = PuiseuxSeries.monomial(Lp, Lp.one / br.gamma, -br.e)
        else:
            t = PuiseuxSeries.from_terms(Lp, {0: center.value, br.e: br.gamma})
        rdeg = Lp.degree // L.degree
        out.append(Place(eq, center, br.e, Lp, t, s, N, rdeg, False, idx))
    return out


def all_places(eq, N=None):
    return [p for c in candidate_centers(eq) for p in places_above(eq, c, N)]


# ---------------------------------------------------------------------------
# substitution and arithmetic


def series_substitute(f, s, t, K, z=None, N=None):
    """``f(s, t, z)`` for series ``s``, ``t``; returns the composed series.

    Coefficients of ``f`` are read in ``K`` unless ``z`` (a series for z) is
    given, in which case they are expanded as polynomials in it.  With ``N``
    the inputs are first truncated at exponent ``N``.  The result's
    ``precision`` is the guaranteed-valid order.
    """
    if N is not None:
        s = s.truncate(N)
        t = t.truncate(N)
    coeffs = polys.t_coefficients(f)
    degS = polys.degree_in(f, "S")
    degT = polys.degree_in(f, "T")
    spow = [PuiseuxSeries.monomial(s.K, s.K.one, 0, s.var)]
    for _ in range(degS):
        spow.append(spow[-1] * s)
    tpow = [PuiseuxSeries.monomial(t.K, t.K.one, 0, t.var)]
    for _ in range(degT):
        tpow.append(tpow[-1] * t)
    acc = PuiseuxSeries.zero(s.K, var=s.var)
    for (i, j), c in coeffs.items():
        if z is not None:
            cs = _poly_in_series(c, z)
        else:
            cs = K(c) if K is QQ else c
        acc = acc + spow[i] * tpow[j] * cs
    return acc


def _poly_in_series(c, z):
    """A rational function of z evaluated at a series ``z``."""
    K = z.K
    num = c.num
    den = c.den

    def ev(p):
        acc = PuiseuxSeries.zero(K, var=z.var)
        for k in range(p.degree(), -1, -1):
            acc = acc * z + PuiseuxSeries.monomial(K, K(p[k]), 0, z.var)
        return acc
    out = ev(num)
    if den.degree() > 0:
        out = out * ev(den).inverse()
    elif den[0] != 1:
        out = out.scale(K.one / K(den[0]))
    return out


def series_arith(a, b=None, op="add", exponent=None, root=None):
    """Dispatch for the series operations used by the analysis."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "invert":
        return a.inverse()
    if op == "derive-in-z":
        return a.zdiff()
    if op == "derive":
        return a.deriv()
    if op == "fractional-power":
        return a.frac_pow(Fraction(exponent), root)
    raise ValueError(f"unknown series operation {op!r}")


__all__ = [
    "Center",
    "Place",
    "all_places",
    "base_field",
    "candidate_centers",
    "default_truncation",
    "finite_center",
    "infinite_center",
    "places_above",
    "rational_center",
    "series_arith",
    "series_substitute",
]
