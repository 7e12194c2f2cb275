"""Truncated Puiseux series with exact (or complex float) coefficients.

A series over the field ``K`` in the variable ``x`` is stored densely in
units of ``1/m``: ``coeffs[k]`` is the coefficient of ``x^((val + k)/m)``.
``prec`` is the exclusive bound (same units) below which every coefficient
is known; ``None`` marks an exact, finite series.
"""

from fractions import Fraction
from math import gcd, lcm

from flint import fmpq, fmpq_poly

from .algebra.fields import QQ
from .errors import DivisionByZeroSeries, TruncationTooSmall, UnsupportedExtension


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class PuiseuxSeries:
    __slots__ = ("K", "m", "val", "coeffs", "prec", "var")

    def __init__(self, K, coeffs, val=0, m=1, prec=None, var="u"):
        coeffs = list(coeffs)
        # strip leading zeros
        k = 0
        while k < len(coeffs) and K.is_zero(coeffs[k]):
            k += 1
        coeffs = coeffs[k:]
        val += k
        if prec is not None:
            coeffs = coeffs[: max(0, prec - val)]
        while coeffs and K.is_zero(coeffs[-1]):
            coeffs.pop()
        if not coeffs:
            val = prec if prec is not None else 0
        self.K = K
        self.coeffs = coeffs
        self.val = val
        self.m = m
        self.prec = prec
        self.var = var
        self._minimize()

    def _minimize(self):
        if self.m == 1:
            return
        g = self.m
        if self.prec is not None:
            g = gcd(g, self.prec)
        if self.coeffs:
            g = gcd(g, self.val)
            for k, c in enumerate(self.coeffs):
                if g == 1:
                    break
                if not self.K.is_zero(c):
                    g = gcd(g, self.val + k)
        else:
            g = gcd(g, self.val)
        if g > 1:
            self.coeffs = self.coeffs[::g]
            self.val //= g
            self.m //= g
            if self.prec is not None:
                self.prec //= g

    # construction ---------------------------------------------------------
    @classmethod
    def from_terms(cls, K, terms, prec=None, var="u"):
        """``terms``: mapping exponent (Fraction/int) -> coefficient."""
        terms = {Fraction(e): K(c) for e, c in terms.items()}
        m = 1
        for e in terms:
            m = lcm(m, e.denominator)
        if prec is not None:
            prec = Fraction(prec)
            m = lcm(m, prec.denominator)
        if not terms:
            p = None if prec is None else int(prec * m)
            return cls(K, [], 0, m, p, var)
        idx = {int(e * m): c for e, c in terms.items()}
        lo, hi = min(idx), max(idx)
        coeffs = [idx.get(k, K.zero) for k in range(lo, hi + 1)]
        p = None if prec is None else int(prec * m)
        return cls(K, coeffs, lo, m, p, var)

    @classmethod
    def monomial(cls, K, c, exp=0, var="u"):
        return cls.from_terms(K, {Fraction(exp): c}, var=var)

    @classmethod
    def zero(cls, K, prec=None, var="u"):
        return cls(K, [], 0, 1, prec, var)

    def _like(self, coeffs, val, m=None, prec="same"):
        return PuiseuxSeries(
            self.K, coeffs, val, self.m if m is None else m, self.prec if prec == "same" else prec, self.var
        )

    # basic queries -----------------------------------------------------------
    @property
    def ramification(self):
        return self.m

    @property
    def precision(self):
        """Exclusive exponent bound (Fraction) or None for exact series."""
        return None if self.prec is None else Fraction(self.prec, self.m)

    def is_exact(self):
        return self.prec is None

    def is_zero(self):
        return not self.coeffs

    def valuation(self):
        """Exponent of the leading term; None if the series is zero to its precision."""
        if not self.coeffs:
            return None
        return Fraction(self.val, self.m)

    def leading(self):
        if not self.coeffs:
            raise DivisionByZeroSeries("series vanishes to its precision")
        return Fraction(self.val, self.m), self.coeffs[0]

    def coefficient(self, exp):
        exp = Fraction(exp)
        k = exp * self.m
        if k.denominator != 1:
            return self.K.zero
        k = int(k)
        if self.prec is not None and k >= self.prec:
            raise TruncationTooSmall(f"coefficient of exponent {exp} beyond precision {self.precision}")
        i = k - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.K.zero

    def terms(self):
        """Nonzero terms as ``[(exponent, coefficient), ...]`` sorted by exponent."""
        return [
            (Fraction(self.val + k, self.m), c) for k, c in enumerate(self.coeffs) if not self.K.is_zero(c)
        ]

    def relative_precision(self):
        if self.prec is None:
            return None
        return self.prec - self.val

    def certified_order(self, extra=3):
        """Leading exponent, accepted only with ``extra`` known terms beyond it."""
        if not self.coeffs:
            raise TruncationTooSmall("series vanishes to its precision")
        if self.prec is not None and self.prec - self.val < extra + 1:
            raise TruncationTooSmall(
                f"only {self.prec - self.val} coefficients known from the leading term; need {extra + 1}"
            )
        return Fraction(self.val, self.m)

    # ramification changes -----------------------------------------------------
    def lift(self, k):
        """Same series with ramification ``m*k`` (not minimized)."""
        if k == 1:
            return self
        coeffs = []
        for c in self.coeffs:
            coeffs.append(c)
            coeffs.extend([self.K.zero] * (k - 1))
        if coeffs:
            coeffs = coeffs[: len(coeffs) - (k - 1)]
        out = object.__new__(PuiseuxSeries)
        out.K = self.K
        out.coeffs = coeffs
        out.val = self.val * k
        out.m = self.m * k
        out.prec = None if self.prec is None else self.prec * k
        out.var = self.var
        return out

    def _common(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.monomial(self.K, other, 0, self.var)
        m = lcm(self.m, other.m)
        return self.lift(m // self.m), other.lift(m // other.m), m

    def truncate(self, exp):
        """Drop terms of exponent >= ``exp``."""
        p = Fraction(exp) * self.m
        m = self.m
        if p.denominator != 1:
            m = lcm(m, p.denominator)
            return self.lift(m // self.m).truncate(exp)
        p = int(p)
        return PuiseuxSeries(self.K, self.coeffs, self.val, m, _min_prec(self.prec, p), self.var)

    def with_precision(self, exp):
        return self.truncate(exp)

    def exact(self):
        """Forget the truncation: the stored terms as an exact series."""
        return PuiseuxSeries(self.K, self.coeffs, self.val, self.m, None, self.var)

    # arithmetic ---------------------------------------------------------------
    def __add__(self, other):
        a, b, m = self._common(other)
        prec = _min_prec(a.prec, b.prec)
        if not a.coeffs:
            return PuiseuxSeries(a.K, b.coeffs, b.val, m, prec, a.var)
        if not b.coeffs:
            return PuiseuxSeries(a.K, a.coeffs, a.val, m, prec, a.var)
        lo = min(a.val, b.val)
        hi = max(a.val + len(a.coeffs), b.val + len(b.coeffs))
        if prec is not None:
            hi = min(hi, prec)
        K = a.K
        out = [K.zero] * max(0, hi - lo)
        for k, c in enumerate(a.coeffs):
            i = a.val + k - lo
            if i < len(out):
                out[i] = out[i] + c
        for k, c in enumerate(b.coeffs):
            i = b.val + k - lo
            if i < len(out):
                out[i] = out[i] + c
        return PuiseuxSeries(K, out, lo, m, prec, a.var)

    __radd__ = __add__

    def __neg__(self):
        return self._like([-c for c in self.coeffs], self.val)

    def __sub__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.monomial(self.K, other, 0, self.var)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = self.K(c)
        return self._like([c * a for a in self.coeffs], self.val)

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        a, b, m = self._common(other)
        K = a.K
        if (not a.coeffs and a.prec is None) or (not b.coeffs and b.prec is None):
            return PuiseuxSeries(K, [], 0, m, None, a.var)
        if a.prec is None and b.prec is None:
            prec = None
        elif not a.coeffs or not b.coeffs:
            prec = _min_prec(
                None if a.prec is None else a.prec + (b.val if b.coeffs else b.prec),
                None if b.prec is None else b.prec + (a.val if a.coeffs else a.prec),
            )
            return PuiseuxSeries(K, [], 0, m, prec, a.var)
        else:
            prec = _min_prec(
                None if a.prec is None else a.prec + b.val,
                None if b.prec is None else b.prec + a.val,
            )
        val = a.val + b.val
        n = len(a.coeffs) + len(b.coeffs) - 1
        if prec is not None:
            n = min(n, prec - val)
        if n <= 0:
            return PuiseuxSeries(K, [], 0, m, prec, a.var)
        return PuiseuxSeries(K, _mul_low(K, a.coeffs, b.coeffs, n), val, m, prec, a.var)

    __rmul__ = __mul__

    def inverse(self):
        if not self.coeffs:
            raise DivisionByZeroSeries("inverse of a series that vanishes to its precision")
        K = self.K
        a = self.coeffs
        n = self.relative_precision()
        if n is None:
            if len(a) == 1:
                return self._like([K.one / a[0]], -self.val, prec=None)
            raise DivisionByZeroSeries("inverse of an exact non-monomial series needs a precision")
        inv0 = K.one / a[0]
        b = [inv0]
        for k in range(1, n):
            acc = K.zero
            for j in range(1, min(k, len(a) - 1) + 1):
                if not K.is_zero(a[j]):
                    acc = acc + a[j] * b[k - j]
            b.append(-acc * inv0)
        return self._like(b, -self.val, prec=-self.val + n)

    def inverse_to(self, rel):
        """Inverse of an exact series with ``rel`` terms of relative precision."""
        if self.prec is None:
            return self.truncate(Fraction(self.val + rel, self.m)).inverse()
        return self.inverse()

    def __truediv__(self, other):
        if isinstance(other, PuiseuxSeries):
            return self * other.inverse()
        return self.scale(self.K.one / self.K(other))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = PuiseuxSeries.monomial(self.K, self.K.one, 0, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, exp):
        """Multiply by ``x^exp``."""
        exp = Fraction(exp)
        m = lcm(self.m, exp.denominator)
        a = self.lift(m // self.m)
        d = int(exp * m)
        return PuiseuxSeries(a.K, a.coeffs, a.val + d, m, None if a.prec is None else a.prec + d, a.var)

    # calculus -------------------------------------------------------------------
    def deriv(self):
        """d/dx (coefficients treated as constants)."""
        K = self.K
        out = [c * K(fmpq(self.val + k, self.m)) for k, c in enumerate(self.coeffs)]
        return self._like(
            out, self.val - self.m, prec=None if self.prec is None else self.prec - self.m
        )

    def zdiff(self):
        """Apply the coefficient derivation (d/dz through the tower) termwise."""
        return self._like([self.K.diff(c) for c in self.coeffs], self.val)

    def map_coeffs(self, fn, K2=None):
        K2 = K2 or self.K
        return PuiseuxSeries(K2, [fn(c) for c in self.coeffs], self.val, self.m, self.prec, self.var)

    def coerce(self, K2):
        return self.map_coeffs(K2, K2)

    def frac_pow(self, r, root=None):
        """``self^r`` for rational ``r``.

        The leading coefficient needs an ``r``-th power in the field; pass
        ``root`` (with ``root^den(r) = leading``) when it is not rational there.
        """
        r = Fraction(r)
        if r.denominator == 1:
            return self ** int(r)
        if not self.coeffs:
            raise DivisionByZeroSeries("fractional power of a vanishing series")
        K = self.K
        a, b = r.numerator, r.denominator
        c0 = self.coeffs[0]
        if root is None:
            root = _field_root(K, c0, b)
        else:
            root = K(root)
            if not K.is_zero(root**b - c0):
                raise ValueError("supplied root does not match the leading coefficient")
        h = [c * (K.one / c0) for c in self.coeffs]
        n = self.relative_precision()
        if n is None:
            if len(h) == 1:
                n = 1
            else:
                raise DivisionByZeroSeries("fractional power of an exact non-monomial series needs a precision")
        g = _miller_power(K, h, r, n)
        lead = root**a
        # exponents: val*r/m + k/m  ->  units of 1/(m*b)
        m2 = self.m * b
        coeffs = []
        for c in g:
            coeffs.append(c * lead)
            coeffs.extend([K.zero] * (b - 1))
        val2 = self.val * a
        prec2 = None if self.prec is None else val2 + n * b
        return PuiseuxSeries(K, coeffs, val2, m2, prec2, self.var)

    # composition (ordinary Laurent series only) ----------------------------------
    def compose(self, inner):
        """``self(inner(x))`` for Laurent series with ``inner`` of positive valuation."""
        if self.m != 1 or inner.m != 1:
            raise ValueError("composition is implemented for Laurent series only")
        if not inner.coeffs or inner.val < 1:
            raise ValueError("inner series must have positive valuation")
        K = self.K
        if not self.coeffs:
            p = None if self.prec is None else self.prec * inner.val
            return PuiseuxSeries(K, [], 0, 1, p, inner.var)
        acc = PuiseuxSeries(K, [], 0, 1, None, inner.var)
        for c in reversed(self.coeffs):
            acc = acc * inner + PuiseuxSeries.monomial(K, c, 0, inner.var)
        if self.val:
            inner_rel = inner.relative_precision() or len(self.coeffs) + abs(self.val) + 1
            ip = inner.inverse_to(inner_rel) if self.val < 0 else inner
            acc = acc * (ip ** abs(self.val))
        if self.prec is not None:
            acc = acc.truncate(Fraction(self.prec * inner.val))
        return acc

    def reversion(self):
        """Compositional inverse of a series ``x -> c1 x + ...`` with ``c1 != 0``."""
        if self.m != 1 or self.val != 1:
            raise ValueError("reversion needs a Laurent series of valuation exactly 1")
        K = self.K
        n = self.relative_precision()
        if n is None:
            n = len(self.coeffs)
        c1 = self.coeffs[0]
        x = PuiseuxSeries.monomial(K, K.one, 1, self.var)
        g = x.scale(K.one / c1)
        dphi = self.deriv()
        known = 2
        while True:
            known = min(2 * known, n + 1)
            gt = g.exact()
            resid = self.compose(gt) - x
            g = (gt - resid * dphi.compose(gt).inverse()).truncate(known)
            if known >= n + 1:
                break
        # precision: relative precision of self carries over
        return g.truncate(n + 1)

    # presentation -------------------------------------------------------------
    def fmt(self, var=None):
        var = var or self.var
        parts = []
        for e, c in self.terms():
            cs = self.K.fmt(c)
            if e == 0:
                mono = ""
            elif e == 1:
                mono = f"({var})"
            else:
                mono = f"({var})^({e})" if e.denominator != 1 else f"({var})^{e}"
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs} * {mono}" if _atomic(cs) else f"({cs}) * {mono}")
        if self.prec is not None:
            parts.append(f"O(({var})^({self.precision}))")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __str__ = fmt

    def __repr__(self):
        return f"PuiseuxSeries({self.fmt()})"

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        if self.precision != other.precision:
            return False
        a, b = self.terms(), other.terms()
        return len(a) == len(b) and all(
            ea == eb and self.K.is_zero(self.K(ca) - self.K(cb)) for (ea, ca), (eb, cb) in zip(a, b)
        )

    __hash__ = None


def _atomic(s):
    body = s[1:] if s.startswith("-") else s
    return all(ch not in body for ch in "+- ")


def _mul_low(K, a, b, n):
    if K is QQ:
        p = fmpq_poly(a).mul_low(fmpq_poly(b), n)
        out = [fmpq(c) for c in p.coeffs()]
        return out + [K.zero] * (n - len(out))
    out = [K.zero] * n
    bnz = [(j, c) for j, c in enumerate(b[:n]) if not K.is_zero(c)]
    for i, x in enumerate(a[:n]):
        if K.is_zero(x):
            continue
        for j, y in bnz:
            if i + j >= n:
                break
            out[i + j] = out[i + j] + x * y
    return out


def _miller_power(K, h, r, n):
    """First ``n`` coefficients of ``h^r`` with ``h[0] == 1``."""
    rq = K(fmpq(r.numerator, r.denominator))
    g = [K.one]
    for k in range(1, n):
        acc = K.zero
        for j in range(1, min(k, len(h) - 1) + 1):
            if K.is_zero(h[j]):
                continue
            w = (rq + K.one) * K(j) - K(k)
            acc = acc + w * h[j] * g[k - j]
        g.append(acc * (K.one / K(k)))
    return g


def _field_root(K, c, b):
    """A ``b``-th root of ``c`` inside ``K``."""
    if K.is_zero(c - K.one):
        return K.one
    if not K.is_exact:
        return complex(c) ** (1.0 / b)
    for fac, _ in K.factor([-c] + [K.zero] * (b - 1) + [K.one]):
        if len(fac) == 2:
            return -fac[0]
    raise UnsupportedExtension(f"{K.fmt(c)} has no {b}-th root in the coefficient field")
