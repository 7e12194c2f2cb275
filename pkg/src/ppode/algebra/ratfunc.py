"""Rational functions in ``z`` over Q, backed by flint's ``fmpq_poly``."""

from flint import fmpq, fmpq_poly

_ONE = fmpq_poly([1])
Z = fmpq_poly([0, 1])


def _as_poly(x):
    if isinstance(x, fmpq_poly):
        return x
    return fmpq_poly([x])


class RatFunc:
    """Reduced fraction ``num/den`` with ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        num = _as_poly(num)
        if den is None:
            self.num, self.den = num, _ONE
            return
        den = _as_poly(den)
        if not _reduced:
            if den == 0:
                raise ZeroDivisionError("rational function with zero denominator")
            if num == 0:
                self.num, self.den = num, _ONE
                return
            g = num.gcd(den)
            if g != 1:
                num = num // g
                den = den // g
            lc = den[den.degree()]
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num, self.den = num, den

    @classmethod
    def coerce(cls, x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, fmpq, fmpq_poly)):
            return cls(x)
        return NotImplemented

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = RatFunc.coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = RatFunc.coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = RatFunc.coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = RatFunc.coerce(other)
        if other is NotImplemented:
            return other
        if self.den == 1 and other.den == 1:
            return RatFunc(self.num * other.num, _ONE, _reduced=True)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num == 0:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = RatFunc.coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = RatFunc.coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num**n, self.den**n, _reduced=True)

    def __eq__(self, other):
        other = RatFunc.coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def __bool__(self):
        return self.num != 0

    # calculus / evaluation ----------------------------------------------
    def diff(self):
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def is_constant(self):
        return self.den == 1 and self.num.degree() <= 0

    def constant_value(self):
        return self.num[0] if self.num != 0 else fmpq(0)

    def __call__(self, z0):
        d = self.den(z0)
        if d == 0:
            raise ZeroDivisionError(f"pole at z = {z0}")
        return self.num(z0) / d

    def taylor(self, z0, order):
        """Coefficients of the expansion in ``z - z0`` below ``order``."""
        shift = fmpq_poly([z0, 1])
        n = self.num(shift)
        d = self.den(shift)
        if d[0] == 0:
            raise ZeroDivisionError(f"pole at z = {z0}")
        out = []
        inv0 = 1 / d[0]
        nc = [n[i] for i in range(order)]
        dc = [d[i] for i in range(order)]
        for k in range(order):
            acc = nc[k]
            for j in range(1, k + 1):
                acc -= dc[j] * out[k - j]
            out.append(acc * inv0)
        return out

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        num = poly_str(self.num)
        if self.den == 1:
            return num
        return f"({num})/({poly_str(self.den)})"


def poly_str(p, var="z"):
    """Render an ``fmpq_poly`` with ``^`` powers and explicit ``*``."""
    if p == 0:
        return "0"
    parts = []
    for k in range(p.degree(), -1, -1):
        c = p[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if k == 0:
            body = str(a)
        else:
            mon = var if k == 1 else f"{var}^{k}"
            body = mon if a == 1 else f"{a}*{mon}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
