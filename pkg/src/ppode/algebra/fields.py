"""Coefficient fields: Q, Q(z), complex floats and towers of simple
algebraic extensions over either exact ground field.

Elements of Q are ``flint.fmpq``, elements of Q(z) are :class:`RatFunc`,
tower elements are :class:`AlgElem`.  Every field exposes the same small
protocol used by :mod:`ppode.algebra.upoly` and the series code:
``zero``, ``one``, ``K(x)``, ``is_zero``, ``diff`` (the derivation d/dz),
``factor`` and ``fmt``.
"""

import itertools

import numpy as np
from flint import fmpq, fmpq_poly, fmpq_mpoly_ctx

from ..errors import UnsupportedExtension
from . import upoly
from .ratfunc import RatFunc, poly_str

MAX_TOWER_DEGREE = 64


def to_fmpq(x):
    if isinstance(x, fmpq):
        return x
    if isinstance(x, int):
        return fmpq(x)
    num = getattr(x, "numerator", None)
    den = getattr(x, "denominator", None)
    if num is not None and den is not None:
        return fmpq(int(num), int(den))
    raise TypeError(f"cannot convert {x!r} to a rational")


def fmt_rational(c):
    c = to_fmpq(c)
    return str(c.p) if c.q == 1 else f"{c.p}/{c.q}"


class RationalField:
    """The field Q (the constants of every analysis)."""

    zero = fmpq(0)
    one = fmpq(1)
    degree = 1
    is_function_field = False
    is_exact = True
    depth = 0

    def __call__(self, x):
        if isinstance(x, RatFunc):
            if not x.is_constant():
                raise TypeError(f"{x} is not a constant")
            return x.constant_value()
        if isinstance(x, AlgElem):
            raise TypeError("algebraic element is not rational")
        return to_fmpq(x)

    @property
    def ground(self):
        return self

    def is_zero(self, a):
        return a == 0

    def diff(self, a):
        return self.zero

    def factor(self, p):
        p = upoly.trim(self, p)
        if len(p) <= 1:
            return []
        _, facs = fmpq_poly(p).factor()
        out = []
        for g, mult in facs:
            coeffs = [fmpq(c) for c in g.coeffs()]
            out.append((upoly.monic(self, coeffs), mult))
        return out

    def fmt(self, a):
        return fmt_rational(a)

    def approx(self, a):
        return complex(float(a.p) / float(a.q)) if abs(a.p) < 2**1000 else complex(float(a))

    def contains(self, a):
        return isinstance(a, (int, fmpq))

    def chain(self):
        return [self]

    def __repr__(self):
        return "QQ"


class RationalFunctionField:
    """The field Q(z) with derivation d/dz."""

    zero = RatFunc(0)
    one = RatFunc(1)
    degree = 1
    is_function_field = True
    is_exact = True
    depth = 0

    def __call__(self, x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, fmpq_poly):
            return RatFunc(x)
        if isinstance(x, AlgElem):
            raise TypeError("algebraic element is not in Q(z)")
        return RatFunc(to_fmpq(x))

    @property
    def ground(self):
        return self

    def is_zero(self, a):
        return not a

    def diff(self, a):
        return a.diff()

    def factor(self, p):
        p = upoly.trim(self, p)
        if len(p) <= 1:
            return []
        den = fmpq_poly([1])
        for c in p:
            den = den * c.den // den.gcd(c.den)
        ctx = _xz_context()
        terms = {}
        for k, c in enumerate(p):
            num = c.num * (den // c.den)
            for j in range(num.degree() + 1):
                if num[j] != 0:
                    terms[(k, j)] = num[j]
        poly = ctx.from_dict(terms)
        _, facs = poly.factor()
        out = []
        for g, mult in facs:
            dx = int(g.degrees()[0])
            if dx == 0:
                continue
            coeffs = [dict() for _ in range(dx + 1)]
            for (i, j), c in g.to_dict().items():
                coeffs[int(i)][int(j)] = c
            polys = []
            for d in coeffs:
                top = max(d) if d else 0
                polys.append(RatFunc(fmpq_poly([d.get(j, 0) for j in range(top + 1)])))
            out.append((upoly.monic(self, polys), mult))
        return out

    def fmt(self, a):
        return str(a)

    def contains(self, a):
        return isinstance(a, (int, fmpq, RatFunc))

    def chain(self):
        return [self]

    def __repr__(self):
        return "QQ(z)"


def _xz_context():
    return fmpq_mpoly_ctx.get(("X", "z"), "lex")


class ComplexField:
    """Complex floating point numbers; zero means ``|a| <= tol``."""

    zero = 0j
    one = 1 + 0j
    degree = 1
    is_function_field = False
    is_exact = False
    depth = 0

    def __init__(self, tol=1e-9):
        self.tol = tol

    def __call__(self, x):
        if isinstance(x, fmpq):
            return complex(float(x.p) / float(x.q))
        return complex(x)

    @property
    def ground(self):
        return self

    def is_zero(self, a):
        return abs(a) <= self.tol

    def diff(self, a):
        return self.zero

    def factor(self, p):
        p = upoly.trim(self, p)
        if len(p) <= 1:
            return []
        roots = polish_roots([complex(c) for c in p], np.roots([complex(c) for c in reversed(p)]))
        return [([-r, self.one], 1) for r in roots]

    def fmt(self, a):
        return fmt_complex(a)

    def approx(self, a):
        return complex(a)

    def contains(self, a):
        return isinstance(a, (complex, float, int))

    def chain(self):
        return [self]

    def __repr__(self):
        return "CC"


def fmt_complex(a, digits=15):
    a = complex(a)
    re = float(f"{a.real:.{digits}g}")
    im = float(f"{a.imag:.{digits}g}")
    if im == 0:
        return f"{re:.{digits}g}"
    if re == 0:
        return f"{im:.{digits}g}*I"
    sign = "+" if im > 0 else "-"
    return f"{re:.{digits}g} {sign} {abs(im):.{digits}g}*I"


QQ = RationalField()
QQz = RationalFunctionField()

_names = itertools.count(1)


def reset_generator_names():
    """Restart automatic generator names at ``a1`` (one report per numbering)."""
    global _names
    _names = itertools.count(1)


class AlgebraicField:
    """``base[X]/(minpoly)`` for a monic irreducible ``minpoly`` over ``base``.

    For towers over Q a numeric embedding of the generator is carried in
    ``approx_value`` (consistent with the base field's embedding).
    """

    is_exact = True

    def __init__(self, base, minpoly, name=None, approx_value=None):
        minpoly = upoly.monic(base, upoly.trim(base, [base(c) for c in minpoly]))
        if len(minpoly) < 3:
            raise ValueError("extension of degree < 2 requested")
        self.base = base
        self.minpoly = minpoly
        self.d = len(minpoly) - 1
        self.degree = self.d * base.degree
        self.name = name or f"a{next(_names)}"
        if self.degree > MAX_TOWER_DEGREE:
            raise UnsupportedExtension(
                f"coefficient tower of degree {self.degree} exceeds {MAX_TOWER_DEGREE}",
                minpoly=self.fmt_minpoly(),
            )
        self.depth = base.depth + 1
        self.is_function_field = base.is_function_field
        self.zero = AlgElem(self, (base.zero,) * self.d)
        self.one = AlgElem(self, (base.one,) + (base.zero,) * (self.d - 1))
        self.gen = AlgElem(self, (base.zero, base.one) + (base.zero,) * (self.d - 2))
        # reduction table: X^(d+i) expressed in the power basis
        table = []
        cur = [-c for c in minpoly[:-1]]
        for _ in range(self.d - 1):
            table.append(cur)
            top = cur[-1]
            nxt = [base.zero] + cur[:-1]
            cur = [nxt[j] - top * minpoly[j] for j in range(self.d)]
        self._table = table
        self._gen_diff = None
        self._qz_table = None
        self.approx_value = None
        if not self.is_function_field:
            if approx_value is None:
                approx_value = base_roots_numeric(base, minpoly)[0]
            self.approx_value = complex(approx_value)

    @property
    def ground(self):
        return self.base.ground

    def chain(self):
        return self.base.chain() + [self]

    def is_descendant_of(self, other):
        K = self
        while isinstance(K, AlgebraicField):
            if K is other:
                return True
            K = K.base
        return K is other

    # coercion ----------------------------------------------------------
    def __call__(self, x):
        if isinstance(x, AlgElem):
            if x.field is self:
                return x
            if self.base is not x.field and not isinstance(self.base, AlgebraicField):
                raise TypeError("incompatible algebraic fields")
            return self._embed(self.base(x))
        return self._embed(self.base(x))

    def _embed(self, b):
        return AlgElem(self, (b,) + (self.base.zero,) * (self.d - 1))

    def from_coeffs(self, coeffs):
        coeffs = [self.base(c) for c in coeffs]
        if len(coeffs) > self.d:
            return self._reduce(coeffs)
        return AlgElem(self, tuple(coeffs) + (self.base.zero,) * (self.d - len(coeffs)))

    def _reduce(self, coeffs):
        d = self.d
        out = list(coeffs[:d]) + [self.base.zero] * (d - min(d, len(coeffs)))
        for i in range(len(coeffs) - d):
            c = coeffs[d + i]
            if self.base.is_zero(c):
                continue
            row = self._table[i]
            for j in range(d):
                out[j] = out[j] + c * row[j]
        return AlgElem(self, tuple(out))

    def _mul_over_qz(self, a, b):
        """Product of power-basis vectors over Q(z) with one gcd per output
        coefficient: numerators are combined over a common denominator."""
        d = self.d
        na, da = _common_denominator(a)
        nb, db = _common_denominator(b)
        prod = [None] * (2 * d - 1)
        for i, x in enumerate(na):
            if x == 0:
                continue
            for j, y in enumerate(nb):
                if y == 0:
                    continue
                prod[i + j] = x * y if prod[i + j] is None else prod[i + j] + x * y
        if self._qz_table is None:
            flat = [c for row in self._table for c in row]
            nums, dt = _common_denominator(flat)
            self._qz_table = ([nums[i * d:(i + 1) * d] for i in range(len(self._table))], dt)
        tnums, dt = self._qz_table
        den = da * db * dt
        out = []
        for j in range(d):
            acc = prod[j] * dt if prod[j] is not None else fmpq_poly([])
            for i in range(len(prod) - d):
                if prod[d + i] is not None and tnums[i][j] != 0:
                    acc += prod[d + i] * tnums[i][j]
            out.append(RatFunc(acc, den))
        return AlgElem(self, tuple(out))

    def is_zero(self, a):
        if not isinstance(a, AlgElem):
            return self.base.is_zero(a)
        return all(self.base.is_zero(c) for c in a.c)

    # derivation --------------------------------------------------------
    def gen_diff(self):
        """d/dz of the generator: ``-P^partial(a) / P'(a)``."""
        if self._gen_diff is None:
            if not self.is_function_field:
                self._gen_diff = self.zero
            else:
                P = self.minpoly
                dz = [self.base.diff(c) for c in P]
                dX = upoly.deriv(self.base, P)
                num = upoly.evaluate(self, [self(c) for c in dz], self.gen)
                den = upoly.evaluate(self, [self(c) for c in dX], self.gen)
                self._gen_diff = -(num / den)
        return self._gen_diff

    def diff(self, a):
        if not self.is_function_field:
            return self.zero
        a = self(a)
        B = self.base
        part = self.from_coeffs([B.diff(c) for c in a.c])
        dpoly = [B(i) * a.c[i] for i in range(1, self.d)]
        if any(not B.is_zero(c) for c in dpoly):
            part = part + self.from_coeffs(dpoly) * self.gen_diff()
        return part

    # field operations ---------------------------------------------------
    def norm(self, a):
        """Norm down to ``base``: Res(minpoly, a(X))."""
        a = self(a)
        return upoly.resultant(self.base, self.minpoly, upoly.trim(self.base, list(a.c)))

    def inverse(self, a):
        g, s, _ = upoly.xgcd(self.base, upoly.trim(self.base, list(a.c)), self.minpoly)
        if len(g) != 1:
            raise ZeroDivisionError("inverse of zero algebraic element")
        return self.from_coeffs(s)

    def factor(self, p):
        """Factor over this field (Trager's norm method)."""
        p = upoly.trim(self, [self(c) for c in p])
        if len(p) <= 1:
            return []
        out = []
        for q, mult in upoly.squarefree_decomposition(self, p):
            for h in self._factor_squarefree(q):
                out.append((h, mult))
        return out

    def _factor_squarefree(self, q):
        if len(q) == 2:
            return [upoly.monic(self, q)]
        B = self.base
        for k in _shifts():
            qk = upoly.shift(self, q, -k * self.gen) if k else q
            N = self._poly_norm(qk)
            if upoly.is_squarefree(B, N):
                break
        factors = []
        for Ni, _ in B.factor(N):
            h = upoly.gcd(self, qk, [self(c) for c in Ni])
            if len(h) > 1:
                factors.append(upoly.monic(self, upoly.shift(self, h, k * self.gen) if k else h))
        return factors

    def _poly_norm(self, q):
        """Norm of a polynomial over this field, by evaluation/interpolation."""
        B = self.base
        D = (len(q) - 1) * self.d
        xs = [B(i) for i in range(D + 1)]
        ys = [self.norm(upoly.evaluate(self, q, self(x))) for x in xs]
        return upoly.interpolate(B, xs, ys)

    # numerics / printing ---------------------------------------------------
    def approx(self, a):
        if self.is_function_field:
            raise TypeError("no numeric embedding for extensions of Q(z)")
        a = self(a)
        x = self.approx_value
        acc = 0j
        for c in reversed(a.c):
            acc = acc * x + self.base.approx(c)
        return acc

    def embeddings(self):
        """All complex embeddings as tuples of generator values (bottom first)."""
        if self.is_function_field:
            raise TypeError("no numeric embedding for extensions of Q(z)")
        out = []
        lower = self.base.embeddings() if isinstance(self.base, AlgebraicField) else [()]
        for emb in lower:
            coeffs = [_eval_embedded(self.base, c, emb) for c in self.minpoly]
            roots = polish_roots(coeffs, np.roots(list(reversed(coeffs))))
            for r in roots:
                out.append(emb + (r,))
        return out

    def eval_at(self, a, emb):
        return _eval_embedded(self, self(a), emb)

    def fmt(self, a):
        a = self(a)
        terms = []
        for k, c in enumerate(a.c):
            if self.base.is_zero(c):
                continue
            cs = self.base.fmt(c)
            if k == 0:
                terms.append(cs)
                continue
            mon = self.name if k == 1 else f"{self.name}^{k}"
            if cs == "1":
                terms.append(mon)
            elif cs == "-1":
                terms.append(f"-{mon}")
            elif _is_atomic(cs):
                terms.append(f"{cs}*{mon}")
            else:
                terms.append(f"({cs})*{mon}")
        if not terms:
            return "0"
        out = terms[-1]
        for t in reversed(terms[:-1]):
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def fmt_minpoly(self):
        terms = []
        for k in range(self.d, -1, -1):
            c = self.minpoly[k]
            if self.base.is_zero(c):
                continue
            cs = self.base.fmt(c)
            mon = "" if k == 0 else (self.name if k == 1 else f"{self.name}^{k}")
            if not mon:
                terms.append(cs)
            elif cs == "1":
                terms.append(mon)
            elif cs == "-1":
                terms.append("-" + mon)
            else:
                terms.append(f"({cs})*{mon}" if not _is_atomic(cs) else f"{cs}*{mon}")
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out + " = 0"

    def definitions(self):
        """Minimal polynomial lines for every generator in the tower."""
        out = []
        K = self
        while isinstance(K, AlgebraicField):
            out.append(K.fmt_minpoly())
            K = K.base
        return list(reversed(out))

    def __repr__(self):
        return f"{self.base!r}[{self.name}]"


def _is_atomic(s):
    body = s[1:] if s.startswith("-") else s
    return all(ch not in body for ch in "+- ")


def _eval_embedded(K, a, emb):
    if isinstance(K, AlgebraicField):
        x = emb[K.depth - 1]
        acc = 0j
        for c in reversed(a.c):
            acc = acc * x + _eval_embedded(K.base, c, emb)
        return acc
    return K.approx(a)


def _shifts():
    yield 0
    for k in itertools.count(1):
        yield k
        yield -k


class AlgElem:
    """Element of an :class:`AlgebraicField` in the power basis."""

    __slots__ = ("field", "c")

    def __init__(self, field, coeffs):
        self.field = field
        self.c = coeffs

    def _coerce(self, other):
        K = self.field
        if isinstance(other, AlgElem):
            if other.field is K:
                return other
            if isinstance(other.field, AlgebraicField) and other.field.is_descendant_of(K):
                return NotImplemented
            return K(other)
        if isinstance(other, (int, fmpq, RatFunc)):
            return K(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return AlgElem(self.field, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return AlgElem(self.field, tuple(-a for a in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return AlgElem(self.field, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        K = self.field
        if isinstance(other, AlgElem):
            if other.field is K:
                return self._mul_full(other)
            if other.field is K.base:
                return AlgElem(K, tuple(a * other for a in self.c))
            o = self._coerce(other)
            if o is NotImplemented:
                return o
            return self._mul_full(o)
        if isinstance(other, (int, fmpq, RatFunc)):
            return AlgElem(K, tuple(a * other for a in self.c))
        return NotImplemented

    __rmul__ = __mul__

    def _mul_full(self, o):
        K = self.field
        B = K.base
        a, b = self.c, o.c
        if B is QQz:
            return K._mul_over_qz(a, b)
        d = K.d
        prod = [B.zero] * (2 * d - 1)
        for i in range(d):
            ai = a[i]
            if B.is_zero(ai):
                continue
            for j in range(d):
                bj = b[j]
                if B.is_zero(bj):
                    continue
                prod[i + j] = prod[i + j] + ai * bj
        return K._reduce(prod)

    def inverse(self):
        return self.field.inverse(self)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._mul_full(o.inverse())

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o._mul_full(self.inverse())

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result._mul_full(base)
            base = base._mul_full(base)
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.field.is_zero(self - o)

    def __hash__(self):
        return hash(tuple(str(c) for c in self.c))

    def __bool__(self):
        return not self.field.is_zero(self)

    def __repr__(self):
        return f"AlgElem({self.field.fmt(self)})"

    __str__ = lambda self: self.field.fmt(self)


def _common_denominator(cs):
    """Numerators over the lcm of the denominators of RatFunc values."""
    den = fmpq_poly([1])
    for c in cs:
        if c.den != 1:
            den = den * c.den // den.gcd(c.den)
    return [c.num * (den // c.den) if c.den != 1 else c.num * den for c in cs], den


# ---------------------------------------------------------------------------
# numeric helpers


def polish_roots(coeffs, roots, steps=8):
    """Newton-polish numeric roots of ``sum coeffs[k] x^k`` (complex coeffs)."""
    c = np.array(coeffs, dtype=complex)
    dc = np.array([k * c[k] for k in range(1, len(c))], dtype=complex)
    out = []
    for r in roots:
        x = complex(r)
        for _ in range(steps):
            p = np.polyval(c[::-1], x)
            dp = np.polyval(dc[::-1], x) if len(dc) else 0
            if dp == 0:
                break
            step = p / dp
            x -= step
            if abs(step) <= 1e-17 * max(1.0, abs(x)):
                break
        out.append(x)
    return out


def base_roots_numeric(base, minpoly):
    """Numeric roots of ``minpoly`` under ``base``'s chosen embedding."""
    coeffs = [base.approx(c) for c in minpoly]
    roots = polish_roots(coeffs, np.roots(list(reversed(coeffs))))
    # deterministic order: real part, then imaginary part
    return sorted(roots, key=lambda r: (round(r.real, 9), round(r.imag, 9)))


def poly_to_str(K, p, var="X"):
    """Render a dense polynomial over ``K``."""
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if K.is_zero(c):
            continue
        cs = K.fmt(c)
        mon = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mon:
            terms.append(cs)
        elif cs == "1":
            terms.append(mon)
        elif cs == "-1":
            terms.append("-" + mon)
        else:
            terms.append(f"{cs}*{mon}" if _is_atomic(cs) else f"({cs})*{mon}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


__all__ = [
    "QQ",
    "QQz",
    "AlgebraicField",
    "AlgElem",
    "ComplexField",
    "RationalField",
    "RationalFunctionField",
    "poly_str",
    "poly_to_str",
    "to_fmpq",
]
