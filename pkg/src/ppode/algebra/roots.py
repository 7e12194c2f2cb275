"""Root handles for univariate polynomials over Q or Q(z)."""

from dataclasses import dataclass, field as dc_field

from flint import fmpq, fmpq_poly, fmpz_poly

from ..errors import UnsupportedExtension
from . import upoly
from .fields import QQ, QQz, AlgebraicField, poly_to_str
from .ratfunc import RatFunc

TARGET_RADIUS = 1e-12


@dataclass(frozen=True, eq=False)
class RootHandle:
    """A root of an irreducible polynomial over the active field.

    ``value`` is an exact element: a rational / rational function for
    degree-1 roots, otherwise the generator of ``field``.  Over Q the handle
    isolates one complex root (``approx`` within ``radius``); over Q(z) it
    stands for the whole conjugacy class and carries no numeric data.
    """

    minpoly: list
    ground: object
    value: object
    field: object
    multiplicity: int = 1
    approx: complex | None = None
    radius: float | None = None
    conjugates: tuple = dc_field(default=(), repr=False)

    @property
    def degree(self):
        return len(self.minpoly) - 1

    def fmt_minpoly(self, var="X"):
        return poly_to_str(self.ground, self.minpoly, var)

    def exact_str(self):
        if self.degree == 1:
            return self.ground.fmt(self.value)
        return f"RootOf({self.fmt_minpoly()})"

    def newton_step(self):
        """One Newton step from ``approx`` against the minimal polynomial."""
        coeffs = [complex(float(c)) for c in self.minpoly]
        x = self.approx
        p = sum(c * x**k for k, c in enumerate(coeffs))
        dp = sum(k * c * x ** (k - 1) for k, c in enumerate(coeffs) if k)
        return x - p / dp


def _as_dense(p, K):
    if isinstance(p, fmpq_poly):
        return [fmpq(c) for c in p.coeffs()]
    return upoly.trim(K, [K(c) for c in p])


def _isolate(poly_q, roots):
    """Attach isolation radii to numeric roots of a squarefree rational poly."""
    n = poly_q.degree()
    coeffs = [complex(float(c)) for c in poly_q.coeffs()]
    out = []
    for i, x in enumerate(roots):
        p = sum(c * x**k for k, c in enumerate(coeffs))
        dp = sum(k * c * x ** (k - 1) for k, c in enumerate(coeffs) if k)
        step = abs(p / dp) if dp else float("inf")
        r = max(n * step, 1e-14 * max(1.0, abs(x)))
        gap = min((abs(x - y) for j, y in enumerate(roots) if j != i), default=float("inf"))
        if r >= gap / 2 or r > TARGET_RADIUS:
            raise ArithmeticError("root isolation failed")
        out.append(r)
    return out


def univariate_roots(p, K=QQ):
    """One handle per distinct root (over Q) or per irreducible factor (over Q(z)).

    Multiplicities are attached.  Rational roots come back as degree-1
    handles with exact values.
    """
    dense = _as_dense(p, K)
    if not dense:
        raise ValueError("roots of the zero polynomial")
    out = []
    if K is QQ:
        for fac, mult in QQ.factor(dense):
            if len(fac) == 2:
                v = -fac[0]
                out.append(RootHandle(fac, QQ, v, QQ, mult, complex(float(v)), 0.0))
                continue
            poly_q = fmpq_poly(fac)
            num = fmpz_poly([int(c * poly_q.denom()) for c in poly_q.coeffs()])
            approx = [complex(r.mid()) for r, _ in num.complex_roots()]
            approx.sort(key=lambda r: (round(r.real, 9), round(r.imag, 9)))
            radii = _isolate(poly_q, approx)
            conj = tuple(approx)
            for x, r in zip(approx, radii):
                L = AlgebraicField(QQ, fac, approx_value=x)
                out.append(RootHandle(fac, QQ, L.gen, L, mult, x, r, conj))
        return out
    if K is QQz:
        for fac, mult in QQz.factor(dense):
            if len(fac) == 2:
                out.append(RootHandle(fac, QQz, -fac[0], QQz, mult))
                continue
            check_radical_tower(fac)
            L = AlgebraicField(QQz, fac)
            out.append(RootHandle(fac, QQz, L.gen, L, mult))
        return out
    raise TypeError(f"univariate_roots over {K!r} is not supported")


# Extensions of Q(z) beyond this degree are refused; see check_radical_tower.
MAX_FUNCTION_FIELD_DEGREE = 12


def check_radical_tower(fac):
    """Refuse extensions of Q(z) that are too large to handle at desk scale."""
    if len(fac) - 1 > MAX_FUNCTION_FIELD_DEGREE:
        raise UnsupportedExtension(
            f"extension of Q(z) of degree {len(fac) - 1} requested",
            minpoly=poly_to_str(QQz, fac),
        )


def is_radical(fac):
    """True for ``X^k - r(z)`` shapes."""
    return all(not c for c in fac[1:-1])


__all__ = ["RootHandle", "univariate_roots", "RatFunc"]
