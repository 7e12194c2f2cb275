"""Multivariate polynomials in S (= y'), T (= y) and z over Q.

``MultiPoly`` is flint's ``fmpq_mpoly`` in the context ``(S, T, z)`` with the
graded lexicographic order S > T > z.  The helpers here add the operations
the analysis needs on top of it and the canonical text rendering.
"""

from flint import fmpq, fmpq_mpoly, fmpq_mpoly_ctx, fmpq_poly

from .fields import fmt_rational
from .ratfunc import RatFunc

VARS = ("S", "T", "z")
CTX = fmpq_mpoly_ctx.get(VARS, "deglex")
S, T, Z = CTX.gens()
MultiPoly = fmpq_mpoly

_INDEX = {v: i for i, v in enumerate(VARS)}
Y_NAMES = {"S": "y'", "T": "y", "z": "z"}


def var_index(var):
    try:
        return _INDEX[var]
    except KeyError:
        raise ValueError(f"unknown variable {var!r}; expected one of S, T, z") from None


def const(c):
    return CTX.from_dict({(0, 0, 0): fmpq(c)}) if c != 0 else CTX.from_dict({})


def from_terms(terms):
    return CTX.from_dict({k: fmpq(v) for k, v in terms.items() if v != 0})


def term_dict(f):
    """``{(i, j, k): coeff}`` with plain int exponents."""
    return {(int(a), int(b), int(c)): v for (a, b, c), v in f.to_dict().items()}


def degree_in(f, var):
    if f == 0:
        return -1
    return int(f.degrees()[var_index(var)])


def poly_partial(f, var):
    """Formal partial derivative."""
    var_index(var)
    return f.derivative(var)


def coefficients_in(f, var):
    """``[c_0, c_1, ...]`` with ``f = sum c_k * var^k``."""
    i = var_index(var)
    n = degree_in(f, var)
    buckets = [dict() for _ in range(max(n, 0) + 1)]
    for exps, c in term_dict(f).items():
        e = list(exps)
        k = e[i]
        e[i] = 0
        buckets[k][tuple(e)] = c
    return [CTX.from_dict(b) for b in buckets]


def leading_coefficient_in(f, var):
    return coefficients_in(f, var)[-1]


def resultant(f, g, var):
    """Sylvester resultant of ``f`` and ``g`` with respect to ``var``."""
    if f == 0 or g == 0:
        raise ValueError("resultant of a zero polynomial")
    var_index(var)
    if degree_in(f, var) == 0 and degree_in(g, var) == 0:
        raise ValueError(f"both inputs are constant in {var}")
    if degree_in(g, var) == 0:
        return g ** degree_in(f, var)
    if degree_in(f, var) == 0:
        return f ** degree_in(g, var)
    return f.resultant(g, var)


def discriminant(f, var):
    """``(-1)^(n(n-1)/2) * res(f, f') / lc(f)`` in ``var``."""
    n = degree_in(f, var)
    if n < 2:
        raise ValueError(f"discriminant needs degree >= 2 in {var}, got {n}")
    r = resultant(f, poly_partial(f, var), var)
    q, rem = divmod(r, leading_coefficient_in(f, var))
    if rem != 0:
        raise ArithmeticError("leading coefficient does not divide the resultant")
    return -q if (n * (n - 1) // 2) % 2 else q


def content_in(f, var):
    """gcd of the coefficients of ``f`` as a polynomial in ``var``."""
    g = None
    for c in coefficients_in(f, var):
        if c == 0:
            continue
        g = c if g is None else g.gcd(c)
    return g if g is not None else const(0)


def poly_gcd(f, g, var):
    """gcd in ``var`` over the field of the remaining variables.

    The result is primitive in ``var``; it is made monic when its leading
    coefficient in ``var`` is a rational constant, otherwise the leading
    coefficient is made positive.
    """
    var_index(var)
    if f == 0 and g == 0:
        return const(0)
    h = f.gcd(g) if f != 0 and g != 0 else (f if g == 0 else g)
    if degree_in(h, var) <= 0:
        return const(1)
    h = divmod(h, content_in(h, var))[0]
    lcv = leading_coefficient_in(h, var)
    if lcv.is_constant():
        return h / lcv.leading_coefficient()
    return -h if leading_sign(h) < 0 else h


def sorted_terms(f):
    """Terms in canonical order: total degree, then lex S > T > z (descending)."""
    items = list(term_dict(f).items())
    items.sort(key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)
    return items


def leading_sign(f):
    terms = sorted_terms(f)
    return 1 if not terms or terms[0][1] > 0 else -1


def primitive(f):
    """Strip the rational content and any factor depending on z only; make the
    leading coefficient of the top power of S positive."""
    if f == 0:
        return f
    # content as a polynomial in z: gcd of the coefficients of the S,T-monomials
    buckets = {}
    for (i, j, k), c in term_dict(f).items():
        buckets.setdefault((i, j), {})[(0, 0, k)] = c
    g = None
    for b in buckets.values():
        p = CTX.from_dict(b)
        g = p if g is None else g.gcd(p)
        if g.is_constant():
            break
    f = divmod(f, g)[0]
    terms = sorted_terms(f)
    lcv = sorted_terms(leading_coefficient_in(f, "S"))[0][1]
    # clear rational content to a primitive integer polynomial
    den = 1
    for _, c in terms:
        den = den * c.q // _gcd(den, c.q)
    nums = [int(c * den) for _, c in terms]
    cont = 0
    for n in nums:
        cont = _gcd(cont, abs(n))
    scale = fmpq(den, cont)
    if lcv < 0:
        scale = -scale
    return f * scale


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def render(f, names=None):
    """Canonical text: sorted terms, ``^`` powers, explicit ``*``."""
    names = names or {v: v for v in VARS}
    terms = sorted_terms(f)
    if not terms:
        return "0"
    out = []
    for exps, c in terms:
        mons = []
        for v, e in zip(VARS, exps):
            if e == 0:
                continue
            name = names[v]
            if e > 1 and name.endswith("'"):
                name = f"({name})"
            mons.append(name if e == 1 else f"{name}^{e}")
        mono = "*".join(mons)
        a = -c if c < 0 else c
        if not mono:
            body = fmt_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{fmt_rational(a)}*{mono}"
        out.append(("-" if c < 0 else "+", body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def render_y(f):
    """Render with ``y'`` and ``y`` in place of S and T."""
    return render(f, Y_NAMES)


def z_poly(p):
    """A polynomial in z only, as ``fmpq_poly``."""
    coeffs = {}
    for (i, j, k), c in term_dict(p).items():
        if i or j:
            raise ValueError("polynomial involves S or T")
        coeffs[k] = c
    top = max(coeffs) if coeffs else 0
    return fmpq_poly([coeffs.get(k, 0) for k in range(top + 1)])


def from_z_poly(p):
    return CTX.from_dict({(0, 0, k): p[k] for k in range(p.degree() + 1) if p[k] != 0})


def t_coefficients(f):
    """``{(i, j): RatFunc}`` so that ``f = sum c_ij(z) S^i T^j``."""
    buckets = {}
    for (i, j, k), c in term_dict(f).items():
        buckets.setdefault((i, j), {})[k] = c
    out = {}
    for key, d in buckets.items():
        top = max(d)
        out[key] = RatFunc(fmpq_poly([d.get(k, 0) for k in range(top + 1)]))
    return out


def is_autonomous(f):
    return f == 0 or int(f.degrees()[2]) == 0
