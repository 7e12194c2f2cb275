"""Parse ODE text such as ``(y')^2 = y^3 + z`` into a :class:`CurveEquation`.

Grammar (whitespace is insignificant)::

    equation = expr "=" expr
    expr     = [ "+" | "-" ] term { ( "+" | "-" ) term }
    term     = power { ( "*" | "/" ) power }
    power    = atom [ ( "^" | "**" ) exponent ]
    atom     = number | "y" { "'" } | "z" | "S" | "T" | "(" expr ")"
             | ( "+" | "-" ) power
    exponent = [ "-" ] integer | "(" [ "-" ] integer [ "/" integer ] ")"
    number   = digits [ "." digits ]

``y'`` (or the alias ``S``) is the derivative, ``y`` (alias ``T``) the unknown.
Division is allowed only by expressions in ``z`` and constants.
"""

from dataclasses import dataclass, field, replace

from flint import fmpq, fmpq_poly

from .algebra import polys
from .algebra.polys import S, T, Z
from .errors import (
    ConstantEquation,
    IrreducibilityUnknown,
    MissingVariable,
    NonPolynomial,
    ParseError,
    Reducible,
)


PROVEN = "proven-irreducible"
HEURISTIC = "heuristically-irreducible"

# full factorization over Q(z) is attempted below this total degree
FACTOR_DEGREE_LIMIT = 40


@dataclass(frozen=True)
class CurveEquation:
    f: polys.MultiPoly
    autonomous: bool
    degS: int
    degT: int
    text: str = ""
    certificate: str | None = None
    warnings: tuple = field(default=())

    def __eq__(self, other):
        return isinstance(other, CurveEquation) and self.f == other.f

    def __hash__(self):
        return hash(polys.render(self.f))

    def render(self):
        return polys.render(self.f)

    def render_equation(self):
        return f"{polys.render_y(self.f)} = 0"

    @property
    def conditional(self):
        return self.certificate == HEURISTIC


def curve_equation(f, text=""):
    f = polys.primitive(f)
    return CurveEquation(
        f=f,
        autonomous=polys.is_autonomous(f),
        degS=polys.degree_in(f, "S"),
        degT=polys.degree_in(f, "T"),
        text=text,
    )


# ---------------------------------------------------------------------------
# tokenizer

_SINGLE = {"+", "-", "*", "/", "^", "(", ")", "=", "'"}
_ALIASES = {"′": "'", "−": "-", "·": "*", "×": "*"}


@dataclass
class _Tok:
    kind: str  # num, name, op, end
    text: str
    line: int
    col: int


def _tokenize(text):
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = _ALIASES.get(text[i], text[i])
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < len(text) and text[i + 1].isdigit()):
            j = i
            while j < len(text) and (text[j].isdigit() or text[j] == "."):
                j += 1
            lit = text[i:j]
            if lit.count(".") > 1:
                raise ParseError(f"malformed number {lit!r}", line, col)
            toks.append(_Tok("num", lit, line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch == "*" and i + 1 < len(text) and text[i + 1] == "*":
            toks.append(_Tok("op", "^", line, col))
            i += 2
            col += 2
            continue
        if ch in _SINGLE:
            toks.append(_Tok("op", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {text[i]!r}", line, col)
    toks.append(_Tok("end", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# values: polynomial numerator over a z-polynomial denominator


@dataclass(frozen=True)
class _Rat:
    num: polys.MultiPoly
    den: fmpq_poly

    def __add__(self, o):
        return _Rat(self.num * polys.from_z_poly(o.den) + o.num * polys.from_z_poly(self.den), self.den * o.den)

    def __neg__(self):
        return _Rat(-self.num, self.den)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        return _Rat(self.num * o.num, self.den * o.den)

    def z_only(self):
        return polys.degree_in(self.num, "S") <= 0 and polys.degree_in(self.num, "T") <= 0


def _const(c):
    return _Rat(polys.const(c), fmpq_poly([1]))


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, text):
        tok = self.take()
        if tok.text != text or tok.kind == "num":
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParseError(f"expected {text!r}, found {found}", tok.line, tok.col)
        return tok

    def error(self, msg, tok=None, cls=ParseError):
        tok = tok or self.peek()
        return cls(msg, tok.line, tok.col)

    def equation(self):
        lhs = self.expr()
        tok = self.peek()
        if tok.text != "=":
            if tok.kind == "end":
                raise self.error("expected '=' in equation", tok)
            raise self.error(f"unexpected {tok.text!r}", tok)
        self.take()
        rhs = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise self.error(f"unexpected {tok.text!r} after equation", tok)
        return lhs, rhs

    def expr(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.take()
            val = self.term()
            if tok.text == "-":
                val = -val
        else:
            val = self.term()
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.power()
        while self.peek().kind == "op" and self.peek().text in ("*", "/"):
            op = self.take()
            rhs = self.power()
            if op.text == "*":
                val = val * rhs
            else:
                val = self._divide(val, rhs, op)
        return val

    def _divide(self, a, b, tok):
        if not b.z_only():
            raise self.error("y or y' in a denominator", tok, NonPolynomial)
        d = polys.z_poly(b.num)
        if d == 0:
            raise self.error("division by zero", tok)
        return _Rat(a.num * polys.from_z_poly(b.den), a.den * d)

    def power(self):
        base_tok = self.peek()
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            op = self.take()
            num, den = self.exponent()
            if den != 1:
                raise self.error("fractional power", op, NonPolynomial)
            if num < 0:
                if not base.z_only():
                    raise self.error("negative power of an expression in y or y'", op, NonPolynomial)
                d = polys.z_poly(base.num)
                if d == 0:
                    raise self.error("division by zero", base_tok)
                return _Rat(polys.from_z_poly(base.den) ** (-num), d ** (-num))
            return _Rat(base.num**num, base.den**num)
        return base

    def exponent(self):
        tok = self.peek()
        if tok.text == "(":
            self.take()
            sign = -1 if self._maybe("-") else 1
            num = self._integer()
            den = 1
            if self._maybe("/"):
                den = self._integer()
                if den == 0:
                    raise self.error("zero denominator in exponent")
            self.expect(")")
            return sign * num, den
        sign = -1 if self._maybe("-") else 1
        return sign * self._integer(), 1

    def _maybe(self, text):
        if self.peek().kind == "op" and self.peek().text == text:
            self.take()
            return True
        return False

    def _integer(self):
        tok = self.take()
        if tok.kind != "num" or "." in tok.text:
            raise ParseError("expected an integer exponent", tok.line, tok.col)
        return int(tok.text)

    def atom(self):
        tok = self.take()
        if tok.kind == "num":
            return _const(_parse_number(tok.text))
        if tok.kind == "name":
            name = tok.text
            if name in ("y", "T", "S"):
                primes = 0
                while self.peek().kind == "op" and self.peek().text == "'":
                    self.take()
                    primes += 1
                if name == "S":
                    primes += 1
                if primes > 1:
                    raise ParseError("higher-order derivatives are not supported", tok.line, tok.col)
                return _Rat(S if primes else T, fmpq_poly([1]))
            if name == "z":
                return _Rat(Z, fmpq_poly([1]))
            raise ParseError(f"unknown symbol {name!r}", tok.line, tok.col)
        if tok.kind == "op" and tok.text == "(":
            val = self.expr()
            self.expect(")")
            return val
        if tok.kind == "op" and tok.text in "+-":
            val = self.power()
            return -val if tok.text == "-" else val
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"unexpected {found}", tok.line, tok.col)


def _parse_number(lit):
    if "." in lit:
        whole, frac = lit.split(".")
        return fmpq(int(whole or "0") * 10 ** len(frac) + int(frac or "0"), 10 ** len(frac))
    return fmpq(int(lit))


def parse_equation(text):
    """Parse ``text`` into a canonical, not yet validated, CurveEquation."""
    lhs, rhs = _Parser(text).equation()
    diff = lhs - rhs
    return curve_equation(diff.num, text=text)


# ---------------------------------------------------------------------------
# validation


def validate(eq, strict=False):
    """Check the standing assumptions and attach an irreducibility certificate."""
    f = eq.f
    if f == S:
        raise ConstantEquation("the equation is y' = 0")
    if eq.degS < 1:
        raise MissingVariable("y' does not occur in the equation")
    if eq.degT < 1:
        raise MissingVariable("y does not occur in the equation")
    if f.total_degree() <= FACTOR_DEGREE_LIMIT:
        _, facs = f.factor()
        nontrivial = [(g, m) for g, m in facs if g.degrees()[0] + g.degrees()[1] > 0]
        if len(nontrivial) > 1 or (nontrivial and nontrivial[0][1] > 1):
            factors = [polys.render(polys.primitive(g)) for g, m in nontrivial for _ in range(m)]
            raise Reducible("equation factors: " + " * ".join(f"({t})" for t in factors), factors)
    elif not _specialization_irreducible(f):
        raise IrreducibilityUnknown("irreducibility check inconclusive")
    warnings = list(eq.warnings)
    if absolutely_irreducible(f):
        cert = PROVEN
    else:
        cert = HEURISTIC
        warnings.append("absolute irreducibility not certified; verdict is conditional")
        if strict:
            raise IrreducibilityUnknown("absolute irreducibility not certified (strict mode)")
    return replace(eq, certificate=cert, warnings=tuple(warnings))


def _specialization_irreducible(f, points=(3, 7, 11)):
    for z0 in points:
        g = f.subs({"z": z0})
        if g == 0:
            continue
        _, facs = g.factor()
        if len([1 for h, m in facs for _ in range(m) if not h.is_constant()]) == 1:
            return True
    return False


def absolutely_irreducible(f):
    """Sufficient criteria for irreducibility over the algebraic closure.

    Assumes ``f`` already irreducible over Q(z).  Returns False when no
    criterion applies (or when ``f`` provably splits over an extension).
    """
    degS = polys.degree_in(f, "S")
    degT = polys.degree_in(f, "T")
    if degS == 1 or degT == 1:
        return True
    support = {(i, j) for (i, j, _k) in polys.term_dict(f)}
    if newton_polygon_indecomposable(support):
        return True
    for var, deg in (("S", degS), ("T", degT)):
        if deg == 2:
            return not _discriminant_is_square(f, var)
    return False


def _discriminant_is_square(f, var):
    other = 1 if var == "S" else 0
    disc = polys.discriminant(f, var)
    _, facs = disc.factor()
    return all(m % 2 == 0 for g, m in facs if g.degrees()[other] > 0)


def newton_polygon_indecomposable(points):
    """Integral indecomposability of the convex hull of ``points`` (Ostrowski)."""
    hull = _convex_hull(sorted(set(points)))
    if len(hull) == 1:
        return False
    if len(hull) == 2:
        edges = [(hull[1][0] - hull[0][0], hull[1][1] - hull[0][1])]
        edges.append((-edges[0][0], -edges[0][1]))
    else:
        edges = [
            (hull[(k + 1) % len(hull)][0] - hull[k][0], hull[(k + 1) % len(hull)][1] - hull[k][1])
            for k in range(len(hull))
        ]
    steps = []
    for dx, dy in edges:
        n = _igcd(abs(dx), abs(dy))
        steps.append(((dx // n, dy // n), n))
    # states: (x, y, used_any, skipped_any)
    states = {(0, 0, False, False)}
    for (vx, vy), n in steps:
        new = set()
        for x, y, used, skipped in states:
            for k in range(n + 1):
                new.add((x + k * vx, y + k * vy, used or k > 0, skipped or k < n))
        states = new
    return (0, 0, True, True) not in states


def _igcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _convex_hull(pts):
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def parse_and_validate(text, strict=False):
    return validate(parse_equation(text), strict=strict)
