"""Dense univariate polynomials over an arbitrary field object.

A polynomial is a Python list of field elements, lowest degree first, with
no trailing zeros (``[]`` is the zero polynomial).  The field ``K`` supplies
``K.zero``, ``K.one``, ``K(x)`` coercion and ``K.is_zero``.
"""


def trim(K, p):
    p = list(p)
    while p and K.is_zero(p[-1]):
        p.pop()
    return p


def degree(p):
    return len(p) - 1


def lc(p):
    return p[-1]


def add(K, p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        if i < len(p) and i < len(q):
            out.append(p[i] + q[i])
        elif i < len(p):
            out.append(p[i])
        else:
            out.append(q[i])
    return trim(K, out)


def neg(p):
    return [-c for c in p]


def sub(K, p, q):
    return add(K, p, neg(q))


def scale(K, p, c):
    return trim(K, [c * a for a in p])


def mul(K, p, q):
    if not p or not q:
        return []
    out = [K.zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if K.is_zero(a):
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(K, out)


def monic(K, p):
    if not p:
        return p
    inv = K.one / p[-1]
    return [c * inv for c in p[:-1]] + [K.one]


def divmod_(K, p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    if len(r) - 1 < dq:
        return [], trim(K, r)
    inv = K.one / q[-1]
    quot = [K.zero] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] * inv
        quot[k] = c
        if K.is_zero(c):
            continue
        for j in range(dq + 1):
            r[k + j] = r[k + j] - c * q[j]
    return trim(K, quot), trim(K, r[:dq])


def rem(K, p, q):
    return divmod_(K, p, q)[1]


def gcd(K, p, q):
    """Monic gcd; ``gcd(0, 0) = 0``."""
    p, q = trim(K, p), trim(K, q)
    while q:
        p, q = q, rem(K, p, q)
    return monic(K, p)


def xgcd(K, p, q):
    """Return ``(g, a, b)`` with ``a*p + b*q = g`` and ``g`` monic."""
    r0, r1 = trim(K, p), trim(K, q)
    a0, a1 = [K.one], []
    b0, b1 = [], [K.one]
    while r1:
        quo, r = divmod_(K, r0, r1)
        r0, r1 = r1, r
        a0, a1 = a1, sub(K, a0, mul(K, quo, a1))
        b0, b1 = b1, sub(K, b0, mul(K, quo, b1))
    if not r0:
        return [], [], []
    inv = K.one / r0[-1]
    return scale(K, r0, inv), scale(K, a0, inv), scale(K, b0, inv)


def deriv(K, p):
    return trim(K, [K(i) * p[i] for i in range(1, len(p))])


def evaluate(K, p, x):
    acc = K.zero
    for c in reversed(p):
        acc = acc * x + c
    return acc


def shift(K, p, a):
    """``p(X + a)`` by Horner's scheme on polynomials."""
    out = []
    for c in reversed(p):
        # out = out * (X + a) + c
        new = [K.zero] * (len(out) + 1)
        for i, b in enumerate(out):
            new[i + 1] = new[i + 1] + b
            new[i] = new[i] + b * a
        new[0] = new[0] + c
        out = new
    return trim(K, out)


def compose(K, p, q):
    out = []
    for c in reversed(p):
        out = add(K, mul(K, out, q), [c])
    return out


def resultant(K, p, q):
    """Resultant over a field by the Euclidean remainder sequence."""
    p, q = trim(K, p), trim(K, q)
    if not p or not q:
        return K.zero
    res = K.one
    while True:
        dp, dq = len(p) - 1, len(q) - 1
        if dq == 0:
            return res * q[0] ** dp
        r = rem(K, p, q)
        if not r:
            return K.zero
        dr = len(r) - 1
        if (dp * dq) % 2:
            res = -res
        res = res * q[-1] ** (dp - dr)
        p, q = q, r


def squarefree_decomposition(K, p):
    """Yun's algorithm: list of ``(factor, multiplicity)`` with monic factors."""
    p = monic(K, trim(K, p))
    if len(p) <= 1:
        return []
    out = []
    dp = deriv(K, p)
    a = gcd(K, p, dp)
    b = divmod_(K, p, a)[0]
    c = divmod_(K, dp, a)[0]
    d = sub(K, c, deriv(K, b))
    i = 1
    while len(b) > 1:
        a = gcd(K, b, d)
        if len(a) > 1:
            out.append((monic(K, a), i))
        b = divmod_(K, b, a)[0]
        c = divmod_(K, d, a)[0]
        d = sub(K, c, deriv(K, b))
        i += 1
    return out


def is_squarefree(K, p):
    return len(gcd(K, p, deriv(K, p))) <= 1


def interpolate(K, xs, ys):
    """Newton interpolation through ``(xs[i], ys[i])``."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = [coef[-1]]
    for i in range(n - 2, -1, -1):
        # out = out * (X - xs[i]) + coef[i]
        new = [K.zero] * (len(out) + 1)
        for k, b in enumerate(out):
            new[k + 1] = new[k + 1] + b
            new[k] = new[k] - b * xs[i]
        new[0] = new[0] + coef[i]
        out = new
    return trim(K, out)
