"""Dense univariate polynomials over a coefficient field.

A polynomial is a tuple of raw field elements in ascending degree with no
trailing zeros; ``()`` is the zero polynomial. Every function takes the
field ``K`` as its first argument and only touches coefficients through the
field's raw-element methods, so the same code serves prime fields,
extension fields and rational function fields.
"""

import random

from .errors import FieldError


def deg(f):
    return len(f) - 1


def trim(K, f):
    f = list(f)
    while f and K.is_zero(f[-1]):
        f.pop()
    return tuple(f)


def const(K, c):
    return () if K.is_zero(c) else (c,)


def monomial(K, c, k):
    if K.is_zero(c):
        return ()
    return (K.zero,) * k + (c,)


def x_poly(K):
    return (K.zero, K.one)


def add(K, f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = K.add(out[i], c)
    return trim(K, out)


def neg(K, f):
    return tuple(K.neg(c) for c in f)


def sub(K, f, g):
    return add(K, f, neg(K, g))


def scale(K, f, c):
    if K.is_zero(c):
        return ()
    return tuple(K.mul(a, c) for a in f)


def mul(K, f, g):
    if not f or not g:
        return ()
    return K.poly_mul(f, g)


def generic_mul(K, f, g):
    out = [K.zero] * (len(f) + len(g) - 1)
    kadd, kmul, is_zero = K.add, K.mul, K.is_zero
    for i, a in enumerate(f):
        if is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = kadd(out[i + j], kmul(a, b))
    return trim(K, out)


def shift(K, f, k):
    """Multiply by x**k (k >= 0)."""
    if not f:
        return ()
    return (K.zero,) * k + tuple(f)


def power(K, f, e):
    result = (K.one,)
    base = f
    while e:
        if e & 1:
            result = mul(K, result, base)
        e >>= 1
        if e:
            base = mul(K, base, base)
    return result


def divmod_(K, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if len(f) < len(g):
        return (), f
    inv_lc = K.inv(g[-1])
    r = list(f)
    dg = len(g) - 1
    q = [K.zero] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = r[i]
        if K.is_zero(c):
            continue
        c = K.mul(c, inv_lc)
        q[i - dg] = c
        for j in range(dg + 1):
            r[i - dg + j] = K.sub(r[i - dg + j], K.mul(c, g[j]))
    return trim(K, q), trim(K, r[:dg])


def quo(K, f, g):
    return divmod_(K, f, g)[0]


def rem(K, f, g):
    return divmod_(K, f, g)[1]


def exact_quo(K, f, g):
    q, r = divmod_(K, f, g)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def monic(K, f):
    if not f:
        return ()
    if K.is_zero(K.sub(f[-1], K.one)):
        return f
    return scale(K, f, K.inv(f[-1]))


def gcd(K, f, g):
    """Monic gcd; gcd(0, 0) = 0."""
    while g:
        f, g = g, rem(K, f, g)
    return monic(K, f)


def evaluate(K, f, a):
    acc = K.zero
    for c in reversed(f):
        acc = K.add(K.mul(acc, a), c)
    return acc


def taylor_shift(K, f, c):
    """Return f(x + c)."""
    out = list(f)
    n = len(out)
    if K.is_zero(c):
        return tuple(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = K.add(out[j], K.mul(c, out[j + 1]))
    return trim(K, out)


def derivative(K, f):
    return trim(K, [K.mul(K.from_int(i), f[i]) for i in range(1, len(f))])


def frobenius(K, f):
    """Return f**p, computed as sum c**p x**(p*i)."""
    if not f:
        return ()
    p = K.p
    out = [K.zero] * ((len(f) - 1) * p + 1)
    for i, c in enumerate(f):
        out[i * p] = K.frob(c)
    return tuple(out)


def pth_root(K, f):
    """Inverse of :func:`frobenius`; raises FieldError when f is not a p-th power."""
    p = K.p
    out = []
    for i, c in enumerate(f):
        if i % p:
            if not K.is_zero(c):
                raise FieldError("polynomial is not a p-th power")
        else:
            out.append(K.pth_root(c))
    return tuple(out)


def from_roots(K, roots):
    """Product of (x - r) ** m over ``roots`` given as (r, m) pairs."""
    f = (K.one,)
    for r, m in roots:
        f = mul(K, f, power(K, (K.neg(r), K.one), m))
    return f


def multiplicity(K, f, r):
    """Largest m with (x - r)**m dividing f, and the cofactor."""
    lin = (K.neg(r), K.one)
    m = 0
    while f:
        q, rr = divmod_(K, f, lin)
        if rr:
            break
        f = q
        m += 1
    return m, f


def powmod(K, f, e, modulus):
    result = (K.one,)
    base = rem(K, f, modulus)
    while e:
        if e & 1:
            result = rem(K, mul(K, result, base), modulus)
        e >>= 1
        if e:
            base = rem(K, mul(K, base, base), modulus)
    return result


def valuation(K, f):
    """Order of vanishing at x = 0."""
    for i, c in enumerate(f):
        if not K.is_zero(c):
            return i
    raise ValueError("valuation of zero polynomial")


def series_inverse(K, f, k):
    """Power series inverse of f modulo x**k; requires f(0) != 0."""
    if k <= 0:
        return ()
    inv0 = K.inv(f[0])
    out = [inv0]
    for i in range(1, k):
        acc = K.zero
        for j in range(1, min(i, len(f) - 1) + 1):
            acc = K.add(acc, K.mul(f[j], out[i - j]))
        out.append(K.neg(K.mul(acc, inv0)))
    return tuple(out)


# -- factorisation over finite fields -------------------------------------


def squarefree_decomposition(K, f):
    """Return [(g, m)] with f = lc * prod g**m, g squarefree, pairwise coprime.

    Works in characteristic p: when f' = 0 the polynomial is a p-th power.
    """
    f = monic(K, f)
    if len(f) <= 1:
        return []
    p = K.p
    out = []
    df = derivative(K, f)
    if not df:
        for g, m in squarefree_decomposition(K, pth_root(K, f)):
            out.append((g, m * p))
        return out
    c = gcd(K, f, df)
    w = quo(K, f, c)
    i = 1
    while len(w) > 1:
        y = gcd(K, w, c)
        z = quo(K, w, y)
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w = y
        c = quo(K, c, y)
    if len(c) > 1:
        for g, m in squarefree_decomposition(K, pth_root(K, c)):
            out.append((g, m * p))
    return out


def distinct_degree(K, f):
    """Split monic squarefree f into (product of degree-d irreducibles, d)."""
    q = K.order
    out = []
    x = x_poly(K)
    h = x
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod(K, h, q, f)
        g = gcd(K, f, sub(K, h, x))
        if len(g) > 1:
            out.append((g, d))
            f = quo(K, f, g)
            h = rem(K, h, f)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _trace_poly(K, a, d, modulus):
    # a + a^2 + a^4 + ... over F_2; used for equal-degree splitting when p == 2
    m = K.order.bit_length() - 1
    t = a
    acc = a
    for _ in range(m * d - 1):
        t = rem(K, mul(K, t, t), modulus)
        acc = add(K, acc, t)
    return acc


def equal_degree(K, f, d, rng):
    """Cantor-Zassenhaus splitting of f, a product of degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    q = K.order
    while True:
        a = trim(K, [K.random_element(rng) for _ in range(n)])
        if len(a) <= 1:
            continue
        if K.p == 2:
            b = _trace_poly(K, a, d, f)
        else:
            b = sub(K, powmod(K, a, (q ** d - 1) // 2, f), (K.one,))
        g = gcd(K, f, b)
        if 1 < len(g) < len(f):
            return equal_degree(K, g, d, rng) + equal_degree(K, quo(K, f, g), d, rng)


def factor(K, f):
    """Factor f over the finite field K into [(monic irreducible, multiplicity)]."""
    rng = random.Random(0)
    out = []
    for g, m in squarefree_decomposition(K, f):
        for h, d in distinct_degree(K, g):
            for irr in equal_degree(K, h, d, rng):
                out.append((irr, m))
    out.sort(key=lambda gm: (len(gm[0]), [K.key(c) for c in gm[0]]))
    return out


def is_irreducible(K, f):
    f = monic(K, f)
    if len(f) <= 1:
        return False
    facs = factor(K, f)
    return len(facs) == 1 and facs[0][1] == 1


def roots(K, f):
    """Roots with multiplicities of f in the finite field K, and the unsplit remainder."""
    found = []
    rest = (K.one,)
    for g, m in factor(K, f):
        if len(g) == 2:
            found.append((K.neg(g[0]), m))
        else:
            rest = mul(K, rest, power(K, g, m))
    return found, rest
