"""Rational functions in x over a coefficient field.

A function is stored as ``num / prod (x - P)**k`` with the poles kept as
explicit field elements. All inputs must have split denominators, so this
factored form always exists; it lets sums and products skip polynomial gcds
(which are expensive over F_q(t)) and makes partial fractions a matter of
Taylor expansion at each pole.
"""

from dataclasses import dataclass
from itertools import product as iproduct

from . import poly as P
from .errors import FieldError, SpecializationPoleError, UnsplitPoleError
from .fields import FieldValue


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def _lin(K, a):
    return (K.neg(a), K.one)


def _synthetic_div(K, f, a):
    """Divide f by (x - a): returns (quotient, remainder)."""
    if not f:
        return (), K.zero
    n = len(f)
    q = [K.zero] * (n - 1)
    acc = f[-1]
    for i in range(n - 2, -1, -1):
        q[i] = acc
        acc = K.add(f[i], K.mul(acc, a))
    return tuple(q), acc


def format_poly(K, f, var="x"):
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if K.is_zero(c):
            continue
        terms.append(_format_term(K, c, _power_str(var, i)))
    return _join(terms)


def _power_str(var, i):
    if i == 0:
        return ""
    return var if i == 1 else f"{var}^{i}"


def _atomic(s):
    body = s[1:] if s.startswith("-") else s
    return not any(ch in body for ch in "+-/*") or (body.startswith("(") and body.endswith(")"))


def _format_term(K, c, mono):
    cs = K.format(c)
    if not mono:
        return cs
    if c == K.one:
        return mono
    if not _atomic(cs):
        cs = f"({cs})"
    return f"{cs}*{mono}"


def _join(terms):
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def linear_factor_str(K, a):
    """Text for x - a."""
    if K.is_zero(a):
        return "x"
    s = K.format(a)
    if _atomic(s) and "/" not in s:
        return "x-" + s
    return f"x-({s})"


@dataclass(frozen=True)
class PartialFractions:
    """Polynomial part plus, for each finite pole P, coefficients
    (c_1, ..., c_l) of 1/(x-P), ..., 1/(x-P)^l."""

    field: object
    poly_part: tuple
    terms: dict

    def pole_order(self, pt):
        if pt is INF:
            return max(len(self.poly_part) - 1, 0)
        cs = self.terms.get(pt)
        return len(cs) if cs else 0


class RatFunc:
    __slots__ = ("K", "_num", "poles", "_pf", "_hash")

    def __init__(self, K, num, poles=(), canonical=False):
        self.K = K
        self._num = num
        self._pf = None
        self._hash = None
        if not num:
            self.poles = ()
        elif canonical:
            self.poles = poles
        else:
            self._num, self.poles = _canonicalize(K, num, poles)

    @property
    def num(self):
        if self._num is None:
            self._num = _num_from_pf(self.K, self._pf, self.poles)
        return self._num

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, K):
        return cls(K, (), (), canonical=True)

    @classmethod
    def one(cls, K):
        return cls(K, (K.one,), (), canonical=True)

    @classmethod
    def const(cls, K, c):
        return cls(K, P.const(K, c), (), canonical=True)

    @classmethod
    def x(cls, K):
        return cls(K, P.x_poly(K), (), canonical=True)

    @classmethod
    def from_poly(cls, K, f):
        return cls(K, P.trim(K, f), (), canonical=True)

    @classmethod
    def pole_term(cls, K, c, pt, k):
        """c/(x-pt)^k, or c*x^k when pt is INF."""
        if K.is_zero(c):
            return cls.zero(K)
        if pt is INF:
            return cls(K, P.monomial(K, c, k), (), canonical=True)
        if k == 0:
            return cls.const(K, c)
        return cls(K, (c,), ((pt, k),), canonical=True)

    @classmethod
    def from_partial_fractions(cls, K, poly_part, terms):
        """Build from a polynomial part and {pole: (c_1, ..., c_l)}."""
        clean = {}
        for a, cs in terms.items():
            cs = list(cs)
            while cs and K.is_zero(cs[-1]):
                cs.pop()
            if cs:
                clean[a] = tuple(cs)
        poly_part = P.trim(K, poly_part)
        if not clean:
            return cls.from_poly(K, poly_part)
        self = cls.__new__(cls)
        self.K = K
        self._num = None
        self._hash = None
        self.poles = _sorted_poles(K, {a: len(cs) for a, cs in clean.items()})
        self._pf = PartialFractions(K, poly_part, {a: clean[a] for a, _ in self.poles})
        return self

    @classmethod
    def from_num_den(cls, K, num, den, hints=()):
        num = P.trim(K, num)
        den = P.trim(K, den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        roots, lc = split_roots(K, den, hints)
        num = P.scale(K, num, K.inv(lc))
        return cls(K, num, tuple(roots))

    # -- basic queries -----------------------------------------------------

    @property
    def field(self):
        return self.K

    def is_zero(self):
        return not self.poles and not self.num

    def __bool__(self):
        return not self.is_zero()

    def is_polynomial(self):
        return not self.poles

    def is_constant(self):
        return not self.poles and len(self.num) <= 1

    def constant_value(self):
        return self.num[0] if self.num else self.K.zero

    @property
    def den(self):
        d = (self.K.one,)
        for a, k in self.poles:
            d = P.mul(self.K, d, P.power(self.K, _lin(self.K, a), k))
        return d

    def pole_points(self):
        pts = [a for a, _ in self.poles]
        if self.poly_degree() > 0:
            pts.append(INF)
        return pts

    def poly_degree(self):
        """Degree of the polynomial part (pole order at infinity, if positive)."""
        if self._num is None:
            return len(self._pf.poly_part) - 1
        return len(self.num) - 1 - sum(k for _, k in self.poles)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.K == other.K and self.num == other.num and self.poles == other.poles

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.K, self.num, self.poles))
        return self._hash

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if isinstance(other, RatFunc):
            if other.K != self.K:
                raise FieldError(f"field mismatch: {self.K} vs {other.K}")
            return other
        if isinstance(other, int):
            return RatFunc.const(self.K, self.K.from_int(other))
        if isinstance(other, FieldValue):
            if other.field != self.K:
                return RatFunc.const(self.K, self.K.embed(other))
            return RatFunc.const(self.K, other.raw)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        K = self.K
        if not self.num:
            return other
        if not other.num:
            return self
        if self.poles == other.poles:
            return RatFunc(K, P.add(K, self.num, other.num), self.poles)
        e1, e2 = dict(self.poles), dict(other.poles)
        allp = dict(e1)
        for a, k in e2.items():
            allp[a] = max(allp.get(a, 0), k)
        n1 = self.num
        n2 = other.num
        for a, k in allp.items():
            if k > e1.get(a, 0):
                n1 = P.mul(K, n1, P.power(K, _lin(K, a), k - e1.get(a, 0)))
            if k > e2.get(a, 0):
                n2 = P.mul(K, n2, P.power(K, _lin(K, a), k - e2.get(a, 0)))
        return RatFunc(K, P.add(K, n1, n2), _sorted_poles(K, allp))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.K, P.neg(self.K, self.num), self.poles, canonical=True)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        K = self.K
        if not self.num or not other.num:
            return RatFunc.zero(K)
        if not other.poles and len(other.num) == 1:
            return RatFunc(K, P.scale(K, self.num, other.num[0]), self.poles, canonical=True)
        if not self.poles and len(self.num) == 1:
            return RatFunc(K, P.scale(K, other.num, self.num[0]), other.poles, canonical=True)
        ex = dict(self.poles)
        for a, k in other.poles:
            ex[a] = ex.get(a, 0) + k
        return RatFunc(K, P.mul(K, self.num, other.num), _sorted_poles(K, ex))

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply by a raw field element."""
        return RatFunc(self.K, P.scale(self.K, self.num, c), self.poles, canonical=True)

    def inverse(self, hints=()):
        K = self.K
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        roots, lc = split_roots(K, self.num, hints)
        num = P.scale(K, self.den, K.inv(lc))
        return RatFunc(K, num, tuple(roots), canonical=True)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse(hints=[a for a, _ in self.poles])

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        K = self.K
        if e == 0:
            return RatFunc.one(K)
        return RatFunc(K, P.power(K, self.num, e), tuple((a, k * e) for a, k in self.poles), canonical=True)

    def frobenius(self):
        """f**p, computed coefficientwise."""
        K = self.K
        p = K.p
        return RatFunc(K, P.frobenius(K, self.num), tuple((a, k * p) for a, k in self.poles), canonical=True)

    def derivative(self):
        K = self.K
        if not self.poles:
            return RatFunc(K, P.derivative(K, self.num), (), canonical=True)
        # (N/D)' with D = prod (x-a)^k:  N'/D - N * sum k/(x-a) / D
        out = RatFunc(K, P.derivative(K, self.num), self.poles)
        for a, k in self.poles:
            ck = K.from_int(k)
            if K.is_zero(ck):
                continue
            ex = dict(self.poles)
            ex[a] += 1
            out = out - RatFunc(K, P.scale(K, self.num, ck), _sorted_poles(K, ex))
        return out

    # -- partial fractions -------------------------------------------------

    def partial_fractions(self):
        if self._pf is None:
            self._pf = _partial_fractions(self)
        return self._pf

    def pole_order(self, pt):
        if pt is INF:
            return max(self.poly_degree(), 0)
        for a, k in self.poles:
            if a == pt:
                return k
        return 0

    def terms(self):
        """Iterate (coefficient, point, order) over nonzero partial-fraction
        terms; the polynomial part appears with point INF (order 0 is the
        constant term)."""
        pf = self.partial_fractions()
        K = self.K
        for i, c in enumerate(pf.poly_part):
            if not K.is_zero(c):
                yield c, INF, i
        for a, cs in pf.terms.items():
            for l, c in enumerate(cs, start=1):
                if not K.is_zero(c):
                    yield c, a, l

    # -- change of field ---------------------------------------------------

    def map_coefficients(self, target, fn):
        """Apply a field homomorphism ``fn`` (raw -> raw in ``target``) to all
        coefficients and pole locations."""
        num = P.trim(target, [fn(c) for c in self.num])
        ex = {}
        for a, k in self.poles:
            b = fn(a)
            ex[b] = ex.get(b, 0) + k
        return RatFunc(target, num, _sorted_poles(target, ex))

    def specialize(self, value):
        """Substitute the parameter of F_q(t) by ``value`` (raw base element
        or FieldValue)."""
        K = self.K
        if not K.parametric:
            raise FieldError(f"{K} has no parameter to specialize")
        base = K.base
        if isinstance(value, FieldValue):
            value = base.embed(value) if value.field != base else value.raw
        try:
            return self.map_coefficients(base, lambda c: K.specialize(c, value))
        except SpecializationPoleError:
            raise SpecializationPoleError(f"coefficient pole of {self} at {K.name} = {base.format(value)}") from None

    # -- display -----------------------------------------------------------

    def __str__(self):
        return format_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({self}, {self.K})"


def _sorted_poles(K, ex):
    return tuple(sorted(((a, k) for a, k in ex.items() if k > 0), key=lambda ak: K.key(ak[0])))


def _canonicalize(K, num, poles):
    out = []
    for a, k in poles:
        while k > 0:
            q, r = _synthetic_div(K, num, a)
            if not K.is_zero(r):
                break
            num = q
            k -= 1
        if k > 0:
            out.append((a, k))
    out.sort(key=lambda ak: K.key(ak[0]))
    return num, tuple(out)


def _num_from_pf(K, pf, poles):
    exps = dict(poles)
    den = (K.one,)
    for a, k in poles:
        den = P.mul(K, den, P.power(K, _lin(K, a), k))
    num = P.mul(K, pf.poly_part, den) if pf.poly_part else ()
    for a, cs in pf.terms.items():
        k = exps[a]
        cof = (K.one,)
        for b, m in poles:
            if b != a:
                cof = P.mul(K, cof, P.power(K, _lin(K, b), m))
        # sum_l c_l (x-a)^{k-l}
        inner = ()
        lin = _lin(K, a)
        for l in range(1, k + 1):
            inner = P.add(K, P.mul(K, inner, lin), P.const(K, cs[l - 1]) if l <= len(cs) else ())
        # inner was built highest power first: c_1 (x-a)^{k-1} + ... + c_k
        num = P.add(K, num, P.mul(K, inner, cof))
    return num


def _taylor_head(K, f, a, k):
    """First k Taylor coefficients of f at a (repeated synthetic division)."""
    out = []
    for _ in range(k):
        if not f:
            out.append(K.zero)
            continue
        f, r = _synthetic_div(K, f, a)
        out.append(r)
    return out


def _partial_fractions(f):
    K = f.K
    if not f.poles:
        return PartialFractions(K, f.num, {})
    total = sum(k for _, k in f.poles)
    if len(f.num) - 1 >= total:
        poly_part = P.quo(K, f.num, f.den)
    else:
        poly_part = ()
    terms = {}
    for a, k in f.poles:
        # series of N(y+a) / prod_{b != a} (y + a - b)^m, truncated at y^k
        ser = _taylor_head(K, f.num, a, k)
        for b, m in f.poles:
            if b == a:
                continue
            c = K.sub(a, b)
            ci = K.inv(c)
            for _ in range(m):
                # divide by (c + y): s'_j = (s_j - s'_{j-1}) / c
                prev = K.zero
                for j in range(k):
                    prev = K.mul(K.sub(ser[j], prev), ci)
                    ser[j] = prev
        # coefficient of (x-a)^{-l} is ser[k-l]
        terms[a] = tuple(ser[k - l] for l in range(1, k + 1))
    return PartialFractions(K, poly_part, terms)


def partial_fractions(f):
    return f.partial_fractions()


def pole_order(f, pt):
    return f.pole_order(_coerce_point(f.K, pt))


def _coerce_point(K, pt):
    if pt is INF or pt == "inf" or pt == "oo":
        return INF
    if isinstance(pt, FieldValue):
        return K.embed(pt) if pt.field != K else pt.raw
    if isinstance(pt, int):
        return K.from_int(pt)
    if isinstance(pt, str):
        from .parse import parse_field_element
        return parse_field_element(pt, K).raw
    return pt


def recombine(pf):
    K = pf.field
    out = RatFunc.from_poly(K, pf.poly_part)
    for a, cs in pf.terms.items():
        for l, c in enumerate(cs, start=1):
            if not K.is_zero(c):
                out = out + RatFunc.pole_term(K, c, a, l)
    return out


def specialize(f, value):
    return f.specialize(value)


def format_ratfunc(f):
    """Partial-fraction text, e.g. ``1/(x-1)^7+1/(x-2)^12+x``."""
    K = f.K
    if not f.num:
        return "0"
    pf = f.partial_fractions()
    terms = []
    for a, cs in pf.terms.items():
        lin = linear_factor_str(K, a)
        for l in range(len(cs), 0, -1):
            c = cs[l - 1]
            if K.is_zero(c):
                continue
            if l == 1:
                den = lin if lin == "x" else f"({lin})"
            else:
                den = f"{lin}^{l}" if lin == "x" else f"({lin})^{l}"
            cstr = K.format(c)
            if not _atomic(cstr) or "/" in cstr:
                cstr = f"({cstr})"
            terms.append(f"{cstr}/{den}")
    for i in range(len(pf.poly_part) - 1, -1, -1):
        c = pf.poly_part[i]
        if not K.is_zero(c):
            terms.append(_format_term(K, c, _power_str("x", i)))
    return _join(terms)


# -- root finding ------------------------------------------------------------


def split_roots(K, f, hints=()):
    """Factor f = lc * prod (x - a)^m completely over K.

    Returns (sorted [(a, m)], lc). Tries the ``hints`` first; raises
    UnsplitPoleError when an irreducible factor of degree > 1 remains.
    """
    f = P.trim(K, f)
    lc = f[-1]
    f = P.monic(K, f)
    found = {}
    for h in hints:
        if len(f) <= 1:
            break
        if h is INF:
            continue
        m, f = P.multiplicity(K, f, h)
        if m:
            found[h] = found.get(h, 0) + m
    if len(f) > 1:
        if K.parametric:
            more, rest = _parametric_roots(K, f)
        else:
            more, rest = P.roots(K, f)
        for a, m in more:
            found[a] = found.get(a, 0) + m
        if len(rest) > 1:
            ext = None
            if not K.parametric:
                from .fields import minimal_splitting_degree
                ext = minimal_splitting_degree(K, rest)
            raise UnsplitPoleError(format_poly(K, rest), ext)
    return list(_sorted_poles(K, found)), lc


def _monic_divisors(B, g):
    facs = P.factor(B, g)
    choices = [[P.power(B, h, e) for e in range(m + 1)] for h, m in facs]
    for combo in iproduct(*choices):
        d = (B.one,)
        for c in combo:
            d = P.mul(B, d, c)
        yield d


def _parametric_roots(K, f):
    """Roots in F_q(t) of a monic f in F_q(t)[x], by the rational root theorem."""
    B = K.base
    found = []
    m0, f = P.multiplicity(K, f, K.zero)
    if m0:
        found.append((K.zero, m0))
    changed = True
    while len(f) > 1 and changed:
        changed = False
        # clear denominators: coefficients become polynomials in t
        lcm = (B.one,)
        for c in f:
            d = c[1]
            lcm = P.exact_quo(B, P.mul(B, lcm, d), P.gcd(B, lcm, d))
        ints = [P.mul(B, c[0], P.exact_quo(B, lcm, c[1])) for c in f]
        a0, an = ints[0], ints[-1]
        units = [u for u in B.elements() if not B.is_zero(u)]
        for num in _monic_divisors(B, a0):
            for den in _monic_divisors(B, an):
                if len(num) > 1 and len(den) > 1 and len(P.gcd(B, num, den)) > 1:
                    continue
                for u in units:
                    r = K.make(P.scale(B, num, u), den)
                    if K.is_zero(P.evaluate(K, f, r)):
                        m, f = P.multiplicity(K, f, r)
                        found.append((r, m))
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return found, f
