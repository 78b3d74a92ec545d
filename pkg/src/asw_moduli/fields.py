"""Exact coefficient fields.

Three kinds are supported: the prime field F_p, extension fields F_{p^m}
given by a monic irreducible modulus, and the rational function field
F_q(t) in one transcendental parameter. Field objects work on *raw*
elements (ints, or numerator/denominator tuples for F_q(t)); the public
:class:`FieldValue` wraps a raw element together with its field.
"""

from functools import lru_cache
import itertools

import numpy as np

from . import poly as P
from .errors import DescriptorMismatch, FieldError, SpecializationPoleError, UnsupportedOperation

# numpy convolution is exact while products stay below 2**62
_NP_LIMIT = 1 << 62

# extension fields keep log/antilog tables; bigger fields are not desk scale
MAX_FIELD_ORDER = 1 << 16


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class Field:
    """Common interface. Subclasses define the raw-element operations."""

    p: int
    parametric = False

    def __eq__(self, other):
        return isinstance(other, Field) and self.key_tuple() == other.key_tuple()

    def __hash__(self):
        return hash(self.key_tuple())

    def __repr__(self):
        return f"<field {self}>"

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def frob(self, a):
        return self.pow(a, self.p)

    def poly_mul(self, f, g):
        return P.generic_mul(self, f, g)

    def __call__(self, value):
        """Coerce an int, raw element or string to a :class:`FieldValue`."""
        if isinstance(value, FieldValue):
            if value.field != self:
                return FieldValue(self, self.embed(value))
            return value
        if isinstance(value, int):
            return FieldValue(self, self.from_int(value))
        if isinstance(value, str):
            from .parse import parse_field_element
            return parse_field_element(value, self)
        return FieldValue(self, value)

    def embed(self, value):
        raise DescriptorMismatch(f"cannot embed {value.field} into {self}")

    @property
    def base(self):
        return self

    @property
    def gen(self):
        raise UnsupportedOperation(f"{self} has no generator")


class PrimeField(Field):
    def __init__(self, p):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.m = 1
        self.order = p
        self.zero = 0
        self.one = 1
        self.modulus = None

    def key_tuple(self):
        return ("F", self.p, 1, None)

    def __str__(self):
        return f"F{self.p}"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return n % self.p

    def frob(self, a):
        return a

    def pth_root(self, a):
        return a

    def elements(self):
        return range(self.p)

    def random_element(self, rng):
        return rng.randrange(self.p)

    def key(self, a):
        return a

    def format(self, a):
        return str(a)

    def poly_mul(self, f, g):
        p = self.p
        if min(len(f), len(g)) < 24 or (p - 1) ** 2 * min(len(f), len(g)) >= _NP_LIMIT:
            out = [0] * (len(f) + len(g) - 1)
            for i, a in enumerate(f):
                if a:
                    for j, b in enumerate(g):
                        out[i + j] += a * b
            out = [c % p for c in out]
        else:
            out = (np.convolve(np.array(f, dtype=np.int64), np.array(g, dtype=np.int64)) % p).tolist()
        while out and out[-1] == 0:
            out.pop()
        return tuple(out)

    def embed(self, value):
        if value.field.p == self.p and value.field.m == 1 and not value.field.parametric:
            return value.raw
        return super().embed(value)


class ExtensionField(Field):
    """F_{p^m} = F_p[g]/(modulus). Elements are ints whose base-p digits are
    the coefficients of 1, g, g^2, ..."""

    def __init__(self, p, m, modulus=None):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        if p ** m > MAX_FIELD_ORDER:
            raise FieldError(f"F_{p}^{m} exceeds the desk-scale bound {MAX_FIELD_ORDER}")
        Fp = prime_field(p)
        if modulus is None:
            modulus = default_modulus(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree m")
        if not P.is_irreducible(Fp, modulus):
            raise FieldError(f"modulus {modulus} is not irreducible over F_{p}")
        self.p = p
        self.m = m
        self.order = p ** m
        self.modulus = modulus
        self.zero = 0
        self.one = 1
        self._build_tables()

    def key_tuple(self):
        return ("F", self.p, self.m, self.modulus)

    def __str__(self):
        name = f"F{self.order}"
        if self.modulus != default_modulus(self.p, self.m):
            name += "[" + _format_int_poly(self.modulus, "g") + "]"
        return name

    def _digits(self, a):
        p = self.p
        out = []
        for _ in range(self.m):
            out.append(a % p)
            a //= p
        return out

    def _from_digits(self, ds):
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def _build_tables(self):
        p, m, q = self.p, self.m, self.order
        Fp = prime_field(p)

        def polymulmod(a, b):
            prod = P.mul(Fp, P.trim(Fp, self._digits(a)), P.trim(Fp, self._digits(b)))
            r = P.rem(Fp, prod, self.modulus)
            return self._from_digits(list(r) + [0] * (m - len(r)))

        for cand in range(2, q) if q > 2 else [1]:
            exp = [1]
            x = cand
            while x != 1:
                exp.append(x)
                x = polymulmod(x, cand)
                if len(exp) > q:
                    break
            if len(exp) == q - 1:
                break
        else:
            cand, exp = 1, [1]
        self._exp = exp
        self._log = {v: i for i, v in enumerate(exp)}
        self._primitive = cand

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        p = self.p
        out, place = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def neg(self, a):
        if self.p == 2:
            return a
        p = self.p
        out, place = 0, 1
        while a:
            out += (-(a % p) % p) * place
            a //= p
            place *= p
        return out

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[-self._log[a] % (self.order - 1)]

    def pow(self, a, e):
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 if e == 0 else 0
        return self._exp[self._log[a] * e % (self.order - 1)]

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return n % self.p

    def frob(self, a):
        return self.pow(a, self.p)

    def pth_root(self, a):
        return self.pow(a, self.order // self.p)

    def elements(self):
        return range(self.order)

    def random_element(self, rng):
        return rng.randrange(self.order)

    def key(self, a):
        return a

    @property
    def gen(self):
        return FieldValue(self, self.p)

    def format(self, a):
        return _format_int_poly(self._digits(a), "g")

    def embed(self, value):
        F = value.field
        if not F.parametric and F.p == self.p and F.m == 1:
            return value.raw
        if F == self:
            return value.raw
        return super().embed(value)


class RationalFunctionField(Field):
    """F_q(t): raw elements are (num, den) polynomial tuples over the base
    field, coprime, den monic."""

    parametric = True

    def __init__(self, base, name="t"):
        if base.parametric:
            raise UnsupportedOperation("nested parameters are not supported")
        self._base = base
        self.name = name
        self.p = base.p
        self.m = base.m
        self.order = None
        self.zero = ((), (base.one,))
        self.one = ((base.one,), (base.one,))

    def key_tuple(self):
        return ("R", self._base.key_tuple(), self.name)

    def __str__(self):
        return f"{self._base}({self.name})"

    @property
    def base(self):
        return self._base

    @property
    def gen(self):
        return FieldValue(self, ((self._base.zero, self._base.one), (self._base.one,)))

    def _norm(self, n, d):
        K = self._base
        if not d:
            raise ZeroDivisionError("inverse of zero")
        if not n:
            return self.zero
        if len(d) > 1:
            g = P.gcd(K, n, d)
            if len(g) > 1:
                n = P.exact_quo(K, n, g)
                d = P.exact_quo(K, d, g)
        lc = d[-1]
        if lc != K.one:
            inv = K.inv(lc)
            n = P.scale(K, n, inv)
            d = P.scale(K, d, inv)
        return (n, d)

    def make(self, num, den=None):
        K = self._base
        return self._norm(P.trim(K, num), P.trim(K, den) if den is not None else (K.one,))

    def add(self, a, b):
        K = self._base
        (an, ad), (bn, bd) = a, b
        if not an:
            return b
        if not bn:
            return a
        if ad == bd:
            return self._norm(P.add(K, an, bn), ad)
        return self._norm(P.add(K, P.mul(K, an, bd), P.mul(K, bn, ad)), P.mul(K, ad, bd))

    def neg(self, a):
        return (P.neg(self._base, a[0]), a[1])

    def mul(self, a, b):
        K = self._base
        (an, ad), (bn, bd) = a, b
        if not an or not bn:
            return self.zero
        if len(ad) == 1 and len(bd) == 1:
            return (P.mul(K, an, bn), (K.one,))
        g1 = P.gcd(K, an, bd) if len(bd) > 1 else (K.one,)
        g2 = P.gcd(K, bn, ad) if len(ad) > 1 else (K.one,)
        if len(g1) > 1:
            an, bd = P.exact_quo(K, an, g1), P.exact_quo(K, bd, g1)
        if len(g2) > 1:
            bn, ad = P.exact_quo(K, bn, g2), P.exact_quo(K, ad, g2)
        n = P.mul(K, an, bn)
        d = P.mul(K, ad, bd)
        lc = d[-1]
        if lc != K.one:
            inv = K.inv(lc)
            n, d = P.scale(K, n, inv), P.scale(K, d, inv)
        return (n, d)

    def inv(self, a):
        if not a[0]:
            raise ZeroDivisionError("inverse of zero")
        return self._norm(a[1], a[0])

    def is_zero(self, a):
        return not a[0]

    def from_int(self, n):
        K = self._base
        return (P.const(K, K.from_int(n)), (K.one,))

    def from_base(self, c):
        K = self._base
        return (P.const(K, c), (K.one,))

    def frob(self, a):
        K = self._base
        return (P.frobenius(K, a[0]), P.frobenius(K, a[1]))

    def pth_root(self, a):
        K = self._base
        try:
            return (P.pth_root(K, a[0]), P.pth_root(K, a[1]))
        except FieldError:
            raise FieldError(f"{self.format(a)} is not a p-th power in {self}") from None

    def is_pth_power(self, a):
        p = self.p
        return all(i % p == 0 or self._base.is_zero(c) for part in a for i, c in enumerate(part))

    def elements(self):
        raise UnsupportedOperation(f"{self} is infinite")

    def random_element(self, rng):
        K = self._base
        n = P.trim(K, [K.random_element(rng) for _ in range(3)])
        d = P.trim(K, [K.random_element(rng) for _ in range(2)] + [K.one])
        return self._norm(n, d)

    def key(self, a):
        K = self._base
        return (len(a[0]) + len(a[1]), tuple(K.key(c) for c in a[0]), tuple(K.key(c) for c in a[1]))

    def is_constant(self, a):
        return len(a[0]) <= 1 and len(a[1]) == 1

    def specialize(self, a, value):
        """Evaluate at parameter = value (a raw base element)."""
        K = self._base
        d = P.evaluate(K, a[1], value)
        if K.is_zero(d):
            raise SpecializationPoleError(f"{self.format(a)} has a pole at {self.name} = {K.format(value)}")
        return K.div(P.evaluate(K, a[0], value), d)

    def valuation(self, a):
        """t-adic valuation (order at parameter = 0)."""
        if not a[0]:
            raise ValueError("valuation of zero")
        K = self._base
        return P.valuation(K, a[0]) - P.valuation(K, a[1])

    def format(self, a):
        K = self._base
        num = _format_poly(K, a[0], self.name)
        if len(a[1]) == 1:
            return num
        den = _format_poly(K, a[1], self.name)
        if not _plain(num):
            num = f"({num})"
        if not _plain(den) or "*" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def embed(self, value):
        F = value.field
        if F == self._base or (not F.parametric and F.p == self.p and F.m == 1):
            c = self._base.embed(value) if F != self._base else value.raw
            return self.from_base(c)
        if F == self:
            return value.raw
        return super().embed(value)


def _plain(s):
    return not any(ch in s for ch in "+-/")


def _count_terms(K, f):
    return sum(1 for c in f if not K.is_zero(c))


def _is_monomial_one(K, f):
    return _count_terms(K, f) == 1 and f[-1] == K.one


def _format_int_poly(ds, var):
    terms = []
    for i in range(len(ds) - 1, -1, -1):
        c = ds[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
            continue
        mono = var if i == 1 else f"{var}^{i}"
        terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms) if terms else "0"


def _format_poly(K, f, var):
    """Format a polynomial with coefficients in a finite field K."""
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if K.is_zero(c):
            continue
        cs = K.format(c)
        if i == 0:
            terms.append(cs)
            continue
        mono = var if i == 1 else f"{var}^{i}"
        if c == K.one:
            terms.append(mono)
        else:
            if "+" in cs:
                cs = f"({cs})"
            terms.append(f"{cs}*{mono}")
    return "+".join(terms)


@lru_cache(maxsize=None)
def default_modulus(p, m):
    """First monic irreducible polynomial of degree m over F_p (lexicographic
    in the coefficients of x^0, ..., x^{m-1}, ordered by the highest first)."""
    Fp = prime_field(p)
    if m == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=m):
        f = tuple(reversed(tail)) + (1,)
        if f[0] == 0:
            continue
        if P.is_irreducible(Fp, f):
            return f
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")


@lru_cache(maxsize=None)
def prime_field(p):
    return PrimeField(p)


@lru_cache(maxsize=None)
def _gf(p, m, modulus):
    if m == 1:
        return prime_field(p)
    return ExtensionField(p, m, modulus)


def GF(p, m=1, modulus=None):
    """The finite field with p**m elements."""
    if modulus is not None:
        modulus = tuple(int(c) % p for c in modulus)
        if m > 1 and modulus == default_modulus(p, m):
            modulus = None
    return _gf(p, m, modulus)


@lru_cache(maxsize=None)
def rational_function_field(base, name="t"):
    return RationalFunctionField(base, name)


def parse_field_descriptor(text):
    """Parse names like ``F5``, ``F4``, ``F2(t)``, ``F5(a)``, ``F9[g^2+1]``."""
    from .parse import parse_field_name
    return parse_field_name(text)


class FieldValue:
    """An element of a coefficient field."""

    __slots__ = ("field", "raw")

    def __init__(self, field, raw):
        self.field = field
        self.raw = raw

    def _coerce(self, other):
        if isinstance(other, FieldValue):
            if other.field != self.field:
                raise DescriptorMismatch(f"{self.field} vs {other.field}")
            return other.raw
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldValue(self.field, self.field.add(self.raw, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldValue(self.field, self.field.sub(self.raw, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldValue(self.field, self.field.sub(b, self.raw))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldValue(self.field, self.field.mul(self.raw, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldValue(self.field, self.field.div(self.raw, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldValue(self.field, self.field.div(b, self.raw))

    def __neg__(self):
        return FieldValue(self.field, self.field.neg(self.raw))

    def __pow__(self, e):
        return FieldValue(self.field, self.field.pow(self.raw, e))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.raw == self.field.from_int(other)
        if not isinstance(other, FieldValue):
            return NotImplemented
        return self.field == other.field and self.raw == other.raw

    def __hash__(self):
        return hash((self.field, self.raw))

    def __bool__(self):
        return not self.field.is_zero(self.raw)

    def __str__(self):
        return self.field.format(self.raw)

    def __repr__(self):
        return f"FieldValue({self}, {self.field})"

    def sort_key(self):
        return self.field.key(self.raw)

    def inverse(self):
        return FieldValue(self.field, self.field.inv(self.raw))


def field_arith(a, b, op):
    """Exact ``a op b`` for op in add, sub, mul, div."""
    if a.field != b.field:
        raise DescriptorMismatch(f"{a.field} vs {b.field}")
    F = a.field
    fn = {"add": F.add, "sub": F.sub, "mul": F.mul, "div": F.div}[op]
    return FieldValue(F, fn(a.raw, b.raw))


def frobenius_inverse(a):
    """The unique b with b**p == a in a finite field."""
    if a.field.parametric:
        raise UnsupportedOperation("Frobenius is not surjective on a rational function field")
    return FieldValue(a.field, a.field.pth_root(a.raw))


def pth_root(a):
    """p-th root that also works in F_q(t) when ``a`` happens to be a p-th power."""
    return FieldValue(a.field, a.field.pth_root(a.raw))


def minimal_splitting_degree(field, factor):
    """Smallest m such that every irreducible factor of ``factor`` splits over
    the degree-m extension of ``field`` (lcm of the factor degrees)."""
    from math import lcm
    out = 1
    for g, _ in P.factor(field, factor):
        out = lcm(out, len(g) - 1)
    return out


def extension_containing(field, min_order):
    """A finite field containing ``field`` with at least ``min_order`` elements,
    together with the raw embedding map."""
    if field.parametric:
        raise UnsupportedOperation("extension of a parametric field")
    k = 1
    while field.order ** k < min_order:
        k += 1
    while field.p ** (field.m * k) > MAX_FIELD_ORDER and k > 1:
        k -= 1
    big = GF(field.p, field.m * k)
    if field.m == 1:
        return big, lambda a: a
    # send the generator of ``field`` to a root of its modulus in ``big``
    mod = tuple(big.from_int(c) for c in field.modulus)
    root = None
    for cand in big.elements():
        if big.is_zero(P.evaluate(big, mod, cand)):
            root = cand
            break
    if root is None:
        raise FieldError(f"{field} does not embed into {big}")
    powers = [big.pow(root, i) for i in range(field.m)]

    def embed(a):
        acc = big.zero
        for d, r in zip(field._digits(a), powers):
            if d:
                acc = big.add(acc, big.mul(big.from_int(d), r))
        return acc

    return big, embed
