"""Truncated Witt vectors W_n over a field of rational functions.

Only the additive structure is needed: sums, negation, integer multiples,
Frobenius, Verschiebung and the isogeny wp = F - id. The universal
polynomials come from the ghost-component recursion over the integers and
are reduced mod p afterwards.
"""

import json
import os
from functools import lru_cache
from math import comb

from .errors import ShapeMismatch, UnsupportedOperation, WittSizeError
from .ratfunc import RatFunc

DEFAULT_MAX_LEVEL = 4
max_level = int(os.environ.get("ASW_MODULI_MAX_LEVEL", DEFAULT_MAX_LEVEL))

CACHE_ENV = "ASW_MODULI_CACHE"


# -- integer polynomials as {exponent tuple: coefficient} ---------------------


def _zadd(f, g, sign=1):
    out = dict(f)
    for e, c in g.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _zmul(f, g):
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e)
    return out


def _zpow(f, k, nvars):
    result = {(0,) * nvars: 1}
    base = f
    while k:
        if k & 1:
            result = _zmul(result, base)
        k >>= 1
        if k:
            base = _zmul(base, base)
    return result


def _zscale(f, c):
    return {e: v * c for e, v in f.items()} if c else {}


def _zvar(i, nvars):
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): 1}


def _ghost(vars_, i, p, nvars):
    # w_i = sum_{l <= i} p^l V_l^{p^{i-l}}
    out = {}
    for l in range(i + 1):
        out = _zadd(out, _zscale(_zpow(vars_[l], p ** (i - l), nvars), p ** l))
    return out


def _exact_div(f, d):
    out = {}
    for e, c in f.items():
        if c % d:
            raise ArithmeticError("ghost recursion produced a non-integral coefficient")
        out[e] = c // d
    return out


def _recursion(p, n, nvars, target_ghost):
    """Solve w_i(S_0..S_i) = target_ghost(i) level by level over Z."""
    S = []
    for i in range(n):
        rest = target_ghost(i)
        for l in range(i):
            rest = _zadd(rest, _zscale(_zpow(S[l], p ** (i - l), nvars), p ** l), -1)
        S.append(_exact_div(rest, p ** i))
    return S


def integer_sum_polynomials(p, n):
    """Sum polynomials over Z in variables X_0..X_{n-1}, Y_0..Y_{n-1}."""
    nv = 2 * n
    X = [_zvar(i, nv) for i in range(n)]
    Y = [_zvar(n + i, nv) for i in range(n)]
    return _recursion(p, n, nv, lambda i: _zadd(_ghost(X, i, p, nv), _ghost(Y, i, p, nv)))


def ghost_check(p, n):
    """Verify w_i(S) = w_i(X) + w_i(Y) over the integers; returns True or raises."""
    nv = 2 * n
    S = integer_sum_polynomials(p, n)
    X = [_zvar(i, nv) for i in range(n)]
    Y = [_zvar(n + i, nv) for i in range(n)]
    for i in range(n):
        lhs = _ghost(S, i, p, nv)
        rhs = _zadd(_ghost(X, i, p, nv), _ghost(Y, i, p, nv))
        if _zadd(lhs, rhs, -1):
            raise ArithmeticError(f"ghost identity fails at level {i}")
    return True


def _mod_table(polys, p):
    return tuple(
        tuple(sorted((e, c % p) for e, c in f.items() if c % p))
        for f in polys
    )


class SumPolynomialTable:
    """Universal addition, negation and scalar polynomials for W_n, mod p.

    ``add[i]`` is a tuple of (exponents, coeff) in X_0..X_{n-1}, Y_0..Y_{n-1};
    ``neg[i]`` and scalar tables are in X_0..X_{n-1}.
    """

    def __init__(self, p, n, add, neg):
        self.p = p
        self.n = n
        self.add = add
        self.neg = neg
        self._scalar = {}

    def scalar(self, m):
        m %= self.p ** self.n
        if m not in self._scalar:
            n, p = self.n, self.p
            X = [_zvar(i, n) for i in range(n)]
            polys = _recursion(p, n, n, lambda i: _zscale(_ghost(X, i, p, n), m))
            self._scalar[m] = _mod_table(polys, p)
        return self._scalar[m]

    def to_json(self):
        def enc(tab):
            return [[[list(e), c] for e, c in f] for f in tab]
        return {"p": self.p, "n": self.n, "add": enc(self.add), "neg": enc(self.neg)}

    @classmethod
    def from_json(cls, data):
        def dec(tab):
            return tuple(tuple((tuple(e), c) for e, c in f) for f in tab)
        return cls(data["p"], data["n"], dec(data["add"]), dec(data["neg"]))


def _cache_path(p, n):
    d = os.environ.get(CACHE_ENV)
    if not d:
        return None
    return os.path.join(d, f"witt_sum_p{p}_n{n}.json")


@lru_cache(maxsize=None)
def build_sum_polynomials(p, n):
    if n < 1:
        raise ValueError("Witt length must be at least 1")
    if n > max_level:
        raise WittSizeError(f"Witt length {n} exceeds the cap {max_level} (set ASW_MODULI_MAX_LEVEL to raise it)")
    path = _cache_path(p, n)
    if path and os.path.exists(path):
        with open(path) as fh:
            return SumPolynomialTable.from_json(json.load(fh))
    add = integer_sum_polynomials(p, n)
    X = [_zvar(i, n) for i in range(n)]
    neg = _recursion(p, n, n, lambda i: _zscale(_ghost(X, i, p, n), -1))
    table = SumPolynomialTable(p, n, _mod_table(add, p), _mod_table(neg, p))
    if path:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        tmp = path + f".{os.getpid()}.tmp"
        with open(tmp, "w") as fh:
            json.dump(table.to_json(), fh)
        os.replace(tmp, path)
    return table


def format_integer_poly(terms, names=None):
    """Human-readable form of a table entry, e.g. ``X0*Y0+X1+Y1``. Default
    names suit sum polynomials (X0.., Y0..); pass names for other tables."""
    if names is None:
        k = len(terms[0][0]) // 2 if terms else 0
        names = [f"X{i}" for i in range(k)] + [f"Y{i}" for i in range(k)]
    out = []
    for e, c in sorted(terms, key=lambda ec: (sum(ec[0]), ec[0]), reverse=True):
        mono = "*".join(nm if k == 1 else f"{nm}^{k}" for nm, k in zip(names, e) if k)
        if not mono:
            out.append(str(c))
        else:
            out.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(out) if out else "0"


def _evaluate(table_entry, values, K):
    """Evaluate sum over monomials with RatFunc values, skipping zero variables."""
    zero_vars = {i for i, v in enumerate(values) if v.is_zero()}
    powers = {}
    acc = RatFunc.zero(K)
    for e, c in table_entry:
        if any(k and i in zero_vars for i, k in enumerate(e)):
            continue
        term = None
        for i, k in enumerate(e):
            if not k:
                continue
            key = (i, k)
            if key not in powers:
                powers[key] = values[i] ** k
            term = powers[key] if term is None else term * powers[key]
        if term is None:
            term = RatFunc.one(K)
        acc = acc + term.scale(K.from_int(c))
    return acc


class WittVector:
    """A length-n Witt vector (f_1, ..., f_n) of rational functions."""

    __slots__ = ("p", "entries", "K")

    def __init__(self, p, entries, K=None):
        entries = tuple(entries)
        if not entries:
            raise ValueError("empty Witt vector")
        if K is None:
            K = entries[0].K
        for f in entries:
            if f.K != K:
                raise ShapeMismatch("entries over different fields")
        if K.p != p:
            raise ShapeMismatch(f"field characteristic {K.p} differs from p = {p}")
        self.p = p
        self.entries = entries
        self.K = K

    @property
    def n(self):
        return len(self.entries)

    @classmethod
    def zero(cls, p, n, K):
        return cls(p, [RatFunc.zero(K)] * n, K)

    @classmethod
    def teichmuller(cls, p, n, f):
        K = f.K
        return cls(p, [f] + [RatFunc.zero(K)] * (n - 1), K)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return isinstance(other, WittVector) and self.p == other.p and self.entries == other.entries

    def __hash__(self):
        return hash((self.p, self.entries))

    def __repr__(self):
        return f"WittVector(p={self.p}, [{', '.join(str(f) for f in self.entries)}])"

    def is_zero(self):
        return all(f.is_zero() for f in self.entries)

    def _same_shape(self, other):
        if not isinstance(other, WittVector):
            raise ShapeMismatch("not a Witt vector")
        if self.p != other.p or self.n != other.n or self.K != other.K:
            raise ShapeMismatch(
                f"shape mismatch: (p={self.p}, n={self.n}, {self.K}) vs (p={other.p}, n={other.n}, {other.K})")

    def __add__(self, other):
        return witt_add(self, other)

    def __neg__(self):
        return witt_neg(self)

    def __sub__(self, other):
        return witt_add(self, witt_neg(other))

    def __rmul__(self, m):
        if isinstance(m, int):
            return witt_int_mul(m, self)
        return NotImplemented

    def frobenius(self):
        return WittVector(self.p, [f.frobenius() for f in self.entries], self.K)

    def verschiebung(self):
        return WittVector(self.p, [RatFunc.zero(self.K)] + list(self.entries[:-1]), self.K)

    def truncate(self, i):
        if not 1 <= i <= self.n:
            raise ValueError(f"level {i} outside 1..{self.n}")
        return WittVector(self.p, self.entries[:i], self.K)

    def map_entries(self, fn, K=None):
        entries = [fn(f) for f in self.entries]
        return WittVector(self.p, entries, K or entries[0].K)

    def specialize(self, value):
        return self.map_entries(lambda f: f.specialize(value))

    def to_json(self):
        return {"p": self.p, "n": self.n, "field": str(self.K), "entries": [str(f) for f in self.entries]}


def witt_add(u, v):
    u._same_shape(v)
    if v.is_zero():
        return u
    if u.is_zero():
        return v
    table = build_sum_polynomials(u.p, u.n)
    values = list(u.entries) + list(v.entries)
    out = []
    for i in range(u.n):
        # entries of level i only depend on the first i+1 of each side
        if all(v.entries[l].is_zero() for l in range(i + 1)):
            out.append(u.entries[i])
        elif all(u.entries[l].is_zero() for l in range(i + 1)):
            out.append(v.entries[i])
        else:
            out.append(_evaluate(table.add[i], values, u.K))
    return WittVector(u.p, out, u.K)


def witt_neg(u):
    if u.p != 2:
        return WittVector(u.p, [-f for f in u.entries], u.K)
    table = build_sum_polynomials(u.p, u.n)
    return WittVector(u.p, [_evaluate(table.neg[i], list(u.entries), u.K) for i in range(u.n)], u.K)


def witt_sub(u, v):
    return witt_add(u, witt_neg(v))


def witt_int_mul(m, u):
    """m * u via the universal scalar polynomials (m taken mod p^n)."""
    table = build_sum_polynomials(u.p, u.n)
    m %= u.p ** u.n
    if m == 0:
        return WittVector.zero(u.p, u.n, u.K)
    if m == 1:
        return u
    tab = table.scalar(m)
    return WittVector(u.p, [_evaluate(tab[i], list(u.entries), u.K) for i in range(u.n)], u.K)


def witt_int_mul_by_addition(m, u):
    """Reference route: double-and-add with witt_add."""
    m %= u.p ** u.n
    result = WittVector.zero(u.p, u.n, u.K)
    base = u
    while m:
        if m & 1:
            result = witt_add(result, base)
        m >>= 1
        if m:
            base = witt_add(base, base)
    return result


def frobenius(u):
    return u.frobenius()


def verschiebung(u):
    return u.verschiebung()


def asw_isogeny(u):
    """wp(u) = F(u) - u."""
    return witt_add(u.frobenius(), witt_neg(u))


def shifted_isogeny(p, n, level, b):
    """wp(V^{level-1}[b]) for b a RatFunc: zero below ``level`` (1-based)."""
    K = b.K
    k = n - level + 1
    inner = asw_isogeny(WittVector.teichmuller(p, k, b))
    return WittVector(p, [RatFunc.zero(K)] * (level - 1) + list(inner.entries), K)


def same_cover(u, v):
    """True iff u and m*v define the same cover for some unit m mod p^n."""
    from .ramify import reduce
    u._same_shape(v)
    if u.K.parametric:
        raise UnsupportedOperation("same_cover needs a finite coefficient field")
    p, n = u.p, u.n
    for m in range(1, p ** n):
        if m % p == 0:
            continue
        diff = witt_sub(u, witt_int_mul(m, v))
        red, _ = reduce(diff, kill_constants=True)
        if red.is_zero():
            return True
    return False


def witt_from_strings(p, entries, K):
    from .parse import parse_ratfunc
    return WittVector(p, [parse_ratfunc(s, K) for s in entries], K)
