"""Ramification of Artin-Schreier-Witt covers of the projective line.

From a Witt vector of rational functions: its reduced form, branch points,
upper jumps and the branching datum. From a datum: genus, p-rank and Swan
conductors, and a cover realizing it.
"""

from dataclasses import dataclass
from functools import lru_cache

from .datum import BranchingDatum, as_datum
from .errors import FieldError, InvalidDatumError, OrderDropError
from .fields import GF
from .ratfunc import INF, RatFunc
from .witt import WittVector, shifted_isogeny, witt_add


# -- reduction -----------------------------------------------------------------


@lru_cache(maxsize=None)
def _wp_preimages(K):
    """{y^p - y: y} over a finite field (one preimage per image value)."""
    out = {}
    for y in K.elements():
        out.setdefault(K.sub(K.frob(y), y), y)
    return out


def _constant_root(K, c):
    """Some y in K with y^p - y = c, or None."""
    if K.parametric:
        if not K.is_constant(c):
            return None
        base = K.base
        y = _wp_preimages(base).get(c[0][0] if c[0] else base.zero)
        return None if y is None else K.from_base(y)
    return _wp_preimages(K).get(c)


def _pth_root(K, c, where):
    try:
        return K.pth_root(c)
    except FieldError:
        raise FieldError(f"cannot reduce: coefficient {K.format(c)} of {where} has no p-th root in {K}") from None


def reduce(u, kill_constants=True):
    """Reduced representative of the class of u.

    Returns (w, h) with u = w + wp(h). No nonconstant partial-fraction term of
    w has order divisible by p; a constant entry c is removed when
    y^p - y = c is solvable in the coefficient field.
    """
    p, n, K = u.p, u.n, u.K
    h = WittVector.zero(p, n, K)
    cur = u
    for level in range(1, n + 1):
        while True:
            f = cur.entries[level - 1]
            b = RatFunc.zero(K)
            for c, pt, l in f.terms():
                if l == 0:
                    if kill_constants:
                        y = _constant_root(K, c)
                        if y is not None and not K.is_zero(y):
                            b = b + RatFunc.const(K, y)
                elif l % p == 0:
                    r = _pth_root(K, c, f"order-{l} term at {_pt_str(K, pt)}")
                    b = b + RatFunc.pole_term(K, r, pt, l // p)
            if b.is_zero():
                break
            cur = witt_add(cur, -shifted_isogeny(p, n, level, b))
            shift = WittVector(p, [RatFunc.zero(K)] * (level - 1) + [b] + [RatFunc.zero(K)] * (n - level), K)
            h = witt_add(h, shift)
    return cur, h


def is_reduced(u):
    p = u.p
    for f in u.entries:
        for _, _, l in f.terms():
            if l and l % p == 0:
                return False
    return True


def _pt_str(K, pt):
    return "inf" if pt is INF else K.format(pt)


def point_key(K, pt):
    return (1, ()) if pt is INF else (0, K.key(pt))


# -- branching datum -----------------------------------------------------------


@dataclass(frozen=True)
class RamificationProfile:
    p: int
    n: int
    points: tuple
    jumps: tuple        # per point: (u_1..u_n), -1 where unbranched
    inertia: tuple      # per point: m with inertia Z/p^m
    swan: tuple         # per level: total Swan conductor

    def conductors(self):
        return tuple(tuple(u + 1 if u >= 0 else 0 for u in js) for js in self.jumps)


def jumps_at(u, pt):
    """Upper jumps of a reduced vector at one point: max_l p^{i-l} ord_pt(f_l)."""
    p = u.p
    out = []
    best = -1
    for f in u.entries:
        best = p * best if best > 0 else best
        o = f.pole_order(pt)
        if o > 0:
            best = max(best, o)
        out.append(best)
    return tuple(out)


def branching_datum(u, reduced=False):
    """Branching datum (with points) and ramification profile of the cover
    defined by wp(y) = u."""
    if not reduced:
        u, _ = reduce(u)
    K = u.K
    if u.entries[0].is_constant():
        raise OrderDropError("order drop: the reduced first entry is constant, so this is not a Z/p^n-cover")
    pts = set()
    for f in u.entries:
        pts.update(f.pole_points())
    points = tuple(sorted(pts, key=lambda pt: point_key(K, pt)))
    jumps = tuple(jumps_at(u, pt) for pt in points)
    rows = tuple(tuple(j + 1 if j >= 0 else 0 for j in js) for js in jumps)
    datum = BranchingDatum(u.p, rows, points)
    inertia = datum.inertia()
    sw = tuple(sum(swan(datum, j, i) for j in range(datum.r)) for i in range(1, u.n + 1))
    return datum, RamificationProfile(u.p, u.n, points, jumps, inertia, sw)


# -- invariants of a datum -----------------------------------------------------


def swan(d, j, i):
    """Swan conductor of row j (0-based) at level i (1-based)."""
    p = d.p
    return sum(e * (p ** l - p ** (l - 1)) for l, e in enumerate(d.rows[j][:i], start=1))


def row_swan(row, p, i=None):
    i = len(row) if i is None else i
    return sum(e * (p ** l - p ** (l - 1)) for l, e in enumerate(row[:i], start=1))


def genus_vector(d, base_genus=0):
    """(g_1, ..., g_n) of the tower Y_1 <- ... <- Y_n."""
    d = as_datum(d)
    d.validate()
    p = d.p
    out = []
    cols = d.d
    for i in range(1, d.n + 1):
        twice = 2 + 2 * p ** i * (base_genus - 1) + sum(cols[l - 1] * (p ** l - p ** (l - 1)) for l in range(1, i + 1))
        if twice % 2:
            raise InvalidDatumError(f"non-integral genus at level {i}")
        g = twice // 2
        if g < 0:
            raise InvalidDatumError(f"negative genus {g} at level {i}")
        out.append(g)
    return tuple(out)


def genus_riemann_hurwitz(d, base_genus=0):
    """Genus by counting points upstairs: a branch point with inertia Z/p^m at
    level i has p^{i-m} preimages, each with different exponent
    sum_k e_k (p^k - p^{k-1}) over the inertia filtration."""
    d = as_datum(d)
    p = d.p
    out = []
    for i in range(1, d.n + 1):
        total = 0
        for row in d.rows:
            nz = [e for e in row[:i] if e]
            m = len(nz)
            if not m:
                continue
            per_point = sum(e * (p ** k - p ** (k - 1)) for k, e in enumerate(nz, start=1))
            total += p ** (i - m) * per_point
        two_g_minus_2 = p ** i * (2 * base_genus - 2) + total
        out.append((two_g_minus_2 + 2) // 2)
    return tuple(out)


def inertia_counts(d, level=None):
    """m_k for k = 1..level: rows with exactly k nonzero entries among the
    first ``level`` columns (points of inertia exactly p^k)."""
    d = as_datum(d)
    level = d.n if level is None else level
    m = [0] * (level + 1)
    for row in d.rows:
        k = sum(1 for e in row[:level] if e)
        m[k] += 1
    return tuple(m[1:])


def column_support(d):
    """Number of nonzero entries in each column."""
    return tuple(sum(1 for e in col if e) for col in zip(*as_datum(d).rows))


def p_rank_vector(d):
    """Per-level p-ranks by the closed form, with both count vectors."""
    d = as_datum(d)
    d.validate()
    p, n = d.p, d.n
    sigma = []
    for i in range(1, n + 1):
        m = inertia_counts(d, i)
        sigma.append(1 - p ** i + sum(p ** (i - k) * (p ** k - 1) * m[k - 1] for k in range(1, i + 1)))
    m = inertia_counts(d)
    support = column_support(d)
    for i in range(1, n + 1):
        if support[i - 1] != sum(m[k - 1] for k in range(n - i + 1, n + 1)):
            raise AssertionError("column support and inertia counts disagree")
    return {"p_rank": tuple(sigma), "inertia_counts": m, "column_support": support}


def deuring_shafarevich(d, level=None):
    """p-rank by Deuring-Shafarevich over P^1: sigma - 1 = -p^i + sum (e_y - 1)
    over ramified points y upstairs, counted one at a time."""
    d = as_datum(d)
    p = d.p
    i = d.n if level is None else level
    total = 0
    for row in d.rows:
        m = sum(1 for e in row[:i] if e)
        if not m:
            continue
        for _ in range(p ** (i - m)):
            total += p ** m - 1
    return 1 - p ** i + total


# -- construction --------------------------------------------------------------


def default_points(K, r):
    pts = []
    for a in K.elements():
        if len(pts) == r:
            break
        pts.append(a)
    if len(pts) < r:
        pts.append(INF)
    if len(pts) < r:
        raise InvalidDatumError(f"{K} has too few points for {r} branch points")
    return tuple(pts)


def construct_cover(d, K=None):
    """A Witt vector whose cover has branching datum d (points from d or
    0, 1, 2, ... of the field)."""
    d = as_datum(d)
    d.validate()
    p = d.p
    if K is None:
        K = GF(p)
        while K.order < d.r - 1:
            K = GF(p, K.m + 1)
    points = d.points if d.points is not None else default_points(K, d.r)
    if sum(1 for pt in points if pt is INF) > 1:
        raise InvalidDatumError("at most one row may sit at infinity")
    entries = []
    for i in range(d.n):
        poly_part = ()
        terms = {}
        for row, pt in zip(d.rows, points):
            e = row[i]
            if e >= 2 and e % p != 1 % p:
                cs = (K.zero,) * (e - 2) + (K.one,)
                if pt is INF:
                    poly_part = (K.zero,) + cs
                else:
                    terms[pt] = cs
        entries.append(RatFunc.from_partial_fractions(K, poly_part, terms))
    return WittVector(p, entries, K)


def truncate(obj, i):
    """First i levels of a datum or a Witt vector."""
    return obj.truncate(i)
