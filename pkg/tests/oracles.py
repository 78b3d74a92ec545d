"""Independent reference implementations used to cross-check the library.

Nothing here imports the code under test except to build inputs, so each
oracle is a second route to the same answer.
"""

from functools import lru_cache
from itertools import product
from math import gcd


# -- partitions: generate and filter -------------------------------------------


def oracle_row_ok(row, p):
    """Validity of a conductor row, written out directly from the rules."""
    nz = [i for i, e in enumerate(row) if e]
    if not nz:
        return False
    k = nz[0]
    if any(row[i] == 0 for i in range(k, len(row))):
        return False
    if any(e == 1 for e in row):
        return False
    if (row[k] - 1) % p == 0:
        return False
    for i in range(k + 1, len(row)):
        lo = p * row[i - 1] - p + 1
        if row[i] < lo:
            return False
        if row[i] > lo and (row[i] - 1) % p == 0:
            return False
    return True


def brute_partitions(d, p):
    """Every multiset of valid rows summing to d: all ordered compositions,
    canonicalized into a set."""
    d = tuple(d)
    rows = [r for r in product(*(range(x + 1) for x in d)) if oracle_row_ok(r, p)]

    @lru_cache(maxsize=None)
    def comps(rem):
        if not any(rem):
            return frozenset({()})
        out = set()
        for r in rows:
            if all(a <= b for a, b in zip(r, rem)):
                rest = tuple(b - a for a, b in zip(r, rem))
                for tail in comps(rest):
                    out.add(tuple(sorted((r,) + tail, reverse=True)))
        return frozenset(out)

    return set(comps(d))


def brute_refines(m_rows, n_rows):
    """Try every map rows(N) -> rows(M)."""
    m_rows, n_rows = list(m_rows), list(n_rows)
    k = len(m_rows[0])
    for assign in product(range(len(m_rows)), repeat=len(n_rows)):
        sums = [[0] * k for _ in m_rows]
        for j, t in enumerate(assign):
            for c in range(k):
                sums[t][c] += n_rows[j][c]
        if set(assign) == set(range(len(m_rows))) and [tuple(s) for s in sums] == [tuple(r) for r in m_rows]:
            return True
    return False


# -- Witt vectors via ghost components over Z ----------------------------------


def ghost_add_integers(p, xs, ys):
    """Witt sum of integer vectors through ghost components."""
    n = len(xs)
    ghost = [sum(p ** i * xs[i] ** (p ** (k - i)) for i in range(k + 1))
             + sum(p ** i * ys[i] ** (p ** (k - i)) for i in range(k + 1)) for k in range(n)]
    s = []
    for k in range(n):
        rest = ghost[k] - sum(p ** i * s[i] ** (p ** (k - i)) for i in range(k))
        assert rest % p ** k == 0
        s.append(rest // p ** k)
    return s


# Laurent polynomials over Z as {exponent: coefficient}

def lp_add(f, g, c=1):
    out = dict(f)
    for e, a in g.items():
        out[e] = out.get(e, 0) + c * a
    return {e: a for e, a in out.items() if a}


def lp_mul(f, g):
    out = {}
    for e1, a1 in f.items():
        for e2, a2 in g.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + a1 * a2
    return {e: a for e, a in out.items() if a}


def lp_pow(f, k):
    out = {0: 1}
    base = f
    while k:
        if k & 1:
            out = lp_mul(out, base)
        base = lp_mul(base, base)
        k >>= 1
    return out


def lp_scale(f, c):
    return {e: a * c for e, a in f.items() if a * c}


def ghost_add_laurent(p, xs, ys):
    """Witt sum of vectors of integer Laurent polynomials, reduced mod p."""
    n = len(xs)
    s = []
    for k in range(n):
        tot = {}
        for v in (xs, ys):
            for i in range(k + 1):
                tot = lp_add(tot, lp_scale(lp_pow(v[i], p ** (k - i)), p ** i))
        for i in range(k):
            tot = lp_add(tot, lp_scale(lp_pow(s[i], p ** (k - i)), p ** i), -1)
        assert all(a % p ** k == 0 for a in tot.values())
        s.append({e: a // p ** k for e, a in tot.items()})
    return [{e: a % p for e, a in f.items() if a % p} for f in s]


# -- exactness by solving for an antiderivative ---------------------------------


def _solve_mod_p(rows, rhs, p):
    """Is A x = b solvable over F_p?"""
    A = [list(r) + [b] for r, b in zip(rows, rhs)]
    m = len(A[0]) - 1
    rank = 0
    for col in range(m):
        piv = next((i for i in range(rank, len(A)) if A[i][col] % p), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][col], p - 2, p)
        A[rank] = [a * inv % p for a in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][col] % p:
                f = A[i][col]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[rank])]
        rank += 1
    return all(any(a % p for a in row[:-1]) or row[-1] % p == 0 for row in A)


def exact_by_antiderivative(u, v, a, p):
    """Is dx/(x^u (x-a)^v) exact over F_p, a != 0 in F_p?

    Look for g = G/(x^(u-1) (x-a)^(v-1)): g' = f becomes
    1 = G' x (x-a) - G ((u-1)(x-a) + (v-1) x), linear in the coefficients of G.
    """
    deg = u + v - 2
    size = deg + 3
    cols = []
    for k in range(deg + 1):
        # G = x^k
        poly = [0] * size
        if k:
            poly[k + 1] += k            # k x^(k-1) * x^2
            poly[k] -= k * a            # k x^(k-1) * (-a x)
        poly[k + 1] -= (u - 1) + (v - 1)
        poly[k] += (u - 1) * a
        cols.append([c % p for c in poly])
    rows = [[cols[k][i] for k in range(deg + 1)] for i in range(size)]
    rhs = [1] + [0] * (size - 1)
    return _solve_mod_p(rows, rhs, p)


# -- dimension by counting coefficients -----------------------------------------


def coefficient_count_oracle(rows, p):
    """N_M + s_n: free Laurent coefficients of a reduced vector with these
    conductors (orders 1..e-1 prime to p at each pole and level) plus one
    parameter per branch point."""
    count = 0
    for row in rows:
        for e in row:
            for order in range(1, e):
                if gcd(order, p) == 1:
                    count += 1
    return count + len(rows)


def brute_genus(rows, p, i):
    """g of the level-i cover from 2g - 2 = -2 p^i + sum of different exponents."""
    total = 0
    for row in rows:
        lead = [e for e in row[:i] if e]
        if not lead:
            continue
        m = len(lead)
        diff = sum(e * (p ** k - p ** (k - 1)) for k, e in enumerate(lead, start=1))
        total += p ** (i - m) * diff
    return (total - 2 * p ** i + 2) // 2
