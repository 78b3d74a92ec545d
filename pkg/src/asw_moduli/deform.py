"""Deformations: Pop splitting, explicit families, certificate checking and
the exactness obstruction for differential forms."""

from dataclasses import dataclass, field

from . import poly as P
from .datum import BranchingDatum, canonical_rows, column_sums, format_rows, format_type, row_violations
from .errors import ConstructionFailed, FieldError, InvalidDatumError, SpecializationPoleError
from .fields import GF, FieldValue, extension_containing, rational_function_field
from .moduli import essential_parts, has_essential_parts, refines
from .ramify import branching_datum, point_key, row_swan
from .ratfunc import INF, RatFunc, format_poly, split_roots
from .witt import WittVector, same_cover


# -- Pop splitting -------------------------------------------------------------


def pop_split(row, p):
    """Split a one-point row into an essential-free matrix with the same
    column sums. First row: jumps u_i = p*u_{i-1} + eps_i; then q_j rows
    (0, ..., 0, p, p^2, ...) starting at each essential level j."""
    row = tuple(row)
    bad = row_violations(row, p)
    if bad:
        raise InvalidDatumError("; ".join(bad))
    parts = essential_parts(row, p)
    n = len(row)
    z = 0
    while row[z] == 0:
        z += 1
    first = [0] * n
    prev = 0
    for i in range(z, n):
        q, eps = parts[i]
        u = p * prev + eps
        first[i] = u + 1
        prev = u
    rows = [tuple(first)]
    for j in range(z, n):
        q, _ = parts[j]
        for _ in range(q):
            rows.append(tuple([0] * j + [p ** (i - j + 1) for i in range(j, n)]))
    out = BranchingDatum(p, tuple(rows))
    assert column_sums(out.rows) == row
    return out


# -- explicit families -----------------------------------------------------------


def _one_point_form(f):
    """f = N / x^o with N a polynomial; returns (N, o)."""
    if not f.poles:
        return f.num, 0
    if len(f.poles) != 1 or not f.K.is_zero(f.poles[0][0]):
        raise InvalidDatumError(f"{f} is not supported at x = 0 alone")
    return f.num, f.poles[0][1]


def split_family(u, splits, K=None, name="t"):
    """Replace x^{o_l} in the denominator of entry l by
    x^{o_l - sum_k b_{k,l}} * prod_k (x - P_k)^{b_{k,l}}, keeping numerators.

    ``splits`` is a list of (point, (b_{k,1}, ..., b_{k,n})) with points given
    as strings, FieldValues or raw elements of F_q(t).
    """
    base = u.K
    if K is None:
        K = rational_function_field(base, name)
    pts = []
    for pt, bs in splits:
        if isinstance(pt, str):
            from .parse import parse_field_element
            pt = parse_field_element(pt, K).raw
        elif isinstance(pt, FieldValue):
            pt = K.embed(pt) if pt.field != K else pt.raw
        if len(bs) != u.n:
            raise InvalidDatumError("split exponents must have one entry per level")
        pts.append((pt, tuple(bs)))
    entries = []
    for l, f in enumerate(u.entries):
        num, o = _one_point_form(f)
        lifted = tuple(K.from_base(c) for c in num)
        if not lifted:
            entries.append(RatFunc.zero(K))
            continue
        total = sum(bs[l] for _, bs in pts)
        if total > o:
            raise InvalidDatumError(f"level {l + 1}: split exponents {total} exceed the pole order {o}")
        ex = {K.zero: o - total}
        for pt, bs in pts:
            if bs[l]:
                ex[pt] = ex.get(pt, 0) + bs[l]
        poles = tuple((a, k) for a, k in ex.items() if k)
        entries.append(RatFunc(K, lifted, poles))
    return WittVector(u.p, entries, K)


def default_plan(count, K, delta=0):
    """Points t^{k p^delta}, k = 1..count."""
    t = K.gen.raw
    return [K.pow(t, k * K.p ** delta) for k in range(1, count + 1)]


def pop_family(u, plan=None, K=None, name="t", verify=True, samples=5):
    """A family over F_q(t) deforming the one-point cover u to its Pop split.

    Returns (family, certificate). The construction splits the pole at 0 as
    in :func:`split_family`, with one new point per extra row of the split;
    the certificate is the contract and a failed check raises
    ConstructionFailed with the computed generic datum.
    """
    datum, _ = branching_datum(u)
    if datum.r != 1 or not u.K.is_zero(datum.points[0]):
        raise InvalidDatumError("pop_family needs a cover branched only at x = 0")
    row = datum.rows[0]
    target = pop_split(row, u.p)
    extra = target.rows[1:]
    if K is None:
        K = rational_function_field(u.K, name)
    if not extra:
        fam = u.map_entries(lambda f: f.map_coefficients(K, K.from_base), K)
        cert = verify_deformation(u, fam, samples=samples) if verify else None
        return fam, cert
    if plan is None:
        plan = default_plan(len(extra), K)
    if len(plan) != len(extra):
        raise InvalidDatumError(f"plan needs {len(extra)} points, got {len(plan)}")
    fam = split_family(u, list(zip(plan, extra)), K)
    if not verify:
        return fam, None
    cert = verify_deformation(u, fam, samples=samples)
    if not cert.valid:
        raise ConstructionFailed(f"family failed verification: {cert.failure}", cert.N)
    if canonical_rows(cert.N.rows) != canonical_rows(target.rows):
        raise ConstructionFailed(
            f"generic datum {format_rows(canonical_rows(cert.N.rows))} differs from the Pop split "
            f"{format_rows(canonical_rows(target.rows))}", cert.N)
    return fam, cert


def type_n_family(a0, K=None, a2=0, a4=0, a6=0, name="t"):
    """For p = 2: the special cover (1/x^3, (a0+a2x^2+a4x^4+a6x^6)/x^7) and
    the family splitting it to rows (2,3), (2,3), (0,2) with points 0, t^4
    and sqrt(a0) t^2."""
    from .fields import frobenius_inverse
    if not isinstance(a0, FieldValue):
        a0 = (K or GF(2))(a0)
    B = a0.field
    if B.p != 2:
        raise FieldError("this family lives in characteristic 2")
    if not a0:
        raise InvalidDatumError("a0 must be nonzero")
    T = K if K is not None and K.parametric else rational_function_field(B, name)
    coeffs = [a0] + [B(c) if not isinstance(c, FieldValue) else c for c in (a2, a4, a6)]
    num = [B.zero] * 7
    for i, c in enumerate(coeffs):
        num[2 * i] = c.raw
    num = P.trim(B, num)
    x3 = RatFunc(B, (B.one,), ((B.zero, 3),))
    special = WittVector(2, [x3, RatFunc(B, num, ((B.zero, 7),))], B)
    root = frobenius_inverse(a0).raw
    t = T.gen.raw
    p1 = T.pow(t, 4)
    p2 = T.mul(T.from_base(root), T.pow(t, 2))
    fam = split_family(special, [(p1, (1, 2)), (p2, (0, 2))], T)
    return special, fam


# -- certificates --------------------------------------------------------------


@dataclass
class DeformationCertificate:
    p: int
    n: int
    special: WittVector
    family: WittVector
    M: BranchingDatum = None
    N: BranchingDatum = None
    method: str = ""
    clusters: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    valid: bool = False
    failure: str = ""

    def type_string(self):
        if self.M is None or self.N is None:
            return "?"
        return format_type(canonical_rows(self.M.rows), canonical_rows(self.N.rows))

    def generic_jumps(self):
        """[(point string, jumps)] of the generic fiber."""
        if self.N is None:
            return []
        K = self.family.K
        return [(_point_str(K, pt), js) for pt, js in zip(self.N.points, self.N.jumps)]

    def to_json(self):
        Kf = self.family.K
        Ks = self.special.K
        return {
            "special": self.special.to_json(),
            "family": self.family.to_json(),
            "M": [list(r) for r in canonical_rows(self.M.rows)] if self.M else None,
            "N": [list(r) for r in canonical_rows(self.N.rows)] if self.N else None,
            "type": self.type_string(),
            "special_points": [{"point": _point_str(Ks, pt), "row": list(r)}
                               for pt, r in zip(self.M.points, self.M.rows)] if self.M else [],
            "generic_points": [{"point": _point_str(Kf, pt), "row": list(r), "jumps": list(js)}
                               for pt, r, js in zip(self.N.points, self.N.rows, self.N.jumps)] if self.N else [],
            "method": self.method,
            "clusters": self.clusters,
            "checks": [{"check": c, "ok": ok, "detail": d} for c, ok, d in self.checks],
            "valid": self.valid,
            "failure": self.failure or None,
        }


def _point_str(K, pt):
    return "inf" if pt is INF else K.format(pt)


def _limit(K, pt):
    """t -> 0 limit of a point of F_q(t) (raw base element or INF)."""
    if pt is INF:
        return INF
    if K.is_zero(pt):
        return K.base.zero
    if K.valuation(pt) < 0:
        return INF
    return K.specialize(pt, K.base.zero)


def _family_points(family):
    pts = set()
    for f in family.entries:
        pts.update(a for a, _ in f.poles)
    return sorted(pts, key=lambda a: family.K.key(a))


def _generic_symbolic(family):
    datum, _ = branching_datum(family)
    return datum


def _generic_by_sampling(family, samples):
    """Generic datum read off from specializations t = s over an extension
    field; every sample must give the same rows at the same family points."""
    K = family.K
    B = K.base
    big, embed = extension_containing(B, 256)
    fpts = _family_points(family)
    has_inf = any(f.poly_degree() > 0 for f in family.entries)
    proper = [big.p ** dd for dd in range(1, big.m) if big.m % dd == 0]
    results = []
    used = []
    exps = big._exp if hasattr(big, "_exp") else list(range(1, big.order))
    for s in exps[1:]:
        if len(results) == samples:
            break
        if any(big.pow(s, q) == s for q in proper):
            continue

        def ev(c, s=s):
            num = P.trim(big, [embed(a) for a in c[0]])
            den = P.trim(big, [embed(a) for a in c[1]])
            dv = P.evaluate(big, den, s)
            if big.is_zero(dv):
                raise SpecializationPoleError("coefficient pole")
            return big.div(P.evaluate(big, num, s), dv)

        try:
            images = [ev(a) for a in fpts]
        except SpecializationPoleError:
            continue
        if len(set(images)) != len(images):
            continue
        try:
            fiber = family.map_entries(lambda f: f.map_coefficients(big, ev), big)
            datum, _ = branching_datum(fiber)
        except SpecializationPoleError:
            continue
        back = dict(zip(images, fpts))
        if has_inf:
            back[INF] = INF
        rows = []
        for pt, row in zip(datum.points, datum.rows):
            if pt not in back:
                raise InvalidDatumError("a specialized branch point is not a pole of the family")
            rows.append((back[pt], row))
        rows.sort(key=lambda pr: point_key(K, pr[0]))
        results.append(tuple(rows))
        used.append(big.format(s))
    if not results:
        raise InvalidDatumError("no usable specialization found")
    agree = all(r == results[0] for r in results)
    rows = results[0]
    points = tuple(pt for pt, _ in rows)
    datum = BranchingDatum(family.p, tuple(r for _, r in rows), points)
    return datum, agree, f"sampling over {big} at {len(results)} points"


def verify_deformation(special, family, samples=5, claimed_M=None, claimed_N=None):
    """Check that ``family`` (over F_q(t)) deforms ``special`` and record
    the special and generic data, the t -> 0 clustering of generic branch
    points and per-cluster Swan conservation."""
    cert = DeformationCertificate(special.p, special.n, special, family)

    def check(name, ok, detail=""):
        cert.checks.append((name, bool(ok), detail))
        if not ok and not cert.failure:
            cert.failure = f"{name}: {detail}" if detail else name
        return ok

    p = special.p
    if family.p != p or family.n != special.n:
        check("shape", False, "special vector and family differ in p or n")
        return cert
    K = family.K
    if not K.parametric:
        K = rational_function_field(family.K)
        family = family.map_entries(lambda f: f.map_coefficients(K, K.from_base), K)
        cert.family = family
    if K.base != special.K:
        check("field", False, f"family over {K} but special fiber over {special.K}")
        return cert

    M, _ = branching_datum(special)
    cert.M = M
    try:
        fiber = family.specialize(K.base.zero)
    except SpecializationPoleError as exc:
        check("special fiber", False, str(exc))
        return cert
    if fiber == special:
        check("special fiber", True, "family at t=0 equals the special vector")
    else:
        check("special fiber", same_cover(fiber, special), "family at t=0 defines the special cover")

    try:
        N = _generic_symbolic(family)
        cert.method = f"symbolic over {K}"
        agree = True
    except FieldError:
        N, agree, cert.method = _generic_by_sampling(family, samples)
    cert.N = N
    check("generic datum", agree, "specializations disagree" if not agree else cert.method)

    # cluster generic points by their limit as t -> 0
    Ks = special.K
    special_rows = {pt: row for pt, row in zip(M.points, M.rows)}
    clusters = {}
    for pt, row in zip(N.points, N.rows):
        lim = _limit(K, pt)
        clusters.setdefault(lim, []).append((pt, row))
    all_ok = True
    for lim in sorted(set(clusters) | set(special_rows), key=lambda a: point_key(Ks, a)):
        grows = clusters.get(lim, [])
        srow = special_rows.get(lim, (0,) * special.n)
        sw_s = [row_swan(srow, p, i) for i in range(1, special.n + 1)]
        sw_g = [sum(row_swan(r, p, i) for _, r in grows) for i in range(1, special.n + 1)]
        ok = sw_s == sw_g
        all_ok &= ok
        cert.clusters.append({
            "special_point": _point_str(Ks, lim),
            "special_row": list(srow),
            "generic_points": [_point_str(K, pt) for pt, _ in grows],
            "generic_rows": [list(r) for _, r in grows],
            "swan_special": sw_s,
            "swan_generic": sw_g,
            "swan_ok": ok,
        })
    check("swan conservation", all_ok, "per-cluster Swan conductors")
    check("column sums", M.d == N.d, f"{list(M.d)} vs {list(N.d)}")
    check("refines", refines(M, N), "M refines to N")
    if claimed_M is not None:
        check("claimed M", canonical_rows(claimed_M) == canonical_rows(M.rows), format_rows(canonical_rows(M.rows)))
    if claimed_N is not None:
        check("claimed N", canonical_rows(claimed_N) == canonical_rows(N.rows), format_rows(canonical_rows(N.rows)))
    cert.valid = not cert.failure
    return cert


# -- exactness -------------------------------------------------------------------


def exactness(f):
    """Is f dx exact? Returns (exact, obstructions) where obstructions lists
    (point, order, coefficient) for terms c/(x-P)^l with l = 1 mod p and
    c x^i with i = -1 mod p."""
    K = f.K
    p = K.p
    obs = []
    for c, pt, l in f.terms():
        if pt is INF:
            if l % p == p - 1:
                obs.append((pt, l, c))
        elif l % p == 1 % p:
            obs.append((pt, l, c))
    return not obs, obs


@dataclass
class ExactnessResult:
    u: int
    v: int
    p: int
    exact_for_all: bool
    obstructions: list
    gcd: str
    closure_certified: bool
    roots: list
    factor_degrees: list

    def summary(self):
        if self.exact_for_all:
            return "exact for all a != 0"
        if self.closure_certified:
            return "no a; closure-certified"
        if self.roots:
            return "exact for a in {" + ", ".join(self.roots) + "}"
        return f"no a in the configured field; roots of degrees {self.factor_degrees} over the closure"

    def to_json(self):
        return {"u": self.u, "v": self.v, "p": self.p, "exact_for_all": self.exact_for_all,
                "obstructions": self.obstructions, "gcd": self.gcd,
                "closure_certified": self.closure_certified, "roots": self.roots,
                "factor_degrees": self.factor_degrees, "summary": self.summary()}


def exactness_search(u, v, p, m=1):
    """Nonzero a with dx/(x^u (x-a)^v) exact, by working over F_p(a)."""
    if u < 1 or v < 1:
        raise ValueError("u, v must be positive")
    Fp = GF(p)
    K = rational_function_field(Fp, "a")
    a = K.gen.raw
    f = RatFunc(K, (K.one,), tuple(sorted([(K.zero, u), (a, v)], key=lambda ak: K.key(ak[0]))), canonical=True)
    _, obs = exactness(f)
    nums = [c[0] for _, _, c in obs]
    out_obs = [f"order {l} at {_point_str(K, pt)}: {K.format(c)}" for pt, l, c in obs]
    if not nums:
        return ExactnessResult(u, v, p, True, out_obs, "0", False, [], [])
    g = ()
    for nm in nums:
        g = P.gcd(Fp, g, nm)
    gstr = format_poly(Fp, g, "a")
    # a common root a != 0 exists in the closure iff g has a factor other than a
    rest = g
    while len(rest) > 1 and rest[0] == 0:
        rest = rest[1:]
    if len(rest) <= 1:
        return ExactnessResult(u, v, p, False, out_obs, gstr, True, [], [])
    degrees = sorted(len(h) - 1 for h, _ in P.factor(Fp, rest))
    F = GF(p, m)
    lifted = tuple(F.from_int(c) for c in rest)
    found, _ = P.roots(F, lifted)
    roots = [F.format(r) for r, _ in found if not F.is_zero(r)]
    return ExactnessResult(u, v, p, False, out_obs, gstr, False, roots, degrees)
