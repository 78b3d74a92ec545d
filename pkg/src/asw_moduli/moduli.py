"""The partition sets Omega_d, the refinement order and the graph G_d.

Vertices are canonical conductor matrices (rows in descending lexicographic
order). An edge M -> N means M refines to N with nothing strictly between.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .datum import BranchingDatum, as_datum, canonical_rows, column_sums, format_rows, row_is_valid, row_violations
from .errors import InadmissibleError


def validate_datum(M, p=None, d=None):
    """(valid, diagnostics). Diagnostics list every violated condition, in
    row order; conditions 1-3 are per row, condition 4 is the column sums."""
    M = as_datum(M, p)
    diags = M.violations()
    if d is not None and tuple(M.d) != tuple(d):
        diags.append(f"condition 4: column sums {list(M.d)} differ from {list(d)}")
    return not diags, diags


def check_admissible(d, p):
    d = tuple(d)
    if not d or d[0] < 1:
        raise InadmissibleError(f"inadmissible conductors {list(d)}: need d_1 >= 1")
    for i in range(1, len(d)):
        if d[i] < p * d[i - 1] - p:
            raise InadmissibleError(
                f"inadmissible conductors {list(d)}: d_{i + 1} = {d[i]} < {p}*{d[i - 1]}-{p}")
    return d


def is_admissible(d, p):
    try:
        check_admissible(d, p)
        return True
    except InadmissibleError:
        return False


# -- enumeration -------------------------------------------------------------


def valid_rows(d, p):
    """All valid rows bounded entrywise by d, descending."""
    n = len(d)
    out = []

    def extend(row, i):
        if i == n:
            out.append(tuple(row))
            return
        prev = row[-1]
        lo = p * prev - p + 1
        for e in range(lo, d[i] + 1):
            if e == lo or e % p != 1 % p:
                extend(row + [e], i + 1)

    for z in range(n):
        for e in range(2, d[z] + 1):
            if e % p != 1 % p:
                extend([0] * z + [e], z + 1)
    out.sort(reverse=True)
    return out


@lru_cache(maxsize=256)
def _enumerate(d, p, essential_free=False):
    rows = valid_rows(d, p)
    if essential_free:
        rows = [r for r in rows if not essential_total(r, p)]
    n = len(d)
    found = []

    def dfs(start, rem, chosen):
        if not any(rem):
            found.append(tuple(chosen))
            return
        for k in range(start, len(rows)):
            row = rows[k]
            if all(row[i] <= rem[i] for i in range(n)):
                chosen.append(row)
                dfs(k, tuple(rem[i] - row[i] for i in range(n)), chosen)
                chosen.pop()

    dfs(0, d, [])
    found.sort(key=lambda rs: (len(rs), [tuple(-e for e in r) for r in rs]))
    return tuple(found)


def enumerate_partitions(d, p):
    """Omega_d: every valid matrix with column sums d, up to row order."""
    d = check_admissible(d, p)
    return [BranchingDatum(p, rs) for rs in _enumerate(d, p)]


# -- the order ---------------------------------------------------------------


def _grouping(m_rows, n_rows):
    """Is there a surjection rows(N) -> rows(M) with fiber sums = rows(M)?"""
    m_rows = [tuple(r) for r in m_rows]
    n_rows = sorted((tuple(r) for r in n_rows), reverse=True)
    if len(n_rows) < len(m_rows):
        return False
    if column_sums(m_rows) != column_sums(n_rows):
        return False
    k = len(m_rows[0]) if m_rows else 0
    resid = [list(r) for r in m_rows]
    used = [0] * len(m_rows)
    dead = set()          # (j, block state) already known to fail

    def place(j, empty):
        if j == len(n_rows):
            return empty == 0 and all(not any(r) for r in resid)
        if len(n_rows) - j < empty:
            return False
        state = (j, tuple(sorted((tuple(r), u > 0) for r, u in zip(resid, used))))
        if state in dead:
            return False
        row = n_rows[j]
        seen = set()
        for t in range(len(resid)):
            sig = (tuple(resid[t]), used[t] > 0)
            if sig in seen:
                continue
            seen.add(sig)
            if all(row[c] <= resid[t][c] for c in range(k)):
                for c in range(k):
                    resid[t][c] -= row[c]
                used[t] += 1
                ok = place(j + 1, empty - (used[t] == 1))
                used[t] -= 1
                for c in range(k):
                    resid[t][c] += row[c]
                if ok:
                    return True
        dead.add(state)
        return False

    return place(0, len(m_rows))


def refines(M, N, per_column=False):
    """M < N (or M = N): the rows of N group into blocks summing to the rows of M.

    With ``per_column`` each column may be grouped independently.
    """
    m_rows = _rows(M)
    n_rows = _rows(N)
    # each nonzero entry of M needs its own nonzero entry of N
    for c in range(len(m_rows[0])):
        if sum(1 for r in n_rows if r[c]) < sum(1 for r in m_rows if r[c]):
            return False
    if not per_column:
        return _grouping(m_rows, n_rows)
    if len(n_rows) < len(m_rows):
        return False
    for c in range(len(m_rows[0])):
        if not _grouping([(r[c],) for r in m_rows], [(r[c],) for r in n_rows]):
            return False
    return True


def _rows(M):
    if isinstance(M, BranchingDatum):
        return M.rows
    return tuple(tuple(r) for r in M)


# -- essential parts and dimensions --------------------------------------------


def essential_parts(row, p):
    """Per level (q_i, eps_i) with iota_i - p*iota_{i-1} = p*q_i + eps_i on
    jumps iota = e - 1; the first nonzero level counts as level 1 with
    iota_0 = 0 and zero-prefix levels report (0, 0)."""
    out = []
    prev = None
    for e in row:
        if e == 0:
            out.append((0, 0))
            continue
        iota = e - 1
        base = 0 if prev is None else p * prev
        q, eps = divmod(iota - base, p)
        out.append((q, eps))
        prev = iota
    return tuple(out)


def essential_total(row, p):
    return sum(q for q, _ in essential_parts(row, p))


def has_essential_parts(M, p=None):
    M = as_datum(M, p)
    return any(essential_total(r, M.p) for r in M.rows)


def dim_cov(M, p=None):
    """Dimension of the stratum of covers: r + sum (e - 1 - floor((e-1)/p))."""
    M = as_datum(M, p)
    return M.r + sum(e - 1 - (e - 1) // M.p for row in M.rows for e in row if e)


def dim_curve(M, p=None):
    return dim_cov(M, p) - 3


def coefficient_count(M, p=None):
    """r plus the number of free Laurent coefficients: for each conductor e,
    the exponents l in [1, e-1] prime to p."""
    M = as_datum(M, p)
    return M.r + sum(1 for row in M.rows for e in row if e for l in range(1, e) if l % M.p)


def components(d, p):
    """Vertices without essential parts (irreducible components) with dims.

    Being essential-free is a per-row property, so only such rows are tried.
    """
    d = check_admissible(d, p)
    out = []
    for rs in _enumerate(d, p, True):
        M = BranchingDatum(p, rs)
        out.append({"datum": M, "dim_cov": dim_cov(M), "dim_curve": dim_curve(M)})
    return out


def irreducible(d, p):
    """Closed-form irreducibility predicate on the conductors."""
    d = check_admissible(d, p)
    if d[0] not in (2, 3):
        return False
    for i in range(1, len(d)):
        if d[i] not in (p * d[i - 1] - p + 1, p * d[i - 1] - p + 2):
            return False
    return True


def irreducible_by_components(d, p):
    return len(components(d, p)) == 1


def strata(d, s, p):
    """Omega_{d,s}: vertices whose column supports are s."""
    s = tuple(s)
    from .ramify import column_support
    return [M for M in enumerate_partitions(d, p) if column_support(M) == s]


def disconnected_criterion(d1, p):
    return p >= 5 and 3 <= d1 <= 2 * p - 2


def theta(M, level):
    """Truncation of a datum to its first ``level`` columns, canonicalized."""
    return as_datum(M).truncate(level).canonical()


# -- the graph -----------------------------------------------------------------


@dataclass
class PartitionGraph:
    p: int
    d: tuple
    vertices: list
    edges: list                       # (i, j) index pairs, i -> j
    annotations: list = field(default_factory=list)
    per_column_divergence: list = field(default_factory=list)

    def component_indices(self):
        return [i for i, a in enumerate(self.annotations) if a["component"]]

    def minimal(self):
        """Vertices with no outgoing edge."""
        out = {i for i, _ in self.edges}
        return [i for i in range(len(self.vertices)) if i not in out]

    def is_connected(self):
        if not self.vertices:
            return True
        adj = {i: set() for i in range(len(self.vertices))}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj[v] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == len(self.vertices)

    def to_dot(self):
        lines = [f'digraph "Omega_{format_rows([self.d])[1:-1]}_p{self.p}" {{']
        for i, (M, a) in enumerate(zip(self.vertices, self.annotations)):
            shape = "doublecircle" if a["component"] else "circle"
            strata_lbl = ",".join(str(s) for s in a["column_support"])
            lines.append(f'  v{i} [label="{format_rows(M.rows)}", shape={shape}, strata="{strata_lbl}", '
                         f'dim_cov={a["dim_cov"]}, essential={a["essential"]}];')
        for i, j in self.edges:
            lines.append(f"  v{i} -> v{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        comps = [{"rows": [list(r) for r in self.vertices[i].rows],
                  "dim_cov": self.annotations[i]["dim_cov"],
                  "dim_curve": self.annotations[i]["dim_curve"]} for i in self.component_indices()]
        return {
            "p": self.p,
            "d": list(self.d),
            "vertices": [{"rows": [list(r) for r in M.rows], **{k: (list(v) if isinstance(v, tuple) else v)
                                                              for k, v in a.items()}}
                         for M, a in zip(self.vertices, self.annotations)],
            "edges": [[i, j] for i, j in self.edges],
            "components": comps,
            "irreducible": irreducible(self.d, self.p),
            "irreducible_by_components": len(comps) == 1,
            "disconnected_criterion": disconnected_criterion(self.d[0], self.p),
            "graph_connected": self.is_connected(),
        }


def _relation_row(args):
    i, rows, per_column = args
    r = len(rows[i])
    return [j == i or (len(rows[j]) > r and refines(rows[i], rows[j], per_column)) for j in range(len(rows))]


def build_graph(d, p, jobs=1, per_column=False):
    from .ramify import column_support
    vertices = enumerate_partitions(d, p)
    rows = [M.rows for M in vertices]
    k = len(rows)
    tasks = [(i, rows, per_column) for i in range(k)]
    if jobs > 1 and k > 16:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rel = list(ex.map(_relation_row, tasks))
    else:
        rel = [_relation_row(t) for t in tasks]
    # transitive reduction on bitsets: j is covered by i unless reachable via some m
    succ = []
    for i in range(k):
        bits = 0
        for j in range(k):
            if j != i and rel[i][j]:
                bits |= 1 << j
        succ.append(bits)
    edges = []
    for i in range(k):
        through = 0
        bits = succ[i]
        while bits:
            low = bits & -bits
            through |= succ[low.bit_length() - 1]
            bits ^= low
        cover = succ[i] & ~through
        edges.extend((i, j) for j in range(k) if cover >> j & 1)
    divergence = []
    if not per_column and len(d) > 1:
        for i in range(k):
            for j in range(k):
                if (len(rows[j]) > len(rows[i]) and not rel[i][j]
                        and refines(rows[i], rows[j], per_column=True)):
                    divergence.append((i, j))
    ann = []
    for M in vertices:
        ess = sum(essential_total(r, p) for r in M.rows)
        ann.append({
            "column_support": column_support(M),
            "essential": ess,
            "dim_cov": dim_cov(M),
            "dim_curve": dim_curve(M),
            "component": ess == 0,
        })
    return PartitionGraph(p, tuple(d), vertices, edges, ann, divergence)
