"""Branching data: r x n conductor matrices, optionally with branch points."""

from dataclasses import dataclass, field
from typing import Optional

from .errors import InvalidDatumError


def row_violations(row, p):
    """Violated validity conditions of a single conductor row, in order."""
    out = []
    row = tuple(row)
    if not any(row):
        return ["zero row: a row needs a nonzero entry"]
    for i, e in enumerate(row):
        if e < 0 or e == 1:
            out.append(f"entry: row {list(row)} has entry {e} at level {i + 1}; entries are 0 or >= 2")
    k = 0
    while row[k] == 0:
        k += 1
    if any(e == 0 for e in row[k:]):
        out.append(f"shape: row {list(row)} has a zero after a nonzero entry")
    first = row[k]
    if first % p == 1 % p:
        out.append(f"condition 1: row {list(row)}: first nonzero entry {first} is 1 mod {p}")
    for i in range(k + 1, len(row)):
        prev, e = row[i - 1], row[i]
        if prev == 0 or e == 0:
            continue
        bound = p * prev - p + 1
        if e < bound:
            out.append(f"condition 2: row {list(row)}: {e} < {p}*{prev}-{p}+1 = {bound} at level {i + 1}")
        elif e > bound and e % p == 1 % p:
            out.append(f"condition 3: row {list(row)}: {e} > {bound} but {e} is 1 mod {p} at level {i + 1}")
    return out


def row_is_valid(row, p):
    return not row_violations(row, p)


def column_sums(rows):
    if not rows:
        return ()
    return tuple(sum(col) for col in zip(*rows))


def canonical_rows(rows):
    """Rows sorted in descending lexicographic order."""
    return tuple(sorted((tuple(r) for r in rows), reverse=True))


def format_rows(rows):
    return "[" + ",".join("[" + ",".join(str(e) for e in r) + "]" for r in rows) + "]"


def format_type(m_rows, n_rows):
    """``[4,8] -> [[2,3],[2,3],[0,2]]``: a one-row M prints flat."""
    left = format_rows(m_rows)
    if len(m_rows) == 1:
        left = left[1:-1]
    return f"{left} -> {format_rows(n_rows)}"


@dataclass(frozen=True)
class BranchingDatum:
    p: int
    rows: tuple
    points: Optional[tuple] = field(default=None, compare=True)

    def __post_init__(self):
        rows = tuple(tuple(int(e) for e in r) for r in self.rows)
        if not rows:
            raise InvalidDatumError("a branching datum needs at least one row")
        n = len(rows[0])
        if n == 0 or any(len(r) != n for r in rows):
            raise InvalidDatumError("rows must have a common positive length")
        object.__setattr__(self, "rows", rows)
        if self.points is not None:
            pts = tuple(self.points)
            if len(pts) != len(rows):
                raise InvalidDatumError("points must align with rows")
            if len(set(pts)) != len(pts):
                raise InvalidDatumError("branch points must be distinct")
            object.__setattr__(self, "points", pts)

    @property
    def n(self):
        return len(self.rows[0])

    @property
    def r(self):
        return len(self.rows)

    @property
    def d(self):
        return column_sums(self.rows)

    @property
    def jumps(self):
        """Upper jumps u = e - 1, with -1 at unbranched levels."""
        return tuple(tuple(e - 1 if e else -1 for e in row) for row in self.rows)

    def violations(self):
        out = []
        for row in self.rows:
            out.extend(row_violations(row, self.p))
        return out

    def is_valid(self):
        return not self.violations()

    def validate(self):
        bad = self.violations()
        if bad:
            raise InvalidDatumError("; ".join(bad))
        return self

    def canonical(self):
        return BranchingDatum(self.p, canonical_rows(self.rows))

    def key(self):
        return canonical_rows(self.rows)

    def inertia(self):
        """Per row: m with inertia group Z/p^m at level n (nonzero count)."""
        return tuple(sum(1 for e in row if e) for row in self.rows)

    def truncate(self, i):
        if not 1 <= i <= self.n:
            raise ValueError(f"level {i} outside 1..{self.n}")
        keep = [j for j, row in enumerate(self.rows) if any(row[:i])]
        rows = tuple(self.rows[j][:i] for j in keep)
        pts = tuple(self.points[j] for j in keep) if self.points is not None else None
        return BranchingDatum(self.p, rows, pts)

    def __str__(self):
        return format_rows(self.rows)

    def to_json(self, point_format=str):
        out = {"p": self.p, "n": self.n, "rows": [list(r) for r in self.rows]}
        if self.points is not None:
            out["points"] = [point_format(pt) for pt in self.points]
        return out


def as_datum(M, p=None):
    if isinstance(M, BranchingDatum):
        return M
    if p is None:
        raise ValueError("p is required for a bare matrix")
    return BranchingDatum(p, tuple(tuple(r) for r in M))
