"""Exact linear algebra over the rationals.

Two layers:

* dense ``Fraction`` matrices (lists of lists) with reduced row echelon,
  nullspace and inverse, used where actual bases and projections are needed;
* ``IntSpan``, an incremental fraction-free row-space accumulator over the
  integers, used for the large sparse rank computations in the oracle.  Rows
  are combined by integer cross-multiplication and renormalized by their gcd,
  so no rounding or rank tolerance ever enters.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Vec = list[Fraction]
Mat = list[list[Fraction]]


def zeros(nrows: int, ncols: int) -> Mat:
    return [[Fraction(0)] * ncols for _ in range(nrows)]


def identity(n: int) -> Mat:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def transpose(a: Mat) -> Mat:
    return [list(col) for col in zip(*a)] if a else []


def mat_mul(a: Mat, b: Mat) -> Mat:
    if not a or not b:
        return []
    n, k, m = len(a), len(b), len(b[0])
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += c * bt[j]
    return out


def mat_vec(a: Mat, v: Vec) -> Vec:
    return [sum((c * x for c, x in zip(row, v) if c and x), Fraction(0)) for row in a]


def mat_sub(a: Mat, b: Mat) -> Mat:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Mat, c: Fraction) -> Mat:
    return [[c * x for x in row] for row in a]


def is_zero(a: Mat) -> bool:
    return all(not x for row in a for x in row)


def rref(a: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form; returns (R, pivot column indices)."""
    m = [[Fraction(x) for x in row] for row in a]
    if not m:
        return [], []
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        # partial pivot: any nonzero entry works exactly
        pr = next((i for i in range(r, nrows) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(a: Mat) -> int:
    return len(rref(a)[1])


def nullspace(a: Mat) -> list[Vec]:
    """Basis of the right kernel {x : a x = 0}."""
    if not a:
        return []
    ncols = len(a[0])
    r, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i][f]
        basis.append(v)
    return basis


def invert(a: Mat) -> Mat:
    """Inverse of a square nonsingular matrix; raises ValueError if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c]), None)
        if pr is None:
            raise ValueError("singular matrix")
        m[c], m[pr] = m[pr], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n:] for row in m]


def _gcd_normalize(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    lead = row[min(row)]
    if lead < 0:
        row = {c: -v for c, v in row.items()}
    return row


class IntSpan:
    """Incremental row space over the integers, fraction-free.

    Insertion reduces the new row against the stored pivot rows by integer
    cross-multiplication (r <- r*p_lead - p*r_lead), stripping gcds to keep
    entries small.  rank() is exact; no division happens until never.
    """

    def __init__(self) -> None:
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: dict[int, int]) -> bool:
        """Insert a sparse integer row; returns True iff the rank grew."""
        row = {c: v for c, v in row.items() if v}
        while row:
            lead = min(row)
            piv = self.pivots.get(lead)
            if piv is None:
                self.pivots[lead] = _gcd_normalize(row)
                return True
            a, b = piv[lead], row[lead]
            new = {}
            for c in row.keys() | piv.keys():
                v = a * row.get(c, 0) - b * piv.get(c, 0)
                if v:
                    new[c] = v
            row = _gcd_normalize(new) if new else new
        return False

    def add_fraction_row(self, row: dict[int, Fraction]) -> bool:
        """Clear denominators, then insert."""
        lcm = 1
        for v in row.values():
            d = v.denominator
            lcm = lcm // gcd(lcm, d) * d
        return self.add({c: int(v * lcm) for c, v in row.items() if v})

    def reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        """Residual of a rational row modulo the span (no pivot columns left).

        Pivot rows are echelon, so eliminating in ascending column order
        terminates: each elimination only touches columns to the right.
        """
        out = {c: Fraction(v) for c, v in row.items() if v}
        while True:
            hit = [c for c in out if c in self.pivots]
            if not hit:
                return out
            c = min(hit)
            piv = self.pivots[c]
            f = out[c] / piv[c]
            for col, v in piv.items():
                nv = out.get(col, 0) - f * v
                if nv:
                    out[col] = nv
                else:
                    out.pop(col, None)
