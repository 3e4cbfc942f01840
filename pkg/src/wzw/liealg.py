"""Root systems, weights, and finite-dimensional representation combinatorics.

Conventions used throughout the package:

* weights are tuples of integers in fundamental-weight coordinates, so the
  i-th coordinate of x is the pairing with the i-th simple coroot;
* cartan[i][j] = 2(a_i, a_j)/(a_i, a_i) for simple roots a_i, so the
  coordinate vector of a_j is column j of the Cartan matrix;
* the invariant form is normalized so long roots have squared length 2
  (equivalently, the dual form on the algebra gives c(theta, theta) = 2);
  it is stored as the rational Gram matrix on fundamental weights.

Everything is exact rational arithmetic; nothing in this module floats.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import InputError, InternalError

Weight = tuple[int, ...]

_VALID_RANKS = {"A": lambda n: n >= 1, "B": lambda n: n >= 2, "C": lambda n: n >= 2,
                "D": lambda n: n >= 4, "E": lambda n: n in (6, 7, 8),
                "F": lambda n: n == 4, "G": lambda n: n == 2}

_E_EDGES = {6: [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)],
            7: [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)],
            8: [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]}


def _cartan_matrix(series: str, n: int) -> list[list[int]]:
    a = [[2 * int(i == j) for j in range(n)] for i in range(n)]

    def bond(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if series in "ABC":
        for i in range(n - 2):
            bond(i, i + 1)
        if n >= 2:
            if series == "A":
                bond(n - 2, n - 1)
            elif series == "B":   # a_{n-1} short
                bond(n - 2, n - 1, -1, -2)
            else:                 # C: a_{n-1} long
                bond(n - 2, n - 1, -2, -1)
    elif series == "D":
        for i in range(n - 3):
            bond(i, i + 1)
        bond(n - 3, n - 2)
        bond(n - 3, n - 1)
    elif series == "E":
        for i, j in _E_EDGES[n]:
            bond(i - 1, j - 1)
    elif series == "F":
        bond(0, 1)
        bond(1, 2, -1, -2)        # a_3, a_4 short
        bond(2, 3)
    elif series == "G":
        bond(0, 1, -1, -3)        # a_2 short
    return a


def _half_lengths(cartan: list[list[int]]) -> list[Fraction]:
    """d_i = (a_i,a_i)/2, propagated along the Dynkin graph, long roots -> 1."""
    n = len(cartan)
    d: list[Fraction | None] = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if i != j and cartan[i][j] and d[j] is None:
                d[j] = d[i] * cartan[i][j] / cartan[j][i]
                stack.append(j)
    if any(x is None for x in d):
        raise InternalError("disconnected Dynkin diagram")
    top = max(d)
    return [x / top for x in d]


@dataclass(frozen=True)
class RootSystem:
    series: str
    rank: int
    cartan_matrix: tuple[tuple[int, ...], ...]
    form_matrix: tuple[tuple[Fraction, ...], ...]
    pos_roots: tuple[Weight, ...]
    highest_root: Weight
    rho: Weight
    dual_coxeter: int
    dim_g: int

    @property
    def name(self) -> str:
        return f"{self.series}{self.rank}"

    def form(self, x, y) -> Fraction:
        f = self.form_matrix
        return sum((xi * sum(f[i][j] * yj for j, yj in enumerate(y) if yj)
                    for i, xi in enumerate(x) if xi), Fraction(0))

    def is_dominant(self, mu) -> bool:
        return len(mu) == self.rank and all(isinstance(c, int) and c >= 0 for c in mu)

    def simple_root(self, i: int) -> Weight:
        return tuple(self.cartan_matrix[j][i] for j in range(self.rank))

    def reflect(self, x: tuple, i: int) -> tuple:
        """Simple reflection s_i(x) = x - <x, coroot_i> a_i."""
        ai = self.simple_root(i)
        return tuple(xj - x[i] * aij for xj, aij in zip(x, ai))

    def __repr__(self) -> str:
        return f"RootSystem({self.name})"


def parse_algebra(name: str) -> tuple[str, int]:
    m = re.fullmatch(r"([A-G])(\d+)", name.strip())
    if not m:
        raise InputError(f"cannot parse algebra name {name!r}; expected e.g. 'A1', 'G2'")
    return m.group(1), int(m.group(2))


@lru_cache(maxsize=None)
def build_root_system(series: str, rank: int) -> RootSystem:
    if series not in _VALID_RANKS or not _VALID_RANKS[series](rank):
        raise InputError(f"({series},{rank}) is not a simple type: need A n>=1, "
                         "B n>=2, C n>=2, D n>=4, E n in 6..8, F4, G2")
    cartan = _cartan_matrix(series, rank)
    d = _half_lengths(cartan)

    # positive-definiteness of the symmetrization d_i * a_ij (leading minors > 0)
    sym = [[d[i] * cartan[i][j] for j in range(rank)] for i in range(rank)]
    for k in range(1, rank + 1):
        if _det([row[:k] for row in sym[:k]]) <= 0:
            raise InternalError(f"Cartan symmetrization not positive definite for {series}{rank}")

    ainv = _invert_rational([[Fraction(x) for x in row] for row in cartan])
    form = [[ainv[j][i] * d[j] for j in range(rank)] for i in range(rank)]
    for i in range(rank):
        for j in range(rank):
            if form[i][j] != form[j][i]:
                raise InternalError("invariant form is not symmetric")

    pos = _positive_roots(cartan)
    max_ht = max(pos.values())
    tops = [b for b, h in pos.items() if h == max_ht]
    if len(tops) != 1:
        raise InternalError("highest root is not unique")
    theta = tops[0]

    def frm(x, y):
        return sum(x[i] * form[i][j] * y[j] for i in range(rank) for j in range(rank))

    if frm(theta, theta) != 2:
        raise InternalError("form(theta,theta) != 2; normalization broken")
    rho = (1,) * rank
    hcheck = 1 + frm(rho, theta)
    if hcheck.denominator != 1:
        raise InternalError("dual Coxeter number is not an integer")

    return RootSystem(series=series, rank=rank,
                      cartan_matrix=tuple(tuple(r) for r in cartan),
                      form_matrix=tuple(tuple(r) for r in form),
                      pos_roots=tuple(sorted(pos, key=lambda b: (pos[b], b))),
                      highest_root=theta, rho=rho,
                      dual_coxeter=int(hcheck),
                      dim_g=rank + 2 * len(pos))


def _det(m) -> Fraction:
    m = [[Fraction(x) for x in row] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c]), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def _invert_rational(a):
    from .linalg import invert
    return invert(a)


def _positive_roots(cartan: list[list[int]]) -> dict[Weight, int]:
    """All positive roots (fundamental-weight coordinates) with their heights.

    Built by height via root strings: beta + a_i is a root iff q >= 1 where
    q = p - <beta, coroot_i> and p is how far the string extends downward.
    """
    n = len(cartan)
    simple = [tuple(cartan[j][i] for j in range(n)) for i in range(n)]
    roots: dict[Weight, int] = {simple[i]: 1 for i in range(n)}
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            h = roots[beta]
            for i in range(n):
                p = 0
                down = tuple(b - a for b, a in zip(beta, simple[i]))
                while down in roots:
                    p += 1
                    down = tuple(b - a for b, a in zip(down, simple[i]))
                if p - beta[i] >= 1:
                    up = tuple(b + a for b, a in zip(beta, simple[i]))
                    if up not in roots:
                        roots[up] = h + 1
                        nxt.append(up)
        frontier = nxt
    return roots


def _require_dominant(rs: RootSystem, mu) -> Weight:
    mu = tuple(mu)
    if not rs.is_dominant(mu):
        raise InputError(f"weight {mu} is not dominant for {rs.name} "
                         "(needs nonnegative integer fundamental-weight coordinates)")
    return mu


def casimir_eigenvalue(rs: RootSystem, mu) -> Fraction:
    """Quadratic Casimir eigenvalue form(mu, mu + 2*rho) on the irrep V_mu."""
    mu = _require_dominant(rs, mu)
    shifted = tuple(c + 2 for c in mu)
    return rs.form(mu, shifted)


def level_of(rs: RootSystem, mu) -> int:
    """Level mu(theta-coroot) = form(mu, theta) under the long-root normalization."""
    mu = _require_dominant(rs, mu)
    lv = rs.form(mu, rs.highest_root)
    if lv.denominator != 1:
        raise InternalError(f"level of {mu} is not an integer")
    return int(lv)


def _to_dominant(rs: RootSystem, x: tuple) -> tuple:
    fuel = 100000
    while True:
        i = next((k for k, c in enumerate(x) if c < 0), None)
        if i is None:
            return x
        x = rs.reflect(x, i)
        fuel -= 1
        if fuel == 0:
            raise InternalError("dominant-chamber reduction did not terminate")


def dominant_with_sign(rs: RootSystem, x: tuple) -> tuple[tuple, int]:
    """Weyl-reflect x into the closed dominant chamber, tracking the sign.

    Returns (x_dominant, det) with det = 0 when x lies on a chamber wall
    (some coordinate hits 0), the standard rho-shifted reduction step.
    """
    sign = 1
    fuel = 100000
    while True:
        if any(c == 0 for c in x):
            return x, 0
        i = next((k for k, c in enumerate(x) if c < 0), None)
        if i is None:
            return x, sign
        x = rs.reflect(x, i)
        sign = -sign
        fuel -= 1
        if fuel == 0:
            raise InternalError("signed chamber reduction did not terminate")


def dual_weight(rs: RootSystem, mu) -> Weight:
    """mu* = -w_0(mu): the highest weight of the contragredient representation."""
    mu = _require_dominant(rs, mu)
    return _to_dominant(rs, tuple(-c for c in mu))


def weyl_dim(rs: RootSystem, mu) -> int:
    mu = _require_dominant(rs, mu)
    shifted = tuple(m + r for m, r in zip(mu, rs.rho))
    dim = Fraction(1)
    for alpha in rs.pos_roots:
        dim *= rs.form(shifted, alpha) / rs.form(rs.rho, alpha)
    if dim.denominator != 1:
        raise InternalError("Weyl dimension formula returned a non-integer")
    return int(dim)


@lru_cache(maxsize=None)
def _dominant_weights(rs: RootSystem, mu: Weight) -> dict[Weight, int]:
    """Multiplicities of the dominant weights of V_mu (Freudenthal recursion)."""
    n = rs.rank
    rho = rs.rho
    # enumerate c >= 0 with mu - sum c_i a_i dominant, using sum c_i d_i <= (mu, rho)
    d = [rs.form(rs.simple_root(i), rho) for i in range(n)]
    budget = rs.form(mu, rho)
    bounds = [int(budget / d[i]) for i in range(n)]
    cand = []
    for c in product(*(range(b + 1) for b in bounds)):
        if sum(ci * di for ci, di in zip(c, d)) > budget:
            continue
        lam = tuple(mu[j] - sum(rs.cartan_matrix[j][i] * c[i] for i in range(n))
                    for j in range(n))
        if all(x >= 0 for x in lam):
            cand.append((sum(c), lam))
    cand.sort()

    mults: dict[Weight, int] = {}
    mu_norm = rs.form(tuple(m + 1 for m in mu), tuple(m + 1 for m in mu))

    def mult_any(w) -> int:
        return mults.get(_to_dominant(rs, w), 0)

    for dist, lam in cand:
        if dist == 0:
            mults[lam] = 1
            continue
        num = Fraction(0)
        for alpha in rs.pos_roots:
            k = 1
            while True:
                w = tuple(l + k * a for l, a in zip(lam, alpha))
                m = mult_any(w)
                if m == 0:
                    break
                num += 2 * m * rs.form(w, alpha)
                k += 1
        den = mu_norm - rs.form(tuple(l + 1 for l in lam), tuple(l + 1 for l in lam))
        if den <= 0:
            continue  # lam is not a weight of V_mu after all
        m = num / den
        if m.denominator != 1 or m < 0:
            raise InternalError(f"Freudenthal multiplicity {m} at {lam} is not a nonneg integer")
        if m:
            mults[lam] = int(m)
    return mults


def _weyl_orbit(rs: RootSystem, lam: Weight) -> set[tuple]:
    orbit = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(rs.rank):
                if w[i]:
                    r = rs.reflect(w, i)
                    if r not in orbit:
                        orbit.add(r)
                        nxt.append(r)
        frontier = nxt
    return orbit


def weight_multiplicities(rs: RootSystem, mu) -> dict[tuple, int]:
    """The full weight diagram of V_mu as a map weight -> multiplicity."""
    mu = _require_dominant(rs, mu)
    out: dict[tuple, int] = {}
    for lam, m in _dominant_weights(rs, mu).items():
        for w in _weyl_orbit(rs, lam):
            out[w] = m
    total = sum(out.values())
    if total != weyl_dim(rs, mu):
        raise InternalError(f"weight diagram of {mu} sums to {total}, not weyl_dim")
    return out


def tensor_decompose(rs: RootSystem, mu, nu) -> dict[Weight, int]:
    """Multiplicities of each V_lam inside V_mu (x) V_nu (Racah-Speiser).

    Adds nu + rho to every weight of the smaller factor and reflects to the
    dominant chamber with sign; wall hits contribute nothing.
    """
    mu, nu = _require_dominant(rs, mu), _require_dominant(rs, nu)
    if weyl_dim(rs, mu) > weyl_dim(rs, nu):
        mu, nu = nu, mu
    out: dict[Weight, int] = {}
    shifted_nu = tuple(c + 1 for c in nu)
    for eta, m in weight_multiplicities(rs, mu).items():
        x = tuple(e + s for e, s in zip(eta, shifted_nu))
        dom, sign = dominant_with_sign(rs, x)
        if sign:
            lam = tuple(c - 1 for c in dom)
            out[lam] = out.get(lam, 0) + sign * m
    out = {lam: m for lam, m in out.items() if m}
    if any(m < 0 for m in out.values()):
        raise InternalError("negative multiplicity in tensor decomposition")
    lhs = sum(m * weyl_dim(rs, lam) for lam, m in out.items())
    if lhs != weyl_dim(rs, mu) * weyl_dim(rs, nu):
        raise InternalError("tensor decomposition dimension check failed")
    return out
