"""Level-truncated fusion rings.

The alphabet P_l is the finite set of dominant weights of level <= l.  Fusion
coefficients are computed by the Kac-Walton rule: take the classical tensor
decomposition, shift by rho, and fold back into the level-(l + h) alcove with
the affine reflection x -> x - ((x,theta) - (l+h)) theta, alternating signs
and dropping anything that lands on a wall.  `fusion_table` additionally
verifies the ring axioms (unit, duality, full symmetry, associativity) before
returning; a violated axiom is an implementation bug, not user error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .errors import InputError, InternalError
from .liealg import (RootSystem, Weight, dominant_with_sign, dual_weight,
                     level_of, tensor_decompose)


@dataclass(frozen=True)
class FusionAlphabet:
    rs: RootSystem
    level: int
    labels: tuple[Weight, ...]

    def __contains__(self, mu) -> bool:
        return tuple(mu) in self._label_set

    @property
    def _label_set(self) -> frozenset:
        return frozenset(self.labels)

    def index(self, mu) -> int:
        try:
            return self.labels.index(tuple(mu))
        except ValueError:
            raise InputError(f"label {tuple(mu)} is not in the level-{self.level} "
                             f"alphabet of {self.rs.name}") from None


def alphabet(rs: RootSystem, level: int) -> FusionAlphabet:
    """All dominant weights of level <= `level`, sorted lexicographically."""
    if not isinstance(level, int) or level < 0:
        raise InputError(f"level must be a nonnegative integer, got {level!r}")
    fund_levels = [level_of(rs, tuple(int(i == j) for j in range(rs.rank)))
                   for i in range(rs.rank)]
    bounds = [level // fl for fl in fund_levels]
    labels = sorted(mu for mu in product(*(range(b + 1) for b in bounds))
                    if level_of(rs, mu) <= level)
    for mu in labels:
        if dual_weight(rs, mu) not in labels:
            raise InternalError(f"alphabet of {rs.name} level {level} not dual-closed at {mu}")
    return FusionAlphabet(rs=rs, level=level, labels=tuple(labels))


@lru_cache(maxsize=None)
def _truncated_product(rs: RootSystem, level: int, lam: Weight, mu: Weight) -> dict[Weight, int]:
    """Kac-Walton: fold the classical decomposition into the level alcove."""
    shifted_level = level + rs.dual_coxeter
    theta = rs.highest_root
    out: dict[Weight, int] = {}
    for nu, m in tensor_decompose(rs, lam, mu).items():
        x = tuple(c + 1 for c in nu)
        sign = 1
        fuel = 10000
        while True:
            x, s = dominant_with_sign(rs, x)
            sign *= s
            if sign == 0:
                break
            height = rs.form(x, theta)
            if height < shifted_level:
                key = tuple(c - 1 for c in x)
                out[key] = out.get(key, 0) + sign * m
                break
            if height == shifted_level:
                break  # affine wall
            x = tuple(c - int(height - shifted_level) * t for c, t in zip(x, theta))
            sign = -sign
            fuel -= 1
            if fuel == 0:
                raise InternalError("affine alcove reduction did not terminate")
    out = {nu: m for nu, m in out.items() if m}
    if any(m < 0 for m in out.values()):
        raise InternalError(f"negative fusion multiplicity in {lam} x {mu} at level {level}")
    return out


def fusion_coeff(alph: FusionAlphabet, lam, mu, nu) -> int:
    """N_{lam,mu,nu}: the dimension of the three-holed-sphere block."""
    lam, mu, nu = tuple(lam), tuple(mu), tuple(nu)
    for w in (lam, mu, nu):
        if w not in alph:
            raise InputError(f"label {w} is not in the level-{alph.level} "
                             f"alphabet of {alph.rs.name}")
    prod = _truncated_product(alph.rs, alph.level, lam, mu)
    return prod.get(dual_weight(alph.rs, nu), 0)


@dataclass(frozen=True)
class FusionRing:
    alphabet: FusionAlphabet
    coeffs: dict = field(compare=False)  # sorted label triple -> positive int

    def coeff(self, lam, mu, nu) -> int:
        key = tuple(sorted((tuple(lam), tuple(mu), tuple(nu))))
        return self.coeffs.get(key, 0)

    def nonzero_ordered(self):
        """All ordered index triples (i,j,k) with N != 0, sorted; for serialization."""
        labels = self.alphabet.labels
        out = []
        for i, j, k in product(range(len(labels)), repeat=3):
            n = self.coeff(labels[i], labels[j], labels[k])
            if n:
                out.append(((i, j, k), n))
        return out


def fusion_table(alph: FusionAlphabet) -> FusionRing:
    """Compute every coefficient and verify the fusion-ring axioms."""
    rs, labels = alph.rs, alph.labels
    dual = {mu: dual_weight(rs, mu) for mu in labels}
    products = {}
    for lam, mu in product(labels, repeat=2):
        prod = _truncated_product(rs, alph.level, lam, mu)
        for sigma in prod:
            if sigma not in alph._label_set:
                raise InternalError(f"fusion axiom 'closure' violated: {lam} x {mu} "
                                    f"contains {sigma} outside the alphabet")
        products[lam, mu] = prod

    # every ordered reading of a triple must give the same coefficient
    coeffs: dict[tuple, int] = {}
    for lam, mu, nu in product(labels, repeat=3):
        n = products[lam, mu].get(dual[nu], 0)
        key = tuple(sorted((lam, mu, nu)))
        prev = coeffs.setdefault(key, n)
        if prev != n:
            raise InternalError(f"fusion axiom 'symmetry' violated at {key}: "
                                f"{prev} != {n} reading ({lam},{mu},{nu})")
    coeffs = {key: n for key, n in coeffs.items() if n}
    ring = FusionRing(alphabet=alph, coeffs=coeffs)

    zero = (0,) * rs.rank
    for mu, nu in product(labels, repeat=2):
        want = 1 if nu == dual[mu] else 0
        if ring.coeff(zero, mu, nu) != want:
            raise InternalError(f"fusion axiom 'unit/duality' violated at (0,{mu},{nu})")

    def four_point(lam, mu, nu, tau) -> int:
        return sum(ring.coeff(lam, mu, sigma)
                   * ring.coeff(dual[sigma], nu, tau) for sigma in labels)

    for quad in product(labels, repeat=4):
        base = four_point(*sorted(quad))
        if four_point(*quad) != base:
            raise InternalError(f"fusion axiom 'associativity' violated at {quad}")
    return ring
