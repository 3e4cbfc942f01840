"""Knizhnik-Zamolodchikov connection on genus-zero blocks.

The connection form is -1/(l+2) sum_{i<j} c^(ij) dlog(z_i - z_j) with c^(ij)
the Casimir acting in tensor slots i and j.  The matrices are computed exactly
on the classical coinvariant quotient (V_1 (x) ... (x) V_n)_g; when the level
cuts the block down further (detected against the coinvariant oracle at a
fixed base point), the system carries the truncated quotient as well.
Parallel transport is the single floating-point boundary of the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import InputError, InternalError
from .linalg import IntSpan
from .oracle import CoinvariantProblem, npoint_block_ranks, sl2_irrep_matrices, _strides

Mat = list  # list of rows of Fraction


class _TensorOps:
    """Sparse slot-wise operator application on V_1 (x) ... (x) V_n."""

    def __init__(self, labels):
        self.labels = labels
        self.dims = [m + 1 for m in labels]
        self.strides = _strides(self.dims)
        self.D = 1
        for d in self.dims:
            self.D *= d
        self.reps = [sl2_irrep_matrices(m) for m in labels]

    def apply_slot(self, vec: dict, slot: int, mat) -> dict:
        out: dict = {}
        st, dim = self.strides[slot], self.dims[slot]
        for idx, c in vec.items():
            j = (idx // st) % dim
            for i in range(dim):
                v = mat[i][j]
                if v:
                    nidx = idx + (i - j) * st
                    out[nidx] = out.get(nidx, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def diagonal(self, vec: dict, gen: str) -> dict:
        out: dict = {}
        for s in range(len(self.labels)):
            for k, v in self.apply_slot(vec, s, getattr(self.reps[s], gen)).items():
                out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v}

    def casimir_pair(self, vec: dict, i: int, j: int) -> dict:
        # E_i F_j + F_i E_j + 1/2 H_i H_j
        out: dict = {}
        for a, b, coef in ((self.reps[i].E, self.reps[j].F, 1),
                           (self.reps[i].F, self.reps[j].E, 1),
                           (self.reps[i].H, self.reps[j].H, Fraction(1, 2))):
            tmp = self.apply_slot(self.apply_slot(vec, j, b), i, a)
            for k, v in tmp.items():
                out[k] = out.get(k, 0) + coef * v
        return {k: v for k, v in out.items() if v}

    def t_power(self, vec: dict, z, power: int) -> dict:
        for _ in range(power):
            out: dict = {}
            for s in range(len(self.labels)):
                for k, v in self.apply_slot(vec, s, self.reps[s].E).items():
                    out[k] = out.get(k, 0) + z[s] * v
            vec = {k: v for k, v in out.items() if v}
        return vec


def _validate_labels(labels) -> tuple:
    labels = tuple(labels)
    if len(labels) < 2:
        raise InputError(f"need at least 2 marked points, got {len(labels)}")
    for m in labels:
        if not isinstance(m, int) or m < 0:
            raise InputError(f"label {m!r} is not a nonnegative integer")
    return labels


def casimir_pair_matrix(labels, i: int, j: int) -> Mat:
    """Dense matrix of c^(ij) on the full tensor product; i, j are 1-based."""
    labels = _validate_labels(labels)
    n = len(labels)
    if not 1 <= i < j <= n:
        raise InputError(f"need 1 <= i < j <= {n}, got ({i},{j})")
    ops = _TensorOps(labels)
    mat = [[Fraction(0)] * ops.D for _ in range(ops.D)]
    for b in range(ops.D):
        for r, v in ops.casimir_pair({b: Fraction(1)}, i - 1, j - 1).items():
            mat[r][b] = v
    return mat


@dataclass(eq=False)
class KZSystem:
    """Exact KZ data on the block quotient of a labeled configuration."""

    level: int
    labels: tuple
    dim: int
    classical_dim: int
    a_matrices: dict            # (i, j) with i < j, 0-based -> dim x dim matrix
    quotient_projection: Mat    # dim x prod(m_i + 1)
    truncated: bool
    base_point: tuple
    truncation_invariant: bool | None = None

    def a(self, i: int, j: int) -> Mat:
        if i == j:
            raise InputError("A_ii is not defined")
        return self.a_matrices[(i, j) if i < j else (j, i)]

    @property
    def n(self) -> int:
        return len(self.labels)


def _mat_from_cols(cols, dim) -> Mat:
    return [[cols[b][a] for b in range(len(cols))] for a in range(dim)]


def kz_system(level: int, labels) -> KZSystem:
    """Connection matrices A_ij = -c^(ij)/(l+2) on the block quotient."""
    labels = _validate_labels(labels)
    if not isinstance(level, int) or level < 0:
        raise InputError(f"level must be a nonnegative integer, got {level!r}")
    for m in labels:
        if m > level:
            raise InputError(f"label {m} exceeds level {level}")
    n = len(labels)
    ops = _TensorOps(labels)
    D = ops.D

    span = IntSpan()
    for b in range(D):
        for gen in "EFH":
            row = ops.diagonal({b: 1}, gen)
            if row:
                span.add(row)
    free = sorted(set(range(D)) - set(span.pivots))
    classical_dim = len(free)
    free_pos = {f: a for a, f in enumerate(free)}

    def to_quotient(vec: dict) -> list:
        red = span.reduce(vec)
        out = [Fraction(0)] * classical_dim
        for c, v in red.items():
            out[free_pos[c]] = v   # KeyError here would mean reduce() is broken
        return out

    # g acts as zero on the quotient; a nonzero residual is an echelon bug
    for f in free:
        for gen in "EFH":
            if any(to_quotient(ops.diagonal({f: Fraction(1)}, gen))):
                raise InternalError("diagonal action does not vanish on the quotient")

    a_classical = {}
    for i, j in combinations(range(n), 2):
        cols = [to_quotient(ops.casimir_pair({f: Fraction(1)}, i, j)) for f in free]
        a_classical[(i, j)] = [[-cols[b][a] / (level + 2) for b in range(classical_dim)]
                               for a in range(classical_dim)]

    base_point = tuple(Fraction(n - 1 - 2 * i) for i in range(n))
    block_rank, oracle_classical = npoint_block_ranks(
        CoinvariantProblem(level=level, labels=labels, points=base_point))
    if oracle_classical != classical_dim:
        raise InternalError(f"coinvariant dimension mismatch: {classical_dim} here, "
                            f"{oracle_classical} from the oracle")

    if block_rank == classical_dim:
        proj = _projection_matrix(ops, to_quotient, classical_dim)
        return KZSystem(level=level, labels=labels, dim=classical_dim,
                        classical_dim=classical_dim, a_matrices=a_classical,
                        quotient_projection=proj, truncated=False,
                        base_point=base_point)

    # level truncation: quotient further by the image of T^{l+1} at base_point
    w_reps = []
    w_span = IntSpan()
    for b in range(D):
        w = ops.t_power({b: Fraction(1)}, base_point, level + 1)
        if not w:
            continue
        wq = to_quotient(w)
        if any(wq):
            w_reps.append((w, wq))
            w_span.add_fraction_row({a: v for a, v in enumerate(wq) if v})
    if classical_dim - w_span.rank != block_rank:
        raise InternalError(f"truncation rank {w_span.rank} inconsistent with "
                            f"oracle block rank {block_rank}")
    kept = sorted(set(range(classical_dim)) - set(w_span.pivots))
    kept_pos = {k: a for a, k in enumerate(kept)}

    def to_block(vec: dict) -> list:
        red = w_span.reduce({a: v for a, v in enumerate(to_quotient(vec)) if v})
        out = [Fraction(0)] * block_rank
        for c, v in red.items():
            out[kept_pos[c]] = v
        return out

    invariant = True
    for w, _ in w_reps:
        for i, j in combinations(range(n), 2):
            if any(to_block(ops.casimir_pair(w, i, j))):
                invariant = False
                break
        if not invariant:
            break

    a_trunc = {}
    for i, j in combinations(range(n), 2):
        cols = [to_block(ops.casimir_pair({free[k]: Fraction(1)}, i, j)) for k in kept]
        a_trunc[(i, j)] = [[-cols[b][a] / (level + 2) for b in range(block_rank)]
                           for a in range(block_rank)]
    proj = [[Fraction(0)] * D for _ in range(block_rank)]
    for b in range(D):
        col = to_block({b: Fraction(1)})
        for a in range(block_rank):
            proj[a][b] = col[a]
    return KZSystem(level=level, labels=labels, dim=block_rank,
                    classical_dim=classical_dim, a_matrices=a_trunc,
                    quotient_projection=proj, truncated=True,
                    base_point=base_point, truncation_invariant=invariant)


def _projection_matrix(ops, to_quotient, dim) -> Mat:
    proj = [[Fraction(0)] * ops.D for _ in range(dim)]
    for b in range(ops.D):
        col = to_quotient({b: Fraction(1)})
        for a in range(dim):
            proj[a][b] = col[a]
    return proj


def _mat_comm(a: Mat, b: Mat) -> Mat:
    q = len(a)
    ab = [[sum(a[i][t] * b[t][j] for t in range(q)) for j in range(q)] for i in range(q)]
    ba = [[sum(b[i][t] * a[t][j] for t in range(q)) for j in range(q)] for i in range(q)]
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(ab, ba)]


def _mat_add(a: Mat, b: Mat) -> Mat:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def flatness_check(system: KZSystem) -> bool:
    """Kohno relations: exact flatness of the log-form connection."""
    n, mats = system.n, system.a_matrices
    if system.dim == 0 or n == 2:
        return True
    for i, j, k in combinations(range(n), 3):
        trips = (((i, j), (i, k), (j, k)), ((i, k), (i, j), (j, k)),
                 ((j, k), (i, j), (i, k)))
        for one, two, three in trips:
            res = _mat_comm(mats[one], _mat_add(mats[two], mats[three]))
            if any(any(row) for row in res):
                return False
    for (i, j), (k, l) in combinations(mats.keys(), 2):
        if len({i, j, k, l}) == 4:
            res = _mat_comm(mats[(i, j)], mats[(k, l)])
            if any(any(row) for row in res):
                return False
    return True


def translation_contraction(system: KZSystem, z, direction=None) -> Mat:
    """The form contracted with a tangent vector; zero for translations."""
    n = system.n
    z = tuple(z)
    if len(z) != n:
        raise InputError(f"expected {n} coordinates, got {len(z)}")
    xi = tuple(direction) if direction is not None else (1,) * n
    out = [[Fraction(0)] * system.dim for _ in range(system.dim)]
    for (i, j), mat in system.a_matrices.items():
        if z[i] == z[j]:
            raise InputError(f"coordinates {i} and {j} collide")
        c = Fraction(xi[i] - xi[j], 1) / (z[i] - z[j])
        if c:
            for a in range(system.dim):
                for b in range(system.dim):
                    out[a][b] += c * mat[a][b]
    return out


# ---------------------------------------------------------------------------
# numeric parallel transport

@dataclass(eq=False)
class TransportResult:
    """Holonomy matrix of a piecewise-linear path, with a halving estimate."""

    matrix: list                # dim x dim complex
    steps: int
    path: str
    error_estimate: float
    converged: bool

    def __post_init__(self):
        d = abs(_det(self.matrix))
        if self.matrix and d <= self.error_estimate:
            raise InternalError(f"transport matrix is numerically singular: "
                                f"|det| = {d:.3e} <= error {self.error_estimate:.3e}")


def _det(m: list) -> complex:
    q = len(m)
    if q == 0:
        return 1.0
    a = [row[:] for row in m]
    det = 1.0 + 0j
    for c in range(q):
        p = max(range(c, q), key=lambda r: abs(a[r][c]))
        if abs(a[p][c]) == 0:
            return 0.0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, q):
            f = a[r][c] / a[c][c]
            for cc in range(c, q):
                a[r][cc] -= f * a[c][cc]
    return det


def _segment_guard(p, q):
    """Reject a segment that meets a diagonal z_i = z_j."""
    n = len(p)
    for i in range(n):
        for j in range(i + 1, n):
            u = p[i] - p[j]
            v = q[i] - q[j]
            scale = max(abs(u), abs(v), 1.0)
            # min_t |(1-t)u + t v| over [0,1]
            du = v - u
            if abs(du) == 0:
                dist = abs(u)
            else:
                t = max(0.0, min(1.0, -(u * du.conjugate()).real / abs(du) ** 2))
                dist = abs(u + t * du)
            if dist < 1e-12 * scale:
                raise InputError(f"path touches the diagonal z_{i} = z_{j}")


def _transport_fixed(system: KZSystem, waypoints, per_seg: int) -> list:
    dim = system.dim
    mats = {key: [[complex(v) for v in row] for row in m]
            for key, m in system.a_matrices.items()}
    y = [[1.0 + 0j if i == j else 0j for j in range(dim)] for i in range(dim)]

    def omega(zt, dz):
        om = [[0j] * dim for _ in range(dim)]
        for (i, j), m in mats.items():
            c = (dz[i] - dz[j]) / (zt[i] - zt[j])
            if c:
                for a in range(dim):
                    ra, rm = om[a], m[a]
                    for b in range(dim):
                        ra[b] += c * rm[b]
        return om

    def mul(a, b):
        return [[sum(a[i][t] * b[t][j] for t in range(dim)) for j in range(dim)]
                for i in range(dim)]

    for s in range(len(waypoints) - 1):
        p = [complex(x) for x in waypoints[s]]
        q = [complex(x) for x in waypoints[s + 1]]
        dz = [b - a for a, b in zip(p, q)]
        if all(abs(d) == 0 for d in dz):
            continue
        h = 1.0 / per_seg
        for step in range(per_seg):
            t0 = step * h
            z0 = [a + t0 * d for a, d in zip(p, dz)]
            zh = [a + (t0 + h / 2) * d for a, d in zip(p, dz)]
            z1 = [a + (t0 + h) * d for a, d in zip(p, dz)]
            k1 = mul(omega(z0, dz), y)
            y1 = [[y[i][j] + h / 2 * k1[i][j] for j in range(dim)] for i in range(dim)]
            k2 = mul(omega(zh, dz), y1)
            y2 = [[y[i][j] + h / 2 * k2[i][j] for j in range(dim)] for i in range(dim)]
            k3 = mul(omega(zh, dz), y2)
            y3 = [[y[i][j] + h * k3[i][j] for j in range(dim)] for i in range(dim)]
            k4 = mul(omega(z1, dz), y3)
            y = [[y[i][j] + h / 6 * (k1[i][j] + 2 * k2[i][j] + 2 * k3[i][j] + k4[i][j])
                  for j in range(dim)] for i in range(dim)]
    return y


def parallel_transport(system: KZSystem, path, steps: int = 1000,
                       tolerance: float = 1e-6) -> TransportResult:
    """RK4 holonomy along a piecewise-linear path (list of configurations)."""
    waypoints = [tuple(p) for p in path]
    if len(waypoints) < 1:
        raise InputError("path needs at least one configuration")
    for p in waypoints:
        if len(p) != system.n:
            raise InputError(f"configuration has {len(p)} points, expected {system.n}")
        _segment_guard([complex(x) for x in p], [complex(x) for x in p])
    if steps < 100:
        raise InputError(f"need at least 100 steps, got {steps}")
    for s in range(len(waypoints) - 1):
        _segment_guard([complex(x) for x in waypoints[s]],
                       [complex(x) for x in waypoints[s + 1]])
    segs = len(waypoints) - 1
    per_seg = max(2, 2 * ((steps + 2 * segs - 1) // (2 * segs))) if segs else 0
    full = _transport_fixed(system, waypoints, per_seg)
    half = _transport_fixed(system, waypoints, per_seg // 2)
    err = max((abs(a - b) for ra, rb in zip(full, half) for a, b in zip(ra, rb)),
              default=0.0)
    desc = f"{len(waypoints)} waypoints, {segs} segments"
    return TransportResult(matrix=full, steps=per_seg * segs, path=desc,
                           error_estimate=err, converged=err < tolerance)
