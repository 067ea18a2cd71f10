"""Exact invariants of an invertible polynomial and its diagonal symmetries.

From the exponent matrix E we derive, all as exact rationals:

* the inverse matrix rho[j][i] (columns are the group generators),
* weights q_i (row sums), dual weights (column sums),
* Milnor numbers, central charge, the group order per atomic block,
* the grading element J (phases q mod 1) and its square root zeta (q/2).

Group elements are phase vectors theta in [0,1)^n; gamma = exp(2 pi i theta)
acts diagonally.  Membership: E theta integral.  The group is enumerated by
closing the generator columns under addition mod 1, which is adequate for
the orders (<= ~1e5) this package targets.
"""

from dataclasses import dataclass

from .exactnum import QQ, Q0, Q1, HALF, qfrac, is_integer
from .linalg import invert_matrix
from .poly import FERMAT, CHAIN, LOOP


def g_add(a, b):
    return tuple(qfrac(x + y) for x, y in zip(a, b))


def g_neg(a):
    return tuple(qfrac(-x) for x in a)


def g_identity(n):
    return (Q0,) * n


def closed_form_inverse(block):
    """Per-block closed forms for the inverse exponent matrix.

    Chain: rho_j^(i) = (-1)^(j-i) prod_{k=i..j} 1/a_k for j >= i, else 0.
    Loop:  rho_j^(i) = (-1)^(j-i) prod_{k>j} a_k prod_{k<i} a_k / D (j >= i),
           (-1)^(n+j-i) prod_{j<k<i} a_k / D (j < i),  D = prod a_k + (-1)^(n+1).
    Used as an independent oracle against the generic matrix inverse.
    """
    a = block.exponents
    m = len(a)
    if block.kind == FERMAT:
        return [[QQ(1, a[0])]]
    out = [[Q0] * m for _ in range(m)]
    if block.kind == CHAIN:
        for i in range(m):
            for j in range(i, m):
                v = QQ(1)
                for k in range(i, j + 1):
                    v /= a[k]
                out[i][j] = v if (j - i) % 2 == 0 else -v
        return out
    total = 1
    for x in a:
        total *= x
    d = QQ(total + (-1) ** (m + 1))
    for i in range(m):
        for j in range(m):
            if j >= i:
                num = 1
                for k in range(j + 1, m):
                    num *= a[k]
                for k in range(i):
                    num *= a[k]
                sign = (-1) ** (j - i)
            else:
                num = 1
                for k in range(j + 1, i):
                    num *= a[k]
                sign = (-1) ** (m + j - i)
            out[i][j] = QQ(sign * num) / d
    return out


@dataclass
class SectorData:
    fixed: tuple        # variable indices with theta = 0
    narrow: bool
    n_gamma: int
    iota: object        # degree shifting number, sum(theta_j - q_j)
    degree: object      # insertion degree n_gamma/2 + iota


class SymmetryData:
    """All weight/group data of one invertible polynomial."""

    def __init__(self, w):
        self.poly = w
        n = w.n
        self.n = n
        self.einv = invert_matrix([list(r) for r in w.matrix])
        self.weights = tuple(sum(self.einv[j], Q0) for j in range(n))
        self.dual_weights = tuple(
            sum(self.einv[j][i] for j in range(n)) for i in range(n))
        self.central_charge = sum((1 - 2 * q for q in self.weights), Q0)
        self.milnor_number = _product((1 / q - 1 for q in self.weights))
        self.milnor_dual = _product((1 / q - 1 for q in self.dual_weights))
        self.group_order = 1
        for b in w.blocks:
            self.group_order *= b.group_order()
        self.J = tuple(qfrac(q) for q in self.weights)
        self.zeta = tuple(q * HALF for q in self.weights)
        self._group = None
        self._check_identities()

    def _check_identities(self):
        n = self.n
        for j in range(n):
            s = sum(self.poly.matrix[j][i] * self.weights[i] for i in range(n))
            if s != 1:
                raise AssertionError("E q != 1 at row %d" % j)
        if g_add(self.zeta, self.zeta) != self.J:
            raise AssertionError("zeta^2 != J")
        # a_i q_i = 1 - q_{i+1} with chain/loop boundary conventions.
        for b in self.poly.blocks:
            m = b.size
            for k in range(m):
                v = b.variables[k]
                if b.kind == LOOP:
                    qnext = self.weights[b.variables[(k + 1) % m]]
                elif k + 1 < m:
                    qnext = self.weights[b.variables[k + 1]]
                else:
                    qnext = Q0
                if b.exponents[k] * self.weights[v] != 1 - qnext:
                    raise AssertionError("a_i q_i != 1 - q_{i+1}")
        # rho_{j-1}^(i) + a_j rho_j^(i) = delta_j^i per block.
        for b in self.poly.blocks:
            m = b.size
            for kj in range(m):
                vj = b.variables[kj]
                if kj == 0:
                    vprev = b.variables[-1] if b.kind == LOOP else None
                else:
                    vprev = b.variables[kj - 1]
                for ki in range(m):
                    vi = b.variables[ki]
                    lhs = b.exponents[kj] * self.einv[vi][vj]
                    if vprev is not None:
                        lhs += self.einv[vi][vprev]
                    if lhs != (1 if vi == vj else 0):
                        raise AssertionError("rho constraint violated")

    def generator(self, i):
        """rho_i: the i-th column of E^{-1} reduced mod 1."""
        return tuple(qfrac(self.einv[j][i]) for j in range(self.n))

    def generators(self):
        return [self.generator(i) for i in range(self.n)]

    def I_map(self, m):
        """I(m) = J prod rho_i^{m_i}: theta = q + sum m_i rho_i mod 1."""
        return tuple(
            qfrac(self.weights[j]
                  + sum(m[i] * self.einv[j][i] for i in range(self.n)))
            for j in range(self.n))

    def in_group(self, theta):
        return all(
            is_integer(sum(self.poly.matrix[j][i] * theta[i]
                           for i in range(self.n)))
            for j in range(self.n))

    def group(self):
        """Full diagonal symmetry group, enumerated by generator closure."""
        if self._group is None:
            gens = self.generators()
            seen = {g_identity(self.n)}
            frontier = [g_identity(self.n)]
            while frontier:
                cur = frontier.pop()
                for g in gens:
                    nxt = g_add(cur, g)
                    if nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
            if len(seen) != self.group_order:
                raise AssertionError(
                    "group closure has %d elements, expected %d"
                    % (len(seen), self.group_order))
            self._group = sorted(seen)
        return self._group

    def sector_data(self, theta):
        fixed = tuple(j for j in range(self.n) if theta[j] == 0)
        iota = sum((theta[j] - self.weights[j] for j in range(self.n)), Q0)
        return SectorData(fixed=fixed, narrow=not fixed, n_gamma=len(fixed),
                          iota=iota, degree=QQ(len(fixed), 2) + iota)

    def degree_dual(self, exps):
        """Quasihomogeneous degree of x^exps with the dual weights (this is
        the insertion degree of the state prod theta_i^{exps_i})."""
        return sum((e * q for e, q in zip(exps, self.dual_weights)), Q0)


def _product(items):
    p = Q1
    for x in items:
        p *= x
    if not is_integer(p):
        raise AssertionError("Milnor number %s is not an integer" % p)
    return int(p)
