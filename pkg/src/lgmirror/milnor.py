"""Milnor ring of an invertible polynomial with exact normal forms.

Elements of Q_V = C[x]/(dV/dx_1, ..., dV/dx_n) are finite maps from
standard-basis exponent vectors to rationals.  Normal forms are computed per
quasihomogeneous degree: the monomials of one degree form a finite space in
which the Jacobian multiples span a complement of the standard basis, so one
exact linear solve per degree (cached) answers every reduction.

The standard monomial basis per atomic block of V (head-to-tail order
z_1^{b_1} z_2 + ... + z_m^{b_m} for a chain):

* Fermat b:  z^e, 0 <= e <= b-2
* Loop:      all products, 0 <= e_i <= b_i - 1
* Chain:     strata k = 0..floor(m/2); stratum k pins z_1, z_3, ..,
  z_{2k-1} at b-1 and z_2, .., z_{2k} at 0; the free positions j > 2k
  range over 0 <= e_j < b_j - delta_{j,2k+1}.

The residue pairing is anchored by NF(Hess V) = h * socle with
Res(Hess V) = mu, so Res(c * socle) = c mu / h; the normalized residue
rescales so that Res~(socle) = 1, i.e. Res~(f) = socle coefficient of NF(f).
"""

import itertools

from .exactnum import QQ, Q0, Q1
from .linalg import ExactSolver, InconsistentSystem
from .poly import FERMAT, CHAIN, LOOP


# ---------------------------------------------------------------------------
# polynomial dictionaries {exponent tuple: coefficient}

def poly_add(a, b):
    out = dict(a)
    for k, v in b.items():
        nv = out.get(k, Q0) + v
        if nv == 0:
            out.pop(k, None)
        else:
            out[k] = nv
    return out


def poly_scale(a, c):
    if c == 0:
        return {}
    return {k: c * v for k, v in a.items()}


def poly_mul(a, b):
    out = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            k = tuple(x + y for x, y in zip(k1, k2))
            nv = out.get(k, Q0) + v1 * v2
            if nv == 0:
                out.pop(k, None)
            else:
                out[k] = nv
    return out


# ---------------------------------------------------------------------------
# standard monomial bases per atomic block (local exponent tuples)

def block_basis(block):
    a = block.exponents
    m = len(a)
    if block.kind == FERMAT:
        return [(e,) for e in range(a[0] - 1)]
    if block.kind == LOOP:
        return list(itertools.product(*[range(x) for x in a]))
    vectors = []
    for k in range(m // 2 + 1):
        pinned = []
        for p in range(2 * k):
            pinned.append(a[p] - 1 if p % 2 == 0 else 0)
        if 2 * k == m:
            vectors.append(tuple(pinned))
            continue
        free_ranges = [range(a[p] - (1 if p == 2 * k else 0))
                       for p in range(2 * k, m)]
        for free in itertools.product(*free_ranges):
            vectors.append(tuple(pinned) + free)
    return vectors


def block_socle(block):
    a = block.exponents
    if block.kind == FERMAT:
        return (a[0] - 2,)
    if block.kind == LOOP:
        return tuple(x - 1 for x in a)
    return (a[0] - 2,) + tuple(x - 1 for x in a[1:])


def block_stratum(block, local):
    """Chain stratum index k of a local standard vector (0 otherwise)."""
    if block.kind != CHAIN:
        return 0
    a = block.exponents
    m = len(a)
    k = 0
    while 2 * (k + 1) <= m and local[2 * k] == a[2 * k] - 1 \
            and local[2 * k + 1] == 0:
        k += 1
    return k


def block_complement(block, local):
    """Complementary vector; on chain strata the pinned tail is kept and the
    free part is complemented within the stratum's own top vector."""
    a = block.exponents
    if block.kind != CHAIN:
        soc = block_socle(block)
        return tuple(s - e for s, e in zip(soc, local))
    k = block_stratum(block, local)
    out = list(local[:2 * k])
    for p in range(2 * k, len(a)):
        top = a[p] - 1 - (1 if p == 2 * k else 0)
        out.append(top - local[p])
    return tuple(out)


class MilnorRing:
    """Frobenius algebra Q_V for a decomposed invertible polynomial V."""

    def __init__(self, poly):
        self.poly = poly
        n = poly.n
        self.n = n
        solver = ExactSolver([list(r) for r in poly.matrix])
        self.weights = tuple(solver.solve([Q1] * n))
        self.central_charge = sum((1 - 2 * q for q in self.weights), Q0)
        mu = Q1
        for q in self.weights:
            mu *= 1 / q - 1
        if mu.denominator != 1 or mu <= 0:
            raise AssertionError("Milnor number %s is not a positive integer"
                                 % mu)
        self.milnor_number = int(mu)

        self.basis = []
        for combo in itertools.product(*[block_basis(b) for b in poly.blocks]):
            vec = [0] * n
            for b, local in zip(poly.blocks, combo):
                for pos, e in zip(b.variables, local):
                    vec[pos] = e
            self.basis.append(tuple(vec))
        self.basis.sort(key=lambda m: (self.degree(m), m))
        self.basis_set = set(self.basis)
        if len(self.basis) != self.milnor_number:
            raise AssertionError("basis size %d != Milnor number %d"
                                 % (len(self.basis), self.milnor_number))

        soc = [0] * n
        for b in poly.blocks:
            for pos, e in zip(b.variables, block_socle(b)):
                soc[pos] = e
        self.socle = tuple(soc)
        if self.socle not in self.basis_set:
            raise AssertionError("socle is not a standard vector")

        self.partials = []
        for j in range(n):
            p = {}
            for row in poly.matrix:
                if row[j] > 0:
                    key = tuple(e - (1 if i == j else 0)
                                for i, e in enumerate(row))
                    p[key] = p.get(key, Q0) + row[j]
            self.partials.append(p)

        self._solvers = {}
        self._nf_cache = {}
        self._hessian_data = None

    # -- grading ------------------------------------------------------------

    def degree(self, exps):
        return sum((e * q for e, q in zip(exps, self.weights)), Q0)

    def monomials_of_degree(self, d):
        """All exponent vectors of quasihomogeneous degree d, lex order."""
        out = []

        def rec(i, rem, prefix):
            if i == self.n:
                if rem == 0:
                    out.append(tuple(prefix))
                return
            q = self.weights[i]
            emax = rem / q
            for e in range(int(emax.numerator // emax.denominator) + 1):
                nrem = rem - e * q
                if nrem < 0:
                    break
                rec(i + 1, nrem, prefix + [e])

        if d >= 0:
            rec(0, QQ(d), [])
        return out

    # -- normal forms ---------------------------------------------------

    def _solver_for_degree(self, d):
        cached = self._solvers.get(d)
        if cached is not None:
            return cached
        monos = self.monomials_of_degree(d)
        index = {m: i for i, m in enumerate(monos)}
        columns = []   # each column: list over mono rows
        basis_cols = []
        for j, p in enumerate(self.partials):
            mult_deg = d - (1 - self.weights[j])
            for u in self.monomials_of_degree(mult_deg):
                col = [Q0] * len(monos)
                for key, c in p.items():
                    tot = tuple(a + b for a, b in zip(u, key))
                    col[index[tot]] = col[index[tot]] + c
                columns.append(col)
        for m in self.basis:
            if self.degree(m) == d:
                basis_cols.append(m)
                col = [Q0] * len(monos)
                col[index[m]] = Q1
                columns.append(col)
        rows = [[columns[c][r] for c in range(len(columns))]
                for r in range(len(monos))]
        solver = ExactSolver(rows) if monos else None
        njac = len(columns) - len(basis_cols)
        entry = (monos, index, solver, njac, basis_cols)
        self._solvers[d] = entry
        return entry

    def normal_form(self, polydict):
        """Image in Q_V in standard-basis coordinates."""
        by_degree = {}
        for exps, c in polydict.items():
            if c == 0:
                continue
            by_degree.setdefault(self.degree(exps), {})[exps] = c
        out = {}
        for d, part in by_degree.items():
            if d > self.central_charge:
                continue  # strictly above the socle degree: zero in Q_V
            monos, index, solver, njac, basis_cols = self._solver_for_degree(d)
            rhs = [Q0] * len(monos)
            for exps, c in part.items():
                rhs[index[exps]] += c
            try:
                sol = solver.solve(rhs)
            except InconsistentSystem as exc:
                raise AssertionError(
                    "standard basis fails to span degree %s" % d) from exc
            for i, m in enumerate(basis_cols):
                c = sol[njac + i]
                if c != 0:
                    out[m] = out.get(m, Q0) + c
        return {k: v for k, v in out.items() if v != 0}

    def nf_monomial(self, exps):
        exps = tuple(exps)
        cached = self._nf_cache.get(exps)
        if cached is None:
            if exps in self.basis_set:
                cached = {exps: Q1}
            else:
                cached = self.normal_form({exps: Q1})
            self._nf_cache[exps] = cached
        return cached

    def multiply(self, a, b):
        """Product in Q_V of two elements in basis coordinates."""
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                prod = tuple(x + y for x, y in zip(m1, m2))
                for m, c in self.nf_monomial(prod).items():
                    nv = out.get(m, Q0) + c1 * c2 * c
                    if nv == 0:
                        out.pop(m, None)
                    else:
                        out[m] = nv
        return out

    # -- residues -------------------------------------------------------

    def hessian(self):
        """det(d^2 V / dx_i dx_j) as a polynomial dictionary."""
        n = self.n
        hess = [[{} for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for exps, c in self.partials[i].items():
                for j in range(n):
                    if exps[j] > 0:
                        key = tuple(e - (1 if t == j else 0)
                                    for t, e in enumerate(exps))
                        hess[i][j] = poly_add(hess[i][j],
                                              {key: c * exps[j]})
        det = {}
        for perm in itertools.permutations(range(n)):
            sign = _perm_sign(perm)
            term = {(0,) * n: QQ(sign)}
            for i in range(n):
                term = poly_mul(term, hess[i][perm[i]])
                if not term:
                    break
            det = poly_add(det, term)
        return det

    def _hessian_anchor(self):
        if self._hessian_data is None:
            nf = self.normal_form(self.hessian())
            if set(nf) != {self.socle} or nf[self.socle] == 0:
                raise AssertionError(
                    "NF(Hess) = %r is not a nonzero socle multiple" % nf)
            self._hessian_data = nf[self.socle]
        return self._hessian_data

    def residue(self, element):
        """Grothendieck residue, anchored by Res(Hess) = mu."""
        h = self._hessian_anchor()
        return element.get(self.socle, Q0) * self.milnor_number / h

    def residue_normalized(self, element):
        """Normalized residue with Res~(socle) = 1."""
        self._hessian_anchor()  # still validate the socle anchor
        return element.get(self.socle, Q0)

    def socle_residue(self):
        """Res(socle) = mu / h; fixed implicitly by the Hessian anchor."""
        return QQ(self.milnor_number) / self._hessian_anchor()

    def pair(self, a, b):
        return self.residue(self.multiply(a, b))

    def pair_normalized(self, a, b):
        return self.residue_normalized(self.multiply(a, b))

    # -- block combinatorics ---------------------------------------------

    def local_part(self, exps, block):
        return tuple(exps[pos] for pos in block.variables)

    def complement(self, m):
        """Complementary standard vector (involution on chain strata)."""
        out = [0] * self.n
        for b in self.poly.blocks:
            local = block_complement(b, self.local_part(m, b))
            for pos, e in zip(b.variables, local):
                out[pos] = e
        res = tuple(out)
        if res not in self.basis_set:
            raise AssertionError("complement of %r left the basis" % (m,))
        return res

    def stratum(self, m, block):
        return block_stratum(block, self.local_part(m, block))


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
