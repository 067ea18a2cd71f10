"""State space of the A-model and the mirror map onto it.

The state space H(w, G_w) is spanned by one element theta(m) per standard
vector m of the dual Milnor ring Q_{w^T}:

* narrow I(m): theta(m) = 1_{I(m)}, the generator of the rank-one sector;
* chain stratum k >= 1: theta(m) = Ch(K_m), a Koszul Chern character, a
  polynomial multiple of the volume form on the 2k fixed tail variables;
* even loop: theta(m_odd) = Ch(K_odd), theta(m_even) = Ch(K_even), spanning
  the rank-two identity sector.

Products, three-point correlators, and the pairing are transported through
theta from Q_{w^T}; this is the production path, licensed by the Frobenius
algebra isomorphism.  The explicit sector-side values (broad Gram entries,
concave / broad / index-zero three-point correlators) are provided as
independent oracles for the isomorphism checks.
"""

from dataclasses import dataclass

from .exactnum import QQ, Q0, Q1, qstr, is_integer
from .milnor import (MilnorRing, block_stratum, block_complement,
                     poly_mul, poly_add, poly_scale)
from .poly import FERMAT, CHAIN, LOOP, validate_and_decompose
from .weights import SymmetryData, g_add, g_neg, g_identity


@dataclass
class SectorBasisElement:
    m: tuple          # standard vector of the dual ring
    gamma: tuple      # I(m)
    broad: bool
    fixed: tuple      # fixed variables of gamma (global indices)
    form: dict        # Chern form coefficient polynomial ({} when narrow)
    degree: object    # insertion degree; equals n_gamma/2 + iota_gamma

    def form_text(self):
        if not self.broad:
            return "1"
        parts = []
        for exps, c in sorted(self.form.items()):
            mono = "*".join("x%d^%d" % (j + 1, e) if e > 1 else "x%d" % (j + 1)
                            for j, e in enumerate(exps) if e > 0)
            parts.append("%s%s" % (qstr(c), "*" + mono if mono else ""))
        vol = "^".join("dx%d" % (j + 1) for j in self.fixed)
        return "(%s) %s" % (" + ".join(parts), vol)


def _loop_patterns(block):
    a = block.exponents
    modd = tuple(a[i] - 1 if i % 2 == 0 else 0 for i in range(len(a)))
    meven = tuple(0 if i % 2 == 0 else a[i] - 1 for i in range(len(a)))
    return modd, meven


def _signed_product(a, parity):
    """prod over 1-based positions j with j % 2 == parity of (-a_j)."""
    total = Q1
    for j in range(1, len(a) + 1):
        if j % 2 == parity:
            total *= -a[j - 1]
    return total


class StateSpace:
    def __init__(self, w):
        if isinstance(w, str):
            w = validate_and_decompose(w)
        self.poly = w
        self.dual_poly = w.dual()
        self.sym = SymmetryData(w)
        self.ring = MilnorRing(self.dual_poly)
        self.n = w.n
        self.unit = (0,) * self.n
        self.socle = self.ring.socle
        self.basis = [self._build_element(m) for m in self.ring.basis]
        self.index = {el.m: i for i, el in enumerate(self.basis)}
        if self.sym.I_map(self.unit) != self.sym.J:
            raise AssertionError("I(0) != J")
        if self.sym.I_map(self.socle) != g_neg(self.sym.J):
            raise AssertionError("I(socle) != J^{-1}")

    def _block_pairs(self):
        return list(zip(self.poly.blocks, self.dual_poly.blocks))

    # -- construction -------------------------------------------------------

    def _build_element(self, m):
        gamma = self.sym.I_map(m)
        sector = self.sym.sector_data(gamma)
        broad = False
        form = {(0,) * self.n: Q1}
        for wb, db in self._block_pairs():
            if wb.kind == CHAIN:
                k = block_stratum(db, tuple(m[p] for p in db.variables))
                if k >= 1:
                    broad = True
                    form = poly_mul(form, self._chain_form(wb, k))
            elif wb.kind == LOOP and wb.size % 2 == 0:
                modd, meven = _loop_patterns(wb)
                local = tuple(m[p] for p in wb.variables)
                if local in (modd, meven):
                    broad = True
                    form = poly_mul(
                        form, self._loop_form(wb, odd=(local == modd)))
        if broad != (not sector.narrow):
            raise AssertionError("broad classification mismatch on %r" % (m,))
        degree = self.sym.degree_dual(m)
        if degree != sector.degree:
            raise AssertionError(
                "insertion degree mismatch on %r: %s vs sector %s"
                % (m, degree, sector.degree))
        return SectorBasisElement(
            m=m, gamma=gamma, broad=broad, fixed=sector.fixed,
            form=form if broad else {}, degree=degree)

    def _chain_form(self, wb, k):
        """Ch(K_m) coefficient: prod of (-a_j x_j^{a_j-1}) over the tail
        positions with odd offset from the chain end (n-1, n-3, ..)."""
        out = {(0,) * self.n: Q1}
        for j in range(wb.size - 2 * k + 1, wb.size + 1):
            if (wb.size - j) % 2 == 1:
                out = poly_mul(out, self._var_power(wb, j, QQ(-wb.exponents[j - 1])))
        return out

    def _var_power(self, wb, j, coeff):
        """coeff * x_j^{a_j - 1} for the 1-based block position j."""
        mono = [0] * self.n
        mono[wb.variables[j - 1]] = wb.exponents[j - 1] - 1
        return {tuple(mono): coeff}

    def _loop_form(self, wb, odd):
        """Super-trace Chern character of K_odd / K_even for an even loop."""
        plain = {(0,) * self.n: Q1}
        twisted = {(0,) * self.n: Q1}
        for j in range(1, wb.size + 1):
            if (j % 2 == 1) == odd:
                plain = poly_mul(plain, self._var_power(wb, j, Q1))
            else:
                twisted = poly_mul(twisted, self._var_power(
                    wb, j, QQ(-wb.exponents[j - 1])))
        return poly_add(plain, poly_scale(twisted, QQ(-1)))

    # -- reductions and degrees ----------------------------------------

    def reduce(self, exps):
        """Generator product prod theta_i^{e_i} in basis coordinates."""
        return self.ring.nf_monomial(tuple(exps))

    def degree_of_insertion(self, exps):
        return self.sym.degree_dual(exps)

    # -- pairing ---------------------------------------------------------

    def pairing(self, m1, m2):
        """Production pairing: normalized residue of the dual-side product."""
        return self.ring.pair_normalized({tuple(m1): Q1}, {tuple(m2): Q1})

    def pairing_direct(self, m1, m2):
        """Explicit sector-side pairing: per-block Gram values (loop-metric,
        chain-pairing) on broad pairs, 1 on complementary narrow pairs."""
        if g_add(self.sym.I_map(m1), self.sym.I_map(m2)) != g_identity(self.n):
            return Q0
        total = Q1
        for wb, db in self._block_pairs():
            l1 = tuple(m1[p] for p in wb.variables)
            l2 = tuple(m2[p] for p in wb.variables)
            if wb.kind == LOOP and wb.size % 2 == 0:
                modd, meven = _loop_patterns(wb)
                if l1 in (modd, meven) or l2 in (modd, meven):
                    if not (l1 in (modd, meven) and l2 in (modd, meven)):
                        return Q0
                    if l1 == l2:
                        total *= _signed_product(
                            wb.exponents, parity=0 if l1 == modd else 1)
                    continue
            d1 = tuple(m1[p] for p in db.variables)
            d2 = tuple(m2[p] for p in db.variables)
            if block_complement(db, d1) != d2:
                return Q0
            if wb.kind == CHAIN:
                k = block_stratum(db, d1)
                if k >= 1:
                    total *= self._chain_gram(wb, k)
        return total

    def _chain_gram(self, wb, k):
        total = Q1
        for j in range(wb.size - 2 * k + 1, wb.size + 1):
            if (wb.size - j) % 2 == 1:
                total *= -wb.exponents[j - 1]
        return total

    def gram(self):
        return [[self.pairing(e1.m, e2.m) for e2 in self.basis]
                for e1 in self.basis]

    def gram_direct(self):
        return [[self.pairing_direct(e1.m, e2.m) for e2 in self.basis]
                for e1 in self.basis]

    # -- product and three-point correlators ------------------------------

    def product(self, s1, s2):
        """Frobenius product transported through the mirror map; arguments
        and result are basis-coordinate dictionaries."""
        return self.ring.multiply(s1, s2)

    def three_point(self, e1, e2, e3):
        """<theta^{e1}, theta^{e2}, theta^{e3}> for exponent-vector
        insertions: normalized residue of the triple product."""
        total = tuple(a + b + c for a, b, c in zip(e1, e2, e3))
        return self.ring.residue_normalized(self.ring.nf_monomial(total))

    # -- sector dimensions -------------------------------------------------

    def restricted_polynomial(self, fixed):
        """w restricted to Fix(gamma): an invertible polynomial on the fixed
        variables (renumbered along `fixed`)."""
        rows = []
        fixed = tuple(fixed)
        back = set(fixed)
        for row in self.poly.matrix:
            support = {j for j, e in enumerate(row) if e > 0}
            if support <= back:
                rows.append((1, tuple(row[v] for v in fixed)))
        if len(rows) != len(fixed):
            raise AssertionError(
                "restriction to %r has %d monomials" % (fixed, len(rows)))
        return validate_and_decompose(rows)

    def sector_dimension(self, gamma):
        """dim H(w_gamma)^{G_w}: count G_w-invariant standard monomials
        u dvol of the restricted ring; narrow sectors have rank 1."""
        sector = self.sym.sector_data(gamma)
        if sector.narrow:
            return 1
        fixed = sector.fixed
        sub_basis = MilnorRing(self.restricted_polynomial(fixed)).basis
        gens = self.sym.generators()
        count = 0
        for u in sub_basis:
            if all(is_integer(sum((u[i] + 1) * g[fixed[i]]
                                  for i in range(len(fixed))))
                   for g in gens):
                count += 1
        return count

    def total_dimension(self):
        """Sum of sector dimensions over the full group (audit route)."""
        return sum(self.sector_dimension(g) for g in self.sym.group())

    # -- three-point oracles ------------------------------------------------

    def three_point_oracles(self):
        """Yield (name, (e1, e2, e3), expected) for the closed-form cases:
        concave narrow triples (value 1), chain/loop broad values, and the
        index-zero correlators."""
        sym, ring, n = self.sym, self.ring, self.n
        for j in range(n):
            vj = _unit_vec(n, j)
            if vj not in ring.basis_set:
                continue
            if not sym.sector_data(sym.I_map(vj)).narrow:
                continue
            for m in ring.basis:
                target = tuple(a + b for a, b in zip(m, vj))
                if target not in ring.basis_set:
                    continue
                if not sym.sector_data(sym.I_map(m)).narrow:
                    continue
                if not sym.sector_data(sym.I_map(target)).narrow:
                    continue
                yield ("concave", (vj, m, ring.complement(target)), Q1)
        if len(self.poly.blocks) == 1:
            yield from self._atomic_broad_oracles()
            yield from self._index_zero_oracles()

    def _atomic_broad_oracles(self):
        wb = self.poly.blocks[0]
        db = self.dual_poly.blocks[0]
        ring, n = self.ring, self.n
        a = wb.exponents
        if wb.kind == CHAIN:
            for j in range(n):
                vj = _unit_vec(n, j)
                for m in ring.basis:
                    target = tuple(x + y for x, y in zip(m, vj))
                    if target not in ring.basis_set:
                        continue
                    k = block_stratum(db, tuple(target[p] for p in db.variables))
                    if k < 1:
                        continue
                    yield ("chain-broad",
                           (vj, m, ring.complement(target)),
                           self._chain_gram(wb, k))
        elif wb.kind == LOOP and n % 2 == 0:
            modd_l, meven_l = _loop_patterns(wb)
            modd, meven = [0] * n, [0] * n
            for i, v in enumerate(wb.variables):
                modd[v] = modd_l[i]
                meven[v] = meven_l[i]
            modd, meven = tuple(modd), tuple(meven)
            for bj in range(n):
                vj = _unit_vec(n, wb.variables[bj])
                base = modd if bj % 2 == 0 else meven
                m = tuple(x - y for x, y in zip(base, vj))
                if min(m) < 0:
                    continue
                same = _signed_product(a, parity=0 if bj % 2 == 0 else 1)
                yield ("loop-broad", (vj, m, base), same)
                yield ("loop-broad", (vj, m, meven if bj % 2 == 0 else modd),
                       Q1)

    def _index_zero_oracles(self):
        """<theta_{j+1}, theta_{j+1}^{a_{j+1}-1}, theta(mbar)> = -a_j where
        theta(m) = theta_{j-1} * theta_j^{a_j-1}, all insertions narrow."""
        wb = self.poly.blocks[0]
        sym, ring, n = self.sym, self.ring, self.n
        a = wb.exponents
        if wb.kind == FERMAT:
            return
        for bj in range(n):
            if wb.kind == CHAIN and bj + 1 >= n:
                continue
            bj1 = (bj + 1) % n
            m = [0] * n
            if wb.kind == LOOP or bj >= 1:
                prev = (bj - 1) % n if wb.kind == LOOP else bj - 1
                m[wb.variables[prev]] += 1
            m[wb.variables[bj]] += a[bj] - 1
            m = tuple(m)
            power = [0] * n
            power[wb.variables[bj1]] = a[bj1] - 1
            power = tuple(power)
            vj1 = _unit_vec(n, wb.variables[bj1])
            involved = [m, power, vj1]
            if any(x not in ring.basis_set for x in involved):
                continue
            if not all(sym.sector_data(sym.I_map(x)).narrow for x in involved):
                continue
            mbar = ring.complement(m)
            if not sym.sector_data(sym.I_map(mbar)).narrow:
                continue
            yield ("index-zero", (vj1, power, mbar), QQ(-a[bj]))


def _unit_vec(n, j):
    return tuple(1 if i == j else 0 for i in range(n))
