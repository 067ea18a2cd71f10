"""WDVV reconstruction of the genus-zero correlator sector.

Correlator keys are multisets of insertion exponent vectors, canonicalized
as sorted tuples.  Insertions that are standard vectors denote basis states
theta(m); anything else is reduced through the ring first.

The associativity equations are used in coefficient form.  For spectator
states I (|I| = k - 3) and basis states a, b, c, d:

    sum_{I1 + I2 = I} sum_{mu nu} C(a,b,I1,e_mu) eta^{mu nu} C(e_nu,c,d,I2)

is symmetric under b <-> c (and b <-> d).  The top splittings produce the
k-point terms C(a,b,c*d,I) + C(a*b,c,d,I); proper splittings produce
products of strictly lower-point correlators.  At k = 4 there are no proper
splittings, which is the textbook rewrite

    <x,g,d,e*f> = <x,g,e,d*f> + <x,g*e,d,f> - <x,g*d,e,f>.

The four-point sector is solved exactly from all WDVV instances plus the
seed values F_i = -q_i; five- and six-point values are reduced recursively
by the same rewrite (factoring the largest insertion, exposing the
largest-index generator), with the chain K-vector lemmas zeroing excluded
shapes.  Keys that escape both routes (e.g. all-generator keys, the
appendix's reader-exercise shapes) fall back to a full linear solve of the
k-point WDVV system and are flagged in `fallback_keys`; the same full solve
doubles as the independent oracle for the reduction path.
"""

import itertools
from dataclasses import dataclass

from .exactnum import Q0, Q1, is_integer
from .linalg import RowReducer, invert_matrix, InconsistentSystem
from .poly import CHAIN
from .correlators import CorrelatorEngine


class ReconstructionError(ValueError):
    pass


@dataclass
class KVector:
    """Shape data of a correlator in the normal form
    <theta_n^{l_n}, .., theta_1^{l_1}, alpha, beta>."""
    ell: tuple
    P: tuple
    Q: tuple
    b: tuple
    K: tuple


class Reconstruction:
    def __init__(self, engine, max_k=4):
        if not isinstance(engine, CorrelatorEngine):
            engine = CorrelatorEngine(engine)
        if max_k > 6:
            raise ValueError("point cap is 6")
        self.engine = engine
        self.state = engine.state
        self.ring = self.state.ring
        self.max_k = max_k
        self.n = self.state.n
        self.basis = list(self.ring.basis)
        self.unit = self.state.unit
        self.nonunit = [m for m in self.basis if m != self.unit]
        self._prod = {}
        self._tables = {}
        self._memo = {}
        self._eta_pairs = None
        self.fallback_keys = set()

    # -- shared small pieces ------------------------------------------------

    def canonical(self, key):
        return tuple(sorted(tuple(e) for e in key))

    def product_state(self, m1, m2):
        got = self._prod.get((m1, m2))
        if got is None:
            got = self.ring.nf_monomial(tuple(a + b for a, b in zip(m1, m2)))
            self._prod[(m1, m2)] = got
            self._prod[(m2, m1)] = got
        return got

    def three_point_value(self, key):
        e1, e2, e3 = key
        return self.state.three_point(e1, e2, e3)

    def eta_pairs(self):
        """Sparse nonzero entries (m_mu, m_nu, eta^{mu nu}) of the inverse
        Gram matrix."""
        if self._eta_pairs is None:
            gram = self.state.gram()
            inv = invert_matrix(gram)
            pairs = []
            for i, mi in enumerate(self.basis):
                for j, mj in enumerate(self.basis):
                    if inv[i][j] != 0:
                        pairs.append((mi, mj, inv[i][j]))
            self._eta_pairs = pairs
        return self._eta_pairs

    # -- k-point linear systems ------------------------------------------

    def _known_value(self, key):
        """Correlator value from already-solved tables (len(key) < current
        level).  All insertions are basis vectors."""
        key = self.canonical(key)
        k = len(key)
        if k == 3:
            return self.three_point_value(key)
        if self.unit in key:
            return Q0
        if not self.engine.nonvanishing(key):
            return Q0
        table = self._tables.get(k)
        if table is None:
            raise AssertionError("no table for k=%d" % k)
        return table.get(key, Q0)

    def _unknown_or_none(self, key):
        """Canonical key if it is a genuine unknown at its level, else None
        (value identically zero)."""
        key = self.canonical(key)
        if self.unit in key:
            return None
        if not self.engine.nonvanishing(key):
            return None
        return key

    def _pairing_side(self, p, q, r, s, spectators):
        """Row (dict unknown->coeff) and constant for one side of the WDVV
        instance: sum over splittings of C(p,q,I1,mu) eta C(nu,r,s,I2)."""
        row = {}
        const = Q0
        # top splitting I1 = I: C(p, q, r*s, I)
        for m, coef in self.product_state(r, s).items():
            key = self._unknown_or_none((p, q, m) + spectators)
            if key is not None:
                row[key] = row.get(key, Q0) + coef
        # top splitting I2 = I: C(p*q, r, s, I)
        for m, coef in self.product_state(p, q).items():
            key = self._unknown_or_none((m, r, s) + spectators)
            if key is not None:
                row[key] = row.get(key, Q0) + coef
        # proper splittings: products of strictly lower correlators
        npos = len(spectators)
        for size in range(1, npos):
            for subset in itertools.combinations(range(npos), size):
                left = tuple(spectators[i] for i in subset)
                right = tuple(spectators[i] for i in range(npos)
                              if i not in subset)
                for mu, nu, coef in self.eta_pairs():
                    v1 = self._known_value((p, q, mu) + left)
                    if v1 == 0:
                        continue
                    v2 = self._known_value((nu, r, s) + right)
                    if v2 == 0:
                        continue
                    const += coef * v1 * v2
        return row, const

    def _wdvv_instances(self, k):
        """Yield (row, rhs) equations for the k-point unknowns."""
        for quad in itertools.combinations_with_replacement(self.nonunit, 4):
            a, b, c, d = quad
            for spec in itertools.combinations_with_replacement(
                    self.nonunit, k - 3):
                r1, c1 = self._pairing_side(a, b, c, d, spec)
                r2, c2 = self._pairing_side(a, c, b, d, spec)
                r3, c3 = self._pairing_side(a, d, b, c, spec)
                for rr, cc in ((r2, c2), (r3, c3)):
                    row = dict(r1)
                    for kk, vv in rr.items():
                        nv = row.get(kk, Q0) - vv
                        if nv == 0:
                            row.pop(kk, None)
                        else:
                            row[kk] = nv
                    if row or cc != c1:
                        yield row, cc - c1

    def four_point_table(self):
        """Solve the 4-point sector: WDVV instances plus the seeds F_i."""
        return self.solve_k_point(4)

    def solve_k_point(self, k):
        """Exact linear solve of all k-point WDVV instances (k >= 4); the
        4-point level adds the seed equations.  Raises on underdetermined or
        inconsistent systems."""
        if k in self._tables:
            return self._tables[k]
        if k < 4:
            raise ValueError("solve_k_point starts at k = 4")
        if k - 1 not in self._tables and k > 4:
            self.solve_k_point(k - 1)
        unknowns = [
            self.canonical(key) for key in
            itertools.combinations_with_replacement(self.nonunit, k)]
        unknowns = sorted({u for u in unknowns
                           if self._unknown_or_none(u) is not None})
        reducer = RowReducer()
        if k == 4:
            for i in self.engine.fourpoint_indices():
                if not self.engine.fourpoint_state_check(i):
                    continue
                key = self.canonical(self.engine.fourpoint_key(i))
                if self._unknown_or_none(key) is None:
                    raise AssertionError("seed F_%d fails nonvanishing" % i)
                reducer.add({key: Q1}, self.engine.four_point_special(i))
        try:
            for row, rhs in self._wdvv_instances(k):
                reducer.add(row, rhs)
            solution = reducer.solve(unknowns)
        except InconsistentSystem as exc:
            raise ReconstructionError(
                "%d-point WDVV system failed: %s" % (k, exc)) from exc
        self._tables[k] = solution
        return solution

    def wdvv_residuals_zero(self, k=4):
        """Re-verify every WDVV instance against the solved table."""
        table = self.solve_k_point(k)
        for row, rhs in self._wdvv_instances(k):
            total = -rhs
            for key, coef in row.items():
                total += coef * table.get(key, Q0)
            if total != 0:
                return False
        return True

    # -- K-vector combinatorics (chain lemmas) -----------------------------

    def k_vector(self, key):
        """Cast a key into the normal shape <theta_n^{l_n},..,alpha,beta>
        and compute b = E^{-1}(l + P + Q + 2), K = l - b + 1."""
        key = self.canonical(key)
        insertions = [tuple(e) for e in key]
        nongen = [e for e in insertions if sum(e) != 1]
        if len(nongen) > 2:
            raise ReconstructionError(
                "key has %d non-generator insertions; not of the normal shape"
                % len(nongen))
        rest = [e for e in insertions if sum(e) == 1]
        by_weight = sorted(
            rest, key=lambda e: (self.state.degree_of_insertion(e), e),
            reverse=True)
        ab = list(nongen)
        while len(ab) < 2:
            ab.append(by_weight.pop(0))
        gens = [e for e in insertions]
        for e in ab:
            gens.remove(e)
        ell = [0] * self.n
        for e in gens:
            ell[e.index(1)] += 1
        total = [sum(e[i] for e in insertions) + 2 for i in range(self.n)]
        b = [sum((self.sym_einv[j][i] * total[i] for i in range(self.n)), Q0)
             for j in range(self.n)]
        if not all(is_integer(x) for x in b):
            raise ReconstructionError("non-integral b: %s" % b)
        b = [int(x) for x in b]
        K = tuple(ell[i] - b[i] + 1 for i in range(self.n))
        return KVector(ell=tuple(ell), P=ab[0], Q=ab[1], b=tuple(b), K=K)

    @property
    def sym_einv(self):
        return self.state.sym.einv

    def shape_allowed(self, kv):
        """Admissible K shapes for a chain polynomial: K_n in [-1, l_n] with
        the K_n = -1 side conditions, the (K_i <= 0 => K_i + K_{i+1} >= 0)
        constraint, and for K_n >= 0 the two concatenation patterns."""
        block = self.state.poly.blocks[0]
        if block.kind != CHAIN or len(self.state.poly.blocks) != 1:
            raise ReconstructionError("K-shape lemmas apply to atomic chains")
        a = block.exponents
        K, ell, P, Q = kv.K, kv.ell, kv.P, kv.Q
        n = self.n
        if K[-1] < -1 or K[-1] > ell[-1]:
            return False
        if K[-1] == -1:
            return ell[-1] == 0 and P[-1] + Q[-1] == 2 * a[-1] - 2
        for i in range(n - 1):
            if K[i] <= 0:
                s = K[i] + K[i + 1]
                if s < 0:
                    return False
                if s == 0 and K[i] != 0:
                    if (K[i], K[i + 1]) != (-1, 1):
                        return False
                    if ell[i] != 0 or ell[i + 1] != 0 \
                            or P[i] + Q[i] != 2 * a[i] - 2:
                        return False
        return self._pattern_allowed(K)

    @staticmethod
    def _pattern_allowed(K):
        """K is a concatenation of (0)s and (-1,1)s followed by (1), or such
        a concatenation with one of (1), (-1,2), (-2,3) inserted, then (0)."""
        n = len(K)
        tokens = []
        i = 0
        while i < n:
            if K[i] == 0:
                tokens.append(("zero",))
                i += 1
            elif K[i] == 1:
                tokens.append(("special", 1))
                i += 1
            elif K[i] == -1 and i + 1 < n and K[i + 1] == 1:
                tokens.append(("pair",))
                i += 2
            elif K[i] == -1 and i + 1 < n and K[i + 1] == 2:
                tokens.append(("special", 2))
                i += 2
            elif K[i] == -2 and i + 1 < n and K[i + 1] == 3:
                tokens.append(("special", 3))
                i += 2
            else:
                return False
        specials = [t for t in tokens if t[0] == "special"]
        if len(specials) != 1:
            return False
        if tokens[-1] == ("special", 1):
            return True
        return tokens[-1] == ("zero",)

    # -- the WDVV rewrite ---------------------------------------------------

    def wdvv_rewrite(self, key, gamma, delta, eps, phi):
        """Rewrite <I, gamma, delta, eps*phi> through the associativity
        identity.  `eps` must be a generator and eps+phi (componentwise) an
        insertion of `key`; gamma and delta are two further insertions.

        Returns (terms, s_terms): `terms` is a list of (coeff, key) over the
        three top keys <I,gamma,eps,delta*phi>, <I,gamma*eps,delta,phi>,
        -<I,gamma*delta,eps,phi> with product states expanded in the basis;
        `s_terms` is a list of (coeff, key_left, key_right) of
        pairing-contracted products of strictly lower-point correlators
        (empty when k = 4, per the S = 0 statement)."""
        if sum(eps) != 1:
            raise ReconstructionError("eps must be a single generator")
        target = tuple(a + b for a, b in zip(eps, phi))
        rest = list(key)
        for e in (target, gamma, delta):
            try:
                rest.remove(tuple(e))
            except ValueError:
                raise ReconstructionError(
                    "eps*phi, gamma, delta must be insertions of the key")
        spectators = tuple(rest)
        terms = []
        for m, coef in self._state_product(delta, phi).items():
            terms.append((coef, self.canonical(
                (gamma, eps, m) + spectators)))
        for m, coef in self._state_product(gamma, eps).items():
            terms.append((coef, self.canonical(
                (m, delta, phi) + spectators)))
        for m, coef in self._state_product(gamma, delta).items():
            terms.append((-coef, self.canonical(
                (m, eps, phi) + spectators)))
        s_terms = []
        npos = len(spectators)
        for size in range(1, npos):
            for subset in itertools.combinations(range(npos), size):
                left = tuple(spectators[t] for t in subset)
                right = tuple(spectators[t] for t in range(npos)
                              if t not in subset)
                for mu, nu, coef in self.eta_pairs():
                    s_terms.append((coef,
                                    self.canonical((gamma, eps, mu) + left),
                                    self.canonical((nu, delta, phi) + right)))
                    s_terms.append((-coef,
                                    self.canonical((gamma, delta, mu) + left),
                                    self.canonical((nu, eps, phi) + right)))
        return terms, s_terms

    # -- recursive reduction (appendix strategy) ----------------------------

    def reduce_correlator(self, key):
        """Value of a genus-zero primary correlator, k <= max_k."""
        key = tuple(tuple(e) for e in key)
        if len(key) > self.max_k:
            raise ReconstructionError(
                "key has %d insertions, cap is %d" % (len(key), self.max_k))
        if len(key) < 3:
            raise ReconstructionError("correlators start at 3 points")
        return self._value(key, ())

    def _value(self, key, stack):
        for idx, e in enumerate(key):
            if e not in self.ring.basis_set:
                state = self.ring.nf_monomial(e)
                total = Q0
                for m, coef in state.items():
                    total += coef * self._value(
                        key[:idx] + (m,) + key[idx + 1:], stack)
                return total
        key = self.canonical(key)
        if key in self._memo:
            return self._memo[key]
        value = self._evaluate(key, stack)
        self._memo[key] = value
        return value

    def _evaluate(self, key, stack):
        k = len(key)
        if self.unit in key:
            if k == 3:
                others = [e for e in key if e != self.unit]
                if len(others) < 2:
                    others += [self.unit] * (2 - len(others))
                return self.state.pairing(others[0], others[1])
            return Q0  # string equation, primary insertions only
        if not self.engine.nonvanishing(key):
            return Q0
        if k == 3:
            return self.three_point_value(key)
        if k == 4:
            return self.four_point_table().get(key, Q0)
        if self._chain_shape_zero(key):
            return Q0
        if key in stack:
            return self._fallback(key)
        rewritten = self._rewrite(key, stack + (key,))
        if rewritten is None:
            return self._fallback(key)
        return rewritten

    def _chain_shape_zero(self, key):
        """Zero by the chain K-shape lemmas (atomic chains only)."""
        poly = self.state.poly
        if len(poly.blocks) != 1 or poly.blocks[0].kind != CHAIN:
            return False
        try:
            kv = self.k_vector(key)
        except ReconstructionError:
            return False
        return not self.shape_allowed(kv)

    def _rewrite(self, key, stack):
        """One (reconst_eq) step: factor an insertion as theta_j * phi and
        trade the key for lower data plus same-k keys.  The primary choice
        (largest insertion, largest generator index, big gamma / small
        delta) mirrors the proof order; alternatives are tried when a choice
        would reproduce the key immediately."""
        def weight(e):
            return (self.state.degree_of_insertion(e), e)
        factorable = sorted((e for e in set(key) if sum(e) >= 2),
                            key=weight, reverse=True)
        if not factorable:
            return None
        chosen = None
        for target in factorable:
            for j in sorted((i for i in range(self.n) if target[i] > 0),
                            reverse=True):
                eps = tuple(1 if i == j else 0 for i in range(self.n))
                phi = tuple(e - (1 if i == j else 0)
                            for i, e in enumerate(target))
                rest = list(key)
                rest.remove(target)
                rest.sort(key=weight, reverse=True)
                chosen = self._choose_pair(key, rest, eps, phi)
                if chosen is not None:
                    break
            if chosen is not None:
                break
        if chosen is None:
            return None
        gamma, delta, _ = chosen
        terms, s_terms = self.wdvv_rewrite(key, gamma, delta, eps, phi)
        total = Q0
        for coef, term_key in terms:
            total += coef * self._value(term_key, stack)
        for coef, left_key, right_key in s_terms:
            v1 = self._value(left_key, stack)
            if v1 != 0:
                total += coef * v1 * self._value(right_key, stack)
        return total

    def _choose_pair(self, key, rest, eps, phi):
        """Pick (gamma, delta, spectators) so that no term of the rewrite
        reproduces the key itself (which would cycle immediately).
        Preference order mirrors the proof: big gamma, small delta != eps."""
        canon = self.canonical(key)
        ranked = []
        for gi in range(len(rest)):
            for di in range(len(rest)):
                if di == gi:
                    continue
                ranked.append((rest[di] == eps, gi,
                               len(rest) - 1 - di, gi, di))
        ranked.sort()
        for _, _, _, gi, di in ranked:
            gamma, delta = rest[gi], rest[di]
            spect = tuple(rest[t] for t in range(len(rest))
                          if t not in (gi, di))
            bad = False
            for m in self._state_product(delta, phi):
                if self.canonical((gamma, eps, m) + spect) == canon:
                    bad = True
                    break
            if not bad:
                for m in self._state_product(gamma, eps):
                    if self.canonical((m, delta, phi) + spect) == canon:
                        bad = True
                        break
            if not bad:
                for m in self._state_product(gamma, delta):
                    if self.canonical((m, eps, phi) + spect) == canon:
                        bad = True
                        break
            if not bad:
                return gamma, delta, spect
        return None

    def _state_product(self, e1, e2):
        return self.ring.nf_monomial(tuple(a + b for a, b in zip(e1, e2)))

    def _fallback(self, key):
        """Full k-point linear solve for shapes the rewrite cannot reach."""
        self.fallback_keys.add(key)
        return self.solve_k_point(len(key)).get(key, Q0)

    # -- prepotential table ---------------------------------------------

    def prepotential(self, max_k=None):
        """Nonzero primary correlators by point count; together with the
        1/r! convention of the exponential generating function (documented
        in the CLI JSON schema) this is the genus-zero prepotential."""
        if max_k is None:
            max_k = self.max_k
        if max_k > self.max_k:
            raise ReconstructionError("max_k exceeds the configured cap")
        out = {}
        table3 = {}
        for key in itertools.combinations_with_replacement(self.basis, 3):
            key = self.canonical(key)
            v = self.three_point_value(key)
            if v != 0:
                table3[key] = v
        out[3] = table3
        if max_k >= 4:
            out[4] = {k: v for k, v in self.four_point_table().items()
                      if v != 0}
        for k in range(5, max_k + 1):
            level = {}
            for key in itertools.combinations_with_replacement(
                    self.nonunit, k):
                key = self.canonical(key)
                if self._unknown_or_none(key) is None:
                    continue
                v = self._value(key, ())
                if v != 0:
                    level[key] = v
            out[k] = level
        return out
