"""Invertible polynomial parsing, validation, and atomic decomposition.

Grammar (whitespace-insensitive):

    poly   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := VAR ('^' INT)? | INT
    VAR    := 'x' INT

Bare integers are accepted by the parser only so that non-unit coefficients
can be rejected with a precise message; rescaling coefficients is out of
scope.

An invertible polynomial in n variables has exactly n monomials and a
nonsingular exponent matrix, and decomposes into Fermat / chain / loop
atomic blocks:

    Fermat  x1^a
    Chain   x1^a1 x2 + x2^a2 x3 + ... + xm^am
    Loop    x1^a1 x2 + ... + xm^am x1        (all exponents >= 2)

The decomposition is found from the directed graph i -> t(i), where monomial
i is x_i^{a_i} (no edge) or x_i^{a_i} x_{t(i)}.  Connected components must
be isolated vertices (Fermat), paths (chain), or cycles (loop).
"""

from dataclasses import dataclass

from .exactnum import QQ
from .linalg import ExactSolver, determinant

FERMAT = "fermat"
CHAIN = "chain"
LOOP = "loop"


class PolynomialError(ValueError):
    """Raised for syntax errors and non-invertible input."""

    def __init__(self, message, position=None):
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super().__init__(message)
        self.position = position


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, ch):
        if self._peek() != ch:
            raise PolynomialError("expected '%s'" % ch, self.pos)
        self.pos += 1

    def _int(self):
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise PolynomialError("expected integer", start)
        return int(self.text[start:self.pos])

    def _factor(self):
        ch = self._peek()
        if ch == "x":
            self.pos += 1
            idx = self._int()
            if idx < 1:
                raise PolynomialError("variable index must be >= 1", self.pos)
            exp = 1
            if self._peek() == "^":
                self.pos += 1
                exp = self._int()
            return ("var", idx, exp)
        if ch.isdigit():
            return ("coeff", self._int(), self.pos)
        raise PolynomialError("expected variable or integer", self.pos)

    def _term(self):
        coeff = 1
        exps = {}
        while True:
            kind, value, extra = self._factor()
            if kind == "var":
                exps[value] = exps.get(value, 0) + extra
            else:
                coeff *= value
            if self._peek() == "*":
                self.pos += 1
                continue
            break
        return coeff, exps

    def parse(self):
        terms = [self._term()]
        while self._peek() == "+":
            self.pos += 1
            terms.append(self._term())
        self._skip_ws()
        if self.pos != len(self.text):
            raise PolynomialError("unexpected trailing input", self.pos)
        return terms


def parse_polynomial(text):
    """Parse to a list of (coefficient, exponent-vector) with collected terms.

    Variables are x1..xn with n inferred from the highest index used.
    Raises PolynomialError on syntax errors or any coefficient other than 1
    (after collecting repeated monomials).
    """
    if not text.strip():
        raise PolynomialError("empty polynomial")
    terms = _Parser(text).parse()
    n = 0
    for _, exps in terms:
        if exps:
            n = max(n, max(exps))
    if n == 0:
        raise PolynomialError("polynomial has no variables")
    collected = {}
    for coeff, exps in terms:
        key = tuple(exps.get(i, 0) for i in range(1, n + 1))
        collected[key] = collected.get(key, 0) + coeff
    monomials = []
    for key in sorted(collected, reverse=True):
        coeff = collected[key]
        if coeff == 0:
            continue
        if coeff != 1:
            raise PolynomialError(
                "non-unit coefficient %d on monomial %s; "
                "coefficient rescaling is not supported" % (coeff, key))
        if sum(key) == 0:
            raise PolynomialError("constant terms are not allowed")
        monomials.append((1, key))
    return monomials


@dataclass(frozen=True)
class AtomicBlock:
    """One atomic summand: kind, exponents a_1..a_m, and the global variable
    positions (0-based) in canonical head-to-tail order."""
    kind: str
    exponents: tuple
    variables: tuple

    @property
    def size(self):
        return len(self.exponents)

    def group_order(self):
        p = 1
        for a in self.exponents:
            p *= a
        if self.kind == LOOP:
            p += (-1) ** (self.size + 1)
        return p


@dataclass(frozen=True)
class InvertiblePolynomial:
    """Exponent matrix (row i = monomial headed by variable i) plus its
    atomic block decomposition."""
    matrix: tuple
    blocks: tuple

    @property
    def n(self):
        return len(self.matrix)

    def monomials(self):
        return list(self.matrix)

    def dual(self):
        """Berglund-Huebsch dual: transposed exponent matrix, blocks rederived
        (a chain dualizes to the reversed chain)."""
        n = self.n
        tmat = tuple(tuple(self.matrix[j][i] for j in range(n))
                     for i in range(n))
        dual_blocks = []
        for b in self.blocks:
            if b.kind == FERMAT:
                dual_blocks.append(b)
            elif b.kind == CHAIN:
                dual_blocks.append(AtomicBlock(
                    CHAIN, tuple(reversed(b.exponents)),
                    tuple(reversed(b.variables))))
            else:
                vs = (b.variables[0],) + tuple(reversed(b.variables[1:]))
                es = (b.exponents[0],) + tuple(reversed(b.exponents[1:]))
                dual_blocks.append(_rotate_loop(AtomicBlock(LOOP, es, vs)))
        return InvertiblePolynomial(tmat, tuple(dual_blocks))

    def text(self):
        """Render as grammar-conforming text, monomials in row order."""
        parts = []
        for row in self.matrix:
            factors = []
            for j, e in enumerate(row):
                if e == 1:
                    factors.append("x%d" % (j + 1))
                elif e > 1:
                    factors.append("x%d^%d" % (j + 1, e))
            parts.append("*".join(factors))
        return " + ".join(parts)


def _rotate_loop(block):
    """Canonical rotation of a loop block: start at the smallest variable."""
    vs, es = block.variables, block.exponents
    k = vs.index(min(vs))
    return AtomicBlock(LOOP, es[k:] + es[:k], vs[k:] + vs[:k])


def validate_and_decompose(raw):
    """Validate a parsed polynomial (or text) and decompose it into blocks.

    Checks: monomial count equals variable count, each monomial is x_i^a or
    x_i^a * x_t with a >= 2, the head assignment is a bijection, the target
    graph splits into paths and cycles, the exponent matrix is nonsingular,
    and the weight system q with E q = (1,..,1) is strictly positive.
    """
    if isinstance(raw, str):
        raw = parse_polynomial(raw)
    monos = [key for _, key in raw]
    if not monos:
        raise PolynomialError("no monomials")
    n = len(monos[0])
    if len(monos) != n:
        raise PolynomialError(
            "need exactly %d monomials for %d variables, got %d"
            % (n, n, len(monos)))

    head = {}    # variable -> (exponent, target or None)
    for key in monos:
        support = [j for j, e in enumerate(key) if e > 0]
        if len(support) == 1:
            j = support[0]
            if key[j] < 2:
                raise PolynomialError(
                    "monomial x%d^%d: single-variable exponent must be >= 2"
                    % (j + 1, key[j]))
            h, t = j, None
        elif len(support) == 2:
            j1, j2 = support
            e1, e2 = key[j1], key[j2]
            if e1 == 1 and e2 >= 2:
                h, t = j2, j1
            elif e2 == 1 and e1 >= 2:
                h, t = j1, j2
            else:
                raise PolynomialError(
                    "monomial with exponents (%d, %d) on x%d, x%d: expected "
                    "one exponent >= 2 and the second exponent exactly 1"
                    % (e1, e2, j1 + 1, j2 + 1))
        else:
            raise PolynomialError(
                "monomial with %d variables: at most two are allowed"
                % len(support))
        if h in head:
            raise PolynomialError(
                "two monomials are headed by x%d" % (h + 1))
        head[h] = (key[h], t)
    if set(head) != set(range(n)):
        missing = sorted(set(range(n)) - set(head))
        raise PolynomialError(
            "variable x%d heads no monomial (matrix would be singular)"
            % (missing[0] + 1))

    # Head-aligned matrix: row i = the monomial headed by x_{i+1}.
    matrix = []
    for i in range(n):
        a, t = head[i]
        row = [0] * n
        row[i] = a
        if t is not None:
            row[t] += 1
        matrix.append(tuple(row))
    matrix = tuple(matrix)

    if determinant(matrix) == 0:
        raise PolynomialError("exponent matrix is singular")
    weights = ExactSolver([list(r) for r in matrix]).solve([QQ(1)] * n)
    for i, q in enumerate(weights):
        if q <= 0:
            raise PolynomialError("weight q_%d = %s is not positive"
                                  % (i + 1, q))

    # Component analysis on the functional graph i -> t(i).
    indeg = {i: 0 for i in range(n)}
    for i in range(n):
        t = head[i][1]
        if t is not None:
            indeg[t] += 1
    for i, d in indeg.items():
        if d > 1:
            raise PolynomialError(
                "variable x%d is the tail of %d monomials "
                "(component is not a path or cycle)" % (i + 1, d))

    blocks = []
    seen = set()
    # Chains and Fermats: walk forward from sources (in-degree 0).
    for start in range(n):
        if indeg[start] != 0 or start in seen:
            continue
        chain_vars = []
        cur = start
        while cur is not None:
            if cur in seen:
                raise PolynomialError(
                    "component through x%d is not a path or cycle" % (cur + 1))
            seen.add(cur)
            chain_vars.append(cur)
            cur = head[cur][1]
        exps = tuple(head[v][0] for v in chain_vars)
        if len(chain_vars) == 1:
            blocks.append(AtomicBlock(FERMAT, exps, tuple(chain_vars)))
        else:
            blocks.append(AtomicBlock(CHAIN, exps, tuple(chain_vars)))
    # Remaining components are cycles.
    for start in range(n):
        if start in seen:
            continue
        cycle_vars = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            cycle_vars.append(cur)
            cur = head[cur][1]
            if cur is None:
                raise PolynomialError(
                    "component through x%d is not a path or cycle"
                    % (start + 1))
        if cur != start:
            raise PolynomialError(
                "component through x%d is not a path or cycle" % (start + 1))
        exps = tuple(head[v][0] for v in cycle_vars)
        blocks.append(_rotate_loop(AtomicBlock(LOOP, exps, tuple(cycle_vars))))

    blocks.sort(key=lambda b: b.variables[0])
    return InvertiblePolynomial(matrix, tuple(blocks))


def from_text(text):
    return validate_and_decompose(parse_polynomial(text))
