"""Exact linear algebra over the rationals.

Gaussian elimination with deterministic pivoting (first nonzero entry in a
fixed row/column order), as fraction-free as exact rational arithmetic
allows.  Two front ends:

* ExactSolver - dense factorization of one matrix, reused for many
  right-hand sides (the per-degree normal-form systems of the Milnor ring).
* RowReducer - incremental sparse reduction for large redundant systems
  (the WDVV equation systems), detecting inconsistency on the fly.
"""

from .exactnum import QQ, Q0


class InconsistentSystem(ValueError):
    """The linear system admits no exact solution."""


class ExactSolver:
    """Row echelon factorization of a dense rational matrix A (rows x cols).

    solve(b) returns one exact solution x of A x = b with all free variables
    set to zero, or raises InconsistentSystem.  The elimination is performed
    once; each solve only transforms the right-hand side.
    """

    def __init__(self, rows):
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        a = [[QQ(v) for v in row] for row in rows]
        # transform[i] = coefficients expressing echelon row i in input rows
        transform = [[Q0] * self.nrows for _ in range(self.nrows)]
        for i in range(self.nrows):
            transform[i][i] = QQ(1)
        pivots = []  # (row, col)
        prow = 0
        for col in range(self.ncols):
            sel = None
            for r in range(prow, self.nrows):
                if a[r][col] != 0:
                    sel = r
                    break
            if sel is None:
                continue
            if sel != prow:
                a[prow], a[sel] = a[sel], a[prow]
                transform[prow], transform[sel] = transform[sel], transform[prow]
            piv = a[prow][col]
            for r in range(prow + 1, self.nrows):
                f = a[r][col]
                if f == 0:
                    continue
                ratio = f / piv
                arow, aprow = a[r], a[prow]
                for c in range(col, self.ncols):
                    if aprow[c] != 0:
                        arow[c] -= ratio * aprow[c]
                trow, tprow = transform[r], transform[prow]
                for c in range(self.nrows):
                    if tprow[c] != 0:
                        trow[c] -= ratio * tprow[c]
            pivots.append((prow, col))
            prow += 1
        self._a = a
        self._transform = transform
        self._pivots = pivots
        self.rank = prow

    def solve(self, b):
        y = []
        for i in range(self.nrows):
            s = Q0
            trow = self._transform[i]
            for j, bj in enumerate(b):
                if bj != 0 and trow[j] != 0:
                    s += trow[j] * bj
            y.append(s)
        for r in range(self.rank, self.nrows):
            if y[r] != 0:
                raise InconsistentSystem("inconsistent right-hand side")
        x = [Q0] * self.ncols
        for r, c in reversed(self._pivots):
            s = y[r]
            arow = self._a[r]
            for c2 in range(c + 1, self.ncols):
                if arow[c2] != 0 and x[c2] != 0:
                    s -= arow[c2] * x[c2]
            x[c] = s / arow[c]
        return x


class RowReducer:
    """Incremental reduction of sparse rows (dict unknown -> coeff, rhs).

    Rows are reduced against the stored pivot rows; independent rows are
    kept, dependent rows must reduce to 0 = 0 or the system is inconsistent.
    Unknown keys must be orderable; the pivot of a row is its smallest key.
    """

    def __init__(self):
        self.pivot_rows = {}  # pivot key -> (row dict, rhs)

    def reduce_row(self, row, rhs):
        row = {k: QQ(v) for k, v in row.items() if v != 0}
        while row:
            piv = min(row)
            if piv not in self.pivot_rows:
                coef = row[piv]
                row = {k: v / coef for k, v in row.items()}
                rhs = rhs / coef
                return row, rhs, piv
            prow, prhs = self.pivot_rows[piv]
            f = row[piv]
            for k, v in prow.items():
                nv = row.get(k, Q0) - f * v
                if nv == 0:
                    row.pop(k, None)
                else:
                    row[k] = nv
            rhs = rhs - f * prhs
        if rhs != 0:
            raise InconsistentSystem("0 = %s in WDVV system" % rhs)
        return None, Q0, None

    def add(self, row, rhs):
        """Feed one equation; returns True if it added a new pivot."""
        red, rrhs, piv = self.reduce_row(row, QQ(rhs))
        if red is None:
            return False
        self.pivot_rows[piv] = (red, rrhs)
        return True

    @property
    def rank(self):
        return len(self.pivot_rows)

    def solve(self, unknowns):
        """Back-substitute; every unknown must be pinned (unique solution)."""
        missing = [u for u in unknowns if u not in self.pivot_rows]
        if missing:
            raise InconsistentSystem(
                "underdetermined system, %d unknowns unpinned" % len(missing))
        values = {}
        for piv in sorted(self.pivot_rows, reverse=True):
            row, rhs = self.pivot_rows[piv]
            s = rhs
            for k, v in row.items():
                if k != piv:
                    s -= v * values[k]
            values[piv] = s
        return values


def invert_matrix(rows):
    """Exact inverse of a square rational/integer matrix."""
    n = len(rows)
    solver = ExactSolver(rows)
    if solver.rank != n:
        raise InconsistentSystem("matrix is singular")
    cols = []
    for j in range(n):
        e = [Q0] * n
        e[j] = QQ(1)
        cols.append(solver.solve(e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def determinant(rows):
    """Exact determinant via fraction-free style elimination over QQ."""
    n = len(rows)
    a = [[QQ(v) for v in row] for row in rows]
    det = QQ(1)
    for col in range(n):
        sel = None
        for r in range(col, n):
            if a[r][col] != 0:
                sel = r
                break
        if sel is None:
            return Q0
        if sel != col:
            a[col], a[sel] = a[sel], a[col]
            det = -det
        piv = a[col][col]
        det *= piv
        for r in range(col + 1, n):
            f = a[r][col]
            if f == 0:
                continue
            ratio = f / piv
            for c in range(col, n):
                a[r][c] -= ratio * a[col][c]
    return det
