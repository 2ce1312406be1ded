"""Exact linear algebra over Q and Z used by the centre and lattice searches.

Rows are sparse dicts column -> Fraction.  The reducer keeps a fully
reduced (RREF) pivot set so null spaces and particular solutions read off
directly.  Integer lattice kernels go through unimodular row reduction of
[A^T | I], which yields a saturated basis, then a row-style Hermite normal
form for a canonical answer.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Row = dict[int, Fraction]


class LinearSystem:
    """Incrementally reduced sparse linear system over Q."""

    def __init__(self):
        self.pivots: dict[int, Row] = {}  # pivot column -> reduced row

    def reduce_row(self, row: Row) -> Row:
        # Pivot rows carry no other pivot columns, so one pass over the
        # pivot columns present in the incoming row fully reduces it.
        row = {c: Fraction(v) for c, v in row.items() if v != 0}
        for c in sorted(c for c in row if c in self.pivots):
            factor = row.get(c)
            if not factor:
                continue
            for pc, pv in self.pivots[c].items():
                s = row.get(pc, Fraction(0)) - factor * pv
                if s:
                    row[pc] = s
                else:
                    row.pop(pc, None)
        return row

    def add_row(self, row: Row) -> bool:
        """Insert a row; returns True when it added a new pivot."""
        row = self.reduce_row(row)
        if not row:
            return False
        c = min(row)
        lead = row[c]
        row = {col: v / lead for col, v in row.items()}
        for pivot in self.pivots.values():
            if c in pivot:
                factor = pivot[c]
                for col, v in row.items():
                    s = pivot.get(col, Fraction(0)) - factor * v
                    if s:
                        pivot[col] = s
                    else:
                        pivot.pop(col, None)
        self.pivots[c] = row
        return True

    def rank(self) -> int:
        return len(self.pivots)

    def null_space(self, ncols: int) -> list[list[Fraction]]:
        """Canonical kernel basis, one vector per free column."""
        basis = []
        for free in range(ncols):
            if free in self.pivots:
                continue
            vec = [Fraction(0)] * ncols
            vec[free] = Fraction(1)
            for pc, row in self.pivots.items():
                v = row.get(free)
                if v:
                    vec[pc] = -v
            basis.append(vec)
        return basis

    def contains(self, row: Row) -> bool:
        """Whether the row lies in the span of the inserted rows."""
        return not self.reduce_row(row)


def solve(rows: Iterable[tuple[Row, Fraction]], ncols: int) -> list[Fraction] | None:
    """One exact solution of A x = b with free coordinates pinned to zero.

    ``rows`` yields (coefficient row, rhs).  Returns None when the system is
    inconsistent.  The rhs is carried as an extra column, so a pivot landing
    there certifies infeasibility.
    """
    rhs_col = ncols
    system = LinearSystem()
    for row, b in rows:
        full = dict(row)
        if b:
            full[rhs_col] = Fraction(b)
        system.add_row(full)
    if rhs_col in system.pivots:
        return None
    x = [Fraction(0)] * ncols
    for pc, row in system.pivots.items():
        x[pc] = row.get(rhs_col, Fraction(0))
    return x


# -- integer lattices -----------------------------------------------------

def hnf_rows(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form (nonzero rows, positive pivots,
    entries above a pivot reduced into [0, pivot))."""
    mat = [list(map(int, r)) for r in rows]
    if not mat:
        return []
    ncols = len(mat[0])
    top = 0
    for col in range(ncols):
        # gcd-eliminate below `top` in this column
        while True:
            live = [i for i in range(top, len(mat)) if mat[i][col] != 0]
            if not live:
                break
            i0 = min(live, key=lambda i: abs(mat[i][col]))
            mat[top], mat[i0] = mat[i0], mat[top]
            done = True
            for i in range(top + 1, len(mat)):
                if mat[i][col]:
                    q = mat[i][col] // mat[top][col]
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[top])]
                    if mat[i][col]:
                        done = False
            if done:
                break
        if top < len(mat) and mat[top][col] != 0:
            if mat[top][col] < 0:
                mat[top] = [-a for a in mat[top]]
            for i in range(top):
                q = mat[i][col] // mat[top][col]
                if q:
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[top])]
            top += 1
    return [r for r in mat if any(r)]


def integer_kernel(mat: Sequence[Sequence[Fraction | int]]) -> list[list[int]]:
    """Canonical basis of {v in Z^n : v . row_j = 0 for all j}.

    Accepts a rational matrix given as rows of the bilinear form; the
    kernel condition is sum_i v[i] * mat[i][j] == 0 for every j.
    """
    mat = [list(r) for r in mat]
    n = len(mat)
    if n == 0:
        return []
    m = len(mat[0])
    denom = 1
    for row in mat:
        for v in row:
            denom = denom * Fraction(v).denominator // _gcd(denom, Fraction(v).denominator)
    A = [[int(Fraction(v) * denom) for v in row] for row in mat]  # n x m, integral

    # Augment [A | I_n] and run unimodular row reduction on the A-part.
    aug = [A[i] + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    reduced = _echelon_integer(aug, m)
    kernel = [row[m:] for row in reduced if not any(row[:m])]
    return hnf_rows(kernel) if kernel else []


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _echelon_integer(mat: list[list[int]], ncols: int) -> list[list[int]]:
    """Integer row echelon on the first ``ncols`` columns (unimodular ops)."""
    top = 0
    for col in range(ncols):
        while True:
            live = [i for i in range(top, len(mat)) if mat[i][col] != 0]
            if not live:
                break
            i0 = min(live, key=lambda i: abs(mat[i][col]))
            mat[top], mat[i0] = mat[i0], mat[top]
            done = True
            for i in range(top + 1, len(mat)):
                if mat[i][col]:
                    q = mat[i][col] // mat[top][col]
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[top])]
                    if mat[i][col]:
                        done = False
            if done:
                break
        if top < len(mat) and mat[top][col] != 0:
            top += 1
    return mat
