"""Exact linear algebra over Q and over prime fields F_p.

Scalars are `fractions.Fraction` instances over Q and plain ints reduced to
[0, p) over F_p.  No floats anywhere.  Matrices are dense row lists.

Pivoting rule: echelon reduction always selects the leftmost nonzero entry of
the first unreduced row (no magnitude heuristics), then removes that column
from the remaining rows.  The reduced row echelon form returned by `echelon`
is fully normalized (pivots 1, pivot columns cleared, rows sorted by pivot
column), hence canonical for the row space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import InputFormatError, check


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: char == 0 means Q, otherwise F_char."""

    char: int = 0

    def __post_init__(self) -> None:
        if self.char != 0 and not _is_prime(self.char):
            raise InputFormatError(f"field characteristic {self.char} is not prime")

    # -- scalar construction ------------------------------------------------

    def coerce(self, value) -> object:
        if self.char == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            num = value.numerator % self.char
            den = value.denominator % self.char
            if den == 0:
                raise InputFormatError(f"denominator divisible by {self.char}")
            return num * pow(den, -1, self.char) % self.char
        return int(value) % self.char

    @property
    def zero(self):
        return Fraction(0) if self.char == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.char == 0 else 1

    # -- arithmetic ----------------------------------------------------------

    def add(self, a, b):
        return a + b if self.char == 0 else (a + b) % self.char

    def sub(self, a, b):
        return a - b if self.char == 0 else (a - b) % self.char

    def mul(self, a, b):
        return a * b if self.char == 0 else (a * b) % self.char

    def neg(self, a):
        return -a if self.char == 0 else (-a) % self.char

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inversion of zero field element")
        return 1 / a if self.char == 0 else pow(a, -1, self.char)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # -- text form (used by .qrep files and reports) -------------------------

    def parse_scalar(self, token: str):
        token = token.strip()
        try:
            if self.char == 0:
                return Fraction(token)
            if "/" in token:
                num, den = token.split("/", 1)
                return self.coerce(Fraction(int(num), int(den)))
            return int(token) % self.char
        except (ValueError, ZeroDivisionError) as exc:
            raise InputFormatError(f"bad scalar {token!r}: {exc}") from exc

    def format_scalar(self, value) -> str:
        return str(value)

    def describe(self) -> str:
        return "Q" if self.char == 0 else f"F{self.char}"


QQ = FieldSpec(0)


class MatrixExact:
    """Dense exact matrix; rows is a list of equal-length scalar lists."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field: FieldSpec, rows: list[list], ncols: int | None = None):
        self.field = field
        self.rows = [[field.coerce(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        if self.rows:
            widths = {len(r) for r in self.rows}
            if len(widths) != 1:
                raise InputFormatError("ragged matrix rows")
            self.ncols = widths.pop()
            if ncols is not None and ncols != self.ncols:
                raise InputFormatError("declared column count does not match rows")
        else:
            self.ncols = 0 if ncols is None else ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @classmethod
    def zero(cls, field: FieldSpec, nrows: int, ncols: int) -> "MatrixExact":
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "MatrixExact":
        m = cls.zero(field, n, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    def copy(self) -> "MatrixExact":
        return MatrixExact(self.field, [row[:] for row in self.rows], self.ncols)

    def transpose(self) -> "MatrixExact":
        rows = [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return MatrixExact(self.field, rows, self.nrows)

    def mul(self, other: "MatrixExact") -> "MatrixExact":
        if self.ncols != other.nrows:
            raise InputFormatError(
                f"shape mismatch in product: {self.shape} * {other.shape}"
            )
        f = self.field
        out = MatrixExact.zero(f, self.nrows, other.ncols)
        for i in range(self.nrows):
            row = self.rows[i]
            orow = out.rows[i]
            for k, a in enumerate(row):
                if not a:
                    continue
                brow = other.rows[k]
                for j, b in enumerate(brow):
                    if b:
                        orow[j] = f.add(orow[j], f.mul(a, b))
        return out

    def add(self, other: "MatrixExact") -> "MatrixExact":
        if self.shape != other.shape:
            raise InputFormatError("shape mismatch in sum")
        f = self.field
        return MatrixExact(
            self.field,
            [
                [f.add(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ],
            self.ncols,
        )

    def scale(self, scalar) -> "MatrixExact":
        f = self.field
        c = f.coerce(scalar)
        return MatrixExact(
            f, [[f.mul(c, a) for a in row] for row in self.rows], self.ncols
        )

    def apply(self, vec: list) -> list:
        if len(vec) != self.ncols:
            raise InputFormatError("vector length does not match column count")
        f = self.field
        vec = [f.coerce(x) for x in vec]
        out = []
        for row in self.rows:
            s = f.zero
            for a, x in zip(row, vec):
                if a and x:
                    s = f.add(s, f.mul(a, x))
            out.append(s)
        return out

    def is_zero(self) -> bool:
        return all(not x for row in self.rows for x in row)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatrixExact)
            and self.field == other.field
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"MatrixExact({self.field.describe()}, {self.rows})"


def echelon(m: MatrixExact) -> tuple[MatrixExact, tuple[int, ...]]:
    """Canonical reduced row echelon form and its pivot columns."""
    f = m.field
    rows = [row[:] for row in m.rows]
    pivots: list[tuple[int, int]] = []  # (pivot column, row index in `kept`)
    kept: list[list] = []
    for row in rows:
        # reduce against the pivots found so far
        for col, idx in pivots:
            if row[col]:
                factor = row[col]
                krow = kept[idx]
                row[:] = [f.sub(a, f.mul(factor, b)) for a, b in zip(row, krow)]
        lead = next((j for j, a in enumerate(row) if a), None)
        if lead is None:
            continue
        inv = f.inv(row[lead])
        row[:] = [f.mul(inv, a) for a in row]
        # clear the new pivot column from earlier rows
        for krow in kept:
            if krow[lead]:
                factor = krow[lead]
                krow[:] = [f.sub(a, f.mul(factor, b)) for a, b in zip(krow, row)]
        pivots.append((lead, len(kept)))
        kept.append(row)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i][0])
    out_rows = [kept[pivots[i][1]] for i in order]
    out_pivots = tuple(pivots[i][0] for i in order)
    return MatrixExact(f, out_rows, m.ncols), out_pivots


def rank_kernel(m: MatrixExact) -> tuple[int, MatrixExact]:
    """Rank and a canonical (RREF) basis of the right kernel, as rows."""
    red, pivots = echelon(m)
    rank = len(pivots)
    f = m.field
    pivot_set = set(pivots)
    free_cols = [j for j in range(m.ncols) if j not in pivot_set]
    kernel_rows = []
    for free in free_cols:
        vec = [f.zero] * m.ncols
        vec[free] = f.one
        for rowidx, pcol in enumerate(pivots):
            coeff = red.rows[rowidx][free]
            if coeff:
                vec[pcol] = f.neg(coeff)
        kernel_rows.append(vec)
    kernel = MatrixExact(f, kernel_rows, m.ncols)
    kernel_rref, _ = echelon(kernel)
    check(
        m.mul(kernel_rref.transpose()).is_zero() if kernel_rows else True,
        "kernel basis fails A*k = 0",
    )
    check(rank + kernel_rref.nrows == m.ncols, "rank-nullity violated")
    return rank, kernel_rref


def solve(a: MatrixExact, b: list) -> list | None:
    """One exact solution of a*x = b (free variables set to 0), or None."""
    if len(b) != a.nrows:
        raise InputFormatError("right-hand side length does not match row count")
    f = a.field
    aug_rows = [row + [f.coerce(x)] for row, x in zip(a.rows, b)]
    aug = MatrixExact(f, aug_rows, a.ncols + 1)
    red, pivots = echelon(aug)
    if a.ncols in pivots:
        return None
    x = [f.zero] * a.ncols
    for rowidx, pcol in enumerate(pivots):
        x[pcol] = red.rows[rowidx][a.ncols]
    check(a.apply(x) == [f.coerce(v) for v in b], "solve produced a non-solution")
    return x


# -- row-space utilities built on the canonical RREF -------------------------
#
# A "space" below is the pair (rref_rows, pivots) over a common ambient
# dimension; rref_rows is a plain list of scalar lists.


def row_space(field: FieldSpec, vectors: list[list], ambient: int):
    """Canonical basis (RREF rows, pivots) of the span of `vectors`."""
    red, pivots = echelon(MatrixExact(field, vectors, ambient))
    return red.rows, pivots


def reduce_vector(field: FieldSpec, space_rows: list[list], pivots, vec: list) -> list:
    """Residual of vec after subtracting its projection onto the row space."""
    f = field
    vec = [f.coerce(x) for x in vec]
    for row, pcol in zip(space_rows, pivots):
        c = vec[pcol]
        if c:
            vec = [f.sub(a, f.mul(c, b)) for a, b in zip(vec, row)]
    return vec


def in_span(field: FieldSpec, space_rows: list[list], pivots, vec: list) -> bool:
    return not any(reduce_vector(field, space_rows, pivots, vec))


def span_coordinates(field: FieldSpec, space_rows, pivots, vec):
    """Coordinates of vec in the RREF basis, or None if not in the span."""
    f = field
    vec = [f.coerce(x) for x in vec]
    coords = []
    for row, pcol in zip(space_rows, pivots):
        c = vec[pcol]
        coords.append(c)
        if c:
            vec = [f.sub(a, f.mul(c, b)) for a, b in zip(vec, row)]
    if any(vec):
        return None
    return coords


def intersect_spaces(field: FieldSpec, rows_a: list[list], rows_b: list[list], ambient: int):
    """Canonical basis of the intersection of two spans (Zassenhaus-style)."""
    if not rows_a or not rows_b:
        return []
    stacked = MatrixExact(field, list(rows_a) + list(rows_b), ambient)
    _, kernel = rank_kernel(stacked.transpose())
    # kernel rows are coefficient vectors (c_a | c_b) with sum_a c_a a = sum_b -c_b b
    f = field
    na = len(rows_a)
    vectors = []
    for coeffs in kernel.rows:
        vec = [f.zero] * ambient
        for c, arow in zip(coeffs[:na], rows_a):
            if c:
                vec = [f.add(v, f.mul(c, a)) for v, a in zip(vec, arow)]
        vectors.append(vec)
    rows, _ = row_space(field, vectors, ambient)
    return rows


def determinant(m: MatrixExact):
    """Determinant by fraction-free-ish Gaussian elimination (exact)."""
    if m.nrows != m.ncols:
        raise InputFormatError(f"determinant needs a square matrix, got {m.nrows}x{m.ncols}")
    f = m.field
    n = m.nrows
    rows = [list(r) for r in m.rows]
    det = f.one
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if rows[r][col] != f.zero), None)
        if pivot_row is None:
            return f.zero
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            det = f.neg(det)
        pivot = rows[col][col]
        det = f.mul(det, pivot)
        for r in range(col + 1, n):
            if rows[r][col] != f.zero:
                factor = f.div(rows[r][col], pivot)
                rows[r] = [f.sub(a, f.mul(factor, b)) for a, b in zip(rows[r], rows[col])]
    return det
