"""Exact integer linear algebra: Smith/Hermite normal forms, kernels, solving.

Everything works on Python ints, so there is no overflow. Matrices are small
(desk-scale fans and groups), and the algorithms favour clarity over speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence


class IntMatrix:
    """Immutable rectangular integer matrix.

    Shapes with zero rows or zero columns are legal and stand for zero maps.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable[int] = ()):
        data = tuple(int(x) for x in entries)
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimension")
        if not data and rows * cols:
            data = (0,) * (rows * cols)
        if len(data) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
        self.rows = rows
        self.cols = cols
        self._data = data

    # construction -----------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def from_cols(cls, cols: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        cols = [list(c) for c in cols]
        if rows is None:
            rows = len(cols[0]) if cols else 0
        return cls.from_rows(cols, rows).T if cols else cls(rows, 0)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def diag(cls, values: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            m[i][i] = v
        return cls.from_rows(m, cols)

    # access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self._data[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self._data[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    # arithmetic -------------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            out = []
            for i in range(self.rows):
                r = self.row(i)
                for j in range(other.cols):
                    out.append(sum(r[k] * other[k, j] for k in range(self.cols)))
            return IntMatrix(self.rows, other.cols, out)
        v = list(other)
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} does not fit {self.shape}")
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) for i in range(self.rows))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, [a + b for a, b in zip(self._data, other._data)])

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, [a - b for a, b in zip(self._data, other._data)])

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [c * a for a in self._data])

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hstack")
        return IntMatrix.from_rows([self.row(i) + other.row(i) for i in range(self.rows)],
                                   self.cols + other.cols)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch in vstack")
        return IntMatrix(self.rows + other.rows, self.cols, self._data + other._data)

    def select_cols(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_cols([self.col(j) for j in idx], self.rows)

    def select_rows(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_rows([self.row(i) for i in idx], self.cols)

    def is_zero(self) -> bool:
        return not any(self._data)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r})" if self.rows else f"IntMatrix(0x{self.cols})"


def det(A: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if A.rows != A.cols:
        raise ValueError("determinant of a non-square matrix")
    n = A.rows
    if n == 0:
        return 1
    m = A.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfResult:
    """``U @ A @ V == D`` with U, V unimodular and D in Smith form.

    ``U_inv`` and ``V_inv`` are the exact inverses, tracked during elimination.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x)


def _min_abs_position(D, t, rows, cols):
    best = None
    for i in rows:
        for j in cols:
            x = D[i][j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
    return best


def snf(A: IntMatrix) -> SnfResult:
    """Smith normal form with transformation matrices.

    Pivots are chosen by minimal absolute value; the diagonal ends up
    nonnegative with each entry dividing the next.
    """
    m, n = A.shape
    D = A.tolist()
    U = IntMatrix.identity(m).tolist()
    Ui = IntMatrix.identity(m).tolist()
    V = IntMatrix.identity(n).tolist()
    Vi = IntMatrix.identity(n).tolist()

    def swap_rows(a, b):
        if a == b:
            return
        D[a], D[b] = D[b], D[a]
        U[a], U[b] = U[b], U[a]
        for r in Ui:
            r[a], r[b] = r[b], r[a]

    def swap_cols(a, b):
        if a == b:
            return
        for r in D:
            r[a], r[b] = r[b], r[a]
        for r in V:
            r[a], r[b] = r[b], r[a]
        Vi[a], Vi[b] = Vi[b], Vi[a]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        if not c:
            return
        D[dst] = [x + c * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]
        for r in Ui:
            r[src] -= c * r[dst]

    def add_col(dst, src, c):
        # col_dst += c * col_src
        if not c:
            return
        for r in D:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]
        Vi[src] = [x - c * y for x, y in zip(Vi[src], Vi[dst])]

    t = 0
    while t < min(m, n):
        found = _min_abs_position(D, t, range(t, m), range(t, n))
        if found is None:
            break
        _, i, j = found
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            for i in range(t + 1, m):
                add_row(i, t, -(D[i][t] // p))
            for j in range(t + 1, n):
                add_col(j, t, -(D[t][j] // p))
            rest_col = [(abs(D[i][t]), i) for i in range(t + 1, m) if D[i][t]]
            rest_row = [(abs(D[t][j]), j) for j in range(t + 1, n) if D[t][j]]
            if rest_col:
                swap_rows(t, min(rest_col)[1])
                continue
            if rest_row:
                swap_cols(t, min(rest_row)[1])
                continue
            # pivot row/col cleared; enforce divisibility on the remainder
            bad = next((i for i in range(t + 1, m)
                        for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
            for r in Ui:
                r[t] = -r[t]
        t += 1

    return SnfResult(
        U=IntMatrix.from_rows(U, m),
        D=IntMatrix.from_rows(D, n),
        V=IntMatrix.from_rows(V, n),
        U_inv=IntMatrix.from_rows(Ui, m),
        V_inv=IntMatrix.from_rows(Vi, n),
    )


def invariant_factors(A: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith form of ``A``."""
    return [x for x in snf(A).diagonal if x]


def rank(A: IntMatrix) -> int:
    return snf(A).rank


# ---------------------------------------------------------------------------
# Hermite normal form


def hnf_with_transform(A: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column Hermite normal form ``H = A @ W`` with W unimodular.

    H is lower echelon: pivot rows strictly increase with the column index,
    pivots are positive, and entries left of a pivot lie in ``[0, pivot)``.
    Zero columns are pushed to the right.
    """
    m, n = A.shape
    H = A.tolist()
    W = IntMatrix.identity(n).tolist()

    def swap(a, b):
        for r in H:
            r[a], r[b] = r[b], r[a]
        for r in W:
            r[a], r[b] = r[b], r[a]

    def add(dst, src, c):
        if not c:
            return
        for r in H:
            r[dst] += c * r[src]
        for r in W:
            r[dst] += c * r[src]

    c = 0
    for r in range(m):
        if c >= n:
            break
        while True:
            nz = [(abs(H[r][j]), j) for j in range(c, n) if H[r][j]]
            if not nz:
                break
            _, j = min(nz)
            swap(c, j)
            for k in range(c + 1, n):
                add(k, c, -(H[r][k] // H[r][c]))
            if all(H[r][k] == 0 for k in range(c + 1, n)):
                break
        if not H[r][c]:
            continue
        if H[r][c] < 0:
            for row in H:
                row[c] = -row[c]
            for row in W:
                row[c] = -row[c]
        p = H[r][c]
        for k in range(c):
            add(k, c, -(H[r][k] // p))
        c += 1
    return IntMatrix.from_rows(H, n), IntMatrix.from_rows(W, n)


def hnf(A: IntMatrix) -> IntMatrix:
    """Column Hermite normal form of ``A`` (same shape, zero columns last)."""
    return hnf_with_transform(A)[0]


def column_basis(A: IntMatrix) -> IntMatrix:
    """Canonical basis (HNF, zero columns dropped) of the lattice spanned by A's columns."""
    H = hnf(A)
    keep = [j for j in range(H.cols) if any(H.col(j))]
    return H.select_cols(keep)


# ---------------------------------------------------------------------------
# solving and kernels


def solve(A: IntMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Integral solution of ``A x = b``, or None when b is outside the column span."""
    b = list(b)
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {A.rows} rows")
    res = snf(A)
    c = res.U @ b
    diag = res.diagonal
    y = [0] * A.cols
    for i, ci in enumerate(c):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if ci:
                return None
        else:
            if ci % di:
                return None
            y[i] = ci // di
    return res.V @ y


def in_span(A: IntMatrix, b: Sequence[int]) -> bool:
    return solve(A, b) is not None


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of ``{x : A x = 0}``."""
    res = snf(A)
    return res.V.select_cols(range(res.rank, A.cols))


def is_unimodular(A: IntMatrix) -> bool:
    return A.rows == A.cols and abs(det(A)) == 1


def vector_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g
