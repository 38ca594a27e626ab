"""Exact integer matrix algebra.

Everything here works on Python ints, so entries never overflow.  The
decompositions certify their defining identities on every call and raise
:class:`~knotcalc.errors.CertificateError` if one fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from .errors import InputError, certify


@dataclass(frozen=True)
class IntMatrix:
    """Row-major integer matrix of shape ``rows x cols``."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InputError("matrix dimensions must be nonnegative")
        entries = tuple(self.entries)
        if len(entries) != self.rows * self.cols:
            raise InputError(
                f"expected {self.rows * self.cols} entries for a "
                f"{self.rows}x{self.cols} matrix, got {len(entries)}"
            )
        for x in entries:
            if isinstance(x, bool) or not isinstance(x, int):
                raise InputError(f"matrix entries must be integers, got {x!r}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise InputError("column count is required for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise InputError("ragged matrix rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, rows: int, cols: int, diag: Sequence[int]) -> IntMatrix:
        out = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            out[i][i] = d
        return cls.from_rows(out, cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> IntMatrix:
        return IntMatrix(len(row_idx), len(col_idx),
                         tuple(self[i, j] for i in row_idx for j in col_idx))

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise InputError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
            cols_b = [other.column(j) for j in range(other.cols)]
            return IntMatrix(self.rows, other.cols, tuple(
                sum(a * b for a, b in zip(self.row(i), cb))
                for i in range(self.rows) for cb in cols_b
            ))
        vec = tuple(other)
        if len(vec) != self.cols:
            raise InputError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(self.row(i), vec)) for i in range(self.rows))

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(k * x for x in self.entries))

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": list(self.entries)}

    @classmethod
    def from_json(cls, obj) -> IntMatrix:
        if isinstance(obj, list):
            return cls.from_rows(obj)
        try:
            return cls(int(obj["rows"]), int(obj["cols"]), tuple(obj["entries"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"matrix JSON needs rows, cols and entries: {exc}") from None


class SmithForm(NamedTuple):
    d: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix


class TorsionOrders(NamedTuple):
    orders: tuple[int, ...]
    max_order: int


@dataclass(frozen=True)
class FundamentalSolutionSet:
    solutions: tuple[tuple[int, ...], ...]
    pivot_columns: tuple[int, ...]
    independent_rows: tuple[int, ...]
    det_P: int
    column_condition: bool

    @property
    def rank(self) -> int:
        return len(self.pivot_columns)


def _as_lists(A: IntMatrix) -> list[list[int]]:
    return [list(A.row(i)) for i in range(A.rows)]


def determinant(A: IntMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    if not A.is_square:
        raise InputError(f"determinant needs a square matrix, got {A.rows}x{A.cols}")
    n = A.rows
    if n == 0:
        return 1
    M = _as_lists(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) // prev
        prev = pivot
    return sign * M[n - 1][n - 1]


def adjugate(A: IntMatrix) -> IntMatrix:
    """Transpose of the cofactor matrix; certifies ``A adj(A) = adj(A) A = det(A) I``."""
    if not A.is_square:
        raise InputError(f"adjugate needs a square matrix, got {A.rows}x{A.cols}")
    n = A.rows
    if n == 0:
        return A
    if n == 1:
        adj = IntMatrix(1, 1, (1,))
    else:
        idx = range(n)
        cof = [[(-1) ** (i + j) * determinant(A.submatrix([r for r in idx if r != i],
                                                           [c for c in idx if c != j]))
                for j in idx] for i in idx]
        adj = IntMatrix.from_rows(cof).transpose()
    scalar = IntMatrix.identity(n).scale(determinant(A))
    certify(A @ adj == scalar and adj @ A == scalar, "adjugate identity A*adj(A) = det(A)*I failed")
    return adj


class _EchelonBasis:
    """Incremental integer echelon basis; answers "is v in the span so far?"."""

    def __init__(self, length: int):
        self.length = length
        self.rows: list[tuple[int, list[int]]] = []  # (pivot column, row)

    def _reduce(self, v: Sequence[int]) -> list[int]:
        v = list(v)
        for c, b in self.rows:
            if v[c]:
                bc, vc = b[c], v[c]
                v = [bc * x - vc * y for x, y in zip(v, b)]
                g = 0
                for x in v:
                    g = gcd(g, x)
                if g > 1:
                    v = [x // g for x in v]
        return v

    def add(self, v: Sequence[int]) -> bool:
        """Add ``v`` if it is independent of the current rows; report whether it was."""
        r = self._reduce(v)
        for c, x in enumerate(r):
            if x:
                self.rows.append((c, r))
                return True
        return False

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(A: IntMatrix) -> int:
    basis = _EchelonBasis(A.cols)
    for i in range(A.rows):
        basis.add(A.row(i))
    return basis.rank


def smith_normal_form(A: IntMatrix) -> SmithForm:
    """Smith normal form with unimodular transforms, ``left @ A @ right = diag(d)``.

    ``d`` holds only the nonzero invariant factors, so ``len(d)`` is the rank.
    """
    m, n = A.rows, A.cols
    D = _as_lists(A)
    L = [[int(i == j) for j in range(m)] for i in range(m)]
    R = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        D[i], D[k] = D[k], D[i]
        L[i], L[k] = L[k], L[i]

    def swap_cols(j, k):
        for M in (D, R):
            for row in M:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row dst -= q * row src
        for M in (D, L):
            M[dst] = [x - q * y for x, y in zip(M[dst], M[src])]

    def add_col(dst, src, q):  # col dst -= q * col src
        for M in (D, R):
            for row in M:
                row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, D[i][t] // D[t][t])
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, D[t][j] // D[t][t])
                    if D[t][j]:
                        dirty = True
            if dirty:
                # a remainder survived: move the smallest entry of row/column t to the pivot
                cands = [(abs(D[i][t]), i, t) for i in range(t, m) if D[i][t]]
                cands += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            L[t] = [-x for x in L[t]]
        t += 1

    d = tuple(D[i][i] for i in range(t))
    left, right = IntMatrix.from_rows(L, m), IntMatrix.from_rows(R, n)
    certify(left @ A @ right == IntMatrix.diagonal(m, n, d), "left*A*right != diag(d)")
    certify(all(d[k + 1] % d[k] == 0 for k in range(len(d) - 1)), "divisibility chain broken")
    certify(abs(determinant(left)) == 1 and abs(determinant(right)) == 1,
            "Smith transforms are not unimodular")
    return SmithForm(d, left, right)


def torsion_orders(A: IntMatrix) -> TorsionOrders:
    """Torsion invariant factors of the cokernel ``Z^cols / rowspan(A)``."""
    orders = tuple(x for x in smith_normal_form(A).d if x > 1)
    return TorsionOrders(orders, max(orders, default=1))


def satisfies_column_condition(A: IntMatrix) -> bool:
    """Each column has at most 3 nonzero entries whose absolute values sum to at most 3."""
    for j in range(A.cols):
        col = A.column(j)
        if sum(1 for x in col if x) > 3 or sum(abs(x) for x in col) > 3:
            return False
    return True


def bounded_kernel_basis(A: IntMatrix) -> FundamentalSolutionSet:
    """Integral fundamental solutions of ``A u = 0`` built from an adjugate.

    Rows are kept greedily while they raise the rank, then the greedy-lex
    first ``p`` independent columns form the square block ``P``; the remaining
    columns ``Q`` each give one solution ``(-adj(P) Q e_n, det(P) e_n)``.
    When ``A`` satisfies :func:`satisfies_column_condition` every entry is at
    most ``3**p`` in absolute value and each solution has at most ``p + 1``
    nonzero entries; both bounds are certified.
    """
    row_basis = _EchelonBasis(A.cols)
    rows = tuple(i for i in range(A.rows) if row_basis.add(A.row(i)))
    p = len(rows)
    col_basis = _EchelonBasis(p)
    pivots = []
    for j in range(A.cols):
        if len(pivots) == p:
            break
        if col_basis.add([A[i, j] for i in rows]):
            pivots.append(j)
    certify(len(pivots) == p, "column rank differs from row rank")
    free = [j for j in range(A.cols) if j not in pivots]

    P = A.submatrix(rows, pivots)
    det_P = determinant(P)
    adj_P = adjugate(P)
    solutions = []
    for j in free:
        v = adj_P @ [A[i, j] for i in rows]
        u = [0] * A.cols
        for k, c in enumerate(pivots):
            u[c] = -v[k]
        u[j] = det_P
        solutions.append(tuple(u))

    for u in solutions:
        certify(not any(A @ u), f"A*u != 0 for u = {u}")
    ok = satisfies_column_condition(A)
    if ok:
        bound = 3 ** p
        for u in solutions:
            certify(all(abs(x) <= bound for x in u), f"entry bound 3^{p} exceeded by {u}")
            certify(sum(1 for x in u if x) <= p + 1, f"more than {p + 1} nonzero entries in {u}")
    return FundamentalSolutionSet(tuple(solutions), tuple(pivots), rows, det_P, ok)


def rational_kernel_basis(A: IntMatrix) -> list[tuple[Fraction, ...]]:
    """Kernel basis by reduced row echelon form over the rationals."""
    M = [[Fraction(x) for x in A.row(i)] for i in range(A.rows)]
    pivots = []
    r = 0
    for c in range(A.cols):
        k = next((i for i in range(r, A.rows) if M[i][c] != 0), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(A.rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    basis = []
    for f in (c for c in range(A.cols) if c not in pivots):
        v = [Fraction(0)] * A.cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -M[i][f]
        basis.append(tuple(v))
    return basis


def same_rational_span(U: Iterable[Sequence], V: Iterable[Sequence], length: int) -> bool:
    """True when two finite vector families span the same subspace of Q^length."""
    U = [tuple(Fraction(x) for x in u) for u in U]
    V = [tuple(Fraction(x) for x in v) for v in V]

    def _rank(vectors):
        den = 1
        for v in vectors:
            for x in v:
                den = den * x.denominator // gcd(den, x.denominator)
        basis = _EchelonBasis(length)
        for v in vectors:
            basis.add([int(x * den) for x in v])
        return basis.rank

    ru, rv = _rank(U), _rank(V)
    return ru == rv == _rank(U + V)
