"""Exact integer linear algebra.

Everything here works on Python ints (arbitrary precision) or
``fractions.Fraction``; no floating point is ever involved.  The main
entry points are :func:`smith_normal_form`, :func:`hermite_normal_form`,
:func:`kernel_basis` and :func:`cokernel_invariants`.  A few rational
helpers (linear solves and an exact feasibility LP) live here too because
the fan and ampleness code needs them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "SmithForm",
    "smith_normal_form",
    "hermite_normal_form",
    "kernel_basis",
    "cokernel_invariants",
    "primitive",
    "content",
    "solve_rational",
    "rational_inverse",
    "adjugate",
    "feasible_point",
]


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major, immutable."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )
        if not all(type(x) is int for x in self.entries):
            bad = next(x for x in self.entries if type(x) is not int)
            raise TypeError(f"matrix entries must be int, got {bad!r}")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [tuple(map(int, r)) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def _trusted(cls, rows: list[list[int]], cols: int) -> IntMatrix:
        # internal results: entries are known ints, shapes known consistent
        M = object.__new__(cls)
        object.__setattr__(M, "rows", len(rows))
        object.__setattr__(M, "cols", cols)
        object.__setattr__(M, "entries", tuple(x for r in rows for x in r))
        return M

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls._trusted(_eye(n), n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows([self.col(j) for j in range(self.cols)], cols=self.rows)

    T = property(transpose)

    def select_rows(self, idx: Iterable[int]) -> IntMatrix:
        return IntMatrix.from_rows([self.row(i) for i in idx], cols=self.cols)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = [other.col(j) for j in range(other.cols)]
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(self.row(i), c)) for c in cols] for i in range(self.rows)],
            cols=other.cols,
        )

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return _bareiss_det(self.to_lists())

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return sum(1 for d in smith_normal_form(self).invariant_factors if d)

    def __str__(self) -> str:
        return "\n".join("[" + " ".join(f"{x:>4}" for x in self.row(i)) + "]" for i in range(self.rows))


def _eye(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _as_lists(A) -> list[list[int]]:
    if isinstance(A, IntMatrix):
        return A.to_lists()
    return [list(r) for r in A]


def _bareiss_det(M: list[list[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    M = [r[:] for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def adjugate(M: Sequence[Sequence[int]]) -> tuple[list[list[int]], int]:
    """``(adj, det)`` with ``M @ adj == det * I``.

    Fraction-free Gauss-Jordan on ``[M | I]``; every intermediate entry is a
    minor, so all divisions are exact.  Singular input falls back to cofactors.
    """
    n = len(M)
    if n == 1:
        return [[1]], int(M[0][0])
    A = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M)]
    sign, prev = 1, 1
    for k in range(n):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return _cofactor_adjugate(M)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        pk = A[k]
        for i in range(n):
            if i == k:
                continue
            ri = A[i]
            f = ri[k]
            A[i] = [(pk[k] * ri[j] - f * pk[j]) // prev for j in range(2 * n)]
        prev = pk[k]
    det = sign * prev
    return [[sign * x for x in r[n:]] for r in A], det


def _cofactor_adjugate(M) -> tuple[list[list[int]], int]:
    n = len(M)
    rows = [list(r) for r in M]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            adj[j][i] = (-1) ** (i + j) * _bareiss_det(minor)
    det = sum(rows[0][j] * adj[j][0] for j in range(n))
    return adj, det


@dataclass(frozen=True)
class SmithForm:
    """Smith normal form with unimodular witnesses.

    ``left @ A @ right`` is the ``A``-shaped matrix with
    ``invariant_factors`` on the diagonal.  The factors form a divisibility
    chain; trailing zeros mark the rank deficiency.
    """

    invariant_factors: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d)

    def diagonal(self) -> IntMatrix:
        m, n = self.left.rows, self.right.rows
        D = [[0] * n for _ in range(m)]
        for t, d in enumerate(self.invariant_factors):
            D[t][t] = d
        return IntMatrix.from_rows(D, cols=n)


def smith_normal_form(A: IntMatrix | Sequence[Sequence[int]]) -> SmithForm:
    """Smith normal form by smallest-absolute-value pivoting.

    Deterministic: ties are broken by the first position in row-major order.
    """
    D = _as_lists(A)
    m = len(D)
    n = len(D[0]) if m else (A.cols if isinstance(A, IntMatrix) else 0)
    if m == 0 or n == 0:
        raise ValueError("smith_normal_form needs a nonempty matrix")
    L, R = _eye(m), _eye(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for M in (D, R):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        for M in (D, L):
            rd, rs = M[dst], M[src]
            for k in range(len(rd)):
                rd[k] += q * rs[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for M in (D, R):
            for r in M:
                r[dst] += q * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            L[t] = [-x for x in L[t]]

    factors = tuple(D[t][t] for t in range(min(m, n)))
    return SmithForm(factors, IntMatrix._trusted(L, m), IntMatrix._trusted(R, n))


def hermite_normal_form(A: IntMatrix | Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form: returns ``(H, U)`` with ``U @ A == H``.

    Pivots are positive, entries above a pivot lie in ``[0, pivot)`` and
    zero rows are at the bottom.
    """
    H = _as_lists(A)
    m = len(H)
    n = len(H[0]) if m else (A.cols if isinstance(A, IntMatrix) else 0)
    U = _eye(m)

    def add_row(dst, src, q):
        for M in (H, U):
            rd, rs = M[dst], M[src]
            for k in range(len(rd)):
                rd[k] += q * rs[k]

    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            live = [i for i in range(r, m) if H[i][c]]
            if not live:
                break
            p = min(live, key=lambda i: (abs(H[i][c]), i))
            if p != r:
                H[r], H[p] = H[p], H[r]
                U[r], U[p] = U[p], U[r]
            for i in range(r + 1, m):
                if H[i][c]:
                    add_row(i, r, -(H[i][c] // H[r][c]))
            if all(H[i][c] == 0 for i in range(r + 1, m)):
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                add_row(i, r, -q)
        r += 1
    return IntMatrix._trusted(H, n), IntMatrix._trusted(U, m)


def kernel_basis(A: IntMatrix | Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of the left kernel ``{x : x @ A == 0}`` in Hermite normal form.

    For a ray matrix (rays as rows) this is the lattice of linear relations
    among the rays.  The basis vectors are primitive because the kernel is
    saturated.
    """
    M = A if isinstance(A, IntMatrix) else IntMatrix.from_rows(A)
    if M.rows == 0:
        return []
    if M.cols == 0:
        return [tuple(r) for r in _eye(M.rows)]
    H, U = hermite_normal_form(M)
    zero_rows = [i for i in range(H.rows) if not any(H.row(i))]
    if not zero_rows:
        return []
    K, _ = hermite_normal_form(U.select_rows(zero_rows))
    return [K.row(i) for i in range(K.rows) if any(K.row(i))]


def cokernel_invariants(A: IntMatrix | Sequence[Sequence[int]]) -> tuple[int, tuple[int, ...]]:
    """``(free_rank, torsion)`` of ``Z^b / A Z^N`` for a ``b x N`` matrix ``A``.

    Torsion factors are increasing and factors equal to 1 are dropped.
    """
    M = A if isinstance(A, IntMatrix) else IntMatrix.from_rows(A)
    if M.cols == 0:
        return M.rows, ()
    snf = smith_normal_form(M)
    return M.rows - snf.rank, tuple(d for d in snf.invariant_factors if d > 1)


def content(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide ``v`` by the gcd of its entries, keeping its direction."""
    g = content(v)
    if g == 0:
        raise ValueError(f"zero vector {tuple(v)} is not a valid ray")
    return tuple(x // g for x in v)


# Rational helpers


def solve_rational(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...]:
    """Unique solution of the square system ``A x = b`` over Q."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    if len(M) != n or any(len(r) != n + 1 for r in M):
        raise ValueError("solve_rational needs a square system")
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular system")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return tuple(M[i][n] for i in range(n))


def rational_inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    cols = [solve_rational(A, [int(i == j) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def feasible_point(
    n: int,
    eq: Sequence[tuple[Sequence, object]] = (),
    le: Sequence[tuple[Sequence, object]] = (),
) -> tuple[Fraction, ...] | None:
    """Find ``x`` in Q^n with ``a.x == c`` for ``(a, c)`` in ``eq`` and
    ``a.x <= c`` for ``(a, c)`` in ``le``, or return ``None``.

    Phase-one simplex on an exact tableau with Bland's rule, so it always
    terminates.  Variables are free (split as ``x = p - q``).
    """
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    n_slack = len(le)
    for k, (a, c) in enumerate(list(eq) + list(le)):
        a = [Fraction(x) for x in a]
        row = a + [-x for x in a] + [Fraction(0)] * n_slack
        if k >= len(eq):
            row[2 * n + k - len(eq)] = Fraction(1)
        c = Fraction(c)
        if c < 0:
            row, c = [-x for x in row], -c
        rows.append(row)
        rhs.append(c)
    m = len(rows)
    if m == 0:
        return (Fraction(0),) * n
    nv = 2 * n + n_slack
    # artificials nv .. nv+m-1 start in the basis
    T = [rows[i] + [Fraction(int(i == j)) for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [nv + i for i in range(m)]
    width = nv + m
    obj = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            obj[j] += T[i][j]
    for j in range(nv, width):
        obj[j] = Fraction(0)
    # obj[j] is the reduced-cost gain of entering j; obj[-1] is the artificial sum
    while True:
        enter = next((j for j in range(width) if obj[j] > 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # unbounded direction cannot occur in phase one
            break
        _, r = best
        piv = T[r][enter]
        T[r] = [x / piv for x in T[r]]
        for i in range(m):
            if i != r and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, T[r])]
        basis[r] = enter
    if obj[-1] != 0:
        return None
    val = [Fraction(0)] * width
    for i, j in enumerate(basis):
        val[j] = T[i][-1]
    return tuple(val[j] - val[n + j] for j in range(n))
