"""Exact dense linear algebra over Q, F_p and Z.

Matrices are small (desk-scale simplicial complexes), so everything is plain
Python: ``fractions.Fraction`` for Q, reduced ints for F_p and unbounded ints
for Z.  Internally the column algorithms work on sparse columns stored as
``{row: coefficient}`` dicts; the public :class:`Matrix` is dense row-major.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .errors import UnsupportedOperation, ValidationError

__all__ = [
    "CoefficientSpec",
    "QQ",
    "ZZ",
    "GF",
    "Matrix",
    "EchelonPool",
    "column_reduce",
    "rank",
    "smith_normal_form",
    "invariant_factors",
    "solve_in_span",
]

MAX_PRIME = 2**31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class CoefficientSpec:
    """Coefficient ring: ``Q``, ``F_p`` or ``Z``.

    ``kind`` is one of ``"Q"``, ``"F"``, ``"Z"``; ``p`` is the characteristic
    for ``"F"`` and 0 otherwise.
    """

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind == "F":
            if not (2 <= self.p < MAX_PRIME) or not _is_prime(self.p):
                raise ValidationError(f"F_p needs a prime p < 2^31, got {self.p}")
        elif self.kind in ("Q", "Z"):
            if self.p != 0:
                raise ValidationError(f"{self.kind} takes no characteristic")
        else:
            raise ValidationError(f"unknown coefficient kind {self.kind!r}")

    @classmethod
    def parse(cls, text) -> "CoefficientSpec":
        """``"0"``/``"Q"`` -> Q, a prime ``"p"`` -> F_p, ``"Z"`` -> Z."""
        s = str(text).strip()
        if s.upper() in ("Q", "QQ", "0"):
            return QQ
        if s.upper() in ("Z", "ZZ"):
            return ZZ
        if s.upper().startswith("F"):
            s = s[1:].lstrip("_")
        try:
            p = int(s)
        except ValueError:
            raise ValidationError(f"cannot parse coefficient spec {text!r}") from None
        return GF(p)

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return self.p

    def coerce(self, x):
        if self.kind == "F":
            return int(x) % self.p
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValidationError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def inv(self, x):
        if self.kind == "F":
            return pow(x, -1, self.p)
        if self.kind == "Q":
            return 1 / Fraction(x)
        raise UnsupportedOperation("division in Z")

    def __str__(self):
        return {"Q": "Q", "Z": "Z"}.get(self.kind) or f"F{self.p}"

    @property
    def label(self) -> str:
        """Short label used in reports: ``0`` for Q, ``p`` for F_p, ``Z``."""
        return {"Q": "0", "Z": "Z"}.get(self.kind) or str(self.p)


QQ = CoefficientSpec("Q")
ZZ = CoefficientSpec("Z")


def GF(p: int) -> CoefficientSpec:
    return CoefficientSpec("F", p)


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple
    spec: CoefficientSpec = QQ

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValidationError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], spec: CoefficientSpec = QQ, ncols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        nc = ncols if ncols is not None else (len(rows[0]) if rows else 0)
        if any(len(r) != nc for r in rows):
            raise ValidationError("ragged rows")
        return cls(len(rows), nc, tuple(spec.coerce(x) for r in rows for x in r), spec)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int, spec: CoefficientSpec = QQ) -> "Matrix":
        cols = [list(c) for c in columns]
        return cls.from_rows([[c[i] for c in cols] for i in range(nrows)], spec, ncols=len(cols))

    @classmethod
    def zeros(cls, rows: int, cols: int, spec: CoefficientSpec = QQ) -> "Matrix":
        return cls(rows, cols, tuple(spec.coerce(0) for _ in range(rows * cols)), spec)

    @classmethod
    def identity(cls, n: int, spec: CoefficientSpec = QQ) -> "Matrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], spec)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def column(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix.from_rows(self.columns(), self.spec, ncols=self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValidationError("shape mismatch in product")
        a, b = self.to_rows(), other.to_rows()
        out = [[sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)] for i in range(self.rows)]
        return Matrix.from_rows(out, self.spec, ncols=other.cols)

    def with_spec(self, spec: CoefficientSpec) -> "Matrix":
        return Matrix.from_rows(self.to_rows(), spec, ncols=self.cols)

    def sparse_columns(self) -> list[dict]:
        out = []
        for j in range(self.cols):
            out.append({i: x for i in range(self.rows) if (x := self.entries[i * self.cols + j])})
        return out


# -- sparse column kernels ---------------------------------------------------

def _axpy(spec: CoefficientSpec):
    """Return ``f(target, a, src)`` performing ``target += a * src`` in place."""
    if spec.kind == "F":
        p = spec.p

        def axpy(target, a, src):
            for r, x in src.items():
                y = (target.get(r, 0) + a * x) % p
                if y:
                    target[r] = y
                else:
                    target.pop(r, None)
    else:

        def axpy(target, a, src):
            for r, x in src.items():
                y = target.get(r, 0) + a * x
                if y:
                    target[r] = y
                else:
                    target.pop(r, None)

    return axpy


class EchelonPool:
    """A growing set of independent sparse columns with pairwise distinct
    lowest nonzero rows.

    Reducing a vector against the pool yields its unique expansion in the pool
    columns plus a residual; the residual is zero exactly when the vector lies
    in their span.
    """

    __slots__ = ("spec", "columns", "by_low", "_axpy")

    def __init__(self, spec: CoefficientSpec):
        if not spec.is_field:
            raise UnsupportedOperation("echelon reduction needs a field")
        self.spec = spec
        self.columns: list[dict] = []
        self.by_low: dict[int, int] = {}
        self._axpy = _axpy(spec)

    def __len__(self):
        return len(self.columns)

    def reduce(self, vec: dict, want_coords: bool = True):
        """Return ``(residual, coords)`` with ``vec = sum coords[k]*col_k + residual``."""
        c = dict(vec)
        coords: dict[int, object] = {}
        spec = self.spec
        axpy = self._axpy
        while c:
            low = max(c)
            k = self.by_low.get(low)
            if k is None:
                break
            col = self.columns[k]
            f = c[low] * spec.inv(col[low])
            if spec.kind == "F":
                f %= spec.p
            axpy(c, -f, col)
            if want_coords:
                coords[k] = coords.get(k, 0) + f
        return c, coords

    def insert(self, residual: dict) -> int:
        """Append an already-reduced nonzero column; returns its index."""
        k = len(self.columns)
        self.columns.append(residual)
        self.by_low[max(residual)] = k
        return k

    def add(self, vec: dict) -> int | None:
        """Reduce and, if independent, insert. Returns the new index or None."""
        res, _ = self.reduce(vec, want_coords=False)
        if res:
            return self.insert(res)
        return None

    def contains(self, vec: dict) -> bool:
        res, _ = self.reduce(vec, want_coords=False)
        return not res


def _reduce_columns(cols: list[dict], spec: CoefficientSpec):
    """Standard left-to-right column reduction with transform tracking.

    Returns ``(reduced, transform, pivots)`` where ``reduced[j] = A @ transform[j]``
    (as sparse columns), nonzero reduced columns have distinct lows, and
    ``pivots`` lists the indices of nonzero reduced columns.
    """
    axpy = _axpy(spec)
    one = spec.coerce(1)
    by_low: dict[int, int] = {}
    reduced: list[dict] = []
    transform: list[dict] = []
    for j, col in enumerate(cols):
        c = dict(col)
        v = {j: one}
        while c:
            low = max(c)
            k = by_low.get(low)
            if k is None:
                break
            f = c[low] * spec.inv(reduced[k][low])
            if spec.kind == "F":
                f %= spec.p
            axpy(c, -f, reduced[k])
            axpy(v, -f, transform[k])
        if c:
            by_low[max(c)] = j
        reduced.append(c)
        transform.append(v)
    pivots = [j for j, c in enumerate(reduced) if c]
    return reduced, transform, pivots


def _dense(col: dict, n: int, spec: CoefficientSpec) -> list:
    zero = spec.coerce(0)
    return [col.get(i, zero) for i in range(n)]


@dataclass(frozen=True)
class ColumnReduction:
    rank: int
    kernel_basis: Matrix
    pivot_columns: list = field(default_factory=list)
    reduced: Matrix | None = None


def column_reduce(A: Matrix) -> ColumnReduction:
    """Column echelon form of ``A`` over a field, with a kernel basis.

    ``reduced = A @ V`` for an invertible upper-triangular ``V``; the columns of
    ``V`` whose reduced column vanishes span ``ker A``.
    """
    if not A.spec.is_field:
        raise UnsupportedOperation("column_reduce is defined over fields; use smith_normal_form over Z")
    reduced, transform, pivots = _reduce_columns(A.sparse_columns(), A.spec)
    kernel = [_dense(transform[j], A.cols, A.spec) for j, c in enumerate(reduced) if not c]
    return ColumnReduction(
        rank=len(pivots),
        kernel_basis=Matrix.from_columns(kernel, A.cols, A.spec),
        pivot_columns=pivots,
        reduced=Matrix.from_columns([_dense(c, A.rows, A.spec) for c in reduced], A.rows, A.spec),
    )


def rank(A: Matrix) -> int:
    if A.spec.is_field:
        return len(_reduce_columns(A.sparse_columns(), A.spec)[2])
    return len(invariant_factors(A.to_rows()))


def solve_in_span(basis: Matrix, target: Sequence) -> list | None:
    """Coordinates of ``target`` in the (independent) columns of ``basis``.

    Returns ``None`` when ``target`` is outside the column span; raises
    :class:`ValidationError` if the columns are dependent.
    """
    spec = basis.spec
    if not spec.is_field:
        raise UnsupportedOperation("solve_in_span needs a field")
    if len(target) != basis.rows:
        raise ValidationError("target length does not match basis rows")
    reduced, transform, pivots = _reduce_columns(basis.sparse_columns(), spec)
    if len(pivots) != basis.cols:
        raise ValidationError("basis columns are linearly dependent")
    pool = EchelonPool(spec)
    for c in reduced:
        pool.insert(c)
    vec = {i: spec.coerce(x) for i, x in enumerate(target) if spec.coerce(x)}
    res, coords = pool.reduce(vec)
    if res:
        return None
    axpy = _axpy(spec)
    out: dict = {}
    for k, a in coords.items():
        axpy(out, a, transform[k])
    return _dense(out, basis.cols, spec)


# -- Smith normal form -------------------------------------------------------

def _xgcd(a: int, b: int):
    """(g, s, u) with s*a + u*b = g = gcd(a, b) >= 0."""
    r0, r1, s0, s1, u0, u1 = a, b, 1, 0, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    if r0 < 0:
        r0, s0, u0 = -r0, -s0, -u0
    return r0, s0, u0


def _hermite_rows(D: list[list[int]], T: list[list[int]] | None) -> None:
    """Row-reduce D in place to Hermite form; T gets the same row operations.

    Each pivot is combined with the rows below by 2x2 unimodular Bezout steps,
    and the entries above it are reduced into [0, pivot). Keeping those entries
    small is what stops the coefficient blowup of plain Euclidean elimination.
    """
    m = len(D)
    n = len(D[0]) if m else 0

    def combine(rows, i, j, c):
        a, b = rows[i][c], rows[j][c]
        g, s, u = _xgcd(a, b)
        x, y = -b // g, a // g
        ri, rj = rows[i], rows[j]
        rows[i] = [s * p + u * q for p, q in zip(ri, rj)]
        rows[j] = [x * p + y * q for p, q in zip(ri, rj)]
        return s, u, x, y

    r = 0
    for c in range(n):
        if r == m:
            break
        nz = [i for i in range(r, m) if D[i][c]]
        if not nz:
            continue
        # smallest entry first keeps the Bezout coefficients small
        k = min(nz, key=lambda i: abs(D[i][c]))
        D[r], D[k] = D[k], D[r]
        if T is not None:
            T[r], T[k] = T[k], T[r]
        for i in range(r + 1, m):
            if D[i][c]:
                if D[i][c] % D[r][c] == 0:
                    q = D[i][c] // D[r][c]
                    D[i] = [p - q * t for p, t in zip(D[i], D[r])]
                    if T is not None:
                        T[i] = [p - q * t for p, t in zip(T[i], T[r])]
                    continue
                s, u, x, y = combine(D, r, i, c)
                if T is not None:
                    ti, tj = T[r], T[i]
                    T[r] = [s * p + u * q for p, q in zip(ti, tj)]
                    T[i] = [x * p + y * q for p, q in zip(ti, tj)]
        if D[r][c] < 0:
            D[r] = [-v for v in D[r]]
            if T is not None:
                T[r] = [-v for v in T[r]]
        piv = D[r][c]
        for i in range(r):
            q = D[i][c] // piv
            if q:
                D[i] = [p - q * t for p, t in zip(D[i], D[r])]
                if T is not None:
                    T[i] = [p - q * t for p, t in zip(T[i], T[r])]
        r += 1


def _transpose(M: list[list[int]]) -> list[list[int]]:
    return [list(col) for col in zip(*M)]


def _snf_core(A: list[list[int]], track: bool):
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, r)) for r in A]
    L = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    R = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def diagonal():
        return all(D[i][j] == 0 for i in range(m) for j in range(n) if i != j)

    # alternate row and column Hermite passes until the matrix is diagonal
    while True:
        _hermite_rows(D, L)
        if diagonal():
            break
        Dt, Rt = _transpose(D), (_transpose(R) if track else None)
        _hermite_rows(Dt, Rt)
        D = _transpose(Dt)
        if track:
            R = _transpose(Rt)
        if diagonal():
            break

    # enforce d_i | d_{i+1} with 2x2 unimodular moves on the diagonal
    k = min(m, n)
    d = [D[i][i] for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            a, b = d[i], d[j]
            if a == 0:
                if b:  # move nonzeros to the front
                    d[i], d[j] = b, 0
                    if track:
                        L[i], L[j] = L[j], L[i]
                        for row in R:
                            row[i], row[j] = row[j], row[i]
                continue
            if b % a == 0:
                continue
            g, s, u = _xgcd(a, b)
            # diag(a, b) -> diag(g, ab/g):
            # add row j to row i, Bezout column move, clear the corner
            d[i], d[j] = g, a // g * b
            if track:
                L[i] = [p + q for p, q in zip(L[i], L[j])]
                for row in R:
                    ci, cj = row[i], row[j]
                    row[i], row[j] = s * ci + u * cj, (-b // g) * ci + (a // g) * cj
                t = u * b // g
                L[j] = [q - t * p for p, q in zip(L[i], L[j])]
    for i in range(k):
        if d[i] < 0:
            d[i] = -d[i]
            if track:
                L[i] = [-v for v in L[i]]
    return [x for x in d if x], L, R


def invariant_factors(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix (no transforms kept)."""
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return []
    return _snf_core(rows, track=False)[0]


@dataclass(frozen=True)
class SmithForm:
    invariant_factors: list
    left: Matrix
    right: Matrix


def smith_normal_form(A: Matrix) -> SmithForm:
    """``left @ A @ right`` is diagonal with ``d_1 | d_2 | ...``, all positive."""
    rows = [[int(x) for x in r] for r in A.to_rows()]
    if A.rows == 0 or A.cols == 0:
        return SmithForm([], Matrix.identity(A.rows, ZZ), Matrix.identity(A.cols, ZZ))
    factors, L, R = _snf_core(rows, track=True)
    return SmithForm(factors, Matrix.from_rows(L, ZZ, ncols=A.rows), Matrix.from_rows(R, ZZ, ncols=A.cols))


