"""Dense exact matrices over QQ or F_p.

Storage and elimination are delegated to python-flint (``fmpq_mat`` /
``nmod_mat``).  A slow pure-Python row reduction, :func:`rref_reference`,
is kept as an independent route for cross-checking.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import flint

from .field import QQ, Field, Fp, PrimeField, ScalarKindError, field_of

MAX_SUBSPACE_RETRIES = 100


def _flint_zero(field: Field, nrows: int, ncols: int):
    if isinstance(field, PrimeField):
        return flint.nmod_mat(nrows, ncols, field.p)
    return flint.fmpq_mat(nrows, ncols)


def _to_flint_entry(field: Field, x):
    if isinstance(field, PrimeField):
        if isinstance(x, Fp):
            if x.p != field.p:
                raise ScalarKindError(f"cannot mix F_{field.p} with F_{x.p}")
            return x.value
        if isinstance(x, Fraction):
            return field(x).value
        if isinstance(x, int):
            return x % field.p
        raise ScalarKindError(f"cannot store {type(x).__name__} in {field!r}")
    if isinstance(x, Fp):
        raise ScalarKindError("cannot store an F_p element in a rational matrix")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    if isinstance(x, flint.fmpq):
        return x
    raise ScalarKindError(f"cannot store {type(x).__name__} in QQ")


class ExactMatrix:
    """Immutable ``nrows x ncols`` matrix of exact scalars of a single field."""

    __slots__ = ("field", "nrows", "ncols", "_m")

    def __init__(self, field: Field, nrows: int, ncols: int, _flint=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self._m = _flint if _flint is not None else _flint_zero(field, nrows, ncols)

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field | None = None,
                  ncols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        if field is None:
            field = _infer_field(x for r in rows for x in r)
        m = _flint_zero(field, len(rows), ncols)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                if x:
                    m[i, j] = _to_flint_entry(field, x)
        return cls(field, len(rows), ncols, m)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], field: Field | None = None,
                     nrows: int | None = None) -> "ExactMatrix":
        return cls.from_rows(cols, field, ncols=nrows).transpose()

    @classmethod
    def from_sparse(cls, field: Field, nrows: int, ncols: int,
                    entries: Mapping[tuple[int, int], object]) -> "ExactMatrix":
        m = _flint_zero(field, nrows, ncols)
        for (i, j), x in entries.items():
            if x:
                m[i, j] = _to_flint_entry(field, x)
        return cls(field, nrows, ncols, m)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "ExactMatrix":
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "ExactMatrix":
        return cls.from_sparse(field, n, n, {(i, i): 1 for i in range(n)})

    # access -------------------------------------------------------------

    def _wrap(self, x):
        if isinstance(self.field, PrimeField):
            return Fp._make(int(x), self.field.p)
        return Fraction(int(x.p), int(x.q))

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return self._wrap(self._m[i, j])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def rows(self) -> list[list]:
        return [[self[i, j] for j in range(self.ncols)] for i in range(self.nrows)]

    def row(self, i: int) -> list:
        return [self[i, j] for j in range(self.ncols)]

    def column(self, j: int) -> list:
        return [self[i, j] for i in range(self.nrows)]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.ncols)]

    def nonzero_entries(self) -> dict[tuple[int, int], object]:
        out = {}
        for i in range(self.nrows):
            for j in range(self.ncols):
                x = self._m[i, j]
                if x != 0:
                    out[i, j] = self._wrap(x)
        return out

    def is_zero(self) -> bool:
        if self.nrows == 0 or self.ncols == 0:
            return True
        return self._m == _flint_zero(self.field, self.nrows, self.ncols)

    # algebra ------------------------------------------------------------

    def _check_same_field(self, other: "ExactMatrix"):
        if self.field != other.field:
            raise ScalarKindError(f"matrix over {self.field!r} meets {other.field!r}")

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_field(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.nrows == 0 or other.ncols == 0 or self.ncols == 0:
            return ExactMatrix.zeros(self.field, self.nrows, other.ncols)
        if isinstance(self.field, PrimeField):
            return ExactMatrix(self.field, self.nrows, other.ncols, self._m * other._m)
        # fmpz products are much faster than fmpq ones
        za, da = self._m.numer_denom()
        zb, db = other._m.numer_denom()
        prod = flint.fmpq_mat(za * zb)
        if da * db != 1:
            prod = prod / (da * db)
        return ExactMatrix(self.field, self.nrows, other.ncols, prod)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(self.field, self.nrows, self.ncols, self._m + other._m)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(self.field, self.nrows, self.ncols, self._m - other._m)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.field, self.nrows, self.ncols, -self._m)

    def scale(self, c) -> "ExactMatrix":
        c = self.field(c)
        out = {k: v * c for k, v in self.nonzero_entries().items()}
        return ExactMatrix.from_sparse(self.field, self.nrows, self.ncols, out)

    def transpose(self) -> "ExactMatrix":
        if self.nrows == 0 or self.ncols == 0:
            return ExactMatrix.zeros(self.field, self.ncols, self.nrows)
        return ExactMatrix(self.field, self.ncols, self.nrows, self._m.transpose())

    T = property(transpose)

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_field(other)
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        entries = self.nonzero_entries()
        for (i, j), x in other.nonzero_entries().items():
            entries[i, j + self.ncols] = x
        return ExactMatrix.from_sparse(self.field, self.nrows, self.ncols + other.ncols, entries)

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        return self.T.hstack(other.T).T

    def apply(self, vector: Sequence) -> list:
        """Matrix times column vector given as a list."""
        v = ExactMatrix.from_rows([[x] for x in vector], self.field, ncols=1)
        return (self @ v).column(0) if self.nrows else []

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        entries = {}
        for a, i in enumerate(rows):
            for b, j in enumerate(cols):
                x = self._m[i, j]
                if x != 0:
                    entries[a, b] = self._wrap(x)
        return ExactMatrix.from_sparse(self.field, len(rows), len(cols), entries)

    def change_field(self, field: Field) -> "ExactMatrix":
        """Reduce a rational matrix modulo p (or re-tag an identical field)."""
        if field == self.field:
            return self
        if isinstance(self.field, PrimeField):
            raise ScalarKindError("cannot lift an F_p matrix")
        return ExactMatrix.from_sparse(field, self.nrows, self.ncols, self.nonzero_entries())

    def det(self):
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if self.nrows == 0:
            return self.field.one
        return self._wrap(self._m.det())

    def rref(self) -> tuple["ExactMatrix", list[int]]:
        """Reduced row echelon form and the pivot columns."""
        if self.nrows == 0 or self.ncols == 0:
            return self, []
        r, rk = self._m.rref()
        out = ExactMatrix(self.field, self.nrows, self.ncols, r)
        pivots = []
        i = 0
        for j in range(self.ncols):
            if i < rk and r[i, j] != 0:
                pivots.append(j)
                i += 1
        return out, pivots

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and (self.nrows == 0 or self.ncols == 0 or self._m == other._m))

    def __hash__(self):
        return hash((self.field, self.shape, tuple(sorted(self.nonzero_entries().items()))))

    def __repr__(self):
        return f"ExactMatrix({self.field!r}, {self.nrows}x{self.ncols})"

    def __str__(self):
        from .field import format_scalar
        return "\n".join(" ".join(format_scalar(x) for x in r) for r in self.rows())


def _infer_field(values: Iterable) -> Field:
    field = None
    for x in values:
        f = field_of(x)
        if field is None:
            field = f
        elif isinstance(f, PrimeField) or isinstance(field, PrimeField):
            if f != field:
                raise ScalarKindError(f"mixed scalar kinds {field!r} and {f!r}")
    return field or QQ


def rank(m: ExactMatrix) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    if isinstance(m.field, PrimeField):
        return m._m.rank()
    # clearing denominators leaves the rank unchanged; fmpz elimination is faster
    z, _ = m._m.numer_denom()
    if m.nrows < m.ncols:
        z = z.transpose()
    return z.rank()


def kernel(m: ExactMatrix) -> list[list]:
    """Null-space basis, one vector per free column of the RREF.

    Vector ``t`` has a 1 in the ``t``-th free column and zeros in every other
    free column, so the basis is canonical for the column space ordering.
    """
    r, pivots = m.rref()
    pivot_set = set(pivots)
    free = [j for j in range(m.ncols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [m.field.zero] * m.ncols
        v[f] = m.field.one
        for i, pj in enumerate(pivots):
            v[pj] = -r[i, f]
        basis.append(v)
    return basis


def kernel_matrix(m: ExactMatrix) -> ExactMatrix:
    """Kernel basis as the columns of a matrix (``ncols x nullity``)."""
    vecs = kernel(m)
    if not vecs:
        return ExactMatrix.zeros(m.field, m.ncols, 0)
    return ExactMatrix.from_columns(vecs, m.field, nrows=m.ncols)


def rref_reference(rows: Sequence[Sequence], field: Field = QQ) -> tuple[list[list], list[int]]:
    """Textbook Gauss-Jordan elimination on python scalars."""
    a = [[field(x) for x in r] for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    i = 0
    for j in range(ncols):
        p = next((t for t in range(i, nrows) if a[t][j]), None)
        if p is None:
            continue
        a[i], a[p] = a[p], a[i]
        inv = field.one / a[i][j]
        a[i] = [x * inv for x in a[i]]
        for t in range(nrows):
            if t != i and a[t][j]:
                c = a[t][j]
                a[t] = [x - c * y for x, y in zip(a[t], a[i])]
        pivots.append(j)
        i += 1
        if i == nrows:
            break
    return a, pivots


def column_span_equal(a: ExactMatrix, b: ExactMatrix) -> bool:
    if a.nrows != b.nrows:
        return False
    ra, rb = rank(a), rank(b)
    return ra == rb and rank(a.hstack(b)) == ra


def random_subspace(q: int, k: int, seed: int, field: Field = QQ,
                    bound: int = 9) -> ExactMatrix:
    """Seeded random full-rank ``k x q`` basis matrix.

    Rational entries are integers in ``[-bound, bound]``; F_p entries are
    uniform residues.
    """
    if not 1 <= k <= q:
        raise ValueError(f"need 1 <= k <= q, got k={k}, q={q}")
    rng = random.Random(f"random_subspace:{q}:{k}:{seed}:{field!r}")
    for _ in range(MAX_SUBSPACE_RETRIES):
        if isinstance(field, PrimeField):
            rows = [[rng.randrange(field.p) for _ in range(q)] for _ in range(k)]
        else:
            rows = [[rng.randint(-bound, bound) for _ in range(q)] for _ in range(k)]
        m = ExactMatrix.from_rows(rows, field, ncols=q)
        if rank(m) == k:
            return m
    raise RuntimeError(f"no full-rank {k}x{q} sample after {MAX_SUBSPACE_RETRIES} draws")


def random_invertible(n: int, seed: int, field: Field = QQ, bound: int = 5) -> ExactMatrix:
    return random_subspace(n, n, seed, field, bound)
