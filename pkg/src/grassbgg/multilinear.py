"""Basis-indexed elements of exterior and symmetric powers.

Exterior basis of degree ``n`` on ``q`` generators: strictly increasing
index tuples in lexicographic order.  Symmetric basis of degree ``m`` on
``k`` generators: non-decreasing tuples (sorted words), lexicographic, with
no multinomial normalisation.
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Iterable, Mapping, Sequence

from .field import QQ, Field, ScalarKindError


def exterior_basis(q: int, n: int) -> list[tuple[int, ...]]:
    return list(combinations(range(q), n))


def symmetric_basis(k: int, m: int) -> list[tuple[int, ...]]:
    return list(combinations_with_replacement(range(k), m))


def exterior_dim(q: int, n: int) -> int:
    return comb(q, n)


def symmetric_dim(k: int, m: int) -> int:
    if m < 0:
        return 0
    return comb(k + m - 1, m)


def merge_sign(a: Sequence[int], b: Sequence[int]) -> int:
    """Sign of the permutation sorting ``a + b`` (0 if they share an index).

    Both inputs must be strictly increasing.
    """
    bset = set(b)
    for x in a:
        if x in bset:
            return 0
    # count pairs (x in a, y in b) with x > y
    j = 0
    inversions = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inversions += j
    return -1 if inversions % 2 else 1


class _Graded:
    """Shared bookkeeping for the two element classes."""

    __slots__ = ("degree", "dim", "field", "_coeffs")

    def __init__(self, degree: int, dim: int, coeffs: Mapping[tuple, object] | None = None,
                 field: Field = QQ):
        self.degree = degree
        self.dim = dim
        self.field = field
        clean = {}
        for key, c in (coeffs or {}).items():
            key = tuple(key)
            self._check_key(key)
            c = field(c)
            if c:
                clean[key] = clean.get(key, field.zero) + c
                if not clean[key]:
                    del clean[key]
        self._coeffs = clean

    def _check_key(self, key: tuple):
        raise NotImplementedError

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def items(self):
        return sorted(self._coeffs.items())

    def coefficient(self, key) -> object:
        return self._coeffs.get(tuple(key), self.field.zero)

    def is_zero(self) -> bool:
        return not self._coeffs

    def _compatible(self, other: "_Graded"):
        if type(self) is not type(other):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if self.dim != other.dim:
            raise ValueError(f"ambient dimension mismatch: {self.dim} vs {other.dim}")
        if self.field != other.field:
            raise ScalarKindError(f"scalar kind mismatch: {self.field!r} vs {other.field!r}")

    def _new(self, degree: int, coeffs: Mapping):
        return type(self)(degree, self.dim, coeffs, self.field)

    def __add__(self, other):
        self._compatible(other)
        if self.degree != other.degree:
            raise ValueError("cannot add elements of different degree")
        out = dict(self._coeffs)
        for key, c in other._coeffs.items():
            out[key] = out.get(key, self.field.zero) + c
        return self._new(self.degree, out)

    def __neg__(self):
        return self._new(self.degree, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.field(c)
        return self._new(self.degree, {k: v * c for k, v in self._coeffs.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return (self.degree, self.dim, self.field, self._coeffs) == (
            other.degree, other.dim, other.field, other._coeffs)

    def __hash__(self):
        return hash((type(self).__name__, self.degree, self.dim, tuple(self.items())))

    def to_vector(self) -> list:
        """Coordinates in the lexicographic basis."""
        return [self.coefficient(key) for key in self.basis()]

    def basis(self) -> list[tuple[int, ...]]:
        raise NotImplementedError


class ExteriorElement(_Graded):
    """Element of the ``degree``-th exterior power of a ``dim``-dimensional space."""

    __slots__ = ()

    def _check_key(self, key):
        if len(key) != self.degree:
            raise ValueError(f"key {key} has wrong length for degree {self.degree}")
        if any(a >= b for a, b in zip(key, key[1:])):
            raise ValueError(f"key {key} is not strictly increasing")
        if key and not (0 <= key[0] and key[-1] < self.dim):
            raise ValueError(f"key {key} out of range for dimension {self.dim}")

    def basis(self):
        return exterior_basis(self.dim, self.degree)

    @classmethod
    def unit(cls, dim: int, field: Field = QQ) -> "ExteriorElement":
        return cls(0, dim, {(): 1}, field)

    @classmethod
    def basis_element(cls, dim: int, key: Sequence[int], field: Field = QQ) -> "ExteriorElement":
        key = tuple(key)
        return cls(len(key), dim, {key: 1}, field)

    @classmethod
    def from_vector(cls, vector: Sequence, degree: int = 1, field: Field = QQ,
                    dim: int | None = None) -> "ExteriorElement":
        if dim is None:
            if degree != 1:
                raise ValueError("dim is required for degree > 1")
            dim = len(vector)
        keys = exterior_basis(dim, degree)
        if len(keys) != len(vector):
            raise ValueError("coordinate vector has the wrong length")
        return cls(degree, dim, dict(zip(keys, vector)), field)

    def wedge(self, other: "ExteriorElement") -> "ExteriorElement":
        return wedge(self, other)

    def __xor__(self, other):
        return wedge(self, other)

    def __repr__(self):
        if not self._coeffs:
            return f"0 (degree {self.degree})"
        from .field import format_scalar
        terms = []
        for key, c in self.items():
            name = "^".join(f"e{i}" for i in key) or "1"
            terms.append(f"{format_scalar(c)}*{name}")
        return " + ".join(terms)


class SymmetricElement(_Graded):
    """Element of the ``degree``-th symmetric power of a ``dim``-dimensional space."""

    __slots__ = ()

    def _check_key(self, key):
        if len(key) != self.degree:
            raise ValueError(f"key {key} has wrong length for degree {self.degree}")
        if any(a > b for a, b in zip(key, key[1:])):
            raise ValueError(f"key {key} is not non-decreasing")
        if key and not (0 <= key[0] and key[-1] < self.dim):
            raise ValueError(f"key {key} out of range for dimension {self.dim}")

    def basis(self):
        return symmetric_basis(self.dim, self.degree)

    @classmethod
    def monomial(cls, dim: int, key: Sequence[int], field: Field = QQ) -> "SymmetricElement":
        key = tuple(sorted(key))
        return cls(len(key), dim, {key: 1}, field)

    def __mul__(self, other):
        if isinstance(other, SymmetricElement):
            return sym_multiply(self, other)
        return self.scale(other)

    def __repr__(self):
        if not self._coeffs:
            return f"0 (degree {self.degree})"
        from .field import format_scalar
        terms = []
        for key, c in self.items():
            name = "*".join(f"w{i}" for i in key) or "1"
            terms.append(f"{format_scalar(c)}*{name}")
        return " + ".join(terms)


def wedge(a: ExteriorElement, b: ExteriorElement) -> ExteriorElement:
    a._compatible(b)
    degree = a.degree + b.degree
    out: dict = {}
    if degree <= a.dim:
        for ka, ca in a._coeffs.items():
            for kb, cb in b._coeffs.items():
                s = merge_sign(ka, kb)
                if s:
                    key = tuple(sorted(ka + kb))
                    term = ca * cb if s > 0 else -(ca * cb)
                    out[key] = out.get(key, a.field.zero) + term
    return ExteriorElement(degree, a.dim, out, a.field)


def wedge_all(vectors: Iterable[Sequence], dim: int, field: Field = QQ) -> ExteriorElement:
    """Wedge product of a list of coordinate vectors, in order."""
    out = ExteriorElement.unit(dim, field)
    for v in vectors:
        out = wedge(out, ExteriorElement.from_vector(v, field=field))
    return out


def sym_multiply(a: SymmetricElement, b: SymmetricElement) -> SymmetricElement:
    a._compatible(b)
    out: dict = {}
    for ka, ca in a._coeffs.items():
        for kb, cb in b._coeffs.items():
            key = tuple(sorted(ka + kb))
            out[key] = out.get(key, a.field.zero) + ca * cb
    return SymmetricElement(a.degree + b.degree, a.dim, out, a.field)


def contraction_matrix(x: ExteriorElement):
    """Flattening ``Lambda^{n-1} V* -> V`` of a degree-n element.

    Rows are indexed by (n-1)-subsets ``S``, columns by ``j``; the entry is
    the coefficient of ``e_j`` in the interior product of ``x`` with ``e_S*``.
    Its rank is ``n`` exactly when ``x`` is a non-zero decomposable element.
    """
    from .matrix import ExactMatrix

    n, q = x.degree, x.dim
    rows = exterior_basis(q, n - 1)
    index = {s: i for i, s in enumerate(rows)}
    entries = {}
    for key, c in x._coeffs.items():
        for pos, j in enumerate(key):
            s = key[:pos] + key[pos + 1:]
            # e_key = (-1)^(n-1-pos) e_s ^ e_j
            sign = -1 if (n - 1 - pos) % 2 else 1
            entries[index[s], j] = entries.get((index[s], j), x.field.zero) + (c if sign > 0 else -c)
    return ExactMatrix.from_sparse(x.field, len(rows), q, entries)


def is_decomposable(x: ExteriorElement) -> bool:
    """True for non-zero ``v_1 ^ ... ^ v_n``; degree 0 and 1 are always decomposable."""
    from .matrix import rank

    if x.is_zero():
        return False
    if x.degree <= 1:
        return True
    return rank(contraction_matrix(x)) == x.degree
