"""Graded algebras of holomorphic forms given by structure constants.

A :class:`FormAlgebra` stores the graded dimensions ``h[0..top]`` and, for
``1 <= i < top``, the products ``V x H^i -> H^{i+1}`` of a basis vector
``v_j`` of ``V = H^1`` with a basis vector ``b_a`` of ``H^i``.  The degree-0
product ``V x H^0 -> H^1`` is the canonical identification and is never
stored.  ``top`` may be smaller than the declared dimension ``d`` (truncated
algebras, e.g. quotient fixtures); maps needing a missing degree raise
:class:`DegreeUnavailable`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from math import comb
from typing import Mapping, Sequence

from .field import QQ, Field
from .matrix import ExactMatrix, kernel, rank
from .multilinear import ExteriorElement, exterior_basis, merge_sign

# mult[i][j][a] is a sparse vector {c: coefficient} in H^{i+1}
Product = Mapping[int, object]


class MalformedAlgebraError(ValueError):
    """Structure constants of the wrong arity or out-of-range indices."""


class InvalidAlgebraError(ValueError):
    """Well-formed data that violates the algebra identities."""


class DegreeUnavailable(ValueError):
    """A product or map in a degree the algebra does not carry."""


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[str, ...] = ()

    @property
    def first_violation(self) -> str | None:
        return self.violations[0] if self.violations else None

    def __bool__(self):
        return self.valid


@dataclass(frozen=True, eq=False)
class FormAlgebra:
    d: int
    q: int
    h: tuple[int, ...]
    mult: Mapping[int, tuple[tuple[Product, ...], ...]] = dc_field(default_factory=dict)
    field: Field = QQ
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(self.h))
        self._check_shape()

    @property
    def top(self) -> int:
        """Highest degree whose dimension is known."""
        return len(self.h) - 1

    def _check_shape(self):
        if self.d < 1:
            raise MalformedAlgebraError(f"dimension d={self.d} must be positive")
        if len(self.h) < 2:
            raise MalformedAlgebraError("h must list at least h[0] and h[1]")
        if len(self.h) > self.d + 1:
            raise MalformedAlgebraError(f"h has {len(self.h)} entries but d={self.d}")
        if any(x < 0 for x in self.h):
            raise MalformedAlgebraError("negative dimension in h")
        for i, table in self.mult.items():
            if not 1 <= i < self.top:
                raise MalformedAlgebraError(f"mult block {i} outside 1..{self.top - 1}")
            if len(table) != self.q:
                raise MalformedAlgebraError(f"mult {i}: expected {self.q} rows, got {len(table)}")
            for j, row in enumerate(table):
                if len(row) != self.h[i]:
                    raise MalformedAlgebraError(
                        f"mult {i}: v{j} has {len(row)} entries, expected h[{i}]={self.h[i]}")
                for a, prod in enumerate(row):
                    for c in prod:
                        if not 0 <= c < self.h[i + 1]:
                            raise MalformedAlgebraError(
                                f"mult {i}: v{j} * b{a} -> b{c} out of range (h[{i + 1}]={self.h[i + 1]})")

    def product(self, i: int, j: int, a: int) -> dict:
        """``v_j * b_a`` for ``b_a`` in ``H^i``, as a sparse vector of ``H^{i+1}``."""
        if i == 0:
            return {j: self.field.one}
        if not 1 <= i < self.top:
            raise DegreeUnavailable(f"no product V x H^{i} -> H^{i + 1} (top degree {self.top})")
        table = self.mult.get(i)
        if table is None:
            return {}
        return dict(table[j][a])

    def left_multiplication(self, i: int, w: Sequence) -> dict[tuple[int, int], object]:
        """Sparse ``h[i+1] x h[i]`` matrix of ``alpha -> w ^ alpha`` for ``w`` in V."""
        if i == 0:
            return {(c, 0): self.field(x) for c, x in enumerate(w) if x}
        if not 1 <= i < self.top:
            raise DegreeUnavailable(f"no product V x H^{i} -> H^{i + 1} (top degree {self.top})")
        table = self.mult.get(i)
        out: dict = {}
        if table is None:
            return out
        zero = self.field.zero
        for j, x in enumerate(w):
            if not x:
                continue
            x = self.field(x)
            for a, prod in enumerate(table[j]):
                for c, coeff in prod.items():
                    out[c, a] = out.get((c, a), zero) + x * coeff
        return {k: v for k, v in out.items() if v}

    @cached_property
    def validation(self) -> ValidationReport:
        return validate(self)

    def require_valid(self):
        report = self.validation
        if not report.valid:
            raise InvalidAlgebraError(report.first_violation)

    def canonical(self) -> "FormAlgebra":
        """Same algebra with zero coefficients dropped and all blocks present."""
        mult = {}
        for i in range(1, self.top):
            table = self.mult.get(i)
            mult[i] = tuple(
                tuple({c: self.field(x) for c, x in sorted((table[j][a] if table else {}).items())
                       if self.field(x)} for a in range(self.h[i]))
                for j in range(self.q))
        return FormAlgebra(self.d, self.q, self.h, mult, self.field, self.name)

    def __eq__(self, other):
        if not isinstance(other, FormAlgebra):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return (a.d, a.q, a.h, a.field, dict(a.mult)) == (b.d, b.q, b.h, b.field, dict(b.mult))

    def __hash__(self):
        return hash((self.d, self.q, self.h))


def validate(a: FormAlgebra) -> ValidationReport:
    """Check dimension consistency and graded anticommutativity exactly.

    The identity ``v_j (v_l alpha) = - v_l (v_j alpha)`` is checked for every
    pair ``j <= l`` and every basis vector ``alpha`` of ``H^i``,
    ``0 <= i <= top - 2``; the case ``j == l`` asks for ``v_j v_j alpha = 0``.
    """
    violations = []
    if a.h[0] != 1:
        violations.append(f"h[0] = {a.h[0]}, expected 1")
    if a.h[1] != a.q:
        violations.append(f"h[1] = {a.h[1]}, expected q = {a.q}")
    if violations:
        return ValidationReport(False, tuple(violations))
    zero = a.field.zero
    for i in range(0, a.top - 1):
        for alpha in range(a.h[i]):
            # first products v_l * alpha for all l
            first = [a.product(i, l, alpha) for l in range(a.q)]

            def second(j, vec):
                out: dict = {}
                for c, x in vec.items():
                    for e, y in a.product(i + 1, j, c).items():
                        out[e] = out.get(e, zero) + x * y
                return out

            for j in range(a.q):
                for l in range(j, a.q):
                    s = second(j, first[l])
                    t = second(l, first[j])
                    for e in set(s) | set(t):
                        if s.get(e, zero) + t.get(e, zero):
                            violations.append(
                                f"anticommutativity fails in degree {i}: "
                                f"v{j}*(v{l}*b{alpha}) + v{l}*(v{j}*b{alpha}) has "
                                f"coefficient {s.get(e, zero) + t.get(e, zero)} on b{e} of H^{i + 2}")
                            return ValidationReport(False, tuple(violations))
    return ValidationReport(True)


@dataclass(frozen=True)
class PsiMap:
    n: int
    matrix: ExactMatrix

    def __call__(self, x: ExteriorElement) -> list:
        if x.degree != self.n:
            raise ValueError(f"psi_{self.n} applied to a degree-{x.degree} element")
        return self.matrix.apply(x.to_vector())


def _psi_columns(a: FormAlgebra, n: int) -> dict[tuple[int, ...], dict]:
    cols = {(j,): {j: a.field.one} for j in range(a.q)}
    zero = a.field.zero
    for deg in range(2, n + 1):
        nxt = {}
        for key in exterior_basis(a.q, deg):
            head, tail = key[0], key[1:]
            out: dict = {}
            for c, x in cols[tail].items():
                for e, y in a.product(deg - 1, head, c).items():
                    out[e] = out.get(e, zero) + x * y
            nxt[key] = {e: v for e, v in out.items() if v}
        cols = nxt
    return cols


def psi(a: FormAlgebra, n: int) -> PsiMap:
    """Matrix of ``Lambda^n V -> H^n``, ``v_1^...^v_n -> v_1 (v_2 (... v_n))``."""
    if not 1 <= n <= a.d:
        raise ValueError(f"psi_n needs 1 <= n <= d = {a.d}, got {n}")
    if n > a.top:
        raise DegreeUnavailable(f"H^{n} is not carried by this algebra (top degree {a.top})")
    a.require_valid()
    cols = _psi_columns(a, n)
    keys = exterior_basis(a.q, n)
    entries = {(e, t): v for t, key in enumerate(keys) for e, v in cols[key].items()}
    return PsiMap(n, ExactMatrix.from_sparse(a.field, a.h[n], len(keys), entries))


def psi_kernel(a: FormAlgebra, n: int = 2) -> list[ExteriorElement]:
    m = psi(a, n).matrix
    return [ExteriorElement.from_vector(v, n, a.field, dim=a.q) for v in kernel(m)]


# fixtures ---------------------------------------------------------------


def fixture_abelian(q: int, field: Field = QQ) -> FormAlgebra:
    """Exterior algebra on ``q`` generators: every psi_n is the identity."""
    if q < 1:
        raise ValueError("q must be positive")
    h = tuple(comb(q, n) for n in range(q + 1))
    mult = {}
    for i in range(1, q):
        index = {key: c for c, key in enumerate(exterior_basis(q, i + 1))}
        table = []
        for j in range(q):
            row = []
            for key in exterior_basis(q, i):
                s = merge_sign((j,), key)
                row.append({index[tuple(sorted((j,) + key))]: field(s)} if s else {})
            table.append(tuple(row))
        mult[i] = tuple(table)
    return FormAlgebra(q, q, h, mult, field, name=f"abelian({q})")


def fixture_product_of_curves(g1: int, g2: int, field: Field = QQ) -> FormAlgebra:
    """Forms on a product of curves of genera ``g1`` and ``g2``.

    ``V = V1 + V2`` with ``V1 = <e_0..e_{g1-1}>``; ``H^2 = V1 (x) V2`` with basis
    ``e_i (x) e_j`` ordered lexicographically, and ``v ^ w`` keeps only its
    ``V1 (x) V2`` component.
    """
    if g1 < 1 or g2 < 1:
        raise ValueError("genera must be positive")
    q = g1 + g2
    table = []
    for j in range(q):
        row = []
        for a in range(q):
            if j < g1 <= a:
                row.append({j * g2 + (a - g1): field(1)})
            elif a < g1 <= j:
                row.append({a * g2 + (j - g1): field(-1)})
            else:
                row.append({})
        table.append(tuple(row))
    return FormAlgebra(2, q, (1, q, g1 * g2), {1: tuple(table)}, field,
                       name=f"product({g1},{g2})")


def _as_coordinates(v, q: int, degree: int, field: Field) -> list:
    if isinstance(v, ExteriorElement):
        if v.degree != degree or v.dim != q:
            raise ValueError(f"expected a degree-{degree} element on {q} generators")
        return [field(x) for x in v.to_vector()]
    if hasattr(v, "to_exterior"):
        return _as_coordinates(v.to_exterior(), q, degree, field)
    v = [field(x) for x in v]
    if len(v) != comb(q, degree):
        raise ValueError("coordinate vector has the wrong length")
    return v


def fixture_quotient(q: int, d: int, kernel_basis: Sequence, depth: int = 2,
                     field: Field = QQ) -> FormAlgebra:
    """Exterior algebra modulo the ideal generated by bivectors ``K``.

    ``H^n = Lambda^n V / (K ^ Lambda^{n-2} V)`` for ``n <= depth``, so that
    ``ker psi_2 = K``.  With the default ``depth = 2`` only ``V x V -> H^2``
    is stored; larger depths add the induced higher products.  Each quotient
    basis is the set of non-pivot exterior monomials of the reduced ideal.
    """
    if d < 2:
        raise ValueError("quotient fixtures need d >= 2")
    if not 2 <= depth <= d:
        raise ValueError(f"depth must lie in 2..d, got {depth}")
    gens = [_as_coordinates(v, q, 2, field) for v in kernel_basis]
    if gens:
        kmat = ExactMatrix.from_rows(gens, field, ncols=comb(q, 2))
        if rank(kmat) != len(gens):
            raise ValueError("kernel basis is linearly dependent")
    gen_elems = [ExteriorElement.from_vector(g, 2, field, dim=q) for g in gens]

    h = [1, q]
    reps = {1: [(j,) for j in range(q)]}
    proj: dict[int, dict[tuple, dict]] = {}
    for n in range(2, depth + 1):
        keys = exterior_basis(q, n)
        rows = []
        for g in gen_elems:
            for s in exterior_basis(q, n - 2):
                x = g ^ ExteriorElement.basis_element(q, s, field)
                if not x.is_zero():
                    rows.append(x.to_vector())
        pivots: list[int] = []
        r = None
        if rows:
            r, pivots = ExactMatrix.from_rows(rows, field, ncols=len(keys)).rref()
        pivot_row = {pj: i for i, pj in enumerate(pivots)}
        free = [t for t in range(len(keys)) if t not in pivot_row]
        free_pos = {t: c for c, t in enumerate(free)}
        pn = {}
        for t, key in enumerate(keys):
            if t in free_pos:
                pn[key] = {free_pos[t]: field.one}
            else:
                i = pivot_row[t]
                pn[key] = {free_pos[f]: -r[i, f] for f in free if r[i, f]}
        proj[n] = pn
        reps[n] = [keys[t] for t in free]
        h.append(len(free))

    mult = {}
    for i in range(1, depth):
        table = []
        for j in range(q):
            row = []
            for rep in reps[i]:
                s = merge_sign((j,), rep)
                if not s:
                    row.append({})
                    continue
                img = proj[i + 1][tuple(sorted((j,) + rep))]
                row.append({c: (x if s > 0 else -x) for c, x in img.items()})
            table.append(tuple(row))
        mult[i] = tuple(table)
    label = f"quotient(q={q}, d={d}, dim K={len(gens)}, depth={depth})"
    return FormAlgebra(d, q, tuple(h), mult, field, name=label)
