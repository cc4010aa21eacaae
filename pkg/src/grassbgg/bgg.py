"""The complexes C_{r,W} at a point W of a Grassmannian, and their exactness.

The term in position ``i`` is ``Sym^{r-i} W (x) H^i`` with basis ordered
lexicographically by (monomial, form index); its dimension is
``C(k+r-i-1, r-i) * h[i]``.  The differential deletes one factor ``w_j`` from
the monomial and multiplies it onto the form.  Since deleting any of the
``m`` copies of ``w_j`` gives the same monomial, the matrix is
``sum_j D_j (x) L_j`` where ``D_j`` is differentiation by ``w_j`` on the
monomial basis and ``L_j`` is left multiplication by ``w_j``.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from fractions import Fraction
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebra import DegreeUnavailable, FormAlgebra
from .field import Field
from .matrix import ExactMatrix, column_span_equal, kernel_matrix, random_subspace, rank
from .multilinear import symmetric_basis, symmetric_dim


class RankDeficientError(ValueError):
    """The rows given for W are linearly dependent."""


class ComplexPropertyError(RuntimeError):
    """A composite of consecutive differentials is non-zero on a validated algebra."""


def _as_basis(W, field: Field) -> ExactMatrix:
    if isinstance(W, ExactMatrix):
        if W.field != field:
            W = W.change_field(field)
        return W
    return ExactMatrix.from_rows(W, field)


def term_dim(a: FormAlgebra, k: int, r: int, i: int) -> int:
    return symmetric_dim(k, r - i) * a.h[i]


def _plain(entries: dict) -> dict:
    # integral rationals as ints keep the inner loop in machine arithmetic
    out = {}
    for key, x in entries.items():
        if isinstance(x, Fraction) and x.denominator == 1:
            x = x.numerator
        out[key] = x
    return out


def _mu_entries(a: FormAlgebra, W: ExactMatrix, r: int, i: int) -> dict:
    k = W.nrows
    h0, h1 = a.h[i], a.h[i + 1]
    src = symmetric_basis(k, r - i)
    tgt_index = {m: t for t, m in enumerate(symmetric_basis(k, r - i - 1))}
    lmul = [_plain(a.left_multiplication(i, W.row(j))) for j in range(k)]
    zero = 0
    entries: dict = {}
    for s, mono in enumerate(src):
        for j, mult in Counter(mono).items():
            pos = mono.index(j)
            t = tgt_index[mono[:pos] + mono[pos + 1:]]
            for (c, al), x in lmul[j].items():
                key = (t * h1 + c, s * h0 + al)
                entries[key] = entries.get(key, zero) + mult * x
    return entries


def build_mu(a: FormAlgebra, W, r: int, i: int) -> ExactMatrix:
    """Matrix of ``mu_i: Sym^{r-i} W (x) H^i -> Sym^{r-i-1} W (x) H^{i+1}``."""
    a.require_valid()
    W = _as_basis(W, a.field)
    if W.ncols != a.q:
        raise ValueError(f"W has {W.ncols} columns, expected q = {a.q}")
    if rank(W) != W.nrows:
        raise RankDeficientError(f"W has rank {rank(W)} < {W.nrows}")
    if not 0 <= i < min(r, a.d):
        raise ValueError(f"need 0 <= i < min(r, d) = {min(r, a.d)}, got i={i}")
    if i + 1 > a.top:
        raise DegreeUnavailable(f"mu_{i} needs H^{i + 1}; algebra stops at degree {a.top}")
    k = W.nrows
    return ExactMatrix.from_sparse(a.field, term_dim(a, k, r, i + 1), term_dim(a, k, r, i),
                                   _mu_entries(a, W, r, i))


@dataclass(frozen=True)
class ComplexInstance:
    r: int
    n: int
    W: ExactMatrix
    mus: tuple[ExactMatrix, ...]
    dims: tuple[int, ...]
    truncated: bool = False
    algebra_name: str = ""

    @property
    def k(self) -> int:
        return self.W.nrows


def build_complex(a: FormAlgebra, W, r: int) -> ComplexInstance:
    """All differentials of ``C_{r,W}`` with ``n = min(r, d)``.

    On algebras that stop below degree ``min(r, d)`` the complex is cut at the
    top available degree and flagged as truncated.
    """
    if r < 1:
        raise ValueError("r must be positive")
    W = _as_basis(W, a.field)
    n_full = min(r, a.d)
    n = min(n_full, a.top)
    mus = tuple(build_mu(a, W, r, i) for i in range(n))
    for i in range(n - 1):
        if not (mus[i + 1] @ mus[i]).is_zero():
            raise ComplexPropertyError(
                f"mu_{i + 1} . mu_{i} != 0 for r={r} on {a.name or 'validated algebra'}")
    dims = tuple(term_dim(a, W.nrows, r, i) for i in range(n + 1))
    return ComplexInstance(r, n, W, mus, dims, truncated=n < n_full, algebra_name=a.name)


@dataclass(frozen=True)
class ExactnessReport:
    injective_at_0: bool
    exact_middle_degrees: tuple[bool, ...]
    coker_dim: int
    ranks: tuple[int, ...] = ()

    @property
    def exact(self) -> bool:
        return self.injective_at_0 and all(self.exact_middle_degrees)


def exactness_at(c: ComplexInstance) -> ExactnessReport:
    ranks = tuple(rank(m) for m in c.mus)
    injective = ranks[0] == c.dims[0]
    middle = tuple(ranks[i] + ranks[i - 1] == c.dims[i] for i in range(1, c.n))
    coker = c.dims[c.n] - ranks[-1]
    return ExactnessReport(injective, middle, coker, ranks)


def sample_seed(seed: int, index: int) -> int:
    digest = hashlib.sha256(f"grassbgg-sample:{seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class SampleReport:
    n_exact: int
    n_total: int
    first_failure_W: ExactMatrix | None = None
    first_failure_index: int | None = None
    reports: tuple[ExactnessReport, ...] = dc_field(default=(), repr=False)

    @property
    def all_exact(self) -> bool:
        return self.n_exact == self.n_total


def generic_exactness_sample(a: FormAlgebra, k: int, r: int = 2, samples: int = 50,
                             seed: int = 0, dim: int | None = None) -> SampleReport:
    """Evaluate exactness at ``samples`` seeded random points of ``G_{2k}``.

    ``dim`` overrides the subspace dimension (default ``2k``) for exploring
    other Grassmannians.
    """
    dim = 2 * k if dim is None else dim
    if not 1 <= dim <= a.q:
        raise ValueError(f"subspace dimension {dim} outside 1..q={a.q}")
    n_exact = 0
    first_W = first_idx = None
    reports = []
    for idx in range(samples):
        W = random_subspace(a.q, dim, sample_seed(seed, idx), a.field)
        rep = exactness_at(build_complex(a, W, r))
        reports.append(rep)
        if rep.exact:
            n_exact += 1
        elif first_W is None:
            first_W, first_idx = W, idx
    return SampleReport(n_exact, samples, first_W, first_idx, tuple(reports))


def wedge_complex(a: FormAlgebra, w: Sequence, n: int) -> list[ExactMatrix]:
    """Maps ``H^i -> H^{i+1}``, ``alpha -> w ^ alpha``, for ``0 <= i < n``."""
    return [ExactMatrix.from_sparse(a.field, a.h[i + 1], a.h[i], a.left_multiplication(i, w))
            for i in range(n)]


def derivative_complex_check(a: FormAlgebra, w: Sequence, r: int) -> bool:
    """Compare ``C_{r,<w>}`` with the wedge-by-``w`` complex step by step.

    Both have the same terms (``Sym^{r-i}<w>`` is spanned by ``w^{r-i}``) and
    the differentials differ by the scalars ``r - i``; the check compares
    images and kernels rather than matrices.
    """
    w = [a.field(x) for x in w]
    if not any(w):
        raise ValueError("w must be non-zero")
    c = build_complex(a, [w], r)
    direct = wedge_complex(a, w, c.n)
    for mu, dw in zip(c.mus, direct):
        if mu.shape != dw.shape:
            return False
        if not column_span_equal(mu, dw):
            return False
        if not column_span_equal(kernel_matrix(mu), kernel_matrix(dw)):
            return False
    return True
