"""Bivectors: rank, Pfaffians, skew normal form and minimal-rank search.

A bivector ``v = sum_{i<j} A[i][j] e_i ^ e_j`` is stored as its skew matrix
``A``.  Its rank is the matrix rank (always even).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import DegreeUnavailable, FormAlgebra, psi
from .field import QQ, Field, GF, PrimeField, ScalarKindError
from .matrix import ExactMatrix, rank
from .multilinear import ExteriorElement, is_decomposable, wedge, wedge_all

INFINITE_RANK = math.inf
DEFAULT_BUDGET = 10**7
CONSENSUS_PRIMES = (5, 7, 11)


class BudgetExceeded(RuntimeError):
    pass


class BadReduction(ValueError):
    """The subspace does not reduce to a subspace of the same dimension mod p."""


@dataclass(frozen=True, eq=False)
class Bivector:
    matrix: ExactMatrix

    def __post_init__(self):
        m = self.matrix
        if m.nrows != m.ncols:
            raise ValueError("bivector matrix must be square")
        entries = m.nonzero_entries()
        for (i, j), x in entries.items():
            if i == j:
                raise ValueError(f"non-zero diagonal entry at {i}")
            if entries.get((j, i), m.field.zero) != -x:
                raise ValueError(f"matrix is not skew at ({i}, {j})")

    @property
    def q(self) -> int:
        return self.matrix.nrows

    @property
    def field(self) -> Field:
        return self.matrix.field

    @classmethod
    def from_exterior(cls, x: ExteriorElement) -> "Bivector":
        if x.degree != 2:
            raise ValueError("bivectors have degree 2")
        entries = {}
        for (i, j), c in x.items():
            entries[i, j] = c
            entries[j, i] = -c
        return cls(ExactMatrix.from_sparse(x.field, x.dim, x.dim, entries))

    @classmethod
    def from_coordinates(cls, coords: Sequence, q: int, field: Field = QQ) -> "Bivector":
        return cls.from_exterior(ExteriorElement.from_vector(coords, 2, field, dim=q))

    @classmethod
    def from_terms(cls, q: int, terms: dict, field: Field = QQ) -> "Bivector":
        """``{(i, j): c}`` meaning ``sum c e_i ^ e_j`` (any index order)."""
        out = ExteriorElement(2, q, {}, field)
        for (i, j), c in terms.items():
            if i == j:
                continue
            e = ExteriorElement.basis_element(q, tuple(sorted((i, j))), field).scale(c)
            out = out + (e if i < j else -e)
        return cls.from_exterior(out)

    def to_exterior(self) -> ExteriorElement:
        m = self.matrix
        coeffs = {(i, j): x for (i, j), x in m.nonzero_entries().items() if i < j}
        return ExteriorElement(2, self.q, coeffs, self.field)

    def coordinates(self) -> list:
        return self.to_exterior().to_vector()

    def __add__(self, other: "Bivector") -> "Bivector":
        return Bivector(self.matrix + other.matrix)

    def __sub__(self, other: "Bivector") -> "Bivector":
        return Bivector(self.matrix - other.matrix)

    def scale(self, c) -> "Bivector":
        return Bivector(self.matrix.scale(c))

    def change_field(self, field: Field) -> "Bivector":
        return Bivector(self.matrix.change_field(field))

    def __eq__(self, other):
        if not isinstance(other, Bivector):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"Bivector({self.to_exterior()!r})"


def bivector_rank(v: Bivector) -> int:
    return rank(v.matrix)


def _pfaffian_rows(A, idx: tuple[int, ...], one, memo: dict):
    if not idx:
        return one
    hit = memo.get(idx)
    if hit is not None:
        return hit
    zero = one * 0
    total = zero
    i = idx[0]
    for t in range(1, len(idx)):
        a = A[i][idx[t]]
        if not a:
            continue
        rest = idx[1:t] + idx[t + 1:]
        term = a * _pfaffian_rows(A, rest, one, memo)
        total = total + term if t % 2 == 1 else total - term
    memo[idx] = total
    return total


def pfaffian_entries(A, one, indices: Sequence[int] | None = None, memo: dict | None = None):
    """Pfaffian of the principal submatrix of ``A`` on ``indices``.

    ``A`` is any square array supporting ``A[i][j]`` whose entries form a
    commutative ring with unit ``one`` (field scalars, sympy polynomials...).
    Expansion is along the first row.
    """
    idx = tuple(range(len(A))) if indices is None else tuple(indices)
    if len(idx) % 2:
        return one * 0
    return _pfaffian_rows(A, idx, one, {} if memo is None else memo)


def _check_skew(m: ExactMatrix):
    if m.nrows != m.ncols:
        raise ValueError("Pfaffian of a non-square matrix")
    if not (m + m.T).is_zero():
        raise ValueError("Pfaffian of a non-skew matrix")
    if any(m[i, i] for i in range(m.nrows)):
        raise ValueError("Pfaffian of a matrix with non-zero diagonal")


def pfaffian(m: ExactMatrix):
    if isinstance(m, Bivector):
        m = m.matrix
    _check_skew(m)
    if m.nrows % 2:
        raise ValueError("Pfaffian of an odd-dimensional matrix")
    return pfaffian_entries(m.rows(), m.field.one)


@dataclass(frozen=True)
class SkewNormalForm:
    """``v = sum_i vectors[2i] ^ vectors[2i+1]`` with independent vectors."""

    vectors: tuple[tuple, ...]
    rank: int

    @property
    def pairs(self) -> list[tuple[tuple, tuple]]:
        return [(self.vectors[2 * i], self.vectors[2 * i + 1]) for i in range(len(self.vectors) // 2)]

    def recompose(self, q: int, field: Field) -> ExteriorElement:
        out = ExteriorElement(2, q, {}, field)
        for x, y in self.pairs:
            out = out + wedge_all([x, y], q, field)
        return out


def skew_normal_form(v: Bivector) -> SkewNormalForm:
    """Symplectic elimination: peel off ``-(row_j / a) ^ row_i`` at each pivot.

    With ``a = A[i][j] != 0``, ``A - (row_i row_j^T - row_j row_i^T) / a`` has
    rows ``i`` and ``j`` equal to zero, so the rank drops by two.
    """
    field = v.field
    q = v.q
    A = v.matrix.rows()
    vectors = []
    while True:
        pivot = next(((i, j) for i in range(q) for j in range(i + 1, q) if A[i][j]), None)
        if pivot is None:
            break
        i, j = pivot
        a = A[i][j]
        u, w = list(A[i]), list(A[j])
        vectors.append(tuple(-x / a for x in w))
        vectors.append(tuple(u))
        A = [[A[s][t] - (u[s] * w[t] - w[s] * u[t]) / a for t in range(q)] for s in range(q)]
    nf = SkewNormalForm(tuple(vectors), len(vectors))
    if nf.recompose(q, field) != v.to_exterior():
        raise AssertionError("skew normal form does not recompose the input")
    if vectors and rank(ExactMatrix.from_rows(vectors, field, ncols=q)) != len(vectors):
        raise AssertionError("skew normal form vectors are dependent")
    return nf


def sub_pfaffians_vanish(v: Bivector, size: int) -> bool:
    """True iff every principal ``size x size`` sub-Pfaffian of ``A`` is zero."""
    A = v.matrix.rows()
    one = v.field.one
    memo: dict = {}
    for idx in itertools.combinations(range(v.q), size):
        if pfaffian_entries(A, one, idx, memo):
            return False
    return True


def secant_membership(v: Bivector, k: int, cross_check: bool | None = None) -> bool:
    """Is ``[v]`` on the cone over the k-th secant variety of G(2, V)?

    That is ``rank v <= 2k``.  For ``q <= 8`` the answer is also computed from
    the ``(2k+2)``-sub-Pfaffians and the two routes must agree.
    """
    by_rank = bivector_rank(v) <= 2 * k
    if cross_check is None:
        cross_check = v.q <= 8
    if cross_check:
        by_pf = sub_pfaffians_vanish(v, 2 * k + 2)
        if by_pf != by_rank:
            raise AssertionError(f"rank and sub-Pfaffian routes disagree for k={k}")
    return by_rank


# minimal rank search ------------------------------------------------------


@dataclass(frozen=True)
class ExhaustiveFp:
    p: int
    budget: int = DEFAULT_BUDGET

    def __str__(self):
        return f"fp:{self.p}"


@dataclass(frozen=True)
class Consensus:
    primes: tuple[int, ...] = CONSENSUS_PRIMES
    budget: int = DEFAULT_BUDGET

    def __str__(self):
        return "fp:" + ",".join(map(str, self.primes))


@dataclass(frozen=True)
class RandomizedQ:
    samples: int = 200
    seed: int = 0
    descent_rounds: int = 8

    def __str__(self):
        return f"rand:{self.samples}"


def parse_mode(text: str, seed: int = 0):
    """``fp:<p>``, ``fp:<p1>,<p2>,...`` or ``rand:<samples>``."""
    kind, _, arg = text.partition(":")
    if kind == "fp":
        primes = tuple(int(x) for x in arg.split(",") if x)
        if not primes:
            raise ValueError("fp mode needs at least one prime")
        return ExhaustiveFp(primes[0]) if len(primes) == 1 else Consensus(primes)
    if kind == "rand":
        return RandomizedQ(int(arg) if arg else 200, seed)
    raise ValueError(f"unknown min-rank mode {text!r}")


@dataclass(frozen=True)
class RankCertificate:
    rank: float                      # even int, or INFINITE_RANK for K = 0
    method: str                      # exhaustive-Fp | consensus-Fp | randomized-Q
    witness: Bivector | None = None
    witness_coefficients: tuple | None = None
    field: Field = QQ
    params: dict = dc_field(default_factory=dict)
    # an F_p minimum says nothing certain about rank over C
    char0_caveat: bool = False
    per_prime: dict = dc_field(default_factory=dict)
    upper_bound_only: bool = False

    def hypothesis_holds(self, k: int) -> bool:
        """Every non-zero element has rank > 2k (as far as this certificate knows)."""
        return self.rank > 2 * k

    def check(self, K: Sequence[Bivector]) -> bool:
        """Re-check the witness: its rank and its membership in span K."""
        if self.witness is None:
            return self.rank == INFINITE_RANK and not K
        w = self.witness
        K = _as_bivectors(K)
        if bivector_rank(w) != self.rank:
            return False
        basis = [b.change_field(w.field).coordinates() for b in K]
        m = ExactMatrix.from_rows(basis, w.field, ncols=len(w.coordinates()))
        return rank(m.vstack(ExactMatrix.from_rows([w.coordinates()], w.field))) == rank(m)

    def summary(self) -> str:
        r = "inf" if self.rank == INFINITE_RANK else str(int(self.rank))
        return f"{r} ({self.method})"


def _as_bivectors(K) -> list[Bivector]:
    out = []
    for v in K:
        if isinstance(v, Bivector):
            out.append(v)
        elif isinstance(v, ExteriorElement):
            out.append(Bivector.from_exterior(v))
        else:
            raise TypeError(f"expected a Bivector, got {type(v).__name__}")
    return out


def _integral_coordinates(v: Bivector) -> list[int]:
    coords = v.coordinates()
    if isinstance(v.field, PrimeField):
        return [int(x) for x in coords]
    den = math.lcm(*(Fraction(x).denominator for x in coords)) if coords else 1
    return [int(Fraction(x) * den) for x in coords]


def _reduce_mod_p(K: list[Bivector], p: int) -> np.ndarray:
    """Rows of integer Plucker coordinates mod p; checks the dimension is kept."""
    rows = []
    for v in K:
        if isinstance(v.field, PrimeField):
            if v.field.p != p:
                raise ScalarKindError(f"subspace over F_{v.field.p} searched over F_{p}")
        rows.append([x % p for x in _integral_coordinates(v)])
    if rows and rank(ExactMatrix.from_rows(rows, GF(p))) != len(rows):
        raise BadReduction(f"subspace drops dimension mod {p}")
    return np.array(rows, dtype=np.int64).reshape(len(rows), -1)


def _batch_rank_mod_p(A: np.ndarray, p: int, inv: np.ndarray) -> np.ndarray:
    """Ranks of a stack of matrices ``A[b]`` over F_p (entries in ``[0, p)``)."""
    A = A.copy()
    N, n, m = A.shape
    ranks = np.zeros(N, dtype=np.int64)
    rows = np.arange(n)
    for col in range(m):
        eligible = (A[:, :, col] != 0) & (rows[None, :] >= ranks[:, None])
        has = eligible.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        piv = eligible[b].argmax(axis=1)
        r = ranks[b]
        prow = A[b, piv].copy()
        A[b, piv] = A[b, r]
        prow = (prow * inv[prow[:, col]][:, None]) % p
        A[b, r] = prow
        below = rows[None, :] > r[:, None]
        factors = np.where(below, A[b, :, col], 0)
        A[b] = (A[b] - factors[:, :, None] * prow[:, None, :]) % p
        ranks[b] += 1
    return ranks


def _skew_from_coords(coords: np.ndarray, q: int) -> np.ndarray:
    """Stack of skew q x q matrices from Plucker coordinate rows, mod nothing."""
    N = coords.shape[0]
    out = np.zeros((N, q, q), dtype=np.int64)
    iu = np.triu_indices(q, 1)
    out[:, iu[0], iu[1]] = coords
    out[:, iu[1], iu[0]] = -coords
    return out


def _projective_points(m: int, p: int, chunk: int):
    """Normalised coefficient tuples (first non-zero entry 1), lexicographic order."""
    for lead in range(m - 1, -1, -1):
        tail = m - 1 - lead
        total = p ** tail
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            block = np.zeros((len(idx), m), dtype=np.int64)
            block[:, lead] = 1
            for pos in range(m - 1, lead, -1):
                block[:, pos] = idx % p
                idx //= p
            yield block


def _exhaustive(K: list[Bivector], p: int, budget: int, chunk: int = 4096) -> RankCertificate:
    q = K[0].q if K else 0
    if not K:
        return RankCertificate(INFINITE_RANK, "exhaustive-Fp", field=GF(p),
                               params={"p": p, "points": 0}, char0_caveat=True)
    m = len(K)
    points = (p**m - 1) // (p - 1)
    if points > budget:
        raise BudgetExceeded(f"{points} projective points over F_{p} exceed budget {budget}")
    basis = _reduce_mod_p(K, p)
    inv = np.zeros(p, dtype=np.int64)
    inv[1:] = [pow(x, p - 2, p) for x in range(1, p)]
    best = None
    best_coeffs = None
    for block in _projective_points(m, p, chunk):
        coords = (block @ basis) % p
        mats = _skew_from_coords(coords, q) % p
        ranks = _batch_rank_mod_p(mats, p, inv)
        t = int(ranks.argmin())
        if best is None or ranks[t] < best:
            best, best_coeffs = int(ranks[t]), tuple(int(c) for c in block[t])
            if best == 2:
                break
    field = GF(p)
    witness = Bivector.from_coordinates(
        [int(x) for x in (np.array(best_coeffs) @ basis) % p], q, field)
    return RankCertificate(best, "exhaustive-Fp", witness, best_coeffs, field,
                           {"p": p, "points": points}, char0_caveat=True)


def _consensus(K: list[Bivector], primes: Sequence[int], budget: int) -> RankCertificate:
    per_prime = {}
    certs = {}
    for p in primes:
        try:
            certs[p] = _exhaustive(K, p, budget)
            per_prime[p] = certs[p].rank
        except BadReduction:
            per_prime[p] = "bad-reduction"
    if not certs:
        raise BadReduction(f"subspace has bad reduction at every prime in {tuple(primes)}")
    # the conservative (smallest) value wins; agreement is recorded separately
    p_best = min(certs, key=lambda p: (certs[p].rank, p))
    c = certs[p_best]
    values = {cert.rank for cert in certs.values()}
    return RankCertificate(c.rank, "consensus-Fp", c.witness, c.witness_coefficients, c.field,
                           {"primes": tuple(primes), "agree": len(values) == 1,
                            "witness_prime": p_best},
                           char0_caveat=True, per_prime=per_prime)


def _line_descent(v: Bivector, u: Bivector, current: int):
    """Rational points of lower rank on the line ``v + t u``.

    All principal ``current``-sized sub-Pfaffians of ``A_v + t A_u`` are
    polynomials in ``t``; their common rational roots are the candidates.
    """
    import sympy

    t = sympy.Symbol("t")
    one = sympy.Poly(1, t, domain="QQ")
    Av, Au = v.matrix.rows(), u.matrix.rows()
    q = v.q
    A = [[sympy.Poly(Av[i][j] + Au[i][j] * t, t, domain="QQ") for j in range(q)] for i in range(q)]
    g = None
    memo: dict = {}
    for idx in itertools.combinations(range(q), current):
        pf = pfaffian_entries(A, one, idx, memo)
        if pf.is_zero:
            continue
        g = pf if g is None else sympy.gcd(g, pf)
        if g.degree() <= 0:
            return None
    if g is None:
        return None
    best = None
    for root in sorted(sympy.Poly(g, t).ground_roots()):
        if not root.is_rational:
            continue
        cand = v + u.scale(Fraction(int(root.p), int(root.q)))
        r = bivector_rank(cand)
        if 0 < r < current and (best is None or r < best[0]):
            best = (r, cand)
    return best


def _randomized(K: list[Bivector], mode: RandomizedQ) -> RankCertificate:
    if not K:
        return RankCertificate(INFINITE_RANK, "randomized-Q",
                               params={"samples": mode.samples, "seed": mode.seed})
    if any(isinstance(v.field, PrimeField) for v in K):
        raise ScalarKindError("randomized mode searches rational subspaces")
    rng = random.Random(f"minrank:{mode.seed}")
    m = len(K)

    def combo(coeffs):
        out = K[0].scale(coeffs[0])
        for c, v in zip(coeffs[1:], K[1:]):
            out = out + v.scale(c)
        return out

    candidates = [tuple(int(i == j) for j in range(m)) for i in range(m)]
    while len(candidates) < max(mode.samples, m):
        c = tuple(rng.randint(-3, 3) for _ in range(m))
        if any(c):
            candidates.append(c)
    best = None
    for c in candidates[:max(mode.samples, m)]:
        v = combo(c)
        r = bivector_rank(v)
        if best is None or r < best[0]:
            best = (r, v, c)
    r, v, c = best
    for _ in range(mode.descent_rounds if m > 1 else 0):
        if r <= 2:
            break
        u = combo(tuple(rng.randint(-3, 3) for _ in range(m)))
        if bivector_rank(u) == 0:
            continue
        found = _line_descent(v, u, r)
        if found is not None:
            r, v = found
            c = None
    return RankCertificate(r, "randomized-Q", v, c, QQ,
                           {"samples": mode.samples, "seed": mode.seed,
                            "descent_rounds": mode.descent_rounds},
                           upper_bound_only=True)


def min_rank_in_subspace(K: Sequence, mode=None) -> RankCertificate:
    """Smallest rank of a non-zero element of ``span K``.

    ``ExhaustiveFp`` enumerates every projective F_p-point and returns the
    lexicographically first minimiser; ``Consensus`` repeats that over several
    primes; ``RandomizedQ`` gives a rational upper bound with a witness.
    """
    K = _as_bivectors(K)
    if K:
        q = K[0].q
        if any(v.q != q for v in K):
            raise ValueError("bivectors of different ambient dimension")
        fld = K[0].field
        coords = [v.coordinates() for v in K]
        if rank(ExactMatrix.from_rows(coords, fld, ncols=len(coords[0]))) != len(K):
            raise ValueError("subspace basis is linearly dependent")
    if mode is None:
        mode = Consensus()
    if isinstance(mode, str):
        mode = parse_mode(mode)
    if isinstance(mode, ExhaustiveFp):
        return _exhaustive(K, mode.p, mode.budget)
    if isinstance(mode, Consensus):
        return _consensus(K, mode.primes, mode.budget)
    if isinstance(mode, RandomizedQ):
        return _randomized(K, mode)
    raise TypeError(f"unknown mode {mode!r}")


# higher irrational pencil witness -------------------------------------------


def pencil_witness(v: Bivector, a: FormAlgebra) -> ExteriorElement:
    """Decomposable ``(k+1)``-vector in ``ker psi_{k+1}`` from ``v`` in ``ker psi_2``.

    From ``v = v1^v2 + ... + v_{2k-1}^v_{2k}`` the witness is
    ``v1 ^ v3 ^ ... ^ v_{2k-1} ^ v_{2k}``, i.e. ``v`` wedged with the prefix of
    odd-indexed vectors ``v1 ^ v3 ^ ... ^ v_{2k-3}`` (empty for ``k = 1``,
    just ``v1`` for ``k = 2``).
    """
    if v.q != a.q:
        raise ValueError("bivector and algebra have different q")
    x = v.change_field(a.field).to_exterior()
    if any(psi(a, 2)(x)):
        raise ValueError("v is not in the kernel of psi_2")
    nf = skew_normal_form(v.change_field(a.field))
    k = nf.rank // 2
    if k == 0:
        raise ValueError("v is zero")
    if k >= a.d:
        raise ValueError(f"rank 2k = {2 * k} needs k < d = {a.d}")
    if k + 1 > a.top:
        raise DegreeUnavailable(f"psi_{k + 1} is not available (top degree {a.top})")
    vecs = nf.vectors
    odd = [vecs[2 * i] for i in range(k - 1)]
    witness = wedge_all(odd + [vecs[2 * k - 2], vecs[2 * k - 1]], a.q, a.field)
    via_prefix = wedge(x, wedge_all(odd, a.q, a.field))
    if witness != via_prefix:
        raise AssertionError("witness differs from v ^ prefix")
    if not is_decomposable(witness):
        raise AssertionError("witness is not decomposable")
    if any(psi(a, k + 1)(witness)):
        raise AssertionError("witness is not in the kernel of psi_{k+1}")
    return witness
