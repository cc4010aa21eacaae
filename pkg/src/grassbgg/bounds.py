"""Lower bounds for h^{2,0} and the end-to-end verification report.

For ``1 <= r <= min(floor(q/2), d-1)`` the bound at level ``r`` is
``2rq - C(2r+1, 2)``; it is justified once every non-zero element of
``ker psi_2`` has rank ``> 2r``.  The aggregate bound is the maximum over
that range, which has the closed form :func:`bound_rhs`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb

from .algebra import DegreeUnavailable, FormAlgebra, psi_kernel
from .algebra_io import format_bivector
from .bgg import SampleReport, generic_exactness_sample
from .bivector import (INFINITE_RANK, BadReduction, Bivector, BudgetExceeded, Consensus,
                       RandomizedQ, RankCertificate, min_rank_in_subspace, parse_mode)

HOLDS = "holds"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"


def level_bound(q: int, r: int) -> int:
    return 2 * r * q - comb(2 * r + 1, 2)


def admissible_levels(q: int, d: int) -> range:
    return range(1, min(q // 2, d - 1) + 1)


@dataclass(frozen=True)
class BoundTable:
    value: int
    maximizing_r: int | None
    per_r: dict[int, int]
    branch: str


def bound_rhs(q: int, d: int) -> BoundTable:
    """Closed-form aggregate bound with the per-level table it maximises.

    ``C(q, 2)`` when ``q <= 2d - 1`` (attained at ``r = floor(q/2)``), else
    ``2(d-1)q - C(2d-1, 2)`` (attained at ``r = d - 1``).
    """
    if q < 1 or d < 2:
        raise ValueError(f"need q >= 1 and d >= 2, got q={q}, d={d}")
    per_r = {r: level_bound(q, r) for r in admissible_levels(q, d)}
    if q <= 2 * d - 1:
        value, branch, r_star = comb(q, 2), "q<=2d-1", q // 2
    else:
        value, branch, r_star = 2 * (d - 1) * q - comb(2 * d - 1, 2), "q>=2d", d - 1
    return BoundTable(value, r_star if per_r else None, per_r, branch)


@dataclass(frozen=True)
class LevelVerdict:
    r: int
    bound: int
    hypothesis: bool
    verdict: str


@dataclass(frozen=True)
class BoundReport:
    q: int
    d: int
    h20: int
    levels: tuple[LevelVerdict, ...]
    aggregate: int
    aggregate_branch: str
    aggregate_verdict: str
    certificate: RankCertificate
    rational_upper: RankCertificate | None = None
    kernel_dim: int = 0

    @property
    def violated(self) -> bool:
        return self.aggregate_verdict == VIOLATED or any(l.verdict == VIOLATED for l in self.levels)

    @property
    def first_failing_level(self) -> int | None:
        return next((l.r for l in self.levels if not l.hypothesis), None)


def _verdict(applicable: bool, h20: int, bound: int) -> str:
    if not applicable:
        return NOT_APPLICABLE
    return HOLDS if h20 >= bound else VIOLATED


def min_rank_certificate(a: FormAlgebra, mode=None, seed: int = 0):
    """Certificate for ``ker psi_2`` plus an independent rational upper bound."""
    K = [Bivector.from_exterior(x) for x in psi_kernel(a, 2)]
    if isinstance(mode, str):
        mode = parse_mode(mode, seed)
    if mode is None:
        mode = Consensus()
    try:
        cert = min_rank_in_subspace(K, mode)
    except (BudgetExceeded, BadReduction):
        cert = min_rank_in_subspace(K, RandomizedQ(200, seed))
    upper = cert
    if cert.method != "randomized-Q":
        upper = min_rank_in_subspace(K, RandomizedQ(50, seed))
    return K, cert, upper


def evaluate_bounds(a: FormAlgebra, cert: RankCertificate, k_max: int | None = None,
                    rational_upper: RankCertificate | None = None,
                    kernel_dim: int = 0) -> BoundReport:
    if a.top < 2:
        raise DegreeUnavailable("bounds need h^{2,0}")
    h20 = a.h[2]
    table = bound_rhs(a.q, a.d)
    # an upper bound alone never certifies the hypothesis
    certified = not cert.upper_bound_only or cert.rank == INFINITE_RANK
    levels = []
    for r, b in table.per_r.items():
        hyp = certified and cert.hypothesis_holds(r) and (k_max is None or r <= k_max)
        levels.append(LevelVerdict(r, b, hyp, _verdict(hyp, h20, b)))
    agg_ok = all(l.hypothesis for l in levels)
    return BoundReport(a.q, a.d, h20, tuple(levels), table.value, table.branch,
                       _verdict(agg_ok, h20, table.value), cert, rational_upper, kernel_dim)


@dataclass(frozen=True)
class ExactnessProbe:
    k: int
    hypothesis: bool
    sample: SampleReport

    @property
    def contradicts_exactness(self) -> bool:
        return self.hypothesis and not self.sample.all_exact


@dataclass
class Verification:
    source: str
    algebra: FormAlgebra
    bounds: BoundReport
    probes: list[ExactnessProbe] = dc_field(default_factory=list)
    seed: int = 0
    samples: int = 0

    @property
    def exit_code(self) -> int:
        if self.bounds.violated or any(p.contradicts_exactness for p in self.probes):
            return 2
        return 0

    @property
    def status(self) -> str:
        if self.exit_code == 2:
            return "violation"
        if self.bounds.first_failing_level is not None:
            return "hypothesis-fails"
        return "ok"

    def note(self) -> str:
        b = self.bounds
        if self.exit_code == 2:
            return ("VIOLATION on a certified hypothesis: implementation bug or invalid "
                    "certificate")
        r0 = b.first_failing_level
        tight = [l.r for l in b.levels if l.verdict == HOLDS and l.bound == b.h20]
        if r0 == 1:
            return "hypothesis fails at k=1, bounds not applicable"
        if r0 is not None:
            text = f"hypothesis fails at k={r0}, bounds for r >= {r0} not applicable; r < {r0} hold"
            if tight:
                text += f" (equality at r={tight[0]})"
            return text
        if b.h20 == b.aggregate:
            return f"h20 = bound = {b.aggregate} (equality)"
        return "all bounds hold"


def verify(a: FormAlgebra, k_max: int | None = None, mode=None, seed: int = 0,
           samples: int = 10, source: str = "") -> Verification:
    """Certificate -> admissible levels -> bound table -> comparison with h[2].

    Also samples the r = 2 complex on ``G_{2k}`` for every level ``k``; a
    failure where the rank hypothesis is certified is reported as a
    contradiction.
    """
    a.require_valid()
    K, cert, upper = min_rank_certificate(a, mode, seed)
    report = evaluate_bounds(a, cert, k_max, upper, kernel_dim=len(K))
    probes = []
    top_k = a.q // 2 if k_max is None else min(a.q // 2, k_max)
    if samples > 0:
        for k in range(1, top_k + 1):
            hyp = (not cert.upper_bound_only or cert.rank == INFINITE_RANK) and cert.hypothesis_holds(k)
            probes.append(ExactnessProbe(k, hyp, generic_exactness_sample(a, k, 2, samples, seed)))
    return Verification(source or a.name, a, report, probes, seed, samples)


# rendering -------------------------------------------------------------------


def _rank_text(x) -> str:
    return "inf" if x == INFINITE_RANK else str(int(x))


def certificate_block(cert: RankCertificate) -> list[tuple[str, str]]:
    rows = [("rank", _rank_text(cert.rank)), ("method", cert.method),
            ("field", repr(cert.field))]
    for key in sorted(cert.params):
        val = cert.params[key]
        if isinstance(val, tuple):
            val = " ".join(map(str, val))
        elif isinstance(val, bool):
            val = str(val).lower()
        rows.append((f"param.{key}", str(val)))
    if cert.per_prime:
        rows.append(("per_prime", " ".join(
            f"{p}:{_rank_text(r) if not isinstance(r, str) else r}" for p, r in cert.per_prime.items())))
    rows.append(("witness", format_bivector(cert.witness) if cert.witness is not None else "none"))
    rows.append(("char0_caveat", str(cert.char0_caveat).lower()))
    rows.append(("upper_bound_only", str(cert.upper_bound_only).lower()))
    return rows


def verification_blocks(v: Verification) -> list[tuple[str, list[tuple[str, str]]]]:
    a, b = v.algebra, v.bounds
    blocks = [("algebra", [("source", v.source), ("q", str(a.q)), ("d", str(a.d)),
                           ("h", " ".join(map(str, a.h))), ("h20", str(b.h20))]),
              ("kernel", [("dim_ker_psi2", str(b.kernel_dim))]),
              ("minrank", certificate_block(b.certificate))]
    if b.rational_upper is not None and b.rational_upper is not b.certificate:
        blocks.append(("minrank.rational", certificate_block(b.rational_upper)))
    for lv in b.levels:
        blocks.append((f"bound r={lv.r}", [
            ("value", str(lv.bound)),
            ("hypothesis", f"min rank > {2 * lv.r}: {'holds' if lv.hypothesis else 'fails'}"),
            ("h20", str(b.h20)),
            ("verdict", lv.verdict)]))
    blocks.append(("aggregate", [("value", str(b.aggregate)), ("branch", b.aggregate_branch),
                                ("h20", str(b.h20)), ("verdict", b.aggregate_verdict)]))
    for p in v.probes:
        s = p.sample
        blocks.append((f"exactness k={p.k}", [
            ("grassmannian", f"G({2 * p.k},{a.q})"), ("r", "2"),
            ("samples", str(s.n_total)), ("seed", str(v.seed)),
            ("n_exact", str(s.n_exact)),
            ("hypothesis", "holds" if p.hypothesis else "fails"),
            ("first_failure_index", "none" if s.first_failure_index is None
             else str(s.first_failure_index)),
            ("contradiction", str(p.contradicts_exactness).lower())]))
    blocks.append(("summary", [("status", v.status), ("note", v.note()),
                               ("exit_code", str(v.exit_code))]))
    return blocks


def render_kv(blocks) -> str:
    out = []
    for name, rows in blocks:
        out.append(f"[{name}]")
        out.extend(f"{k} = {val}" for k, val in rows)
        out.append("")
    return "\n".join(out)


def render_text(blocks) -> str:
    out = []
    for name, rows in blocks:
        out.append(name.upper())
        width = max((len(k) for k, _ in rows), default=0)
        out.extend(f"  {k.ljust(width)}  {val}" for k, val in rows)
    return "\n".join(out) + "\n"
