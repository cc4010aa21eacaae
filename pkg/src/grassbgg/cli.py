"""Command-line front end.

Every subcommand prints ``[block]`` headers followed by ``key = value`` lines
in a fixed order.  Exit codes: 0 success, 1 input error, 2 a bound violated
(or a generic-exactness failure) under a certified rank hypothesis.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .algebra import (DegreeUnavailable, InvalidAlgebraError, MalformedAlgebraError,
                      fixture_abelian, fixture_product_of_curves, fixture_quotient,
                      psi, psi_kernel, validate)
from .algebra_io import (AlgebraFormatError, format_bivector, load_algebra, parse_basis,
                         parse_bivector, serialize_algebra)
from .bgg import (ComplexPropertyError, RankDeficientError, build_complex, exactness_at,
                  generic_exactness_sample)
from .bivector import Bivector, BudgetExceeded, BadReduction, min_rank_in_subspace, parse_mode
from .bounds import (bound_rhs, certificate_block, evaluate_bounds, min_rank_certificate,
                     render_kv, render_text, verification_blocks, verify)
from .field import format_scalar
from .matrix import rank

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2


def _bool(x: bool) -> str:
    return str(bool(x)).lower()


def _emit(blocks, fmt: str = "kv") -> None:
    sys.stdout.write(render_text(blocks) if fmt == "text" else render_kv(blocks))


def cmd_validate(args) -> int:
    a = load_algebra(args.file)
    rep = validate(a)
    rows = [("source", Path(args.file).name), ("d", str(a.d)), ("q", str(a.q)),
            ("h", " ".join(map(str, a.h))), ("valid", _bool(rep.valid))]
    if not rep.valid:
        rows.append(("violation", rep.first_violation))
    _emit([("validate", rows)])
    return EXIT_OK if rep.valid else EXIT_INPUT


def cmd_psi(args) -> int:
    a = load_algebra(args.file)
    m = psi(a, args.n).matrix
    ker = psi_kernel(a, args.n)
    rows = [("n", str(args.n)), ("rows", str(m.nrows)), ("cols", str(m.ncols)),
            ("rank", str(rank(m))), ("kernel_dim", str(len(ker)))]
    rows += [(f"row.{i}", " ".join(format_scalar(x) for x in r)) for i, r in enumerate(m.rows())]
    rows += [(f"kernel.{i}", repr(x)) for i, x in enumerate(ker)]
    _emit([("psi", rows)])
    return EXIT_OK


def cmd_minrank(args) -> int:
    a = load_algebra(args.file)
    a.require_valid()
    K = [Bivector.from_exterior(x) for x in psi_kernel(a, 2)]
    mode = parse_mode(args.mode, args.seed) if args.mode else None
    cert = min_rank_in_subspace(K, mode)
    blocks = [("kernel", [("dim_ker_psi2", str(len(K)))] +
               [(f"basis.{i}", format_bivector(v)) for i, v in enumerate(K)]),
              ("minrank", certificate_block(cert) + [("witness_checked", _bool(cert.check(K)))])]
    if args.k is not None:
        blocks.append(("hypothesis", [("k", str(args.k)),
                                      ("min_rank_gt_2k", _bool(cert.hypothesis_holds(args.k))),
                                      ("certified", _bool(not cert.upper_bound_only))]))
    _emit(blocks)
    return EXIT_OK


def _exactness_rows(rep) -> list[tuple[str, str]]:
    return [("injective_at_0", _bool(rep.injective_at_0)),
            ("exact_middle_degrees", " ".join(_bool(x) for x in rep.exact_middle_degrees) or "none"),
            ("coker_dim", str(rep.coker_dim)),
            ("ranks", " ".join(map(str, rep.ranks))),
            ("exact", _bool(rep.exact))]


def cmd_bgg(args) -> int:
    a = load_algebra(args.file)
    if args.at:
        W = parse_basis(Path(args.at).read_text(encoding="utf-8"))
        c = build_complex(a, W, args.r)
        rows = [("r", str(c.r)), ("n", str(c.n)), ("k", str(c.k)),
                ("dims", " ".join(map(str, c.dims))), ("truncated", _bool(c.truncated))]
        _emit([("complex", rows + _exactness_rows(exactness_at(c)))])
        return EXIT_OK
    if args.k is None:
        raise ValueError("bgg needs --k or --at")
    dim = args.dim if args.dim is not None else 2 * args.k
    s = generic_exactness_sample(a, args.k, args.r, args.samples, args.seed, dim=dim)
    rows = [("grassmannian", f"G({dim},{a.q})"), ("r", str(args.r)), ("k", str(args.k)),
            ("samples", str(s.n_total)), ("seed", str(args.seed)),
            ("n_exact", str(s.n_exact)), ("n_total", str(s.n_total)),
            ("first_failure_index", "none" if s.first_failure_index is None
             else str(s.first_failure_index))]
    if s.first_failure_W is not None:
        rows += [(f"first_failure_W.{i}", " ".join(format_scalar(x) for x in r))
                 for i, r in enumerate(s.first_failure_W.rows())]
    if s.reports:
        rows.append(("coker_dims", " ".join(str(r.coker_dim) for r in s.reports)))
    _emit([("sample", rows)])
    return EXIT_OK


def cmd_bounds(args) -> int:
    a = load_algebra(args.file)
    a.require_valid()
    table = bound_rhs(a.q, a.d)
    K, cert, upper = min_rank_certificate(a, args.mode, args.seed)
    rep = evaluate_bounds(a, cert, None, upper, len(K))
    rows = [("q", str(a.q)), ("d", str(a.d)), ("h20", str(rep.h20)),
            ("bound_rhs", str(table.value)), ("branch", table.branch),
            ("maximizing_r", "none" if table.maximizing_r is None else str(table.maximizing_r))]
    rows += [(f"r={lv.r}", f"{lv.bound} {lv.verdict}") for lv in rep.levels]
    rows += [("min_rank", certificate_block(cert)[0][1]), ("aggregate_verdict", rep.aggregate_verdict)]
    _emit([("bounds", rows)], args.format)
    return EXIT_VIOLATION if rep.violated else EXIT_OK


def cmd_verify(args) -> int:
    a = load_algebra(args.file)
    v = verify(a, args.k_max, args.mode, args.seed, args.samples, source=Path(args.file).name)
    _emit(verification_blocks(v), args.format)
    if v.exit_code == EXIT_VIOLATION:
        print(f"error: {v.note()}", file=sys.stderr)
    return v.exit_code


def cmd_fixtures(args) -> int:
    p = args.params
    try:
        if args.name == "abelian":
            (q,) = map(int, p)
            a = fixture_abelian(q)
        elif args.name == "product":
            g1, g2 = map(int, p)
            a = fixture_product_of_curves(g1, g2)
        else:
            q, d, *bivs = p
            q, d = int(q), int(d)
            a = fixture_quotient(q, d, [parse_bivector(b, q) for b in bivs], depth=args.depth)
    except ValueError as exc:
        raise ValueError(f"bad parameters for fixture {args.name!r}: {exc}") from None
    sys.stdout.write(serialize_algebra(a))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grassbgg",
                                 description="Exact Grassmannian BGG complexes and h^{2,0} bounds.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an algebra file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("psi", help="matrix and kernel of psi_n")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("minrank", help="minimal rank in ker psi_2")
    p.add_argument("file")
    p.add_argument("--mode", help="fp:<p>, fp:<p1>,<p2>,... or rand:<samples> (default fp:5,7,11)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_minrank)

    p = sub.add_parser("bgg", help="exactness of C_{r,W}, sampled or at a given W")
    p.add_argument("file")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, help="sample W on G_{2k}")
    p.add_argument("--dim", type=int, help="override the dimension of W (default 2k)")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--at", help="file with a basis of W, one row per line")
    p.set_defaults(func=cmd_bgg)

    p = sub.add_parser("bounds", help="bound table against h^{2,0}")
    p.add_argument("file")
    p.add_argument("--mode")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("kv", "text"), default="kv")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="certificate, bounds and exactness report")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--mode")
    p.add_argument("--k-max", type=int)
    p.add_argument("--format", choices=("kv", "text"), default="kv")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fixtures", help="print a fixture algebra file",
                       description="abelian <q> | product <g1> <g2> | quotient <q> <d> [bivector ...]")
    p.add_argument("name", choices=("abelian", "product", "quotient"))
    p.add_argument("params", nargs="*")
    p.add_argument("--depth", type=int, default=2, help="quotient only: highest stored degree")
    p.set_defaults(func=cmd_fixtures)
    return ap


INPUT_ERRORS = (AlgebraFormatError, MalformedAlgebraError, InvalidAlgebraError, DegreeUnavailable,
                RankDeficientError, BudgetExceeded, BadReduction, OSError, ValueError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ComplexPropertyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
