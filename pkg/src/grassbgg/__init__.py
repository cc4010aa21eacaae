"""Exact-arithmetic Grassmannian BGG complexes for algebras of holomorphic forms."""

from __future__ import annotations

from .algebra import (DegreeUnavailable, FormAlgebra, InvalidAlgebraError, MalformedAlgebraError,
                      PsiMap, ValidationReport, fixture_abelian, fixture_product_of_curves,
                      fixture_quotient, psi, psi_kernel, validate)
from .algebra_io import (AlgebraFormatError, format_bivector, load_algebra, parse_algebra,
                         parse_basis, parse_bivector, serialize_algebra)
from .bgg import (ComplexInstance, ComplexPropertyError, ExactnessReport, RankDeficientError,
                  SampleReport, build_complex, build_mu, derivative_complex_check, exactness_at,
                  generic_exactness_sample)
from .bivector import (INFINITE_RANK, BadReduction, Bivector, BudgetExceeded, Consensus,
                       ExhaustiveFp, RandomizedQ, RankCertificate, bivector_rank,
                       min_rank_in_subspace, pencil_witness, pfaffian, secant_membership,
                       skew_normal_form)
from .bounds import BoundReport, BoundTable, bound_rhs, verify
from .field import GF, QQ, Fp, ScalarKindError
from .matrix import ExactMatrix, kernel, random_subspace, rank
from .multilinear import ExteriorElement, SymmetricElement, sym_multiply, wedge

__version__ = "0.1.0"

__all__ = [
    "DegreeUnavailable",
    "FormAlgebra",
    "InvalidAlgebraError",
    "MalformedAlgebraError",
    "PsiMap",
    "ValidationReport",
    "fixture_abelian",
    "fixture_product_of_curves",
    "fixture_quotient",
    "psi",
    "psi_kernel",
    "validate",
    "AlgebraFormatError",
    "format_bivector",
    "load_algebra",
    "parse_algebra",
    "parse_basis",
    "parse_bivector",
    "serialize_algebra",
    "ComplexInstance",
    "ComplexPropertyError",
    "ExactnessReport",
    "RankDeficientError",
    "SampleReport",
    "build_complex",
    "build_mu",
    "derivative_complex_check",
    "exactness_at",
    "generic_exactness_sample",
    "INFINITE_RANK",
    "BadReduction",
    "Bivector",
    "BudgetExceeded",
    "Consensus",
    "ExhaustiveFp",
    "RandomizedQ",
    "RankCertificate",
    "bivector_rank",
    "min_rank_in_subspace",
    "pencil_witness",
    "pfaffian",
    "secant_membership",
    "skew_normal_form",
    "BoundReport",
    "BoundTable",
    "bound_rhs",
    "verify",
    "GF",
    "QQ",
    "Fp",
    "ScalarKindError",
    "ExactMatrix",
    "kernel",
    "random_subspace",
    "rank",
    "ExteriorElement",
    "SymmetricElement",
    "sym_multiply",
    "wedge",
]
