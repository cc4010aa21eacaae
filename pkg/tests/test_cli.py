from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest

from grassbgg.algebra import fixture_abelian, fixture_product_of_curves, fixture_quotient
from grassbgg.algebra_io import parse_algebra, parse_bivector
from grassbgg.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def kv(text: str) -> dict:
    out, block = {}, None
    for line in text.splitlines():
        if line.startswith("["):
            block = line.strip("[]")
        elif " = " in line:
            k, v = line.split(" = ", 1)
            out[f"{block}.{k}"] = v
    return out


@pytest.mark.parametrize("name,expected", [
    (["abelian", "6"], fixture_abelian(6)),
    (["product", "2", "2"], fixture_product_of_curves(2, 2)),
    (["quotient", "4", "3", "e0^e1+e2^e3"],
     fixture_quotient(4, 3, [parse_bivector("e0^e1+e2^e3", 4)])),
])
def test_fixtures_round_trip(capsys, name, expected):
    code, out, _ = run(capsys, "fixtures", *name)
    assert code == 0 and parse_algebra(out) == expected


def test_fixture_files_match_golden(capsys):
    for args, fname in [(["abelian", "6"], "abelian6.alg"), (["product", "2", "2"], "product22.alg"),
                        (["quotient", "4", "3", "e0^e1+e2^e3"], "quotient4.alg")]:
        _, out, _ = run(capsys, "fixtures", *args)
        assert out == (GOLDEN / fname).read_text()


@pytest.mark.parametrize("alg,golden", [("abelian6.alg", "verify_abelian6.txt"),
                                        ("product22.alg", "verify_product22.txt"),
                                        ("quotient4.alg", "verify_quotient4.txt")])
def test_verify_golden(capsys, alg, golden):
    code, out, _ = run(capsys, "verify", GOLDEN / alg)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_verify_values(capsys):
    _, out, _ = run(capsys, "verify", GOLDEN / "abelian6.alg")
    r = kv(out)
    assert r["aggregate.value"] == r["algebra.h20"] == "15"
    assert r["minrank.rank"] == "inf" and r["summary.status"] == "ok"
    _, out, _ = run(capsys, "verify", GOLDEN / "product22.alg")
    r = kv(out)
    assert r["summary.note"] == "hypothesis fails at k=1, bounds not applicable"
    assert r["bound r=1.verdict"] == "not-applicable"


def test_bgg_probe_golden(capsys):
    code, out, _ = run(capsys, "bgg", GOLDEN / "product22.alg", "--r", 2, "--at", GOLDEN / "V1.basis")
    assert code == 0 and out == (GOLDEN / "bgg_product22_V1.txt").read_text()
    assert kv(out)["complex.exact_middle_degrees"] == "false"


def test_bgg_sampling(capsys):
    code, out, _ = run(capsys, "bgg", GOLDEN / "abelian6.alg", "--r", 2, "--k", 2, "--samples", 4)
    r = kv(out)
    assert code == 0 and r["sample.n_exact"] == "4" and r["sample.coker_dims"] == "1 1 1 1"


def test_validate_and_psi(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", GOLDEN / "product22.alg")
    assert code == 0 and kv(out)["validate.valid"] == "true"
    code, out, _ = run(capsys, "psi", GOLDEN / "product22.alg", "--n", 2)
    r = kv(out)
    assert (r["psi.rank"], r["psi.kernel_dim"]) == ("4", "2")
    bad = tmp_path / "bad.alg"
    bad.write_text((GOLDEN / "abelian6.alg").read_text().replace("v0 * b1 -> 1*b0", "v0 * b1 -> -1*b0"))
    code, out, _ = run(capsys, "validate", bad)
    assert code == 1 and "anticommutativity" in kv(out)["validate.violation"]
    code, _, err = run(capsys, "verify", bad)
    assert code == 1 and "anticommutativity" in err


def test_minrank(capsys):
    code, out, _ = run(capsys, "minrank", GOLDEN / "quotient4.alg", "--k", 1)
    r = kv(out)
    assert r["minrank.rank"] == "4" and r["hypothesis.min_rank_gt_2k"] == "true"
    assert r["minrank.char0_caveat"] == "true" and r["minrank.witness_checked"] == "true"
    code, out, _ = run(capsys, "minrank", GOLDEN / "product22.alg", "--mode", "rand:10", "--seed", 2)
    assert kv(out)["minrank.method"] == "randomized-Q"


def test_bounds_command(capsys):
    code, out, _ = run(capsys, "bounds", GOLDEN / "quotient4.alg")
    r = kv(out)
    assert code == 0 and r["bounds.r=1"] == "5 holds" and r["bounds.bound_rhs"] == "6"


def test_violation_exit_code(capsys, tmp_path):
    # Pf(a v + b u) = a^2 + b^2: no rank-2 point over F_7, F_11 or Q, but one
    # over F_5 (and over C).  Trusting only 7 and 11 gives a bogus certificate.
    alg = tmp_path / "aniso.alg"
    main(["fixtures", "quotient", "4", "2", "e0^e1+e2^e3", "e0^e2-e1^e3"])
    alg.write_text(capsys.readouterr().out)
    code, out, err = run(capsys, "verify", alg, "--mode", "fp:7,11", "--samples", 2)
    r = kv(out)
    assert code == 2 and "VIOLATION" in err
    assert r["minrank.rank"] == "4" and r["bound r=1.verdict"] == "violated"
    code, out, _ = run(capsys, "verify", alg, "--samples", 2)
    r = kv(out)
    assert code == 0 and r["minrank.per_prime"] == "5:2 7:4 11:4"
    assert r["minrank.param.agree"] == "false"


def test_input_errors(capsys, tmp_path):
    missing = tmp_path / "nope.alg"
    code, _, err = run(capsys, "validate", missing)
    assert code == 1 and err.startswith("error:")
    bad = tmp_path / "bad.alg"
    bad.write_text("formalgebra v1\nd 2\nq 2\nh 1 2 1\nwhat 1\n")
    code, _, err = run(capsys, "verify", bad)
    assert code == 1 and "unknown directive" in err
    code, _, err = run(capsys, "fixtures", "quotient", "4", "2", "e0^e1", "e0^e1")
    assert code == 1
    code, _, err = run(capsys, "bgg", GOLDEN / "abelian6.alg", "--r", 2)
    assert code == 1


def test_text_format(capsys):
    code, out, _ = run(capsys, "verify", GOLDEN / "abelian6.alg", "--format", "text", "--samples", 1)
    assert code == 0 and out.startswith("ALGEBRA\n") and "SUMMARY" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "grassbgg", "verify", str(GOLDEN / "abelian6.alg")],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout == (GOLDEN / "verify_abelian6.txt").read_text()
