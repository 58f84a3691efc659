"""Acceptance gate: one test per top-level criterion.

Every check here is exact (rational arithmetic, equality on sound
windows); the only tolerances are wall-clock budgets on the heavier
suites.  Each test prints a single PASS line on success, so a verbose
run reads as a ten-line scorecard.
"""

import json
import time

import pytest
from gmpy2 import mpq

from superyang import cli
from superyang.gauss import (
    currents_for,
    gauss_decompose,
    gauss_decompose_rational,
    omul_rat,
    rational_generator_entries,
    reconstruction_residual,
)
from superyang.graded import GradedDims
from superyang.lax import (
    EvalModule,
    LaxOperator,
    check_rll,
    check_rll_wrong_direction,
)
from superyang.hopf import (
    check_antipode,
    check_coassociativity,
    check_counit,
    check_delta_homomorphism,
)
from superyang.rational import RatFun, Poly
from superyang.relations import (
    check_all_relations,
    check_anticommutator_sign_control,
    relation_catalog,
)
from superyang.rmatrix import check_graded_ybe, ybe_component_residual
from superyang.series import (
    TruncSeries,
    compare_on_shared,
    delta_series,
    expand_at_infinity,
    expand_at_zero,
)

DIMS = [GradedDims(1, 1), GradedDims(2, 1), GradedDims(1, 2), GradedDims(2, 2)]
HBARS = [mpq(1, 2), mpq(1), mpq(3, 7)]
H = mpq(1, 2)


def stamp(n, text):
    print(f"criterion {n}: PASS  ({text})")


def all_pass(reports):
    return [r for r in reports if r["status"] != "pass"]


def test_criterion_01_graded_ybe_symbolic():
    t0 = time.monotonic()
    for dims in DIMS:
        for h in HBARS:
            rep = check_graded_ybe(dims, h, mode="symbolic")
            assert rep["status"] == "pass", (dims, h, rep)
    elapsed = time.monotonic() - t0
    assert elapsed < 30.0, elapsed
    stamp(1, f"12 symbolic YBE instances in {elapsed:.1f}s")


def test_criterion_02_rmatrix_laws():
    for dims in DIMS:
        for h in HBARS:
            checks = cli.suite_ybe(dims, h)[1:]  # YBE itself is criterion 1
            assert all_pass(checks) == [], (dims, h, checks)
    stamp(2, "unitarity, PT-symmetry, R(0)=P, weight conservation")


def test_criterion_03_negative_controls():
    # dropping the parity signs must break the component YBE
    for dims in DIMS:
        assert ybe_component_residual(dims, H, signed=False), dims
    # expanding the mixed exchange relation the forbidden way must fail
    mod = EvalModule(GradedDims(1, 1), H, (mpq(3),))
    wrong = check_rll_wrong_direction(mod, order=6)
    assert wrong["status"] == "fail", wrong
    # flipping the sign of the diagonal bracket must fail with a witness
    cs = currents_for(EvalModule(GradedDims(1, 1), H, (mpq(3),)), 8)
    ctl = check_anticommutator_sign_control(cs)
    assert ctl["status"] == "fail" and "witness" in ctl, ctl
    stamp(3, "all three sabotaged variants produce failing witnesses")


def test_criterion_04_rll_all_forms():
    t0 = time.monotonic()
    for m, n in [(1, 1), (2, 1)]:
        dims = GradedDims(m, n)
        for a, b in [(mpq(3), mpq(5)), (mpq(3), mpq(-7))]:
            modA = EvalModule(dims, H, (a,))
            modB = EvalModule(dims, H, (b,))
            results = check_rll(modA, modB, form="all", order=8)
            bad = {k: v for k, v in results.items() if v["status"] != "pass"}
            assert not bad, (m, n, a, b, bad)
    elapsed = time.monotonic() - t0
    assert elapsed < 120.0, elapsed
    stamp(4, f"16 relation forms x 4 module pairs in {elapsed:.1f}s")


def test_criterion_05_gauss_reconstruction_and_schur_oracle():
    for m, n in [(1, 1), (2, 1)]:
        mod = EvalModule(GradedDims(m, n), H, (mpq(3),))
        for sign in "+-":
            lax = LaxOperator(mod, sign, 8)
            assert reconstruction_residual(gauss_decompose(lax), lax) is None
    # independent 2x2 oracle: the only consistent diagonal pivot is the
    # Schur complement of the top-left entry
    mod = EvalModule(GradedDims(1, 1), H, (mpq(3),))
    L = rational_generator_entries(mod)
    gd = gauss_decompose_rational(mod)
    pinv = L[(0, 0)].inv()
    assert gd.k[2] == L[(1, 1)] - omul_rat(omul_rat(L[(1, 0)], pinv), L[(0, 1)])
    stamp(5, "LDU reconstruction exact; pivot matches the Schur complement")


def test_criterion_06_defining_relations():
    for m, n in [(1, 1), (2, 1)]:
        cs = currents_for(EvalModule(GradedDims(m, n), H, (mpq(3),)), 8)
        reports = check_all_relations(cs)
        assert all_pass(reports) == [], (m, n, all_pass(reports))
        names = {r["name"] for r in reports}
        assert "XplusXminus-anticommutator" in names
        if (m, n) == (2, 1):
            assert "XplusXminus-commutator" in names
    # the (1|1) catalog must collapse to exactly the specialized list
    stated = sorted((r.name, r.i, r.j, r.signs)
                    for r in relation_catalog(GradedDims(1, 1))
                    if r.category == "stated")
    assert stated == sorted(
        [("kk-same-sign", 1, 2, ("+",)), ("kk-same-sign", 1, 2, ("-",)),
         ("kk-mixed-even", 1, 1, ()), ("kk-mixed-odd", 2, 2, ()),
         ("kk-cross-ij", 2, 1, ("+",)), ("kk-cross-ij", 2, 1, ("-",))]
        + [("kX-odd-root", 1, j, (a, b))
           for j in (1, 2) for a in "+-" for b in "-+"]
        + [("XX-fermionic", 1, 0, ("+",)), ("XX-fermionic", 1, 0, ("-",)),
           ("XplusXminus-anticommutator", 1, 1, ())])
    stamp(6, "every defining relation holds; (1|1) list matches exactly")


def test_criterion_07_serre_relations():
    t0 = time.monotonic()
    serre_names = {"serre1", "serre2", "serre3", "serre4", "extra-serre"}
    for m, n, want in [(2, 1, {"serre1", "serre3"}),
                       (1, 2, {"serre2", "serre4"}),
                       (2, 2, serre_names)]:
        cs = currents_for(EvalModule(GradedDims(m, n), H, (mpq(3),)), 6)
        cat = [r for r in relation_catalog(cs.module.dims)
               if r.name in serre_names]
        assert want <= {r.name for r in cat}, (m, n)
        reports = check_all_relations(cs, cat)
        assert all_pass(reports) == [], (m, n, all_pass(reports))
    elapsed = time.monotonic() - t0
    assert elapsed < 600.0, elapsed
    stamp(7, f"cubic and quartic Serre identities in {elapsed:.1f}s")


def test_criterion_08_formal_delta():
    for order in (2, 4, 8):
        prod = TruncSeries.from_poly(
            Poly.var("u") - Poly.var("v")).mul(delta_series(order))
        status, witness, _ = compare_on_shared(prod, 0)
        assert status == "pass", (order, witness)
    # the two expansions of 1/(u - a) differ by the full bilateral sum
    for a in (mpq(2), mpq(-3)):
        f = RatFun(Poly.const(1), Poly.var("u") - Poly.const(a))
        diff = expand_at_infinity(f, "u", 4) - expand_at_zero(f, "u", 4)
        lo, hi = diff.windows[0]
        expected = TruncSeries(
            ("u",), ((lo, hi),),
            {(e,): a ** (-1 - e) for e in range(lo, hi + 1)})
        status, witness, _ = compare_on_shared(diff, expected)
        assert status == "pass", (a, witness)
    stamp(8, "(u-v)delta = 0; expansion mismatch is the delta kernel")


def test_criterion_09_hopf_axioms():
    for m, n in [(1, 1), (2, 1)]:
        dims = GradedDims(m, n)
        a, b, c = (EvalModule(dims, H, (mpq(p),)) for p in (3, 5, 7))
        assert all_pass(check_delta_homomorphism(a, b, 6)) == [], (m, n)
        assert all_pass(check_counit(a, 6)) == [], (m, n)
        assert all_pass(check_antipode(a, 6)) == [], (m, n)
        assert all_pass(check_coassociativity(a, b, c, 5)) == [], (m, n)
    stamp(9, "coproduct, counit, antipode, coassociativity")


def test_criterion_10_cli_determinism_and_exit_codes(tmp_path):
    argv = ["all", "--m", "1", "--n", "1", "--hbar", "1/2",
            "--order", "5", "--points", "3,5,7"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(argv + ["--json", str(a)]) == 0
    assert cli.main(argv + ["--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    assert report["summary"]["fail"] == 0
    # exit 1 whenever any check fails
    failing = cli._report({"command": "x"}, [{"check": "x", "status": "fail"}])
    assert cli._emit(failing, str(tmp_path / "fail.json")) == 1
    # exit 2 on usage errors
    with pytest.raises(SystemExit) as exc:
        cli.main(["relations", "--m", "0", "--n", "1",
                  "--a", "3", "--hbar", "1/2"])
    assert exc.value.code == 2
    stamp(10, "byte-identical reports; exit codes 0/1/2")
