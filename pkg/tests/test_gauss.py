"""Triangular decomposition of Lax operators and current assembly."""

import pytest
from gmpy2 import mpq

from superyang.errors import SingularPivot
from superyang.gauss import (
    CurrentSystem,
    build_currents,
    currents_for,
    expand_rational_matrix,
    gauss_decompose,
    gauss_decompose_rational,
    omul,
    omul_rat,
    rational_generator_entries,
    reconstruction_residual,
)
from superyang.graded import GradedDims
from superyang.lax import EvalModule, LaxOperator
from superyang.rational import Poly
from superyang.series import TruncSeries, compare_on_shared

H = mpq(1, 2)


def module(m, n, *points, h=H):
    return EvalModule(GradedDims(m, n), h, tuple(mpq(p) for p in points))


def assert_same_series(a, b, ctx=""):
    status, witness, _ = compare_on_shared(a, b)
    assert status == "pass", (ctx, status, witness)


class TestSchurRecursion:
    def test_two_by_two_pivot_formula(self):
        # size-2 oracle: multiplying out (unit-lower)(diag)(unit-upper)
        # forces k_2 = L_22 - L_21 L_11^{-1} L_12
        mod = module(1, 1, 3)
        L = rational_generator_entries(mod)
        gd = gauss_decompose_rational(mod)
        pinv = L[(0, 0)].inv()
        expected = L[(1, 1)] - omul_rat(omul_rat(L[(1, 0)], pinv), L[(0, 1)])
        assert gd.k[2] == expected
        assert gd.e[(2, 1)] == omul_rat(L[(1, 0)], pinv)
        assert gd.f[(1, 2)] == omul_rat(pinv, L[(0, 1)])

    @pytest.mark.parametrize("sign", ["+", "-"])
    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1)])
    def test_reconstruction(self, m, n, sign):
        lax = LaxOperator(module(m, n, 3), sign, order=8)
        gd = gauss_decompose(lax)
        assert reconstruction_residual(gd, lax) is None

    def test_reconstruction_fused_module(self):
        lax = LaxOperator(module(1, 1, 3, 5), "+", order=6)
        gd = gauss_decompose(lax)
        assert reconstruction_residual(gd, lax) is None

    def test_identity_lax_decomposes_trivially(self):
        lax = LaxOperator(module(2, 1), "+", order=4)  # trivial module
        gd = gauss_decompose(lax)
        for s in gd.e.values():
            assert not s.coeffs
        for s in gd.f.values():
            assert not s.coeffs
        for i, s in gd.k.items():
            assert list(s.coeffs) == [(0,)]
            assert s.coeffs[(0,)].data == {(0, 0): mpq(1)}

    def test_association_order_is_immaterial(self):
        lax = LaxOperator(module(2, 1, 3), "+", order=8)
        a = gauss_decompose(lax, association="left")
        b = gauss_decompose(lax, association="right")
        for fam in ("e", "k", "f"):
            for key, s in getattr(a, fam).items():
                assert_same_series(s, getattr(b, fam)[key], (fam, key))

    def test_singular_pivot_names_its_index(self):
        # point 0 makes the first diagonal block of the Taylor-side Lax
        # operator singular at the expansion center
        lax = LaxOperator(module(1, 1, 0), "-", order=4)
        with pytest.raises(SingularPivot, match="pivot 1"):
            gauss_decompose(lax)

    def test_diagonal_series_invertible(self):
        lax = LaxOperator(module(2, 1, 3), "-", order=6)
        gd = gauss_decompose(lax)
        one = TruncSeries.constant(
            lax.entries[(0, 0)].coeffs[(0,)].identity(
                lax.module.quantum_parities))
        for i in gd.k:
            prod = omul(gd.k[i], gd.k_inverse(i))
            assert_same_series(prod, one, ("k", i))


class TestRationalOracle:
    """The sign-level decompositions are expansions of one rational
    decomposition; this is the independent check of the recursion."""

    @pytest.mark.parametrize("sign", ["+", "-"])
    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1)])
    def test_series_gauss_matches_expanded_rational_gauss(self, m, n, sign):
        mod = module(m, n, 3)
        gd = gauss_decompose(LaxOperator(mod, sign, order=8))
        rg = gauss_decompose_rational(mod)
        for fam in ("e", "k", "f"):
            for key, mat in getattr(rg, fam).items():
                s = expand_rational_matrix(mat, sign, "u", 8)
                assert_same_series(s, getattr(gd, fam)[key], (fam, key, sign))


def _rational_roots(den):
    """Roots of a univariate rational polynomial of degree <= 2."""
    cs = den.coeff_list("u")
    if len(cs) == 2:
        return [-cs[0] / cs[1]]
    if len(cs) == 3:
        a, b, c = cs[2], cs[1], cs[0]
        disc = b * b - 4 * a * c
        num, dnm = disc.numerator, disc.denominator
        rn, rd = int(num) ** 0.5, int(dnm) ** 0.5
        rn, rd = round(rn), round(rd)
        assert rn * rn == num and rd * rd == dnm, "irrational roots"
        r = mpq(rn, rd)
        return [(-b + r) / (2 * a), (-b - r) / (2 * a)]
    raise AssertionError("unexpected denominator degree")


def _derivative(p):
    cs = p.coeff_list("u")
    u = Poly.var("u")
    out = Poly.const(0)
    for k in range(1, len(cs)):
        out = out + Poly.const(k * cs[k]) * u ** (k - 1)
    return out


class TestCurrents:
    def test_parity_tags(self):
        cs = currents_for(module(2, 1, 3), order=4)
        assert [cs.parity(i) for i in (1, 2)] == [0, 1]
        assert cs.bracket_is_anticommutator(2, 2)
        assert not cs.bracket_is_anticommutator(1, 2)

    def test_trivial_module_has_zero_currents(self):
        cs = currents_for(module(1, 1), order=4)
        assert not cs.xplus[1].coeffs
        assert not cs.xminus[1].coeffs
        for i in (1, 2):
            assert cs.kplus[i].coeffs[(0,)].data == {(0, 0): mpq(1)}

    def test_sign_mismatch_rejected(self):
        mod = module(1, 1, 3)
        gp = gauss_decompose(LaxOperator(mod, "+", 4))
        with pytest.raises(ValueError):
            build_currents(gp, gp, mod, 4)

    def test_phi_times_its_inverse(self):
        cs = currents_for(module(1, 1, 3), order=8)
        one = TruncSeries.constant(
            cs.kplus[1].coeffs[(0,)].identity(cs.module.quantum_parities))
        prod = omul(cs.psi[1], cs.psi[1].inverse())
        assert_same_series(prod, one, "psi")
        prod = omul(cs.phi[1], cs.phi[1].inverse())
        assert_same_series(prod, one, "phi")

    def test_x_currents_are_delta_supported(self):
        # partial fractions: each entry of the rational e/f data is a
        # polynomial plus simple poles; the difference of its two
        # expansions keeps only the poles, giving coefficients
        # sum_c res_c * c^(-1-j) at every exponent j
        mod = module(1, 1, 3)
        order = 8
        cs = currents_for(mod, order=order)
        rg = gauss_decompose_rational(mod)
        for cur, rmat in ((cs.xplus[1], rg.e[(2, 1)]),
                          (cs.xminus[1], rg.f[(1, 2)])):
            for (r, c), f in rmat.data.items():
                poles = []
                if f.den.degree_in("u") > 0:
                    dprime = _derivative(f.den)
                    for root in _rational_roots(f.den):
                        res = f.num.eval({"u": root}) / dprime.eval({"u": root})
                        poles.append((root, res))
                for j in range(-order, order + 1):
                    want = sum((res * root ** (-1 - j) for root, res in poles),
                               mpq(0))
                    got = cur.get((j,))
                    got = got.get(r, c) if got != 0 else mpq(0)
                    assert got == want, (r, c, j)

    def test_psi_phi_are_diagonal_ratios(self):
        cs = currents_for(module(2, 1, 3), order=6)
        for i in (1, 2):
            assert_same_series(
                omul(cs.psi[i], cs.kminus[i]), cs.kminus[i + 1], ("psi", i))
            assert_same_series(
                omul(cs.phi[i], cs.kplus[i]), cs.kplus[i + 1], ("phi", i))
