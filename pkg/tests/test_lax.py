"""Evaluation modules, Lax operators, and the exchange-relation suite."""

import pytest
from gmpy2 import mpq

from superyang.errors import PoleError
from superyang.graded import GradedDims
from superyang.lax import (
    EvalModule,
    LaxOperator,
    check_lax_inverse,
    check_rll,
    check_rll_wrong_direction,
    kernel_exchange_residual,
)
from superyang.rational import Poly, RatFun

H = mpq(1, 2)


def module(m, n, *points, h=H):
    return EvalModule(GradedDims(m, n), h, tuple(mpq(p) for p in points))


class TestEvalModule:
    def test_trivial_module_kernel_is_identity(self):
        mod = module(1, 1)
        k = mod.kernel()
        assert mod.quantum_dim == 1
        assert k.data == {(0, 0): RatFun(Poly.const(1)),
                          (1, 1): RatFun(Poly.const(1))}

    def test_single_point_kernel_entry(self):
        # bottom-corner entry of the gl(1|1) kernel at point a:
        # (u - a - 2h) / (u - a + 2h)
        mod = module(1, 1, 3)
        f = mod.kernel().data[(3, 3)]
        u = Poly.var("u")
        expect = RatFun(u - Poly.const(4), u - Poly.const(2))
        assert f == expect

    def test_quantum_parities_of_fused_space(self):
        mod = module(1, 1, 3, 5)
        assert mod.quantum_parities == (0, 1, 1, 0)

    def test_fusing_requires_matching_data(self):
        with pytest.raises(ValueError):
            module(1, 1, 3).fused(module(2, 1, 5))
        with pytest.raises(ValueError):
            module(1, 1, 3).fused(module(1, 1, 5, h=mpq(1, 3)))

    def test_zero_parameter_rejected(self):
        with pytest.raises(ValueError):
            module(1, 1, 3, h=0)


class TestKernelExchangeOracle:
    """Rational-level oracle: the fused kernel satisfies the exchange
    identity with polynomial entries, before any series expansion."""

    @pytest.mark.parametrize("m,n,a,b", [
        (1, 1, 3, 5),
        (2, 1, 3, -7),
        (1, 2, 3, 5),
    ])
    def test_fused_kernel_identity(self, m, n, a, b):
        res = kernel_exchange_residual(module(m, n, a), module(m, n, b))
        assert res.is_zero()

    def test_holds_at_equal_points(self):
        res = kernel_exchange_residual(module(1, 1, 3), module(1, 1, 3))
        assert res.is_zero()


class TestLaxOperator:
    def test_sign_validation(self):
        with pytest.raises(ValueError):
            LaxOperator(module(1, 1, 3), "x")

    def test_minus_sign_pole_at_origin_rejected(self):
        # a = 2h puts the kernel pole exactly at the Taylor center
        with pytest.raises(PoleError):
            LaxOperator(module(1, 1, 2 * H), "-")

    def test_weight_conservation(self):
        for sign in "+-":
            lax = LaxOperator(module(2, 1, 3), sign, order=4)
            assert lax.weight_violations() == []
        lax = LaxOperator(module(1, 1, 3, 5), "+", order=4)
        assert lax.weight_violations() == []

    def test_plus_expansion_matches_geometric_series(self):
        # (u-4)/(u-2) = 1 - 2/u * sum_k (2/u)^k, checked coefficientwise
        lax = LaxOperator(module(1, 1, 3), "+", order=6)
        s = lax.entries[(1, 1)]
        assert s.get((0,)).data[(1, 1)] == 1
        for k in range(1, 6):
            assert s.get((-k,)).data[(1, 1)] == -mpq(2) ** k

    def test_minus_expansion_matches_geometric_series(self):
        # (u-4)/(u-2) = 2 + sum_{k>=1} u^k / 2^k by direct long division
        lax = LaxOperator(module(1, 1, 3), "-", order=6)
        s = lax.entries[(1, 1)]
        assert s.get((0,)).data[(1, 1)] == 2
        for k in range(1, 6):
            assert s.get((k,)).data[(1, 1)] == mpq(1, 2) ** k

    @pytest.mark.parametrize("sign", ["+", "-"])
    def test_inverse_identity(self, sign):
        rec = check_lax_inverse(module(1, 1, 3), sign, order=8)
        assert rec["status"] == "pass"

    def test_inverse_identity_fused(self):
        rec = check_lax_inverse(module(1, 1, 3, 5), "+", order=6)
        assert rec["status"] == "pass"


class TestExchangeSuite:
    def test_gl11_pair_all_forms(self):
        rep = check_rll(module(1, 1, 3), module(1, 1, 5), "all", 8)
        assert len(rep) == 16
        assert all(r["status"] == "pass" for r in rep.values())

    def test_gl11_equal_points(self):
        rep = check_rll(module(1, 1, 3), module(1, 1, 3), "component", 6)
        assert all(r["status"] == "pass" for r in rep.values())

    def test_gl11_single_module(self):
        rep = check_rll(module(1, 1, 3), form="all", order=8)
        assert all(r["status"] == "pass" for r in rep.values())

    def test_gl21_pair_all_forms(self):
        rep = check_rll(module(2, 1, 3), module(2, 1, -7), "all", 5)
        assert all(r["status"] == "pass" for r in rep.values())

    def test_component_and_theta_forms_agree(self):
        repc = check_rll(module(1, 1, 3), module(1, 1, 5), "component", 6)
        rept = check_rll(module(1, 1, 3), module(1, 1, 5), "theta", 6)
        combos = ["++", "--", "+-"]
        for c in combos:
            assert repc[f"component {c}"]["status"] \
                == rept[f"theta {c}"]["status"] == "pass"

    def test_wrong_expansion_direction_fails_with_witness(self):
        rec = check_rll_wrong_direction(module(1, 1, 3), module(1, 1, 5), 8)
        assert rec["status"] == "fail"
        assert rec["witness"]["exponents"] is not None
