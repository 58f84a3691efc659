"""Hopf-axiom checks on tensor products of evaluation modules."""

import pytest
from gmpy2 import mpq

from superyang.gauss import currents_for
from superyang.graded import GradedDims, graded_kron
from superyang.hopf import (
    ArgumentShift,
    check_antipode,
    check_coassociativity,
    check_counit,
    check_delta_homomorphism,
    coproduct_image,
    hopf_system,
    plain_kron,
    tensor_hopf,
)
from superyang.lax import EvalModule
from superyang.relations import relation_catalog
from superyang.series import compare_on_shared


H = mpq(1, 2)


def _mod(m, n, a):
    return EvalModule(GradedDims(m, n), H, (mpq(a),))


def _all_pass(reports):
    return [r for r in reports if r["status"] != "pass"]


class TestCoproduct:
    def test_central_image_is_zero(self):
        img = coproduct_image("c", _mod(1, 1, 3), _mod(1, 1, 5), 4)
        assert not img.coeffs

    def test_k_image_is_the_tensor_square(self):
        # independent assembly: convolve the factor series by hand
        modA, modB = _mod(1, 1, 3), _mod(1, 1, 5)
        img = coproduct_image(("k", "+", 1), modA, modB, 6)
        ka = currents_for(modA, 6).kplus[1]
        kb = currents_for(modB, 6).kplus[1]
        for (e,), c in img.coeffs.items():
            acc = None
            for (ea,), ca in ka.coeffs.items():
                cb = kb.coeffs.get((e - ea,))
                if cb is None:
                    continue
                term = graded_kron(ca, cb)
                acc = term if acc is None else acc + term
            assert acc == c

    def test_factor_mismatch_rejected(self):
        with pytest.raises(ValueError):
            tensor_hopf(hopf_system(_mod(1, 1, 3), 4),
                        hopf_system(_mod(2, 1, 5), 4))

    def test_argument_shift_is_identity_at_level_zero(self):
        s = ArgumentShift(H, charge=0)
        k = currents_for(_mod(1, 1, 3), 4).kplus[1]
        assert s.apply(k) is k
        with pytest.raises(ValueError):
            ArgumentShift(H, charge=2).apply(k)


class TestDeltaHomomorphism:
    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1)])
    def test_relation_suite_on_images(self, m, n):
        reports = check_delta_homomorphism(_mod(m, n, 3), _mod(m, n, 5), 6)
        assert _all_pass(reports) == []
        # same RelationIDs as the single-module suite, plus the
        # grouplikeness checks for the t-1 diagonal ratios
        t = m + n
        assert len(reports) == len(relation_catalog(GradedDims(m, n))) \
            + 2 * (t - 1)

    def test_sign_stripped_control_fails(self):
        reports = check_delta_homomorphism(
            _mod(1, 1, 3), _mod(1, 1, 5), 6, kron=plain_kron)
        assert any(r["status"] == "fail" for r in reports)


class TestCounitAntipode:
    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1)])
    def test_counit(self, m, n):
        assert _all_pass(check_counit(_mod(m, n, 3), 6)) == []

    def test_counit_reproduces_the_raising_current(self):
        modB = _mod(1, 1, 5)
        triv = EvalModule(GradedDims(1, 1), H, ())
        img = coproduct_image(("X", "+", 1), triv, modB, 6)
        ref = currents_for(modB, 6).xplus[1]
        status, _, _ = compare_on_shared(img, ref)
        assert status == "pass"

    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1)])
    def test_antipode(self, m, n):
        assert _all_pass(check_antipode(_mod(m, n, 3), 8)) == []


class TestCoassociativity:
    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1)])
    def test_triple_tensor(self, m, n):
        reports = check_coassociativity(
            _mod(m, n, 3), _mod(m, n, 5), _mod(m, n, 7), 5)
        assert _all_pass(reports) == []
