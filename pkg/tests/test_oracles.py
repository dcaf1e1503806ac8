"""Tests for the identity-and-bound audit suite.

Spot values come from independent evaluations (scipy Bessel and erfc, or
the closed forms themselves); the full canonical sweep lives in
test_acceptance, so here each check gets representative points, its
degenerate cases, and the reporting contract.
"""

import math

import pytest
from scipy.special import erfc as sp_erfc
from scipy.special import k0 as sp_k0

from diwt.errors import DomainError, OrderError, UnknownCheckId
from diwt.oracles import (CANONICAL_CASES, CHECK_IDS, CheckReport,
                          check_bessel_index_bound,
                          check_bessel_laplace_transform,
                          check_gaussian_laplace_erfc,
                          check_iterated_inversion_route,
                          check_kernel_index_relation, check_kl_reduction,
                          check_whittaker_index_bound,
                          check_whittaker_laplace_bessel, run_suite)
from diwt.transforms import CoefficientSeq


class TestReportContract:
    def test_json_shape_uses_pass_key(self):
        r = check_gaussian_laplace_erfc(1.0, 0.0)
        d = r.to_json_dict()
        assert set(d) == {"check_id", "parameters", "lhs", "rhs", "abs_err",
                          "rel_err", "tolerance", "pass"}
        assert d["pass"] is True
        assert isinstance(r, CheckReport)

    def test_pass_rule_is_abs_or_rel(self):
        r = check_bessel_laplace_transform(2, math.pi / 2)
        # sin(2 * pi/2) = 0: the relative error is meaningless but the
        # absolute one is tiny, and the OR rule must accept it
        assert r.rel_err > r.tolerance
        assert r.abs_err <= r.tolerance
        assert r.passed


class TestWhittakerLaplaceBessel:
    def test_zero_index_reduces_to_k0(self):
        r = check_whittaker_laplace_bessel(0.0, 0.0j, 1.0)
        assert r.passed
        assert r.rhs == pytest.approx(4.0 * sp_k0(1.0), rel=1e-12)
        assert r.abs_err < 1e-10

    @pytest.mark.parametrize("case", [
        {"mu": 0.25, "rho": 0.5j, "x": 2.0},
        {"mu": -1.0, "rho": 0.3 + 0.0j, "x": 1.0},
        {"mu": 0.4, "rho": 0.25j, "x": 0.5},
    ])
    def test_representative_points(self, case):
        r = check_whittaker_laplace_bessel(**case)
        assert r.passed
        assert r.rel_err < 1e-10

    def test_rejects_mixed_complex_index(self):
        with pytest.raises(DomainError):
            check_whittaker_laplace_bessel(0.0, 0.3 + 0.5j, 1.0)
        with pytest.raises(DomainError):
            check_whittaker_laplace_bessel(0.0, 0.5j, 0.0)


class TestGaussianLaplaceErfc:
    def test_closed_form_at_unit_point(self):
        r = check_gaussian_laplace_erfc(1.0, 0.0)
        want = math.sqrt(math.pi) * math.e * sp_erfc(1.0)
        assert r.rhs == pytest.approx(want, rel=1e-13)
        assert r.passed and r.rel_err < 1e-12

    def test_small_t_regime(self):
        r = check_gaussian_laplace_erfc(0.01, 1.0)
        assert r.passed and r.rel_err < 1e-12

    def test_guards(self):
        with pytest.raises(DomainError):
            check_gaussian_laplace_erfc(0.0, 1.0)
        with pytest.raises(DomainError):
            check_gaussian_laplace_erfc(1.0, -0.5)
        with pytest.raises(DomainError):
            check_gaussian_laplace_erfc(1.0, 3.5)


class TestBesselLaplaceTransform:
    def test_quarter_period_value(self):
        r = check_bessel_laplace_transform(1, math.pi / 2)
        want = math.pi / (math.sinh(math.pi) * math.sinh(math.pi / 2))
        assert r.rhs == pytest.approx(want, rel=1e-15)
        assert r.passed and r.abs_err < 1e-10

    def test_generic_point(self):
        r = check_bessel_laplace_transform(1, 0.1)
        assert r.passed and r.rel_err < 1e-9

    def test_removable_endpoint_rejected(self):
        with pytest.raises(DomainError):
            check_bessel_laplace_transform(1, 0.0)
        with pytest.raises(DomainError):
            check_bessel_laplace_transform(1, 3.5)
        with pytest.raises(DomainError):
            check_bessel_laplace_transform(0, 1.0)


class TestKernelIndexRelation:
    @pytest.mark.parametrize("mu", [-0.25, 0.25])
    def test_representative_points(self, mu):
        r = check_kernel_index_relation(mu, 2, 0.5)
        assert r.passed and r.rel_err < 1e-8

    def test_order_guard(self):
        with pytest.raises(OrderError):
            check_kernel_index_relation(0.5, 1, 1.0)


class TestKlReduction:
    @pytest.mark.parametrize("n,x", [(1, 2.0), (3, 0.5)])
    def test_both_subrelations_tight(self, n, x):
        r = check_kl_reduction(n, x)
        assert r.passed
        assert r.parameters["binding_relation"] in ("whittaker-bessel",
                                                    "kernel-scaling")
        wa = abs(r.parameters["whittaker_lhs"] - r.parameters["whittaker_rhs"])
        ka = abs(r.parameters["kernel_lhs"] - r.parameters["kernel_rhs"])
        wscale = max(abs(r.parameters["whittaker_lhs"]), 1e-300)
        kscale = max(abs(r.parameters["kernel_lhs"]), 1e-300)
        assert wa / wscale < 1e-10
        assert ka / kscale < 1e-10


class TestBounds:
    def test_bessel_equality_case(self):
        r = check_bessel_index_bound(0.0, 2.0, 0.0)
        assert r.passed
        assert r.abs_err == 0.0
        assert r.lhs == r.rhs

    def test_whittaker_equality_case(self):
        r = check_whittaker_index_bound(0.25, 0.0, 1.0, 0.0)
        assert r.passed and r.abs_err == 0.0

    def test_violation_is_one_sided(self):
        r = check_bessel_index_bound(3.0, 1.0, 1.2)
        assert r.lhs < r.rhs
        assert r.abs_err == 0.0

    def test_seeded_draws_hold(self):
        reps = run_suite(["bessel-index-bound", "whittaker-index-bound"],
                         trials=10, seed=99)
        assert len(reps) == 20
        assert all(r.passed for r in reps)

    def test_guards(self):
        with pytest.raises(DomainError):
            check_bessel_index_bound(1.0, -1.0, 0.0)
        with pytest.raises(DomainError):
            check_bessel_index_bound(1.0, 1.0, 2.0)
        with pytest.raises(OrderError):
            check_whittaker_index_bound(0.6, 1.0, 1.0, 0.0)


class TestIteratedRoute:
    def test_recovers_unit_coefficient(self):
        r = check_iterated_inversion_route(CoefficientSeq((1.0,)), 0.0, 1)
        assert r.passed
        assert r.abs_err < 1e-6
        assert r.rhs == 1.0

    def test_zero_sequence_trivial(self):
        r = check_iterated_inversion_route(CoefficientSeq((0.0,)), 0.25, 1)
        assert r.passed and r.lhs == 0.0 and r.rhs == 0.0

    def test_guards(self):
        seq = CoefficientSeq((1.0,))
        with pytest.raises(DomainError):
            check_iterated_inversion_route(seq, 0.0, 4)
        with pytest.raises(OrderError):
            check_iterated_inversion_route(seq, 0.5, 1)
        with pytest.raises(DomainError):
            check_iterated_inversion_route(seq, 0.0, 0)


class TestSuiteRunner:
    def test_empty_selection(self):
        assert run_suite([], trials=5, seed=1) == []

    def test_zero_trials(self):
        assert run_suite(["kl-reduction"], trials=0, seed=1) == []

    def test_unknown_id(self):
        with pytest.raises(UnknownCheckId):
            run_suite(["no-such-check"], trials=1, seed=0)

    def test_negative_trials(self):
        with pytest.raises(DomainError):
            run_suite(["kl-reduction"], trials=-1, seed=0)

    def test_deterministic_reruns(self):
        a = run_suite(["gaussian-laplace-erfc-sign-corrected"], trials=3, seed=7)
        b = run_suite(["gaussian-laplace-erfc-sign-corrected"], trials=3, seed=7)
        assert a == b
        assert len(a) == 3 and all(r.passed for r in a)

    def test_streams_independent_of_selection(self):
        solo = run_suite(["kl-reduction"], trials=2, seed=11)
        mixed = run_suite(["gaussian-laplace-erfc-sign-corrected",
                           "kl-reduction"], trials=2, seed=11)
        assert solo == mixed[2:]

    def test_order_follows_selection(self):
        reps = run_suite(["kl-reduction",
                          "gaussian-laplace-erfc-sign-corrected"],
                         trials=1, seed=3)
        assert [r.check_id for r in reps] == [
            "kl-reduction", "gaussian-laplace-erfc-sign-corrected"]


class TestCanonicalSets:
    def test_counts(self):
        want = {
            "whittaker-laplace-bessel": 9,
            "gaussian-laplace-erfc-sign-corrected": 5,
            "bessel-laplace-transform": 6,
            "kernel-index-relation": 9,
            "kl-reduction": 6,
            "iterated-inversion-route": 2,
        }
        for cid, count in want.items():
            assert len(CANONICAL_CASES[cid]) == count
        assert sum(map(len, CANONICAL_CASES.values())) == 37

    def test_ids_registered(self):
        assert set(CANONICAL_CASES) <= set(CHECK_IDS)
        assert len(CHECK_IDS) == 8
