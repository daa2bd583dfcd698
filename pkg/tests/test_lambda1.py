import itertools
import math

import numpy as np
import pytest

from hodge_spectra.errors import ConjectureViolation, DomainError
from hodge_spectra.geometry import MetricParams
from hodge_spectra.lambda1 import (
    Branch,
    branch_values,
    certify_lambda1,
    coexact_le_function_bound,
    function_lambda1,
    gershgorin_bound,
    lambda1_formula,
    sample_metric,
    stress_test,
    weight_one_coexact_expanded,
    weight_one_coexact_minus_compact,
    weight_one_discriminant,
    weight_one_values,
)
from hodge_spectra.laplacian import assemble_delta1, block_eigenvalues

from conftest import random_metrics


class TestFormula:
    def test_examples(self):
        r = lambda1_formula(MetricParams(1, 1, 1))
        assert (r.value, r.attaining_branch) == (3, Branch.EXACT)
        r = lambda1_formula(MetricParams(1, 2, 3))
        assert r.value == pytest.approx(16 / 9) and r.attaining_branch is Branch.COEXACT_C
        assert lambda1_formula(MetricParams(1, 1, 1, "so3")).value == 4

    def test_ties(self):
        r = lambda1_formula(MetricParams(1, 1, 1, "so3"))
        assert set(r.ties) == {Branch.COEXACT_A, Branch.COEXACT_B, Branch.COEXACT_C}
        # b = c = 1: 4 / a^2 = a^2 + 2 at a^2 = sqrt(5) - 1
        a2 = math.sqrt(5) - 1
        r = lambda1_formula(MetricParams(math.sqrt(a2), 1, 1))
        assert r.attaining_branch is Branch.EXACT and Branch.COEXACT_A in r.ties

    def test_symmetric(self):
        for m in random_metrics(51, 50):
            v = lambda1_formula(m).value
            for perm in itertools.permutations(range(3)):
                assert lambda1_formula(m.permuted(perm)).value == pytest.approx(v, rel=1e-14)

    def test_scaling(self):
        m = MetricParams(0.7, 1.3, 2.2)
        assert lambda1_formula(MetricParams(1.5 * 0.7, 1.5 * 1.3, 1.5 * 2.2)).value == pytest.approx(
            2.25 * lambda1_formula(m).value
        )

    def test_branch_values_so3(self):
        assert Branch.EXACT not in branch_values(MetricParams(1, 1, 1, "so3"))

    def test_function_lambda1(self):
        assert function_lambda1(MetricParams(1, 1, 1)) == 3
        assert function_lambda1(MetricParams(1, 1, 1, "so3")) == 8
        for m in random_metrics(52, 200):
            num = min(block_eigenvalues(k, m, 0)[-1 if k == 0 else 0] for k in range(1, 5))
            assert function_lambda1(m) == pytest.approx(num, rel=1e-9)

    def test_coexact_below_function_bound(self):
        assert all(coexact_le_function_bound(m) for m in random_metrics(53, 1000))


class TestWeightOne:
    def test_round(self):
        w = weight_one_values(MetricParams(1, 1, 1))
        assert (w.exact, w.coexact_minus, w.coexact_plus) == (3, 9, 9)

    @pytest.mark.parametrize("m", random_metrics(54, 40))
    def test_against_block(self, m):
        np.testing.assert_allclose(block_eigenvalues(1, m), np.sort(weight_one_values(m).as_array()), rtol=1e-10)

    @pytest.mark.parametrize("m", random_metrics(55, 40, 0.5, 2))
    def test_expanded_equals_compact(self, m):
        lo, hi = weight_one_coexact_expanded(m)
        assert lo == pytest.approx(weight_one_coexact_minus_compact(m), rel=1e-9)
        assert hi == pytest.approx(weight_one_values(m).coexact_plus, rel=1e-14)

    def test_discriminant_non_negative(self):
        for m in random_metrics(56, 1000):
            assert weight_one_discriminant(m) >= -1e-12 * max(m.squares) ** 4

    def test_minus_dominates_lambda1(self):
        for m in random_metrics(57, 1000):
            assert weight_one_values(m).coexact_minus >= lambda1_formula(m).value * (1 - 1e-12)


class TestGershgorin:
    def test_k0_exact(self):
        for m in random_metrics(58, 20):
            assert gershgorin_bound(0, m) == pytest.approx(min(np.diag(assemble_delta1(0, m).entries).real))

    def test_round_k10(self):
        bound = gershgorin_bound(10, MetricParams(1, 1, 1))
        assert 3 < bound <= block_eigenvalues(10, MetricParams(1, 1, 1))[0]

    def test_sound(self):
        rng = np.random.default_rng(59)
        for m in random_metrics(59, 100):
            k = int(rng.integers(0, 16))
            ev = block_eigenvalues(k, m)[0]
            assert gershgorin_bound(k, m) <= ev + 1e-9 * abs(ev)

    def test_negative_becomes_sentinel(self):
        assert gershgorin_bound(3, MetricParams(1, 3, 0.2)) == -math.inf


class TestCertify:
    def test_round(self):
        r = certify_lambda1(MetricParams(1, 1, 1))
        assert r.certified and r.value == 3 and r.argmin_k == 1
        assert r.certificate.bound_at_k0 > 3

    def test_near_round(self):
        r = certify_lambda1(MetricParams(1, 1, 1.05))
        assert r.certified
        assert r.value == pytest.approx(3.1025) and r.attaining_branch is Branch.EXACT
        assert r.numeric_min == pytest.approx(3.1025, rel=1e-9)

    def test_anisotropic(self):
        r = certify_lambda1(MetricParams(10, 1, 1), k_probe=60)
        assert r.value == pytest.approx(0.04)
        assert r.numeric_min == pytest.approx(0.04, rel=1e-8)

    def test_uncertified_still_matches(self):
        r = certify_lambda1(MetricParams(1, 2, 3), k_probe=80)
        assert not r.certified and r.certificate is None
        assert r.k_searched == 80
        assert r.numeric_min == pytest.approx(16 / 9, rel=1e-9) and r.argmin_k == 0

    def test_so3(self):
        r = certify_lambda1(MetricParams(1, 1.1, 0.95, "so3"))
        assert r.certified and r.argmin_k == 0

    def test_bad_probe(self):
        with pytest.raises(DomainError):
            certify_lambda1(MetricParams(1, 1, 1), k_probe=0)

    def test_violation_detected(self, monkeypatch):
        import hodge_spectra.lambda1 as mod

        monkeypatch.setattr(mod, "_block_min", lambda m, k: 1.0)
        with pytest.raises(ConjectureViolation):
            certify_lambda1(MetricParams(1, 1, 1))


class TestStress:
    def test_seed_42(self):
        rep = stress_test(seed=42, samples=200, k_max=10)
        assert rep.ok and rep.max_rel_dev <= 1e-8
        assert set(rep.argmin_k_histogram) <= {0, 1}

    def test_forced_metrics(self):
        rep = stress_test(metrics=[(1, 1, 1)], k_max=6)
        assert rep.argmin_k_histogram == {1: 1}
        rep = stress_test(metrics=[(2, 1, 1)], k_max=6)
        assert rep.argmin_k_histogram == {0: 1}

    def test_so3(self):
        rep = stress_test(seed=3, samples=100, k_max=10, group="so3")
        assert rep.ok and set(rep.argmin_k_histogram) == {0}

    def test_worker_independent(self):
        a = stress_test(seed=7, samples=50, k_max=6, workers=1).as_dict()
        b = stress_test(seed=7, samples=50, k_max=6, workers=4).as_dict()
        assert a == b

    def test_sampling_reproducible(self):
        assert sample_metric(5, 17) == sample_metric(5, 17)
        assert sample_metric(5, 17) != sample_metric(5, 18)

    def test_violation_reported(self, monkeypatch):
        import hodge_spectra.lambda1 as mod

        monkeypatch.setattr(mod, "_block_min", lambda m, k: 0.5 if k == 3 else 100.0)
        rep = stress_test(metrics=[(1, 1, 1)], k_max=4)
        assert not rep.ok
        assert rep.violations[0]["argmin_k"] == 3

    def test_bad_box(self):
        with pytest.raises(DomainError):
            stress_test(samples=1, box=(0, 1))
        with pytest.raises(DomainError):
            stress_test(samples=0)
