import itertools
import math

import numpy as np
import pytest

from hodge_spectra.curl import (
    LeftInvariantForm,
    apply_T,
    coexact_bound_check,
    coexact_lower_bound,
    curl_g_on_invariant,
    curl_matrix,
    curl_round,
    curl_squared_residual,
    round_coexact_roots,
    star,
    star_via_T,
)
from hodge_spectra.geometry import MetricParams, weitzenboeck_diagonal
from hodge_spectra.laplacian import assemble_delta1

from conftest import random_metrics


def E(i, degree=1):
    return LeftInvariantForm.basis(i, degree)


def test_form_validation():
    with pytest.raises(ValueError):
        LeftInvariantForm((1.0, 2.0))
    with pytest.raises(ValueError):
        LeftInvariantForm((1.0, float("nan"), 0.0))


def test_apply_T_examples():
    m = MetricParams(1, 2, 3)
    assert apply_T(E(1), m).coefficients == (1, 0, 0)
    assert apply_T(E(3), m).coefficients == (0, 0, 9)
    assert apply_T(apply_T(E(2), m), m, inverse=True).coefficients == (0, 1, 0)


def test_curl_examples():
    assert curl_g_on_invariant(E(1), MetricParams(1, 1, 1)).coefficients == (-2, 0, 0)
    out = curl_g_on_invariant(E(2), MetricParams(1, 2, 3)).array()
    np.testing.assert_allclose(out, [0, -3, 0])


def test_round_curl():
    for i in (1, 2, 3):
        np.testing.assert_allclose(curl_round(E(i)).array(), -2 * E(i).array())


@pytest.mark.parametrize("m", random_metrics(61, 20))
def test_star_forms_agree(m):
    for i in (1, 2, 3):
        for deg in (1, 2):
            np.testing.assert_allclose(star(E(i, deg), m).array(), star_via_T(E(i, deg), m).array(), rtol=1e-14)
        # ** = 1 in dimension three
        np.testing.assert_allclose(star(star(E(i), m), m).array(), E(i).array(), rtol=1e-14)


def test_star_degree_check():
    with pytest.raises(ValueError):
        star(LeftInvariantForm((1, 0, 0), 3), MetricParams(1, 1, 1))


@pytest.mark.parametrize("m", random_metrics(62, 30))
def test_curl_squared_is_k0_block(m):
    c = curl_matrix(m)
    delta0 = assemble_delta1(0, m).entries.real
    np.testing.assert_allclose(c @ c, delta0, rtol=1e-12)
    assert curl_squared_residual(m) <= 1e-12


@pytest.mark.parametrize("m", random_metrics(63, 20))
def test_curl_diagonal_is_weitzenboeck_root(m):
    # (abc T^-1 Curl_0)^2 = 4 diag(b^2c^2/a^2, ...)
    np.testing.assert_allclose(np.diag(curl_matrix(m)) ** 2, weitzenboeck_diagonal(m), rtol=1e-13)


def test_coexact_examples():
    chk = coexact_bound_check(MetricParams(1, 1, 1), 6)
    assert chk.ok and chk.bound == 4
    chk = coexact_bound_check(MetricParams(1, 2, 3), 6)
    assert chk.ok and chk.bound == pytest.approx(16 / 9)
    chk = coexact_bound_check(MetricParams(3, 1, 1), 6)
    assert chk.ok and chk.bound == pytest.approx(4 / 9)


@pytest.mark.parametrize("m", random_metrics(64, 15, 0.3, 3))
def test_coexact_bound_random(m):
    chk = coexact_bound_check(m, 8)
    assert chk.ok, chk.as_dict()
    assert chk.as_dict()["violations"] == []


def test_coexact_lower_bound_symmetric():
    m = MetricParams(1.2, 0.4, 2.5)
    perms = itertools.permutations(range(3))
    assert all(coexact_lower_bound(m.permuted(p)) == pytest.approx(coexact_lower_bound(m)) for p in perms)


def test_round_roots_are_integers():
    roots = round_coexact_roots(10)
    for k, r in roots:
        assert min(abs(r - (k + 2)), abs(r - k)) <= 1e-8
    ks = {k for k, r in roots if abs(r - (k + 2)) <= 1e-8}
    assert ks == set(range(11))
    assert {k for k, r in roots if abs(r - k) <= 1e-8 and k > 0} == set(range(2, 11))
    assert not math.isnan(sum(r for _, r in roots))
