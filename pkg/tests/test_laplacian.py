import numpy as np
import pytest

from hodge_spectra.errors import ConsistencyError, DomainError
from hodge_spectra.geometry import MetricParams, weitzenboeck_diagonal
from hodge_spectra.laplacian import (
    Tag,
    WeightBlockMatrix,
    assemble,
    assemble_delta0,
    assemble_delta1,
    block_eigenvalues,
    eigenvalues,
    full_spectrum,
    tag_block,
    weights,
)
from hodge_spectra.su2_rep import casimir_matrix, generators

from conftest import random_metrics, rel_close
from hand_matrices import berger_entry_formula, k1_matrix
from oracles import koszul


def general_formula(k, m):
    """Block assembled from the generic Peter-Weyl formula.

    Rough Laplacian plus Ricci: with ``(nabla_i w)_p = X_i w_p - sum_q G[i, p, q] w_q``
    the cross term of ``-sum_i (X_i - G_i)^2`` is ``+2 sum_i dX_i[r, s] G[i, p, q]``.
    """
    g = generators(k, m)
    G = koszul(*m.abc)
    n = 3 * (k + 1)
    W = weitzenboeck_diagonal(m)
    out = np.zeros((n, n), dtype=complex)
    dX = (g.dX1, g.dX2, g.dX3)
    for r in range(k + 1):
        for s in range(k + 1):
            for p in range(3):
                for q in range(3):
                    v = -g.casimir[r, s] * (p == q) + (r == s) * (p == q) * W[p]
                    v += 2 * sum(dX[i][r, s] * G[i, p, q] for i in range(3))
                    out[3 * r + p, 3 * s + q] = v
    return out


class TestAssembly:
    def test_k0_diagonal(self):
        m = MetricParams(1, 2, 3)
        M = assemble_delta1(0, m).entries
        np.testing.assert_allclose(M, np.diag([144, 9, 16 / 9]))
        np.testing.assert_allclose(eigenvalues(assemble_delta1(0, m)), [16 / 9, 9, 144])

    @pytest.mark.parametrize("m", random_metrics(31, 12))
    def test_k1_matrix(self, m):
        # the hand-derived matrix uses the basis E_p^* = a_p X_p^*
        N = np.diag(np.tile(m.abc, 2))
        M = assemble_delta1(1, m).entries
        P = k1_matrix(*m.abc)
        np.testing.assert_allclose(M, N @ P @ np.linalg.inv(N), atol=1e-12 * np.abs(P).max())

    @pytest.mark.parametrize("k", [2, 3, 6])
    def test_berger_entry_formula(self, k):
        a, b = 1.6, 0.45
        M = assemble_delta1(k, MetricParams(a, b, b)).entries
        np.testing.assert_allclose(M, berger_entry_formula(k, a, b), atol=1e-12 * np.abs(M).max())

    def test_berger_no_two_step_coupling(self):
        M = assemble_delta1(4, MetricParams(1.2, 0.8, 0.8)).entries
        for r in range(5):
            for s in range(5):
                if abs(r - s) == 2:
                    assert np.all(M[3 * r:3 * r + 3, 3 * s:3 * s + 3] == 0)

    @pytest.mark.parametrize("m", random_metrics(32, 6))
    @pytest.mark.parametrize("k", [0, 1, 2, 3, 5, 8])
    def test_general_formula_oracle(self, k, m):
        M = assemble_delta1(k, m).entries
        ref = general_formula(k, m)
        np.testing.assert_allclose(M, ref, atol=1e-10 * np.abs(ref).max())

    @pytest.mark.parametrize("k", [3, 6])
    def test_block_structure_zeros(self, k):
        M = assemble_delta1(k, MetricParams(1.3, 0.7, 2.1)).entries
        for r in range(k + 1):
            for s in range(k + 1):
                blk = M[3 * r:3 * r + 3, 3 * s:3 * s + 3]
                if abs(r - s) > 2:
                    assert np.all(blk == 0)
                elif abs(r - s) == 2:
                    # scalar blocks E_r, F_r
                    assert np.all(blk == blk[0, 0] * np.eye(3))
                elif abs(r - s) == 1:
                    # K blocks: first row and column only, zero corner
                    assert blk[0, 0] == 0 and np.all(blk[1:, 1:] == 0)
                    assert blk[0, 1].real == 0 and blk[0, 2].imag == 0
                    assert blk[1, 0] == -blk[0, 1] and blk[2, 0] == -blk[0, 2]
                else:
                    assert blk[1, 2] == -blk[2, 1]
                    assert blk[1, 2].real == 0
                    assert np.all(blk[0, 1:] == 0) and np.all(blk[1:, 0] == 0)

    @pytest.mark.parametrize("m", random_metrics(33, 20))
    def test_weitzenboeck_diagonal_part(self, m):
        k = 4
        M = assemble_delta1(k, m).entries
        C = casimir_matrix(k, m)
        for r in range(k + 1):
            diag = M[3 * r:3 * r + 3, 3 * r:3 * r + 3].diagonal().real
            np.testing.assert_allclose(diag + C[r, r], weitzenboeck_diagonal(m), rtol=1e-10)

    def test_delta0_is_negated_casimir(self):
        m = MetricParams(0.9, 1.4, 2.2)
        for k in range(6):
            np.testing.assert_allclose(assemble_delta0(k, m).entries, -casimir_matrix(k, m))

    def test_delta0_k1(self):
        m = MetricParams(1.1, 2.0, 0.3)
        M = assemble_delta0(1, m).entries.real
        s = 1.1**2 + 2.0**2 + 0.3**2
        np.testing.assert_allclose(M, s * np.eye(2))
        np.testing.assert_allclose(eigenvalues(assemble_delta0(1, MetricParams(1, 1, 1))), [3, 3])

    def test_entries_read_only(self):
        blk = assemble_delta1(2, MetricParams(1, 1, 1))
        with pytest.raises(ValueError):
            blk.entries[0, 0] = 1

    def test_assemble_dispatch(self):
        m = MetricParams(1, 1, 1)
        assert assemble(3, m, 0).size == 4 and assemble(3, m, 1).size == 12
        assert assemble(3, m, 1).bandwidth == 6
        with pytest.raises(DomainError):
            assemble(3, m, 2)


class TestEigenvalues:
    @pytest.mark.parametrize("m", random_metrics(34, 25))
    def test_hermitian_after_scaling(self, m):
        for k in (0, 1, 2, 7, 20, 60):
            assert assemble_delta1(k, m).hermiticity_residual() <= 1e-10

    def test_scaling_normalization_irrelevant(self):
        blk = assemble_delta1(5, MetricParams(1.3, 0.7, 2.1))
        h1 = blk.hermitian()
        s = 7.0 * blk.scaling()
        h2 = (s[:, None] * blk.entries) / s[None, :]
        np.testing.assert_allclose(h1, h2, atol=1e-12 * np.abs(h1).max())

    @pytest.mark.parametrize("m", random_metrics(35, 10))
    @pytest.mark.parametrize("k", [0, 1, 3, 9])
    def test_methods_agree(self, k, m):
        blk = assemble_delta1(k, m)
        band = eigenvalues(blk)
        emb = eigenvalues(blk, method="embedding", verify=True)
        scale = np.abs(band).max()
        np.testing.assert_allclose(band, emb, atol=1e-10 * scale)
        np.testing.assert_allclose(block_eigenvalues(k, m), band, atol=1e-10 * scale)

    def test_degree0_embedding(self):
        blk = assemble_delta0(6, MetricParams(1.5, 0.5, 1.0))
        np.testing.assert_allclose(eigenvalues(blk, "embedding"), eigenvalues(blk), rtol=1e-10)

    def test_unknown_method(self):
        with pytest.raises(DomainError):
            eigenvalues(assemble_delta1(1, MetricParams(1, 1, 1)), method="qr")

    def test_non_hermitian_detected(self):
        m = MetricParams(1.0, 1.0, 1.0)
        bad = assemble_delta1(2, m).entries.copy()
        bad[0, 4] += 3.0
        blk = WeightBlockMatrix(2, 1, m, bad)
        with pytest.raises(ConsistencyError):
            eigenvalues(blk, method="embedding")
        with pytest.raises(ConsistencyError):
            eigenvalues(blk, verify=True)

    @pytest.mark.parametrize("m", random_metrics(36, 30))
    def test_non_negative(self, m):
        for k in (0, 1, 2, 5, 10):
            ev = block_eigenvalues(k, m)
            assert ev[0] >= -1e-8 * np.abs(ev).max()

    def test_k1_contains_exact_twice(self):
        for m in random_metrics(37, 20):
            ev = block_eigenvalues(1, m)
            s = sum(m.squares)
            assert np.sum(np.abs(ev - s) <= 1e-9 * s) >= 2

    def test_round_k1_block(self):
        # numerical oracle: the round block has eigenvalues k(k+2), (k+2)^2
        np.testing.assert_allclose(block_eigenvalues(1, MetricParams(1, 1, 1)), [3, 3, 9, 9, 9, 9], atol=1e-12)

    @pytest.mark.parametrize("k", range(0, 12))
    def test_round_blocks(self, k):
        ev = block_eigenvalues(k, MetricParams(1, 1, 1))
        expected = [k * (k + 2)] * (k + 1) + [(k + 2) ** 2] * (k + 3) + [k * k] * (k - 1)
        if k == 0:
            expected = [4, 4, 4]
        np.testing.assert_allclose(ev, sorted(expected), atol=1e-9 * (k + 2) ** 2)

    @pytest.mark.parametrize("m", random_metrics(38, 50))
    def test_hodge_containment(self, m):
        for k in range(0, 11):
            v1 = block_eigenvalues(k, m, 1)
            for mu in block_eigenvalues(k, m, 0):
                if mu > 1e-9:
                    assert np.min(np.abs(v1 - mu)) <= 1e-8 * mu


class TestSpectrum:
    def test_degree0_round(self):
        spec = full_spectrum(MetricParams(1, 1, 1), degree=0, k_max=3)
        merged = spec.merged()
        assert [v for v, _ in merged] == pytest.approx([0, 3, 8, 15], abs=1e-12)
        assert [n for _, n in merged] == [1, 4, 9, 16]
        assert spec.entries[0].tag is Tag.HARMONIC

    def test_degree1_round(self):
        spec = full_spectrum(MetricParams(1, 1, 1), degree=1, k_max=2)
        first = spec.entries[0]
        assert first.eigenvalue == pytest.approx(3)
        assert (first.multiplicity, first.weight, first.tag) == (4, 1, Tag.EXACT)
        assert spec.first_nonzero() == pytest.approx(3)
        fours = [e for e in spec.entries if abs(e.eigenvalue - 4) < 1e-9]
        assert {(e.weight, e.multiplicity, e.tag) for e in fours} == {(0, 3, Tag.COEXACT), (2, 3, Tag.COEXACT)}
        total = sum(e.multiplicity for e in spec.entries)
        assert total == sum(3 * (k + 1) ** 2 for k in range(3))

    def test_so3_filter(self):
        su2 = full_spectrum(MetricParams(1, 1, 1), k_max=4)
        so3 = full_spectrum(MetricParams(1, 1, 1, "so3"), k_max=4)
        assert so3.first_nonzero() == pytest.approx(4)
        assert {e.weight for e in so3.entries} == {0, 2, 4}
        even = [e for e in su2.entries if e.weight % 2 == 0]
        assert [(e.weight, e.multiplicity) for e in so3.entries] == [(e.weight, e.multiplicity) for e in even]

    def test_multiplicity_rule(self):
        m = MetricParams(1.3, 0.7, 2.1)
        spec = full_spectrum(m, k_max=5)
        for k in range(6):
            assert sum(e.multiplicity for e in spec.at_weight(k)) == 3 * (k + 1) ** 2

    def test_sorted_and_tagged(self):
        m = MetricParams(0.8, 1.9, 1.2)
        spec = full_spectrum(m, k_max=8, workers=3)
        vals = spec.values()
        assert np.all(np.diff(vals) >= 0)
        for k in range(9):
            n_exact = sum(e.multiplicity for e in spec.at_weight(k) if e.tag is Tag.EXACT)
            assert n_exact == (k + 1) ** 2 if k > 0 else n_exact == 0

    def test_worker_count_irrelevant(self):
        m = MetricParams(0.8, 1.9, 1.2)
        assert full_spectrum(m, k_max=6, workers=1).entries == full_spectrum(m, k_max=6, workers=4).entries

    def test_bad_kmax(self):
        with pytest.raises(DomainError):
            full_spectrum(MetricParams(1, 1, 1), k_max=-1)
        with pytest.raises(DomainError):
            weights("su2", 2.5)

    def test_records_schema(self):
        rec = full_spectrum(MetricParams(1, 1, 1), k_max=1).records()[0]
        assert list(rec) == ["eigenvalue", "multiplicity", "k", "degree", "tag"]

    def test_tag_block(self):
        tags = tag_block(np.array([3.0, 3.0, 9.0]), np.array([3.0, 0.0]))
        assert tags == [Tag.EXACT, Tag.COEXACT, Tag.COEXACT]
