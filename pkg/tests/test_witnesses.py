import numpy as np
import pytest

from nonmarkov.dynamics import maximally_entangled
from nonmarkov.matrix_core import hermitian_eig, identity
from nonmarkov.models import choi_from_decoherence_factor
from nonmarkov.uncertainty import rs_lhs, variance
from nonmarkov.witnesses import (
    PairNotConstructibleError,
    Verdict,
    construct_rs_violating_pair,
    detect,
    negative_eigenspace,
    projective_witness_values,
    variance_witness,
)

from conftest import random_density, random_unit_trace_hermitian

TWO_NEG_STATE = np.diag([1.4, -0.2, -0.2]).astype(complex)


class TestNegativeEigenspace:
    def test_entangled_state_empty(self):
        assert negative_eigenspace(maximally_entangled(2)) == []

    def test_dephasing_choi_eigenpair(self):
        pairs = negative_eigenspace(choi_from_decoherence_factor(1.2))
        assert len(pairs) == 1
        lam, vec = pairs[0]
        assert lam == pytest.approx(-0.1)
        expected = np.zeros(4, dtype=complex)
        expected[0], expected[3] = 1 / np.sqrt(2), -1 / np.sqrt(2)
        overlap = abs(np.vdot(expected, vec))
        assert overlap == pytest.approx(1.0)

    def test_two_negatives(self):
        pairs = negative_eigenspace(TWO_NEG_STATE)
        assert [round(l, 10) for l, _ in pairs] == [-0.2, -0.2]


class TestConstructPair:
    def test_dephasing_choi_values(self):
        C = choi_from_decoherence_factor(1.2)
        H1, H2 = construct_rs_violating_pair(C)
        assert variance(H1, C) == pytest.approx(-0.11)
        assert variance(H2, C) == pytest.approx(3.0)
        assert rs_lhs(H1, H2, C) <= -0.33 + 1e-12

    def test_three_dim_example(self):
        H1, H2 = construct_rs_violating_pair(TWO_NEG_STATE)
        assert rs_lhs(H1, H2, TWO_NEG_STATE) < 0

    def test_not_constructible(self):
        with pytest.raises(PairNotConstructibleError):
            construct_rs_violating_pair(maximally_entangled(2))

    def test_always_succeeds_on_negative_input(self, rng):
        count = 0
        while count < 1000:
            M = random_unit_trace_hermitian(rng, 4)
            dec = hermitian_eig(M)
            if dec.eigenvalues[0] >= -1e-6:
                continue
            count += 1
            H1, H2 = construct_rs_violating_pair(M)
            assert rs_lhs(H1, H2, M) < 0
            lam = dec.eigenvalues[0]
            assert variance(H1, M) == pytest.approx(lam - lam * lam, abs=1e-10)
            assert variance(H2, M) == pytest.approx(M.shape[0] - 1, abs=1e-8)

    def test_violation_not_necessary(self):
        # projecting onto a positive eigenvector never violates anything
        C = choi_from_decoherence_factor(1.2)
        dec = hermitian_eig(C)
        P_plus = dec.projector(3)
        assert rs_lhs(P_plus, identity(4), C) == pytest.approx(0.0, abs=1e-12)


class TestProjectiveWitness:
    def test_entangled_state(self):
        vals = projective_witness_values(maximally_entangled(2))
        assert np.allclose(vals, [0.0, 0.0, 0.0, 1.0], atol=1e-12)

    def test_contains_negative_value(self):
        vals = projective_witness_values(choi_from_decoherence_factor(1.2))
        assert min(vals) == pytest.approx(-0.1)

    def test_valid_state_nonnegative(self, rng):
        vals = projective_witness_values(random_density(rng, 4))
        assert all(v >= -1e-10 for v in vals)


class TestVarianceWitness:
    def test_negative_projector(self):
        C = choi_from_decoherence_factor(1.2)
        W = hermitian_eig(C).projector(0)
        assert variance_witness(C, W) == pytest.approx(-0.11)

    def test_positive_projector_of_valid_state(self, rng):
        rho = random_density(rng, 4)
        W = hermitian_eig(rho).projector(3)
        assert variance_witness(rho, W) >= 0

    def test_improves_on_projective_value(self, rng):
        # variance = lam - lam^2 <= lam whenever lam < 0
        for _ in range(50):
            M = random_unit_trace_hermitian(rng, 4)
            dec = hermitian_eig(M)
            for i, lam in enumerate(dec.eigenvalues):
                if lam < 0:
                    assert variance_witness(M, dec.projector(i)) <= lam

    def test_witness_conditions(self, rng):
        # shipped witnesses: spectral projectors of a non-Markovian instance
        C_nm = choi_from_decoherence_factor(1.2)
        dec = hermitian_eig(C_nm)
        witnesses = [dec.projector(i) for i in range(4)]
        for _ in range(1000):
            C_m = random_density(rng, 4)
            for W in witnesses:
                assert np.trace(W @ C_m).real >= -1e-10
        assert min(np.trace(W @ C_nm).real for W in witnesses) < 0


class TestDetect:
    def test_entangled_state_consistent(self):
        report = detect(maximally_entangled(2))
        assert report.verdict is Verdict.MARKOVIAN_CONSISTENT
        assert report.rs_pair_value is None
        assert report.negative_count == 0

    def test_dephasing_choi_detected(self):
        report = detect(choi_from_decoherence_factor(1.2))
        assert report.verdict is Verdict.NON_MARKOVIAN_DETECTED
        assert report.rs_pair_value < 0
        assert report.min_eigenvalue == pytest.approx(-0.1)

    def test_two_negative_sum_advantage(self):
        report = detect(TWO_NEG_STATE)
        assert report.verdict is Verdict.NON_MARKOVIAN_DETECTED
        assert report.negative_count == 2
        lhs, rhs = report.sum_pair_value
        assert lhs == pytest.approx(-0.48)
        assert rhs == pytest.approx(0.0)
        # RS on the same projector pair stays positive
        dec = hermitian_eig(TWO_NEG_STATE)
        assert rs_lhs(dec.projector(0), dec.projector(1), TWO_NEG_STATE) == pytest.approx(0.056)

    def test_verdict_tracks_min_eigenvalue(self, rng):
        tol = 1e-9
        for _ in range(100):
            M = random_unit_trace_hermitian(rng, 4)
            report = detect(M, tol=tol)
            expected = (Verdict.NON_MARKOVIAN_DETECTED if report.min_eigenvalue < -tol
                        else Verdict.MARKOVIAN_CONSISTENT)
            assert report.verdict is expected
            if report.verdict is Verdict.NON_MARKOVIAN_DETECTED:
                assert report.rs_pair_value < 0

    def test_basis_choice_in_degenerate_cluster_is_irrelevant(self):
        # permuting the basis of TWO_NEG_STATE's degenerate eigenspace must not
        # change any scalar output
        perm = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=complex)
        rotated = perm @ TWO_NEG_STATE @ perm.conj().T
        a = detect(TWO_NEG_STATE)
        b = detect(rotated)
        assert a.min_eigenvalue == pytest.approx(b.min_eigenvalue, abs=1e-12)
        assert np.allclose(a.projective_values, b.projective_values, atol=1e-12)
        assert a.rs_pair_value == pytest.approx(b.rs_pair_value, abs=1e-10)
        assert a.sum_pair_value[0] == pytest.approx(b.sum_pair_value[0], abs=1e-10)
