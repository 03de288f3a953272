"""Closed-form overlap/eigenvalue formulas checked against direct linear algebra."""
import math

import numpy as np
import pytest

from conftest import record_matrix
from darwinium.errors import ConfigurationError
from darwinium.info import FragmentPartition, mutual_information
from darwinium.models import MODEL_SINGLE, BranchingModelConfig, branch_angles, build_circuit
from darwinium.oracle import (
    binary_entropy,
    closed_form_mi,
    lambda_plus,
    record_overlap,
    reduced_matrices,
    homogeneous_mi,
)
from darwinium.statevec import run_circuit


class TestRecordOverlap:
    def test_identical_records_overlap_one(self):
        assert record_overlap((0.9, 0.4), (0.9, 0.4)) == pytest.approx(1.0)

    def test_orthogonal_records_overlap_zero(self):
        assert abs(record_overlap((0.0, 0.3), (math.pi, -1.2))) < 1e-12

    def test_matches_explicit_record_vectors(self, rng):
        e0 = np.array([1.0, 0.0], dtype=complex)
        for _ in range(50):
            b0 = (rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi))
            b1 = (rng.uniform(0, 2 * math.pi), rng.uniform(-math.pi, math.pi))
            r0 = record_matrix(*b0) @ e0
            r1 = record_matrix(*b1) @ e0
            assert abs(record_overlap(b0, b1) - np.vdot(r1, r0)) < 1e-12

    def test_magnitude_bounded(self, rng):
        for _ in range(50):
            s = record_overlap(
                (rng.uniform(-9, 9), rng.uniform(-9, 9)),
                (rng.uniform(-9, 9), rng.uniform(-9, 9)),
            )
            assert abs(s) <= 1.0 + 1e-12


class TestBinaryEntropy:
    def test_half_is_one_bit(self):
        assert binary_entropy(0.5) == 1.0

    def test_endpoints_are_zero(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_quarter(self):
        assert binary_entropy(0.25) == pytest.approx(0.8112781244591328, abs=1e-12)

    def test_symmetric(self, rng):
        for x in rng.uniform(0, 1, 20):
            assert binary_entropy(x) == pytest.approx(binary_entropy(1 - x), abs=1e-12)

    def test_out_of_range_rejected(self):
        with pytest.raises(ConfigurationError):
            binary_entropy(1.2)


class TestLambdaPlus:
    def test_symmetric_orthogonal_records(self):
        assert lambda_plus(1, 3, 0.5, [0.0, 0.0, 0.0]) == pytest.approx(0.5)

    def test_degenerate_weight(self):
        assert lambda_plus(1, 3, 1.0, [0.3, 0.1, 0.9]) == pytest.approx(1.0)

    def test_empty_range_is_pure(self):
        assert lambda_plus(5, 4, 0.5, [0.3, 0.1, 0.9, 0.2]) == pytest.approx(1.0)

    def test_matches_two_level_eigenvalues(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 6))
            m = int(rng.integers(0, n + 1))
            p = float(rng.uniform(0.05, 0.95))
            s = rng.uniform(-1, 1, n) * np.exp(1j * rng.uniform(-math.pi, math.pi, n))
            rho_s, rho_sf, rho_sc = reduced_matrices(p, s, m)
            for rho, (a, b) in ((rho_s, (1, n)), (rho_sf, (m + 1, n)), (rho_sc, (1, m))):
                lam = lambda_plus(a, b, p, s)
                w = np.linalg.eigvalsh(rho)
                assert w[-1] == pytest.approx(lam, abs=1e-12)
                assert w[0] == pytest.approx(1.0 - lam, abs=1e-12)


class TestClosedFormMi:
    def test_perfect_records_half_weight(self):
        assert closed_form_mi(0.5, [0.0] * 4, 2, 4) == pytest.approx(1.0)

    def test_full_fragment_doubles(self):
        assert closed_form_mi(0.5, [0.0] * 4, 4, 4) == pytest.approx(2.0)

    def test_empty_fragment_zero(self):
        assert closed_form_mi(0.5, [0.3] * 4, 0, 4) == 0.0

    def test_degenerate_weight_zero(self):
        for m in range(5):
            assert closed_form_mi(1.0, [0.4] * 4, m, 4) == pytest.approx(0.0, abs=1e-12)

    def test_oversized_fragment_rejected(self):
        with pytest.raises(ConfigurationError):
            closed_form_mi(0.5, [0.0] * 3, 4, 3)

    def test_fragment_complement_sum(self, rng):
        # I(S:first m) + I(S:last n-m) = 2 H_S; the complement fragment is the
        # reversed list's first n-m entries
        n = 6
        for _ in range(20):
            p = float(rng.uniform(0.1, 0.9))
            s = rng.uniform(-1, 1, n)
            total = 2.0 * binary_entropy(lambda_plus(1, n, p, s))
            for m in range(n + 1):
                lhs = closed_form_mi(p, s, m, n) + closed_form_mi(p, s[::-1], n - m, n)
                assert lhs == pytest.approx(total, abs=1e-12)

    def test_complementarity_homogeneous_records(self, rng):
        # with identical records any m qubits are interchangeable, so the
        # first-m form already satisfies I(m) + I(n-m) = 2 H_S
        n = 6
        for c in (0.0, 0.35, 0.8):
            s = [c] * n
            total = 2.0 * binary_entropy(lambda_plus(1, n, 0.5, s))
            for m in range(n + 1):
                lhs = closed_form_mi(0.5, s, m, n) + closed_form_mi(0.5, s, n - m, n)
                assert lhs == pytest.approx(total, abs=1e-12)

    def test_monotone_in_fragment_size(self, rng):
        n = 7
        for _ in range(20):
            s = rng.uniform(-0.95, 0.95, n)
            vals = [closed_form_mi(0.5, s, m, n) for m in range(n + 1)]
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


class TestReducedMatrices:
    def test_no_decoherence_keeps_purity(self):
        rho_s, _, _ = reduced_matrices(0.5, [1.0] * 5, 2)
        w = np.linalg.eigvalsh(rho_s)
        assert w[-1] == pytest.approx(1.0, abs=1e-12)

    def test_homogeneous_off_diagonal(self):
        p, dtheta, n = 0.3, 0.8, 6
        s = [math.cos(dtheta / 2.0)] * n
        rho_s, _, _ = reduced_matrices(p, s, 0)
        expect = math.sqrt(p * (1 - p)) * math.cos(dtheta / 2.0) ** n
        assert rho_s[0, 1] == pytest.approx(expect, abs=1e-12)

    def test_trace_and_hermiticity(self, rng):
        s = rng.uniform(-1, 1, 4) * np.exp(1j * rng.uniform(-math.pi, math.pi, 4))
        for rho in reduced_matrices(0.4, s, 2):
            assert np.trace(rho) == pytest.approx(1.0)
            assert np.max(np.abs(rho - rho.conj().T)) < 1e-12


class TestHomogeneousMi:
    def test_matches_general_form(self):
        for dtheta in (0.0, 0.5, 1.2, math.pi):
            s = [math.cos(dtheta / 2.0)] * 5
            for m in range(6):
                assert homogeneous_mi(dtheta, 0.5, m, 5) == pytest.approx(
                    closed_form_mi(0.5, s, m, 5), abs=1e-12
                )


class TestOracleAgainstSimulation:
    def test_single_draw_all_fragment_sizes(self):
        cfg = BranchingModelConfig(MODEL_SINGLE, 6, rng_seed=404)
        circuit = build_circuit(cfg)
        state = run_circuit(circuit)
        overlaps = [record_overlap(b0, b1) for b0, b1 in branch_angles(circuit)]
        env = list(cfg.env_qubits)
        for m in range(7):
            part = FragmentPartition((0,), tuple(env[:m]), tuple(env[m:]))
            i_sim = mutual_information(state, part)
            i_oracle = closed_form_mi(0.5, overlaps, m, 6)
            assert i_sim == pytest.approx(i_oracle, abs=1e-9)
