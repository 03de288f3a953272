"""Kraus channels: analytic limits, Monte-Carlo consistency, layer packing."""
import math

import numpy as np
import pytest

from darwinium.errors import ConfigurationError, ValidationError
from darwinium.noise import (
    KrausSet,
    NoiseEvent,
    NoiseParams,
    amplitude_damping,
    apply_channel_exact,
    apply_channel_trajectory,
    circuit_layers,
    depolarizing,
    noisy_gate_wrapper,
    pure_dephasing,
    readout_channel,
    readout_flip,
    run_trajectory,
)
from darwinium.rng import substream
from darwinium.statevec import (
    CZGate,
    Circuit,
    HGate,
    PAULI_X,
    PAULI_Z,
    RyGate,
    StateVector,
    init_state,
    run_circuit,
)


class TestKrausSets:
    def test_incomplete_set_rejected(self):
        with pytest.raises(ValidationError):
            KrausSet((0.5 * np.eye(2, dtype=complex),))

    def test_damping_zero_time_is_identity(self):
        k0, k1 = amplitude_damping(0.0, 100.0).operators
        assert np.allclose(k0, np.eye(2))
        assert np.allclose(k1, 0.0)

    def test_damping_one_lifetime(self):
        # t equal to T1 decays with probability 1 - 1/e
        k0, k1 = amplitude_damping(135_000.0, 135.0).operators
        gamma = 1.0 - math.exp(-1.0)
        assert k1[0, 1] == pytest.approx(math.sqrt(gamma))
        assert k0[1, 1] == pytest.approx(math.sqrt(1.0 - gamma))

    def test_damping_completeness_random_times(self, rng):
        for _ in range(10):
            amplitude_damping(float(rng.uniform(0, 500)), float(rng.uniform(1, 200)))

    def test_dephasing_shrinks_coherence(self):
        t_ns, tphi_us = 80.0, 0.2
        plus = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
        out = apply_channel_exact(plus, 1, 0, pure_dephasing(t_ns, tphi_us))
        expect = math.exp(-t_ns / (tphi_us * 1000.0))
        assert np.real(np.trace(out @ PAULI_X)) == pytest.approx(expect, abs=1e-12)

    def test_depolarizing_identity_at_zero(self):
        ops = depolarizing(0.0).operators
        assert np.allclose(ops[0], np.eye(2))
        assert all(np.allclose(k, 0.0) for k in ops[1:])

    def test_depolarizing_full_mixing(self):
        rho = np.diag([1.0, 0.0]).astype(complex)
        out = apply_channel_exact(rho, 1, 0, depolarizing(1.0))
        assert np.allclose(out, np.eye(2) / 2)

    def test_depolarizing_z_expectation(self, rng):
        for p in (0.1, 0.5, 0.9):
            rho = np.diag([1.0, 0.0]).astype(complex)
            out = apply_channel_exact(rho, 1, 0, depolarizing(p))
            assert np.real(np.trace(out @ PAULI_Z)) == pytest.approx(1.0 - p, abs=1e-12)

    def test_bad_probability_rejected(self):
        with pytest.raises(ConfigurationError):
            depolarizing(1.5)
        with pytest.raises(ConfigurationError):
            amplitude_damping(10.0, -1.0)


class TestExactChannel:
    def test_matches_manual_kraus_sum(self, rng):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = a @ a.conj().T
        rho /= np.trace(rho)
        ks = amplitude_damping(40.0, 0.1)
        out = apply_channel_exact(rho, 2, 1, ks)
        manual = np.zeros_like(rho)
        for k in ks.operators:
            full = np.kron(k, np.eye(2))  # qubit 1 is the high bit
            manual += full @ rho @ full.conj().T
        assert np.max(np.abs(out - manual)) < 1e-12


class TestTrajectorySampling:
    def test_identity_channel_leaves_state(self, rng):
        ks = KrausSet((np.eye(2, dtype=complex),))
        state = init_state(2, "01")
        out = apply_channel_trajectory(state, 0, ks, substream(1))
        assert np.allclose(out.amps, state.amps)

    def test_full_depolarizing_kills_z_expectation(self):
        rng = substream(42)
        ks = depolarizing(1.0)
        total = 0.0
        n = 100_000
        state = init_state(1)
        for _ in range(n):
            out = apply_channel_trajectory(state, 0, ks, rng)
            total += abs(out.amps[0]) ** 2 - abs(out.amps[1]) ** 2
        assert abs(total / n) < 0.02

    def test_damping_survival_probability(self):
        rng = substream(43)
        ks = amplitude_damping(135_000.0, 135.0)  # one lifetime
        state = init_state(1, "1")
        n = 100_000
        survived = 0.0
        for _ in range(n):
            out = apply_channel_trajectory(state, 0, ks, rng)
            survived += abs(out.amps[1]) ** 2
        assert survived / n == pytest.approx(math.exp(-1.0), abs=0.01)

    def test_average_matches_exact_channel(self, rng):
        amps = rng.normal(size=2) + 1j * rng.normal(size=2)
        state = StateVector(1, amps / np.linalg.norm(amps))
        ks = amplitude_damping(30.0, 0.05)
        stream = substream(99)
        n = 100_000
        acc = np.zeros((2, 2), dtype=complex)
        for _ in range(n):
            out = apply_channel_trajectory(state, 0, ks, stream)
            acc += np.outer(out.amps, out.amps.conj())
        avg = acc / n
        exact = apply_channel_exact(np.outer(amps, amps.conj()) / np.vdot(amps, amps), 1, 0, ks)
        dist = 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(avg - exact))))
        assert dist < 0.02


class TestNoiseParams:
    def test_probability_range_enforced(self):
        with pytest.raises(ConfigurationError):
            NoiseParams(eps_cz=1.5)

    def test_coherence_times_positive(self):
        with pytest.raises(ConfigurationError):
            NoiseParams(t1_us=0.0)


class TestCircuitLayers:
    def test_disjoint_ops_share_layer(self):
        circuit = Circuit(4, (HGate(0), HGate(1), CZGate(0, 1), HGate(0)))
        layers = circuit_layers(circuit)
        assert [len(layer) for layer in layers] == [2, 1, 1]

    def test_sequential_same_qubit_splits(self):
        circuit = Circuit(1, (HGate(0), HGate(0)))
        assert len(circuit_layers(circuit)) == 2


class TestNoisyGateWrapper:
    def test_cz_layer_idle_qubits_get_idle_noise(self):
        circuit = Circuit(4, (CZGate(0, 1),))
        noisy = noisy_gate_wrapper(circuit, NoiseParams())
        idle = [
            e
            for e in noisy.events
            if isinstance(e, NoiseEvent)
            and e.kind == "depol"
            and e.value == NoiseParams().eps_sq_idle
        ]
        assert sorted(e.qubit for e in idle) == [2, 3]

    def test_single_qubit_layer_has_no_idle_noise(self):
        circuit = Circuit(3, (HGate(0),))
        noisy = noisy_gate_wrapper(circuit, NoiseParams())
        events = [e for e in noisy.events if isinstance(e, NoiseEvent)]
        assert all(e.qubit == 0 for e in events)

    def test_event_counts_per_gate(self):
        circuit = Circuit(2, (HGate(0), CZGate(0, 1)))
        noisy = noisy_gate_wrapper(circuit, NoiseParams())
        events = [e for e in noisy.events if isinstance(e, NoiseEvent)]
        # 3 events for the Hadamard qubit, 3 for each CZ qubit
        assert len(events) == 9

    def test_noise_free_limit_reproduces_ideal_state(self):
        circuit = Circuit(
            3, (HGate(0), CZGate(0, 1), RyGate(2, 0.8), CZGate(1, 2), HGate(2))
        )
        params = NoiseParams(
            eps_sq=0.0, eps_sq_idle=0.0, eps_cz=0.0, eps_readout=0.0, t1_us=1e30, tphi_us=1e30
        )
        noisy = noisy_gate_wrapper(circuit, params)
        out = run_trajectory(noisy, substream(7))
        ideal = run_circuit(circuit)
        assert np.max(np.abs(out.amps - ideal.amps)) < 1e-12


class TestReadout:
    def test_zero_error_identity(self):
        assert readout_flip("0110", 0.0, substream(1)) == "0110"

    def test_certain_flip(self):
        rng = substream(2)
        # eps must stay below 1; 1 - 1e-12 flips everything in practice
        flipped = readout_flip("0000000000", 1.0 - 1e-12, rng)
        assert flipped == "1111111111"

    def test_flip_fraction_statistics(self):
        rng = substream(3)
        out = readout_flip("0" * 1_000_000, 0.008, rng)
        fraction = out.count("1") / 1_000_000
        assert fraction == pytest.approx(0.008, abs=0.0005)

    def test_channel_form_on_ground_state(self):
        rho = np.diag([1.0, 0.0]).astype(complex)
        eps = 0.008
        out = readout_channel(rho, 1, (0,), eps)
        assert out[0, 0] == pytest.approx(1.0 - eps, abs=1e-12)
        assert out[1, 1] == pytest.approx(eps, abs=1e-12)

    def test_bad_eps_rejected(self):
        with pytest.raises(ConfigurationError):
            readout_flip("0", 1.5, substream(0))
