"""Single-qubit Kraus channels, layered circuit noise and trajectory sampling.

Noise is inserted per circuit layer: every gate is followed by a depolarizing
event with its gate-class error rate plus damping/dephasing events for the
gate duration, applied to each qubit the gate touches. Qubits idling through
a layer that contains a two-qubit gate receive the idle error rate and the
two-qubit-gate duration; idle qubits in single-qubit layers receive nothing.
Trajectories pick one Kraus operator per event with probability equal to the
norm of the resulting branch, so the trajectory average reproduces the exact
channel action.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ValidationError
from .statevec import (
    Circuit,
    CircuitOp,
    CZGate,
    ConditionalGateSpec,
    HGate,
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    RyGate,
    StateVector,
    apply_op,
    init_state,
)

_COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True)
class KrausSet:
    """Completeness-checked set of 2x2 Kraus operators."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        total = np.zeros((2, 2), dtype=complex)
        for k in self.operators:
            if k.shape != (2, 2):
                raise ValidationError(f"Kraus operator has shape {k.shape}, expected (2, 2)")
            total += k.conj().T @ k
        dev = float(np.max(np.abs(total - np.eye(2))))
        if dev > _COMPLETENESS_TOL:
            raise ValidationError(f"Kraus completeness violated by {dev:.3e}")


def amplitude_damping(t_ns: float, t1_us: float) -> KrausSet:
    """Relaxation toward |0> over t_ns nanoseconds with T1 in microseconds."""
    if t_ns < 0 or t1_us <= 0:
        raise ConfigurationError("need t_ns >= 0 and T1 > 0")
    gamma = 1.0 - math.exp(-t_ns / (t1_us * 1000.0))
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return KrausSet((k0, k1))


def pure_dephasing(t_ns: float, tphi_us: float) -> KrausSet:
    """Phase flip with p = (1 - exp(-t/Tphi))/2, so <sx> decays by exp(-t/Tphi)."""
    if t_ns < 0 or tphi_us <= 0:
        raise ConfigurationError("need t_ns >= 0 and Tphi > 0")
    p = 0.5 * (1.0 - math.exp(-t_ns / (tphi_us * 1000.0)))
    return KrausSet((math.sqrt(1.0 - p) * IDENTITY_2, math.sqrt(p) * PAULI_Z))


def depolarizing(p: float) -> KrausSet:
    """Replace the state by the maximally mixed one with probability p."""
    if not 0.0 <= p <= 4.0 / 3.0:
        raise ConfigurationError(f"depolarizing weight must lie in [0, 4/3], got {p}")
    return KrausSet(
        (
            math.sqrt(1.0 - 0.75 * p) * IDENTITY_2,
            math.sqrt(p / 4.0) * PAULI_X,
            math.sqrt(p / 4.0) * PAULI_Y,
            math.sqrt(p / 4.0) * PAULI_Z,
        )
    )


@dataclass(frozen=True)
class NoiseParams:
    """Gate durations (ns), error rates (probabilities) and coherence times (us).

    depol_conversion is the calibration knob mapping a reported gate error
    rate to the depolarizing weight p = depol_conversion * error.
    """

    t_sq_ns: float = 20.0
    t_sq_idle_ns: float = 47.0
    t_cz_ns: float = 47.0
    eps_sq: float = 0.00033
    eps_sq_idle: float = 0.00082
    eps_cz: float = 0.00238
    eps_readout: float = 0.008
    t1_us: float = 135.0
    tphi_us: float = 40.0
    shots: int = 5_000_000
    depol_conversion: float = 1.0

    def __post_init__(self):
        for name in ("t_sq_ns", "t_sq_idle_ns", "t_cz_ns"):
            if getattr(self, name) < 0:
                raise ConfigurationError(f"{name} must be >= 0")
        for name in ("eps_sq", "eps_sq_idle", "eps_cz", "eps_readout"):
            if not 0.0 <= getattr(self, name) < 1.0:
                raise ConfigurationError(f"{name} must lie in [0, 1)")
        if self.t1_us <= 0 or self.tphi_us <= 0:
            raise ConfigurationError("coherence times must be positive")


# default calibrations for the 9-qubit and 12-qubit devices
NINE_QUBIT_NOISE = NoiseParams()
TWELVE_QUBIT_NOISE = NoiseParams(
    eps_sq=0.00043, eps_sq_idle=0.00079, eps_cz=0.00277, shots=1_000_000
)


@dataclass(frozen=True)
class NoiseEvent:
    kind: str  # "depol" | "damp" | "dephase"
    qubit: int
    value: float  # depolarizing weight, or duration in ns


@dataclass(frozen=True)
class NoisyCircuit:
    """Gate ops interleaved with stochastic noise events, plus the parameters
    needed to materialize the Kraus sets."""

    n_qubits: int
    events: tuple[CircuitOp | NoiseEvent, ...]
    params: NoiseParams


def circuit_layers(circuit: Circuit) -> list[list[CircuitOp]]:
    """Greedy left-packed layering: an op joins the current layer unless it
    shares a qubit with one already there."""
    layers: list[list[CircuitOp]] = []
    used: set[int] = set()
    current: list[CircuitOp] = []
    for op in circuit.ops:
        qs = set(op.qubits)
        if current and qs & used:
            layers.append(current)
            current, used = [], set()
        current.append(op)
        used |= qs
    if current:
        layers.append(current)
    return layers


def _gate_class(op: CircuitOp) -> str:
    return "sq" if isinstance(op, (HGate, RyGate)) else "cz"


def noisy_gate_wrapper(circuit: Circuit, params: NoiseParams) -> NoisyCircuit:
    """Attach layered noise events to every gate of the circuit."""
    events: list[CircuitOp | NoiseEvent] = []
    for layer in circuit_layers(circuit):
        busy: set[int] = set()
        has_two_qubit = any(_gate_class(op) == "cz" for op in layer)
        for op in layer:
            events.append(op)
            eps, dur = (
                (params.eps_cz, params.t_cz_ns)
                if _gate_class(op) == "cz"
                else (params.eps_sq, params.t_sq_ns)
            )
            for q in op.qubits:
                busy.add(q)
                events.append(NoiseEvent("depol", q, params.depol_conversion * eps))
                events.append(NoiseEvent("damp", q, dur))
                events.append(NoiseEvent("dephase", q, dur))
        if has_two_qubit:
            for q in range(circuit.n_qubits):
                if q not in busy:
                    events.append(
                        NoiseEvent("depol", q, params.depol_conversion * params.eps_sq_idle)
                    )
                    events.append(NoiseEvent("damp", q, params.t_cz_ns))
                    events.append(NoiseEvent("dephase", q, params.t_cz_ns))
    return NoisyCircuit(circuit.n_qubits, tuple(events), params)


def _kraus_for_event(event: NoiseEvent, params: NoiseParams, cache: dict) -> KrausSet:
    key = (event.kind, event.value)
    if key not in cache:
        if event.kind == "depol":
            cache[key] = depolarizing(event.value)
        elif event.kind == "damp":
            cache[key] = amplitude_damping(event.value, params.t1_us)
        elif event.kind == "dephase":
            cache[key] = pure_dephasing(event.value, params.tphi_us)
        else:
            raise ConfigurationError(f"unknown noise event kind {event.kind!r}")
    return cache[key]


def _apply_2x2(amps: np.ndarray, n: int, qubit: int, k: np.ndarray) -> np.ndarray:
    ax = n - 1 - qubit
    t = np.moveaxis(amps.reshape([2] * n), ax, -1)
    t = np.moveaxis(t @ k.T, -1, ax)
    return np.ascontiguousarray(t).reshape(-1)


def apply_channel_trajectory(
    state: StateVector, qubit: int, kraus: KrausSet, rng: np.random.Generator
) -> StateVector:
    """Sample one Kraus branch with its Born weight and renormalize."""
    n = state.n_qubits
    branches = [_apply_2x2(state.amps, n, qubit, k) for k in kraus.operators]
    weights = np.array([float(np.sum(np.abs(b) ** 2)) for b in branches])
    total = weights.sum()
    if total < 1e-12:
        raise ValidationError("all Kraus branches have vanishing weight")
    pick = int(np.searchsorted(np.cumsum(weights / total), rng.random(), side="right"))
    pick = min(pick, len(branches) - 1)
    branch = branches[pick] / math.sqrt(weights[pick])
    return StateVector(n, branch)


def apply_channel_exact(rho: np.ndarray, n: int, qubit: int, kraus: KrausSet) -> np.ndarray:
    """Exact Kraus-sum action on one qubit of an n-qubit density matrix."""
    d = 2**n
    if rho.shape != (d, d):
        raise ValidationError(f"density matrix shape {rho.shape} does not match {n} qubits")
    out = np.zeros_like(rho)
    ax = n - 1 - qubit
    for k in kraus.operators:
        t = rho.reshape([2] * (2 * n))
        t = np.moveaxis(np.moveaxis(t, ax, -1) @ k.T, -1, ax)  # K on the row index
        t = np.moveaxis(np.moveaxis(t, n + ax, -1) @ k.conj().T, -1, n + ax)  # K^dag on the column
        out += t.reshape(d, d)
    return out


def run_trajectory(
    noisy: NoisyCircuit, rng: np.random.Generator, initial: StateVector | None = None
) -> StateVector:
    """Execute one stochastic trajectory of the noisy circuit."""
    state = init_state(noisy.n_qubits) if initial is None else initial
    cache: dict = {}
    for event in noisy.events:
        if isinstance(event, NoiseEvent):
            state = apply_channel_trajectory(
                state, event.qubit, _kraus_for_event(event, noisy.params, cache), rng
            )
        else:
            state = apply_op(state, event)
    return state


def readout_flip(bits: str, eps: float, rng: np.random.Generator) -> str:
    """Flip each classical bit independently with probability eps."""
    if not 0.0 <= eps < 1.0:
        raise ConfigurationError(f"readout error must lie in [0, 1), got {eps}")
    flips = rng.random(len(bits)) < eps
    return "".join(("1" if c == "0" else "0") if f else c for c, f in zip(bits, flips))


def readout_channel(rho: np.ndarray, n: int, qubits: tuple[int, ...], eps: float) -> np.ndarray:
    """Fold symmetric readout misassignment into a reconstructed density matrix.

    Independent flips with probability eps shrink every measured one-qubit
    Pauli expectation by (1 - 2 eps), which on the matrix is a per-qubit
    depolarizing channel with weight 2 eps.
    """
    out = rho
    ks = depolarizing(2.0 * eps)
    for q in qubits:
        out = apply_channel_exact(out, n, q, ks)
    return out
