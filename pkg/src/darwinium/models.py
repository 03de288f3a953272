"""Branching-interaction circuit families.

Three register layouts are supported:
  - "fig1-single-qubit-system": qubit 0 is the system, qubits 1..N the
    environment. The system is put in a superposition and each environment
    qubit receives one randomly parameterized conditional rotation.
  - "fig2-logical-pair-system": qubits 0,1 form a two-qubit logical system
    prepared in (|00> + |11>)/sqrt(2); qubits 2..N+1 are the environment and
    the conditional gates are keyed on the pointer labels "00"/"11".
  - "fig3-scrambled-environment": qubit 0 is the system, qubits 1..4 the
    environment, qubits 5..8 auxiliaries. The system writes a record of
    tunable quality into each environment qubit (rotation angle 2*theta) and
    each environment qubit is then partially scrambled into its auxiliary
    (rotation angle theta + 3*pi/2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .rng import substream
from .statevec import CZGate, Circuit, CircuitOp, ConditionalGateSpec, HGate, MAX_QUBITS, RyGate

MODEL_SINGLE = "fig1-single-qubit-system"
MODEL_LOGICAL_PAIR = "fig2-logical-pair-system"
MODEL_SCRAMBLED = "fig3-scrambled-environment"
MODELS = (MODEL_SINGLE, MODEL_LOGICAL_PAIR, MODEL_SCRAMBLED)

SCRAMBLE_AFTER = "after"
SCRAMBLE_INTERLEAVED = "interleaved"
CONTROL_ENV = "env"
CONTROL_AUX = "aux"


def sample_branch_params(j: int, rng: np.random.Generator) -> tuple[float, float]:
    """Draw (theta, phi) for pointer branch j: theta uniform on
    [(j-0.5)pi, (j+0.5)pi), phi uniform on [-pi, pi)."""
    if j not in (0, 1):
        raise ConfigurationError(f"branch index must be 0 or 1, got {j}")
    theta = rng.uniform((j - 0.5) * math.pi, (j + 0.5) * math.pi)
    phi = rng.uniform(-math.pi, math.pi)
    return float(theta), float(phi)


@dataclass(frozen=True)
class BranchingModelConfig:
    """Configuration of one branching-circuit realization.

    initial_amplitudes are the pointer weights (p, q); theta is only used by
    the scrambled-environment model. scramble_order/scramble_control pin the
    two layout choices of that model: whether environment-auxiliary gates run
    after all system-environment gates or interleaved with them, and which
    side of the pair acts as control.
    """

    model: str
    n_env: int
    initial_amplitudes: tuple[float, float] = (0.5, 0.5)
    theta: float | None = None
    rng_seed: int = 0
    scramble_order: str = SCRAMBLE_AFTER
    scramble_control: str = CONTROL_ENV

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigurationError(f"unknown model {self.model!r}; expected one of {MODELS}")
        p, q = self.initial_amplitudes
        if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
            raise ConfigurationError("pointer weights must lie in [0, 1]")
        if abs(p + q - 1.0) > 1e-12:
            raise ConfigurationError(f"pointer weights must sum to 1, got {p + q!r}")
        if self.n_env < 1:
            raise ConfigurationError("n_env must be >= 1")
        if self.model == MODEL_SCRAMBLED:
            if self.n_env != 4:
                raise ConfigurationError("scrambled-environment model requires n_env = 4")
            if self.theta is None or not math.isfinite(self.theta):
                raise ConfigurationError("scrambled-environment model requires finite theta")
            if self.scramble_order not in (SCRAMBLE_AFTER, SCRAMBLE_INTERLEAVED):
                raise ConfigurationError(f"unknown scramble_order {self.scramble_order!r}")
            if self.scramble_control not in (CONTROL_ENV, CONTROL_AUX):
                raise ConfigurationError(f"unknown scramble_control {self.scramble_control!r}")
        if self.n_qubits > MAX_QUBITS:
            raise ConfigurationError(f"register of {self.n_qubits} qubits exceeds cap {MAX_QUBITS}")

    @property
    def n_system(self) -> int:
        return 2 if self.model == MODEL_LOGICAL_PAIR else 1

    @property
    def n_aux(self) -> int:
        return self.n_env if self.model == MODEL_SCRAMBLED else 0

    @property
    def n_qubits(self) -> int:
        return self.n_system + self.n_env + self.n_aux

    @property
    def system_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.n_system))

    @property
    def env_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.n_system, self.n_system + self.n_env))

    @property
    def aux_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.n_system + self.n_env, self.n_qubits))

    @property
    def pointer_labels(self) -> tuple[str, str]:
        return ("00", "11") if self.model == MODEL_LOGICAL_PAIR else ("0", "1")


def _prep_ops(cfg: BranchingModelConfig) -> list[CircuitOp]:
    """System preparation: sqrt(p)|0..0> + sqrt(q)|1..1> on the system register."""
    p, q = cfg.initial_amplitudes
    equal = abs(p - 0.5) <= 1e-12
    if cfg.model == MODEL_LOGICAL_PAIR:
        if equal:
            # three Hadamards and a CZ make (|00> + |11>)/sqrt(2)
            return [HGate(0), HGate(1), CZGate(0, 1), HGate(1)]
        return [RyGate(0, 2.0 * math.acos(math.sqrt(p))), HGate(1), CZGate(0, 1), HGate(1)]
    if equal:
        return [HGate(0)]
    return [RyGate(0, 2.0 * math.acos(math.sqrt(p)))]


def _fig3_gate(controls: tuple[int, ...], target: int, theta: float) -> ConditionalGateSpec:
    # |0><0| x I + |1><1| x exp[-i theta sy / 2]; the sy axis is phi = pi/2
    return ConditionalGateSpec(controls, ("0", "1"), target, (0.0, 0.0), (theta, math.pi / 2.0))


def build_circuit(cfg: BranchingModelConfig) -> Circuit:
    """Construct the circuit for one realization of the configured model.

    Random branch angles (single/logical-pair models) are drawn from the
    substream of cfg.rng_seed, branch 0 before branch 1, one environment
    qubit at a time, so a config maps to exactly one circuit.
    """
    ops: list[CircuitOp] = list(_prep_ops(cfg))
    meta = {
        "model": cfg.model,
        "system_qubits": list(cfg.system_qubits),
        "env_qubits": list(cfg.env_qubits),
        "aux_qubits": list(cfg.aux_qubits),
    }
    if cfg.model == MODEL_SCRAMBLED:
        record_gates = [
            _fig3_gate(cfg.system_qubits, env_q, 2.0 * cfg.theta) for env_q in cfg.env_qubits
        ]
        scramble_gates = []
        for env_q, aux_q in zip(cfg.env_qubits, cfg.aux_qubits):
            ctrl, tgt = (env_q, aux_q) if cfg.scramble_control == CONTROL_ENV else (aux_q, env_q)
            scramble_gates.append(_fig3_gate((ctrl,), tgt, cfg.theta + 1.5 * math.pi))
        if cfg.scramble_order == SCRAMBLE_AFTER:
            ops += record_gates + scramble_gates
        else:
            for rec, scr in zip(record_gates, scramble_gates):
                ops += [rec, scr]
    else:
        rng = substream(cfg.rng_seed)
        for env_q in cfg.env_qubits:
            b0 = sample_branch_params(0, rng)
            b1 = sample_branch_params(1, rng)
            ops.append(
                ConditionalGateSpec(cfg.system_qubits, cfg.pointer_labels, env_q, b0, b1)
            )
    return Circuit(cfg.n_qubits, tuple(ops), meta)


def branch_angles(circuit: Circuit) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """(branch0, branch1) angle pairs of the conditional gates, in gate order."""
    return [
        (op.branch0, op.branch1) for op in circuit.ops if isinstance(op, ConditionalGateSpec)
    ]
