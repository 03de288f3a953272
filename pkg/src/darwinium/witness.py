"""Local-observable classicality witness.

The witness couples a system operator to a single record qubit,
O = A (x) B (x) identity-elsewhere. When the joint state branches over
orthogonal records, any A that is purely off-diagonal in the pointer basis
has zero expectation, while on product states <O> keeps its uncoupled
value. Swept against the conditional-gate angle this yields a zero window
that tracks the classical plateau of mutual information.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, ValidationError
from .info import FragmentPartition, mutual_information
from .models import MODEL_SCRAMBLED, BranchingModelConfig, build_circuit
from .oracle import binary_entropy
from .statevec import PAULI_X, PAULI_Y, PAULI_Z, StateVector, run_circuit

HERMITIAN_TOL = 1e-12
IMAG_TOL = 1e-10

DEFAULT_RECORD_OP = (2.0 * PAULI_Z + PAULI_Y) / math.sqrt(5.0)


def _check_hermitian(mat: np.ndarray, name: str) -> np.ndarray:
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {mat.shape}")
    dim = mat.shape[0]
    if dim & (dim - 1) or dim < 2:
        raise ValidationError(f"{name} must act on whole qubits, got dim {dim}")
    dev = float(np.max(np.abs(mat - mat.conj().T)))
    if dev > HERMITIAN_TOL:
        raise ValidationError(f"{name} deviates from hermiticity by {dev:.3e}")
    return mat


@dataclass(frozen=True)
class WitnessObservable:
    """A acts on the listed system qubits, B on one record qubit; the rest
    of the register is left untouched."""

    system_op: np.ndarray
    record_op: np.ndarray
    system_qubits: tuple[int, ...] = (0,)
    record_qubit: int = 1

    def __post_init__(self):
        object.__setattr__(self, "system_op", _check_hermitian(self.system_op, "system_op"))
        object.__setattr__(self, "record_op", _check_hermitian(self.record_op, "record_op"))
        if self.record_op.shape != (2, 2):
            raise ConfigurationError("record operator must be a single-qubit matrix")
        if self.system_op.shape[0] != 2 ** len(self.system_qubits):
            raise ConfigurationError(
                "system operator dimension does not match the listed qubits"
            )
        if len(set(self.system_qubits)) != len(self.system_qubits):
            raise ConfigurationError("system qubits must be distinct")
        if self.record_qubit in self.system_qubits:
            raise ConfigurationError("record qubit overlaps the system register")
        if any(q < 0 for q in self.system_qubits) or self.record_qubit < 0:
            raise ConfigurationError("qubit indices must be non-negative")

    @property
    def record_norm(self) -> float:
        """Frobenius norm of B, recorded so rescaled witnesses stay comparable."""
        return float(np.linalg.norm(self.record_op))


def default_witness(record_qubit: int = 1) -> WitnessObservable:
    """sigma_x on the system, (2 sigma_z + sigma_y)/sqrt(5) on one record."""
    return WitnessObservable(PAULI_X, DEFAULT_RECORD_OP, (0,), record_qubit)


def _apply_local(t: np.ndarray, n: int, qubits: tuple[int, ...], mat: np.ndarray) -> np.ndarray:
    """Apply a (not necessarily unitary) matrix to the listed qubits of a raw
    amplitude tensor; qubits[0] is the least significant matrix bit."""
    k = len(qubits)
    src = [n - 1 - q for q in reversed(qubits)]
    moved = np.moveaxis(t, src, range(k))
    flat = mat @ moved.reshape(2**k, -1)
    return np.moveaxis(flat.reshape(moved.shape), range(k), src)


def expectation(state: StateVector, w: WitnessObservable) -> float:
    """<state| A (x) B (x) 1 |state>, checked real."""
    n = state.n_qubits
    if w.record_qubit >= n or any(q >= n for q in w.system_qubits):
        raise ConfigurationError("witness placement exceeds the register")
    phi = _apply_local(state.tensor(), n, w.system_qubits, w.system_op)
    phi = _apply_local(phi, n, (w.record_qubit,), w.record_op)
    val = complex(np.vdot(state.amps, phi.reshape(-1)))
    if abs(val.imag) > IMAG_TOL * max(1.0, abs(val.real)):
        raise ValidationError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def _final_state(cfg: BranchingModelConfig, theta: float) -> StateVector:
    return run_circuit(build_circuit(replace(cfg, theta=float(theta))))


def witness_sweep(
    cfg: BranchingModelConfig,
    thetas,
    w: WitnessObservable | None = None,
) -> list[tuple[float, float]]:
    """Noiseless <O> on the final scrambled-model state for each angle."""
    if cfg.model != MODEL_SCRAMBLED:
        raise ConfigurationError("witness sweeps are defined for the scrambled model")
    if w is None:
        w = default_witness()
    return [(float(th), expectation(_final_state(cfg, th), w)) for th in thetas]


def _contiguous_window(
    thetas: tuple[float, ...], flags: list[bool], center: float
) -> tuple[float, float] | None:
    """The maximal run of consecutive flagged grid points around the point
    nearest to center; None when that point is not flagged."""
    pivot = min(range(len(thetas)), key=lambda i: abs(thetas[i] - center))
    if not flags[pivot]:
        return None
    lo = pivot
    while lo > 0 and flags[lo - 1]:
        lo -= 1
    hi = pivot
    while hi < len(thetas) - 1 and flags[hi + 1]:
        hi += 1
    return (thetas[lo], thetas[hi])


@dataclass(frozen=True)
class CorrespondenceReport:
    """Witness zero window versus the plateau of two-qubit-fragment mutual
    information over the same angle grid."""

    thetas: tuple[float, ...]
    witness_values: tuple[float, ...]
    mi_values: tuple[float, ...]
    witness_tol: float
    mi_tol: float
    system_entropy: float
    zero_window: tuple[float, float] | None
    plateau_window: tuple[float, float] | None

    @staticmethod
    def window_contains(window: tuple[float, float] | None, theta: float) -> bool:
        return window is not None and window[0] <= theta <= window[1]

    def rows(self) -> list[dict]:
        return [
            {"theta": t, "witness": o, "mi_m2": i}
            for t, o, i in zip(self.thetas, self.witness_values, self.mi_values)
        ]


def witness_vs_mi_correspondence(
    cfg: BranchingModelConfig,
    thetas,
    w: WitnessObservable | None = None,
    witness_tol: float = 0.02,
    mi_tol: float = 0.05,
) -> CorrespondenceReport:
    """Per angle: <O> and the mean mutual information over every two-qubit
    environment fragment, plus the windows where each sits at its classical
    value (witness near zero, information near the system entropy)."""
    if cfg.model != MODEL_SCRAMBLED:
        raise ConfigurationError("correspondence reports need the scrambled model")
    if w is None:
        w = default_witness()
    env = cfg.env_qubits
    pairs = list(itertools.combinations(env, 2))
    h_s = binary_entropy(cfg.initial_amplitudes[0])

    theta_list: list[float] = []
    witness_values: list[float] = []
    mi_values: list[float] = []
    for th in thetas:
        state = _final_state(cfg, th)
        theta_list.append(float(th))
        witness_values.append(expectation(state, w))
        total = 0.0
        for pair in pairs:
            rest = tuple(q for q in env if q not in pair)
            part = FragmentPartition(cfg.system_qubits, pair, rest)
            total += mutual_information(state, part)
        mi_values.append(total / len(pairs))

    ts = tuple(theta_list)
    zero_flags = [abs(o) <= witness_tol for o in witness_values]
    plateau_flags = [abs(i - h_s) <= mi_tol for i in mi_values]
    center = math.pi / 2
    return CorrespondenceReport(
        ts,
        tuple(witness_values),
        tuple(mi_values),
        witness_tol,
        mi_tol,
        h_s,
        _contiguous_window(ts, zero_flags, center),
        _contiguous_window(ts, plateau_flags, center),
    )


def sampled_expectation(
    state: StateVector,
    w: WitnessObservable,
    shots: int,
    rng: np.random.Generator,
    noise=None,
) -> float:
    """Shot-based estimate: decompose A and B into Pauli strings and sample
    each non-identity string with the full shot budget, mirroring how the
    observable is measured in hardware."""
    from .tomography import (
        _LABEL_AXIS_SIGN,
        TomographySetting,
        matrix_to_pauli_coeffs,
        sample_measurements,
    )

    n = state.n_qubits
    s = len(w.system_qubits)
    ca = matrix_to_pauli_coeffs(w.system_op) / 2**s
    cb = matrix_to_pauli_coeffs(w.record_op) / 2.0
    if float(np.max(np.abs(ca.imag))) > 1e-12 or float(np.max(np.abs(cb.imag))) > 1e-12:
        raise ValidationError("hermitian operators must have real Pauli weights")
    label_for_axis = {axis: (lab, sign) for lab, (axis, sign) in _LABEL_AXIS_SIGN.items()}

    total = 0.0
    for pidx in np.ndindex(*ca.shape):
        for q in range(4):
            weight = float(ca[pidx].real * cb[q].real)
            if abs(weight) < 1e-14:
                continue
            # coefficient axis j of ca belongs to system qubit s-1-j
            assign = {w.system_qubits[i]: pidx[s - 1 - i] for i in range(s)}
            assign[w.record_qubit] = q
            support = {qq: p for qq, p in assign.items() if p != 0}
            if not support:
                total += weight
                continue
            labels = tuple(
                label_for_axis[support[qq]][0] if qq in support else "I" for qq in range(n)
            )
            rec = sample_measurements(state, TomographySetting(labels), shots, rng, noise)
            est = 0.0
            seen = 0.0
            for key, val in rec.counts.items():
                v = 1.0
                for qq, p in support.items():
                    bit = int(key[n - 1 - qq])
                    v *= label_for_axis[p][1] * (1.0 - 2.0 * bit)
                est += v * val
                seen += val
            total += weight * est / seen
    return total
