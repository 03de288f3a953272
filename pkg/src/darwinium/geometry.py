"""Geometric (ensemble-of-conditional-states) view of branching states.

Conditioning the environment on computational outcomes decomposes a pure
state into weighted conditional system states: per joint outcome the state is
pure, per fragment outcome (rest of the environment traced out) it is mixed.
Weights and states are expressed in the two-dimensional pointer subspace of
the system register; any weight outside that subspace is discarded, reported,
and the remainder renormalized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegenerateInputError
from .info import FragmentPartition
from .statevec import PAULI_X, PAULI_Y, PAULI_Z, StateVector

_WEIGHT_FLOOR = 1e-12


@dataclass(frozen=True)
class PointerBasis:
    """The two pointer labels of the system register, listed-order chars."""

    label0: str
    label1: str

    def __post_init__(self):
        if len(self.label0) != len(self.label1):
            raise ConfigurationError("pointer labels must have equal length")
        for lab in (self.label0, self.label1):
            if any(c not in "01" for c in lab):
                raise ConfigurationError(f"pointer label {lab!r} must be a 0/1 string")
        if self.label0 == self.label1:
            raise ConfigurationError("pointer labels must be distinct")

    def indices(self) -> tuple[int, int]:
        def idx(label: str) -> int:
            return sum(int(c) << i for i, c in enumerate(label))

        return idx(self.label0), idx(self.label1)


@dataclass(frozen=True)
class GeometricEntry:
    """One conditional system state: weight, environment outcome labels and
    the state in the pointer subspace (2-vector if pure, 2x2 matrix if mixed)."""

    weight: float
    f_label: str
    fbar_label: str | None
    state: np.ndarray
    bloch: tuple[float, float, float]

    @property
    def pure(self) -> bool:
        return self.state.ndim == 1


@dataclass(frozen=True)
class GeometricEnsemble:
    entries: tuple[GeometricEntry, ...]
    discarded_fraction: float
    kind: str  # "joint" (per environment outcome) or "fragment" (per fragment outcome)

    def total_weight(self) -> float:
        return float(sum(e.weight for e in self.entries))


def bloch_coordinates(state: np.ndarray) -> tuple[float, float, float]:
    """(x, y, z) of a two-level pure vector or density matrix."""
    state = np.asarray(state)
    rho = np.outer(state, state.conj()) if state.ndim == 1 else state
    return (
        float(np.real(np.trace(rho @ PAULI_X))),
        float(np.real(np.trace(rho @ PAULI_Y))),
        float(np.real(np.trace(rho @ PAULI_Z))),
    )


def polar_angle(bloch: tuple[float, float, float]) -> float:
    """Angle from the |0>-pole; a zero-length Bloch vector sits at pi/2."""
    norm = math.sqrt(sum(c * c for c in bloch))
    if norm < 1e-12:
        return math.pi / 2.0
    return math.acos(max(-1.0, min(1.0, bloch[2] / norm)))


def _system_env_matrix(
    state: StateVector, part: FragmentPartition
) -> tuple[np.ndarray, int, int]:
    part.validate_for(state.n_qubits)
    if part.auxiliaries(state.n_qubits):
        raise ConfigurationError("geometric decomposition requires a partition of all qubits")
    env = part.fragment + part.complement
    n = state.n_qubits
    perm = [n - 1 - q for q in reversed(part.system)] + [n - 1 - q for q in reversed(env)]
    d_s = 2 ** len(part.system)
    mat = state.tensor().transpose(perm).reshape(d_s, -1)
    return mat, len(part.fragment), len(part.complement)


def _outcome_labels(e: int, m: int, nc: int) -> tuple[str, str]:
    f_label = "".join(str((e >> i) & 1) for i in range(m))
    fbar_label = "".join(str((e >> (m + j)) & 1) for j in range(nc))
    return f_label, fbar_label


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    for comp in vec:
        if abs(comp) > 1e-9:
            return vec * (comp.conjugate() / abs(comp))
    return vec


def geometric_decomposition(
    state: StateVector, part: FragmentPartition, pointer: PointerBasis
) -> GeometricEnsemble:
    """Pure conditional system states keyed by joint environment outcomes."""
    mat, m, nc = _system_env_matrix(state, part)
    i0, i1 = pointer.indices()
    if max(i0, i1) >= mat.shape[0] or len(pointer.label0) != len(part.system):
        raise ConfigurationError("pointer labels do not address the system register")
    a = mat[[i0, i1], :]  # (2, env outcomes)
    weights = np.sum(np.abs(a) ** 2, axis=0)
    total = float(weights.sum())
    if total < _WEIGHT_FLOOR:
        raise DegenerateInputError("no probability weight in the pointer subspace")
    entries = []
    for e in np.nonzero(weights > _WEIGHT_FLOOR)[0]:
        chi = _fix_phase(a[:, e] / math.sqrt(weights[e]))
        f_label, fbar_label = _outcome_labels(int(e), m, nc)
        entries.append(
            GeometricEntry(
                float(weights[e] / total), f_label, fbar_label, chi, bloch_coordinates(chi)
            )
        )
    return GeometricEnsemble(tuple(entries), 1.0 - total, "joint")


def fragment_ensemble(
    state: StateVector, part: FragmentPartition, pointer: PointerBasis
) -> GeometricEnsemble:
    """Mixed conditional system states keyed by fragment outcomes only."""
    mat, m, nc = _system_env_matrix(state, part)
    i0, i1 = pointer.indices()
    a = mat[[i0, i1], :].reshape(2, 2**nc, 2**m)  # env outcome e = c*2^m + f
    blocks = np.einsum("acf,bcf->fab", a, a.conj())
    weights = np.real(np.trace(blocks, axis1=1, axis2=2))
    total = float(weights.sum())
    if total < _WEIGHT_FLOOR:
        raise DegenerateInputError("no probability weight in the pointer subspace")
    entries = []
    for f in np.nonzero(weights > _WEIGHT_FLOOR)[0]:
        rho = blocks[f] / weights[f]
        rho = 0.5 * (rho + rho.conj().T)
        f_label = "".join(str((int(f) >> i) & 1) for i in range(m))
        entries.append(
            GeometricEntry(
                float(weights[f] / total), f_label, None, rho, bloch_coordinates(rho)
            )
        )
    return GeometricEnsemble(tuple(entries), 1.0 - total, "fragment")


def integrated_probability(ensemble: GeometricEnsemble, thetas: np.ndarray) -> np.ndarray:
    """P(theta): total weight of entries whose polar angle is <= theta."""
    angles = np.array([polar_angle(e.bloch) for e in ensemble.entries])
    weights = np.array([e.weight for e in ensemble.entries])
    thetas = np.asarray(thetas, dtype=float)
    return np.array(
        [float(weights[angles <= t + 1e-12].sum()) for t in thetas]
    )


def decode_branch(f_label: str) -> int | None:
    """Majority vote over record bits: more zeros -> pointer 0, more ones ->
    pointer 1, tie -> undecided (None)."""
    score = sum(1 - 2 * int(c) for c in f_label)
    if score > 0:
        return 0
    if score < 0:
        return 1
    return None


def branch_signal(
    ensemble: GeometricEnsemble, bin_width: float = 0.02
) -> list[tuple[float, float]]:
    """Record-count signal A(z): entries binned by Bloch z, each contributing
    weight * sum_i(1 - 2 f_i). Bin centers lie on the grid -1, -1+w, ..., 1."""
    if bin_width <= 0:
        raise ConfigurationError("bin width must be positive")
    n_bins = int(round(2.0 / bin_width))
    acc: dict[int, float] = {}
    for entry in ensemble.entries:
        idx = int(np.rint((entry.bloch[2] + 1.0) / bin_width))
        idx = max(0, min(n_bins, idx))
        score = sum(1 - 2 * int(c) for c in entry.f_label)
        acc[idx] = acc.get(idx, 0.0) + entry.weight * score
    return [(-1.0 + i * bin_width, acc[i]) for i in sorted(acc)]


def pooled_branch_signal(
    ensembles: list[GeometricEnsemble], bin_width: float = 0.02
) -> list[tuple[float, float]]:
    """branch_signal accumulated over several ensembles (e.g. seeds), with
    every ensemble weighted equally."""
    acc: dict[float, float] = {}
    for ens in ensembles:
        for z, a_val in branch_signal(ens, bin_width):
            acc[z] = acc.get(z, 0.0) + a_val / len(ensembles)
    return [(z, acc[z]) for z in sorted(acc)]


def decode_accuracy(ensemble: GeometricEnsemble) -> float:
    """Probability-weighted fraction of fragment outcomes whose majority-vote
    label matches the pointer branch the outcome descends from (posterior
    weights = diagonal of the conditional state); undecided counts as wrong."""
    total = 0.0
    for entry in ensemble.entries:
        decoded = decode_branch(entry.f_label)
        if decoded is None:
            continue
        if entry.pure:
            diag = np.abs(entry.state) ** 2
        else:
            diag = np.real(np.diag(entry.state))
        total += entry.weight * float(diag[decoded])
    return total


def average_abs_z(ensemble: GeometricEnsemble) -> float:
    """Weight-averaged |Bloch z|; approaches 1 as conditional states cluster
    at the poles."""
    return float(sum(e.weight * abs(e.bloch[2]) for e in ensemble.entries))
