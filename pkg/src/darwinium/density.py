"""Density matrices, partial traces and entropies.

Reduced matrices follow the keep-list convention: partial_trace(state, keep)
returns a matrix whose qubit i is keep[i], i.e. the first kept qubit becomes
the least-significant bit of the reduced index. Entropies are in bits;
eigenvalues below 1e-12 are treated as exact zeros.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ValidationError
from .statevec import StateVector

EIG_FLOOR = 1e-12
HERMITIAN_TOL = 1e-10
PSD_FLOOR = -1e-8


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace matrix on n_qubits qubits.

    Hermiticity and trace are checked on construction; positivity is enforced
    where eigenvalues are actually consumed (entropies, projections) to keep
    construction O(d^2).
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"density matrix must be square, got shape {m.shape}")
        n = m.shape[0].bit_length() - 1
        if 2**n != m.shape[0]:
            raise ValidationError(f"dimension {m.shape[0]} is not a power of two")
        herm_dev = float(np.max(np.abs(m - m.conj().T)))
        if herm_dev > HERMITIAN_TOL:
            raise ValidationError(f"matrix deviates from hermiticity by {herm_dev:.3e}")
        tr_dev = abs(complex(np.trace(m)) - 1.0)
        if tr_dev > HERMITIAN_TOL:
            raise ValidationError(f"trace deviates from 1 by {tr_dev:.3e}")

    @property
    def n_qubits(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        w = np.linalg.eigvalsh(self.matrix)
        if float(w.min()) < PSD_FLOOR:
            raise ValidationError(f"negative eigenvalue {w.min():.3e} below floor {PSD_FLOOR}")
        return np.clip(w, 0.0, None)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


def _as_matrix(obj: StateVector | DensityMatrix | np.ndarray) -> np.ndarray:
    if isinstance(obj, DensityMatrix):
        return obj.matrix
    if isinstance(obj, StateVector):
        return np.outer(obj.amps, obj.amps.conj())
    return obj


def partial_trace(obj: StateVector | DensityMatrix, keep: tuple[int, ...]) -> DensityMatrix:
    """Trace out everything but the listed qubits; result qubit i = keep[i]."""
    keep = tuple(keep)
    if len(keep) == 0:
        raise ConfigurationError("keep list must be nonempty")
    if len(set(keep)) != len(keep):
        raise ConfigurationError("duplicate qubits in keep list")
    n = obj.n_qubits
    for q in keep:
        if not 0 <= q < n:
            raise ConfigurationError(f"qubit {q} out of range for {n}-qubit register")
    traced = [q for q in range(n) if q not in keep]
    if isinstance(obj, StateVector):
        # reorder amplitudes to (kept register, traced register) and contract
        perm = [n - 1 - q for q in reversed(keep)] + [n - 1 - q for q in traced]
        mat = obj.tensor().transpose(perm).reshape(2 ** len(keep), -1)
        rho = mat @ mat.conj().T
    else:
        t = obj.matrix.reshape([2] * (2 * n))
        row = [n - 1 - q for q in reversed(keep)] + [n - 1 - q for q in traced]
        col = [2 * n - 1 - q for q in reversed(keep)] + [2 * n - 1 - q for q in traced]
        t = t.transpose(row + col)
        dk, dt = 2 ** len(keep), 2 ** len(traced)
        t = t.reshape(dk, dt, dk, dt)
        rho = np.einsum("aibi->ab", t)
    return DensityMatrix(rho)


def entropy_from_eigenvalues(w: np.ndarray) -> float:
    w = np.clip(np.asarray(w, dtype=float), 0.0, None)
    w = w[w > EIG_FLOOR]
    if w.size == 0:
        return 0.0
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho: DensityMatrix | np.ndarray) -> float:
    """Entropy in bits; raises ValidationError on non-hermitian input or
    eigenvalues below the positivity floor."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(np.asarray(rho, dtype=complex))
    return entropy_from_eigenvalues(rho.eigenvalues())


def subsystem_entropy(state: StateVector, qubits: tuple[int, ...]) -> float:
    """Entropy of a subsystem of a pure state, evaluated on the smaller side
    of the bipartition (both sides have identical spectra for pure states)."""
    qubits = tuple(qubits)
    n = state.n_qubits
    if len(qubits) == 0 or len(qubits) == n:
        return 0.0
    other = tuple(q for q in range(n) if q not in qubits)
    side = qubits if len(qubits) <= len(other) else other
    return von_neumann_entropy(partial_trace(state, side))
