"""Shot-based state tomography with Pauli least-squares inversion.

Settings assign each qubit one of three pre-measurement rotations
{I, Rx(pi/2), Ry(pi/2)} followed by a computational-basis readout. The
logical variants address the two-qubit system register as one unit: their
generators XX and (XY+YX)/2 restrict to the logical X and Y operators on
the {|00>, |11>} pointer subspace (the odd-parity subspace gets identity,
matching the conditional-gate convention). Outcome bitstrings are MSB-first
over the full register. Reconstruction averages
Pauli-string expectations over all compatible settings (the least-squares
solution for this design), then projects onto the physical set by clipping
negative eigenvalues and renormalizing the trace.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .density import DensityMatrix
from .errors import ConfigurationError, DegenerateInputError, ValidationError
from .geometry import GeometricEnsemble, GeometricEntry, PointerBasis, bloch_coordinates
from .info import FragmentPartition
from .noise import NoiseParams
from .statevec import (
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    StateVector,
    apply_1q,
    apply_matrix,
    basis_label,
)

MAX_TOMO_QUBITS = 5
SETTING_LABELS = ("I", "Rx", "Ry")

_RX_HALF = np.array([[1.0, -1j], [-1j, 1.0]], dtype=complex) / math.sqrt(2.0)
_RY_HALF = np.array([[1.0, -1.0], [1.0, 1.0]], dtype=complex) / math.sqrt(2.0)
_SETTING_MATS = {"I": IDENTITY_2, "Rx": _RX_HALF, "Ry": _RY_HALF}

_XX = np.kron(PAULI_X, PAULI_X)
_XY_SYM = 0.5 * (np.kron(PAULI_X, PAULI_Y) + np.kron(PAULI_Y, PAULI_X))


def _logical_rotation(generator: np.ndarray) -> np.ndarray:
    """exp(-i pi/4 G) for a generator with G^3 = G (G^2 projects onto the
    subspace where G acts as a Pauli; the complement gets identity)."""
    proj = generator @ generator
    return (
        np.eye(4, dtype=complex)
        + (math.cos(math.pi / 4) - 1.0) * proj
        - 1j * math.sin(math.pi / 4) * generator
    )


_LOGICAL_MATS = {
    "I": np.eye(4, dtype=complex),
    "Rx": _logical_rotation(_XX),
    "Ry": _logical_rotation(_XY_SYM),
}

_PAULIS = (IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z)


def _measured_axis_sign(v: np.ndarray) -> tuple[int, float]:
    """Which Pauli (1=X, 2=Y, 3=Z) a computational readout after rotation V
    measures, and with which sign: V^dag Z V = sign * Pauli."""
    m = v.conj().T @ np.diag([1.0, -1.0]) @ v
    for axis, pauli in ((1, PAULI_X), (2, PAULI_Y), (3, PAULI_Z)):
        coeff = complex(np.trace(m @ pauli)) / 2.0
        if abs(abs(coeff) - 1.0) < 1e-9:
            return axis, float(np.real(coeff))
    raise ValidationError("rotation does not map a Pauli axis onto Z")


_LABEL_AXIS_SIGN = {lab: _measured_axis_sign(mat) for lab, mat in _SETTING_MATS.items()}


@dataclass(frozen=True)
class TomographySetting:
    """Per-slot rotation labels. With logical=True the first slot addresses
    the two-qubit logical system (register qubits 0 and 1) as one unit."""

    labels: tuple[str, ...]
    logical: bool = False

    def __post_init__(self):
        for lab in self.labels:
            if lab not in SETTING_LABELS:
                raise ConfigurationError(f"unknown setting label {lab!r}")


@dataclass(frozen=True)
class ShotRecord:
    """Measured counts for one setting; counts map MSB-first outcome
    bitstrings to shot counts, or to exact probabilities when shots is None."""

    setting: TomographySetting
    counts: dict[str, float]
    shots: int | None

    def __post_init__(self):
        total = 0.0
        for key, val in self.counts.items():
            if val < 0:
                raise ValidationError(f"negative count for outcome {key!r}")
            total += val
        if self.shots is not None and abs(total - self.shots) > 1e-6 * max(1.0, self.shots):
            raise ValidationError(
                f"counts sum to {total}, record claims {self.shots} shots"
            )


def enumerate_settings(n_slots: int, logical: bool = False) -> list[TomographySetting]:
    """All 3^n settings in deterministic (last slot fastest) order."""
    if not 1 <= n_slots <= MAX_TOMO_QUBITS:
        raise ConfigurationError(
            f"tomography supports 1..{MAX_TOMO_QUBITS} slots, got {n_slots}"
        )
    return [
        TomographySetting(labels, logical)
        for labels in itertools.product(SETTING_LABELS, repeat=n_slots)
    ]


def _rotate_for_setting(state: StateVector, setting: TomographySetting) -> StateVector:
    if setting.logical:
        if len(setting.labels) != state.n_qubits - 1:
            raise ConfigurationError("logical setting must cover the pair plus the rest")
        state = apply_matrix(state, (0, 1), _LOGICAL_MATS[setting.labels[0]])
        rest = setting.labels[1:]
        offset = 2
    else:
        if len(setting.labels) != state.n_qubits:
            raise ConfigurationError("setting must label every qubit")
        rest = setting.labels
        offset = 0
    for i, lab in enumerate(rest):
        if lab != "I":
            state = apply_1q(state, offset + i, _SETTING_MATS[lab])
    return state


def _readout_confusion(probs: np.ndarray, n: int, eps: float) -> np.ndarray:
    """Exact outcome distribution after independent symmetric bit flips."""
    conf = np.array([[1.0 - eps, eps], [eps, 1.0 - eps]])
    t = probs.reshape([2] * n)
    for ax in range(n):
        t = np.moveaxis(np.moveaxis(t, ax, -1) @ conf.T, -1, ax)
    return t.reshape(-1)


def sample_measurements(
    state: StateVector,
    setting: TomographySetting,
    shots: int | None,
    rng: np.random.Generator | None = None,
    noise: NoiseParams | None = None,
) -> ShotRecord:
    """Measure all qubits in the rotated computational basis.

    shots=None returns the exact outcome distribution instead of sampled
    counts. Readout noise enters as the flip-channel on the distribution,
    which is statistically identical to flipping each sampled bit.
    """
    rotated = _rotate_for_setting(state, setting)
    probs = rotated.probabilities()
    n = state.n_qubits
    if noise is not None and noise.eps_readout > 0:
        probs = _readout_confusion(probs, n, noise.eps_readout)
    if shots is None:
        values = probs
    else:
        if rng is None:
            raise ConfigurationError("sampled measurements need a generator")
        if shots < 1:
            raise ConfigurationError("shots must be >= 1")
        values = rng.multinomial(shots, probs / probs.sum()).astype(float)
    counts = {
        basis_label(i, n): float(v) for i, v in enumerate(values) if v > 0
    }
    return ShotRecord(setting, counts, shots)


# ---------------------------------------------------------------------------
# Pauli transform helpers


def pauli_coeffs_to_matrix(coeffs: np.ndarray) -> np.ndarray:
    """Sum_p coeffs[p_(n-1), ..., p_0] sigma_(n-1) x ... x sigma_0 (axis j of
    the coefficient tensor belongs to qubit n-1-j, matching matrix bit order)."""
    n = coeffs.ndim
    t_mats = np.stack(_PAULIS)  # (4, 2, 2)
    t = coeffs.astype(complex)
    for _ in range(n):
        t = np.tensordot(t, t_mats, axes=([0], [0]))
    # axes now (r_(n-1), s_(n-1), ..., r_0, s_0); split rows and columns
    perm = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
    return t.transpose(perm).reshape(2**n, 2**n)


def matrix_to_pauli_coeffs(m: np.ndarray) -> np.ndarray:
    """coeffs[p_(n-1), ..., p_0] = Tr(m sigma_p) so that
    pauli_coeffs_to_matrix(coeffs) / 2^n reproduces m."""
    n = m.shape[0].bit_length() - 1
    # interleave (row_q, col_q) pairs, MSB qubit first
    perm: list[int] = []
    for j in range(n):
        perm += [j, n + j]
    out = np.asarray(m, dtype=complex).reshape([2] * (2 * n)).transpose(perm)
    t_mats = np.stack(_PAULIS)
    for _ in range(n):
        # fold Tr over the leading (row, col) pair into a trailing Pauli axis
        out = np.einsum("rs...,psr->...p", out, t_mats)
    return out


def psd_project(m: np.ndarray) -> DensityMatrix:
    """Nearest physical state by eigenvalue clipping: hermitize-check, clip
    negative eigenvalues to zero, renormalize the trace to one."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    herm_dev = float(np.max(np.abs(m - m.conj().T)))
    if herm_dev > 1e-8:
        raise ValidationError(f"matrix deviates from hermiticity by {herm_dev:.3e}")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    w = np.clip(w, 0.0, None)
    total = float(w.sum())
    if total < 1e-12:
        raise DegenerateInputError("projection target has no positive weight")
    return DensityMatrix((v * (w / total)) @ v.conj().T)


# ---------------------------------------------------------------------------
# reconstruction


def _marginal_freq(record: ShotRecord, qubits: tuple[int, ...]) -> np.ndarray:
    out = np.zeros(2 ** len(qubits))
    for key, val in record.counts.items():
        full = int(key, 2)
        idx = sum(((full >> q) & 1) << i for i, q in enumerate(qubits))
        out[idx] += val
    total = out.sum()
    if total <= 0:
        raise DegenerateInputError("record carries no counts")
    return out / total


def _subset_correlations(freq: np.ndarray, signs: list[float]) -> np.ndarray:
    """corr[mask] = E[prod_{q in mask} sign_q * (-1)^bit_q] for every subset
    mask of the measured qubits (mask bit i = qubit i)."""
    n = len(signs)
    t = freq.reshape([2] * n)
    for i, s in enumerate(signs):
        ax = n - 1 - i  # axis of qubit i
        m_q = np.array([[1.0, 1.0], [s, -s]])
        t = np.moveaxis(np.moveaxis(t, ax, -1) @ m_q.T, -1, ax)
    # after the transforms, axis values index (not-in-mask, in-mask)
    return t.reshape(-1)


def reconstruct_density(records: list[ShotRecord], qubits: tuple[int, ...] | None = None) -> DensityMatrix:
    """Least-squares Pauli inversion of tomography records, marginalized to
    the listed register qubits (qubit i of the result = qubits[i])."""
    if not records:
        raise ConfigurationError("no records supplied")
    if any(r.setting.logical for r in records):
        raise ConfigurationError("logical settings need the dedicated ensemble pipeline")
    n_reg = len(records[0].setting.labels)
    qubits = tuple(qubits) if qubits is not None else tuple(range(n_reg))
    n = len(qubits)
    if not 1 <= n <= MAX_TOMO_QUBITS:
        raise ConfigurationError(f"can reconstruct 1..{MAX_TOMO_QUBITS} qubits, got {n}")

    # average frequency vectors of records sharing the same target labels
    groups: dict[tuple[str, ...], list[tuple[np.ndarray, float]]] = {}
    for rec in records:
        if len(rec.setting.labels) != n_reg:
            raise ConfigurationError("records address registers of different sizes")
        labels = tuple(rec.setting.labels[q] for q in qubits)
        weight = float(rec.shots) if rec.shots is not None else 1.0
        groups.setdefault(labels, []).append((_marginal_freq(rec, qubits), weight))
    if len(groups) < 3**n:
        raise ConfigurationError(
            f"incomplete tomography: {len(groups)} of {3**n} label combinations present"
        )

    sums = np.zeros((4,) * n)
    hits = np.zeros((4,) * n)
    for labels, freqs in groups.items():
        weight_total = sum(w for _, w in freqs)
        freq = sum(f * w for f, w in freqs) / weight_total
        axes = [_LABEL_AXIS_SIGN[lab][0] for lab in labels]
        signs = [_LABEL_AXIS_SIGN[lab][1] for lab in labels]
        corr = _subset_correlations(freq, signs)
        for mask in range(2**n):
            # corr's flat index shares the mask's bit order (bit i = qubit i)
            idx = tuple(
                axes[i] if (mask >> i) & 1 else 0 for i in range(n)
            )[::-1]  # coefficient axis j = qubit n-1-j
            sums[idx] += corr[mask]
            hits[idx] += 1.0
    coeffs = sums / hits
    return psd_project(pauli_coeffs_to_matrix(coeffs) / 2**n)


def logical_postselect(
    records: list[ShotRecord], system_qubits: tuple[int, int] = (0, 1)
) -> tuple[list[ShotRecord], float]:
    """Drop outcomes whose system pair lies outside {00, 11}; returns the
    filtered records and the discarded weight fraction."""
    kept_records = []
    total = 0.0
    discarded = 0.0
    for rec in records:
        n = len(next(iter(rec.counts))) if rec.counts else 0
        kept: dict[str, float] = {}
        for key, val in rec.counts.items():
            total += val
            bits = key[n - 1 - system_qubits[0]] + key[n - 1 - system_qubits[1]]
            if bits in ("00", "11"):
                kept[key] = val
            else:
                discarded += val
        new_shots = None if rec.shots is None else int(round(sum(kept.values())))
        kept_records.append(ShotRecord(rec.setting, kept, new_shots))
    if total <= 0 or total == discarded:
        raise DegenerateInputError("post-selection removed all counts")
    return kept_records, discarded / total


# ---------------------------------------------------------------------------
# serialization

SHOTS_SCHEMA = "darwinium/shots/1"


def record_to_dict(rec: ShotRecord) -> dict:
    return {
        "schema": SHOTS_SCHEMA,
        "labels": list(rec.setting.labels),
        "logical": rec.setting.logical,
        "shots": rec.shots,
        "counts": dict(sorted(rec.counts.items())),
    }


def record_from_dict(data: dict) -> ShotRecord:
    if data.get("schema") != SHOTS_SCHEMA:
        raise ConfigurationError(f"unsupported shot record schema {data.get('schema')!r}")
    setting = TomographySetting(tuple(data["labels"]), bool(data.get("logical", False)))
    shots = data["shots"]
    return ShotRecord(setting, {str(k): float(v) for k, v in data["counts"].items()}, shots)


def records_to_jsonl(records: list[ShotRecord]) -> str:
    return "\n".join(json.dumps(record_to_dict(r), sort_keys=True) for r in records) + "\n"


def records_from_jsonl(text: str) -> list[ShotRecord]:
    return [record_from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]


# ---------------------------------------------------------------------------
# sampled fragment ensembles (logical tomography pipeline)


def _restricted_logical(mat4: np.ndarray) -> np.ndarray:
    return mat4[np.ix_([0, 3], [0, 3])]


_LOGICAL_AXIS_SIGN = {
    lab: _measured_axis_sign(_restricted_logical(mat)) for lab, mat in _LOGICAL_MATS.items()
}


def sampled_fragment_ensemble(
    state: StateVector,
    part: FragmentPartition,
    pointer: PointerBasis,
    shots: int,
    rng: np.random.Generator,
    noise: NoiseParams | None = None,
) -> GeometricEnsemble:
    """Estimate the fragment ensemble the way the experiment does: logical
    tomography rotations on the system pair, computational readout everywhere,
    logical post-selection, then per-fragment-outcome Bloch reconstruction."""
    if part.system != (0, 1) or pointer.indices() != (0, 3):
        raise ConfigurationError("sampled ensembles expect the logical pair on qubits 0,1")
    if not part.fragment:
        raise ConfigurationError("fragment must contain at least one qubit")
    n = state.n_qubits
    env_labels = tuple("I" for _ in range(n - 2))
    weights: dict[str, float] = {}
    signal: dict[str, np.ndarray] = {}  # per-axis sum of +-1 outcomes
    tallies: dict[str, np.ndarray] = {}  # per-axis kept shot counts
    kept_total = 0.0
    all_total = 0.0
    for lab in SETTING_LABELS:
        setting = TomographySetting((lab,) + env_labels, logical=True)
        record = sample_measurements(state, setting, shots, rng, noise)
        axis, sign = _LOGICAL_AXIS_SIGN[lab]
        for key, val in record.counts.items():
            all_total += val
            pair = key[n - 1] + key[n - 2]  # qubits 0 and 1
            if pair not in ("00", "11"):
                continue
            kept_total += val
            outcome = 0 if pair == "00" else 1
            f_label = "".join(key[n - 1 - q] for q in part.fragment)
            weights[f_label] = weights.get(f_label, 0.0) + val
            signal.setdefault(f_label, np.zeros(4))[axis] += sign * (1.0 - 2.0 * outcome) * val
            tallies.setdefault(f_label, np.zeros(4))[axis] += val
    if kept_total <= 0:
        raise DegenerateInputError("post-selection removed all counts")
    entries = []
    for f_label in sorted(weights, key=lambda s: int(s[::-1], 2)):
        num, den = signal[f_label], tallies[f_label]
        bloch = [num[a] / den[a] if den[a] > 0 else 0.0 for a in (1, 2, 3)]
        rho = 0.5 * (
            np.eye(2, dtype=complex)
            + bloch[0] * PAULI_X
            + bloch[1] * PAULI_Y
            + bloch[2] * PAULI_Z
        )
        rho = psd_project(rho).matrix
        entries.append(
            GeometricEntry(
                weights[f_label] / kept_total, f_label, None, rho, bloch_coordinates(rho)
            )
        )
    return GeometricEnsemble(tuple(entries), 1.0 - kept_total / all_total, "fragment")
