"""Dense state-vector simulator with bit-indexed gate kernels.

Conventions (used package-wide):
  - Qubit 0 is the least-significant bit of the basis index.
  - Whole-register basis labels are written MSB-first, so label "101" on
    three qubits addresses index 0b101 (qubit 2 = 1, qubit 1 = 0, qubit 0 = 1).
  - Labels that refer to a *list* of qubits (control-register pointer labels,
    fragment outcome labels) use listed order instead: character i belongs to
    the i-th qubit in the list.

Gates are applied by reshaping the amplitude array to one axis per qubit and
contracting the target axis, so a single-qubit gate on an n-qubit register
costs O(2^n) regardless of target position.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ValidationError

MAX_QUBITS = 24
NORM_TOL = 1e-10
_UNITARY_TOL = 1e-10

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def basis_index(label: str) -> int:
    """Integer index of an MSB-first basis label such as '101'."""
    if not label or any(c not in "01" for c in label):
        raise ConfigurationError(f"basis label must be a nonempty 0/1 string, got {label!r}")
    return int(label, 2)


def basis_label(index: int, n_qubits: int) -> str:
    """MSB-first basis label of an integer index."""
    return format(index, f"0{n_qubits}b")


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state on ``n_qubits`` qubits.

    ``amps[i]`` is the amplitude of basis state i; treat instances as
    immutable (operations return fresh arrays).
    """

    n_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ConfigurationError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        if self.amps.shape != (2**self.n_qubits,):
            raise ValidationError(
                f"amplitude array has shape {self.amps.shape}, expected {(2**self.n_qubits,)}"
            )
        norm_sq = float(np.sum(np.abs(self.amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValidationError(f"state norm^2 deviates from 1 by {abs(norm_sq - 1.0):.3e}")

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def tensor(self) -> np.ndarray:
        """View of the amplitudes with one axis per qubit (axis i = qubit n-1-i)."""
        return self.amps.reshape([2] * self.n_qubits)


def init_state(n_qubits: int, label: str | None = None) -> StateVector:
    """Computational basis state; ``label`` is MSB-first, default all zeros."""
    amps = np.zeros(2**n_qubits, dtype=complex)
    idx = 0 if label is None else basis_index(label)
    if label is not None and len(label) != n_qubits:
        raise ConfigurationError(f"label {label!r} does not address {n_qubits} qubits")
    amps[idx] = 1.0
    return StateVector(n_qubits, amps)


def _check_qubit(n_qubits: int, qubit: int):
    if not 0 <= qubit < n_qubits:
        raise ConfigurationError(f"qubit {qubit} out of range for {n_qubits}-qubit register")


def _check_unitary(u: np.ndarray, dim: int = 2):
    if u.shape != (dim, dim):
        raise ValidationError(f"expected {dim}x{dim} matrix, got shape {u.shape}")
    dev = np.max(np.abs(u.conj().T @ u - np.eye(dim)))
    if dev > _UNITARY_TOL:
        raise ValidationError(f"matrix deviates from unitarity by {dev:.3e}")


def branch_unitary(theta: float, phi: float) -> np.ndarray:
    """exp[(-i theta/2)(sx cos(phi) + sy sin(phi))] in closed form.

    The axis lies in the equatorial plane, so the matrix is
    [[cos(t/2), -i sin(t/2) e^{-i phi}], [-i sin(t/2) e^{i phi}, cos(t/2)]].
    """
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return np.array(
        [[c, -1j * s * np.exp(-1j * phi)], [-1j * s * np.exp(1j * phi), c]], dtype=complex
    )


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


# ---------------------------------------------------------------------------
# circuit ops


@dataclass(frozen=True)
class HGate:
    qubit: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)

    def matrix(self) -> np.ndarray:
        return HADAMARD


@dataclass(frozen=True)
class RyGate:
    """Real y-rotation, used to prepare sqrt(p)|0> + sqrt(q)|1> initial weights."""

    qubit: int
    theta: float

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)

    def matrix(self) -> np.ndarray:
        return ry_matrix(self.theta)


@dataclass(frozen=True)
class CZGate:
    qubit_a: int
    qubit_b: int

    def __post_init__(self):
        if self.qubit_a == self.qubit_b:
            raise ConfigurationError("CZ qubits must be distinct")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit_a, self.qubit_b)


def _canonical_theta(theta: float) -> float:
    # the rotation matrix has period 4*pi in theta; IEEE remainder lands in [-2pi, 2pi]
    return math.remainder(theta, 4.0 * math.pi)


def _canonical_phi(phi: float) -> float:
    return (phi + math.pi) % (2.0 * math.pi) - math.pi


@dataclass(frozen=True)
class ConditionalGateSpec:
    """Pointer-conditioned environment rotation.

    When the control register matches pointer label j (character i of a label
    belongs to control_qubits[i]), the target qubit receives
    branch_unitary(*branch_j); all other control subspaces are untouched.
    Angles are canonicalized to theta in [-2pi, 2pi], phi in [-pi, pi),
    which leaves the branch matrices exactly unchanged.
    """

    control_qubits: tuple[int, ...]
    pointer_labels: tuple[str, str]
    target_qubit: int
    branch0: tuple[float, float]
    branch1: tuple[float, float]

    def __post_init__(self):
        if len(self.control_qubits) == 0:
            raise ConfigurationError("conditional gate needs at least one control qubit")
        if len(set(self.control_qubits)) != len(self.control_qubits):
            raise ConfigurationError("duplicate control qubits")
        if self.target_qubit in self.control_qubits:
            raise ConfigurationError("target qubit cannot also be a control")
        la, lb = self.pointer_labels
        for lab in (la, lb):
            if len(lab) != len(self.control_qubits) or any(c not in "01" for c in lab):
                raise ConfigurationError(f"pointer label {lab!r} does not match control register")
        if la == lb:
            raise ConfigurationError("pointer labels must be distinct")
        for name, (theta, phi) in (("branch0", self.branch0), ("branch1", self.branch1)):
            if not (math.isfinite(theta) and math.isfinite(phi)):
                raise ConfigurationError(f"{name} angles must be finite")
        object.__setattr__(
            self, "branch0", (_canonical_theta(self.branch0[0]), _canonical_phi(self.branch0[1]))
        )
        object.__setattr__(
            self, "branch1", (_canonical_theta(self.branch1[0]), _canonical_phi(self.branch1[1]))
        )

    @property
    def qubits(self) -> tuple[int, ...]:
        return (*self.control_qubits, self.target_qubit)

    def branch_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        return branch_unitary(*self.branch0), branch_unitary(*self.branch1)


CircuitOp = HGate | RyGate | CZGate | ConditionalGateSpec


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    ops: tuple[CircuitOp, ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ConfigurationError(f"n_qubits must be in [1, {MAX_QUBITS}]")
        for op in self.ops:
            for q in op.qubits:
                _check_qubit(self.n_qubits, q)


# ---------------------------------------------------------------------------
# gate kernels


def apply_1q(state: StateVector, qubit: int, u: np.ndarray) -> StateVector:
    """Apply a single-qubit unitary to one qubit of the register."""
    _check_qubit(state.n_qubits, qubit)
    _check_unitary(u)
    ax = state.n_qubits - 1 - qubit
    t = np.moveaxis(state.tensor(), ax, -1)
    t = t @ u.T  # new[..., i] = sum_j u[i, j] * old[..., j]
    t = np.moveaxis(t, -1, ax)
    return StateVector(state.n_qubits, np.ascontiguousarray(t).reshape(-1))


def apply_cz(state: StateVector, qubit_a: int, qubit_b: int) -> StateVector:
    _check_qubit(state.n_qubits, qubit_a)
    _check_qubit(state.n_qubits, qubit_b)
    if qubit_a == qubit_b:
        raise ConfigurationError("CZ qubits must be distinct")
    n = state.n_qubits
    t = state.tensor().copy()
    idx = [slice(None)] * n
    idx[n - 1 - qubit_a] = 1
    idx[n - 1 - qubit_b] = 1
    t[tuple(idx)] *= -1.0
    return StateVector(n, t.reshape(-1))


def apply_matrix(state: StateVector, qubits: tuple[int, ...], m: np.ndarray) -> StateVector:
    """Apply a 2^k x 2^k unitary to the listed qubits (qubits[0] = LSB of m's index)."""
    k = len(qubits)
    if len(set(qubits)) != k:
        raise ConfigurationError("duplicate qubits in multi-qubit gate")
    for q in qubits:
        _check_qubit(state.n_qubits, q)
    _check_unitary(m, 2**k)
    n = state.n_qubits
    # move the addressed axes to the front, MSB of m's index first
    axes = [n - 1 - q for q in reversed(qubits)]
    t = np.moveaxis(state.tensor(), axes, range(k))
    t = (m @ t.reshape(2**k, -1)).reshape([2] * n)
    t = np.moveaxis(t, range(k), axes)
    return StateVector(n, np.ascontiguousarray(t).reshape(-1))


def apply_conditional(state: StateVector, gate: ConditionalGateSpec) -> StateVector:
    """Apply a pointer-conditioned rotation; non-pointer control subspaces pass through."""
    n = state.n_qubits
    for q in gate.qubits:
        _check_qubit(n, q)
    new = state.tensor().copy()
    tgt_ax = n - 1 - gate.target_qubit
    for label, u in zip(gate.pointer_labels, gate.branch_matrices()):
        idx: list = [slice(None)] * n
        for q, ch in zip(gate.control_qubits, label):
            idx[n - 1 - q] = int(ch)
        fixed_axes = sorted(n - 1 - q for q in gate.control_qubits)
        sub_ax = tgt_ax - sum(1 for a in fixed_axes if a < tgt_ax)
        sub = np.moveaxis(new[tuple(idx)], sub_ax, -1)
        new[tuple(idx)] = np.moveaxis(sub @ u.T, -1, sub_ax)
    return StateVector(n, new.reshape(-1))


def apply_op(state: StateVector, op: CircuitOp) -> StateVector:
    if isinstance(op, (HGate, RyGate)):
        return apply_1q(state, op.qubit, op.matrix())
    if isinstance(op, CZGate):
        return apply_cz(state, op.qubit_a, op.qubit_b)
    if isinstance(op, ConditionalGateSpec):
        return apply_conditional(state, op)
    raise ConfigurationError(f"unknown circuit op {op!r}")


def run_circuit(circuit: Circuit, initial: StateVector | None = None) -> StateVector:
    """Run all ops in order from |0...0> (or the supplied initial state)."""
    state = init_state(circuit.n_qubits) if initial is None else initial
    if state.n_qubits != circuit.n_qubits:
        raise ConfigurationError("initial state size does not match circuit")
    for op in circuit.ops:
        state = apply_op(state, op)
    assert abs(float(np.sum(state.probabilities())) - 1.0) < NORM_TOL
    return state


# ---------------------------------------------------------------------------
# serialization

CIRCUIT_SCHEMA = "darwinium/circuit/1"


def circuit_to_dict(circuit: Circuit) -> dict:
    ops = []
    for op in circuit.ops:
        if isinstance(op, HGate):
            ops.append({"kind": "h", "qubit": op.qubit})
        elif isinstance(op, RyGate):
            ops.append({"kind": "ry", "qubit": op.qubit, "theta": op.theta})
        elif isinstance(op, CZGate):
            ops.append({"kind": "cz", "qubits": [op.qubit_a, op.qubit_b]})
        elif isinstance(op, ConditionalGateSpec):
            ops.append(
                {
                    "kind": "conditional",
                    "controls": list(op.control_qubits),
                    "pointer_labels": list(op.pointer_labels),
                    "target": op.target_qubit,
                    "branch0": list(op.branch0),
                    "branch1": list(op.branch1),
                }
            )
        else:
            raise ConfigurationError(f"unknown circuit op {op!r}")
    return {
        "schema": CIRCUIT_SCHEMA,
        "n_qubits": circuit.n_qubits,
        "metadata": dict(circuit.metadata),
        "ops": ops,
    }


def circuit_from_dict(data: dict) -> Circuit:
    if data.get("schema") != CIRCUIT_SCHEMA:
        raise ConfigurationError(f"unsupported circuit schema {data.get('schema')!r}")
    ops: list[CircuitOp] = []
    for entry in data["ops"]:
        kind = entry["kind"]
        if kind == "h":
            ops.append(HGate(entry["qubit"]))
        elif kind == "ry":
            ops.append(RyGate(entry["qubit"], entry["theta"]))
        elif kind == "cz":
            ops.append(CZGate(*entry["qubits"]))
        elif kind == "conditional":
            ops.append(
                ConditionalGateSpec(
                    tuple(entry["controls"]),
                    tuple(entry["pointer_labels"]),
                    entry["target"],
                    tuple(entry["branch0"]),
                    tuple(entry["branch1"]),
                )
            )
        else:
            raise ConfigurationError(f"unknown op kind {kind!r}")
    return Circuit(data["n_qubits"], tuple(ops), dict(data.get("metadata", {})))
