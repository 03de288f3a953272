"""Mutual information, Holevo bound and quantum discord for fragment partitions.

Discord is computed as I(S:F) minus the best classical information extractable
by rank-1 product projective measurements on the fragment. The measurement
search runs a multi-start derivative-free descent over per-qubit Bloch angles,
always seeded with the computational basis and with a correlation-eigenbasis
candidate, so reported chi is a certified lower bound (and discord an upper
bound) that is exact whenever one of the seeds already achieves zero
conditional entropy.

Two equivalent evaluation paths exist for the conditional entropy: a general
one on the reduced matrix rho_SF and a fast one that works directly on a pure
global state; they are cross-checked in the test suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .density import DensityMatrix, EIG_FLOOR, partial_trace, subsystem_entropy, von_neumann_entropy
from .errors import ConfigurationError, ValidationError
from .rng import substream
from .statevec import StateVector

_PURITY_TOL = 1e-10


@dataclass(frozen=True)
class FragmentPartition:
    """Split of a register into system, intercepted fragment and the rest.

    Qubits not listed anywhere are auxiliaries: they are traced out before
    any information quantity is computed.
    """

    system: tuple[int, ...]
    fragment: tuple[int, ...]
    complement: tuple[int, ...]

    def __post_init__(self):
        listed = self.system + self.fragment + self.complement
        if len(self.system) == 0:
            raise ConfigurationError("partition needs a nonempty system")
        if len(set(listed)) != len(listed):
            raise ConfigurationError("partition lists must be disjoint")

    def validate_for(self, n_qubits: int):
        for q in self.system + self.fragment + self.complement:
            if not 0 <= q < n_qubits:
                raise ConfigurationError(f"qubit {q} out of range for {n_qubits}-qubit register")

    def auxiliaries(self, n_qubits: int) -> tuple[int, ...]:
        listed = set(self.system + self.fragment + self.complement)
        return tuple(q for q in range(n_qubits) if q not in listed)


@dataclass(frozen=True)
class MeasurementBasis:
    """Rank-1 product projective basis on fragment qubits.

    Each qubit k gets Bloch angles (theta, phi); the projector pair is
    |v0> = (cos(t/2), e^{i phi} sin(t/2)) and its orthogonal complement.
    angles = () measures nothing (empty fragment).
    """

    angles: tuple[tuple[float, float], ...]

    @property
    def n_qubits(self) -> int:
        return len(self.angles)

    @classmethod
    def computational(cls, m: int) -> "MeasurementBasis":
        return cls(tuple((0.0, 0.0) for _ in range(m)))

    @classmethod
    def from_flat(cls, x: np.ndarray) -> "MeasurementBasis":
        arr = np.asarray(x, dtype=float).reshape(-1, 2)
        return cls(tuple((float(t), float(p)) for t, p in arr))

    def flat(self) -> np.ndarray:
        return np.asarray(self.angles, dtype=float).reshape(-1)

    def rotation(self, k: int) -> np.ndarray:
        """Unitary whose rows are the projector bras: V|v_a> = |a>."""
        t, p = self.angles[k]
        c, s = math.cos(t / 2.0), math.sin(t / 2.0)
        return np.array(
            [[c, s * np.exp(-1j * p)], [-s * np.exp(1j * p), c]], dtype=complex
        )


def _rotation_from_flat(x: np.ndarray) -> list[np.ndarray]:
    arr = np.asarray(x, dtype=float).reshape(-1, 2)
    c = np.cos(arr[:, 0] / 2.0)
    s = np.sin(arr[:, 0] / 2.0)
    e = np.exp(1j * arr[:, 1])
    return [
        np.array([[c[k], s[k] / e[k]], [-s[k] * e[k], c[k]]], dtype=complex)
        for k in range(arr.shape[0])
    ]


def _kron_low_to_high(mats: list[np.ndarray]) -> np.ndarray:
    """Kronecker product where mats[k] acts on bit k (LSB) of the joint index."""
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(m, out)
    return out


def _blocks_conditional_entropy(blocks: np.ndarray) -> float:
    """sum_f p_f H(B_f / p_f) for unnormalized PSD blocks stacked as (F, d, d)."""
    d = blocks.shape[-1]
    if d == 2:
        t = np.real(blocks[:, 0, 0] + blocks[:, 1, 1])
        det = np.real(blocks[:, 0, 0] * blocks[:, 1, 1]) - np.abs(blocks[:, 0, 1]) ** 2
        disc = np.sqrt(np.clip(t * t - 4.0 * det, 0.0, None))
        lam = np.stack([(t + disc) / 2.0, (t - disc) / 2.0], axis=1)
    else:
        lam = np.linalg.eigvalsh(blocks)
    lam = np.clip(lam, 0.0, None)
    p = lam.sum(axis=1)
    # p_f * H(lam/p_f) = -sum lam log2 lam + p_f log2 p_f
    lam_pos = np.where(lam > EIG_FLOOR, lam, 1.0)
    p_pos = np.where(p > EIG_FLOOR, p, 1.0)
    return float(-np.sum(lam * np.log2(lam_pos)) + np.sum(p * np.log2(p_pos)))


def conditional_entropy_fixed_basis(rho_sf: DensityMatrix, basis: MeasurementBasis) -> float:
    """Average system entropy after measuring the fragment in the given
    product basis. rho_sf holds the system in its low bits: index = s + d_s*f."""
    m = basis.n_qubits
    if m == 0:
        return von_neumann_entropy(rho_sf)
    d_s = rho_sf.dim >> m
    if d_s < 2 or d_s * 2**m != rho_sf.dim:
        raise ConfigurationError(
            f"basis on {m} qubits does not fit a {rho_sf.dim}-dimensional joint state"
        )
    v_full = _kron_low_to_high([basis.rotation(k) for k in range(m)])
    w = np.kron(v_full, np.eye(d_s))
    rotated = w @ rho_sf.matrix @ w.conj().T
    t = rotated.reshape(2**m, d_s, 2**m, d_s)
    blocks = np.einsum("fsft->fst", t)
    return _blocks_conditional_entropy(blocks)


# ---------------------------------------------------------------------------
# fast conditional entropy on a pure global state


class _PureFragmentView:
    """Amplitudes of a pure state reordered to (fragment outcome, system, rest).

    Lets the measurement search evaluate one basis in O(2^n) instead of
    rotating a full rho_SF matrix.
    """

    def __init__(self, state: StateVector, part: FragmentPartition):
        n = state.n_qubits
        self.m = len(part.fragment)
        self.d_s = 2 ** len(part.system)
        kept = part.system + part.fragment + part.complement
        rest = part.auxiliaries(n)
        if rest:
            raise ConfigurationError("pure-state path requires a partition covering all qubits")
        self.d_c = 2 ** len(part.complement)
        perm = (
            [n - 1 - q for q in reversed(part.fragment)]
            + [n - 1 - q for q in reversed(part.system)]
            + [n - 1 - q for q in reversed(part.complement)]
        )
        self.psi = np.ascontiguousarray(
            state.tensor().transpose(perm).reshape(2**self.m, self.d_s * self.d_c)
        )

    def rotated(self, rotations: list[np.ndarray]) -> np.ndarray:
        m = self.m
        if m <= 6:
            return _kron_low_to_high(rotations) @ self.psi
        t = self.psi.reshape([2] * m + [self.psi.shape[1]])
        for k, v in enumerate(rotations):
            ax = m - 1 - k
            t = np.moveaxis(np.moveaxis(t, ax, -1) @ v.T, -1, ax)
        return t.reshape(2**m, -1)

    def conditional_entropy(self, x: np.ndarray) -> float:
        rot = self.rotated(_rotation_from_flat(x))
        b = rot.reshape(2**self.m, self.d_s, self.d_c)
        blocks = np.einsum("fsc,ftc->fst", b, b.conj())
        return _blocks_conditional_entropy(blocks)


# ---------------------------------------------------------------------------
# measurement search


@dataclass(frozen=True)
class HolevoOptions:
    """Search budget for the fragment-measurement optimization.

    n_random_starts random bases are added to the two deterministic seeds
    (computational basis, correlation eigenbasis); each start is polished by
    Nelder-Mead capped at maxfev evaluations (None picks a size-scaled cap).
    """

    n_random_starts: int = 8
    maxfev: int | None = None
    xatol: float = 1e-3
    fatol: float = 1e-9
    seed: int = 0
    tol_opt: float = 1e-3

    def resolved_maxfev(self, n_params: int) -> int:
        return self.maxfev if self.maxfev is not None else 80 * n_params + 160


@dataclass(frozen=True)
class HolevoResult:
    chi: float
    conditional_entropy: float
    basis: MeasurementBasis
    converged: bool
    n_evaluations: int


def _angles_from_two_level(t: np.ndarray) -> tuple[float, float]:
    """Bloch angles of the principal eigenvector of a hermitian 2x2 matrix."""
    w, v = np.linalg.eigh(t)
    vec = v[:, int(np.argmax(np.abs(w)))]
    a0, a1 = vec[0], vec[1]
    if abs(a1) < 1e-12:
        return 0.0, 0.0
    if abs(a0) < 1e-12:
        return math.pi, 0.0
    theta = 2.0 * math.atan2(abs(a1), abs(a0))
    phi = float(np.angle(a1) - np.angle(a0))
    return theta, phi


def _correlation_candidate_from_rho(rho_sf: np.ndarray, m: int, d_s: int) -> np.ndarray | None:
    """Per-qubit eigenbasis of the system-weighted fragment operator
    Tr_S[(Z_S x I) rho]; only defined for a two-level system."""
    if d_s != 2:
        return None
    t = rho_sf.reshape(2**m, d_s, 2**m, d_s)
    m_f = t[:, 0, :, 0] - t[:, 1, :, 1]
    angles = np.zeros((m, 2))
    tens = m_f.reshape([2] * (2 * m))
    for k in range(m):
        ax_row = m - 1 - k
        red = np.moveaxis(tens, (ax_row, m + ax_row), (0, m))
        red = red.reshape(2, 2 ** (m - 1), 2, 2 ** (m - 1))
        t_k = np.einsum("aibi->ab", red)
        angles[k] = _angles_from_two_level(t_k)
    return angles


def _minimize_conditional_entropy(
    objective, m: int, opt: HolevoOptions, extra_starts: list[np.ndarray]
) -> tuple[float, np.ndarray, bool, int]:
    n_params = 2 * m
    starts = [np.zeros(n_params)]
    starts += [np.asarray(s, dtype=float).reshape(-1) for s in extra_starts]
    rng = substream(opt.seed)
    for _ in range(opt.n_random_starts):
        theta = np.arccos(1.0 - 2.0 * rng.random(m))
        phi = rng.uniform(-math.pi, math.pi, m)
        starts.append(np.stack([theta, phi], axis=1).reshape(-1))

    n_evals = 0
    best_val, best_x, best_ok = math.inf, starts[0], True
    for x0 in starts:
        v0 = objective(x0)
        n_evals += 1
        if v0 < best_val:
            best_val, best_x, best_ok = v0, x0, True
        if best_val < 1e-12:  # conditional entropy cannot go below zero
            return max(best_val, 0.0), best_x, True, n_evals
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "maxfev": opt.resolved_maxfev(n_params),
                "xatol": opt.xatol,
                "fatol": opt.fatol,
            },
        )
        n_evals += res.nfev
        if res.fun < best_val:
            best_val, best_x, best_ok = float(res.fun), np.asarray(res.x), bool(res.success)
        if best_val < 1e-12:
            return max(best_val, 0.0), best_x, True, n_evals
    return max(best_val, 0.0), best_x, best_ok, n_evals


def holevo_bound(
    rho_sf: DensityMatrix, opt: HolevoOptions | None = None, n_system: int = 1
) -> HolevoResult:
    """Best classical information about the system extractable by product
    projective fragment measurements: chi = H_S - min_basis H(S|measured F)."""
    opt = opt or HolevoOptions()
    d_s = 2**n_system
    if rho_sf.dim % d_s != 0:
        raise ConfigurationError("system dimension does not divide joint dimension")
    m = rho_sf.dim.bit_length() - 1 - n_system
    rho_s = partial_trace(rho_sf, tuple(range(n_system))) if m > 0 else rho_sf
    h_s = von_neumann_entropy(rho_s)
    if m == 0:
        return HolevoResult(0.0, h_s, MeasurementBasis(()), True, 0)
    if rho_sf.purity() > 1.0 - _PURITY_TOL:
        # measuring a pure joint state in any rank-1 product basis leaves the
        # system pure, so the minimum conditional entropy is exactly zero
        return HolevoResult(h_s, 0.0, MeasurementBasis.computational(m), True, 0)

    extra = []
    cand = _correlation_candidate_from_rho(rho_sf.matrix, m, d_s)
    if cand is not None:
        extra.append(cand)

    def objective(x: np.ndarray) -> float:
        return conditional_entropy_fixed_basis(rho_sf, MeasurementBasis.from_flat(x))

    val, x, ok, n_evals = _minimize_conditional_entropy(objective, m, opt, extra)
    return HolevoResult(h_s - val, val, MeasurementBasis.from_flat(x), ok, n_evals)


# ---------------------------------------------------------------------------
# mutual information and discord


def _split_rho_entropies(rho_sf: DensityMatrix, n_system: int) -> tuple[float, float, float]:
    sys_q = tuple(range(n_system))
    frag_q = tuple(range(n_system, rho_sf.n_qubits))
    h_s = von_neumann_entropy(partial_trace(rho_sf, sys_q))
    h_f = von_neumann_entropy(partial_trace(rho_sf, frag_q))
    h_sf = von_neumann_entropy(rho_sf)
    return h_s, h_f, h_sf


def mutual_information_from_rho(rho_sf: DensityMatrix, n_system: int = 1) -> float:
    h_s, h_f, h_sf = _split_rho_entropies(rho_sf, n_system)
    return h_s + h_f - h_sf


def mutual_information(state: StateVector, part: FragmentPartition) -> float:
    """I(S:F) = H_S + H_F - H_SF. Auxiliary qubits (present in the register
    but absent from the partition) are traced out first."""
    part.validate_for(state.n_qubits)
    if len(part.fragment) == 0:
        return 0.0
    if part.auxiliaries(state.n_qubits):
        rho_sf = partial_trace(state, part.system + part.fragment)
        return mutual_information_from_rho(rho_sf, len(part.system))
    # pure global state: each entropy comes from the cheaper side of its cut
    h_s = subsystem_entropy(state, part.system)
    h_f = subsystem_entropy(state, part.fragment)
    h_sf = subsystem_entropy(state, part.system + part.fragment)
    return h_s + h_f - h_sf


@dataclass(frozen=True)
class DiscordResult:
    mutual_information: float
    holevo: float
    discord: float
    discord_raw: float
    basis: MeasurementBasis
    converged: bool


def quantum_discord(
    state: StateVector, part: FragmentPartition, opt: HolevoOptions | None = None
) -> DiscordResult:
    """D = I - chi for the given fragment. Since chi is maximized over product
    projective measurements, reported D is an upper bound on the discord over
    that measurement class; it is clamped below at -opt.tol_opt."""
    opt = opt or HolevoOptions()
    part.validate_for(state.n_qubits)
    m = len(part.fragment)
    if m == 0:
        return DiscordResult(0.0, 0.0, 0.0, 0.0, MeasurementBasis(()), True)

    aux = part.auxiliaries(state.n_qubits)
    if not aux and len(part.complement) == 0:
        # the fragment is everything else, so the joint SF state is the pure
        # global state: I = 2 H_S and the best measurement extracts H_S exactly
        h_s = subsystem_entropy(state, part.system)
        return DiscordResult(
            2.0 * h_s, h_s, h_s, h_s, MeasurementBasis.computational(m), True
        )
    if aux or len(part.complement) == 0:
        rho_sf = partial_trace(state, part.system + part.fragment)
        i_sf = mutual_information_from_rho(rho_sf, len(part.system))
        res = holevo_bound(rho_sf, opt, n_system=len(part.system))
    else:
        i_sf = mutual_information(state, part)
        view = _PureFragmentView(state, part)
        h_s = subsystem_entropy(state, part.system)
        extra = []
        cand = _pure_correlation_candidate(state, part)
        if cand is not None:
            extra.append(cand)
        val, x, ok, n_evals = _minimize_conditional_entropy(
            view.conditional_entropy, m, opt, extra
        )
        res = HolevoResult(h_s - val, val, MeasurementBasis.from_flat(x), ok, n_evals)

    d_raw = i_sf - res.chi
    return DiscordResult(
        i_sf, res.chi, max(d_raw, -opt.tol_opt), d_raw, res.basis, res.converged
    )


def _pure_correlation_candidate(
    state: StateVector, part: FragmentPartition
) -> np.ndarray | None:
    if len(part.system) != 1:
        return None
    s_q = part.system[0]
    angles = np.zeros((len(part.fragment), 2))
    for k, f_q in enumerate(part.fragment):
        rho = partial_trace(state, (s_q, f_q)).matrix  # index = s + 2*f
        t_k = rho[0::2, 0::2] - rho[1::2, 1::2]
        angles[k] = _angles_from_two_level(t_k)
    return angles


# ---------------------------------------------------------------------------
# sweep container


@dataclass(frozen=True)
class InfoCurvePoint:
    sweep: float
    mutual_information: tuple[float, ...]
    holevo: tuple[float, ...]
    discord: tuple[float, ...]

    def __post_init__(self):
        if not len(self.mutual_information) == len(self.holevo) == len(self.discord):
            raise ConfigurationError("per-realization arrays must have equal length")
        if len(self.mutual_information) == 0:
            raise ConfigurationError("curve point needs at least one realization")


@dataclass(frozen=True)
class InfoCurve:
    """Information quantities along a sweep, with per-realization resolution."""

    sweep_name: str
    points: tuple[InfoCurvePoint, ...]

    def validate(self, max_system_entropy: float = 1.0, tol: float = 1e-6):
        for pt in self.points:
            for i_val, chi, d in zip(pt.mutual_information, pt.holevo, pt.discord):
                if not -tol <= chi <= i_val + tol:
                    raise ValidationError(
                        f"chi={chi} outside [0, I={i_val}] at sweep={pt.sweep}"
                    )
                if i_val > 2.0 * max_system_entropy + tol:
                    raise ValidationError(f"I={i_val} exceeds 2*H_S at sweep={pt.sweep}")
                if abs((i_val - chi) - d) > 1e-12:
                    raise ValidationError(f"D != I - chi at sweep={pt.sweep}")

    def summary_rows(self) -> list[dict]:
        rows = []
        for pt in self.points:
            i_arr = np.asarray(pt.mutual_information)
            chi_arr = np.asarray(pt.holevo)
            d_arr = np.asarray(pt.discord)
            rows.append(
                {
                    "sweep": pt.sweep,
                    "I_mean": float(i_arr.mean()),
                    "I_std": float(i_arr.std()),
                    "chi_mean": float(chi_arr.mean()),
                    "chi_std": float(chi_arr.std()),
                    "D_mean": float(d_arr.mean()),
                    "D_std": float(d_arr.std()),
                    "runs": int(i_arr.size),
                }
            )
        return rows
