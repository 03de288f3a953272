"""Shared fixtures: independent dense-matrix oracles and state constructors.

Everything here is built from plain numpy (kron products and explicit
formulas), deliberately avoiding the package's bit-indexed kernels, so the
tests cross-check two separate computation routes.
"""
from __future__ import annotations

import cmath
import math
from functools import reduce

import numpy as np
import pytest

from darwinium.statevec import StateVector


def kron_chain(mats):
    """kron(mats[-1], ..., mats[0]): element k acts on qubit k (LSB)."""
    return reduce(lambda low, high: np.kron(high, low), mats)


def dense_1q(n: int, qubit: int, u: np.ndarray) -> np.ndarray:
    mats = [np.eye(2, dtype=complex)] * n
    mats[qubit] = u
    return kron_chain(mats)


def dense_cz(n: int, a: int, b: int) -> np.ndarray:
    d = 2**n
    m = np.eye(d, dtype=complex)
    for i in range(d):
        if (i >> a) & 1 and (i >> b) & 1:
            m[i, i] = -1.0
    return m


def record_matrix(theta: float, phi: float) -> np.ndarray:
    """exp[(-i theta/2)(sx cos phi + sy sin phi)] written out element-wise."""
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array(
        [
            [c, -1j * s * cmath.exp(-1j * phi)],
            [-1j * s * cmath.exp(1j * phi), c],
        ],
        dtype=complex,
    )


def dense_conditional(
    n: int,
    controls: tuple[int, ...],
    labels: tuple[str, str],
    target: int,
    branch0: tuple[float, float],
    branch1: tuple[float, float],
) -> np.ndarray:
    """Explicit 2^n x 2^n matrix of the pointer-conditioned gate: each pointer
    label applies its branch rotation to the target, every other control
    pattern leaves the target alone."""
    d = 2**n
    m = np.zeros((d, d), dtype=complex)
    u_for = {}
    for label, br in zip(labels, (branch0, branch1)):
        bits = tuple(int(c) for c in label)  # char i = controls[i]
        u_for[bits] = record_matrix(*br)
    for i in range(d):
        bits = tuple((i >> q) & 1 for q in controls)
        u = u_for.get(bits, np.eye(2, dtype=complex))
        t_bit = (i >> target) & 1
        for out_bit in (0, 1):
            j = (i & ~(1 << target)) | (out_bit << target)
            m[j, i] += u[out_bit, t_bit]
    return m


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(n, amps / np.linalg.norm(amps))


def branching_amplitudes(
    weights: tuple[float, float],
    records: list[tuple[np.ndarray, np.ndarray]],
) -> np.ndarray:
    """Amplitudes of sqrt(p)|0>|r0...> + sqrt(q)|1>|r1...> with the system on
    qubit 0 and environment qubit k carrying records[k-1]."""
    p, q = weights
    e0 = np.array([1.0, 0.0], dtype=complex)
    e1 = np.array([0.0, 1.0], dtype=complex)
    branch0 = kron_chain([e0] + [r[0] for r in records])
    branch1 = kron_chain([e1] + [r[1] for r in records])
    return math.sqrt(p) * branch0 + math.sqrt(q) * branch1


def make_branching_state(
    weights: tuple[float, float],
    records: list[tuple[np.ndarray, np.ndarray]],
) -> StateVector:
    return StateVector(1 + len(records), branching_amplitudes(weights, records))


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
