"""Closed-form information quantities for single-qubit branching states.

Everything here is evaluated from the record overlaps alone, with no state
vectors involved, so it serves as an independent cross-check of the
simulation pipeline. Overlap lists are indexed the physics way: s[k-1] holds
s_k for environment qubit k, k = 1..N.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import ConfigurationError


def record_overlap(branch0: tuple[float, float], branch1: tuple[float, float]) -> complex:
    """Inner product <1_Ek|0_Ek> of the two conditional records written by a
    conditional gate with branch angles (theta0, phi0), (theta1, phi1)."""
    t0, p0 = branch0
    t1, p1 = branch1
    return math.cos(t1 / 2.0) * math.cos(t0 / 2.0) + cmath.exp(1j * (p0 - p1)) * math.sin(
        t1 / 2.0
    ) * math.sin(t0 / 2.0)


def binary_entropy(x: float) -> float:
    """Shannon entropy (bits) of a two-outcome distribution {x, 1-x}."""
    if not 0.0 <= x <= 1.0:
        raise ConfigurationError(f"binary_entropy argument must lie in [0, 1], got {x}")
    if x < 1e-12 or 1.0 - x < 1e-12:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _overlap_prod_sq(s: list[complex] | np.ndarray, a: int, b: int) -> float:
    """|prod_{k=a..b} s_k|^2 with 1-based inclusive bounds; empty product = 1."""
    if a < 1:
        raise ConfigurationError("overlap range is 1-based")
    if a > b:
        return 1.0
    if b > len(s):
        raise ConfigurationError(f"range end {b} exceeds {len(s)} overlaps")
    prod = 1.0
    for k in range(a - 1, b):
        prod *= abs(s[k]) ** 2
    return prod


def lambda_plus(a: int, b: int, p: float, s: list[complex] | np.ndarray) -> float:
    """Larger eigenvalue of the two-level reduced state whose off-diagonal
    carries the record overlaps s_a..s_b: 0.5*(1 + sqrt((2p-1)^2 + 4p(1-p)|prod s|^2))."""
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"pointer weight must lie in [0, 1], got {p}")
    disc = (2.0 * p - 1.0) ** 2 + 4.0 * p * (1.0 - p) * _overlap_prod_sq(s, a, b)
    return 0.5 * (1.0 + math.sqrt(disc))


def closed_form_mi(p: float, s: list[complex] | np.ndarray, m: int, n_env: int) -> float:
    """Mutual information I(S:F) between the system and the first m
    environment qubits of an N-qubit branching state."""
    if len(s) != n_env:
        raise ConfigurationError(f"expected {n_env} overlaps, got {len(s)}")
    if not 0 <= m <= n_env:
        raise ConfigurationError(f"fragment size {m} out of range [0, {n_env}]")
    if m == 0:
        return 0.0
    h_s = binary_entropy(lambda_plus(1, n_env, p, s))
    h_f = binary_entropy(lambda_plus(1, m, p, s))  # equals H(S,complement) by purity
    h_sf = binary_entropy(lambda_plus(m + 1, n_env, p, s))
    return h_s + h_f - h_sf


def reduced_matrices(
    p: float, s: list[complex] | np.ndarray, m: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Two-level reduced matrices (rho_S, rho_SF, rho_S-complement) in the
    pointer basis. Off-diagonals carry the overlap products of the traced-out
    records: all of them for rho_S, qubits m+1..N for rho_SF (fragment kept),
    and qubits 1..m for the complement version."""
    n_env = len(s)
    if not 0 <= m <= n_env:
        raise ConfigurationError(f"fragment size {m} out of range [0, {n_env}]")

    def two_level(prod: complex) -> np.ndarray:
        off = math.sqrt(p * (1.0 - p)) * prod
        return np.array([[p, off], [np.conj(off), 1.0 - p]], dtype=complex)

    def prod_range(a: int, b: int) -> complex:
        out = 1.0 + 0.0j
        for k in range(a - 1, b):
            out *= s[k]
        return out

    return (
        two_level(prod_range(1, n_env)),
        two_level(prod_range(m + 1, n_env)),
        two_level(prod_range(1, m)),
    )


def homogeneous_mi(delta_theta: float, p: float, m: int, n_env: int) -> float:
    """closed_form_mi specialization for identical records with real overlap
    cos(delta_theta/2) on every environment qubit."""
    s = [math.cos(delta_theta / 2.0)] * n_env
    return closed_form_mi(p, s, m, n_env)
