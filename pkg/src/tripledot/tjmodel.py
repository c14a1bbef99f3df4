"""Effective three-site t-J model of the S_z = 0 sector and its closed forms.

After removing the three doubly occupied states, the S_z = 0 dynamics lives
in the six singly occupied states

    (A↑C↓, A↓C↑, C↑B↓, C↓B↑, A↑B↓, A↓B↑)

with hopping ``t`` and nearest-neighbour exchange ``J = t**2 / U``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import SectorBasis, enumerate_sector
from .hubbard import HamiltonianMatrix

__all__ = [
    "EffectiveParams",
    "AnalyticSpectrum",
    "effective_basis",
    "effective_hamiltonian",
    "eliminate_double_occupancy",
    "analytic_spectrum",
    "analytic_overlap",
    "slow_envelope",
    "return_times",
    "target_times",
]

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class EffectiveParams:
    t: float
    j: float

    def __post_init__(self):
        if not (np.isfinite(self.t) and np.isfinite(self.j)):
            raise ValueError("t and j must be finite")
        if self.j < 0:
            raise ValueError("exchange j must be non-negative")

    @classmethod
    def from_hubbard(cls, t: float, u: float) -> "EffectiveParams":
        return cls(t=float(t), j=float(t) ** 2 / float(u))


@dataclass(frozen=True)
class AnalyticSpectrum:
    eta_plus: float
    eta_minus: float
    xi_plus: float
    xi_minus: float
    eigenvalues: np.ndarray  # (6,), paired with rows of ``eigenvectors``
    eigenvectors: np.ndarray  # (6, 6), row k is v_{k+1}


def effective_basis() -> SectorBasis:
    """The leading six states of the S_z = 0 basis."""
    full = enumerate_sector(0)
    return SectorBasis(full.states[:6], 0, ordering="published-singly-occupied")


def effective_hamiltonian(p: EffectiveParams) -> HamiltonianMatrix:
    t, j = p.t, p.j
    m = np.array(
        [
            [-2 * j, 2 * j, -j, j, t, 0],
            [2 * j, -2 * j, j, -j, 0, t],
            [-j, j, -2 * j, 2 * j, t, 0],
            [j, -j, 2 * j, -2 * j, 0, t],
            [t, 0, t, 0, 0, 0],
            [0, t, 0, t, 0, 0],
        ],
        dtype=float,
    )
    return HamiltonianMatrix(effective_basis(), m)


def eliminate_double_occupancy(h9: HamiltonianMatrix, u: float) -> HamiltonianMatrix:
    """Leading-order removal of the doubly occupied block.

    Returns ``H_PP - H_PQ H_QQ^{-1} H_QP`` with Q the last three states of the
    S_z = 0 basis.  ``u`` is checked against the Q-block diagonal so a
    mismatched call fails loudly instead of silently using the wrong scale.
    """
    if h9.basis != enumerate_sector(0):
        raise ValueError("expected a Hamiltonian on the S_z = 0 basis")
    m = h9.m
    h_pp, h_pq, h_qq = m[:6, :6], m[:6, 6:], m[6:, 6:]
    if abs(u) == 0 or abs(np.linalg.det(h_qq)) < 1e-300:
        raise ValueError("doubly occupied block is singular (u = 0?)")
    if not np.allclose(np.diag(h_qq) - np.diag(h_qq).mean(), 0.0) or not np.isclose(
        np.diag(h_qq).mean(), u
    ):
        raise ValueError("h9 was not built with e = 0 and a uniform u matching the argument")
    heff = h_pp - h_pq @ np.linalg.solve(h_qq, h_pq.conj().T)
    return HamiltonianMatrix(effective_basis(), heff)


def analytic_spectrum(p: EffectiveParams) -> AnalyticSpectrum:
    """Closed-form eigenpairs of :func:`effective_hamiltonian`.

    v1..v4 and v6 have the published form.  v5 carries the opposite sign on
    its last two entries, ``(a, -a, a, -a, 1/xi+, -1/xi+)``; that is the sign
    for which ``H v5 = eta+ v5`` actually holds.
    """
    t, j = p.t, p.j
    if t <= 0:
        raise ValueError("t must be positive")
    root = np.sqrt(9 * j * j + 2 * t * t)
    eta_p = -(3 * j + root)
    eta_m = -(3 * j - root)
    xi_p = np.sqrt(2 + eta_p**2 / t**2)
    xi_m = np.sqrt(2 + eta_m**2 / t**2)
    h = 0.5
    q = 1 / (2 * SQRT2)
    a = eta_p / (2 * t * xi_p)
    b = eta_m / (2 * t * xi_m)
    vecs = np.array(
        [
            [h, h, -h, -h, 0, 0],
            [-h, h, h, -h, 0, 0],
            [-q, -q, -q, -q, h, h],
            [q, q, q, q, h, h],
            [a, -a, a, -a, 1 / xi_p, -1 / xi_p],
            [b, -b, b, -b, 1 / xi_m, -1 / xi_m],
        ]
    )
    vals = np.array([0.0, -2 * j, -SQRT2 * t, SQRT2 * t, eta_p, eta_m])
    return AnalyticSpectrum(eta_p, eta_m, xi_p, xi_m, vals, vecs)


def slow_envelope(tau, j: float):
    """Exchange-driven factor of :func:`analytic_overlap` (1 at the gate)."""
    x = 3 * j * np.asarray(tau, dtype=float)
    return (
        (1 + SQRT2 * np.cos(x - np.pi / 4)) ** 2 + (1 - SQRT2 * np.cos(x + np.pi / 4)) ** 2
    ) / 8


def analytic_overlap(tau, p: EffectiveParams):
    """Leading-order ``|<target|psi_{A↑B↓}(tau)>|**2`` in the t-J model.

    The fast factor ``cos^2(sqrt(2) t tau)`` is the charge oscillation
    through the centre dot; the slow envelope is the spin exchange.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be non-negative")
    out = np.cos(SQRT2 * p.t * tau) ** 2 * slow_envelope(tau, p.j)
    return float(out) if out.ndim == 0 else out


def return_times(t: float, m):
    """Instants ``m * 2 pi / (sqrt(2) t)`` at which ↑↑ revives with no phase."""
    if t <= 0:
        raise ValueError("t must be positive")
    m_arr = np.asarray(m)
    if np.any(m_arr < 1) or not np.all(np.equal(np.mod(m_arr, 1), 0)):
        raise ValueError("m must be a positive integer")
    out = m_arr * 2 * np.pi / (SQRT2 * t)
    return float(out) if out.ndim == 0 else out


def target_times(j: float, n):
    """Maxima of the slow envelope, ``3 J tau = pi/2 (mod 2 pi)``.

    These are ``(4n + 1) pi / (6 J)``.  The odd members of the
    ``(2n + 1) pi / (6 J)`` ladder are envelope zeros instead: there ↑↓ is
    mapped onto the conjugate-phase state ``(↑↓ + i ↓↑)/sqrt 2``.
    """
    if j <= 0:
        raise ValueError("j must be positive")
    n_arr = np.asarray(n)
    if np.any(n_arr < 0) or not np.all(np.equal(np.mod(n_arr, 1), 0)):
        raise ValueError("n must be a non-negative integer")
    out = (4 * n_arr + 1) * np.pi / (6 * j)
    return float(out) if out.ndim == 0 else out
