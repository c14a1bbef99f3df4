"""Unitary propagation with hbar = 1.

Static Hamiltonians are propagated through their eigendecomposition.  Noisy,
time-dependent ones are treated as piecewise constant over steps of ``dt``;
each step propagator is again exact, so there is no integrator order to
worry about beyond the piecewise-constant sampling of the noise itself.
"""
from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .fock import SectorBasis
from .hubbard import HamiltonianMatrix

__all__ = [
    "StateVector",
    "Trajectory",
    "NormDriftError",
    "evolve_static",
    "evolve_piecewise",
    "step_propagators",
    "propagate_batch",
    "squared_overlap",
    "TIME_UNIT_NS",
]

# hbar / (10 ueV) in nanoseconds
TIME_UNIT_NS = 0.0658211957

NORM_TOL = 1e-6


class NormDriftError(RuntimeError):
    """Raised when a propagated state stops being normalized."""


@dataclass(frozen=True)
class StateVector:
    basis: SectorBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if a.shape[0] != len(self.basis):
            raise ValueError("amplitude vector does not match basis size")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        return StateVector(self.basis, self.amplitudes / self.norm)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray | None = None
    observables: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if times.size == 0 or times[0] != 0.0 or np.any(np.diff(times) <= 0):
            raise ValueError("trajectory times must start at 0 and strictly increase")
        self.times = times

    @property
    def final_state(self) -> np.ndarray:
        if self.states is None:
            raise ValueError("trajectory did not record states")
        return self.states[-1]


def _eigh_checked(m: np.ndarray):
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if np.max(np.abs(m - np.swapaxes(m, -1, -2).conj()), initial=0.0) > 1e-12 * scale:
        raise ValueError("step Hamiltonian is not Hermitian")
    return np.linalg.eigh(m)


def evolve_static(h: HamiltonianMatrix, psi0: StateVector, tau) -> StateVector | list[StateVector]:
    """``exp(-i H tau) psi0``; ``tau`` may be a scalar or a 1-d array of times."""
    if h.basis != psi0.basis:
        raise ValueError("state and Hamiltonian are in different bases")
    w, v = _eigh_checked(h.m)
    c = v.conj().T @ psi0.amplitudes
    taus = np.atleast_1d(np.asarray(tau, dtype=float))
    out = (np.exp(-1j * np.outer(taus, w)) * c) @ v.T
    if np.ndim(tau) == 0:
        return StateVector(h.basis, out[0])
    return [StateVector(h.basis, row) for row in out]


def static_amplitudes(h: np.ndarray, psi0: np.ndarray, taus: np.ndarray) -> np.ndarray:
    """Array form of :func:`evolve_static`: rows are psi(tau_k)."""
    w, v = _eigh_checked(np.asarray(h))
    c = v.conj().T @ psi0
    return (np.exp(-1j * np.outer(taus, w)) * c) @ v.T


def step_propagators(h_steps: np.ndarray, dt: float) -> np.ndarray:
    """``exp(-i H_k dt)`` for a stack of Hermitian matrices ``(..., n, n)``."""
    w, v = _eigh_checked(h_steps)
    phase = np.exp(-1j * w * dt)
    return (v * phase[..., None, :]) @ np.swapaxes(v, -1, -2).conj()


def propagate_batch(
    h_steps: np.ndarray, psi0: np.ndarray, dt: float, record: Callable[[np.ndarray], np.ndarray] | None = None
):
    """Propagate a batch of states through per-step Hamiltonians.

    ``h_steps`` has shape ``(n_steps, batch, n, n)`` and ``psi0`` shape
    ``(batch, n)``.  Returns the stack of states ``(n_steps + 1, batch, n)``
    including the initial one, or ``record`` applied to each of them.
    """
    u = step_propagators(h_steps, dt)
    psi = np.array(psi0, dtype=complex)
    first = psi if record is None else record(psi)
    out = np.empty((u.shape[0] + 1,) + np.shape(first), dtype=np.result_type(first))
    out[0] = first
    for k in range(u.shape[0]):
        psi = np.einsum("bij,bj->bi", u[k], psi)
        out[k + 1] = psi if record is None else record(psi)
    norms = np.linalg.norm(psi, axis=-1)
    if np.max(np.abs(norms - 1.0)) > NORM_TOL:
        raise NormDriftError(f"norm drifted to {norms.min():.3g}..{norms.max():.3g}")
    return out


def evolve_piecewise(
    h_sequence: Callable[[int], HamiltonianMatrix] | Sequence[HamiltonianMatrix],
    psi0: StateVector,
    dt: float,
    n_steps: int,
    observables: dict[str, Callable[[np.ndarray], float]] | None = None,
    keep_states: bool = True,
) -> Trajectory:
    """Step ``psi_{k+1} = exp(-i H_k dt) psi_k`` for ``n_steps`` steps.

    ``h_sequence`` is either a callable ``k -> HamiltonianMatrix`` or an
    indexable sequence.  ``observables`` maps names to functions of the
    amplitude vector, evaluated at every recorded time including 0.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    get = h_sequence if callable(h_sequence) else h_sequence.__getitem__
    observables = observables or {}
    psi = np.array(psi0.amplitudes)
    states = [psi.copy()] if keep_states else None
    rec = {name: [f(psi)] for name, f in observables.items()}
    for k in range(n_steps):
        h = get(k)
        if h.basis != psi0.basis:
            raise ValueError(f"step {k} Hamiltonian is in a different basis")
        psi = step_propagators(h.m, dt) @ psi
        if abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
            raise NormDriftError(f"norm drift at step {k}: {np.linalg.norm(psi)}")
        if keep_states:
            states.append(psi.copy())
        for name, f in observables.items():
            rec[name].append(f(psi))
    return Trajectory(
        times=dt * np.arange(n_steps + 1),
        states=np.array(states) if keep_states else None,
        observables={k: np.asarray(v) for k, v in rec.items()},
    )


def squared_overlap(psi, phi) -> float:
    """``|<phi|psi>|**2`` for unit vectors (StateVector or arrays)."""
    if isinstance(psi, StateVector) and isinstance(phi, StateVector):
        if psi.basis != phi.basis:
            raise ValueError("states are in different bases")
    a = psi.amplitudes if isinstance(psi, StateVector) else np.asarray(psi)
    b = phi.amplitudes if isinstance(phi, StateVector) else np.asarray(phi)
    return float(min(1.0, abs(np.vdot(b, a)) ** 2))
