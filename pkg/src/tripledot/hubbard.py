"""Mott-Hubbard and quasistatic Zeeman Hamiltonians for the triple dot.

Energies are in scaled units (10 ueV == 1).  Matrices are dense and are
assembled from second-quantized operators acting on the Fock basis, so the
fermionic signs come out of :mod:`tripledot.fock` rather than being typed in.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .fock import (
    Dot,
    FockState,
    SectorBasis,
    Spin,
    SpinOrbital,
    apply_annihilation,
    apply_creation,
    enumerate_sector,
    full_basis,
)

__all__ = [
    "HubbardParams",
    "NuclearFields",
    "HamiltonianMatrix",
    "HubbardOperators",
    "one_body_matrix",
    "build_hubbard",
    "build_zeeman",
    "sector_block",
    "total_sz",
    "total_s2",
]

_DOTS = (Dot.A, Dot.C, Dot.B)
_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class HubbardParams:
    """Parameters of the three-site Hubbard model.

    ``e`` and ``u`` are ordered (A, C, B), matching the physical chain.
    """

    e: tuple[float, float, float] = (0.0, 0.0, 0.0)
    t_ac: float = float(np.sqrt(2.0))
    t_cb: float = float(np.sqrt(2.0))
    u: tuple[float, float, float] = (20.0, 20.0, 20.0)

    def __post_init__(self):
        e = tuple(float(x) for x in self.e)
        u = tuple(float(x) for x in self.u)
        if len(e) != 3 or len(u) != 3:
            raise ValueError("e and u need one entry per dot (A, C, B)")
        vals = e + u + (float(self.t_ac), float(self.t_cb))
        if not np.all(np.isfinite(vals)):
            raise ValueError("Hubbard parameters must be finite")
        if min(u) < 0:
            raise ValueError("Coulomb repulsion must be non-negative")
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "t_ac", float(self.t_ac))
        object.__setattr__(self, "t_cb", float(self.t_cb))

    @classmethod
    def processing(cls, t: float = float(np.sqrt(2.0)), u: float = 20.0) -> "HubbardParams":
        """Aligned dot energies, equal tunnelings and a single U."""
        return cls(e=(0.0, 0.0, 0.0), t_ac=t, t_cb=t, u=(u, u, u))

    @property
    def is_processing_mode(self) -> bool:
        return self.e[0] == self.e[1] == self.e[2]


@dataclass(frozen=True)
class NuclearFields:
    """Frozen Overhauser fields, one 3-vector per dot, rows ordered (A, C, B)."""

    b: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))

    def __post_init__(self):
        b = np.array(self.b, dtype=float).reshape(3, 3)
        if not np.all(np.isfinite(b)):
            raise ValueError("nuclear fields must be finite")
        b.setflags(write=False)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class HamiltonianMatrix:
    basis: SectorBasis
    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m)
        if m.shape != (len(self.basis), len(self.basis)):
            raise ValueError(f"matrix shape {m.shape} does not match basis size {len(self.basis)}")
        scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
        if np.max(np.abs(m - m.conj().T), initial=0.0) > 1e-12 * scale:
            raise ValueError("Hamiltonian matrix is not Hermitian")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __add__(self, other: "HamiltonianMatrix") -> "HamiltonianMatrix":
        if other.basis != self.basis:
            raise ValueError("cannot add Hamiltonians in different bases")
        return HamiltonianMatrix(self.basis, self.m + other.m)


def one_body_matrix(h: np.ndarray, basis: SectorBasis) -> np.ndarray:
    """Matrix of ``sum_pq h[p, q] d+_p d_q`` in ``basis``.

    Terms that leave the basis are dropped, so a sector basis only sees the
    part of the operator that is block diagonal in it.
    """
    h = np.asarray(h)
    dtype = complex if np.iscomplexobj(h) else float
    out = np.zeros((len(basis), len(basis)), dtype=dtype)
    for col, ket in enumerate(basis):
        for q in ket.occupied():
            r1 = apply_annihilation(ket, SpinOrbital.from_index(q))
            for p in range(6):
                if h[p, q] == 0:
                    continue
                r2 = apply_creation(r1[0], SpinOrbital.from_index(p))
                if r2 is None or r2[0] not in basis:
                    continue
                out[basis.index(r2[0]), col] += r1[1] * r2[1] * h[p, q]
    return out


def _number_operator(dot: Dot, basis: SectorBasis) -> np.ndarray:
    return np.diag([float(s.dot_occupation(dot)) for s in basis])


def _double_occupancy(dot: Dot, basis: SectorBasis) -> np.ndarray:
    # n (n - 1) / 2 is 1 on a doubly occupied dot and 0 otherwise
    return np.diag([0.5 * n * (n - 1) for n in (s.dot_occupation(dot) for s in basis)])


def _hopping(d1: Dot, d2: Dot, basis: SectorBasis) -> np.ndarray:
    h = np.zeros((6, 6))
    for spin in Spin:
        p = SpinOrbital(d1, spin).index
        q = SpinOrbital(d2, spin).index
        h[p, q] = h[q, p] = 1.0
    return one_body_matrix(h, basis)


def _spin_operator(dot: Dot, axis: int, basis: SectorBasis) -> np.ndarray:
    h = np.zeros((6, 6), dtype=complex)
    for s1 in Spin:
        for s2 in Spin:
            h[SpinOrbital(dot, s1).index, SpinOrbital(dot, s2).index] = 0.5 * _PAULI[axis][s1, s2]
    return one_body_matrix(h, basis)


class HubbardOperators:
    """Operator matrices in a fixed basis, reused to assemble Hamiltonians.

    Every Hamiltonian used here is linear in its parameters, so building
    ``H = sum_i e_i n_i + t_ac T_ac + ...`` from cached pieces is exact and
    lets noisy runs assemble thousands of step matrices with array ops.
    """

    def __init__(self, basis: SectorBasis):
        self.basis = basis
        self.number = np.stack([_number_operator(d, basis) for d in _DOTS])
        self.double = np.stack([_double_occupancy(d, basis) for d in _DOTS])
        self.hop_ac = _hopping(Dot.A, Dot.C, basis)
        self.hop_cb = _hopping(Dot.C, Dot.B, basis)
        if basis.sz is None:
            # spin[i, a] is S^a on dot i
            self.spin = np.stack(
                [np.stack([_spin_operator(d, a, basis) for a in range(3)]) for d in _DOTS]
            )
        else:
            self.spin = None

    def hubbard(self, p: HubbardParams) -> np.ndarray:
        return (
            np.einsum("i,ijk->jk", np.asarray(p.e), self.number)
            + p.t_ac * self.hop_ac
            + p.t_cb * self.hop_cb
            + np.einsum("i,ijk->jk", np.asarray(p.u), self.double)
        )

    def zeeman(self, f: NuclearFields) -> np.ndarray:
        if self.spin is None:
            raise ValueError("the Zeeman term needs the full 15-state basis")
        return np.einsum("ia,iajk->jk", f.b, self.spin)


@lru_cache(maxsize=None)
def operators_for(basis: SectorBasis) -> HubbardOperators:
    return HubbardOperators(basis)


def _check_two_electron(basis: SectorBasis) -> None:
    if not isinstance(basis, SectorBasis):
        raise TypeError("basis must be a SectorBasis")
    if any(s.n_electrons != 2 for s in basis):
        raise ValueError("basis must contain two-electron states only")


def build_hubbard(p: HubbardParams, basis: SectorBasis) -> HamiltonianMatrix:
    """Hubbard Hamiltonian with nearest-neighbour hopping A-C and C-B only."""
    if not isinstance(p, HubbardParams):
        raise TypeError("p must be HubbardParams")
    _check_two_electron(basis)
    return HamiltonianMatrix(basis, operators_for(basis).hubbard(p))


def build_zeeman(f: NuclearFields, basis: SectorBasis) -> HamiltonianMatrix:
    """``sum_i B_i . sigma / 2`` on each dot; requires the full basis."""
    _check_two_electron(basis)
    if basis.sz is not None or len(basis) != 15:
        raise ValueError("transverse fields mix S_z sectors; use the full 15-state basis")
    return HamiltonianMatrix(basis, operators_for(basis).zeeman(f))


def sector_block(h: HamiltonianMatrix, sz: int) -> HamiltonianMatrix:
    """Restrict a full-basis Hamiltonian to the S_z = ``sz`` block.

    Raises if ``h`` couples the sector to the rest of the space.
    """
    target = enumerate_sector(sz)
    try:
        idx = [h.basis.index(s) for s in target]
    except ValueError:
        raise ValueError("h must be built on a basis containing the whole sector") from None
    rest = [i for i in range(h.dim) if i not in set(idx)]
    scale = max(1.0, float(np.max(np.abs(h.m), initial=0.0)))
    if rest and np.max(np.abs(h.m[np.ix_(idx, rest)])) > 1e-12 * scale:
        raise ValueError(f"Hamiltonian is not block diagonal in S_z; cannot take sector {sz}")
    return HamiltonianMatrix(target, h.m[np.ix_(idx, idx)])


def total_sz(basis: SectorBasis) -> np.ndarray:
    return np.diag([s.sz for s in basis])


def total_s2(basis: SectorBasis) -> np.ndarray:
    """Total spin squared on the full 15-state basis."""
    ops = operators_for(basis)
    if ops.spin is None:
        raise ValueError("S^2 mixes sectors through S^x, S^y; use the full basis")
    s_tot = ops.spin.sum(axis=0)
    return sum(s_tot[a] @ s_tot[a] for a in range(3))


def full_hubbard(p: HubbardParams) -> HamiltonianMatrix:
    return build_hubbard(p, full_basis())


def fock_vector(basis: SectorBasis, amplitudes: dict[FockState, complex]) -> np.ndarray:
    """Dense vector in ``basis`` from a ``{state: amplitude}`` mapping."""
    v = np.zeros(len(basis), dtype=complex)
    for s, a in amplitudes.items():
        v[basis.index(s)] += a
    return v
