"""Two-electron Fock space over the six spin-orbitals of a linear triple dot.

Spin-orbitals are indexed in the fixed canonical order

    A-up < A-down < C-up < C-down < B-up < B-down     (0 .. 5)

and a Fock state is a 6-bit occupation mask.  The ket stored for a mask is
the ordered product of creation operators with the lowest index leftmost,
e.g. mask ``0b001001`` is ``d+_{A up} d+_{C down} |0>``.  Operator signs
follow the usual Jordan-Wigner rule: acting with ``d+_p`` or ``d_p``
picks up ``(-1)**(number of occupied orbitals with index < p)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

__all__ = [
    "Dot",
    "Spin",
    "SpinOrbital",
    "FockState",
    "SectorBasis",
    "N_ORBITALS",
    "orbital",
    "state",
    "apply_creation",
    "apply_annihilation",
    "enumerate_sector",
    "full_basis",
]

N_ORBITALS = 6


class Dot(enum.IntEnum):
    A = 0
    C = 1
    B = 2


class Spin(enum.IntEnum):
    UP = 0
    DOWN = 1

    @property
    def sz(self) -> float:
        return 0.5 if self is Spin.UP else -0.5


_SPIN_SYMBOL = {Spin.UP: "↑", Spin.DOWN: "↓"}


@dataclass(frozen=True, order=True)
class SpinOrbital:
    dot: Dot
    spin: Spin

    @property
    def index(self) -> int:
        return 2 * int(self.dot) + int(self.spin)

    @classmethod
    def from_index(cls, index: int) -> "SpinOrbital":
        if not 0 <= index < N_ORBITALS:
            raise ValueError(f"spin-orbital index out of range: {index}")
        return cls(Dot(index // 2), Spin(index % 2))

    def __str__(self) -> str:
        return f"{self.dot.name}{_SPIN_SYMBOL[self.spin]}"


def orbital(label: str) -> SpinOrbital:
    """Parse ``"Au"``, ``"Cd"``, ``"B↑"`` ... into a :class:`SpinOrbital`."""
    if len(label) != 2:
        raise ValueError(f"bad orbital label {label!r}")
    try:
        dot = Dot[label[0].upper()]
    except KeyError:
        raise ValueError(f"bad dot in orbital label {label!r}") from None
    s = label[1]
    if s in ("u", "U", "↑", "+"):
        spin = Spin.UP
    elif s in ("d", "D", "↓", "-"):
        spin = Spin.DOWN
    else:
        raise ValueError(f"bad spin in orbital label {label!r}")
    return SpinOrbital(dot, spin)


@dataclass(frozen=True, order=True)
class FockState:
    """Occupation mask over the canonical spin-orbitals."""

    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < (1 << N_ORBITALS):
            raise ValueError(f"occupation mask out of range: {self.mask}")

    @property
    def n_electrons(self) -> int:
        return bin(self.mask).count("1")

    def occupied(self) -> tuple[int, ...]:
        return tuple(i for i in range(N_ORBITALS) if self.mask >> i & 1)

    def is_occupied(self, orb: SpinOrbital) -> bool:
        return bool(self.mask >> orb.index & 1)

    @property
    def sz(self) -> float:
        return sum(SpinOrbital.from_index(i).spin.sz for i in self.occupied())

    def dot_occupation(self, dot: Dot) -> int:
        return (self.mask >> (2 * int(dot)) & 1) + (self.mask >> (2 * int(dot) + 1) & 1)

    def __str__(self) -> str:
        occ = self.occupied()
        if not occ:
            return "|0>"
        return "".join(str(SpinOrbital.from_index(i)) for i in occ)


VACUUM = FockState(0)


def state(*labels: str) -> FockState:
    """Build a Fock state from orbital labels, e.g. ``state("Au", "Bd")``.

    The returned mask is the canonically ordered ket; callers wanting a
    non-canonical product order must track the permutation sign themselves.
    """
    mask = 0
    for lab in labels:
        bit = 1 << orbital(lab).index
        if mask & bit:
            raise ValueError(f"orbital {lab} listed twice")
        mask |= bit
    return FockState(mask)


def _jw_sign(mask: int, index: int) -> int:
    below = mask & ((1 << index) - 1)
    return -1 if bin(below).count("1") % 2 else 1


def apply_creation(s: FockState, orb: SpinOrbital) -> tuple[FockState, int] | None:
    """Act with ``d+_orb``; return ``(new_state, sign)`` or None if occupied."""
    bit = 1 << orb.index
    if s.mask & bit:
        return None
    return FockState(s.mask | bit), _jw_sign(s.mask, orb.index)


def apply_annihilation(s: FockState, orb: SpinOrbital) -> tuple[FockState, int] | None:
    """Act with ``d_orb``; return ``(new_state, sign)`` or None if empty."""
    bit = 1 << orb.index
    if not s.mask & bit:
        return None
    return FockState(s.mask ^ bit), _jw_sign(s.mask, orb.index)


@dataclass(frozen=True)
class SectorBasis:
    """Ordered list of two-electron Fock states.

    ``sz`` is the total spin-z of every member, or None for the full
    15-state two-electron space.
    """

    states: tuple[FockState, ...]
    sz: int | None
    ordering: str

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate states in basis")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i: int) -> FockState:
        return self.states[i]

    def __contains__(self, s: FockState) -> bool:
        return s in self._index

    def index(self, s: FockState) -> int:
        try:
            return self._index[s]
        except KeyError:
            raise ValueError(f"{s} is not in this basis") from None

    def labels(self) -> list[str]:
        return [str(s) for s in self.states]


# Within-sector orders are fixed so matrices come out in the published layout.
# S_z = 0: singly occupied pairs first, the three doubly occupied states last
# so that the trailing 3x3 block is the one removed by adiabatic elimination.
_SZ0_ORDER = (
    ("Au", "Cd"), ("Ad", "Cu"), ("Cu", "Bd"), ("Cd", "Bu"),
    ("Au", "Bd"), ("Ad", "Bu"),
    ("Au", "Ad"), ("Bu", "Bd"), ("Cu", "Cd"),
)
# S_z = +1: the (1,0,1) state first, so the hopping matrix has the printed
# [[0, t, t], [t, 0, 0], [t, 0, 0]] arrow shape.
_SZP1_ORDER = (("Au", "Bu"), ("Au", "Cu"), ("Cu", "Bu"))
_SZM1_ORDER = (("Ad", "Bd"), ("Ad", "Cd"), ("Cd", "Bd"))

_SECTOR_ORDERS = {1: _SZP1_ORDER, 0: _SZ0_ORDER, -1: _SZM1_ORDER}


def enumerate_sector(sz: int) -> SectorBasis:
    """Two-electron basis of total spin-z ``sz`` in {-1, 0, +1}."""
    if sz not in _SECTOR_ORDERS:
        raise ValueError(f"sz must be one of -1, 0, +1 (got {sz!r})")
    states = tuple(state(*pair) for pair in _SECTOR_ORDERS[sz])
    return SectorBasis(states, sz, ordering="published")


def full_basis() -> SectorBasis:
    """All 15 two-electron states, grouped S_z = +1, 0, -1 in sector order."""
    states = enumerate_sector(1).states + enumerate_sector(0).states + enumerate_sector(-1).states
    return SectorBasis(states, None, ordering="sectors(+1,0,-1)")


def all_two_electron_masks() -> list[FockState]:
    """Every C(6,2) occupation, in increasing mask order."""
    return [FockState((1 << i) | (1 << j)) for i, j in combinations(range(N_ORBITALS), 2)]
