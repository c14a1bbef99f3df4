import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tripledot.fock import (
    VACUUM,
    Dot,
    FockState,
    SectorBasis,
    Spin,
    SpinOrbital,
    all_two_electron_masks,
    apply_annihilation,
    apply_creation,
    enumerate_sector,
    full_basis,
    orbital,
    state,
)

import oracles

masks = st.integers(min_value=0, max_value=63)
indices = st.integers(min_value=0, max_value=5)


def test_orbital_order_is_canonical():
    labels = ["Au", "Ad", "Cu", "Cd", "Bu", "Bd"]
    assert [orbital(s).index for s in labels] == list(range(6))
    assert SpinOrbital.from_index(3) == SpinOrbital(Dot.C, Spin.DOWN)


def test_bad_labels_rejected():
    with pytest.raises(ValueError):
        orbital("Xu")
    with pytest.raises(ValueError):
        state("Au", "Au")


def test_state_mask_and_properties():
    s = state("Au", "Cd")
    assert s.mask == 0b001001
    assert s.n_electrons == 2
    assert s.sz == 0
    assert s.dot_occupation(Dot.A) == 1 and s.dot_occupation(Dot.B) == 0
    assert state("Au", "Ad").dot_occupation(Dot.A) == 2


def test_creation_on_occupied_and_annihilation_on_empty_vanish():
    s = state("Au")
    assert apply_creation(s, orbital("Au")) is None
    assert apply_annihilation(VACUUM, orbital("Bd")) is None


def test_label_order_sets_sign():
    # d+_C d+_A |0> = - d+_A d+_C |0>
    s, sign = apply_creation(state("Au"), orbital("Cu"))
    assert s == state("Au", "Cu") and sign == -1
    s, sign = apply_creation(state("Cu"), orbital("Au"))
    assert s == state("Au", "Cu") and sign == +1


def _op_matrix(orb: int, create: bool) -> np.ndarray:
    m = np.zeros((64, 64))
    for mask in range(64):
        f = apply_creation if create else apply_annihilation
        r = f(FockState(mask), SpinOrbital.from_index(orb))
        if r is not None:
            m[r[0].mask, mask] = r[1]
    return m


def test_operators_match_kronecker_oracle():
    # the oracle stores occupation of mode k in Kronecker factor k (most significant first)
    perm = [int("".join(str((m >> k) & 1) for k in range(6)), 2) for m in range(64)]
    for k in range(6):
        ours = _op_matrix(k, create=False)
        theirs = oracles.C[k][np.ix_(perm, perm)]
        assert np.array_equal(ours, theirs)


@given(indices, indices)
def test_canonical_anticommutation(p, q):
    cp, cq = _op_matrix(p, False), _op_matrix(q, False)
    cdq = _op_matrix(q, True)
    assert np.array_equal(cp @ cdq + cdq @ cp, np.eye(64) * (p == q))
    assert not np.any(cp @ cq + cq @ cp)


@given(masks, indices)
def test_create_then_annihilate_roundtrip(mask, k):
    s = FockState(mask)
    orb = SpinOrbital.from_index(k)
    r = apply_creation(s, orb)
    if s.is_occupied(orb):
        assert r is None
    else:
        back = apply_annihilation(r[0], orb)
        assert back[0] == s and back[1] * r[1] == 1


def test_sector_sizes_and_orders():
    assert [len(enumerate_sector(sz)) for sz in (1, 0, -1)] == [3, 9, 3]
    assert len(full_basis()) == 15 and len(all_two_electron_masks()) == 15
    assert enumerate_sector(0).states[:2] == (state("Au", "Cd"), state("Ad", "Cu"))
    assert enumerate_sector(0).states[6:] == (state("Au", "Ad"), state("Bu", "Bd"), state("Cu", "Cd"))
    assert enumerate_sector(1).states == (state("Au", "Bu"), state("Au", "Cu"), state("Cu", "Bu"))
    assert full_basis().states == enumerate_sector(1).states + enumerate_sector(0).states + enumerate_sector(-1).states


def test_sector_membership_and_labels():
    b = enumerate_sector(0)
    for i, s in enumerate(b):
        assert b.index(s) == i and s in b
        assert s.sz == 0
    assert state("Au", "Bu") not in b
    with pytest.raises(ValueError):
        b.index(state("Au", "Bu"))
    assert len(set(b.labels())) == 9
    with pytest.raises(ValueError):
        enumerate_sector(2)


def test_sector_basis_rejects_duplicates():
    s = state("Au", "Bd")
    with pytest.raises(ValueError):
        SectorBasis((s, s), 0, ordering="dup")


def test_two_electron_masks_cover_all_pairs():
    got = {s.mask for s in all_two_electron_masks()}
    want = {(1 << a) | (1 << b) for a, b in itertools.combinations(range(6), 2)}
    assert got == want
