import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tripledot.fock import enumerate_sector, full_basis, state
from tripledot.hubbard import (
    HamiltonianMatrix,
    HubbardParams,
    NuclearFields,
    build_hubbard,
    build_zeeman,
    sector_block,
    total_s2,
    total_sz,
)

import oracles

SQ2 = np.sqrt(2.0)
finite = st.floats(min_value=-5, max_value=5, allow_nan=False)
positive = st.floats(min_value=0, max_value=40, allow_nan=False)


@st.composite
def hubbard_params(draw):
    return HubbardParams(
        e=tuple(draw(finite) for _ in range(3)),
        t_ac=draw(finite),
        t_cb=draw(finite),
        u=tuple(draw(positive) for _ in range(3)),
    )


def test_sz_plus_one_block_is_the_arrow_matrix():
    m = build_hubbard(HubbardParams.processing(), enumerate_sector(1)).m
    t = SQ2
    assert np.array_equal(m, np.array([[0, t, t], [t, 0, 0], [t, 0, 0]]))


def test_sign_difference_in_sz_zero():
    p = HubbardParams.processing(t=0.7, u=13.0)
    b = enumerate_sector(0)
    m = build_hubbard(p, b).m
    aa = b.index(state("Au", "Ad"))
    assert m[b.index(state("Au", "Cd")), aa] == +0.7
    assert m[b.index(state("Ad", "Cu")), aa] == -0.7


def test_doubly_occupied_diagonal_carries_u():
    p = HubbardParams(e=(0.1, 0.2, 0.3), u=(11.0, 12.0, 13.0))
    b = enumerate_sector(0)
    d = np.diag(build_hubbard(p, b).m)
    assert d[b.index(state("Au", "Ad"))] == pytest.approx(11.0 + 0.2)
    assert d[b.index(state("Cu", "Cd"))] == pytest.approx(12.0 + 0.4)
    assert d[b.index(state("Au", "Bd"))] == pytest.approx(0.4)


@given(hubbard_params())
def test_sectors_match_kronecker_oracle(p):
    h64 = oracles.hubbard64(p.e, p.t_ac, p.t_cb, p.u)
    for sz, pairs in ((1, oracles.SZP), (0, oracles.SZ0), (-1, oracles.SZM)):
        ours = build_hubbard(p, enumerate_sector(sz)).m
        assert np.allclose(ours, oracles.project(h64, oracles.sector_kets(pairs)), atol=1e-12)


@given(hubbard_params(), st.lists(finite, min_size=9, max_size=9))
def test_full_space_with_fields_matches_oracle(p, b):
    b = np.array(b).reshape(3, 3) / 10
    fb = full_basis()
    ours = build_hubbard(p, fb).m + build_zeeman(NuclearFields(b), fb).m
    ref = oracles.project(oracles.hubbard64(p.e, p.t_ac, p.t_cb, p.u, fields=b), oracles.sector_kets(oracles.FULL))
    assert np.allclose(ours, ref, atol=1e-12)


@given(hubbard_params())
def test_hubbard_conserves_sz_and_blocks_agree(p):
    h = build_hubbard(p, full_basis())
    sz = total_sz(full_basis())
    assert np.allclose(h.m @ sz, sz @ h.m)
    for s in (1, 0, -1):
        assert np.allclose(sector_block(h, s).m, build_hubbard(p, enumerate_sector(s)).m)


def test_up_up_and_down_down_blocks_identical():
    p = HubbardParams(e=(0.2, -0.1, 0.4), t_ac=1.3, t_cb=0.9, u=(20, 18, 22))
    assert np.array_equal(build_hubbard(p, enumerate_sector(1)).m, build_hubbard(p, enumerate_sector(-1)).m)


def test_spin_rotation_symmetry_of_hubbard():
    fb = full_basis()
    h = build_hubbard(HubbardParams(e=(0.3, 0.0, -0.2), t_ac=1.0, t_cb=1.5, u=(20, 15, 25)), fb).m
    s2 = total_s2(fb)
    assert np.allclose(h @ s2, s2 @ h)
    # two spin-1/2: 6 singlet states (S=0) and 3 triplets (S=1, 9 states)
    assert np.allclose(np.sort(np.linalg.eigvalsh(s2)), [0] * 6 + [2] * 9)


def test_transverse_field_breaks_sector_blocks():
    fb = full_basis()
    hz = build_zeeman(NuclearFields([[0.1, 0, 0], [0, 0, 0], [0, 0, 0]]), fb)
    with pytest.raises(ValueError):
        sector_block(hz, 0)


def test_longitudinal_field_energy():
    fb = full_basis()
    bz = 0.3
    hz = build_zeeman(NuclearFields([[0, 0, bz], [0, 0, 0], [0, 0, 0]]), fb).m
    assert hz[fb.index(state("Au", "Bu")), fb.index(state("Au", "Bu"))] == pytest.approx(bz / 2)
    assert hz[fb.index(state("Ad", "Bu")), fb.index(state("Ad", "Bu"))] == pytest.approx(-bz / 2)


def test_zeeman_requires_full_basis():
    with pytest.raises(ValueError):
        build_zeeman(NuclearFields(), enumerate_sector(0))
    with pytest.raises(ValueError):
        total_s2(enumerate_sector(0))


def test_param_validation():
    with pytest.raises(ValueError):
        HubbardParams(u=(-1.0, 20.0, 20.0))
    with pytest.raises(ValueError):
        HubbardParams(t_ac=float("nan"))
    with pytest.raises(ValueError):
        HubbardParams(e=(0.0, 0.0))
    with pytest.raises(TypeError):
        build_hubbard({"t": 1}, enumerate_sector(0))
    with pytest.raises(ValueError):
        NuclearFields(np.full((3, 3), np.inf))


def test_hamiltonian_matrix_checks():
    b = enumerate_sector(1)
    with pytest.raises(ValueError):
        HamiltonianMatrix(b, np.zeros((2, 2)))
    with pytest.raises(ValueError):
        HamiltonianMatrix(b, np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]]))
    h = HamiltonianMatrix(b, np.eye(3))
    with pytest.raises(ValueError):
        h.m[0, 0] = 2.0
    with pytest.raises(ValueError):
        h + HamiltonianMatrix(enumerate_sector(-1), np.eye(3))
