"""The packed engine against the array engine, row for row."""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaugeca import dynamics, packed, symmetry
from gaugeca.dynamics import SRule

widths = st.sampled_from([2, 3, 5, 17, 64])


def random_bits(n, shape, seed):
    return np.random.default_rng(seed).integers(0, 2, shape + (n,), dtype=np.uint8)


def random_row(n, seed):
    return np.random.default_rng(seed).integers(0, 2, (n, 2), dtype=np.uint8)


@given(widths, st.integers(0, 2 ** 32))
def test_pack_round_trip(n, seed):
    bits = random_bits(n, (3,), seed)
    assert np.array_equal(packed.unpack_bits(packed.pack_bits(bits), n), bits)
    row = random_row(n, seed)
    assert np.array_equal(packed.unpack_row(packed.pack_row(row), n), row)


@given(widths, st.integers(-70, 70), st.integers(0, 2 ** 32))
def test_roll_matches_numpy(n, shift, seed):
    bits = random_bits(n, (), seed)
    assert np.array_equal(packed.unpack_bits(packed.roll(packed.pack_bits(bits), shift, n), n),
                          np.roll(bits, shift))


@given(widths, st.integers(0, 2 ** 32))
def test_steps_match(n, seed):
    psi, a = random_row(n, seed), random_row(n, seed + 1)
    p, pa = packed.pack_row(psi), packed.pack_row(a)
    assert np.array_equal(packed.unpack_row(packed.step_R(p, n), n), dynamics.step_R(psi))
    assert np.array_equal(packed.unpack_row(packed.step_R_A(p, pa, n), n), dynamics.step_R_A(psi, a))
    for rule in (SRule.ADVECT, SRule.ADVECT_FLIP, SRule.FROZEN):
        assert np.array_equal(packed.unpack_row(packed.step_S(pa, rule, n), n), dynamics.step_S(a, rule))


@given(widths, st.integers(0, 2 ** 32))
def test_gauge_maps_match(n, seed):
    psi, a = random_row(n, seed), random_row(n, seed + 1)
    phi = random_bits(n, (2,), seed + 2)
    words = packed.pack_bits(phi)
    got_psi = packed.unpack_row(packed.gauge_psi(packed.pack_row(psi), words[0]), n)
    assert np.array_equal(got_psi, symmetry.gauge_psi(psi[None], phi[:1])[0])
    got_a = packed.unpack_row(packed.gauge_A(packed.pack_row(a), words[0], words[1], n), n)
    assert np.array_equal(got_a, symmetry.gauge_A(a[None], phi)[0])


def test_row_key_distinct_and_guarded():
    from gaugeca.lattice import all_rows
    keys = packed.row_key(packed.pack_row(all_rows(4)), 4)
    assert len(set(keys.tolist())) == 256
    with pytest.raises(ValueError):
        packed.row_key(np.zeros(2, np.uint64), 33)
    with pytest.raises(ValueError):
        packed.pack_bits(np.zeros(65, np.uint8))
