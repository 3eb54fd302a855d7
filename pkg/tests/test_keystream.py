import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphaeta.keystream import (
    LfsrConfig,
    chop_symbols,
    evaluate_form,
    expand_keystream,
    keystream_linear_forms,
    lfsr_period,
    lfsr_stream,
    lfsr_symbols,
    seed_from_hex,
)

CFG4 = LfsrConfig(4, (4, 1), (0, 0, 0, 1))


def test_maximal_period_4bit():
    assert lfsr_period(CFG4) == 15


@pytest.mark.parametrize(
    "length,taps,period",
    [(6, (6, 1), 63), (8, (8, 6, 5, 4), 255), (12, (12, 6, 4, 1), 4095),
     (16, (16, 15, 13, 4), 65535), (20, (20, 3), 1048575)],
)
def test_maximal_periods(length, taps, period):
    cfg = LfsrConfig(length, taps, tuple([0] * (length - 1) + [1]))
    assert lfsr_period(cfg) == period


def test_zero_seed_rejected():
    with pytest.raises(ValueError):
        LfsrConfig(4, (4, 1), (0, 0, 0, 0))


def test_full_degree_tap_required():
    with pytest.raises(ValueError):
        LfsrConfig(4, (1, 2), (1, 0, 0, 0))


def test_stream_starts_with_seed():
    assert lfsr_stream(CFG4, 4).tolist() == [0, 0, 0, 1]


@settings(max_examples=50, deadline=None)
@given(a=st.integers(1, 63), b=st.integers(1, 63))
def test_gf2_linearity_in_seed(a, b):
    cfg = LfsrConfig(6, (6, 1), (1,) + (0,) * 5)
    sa = lfsr_stream(cfg.with_seed(a), 40)
    sb = lfsr_stream(cfg.with_seed(b), 40)
    if a ^ b == 0:
        assert (sa ^ sb == 0).all()
    else:
        sab = lfsr_stream(cfg.with_seed(a ^ b), 40)
        assert ((sa ^ sb) == sab).all()


def test_chop_examples():
    assert chop_symbols(np.array([0, 0, 0, 1, 1, 0]), 2).tolist() == [0, 1, 2]
    assert chop_symbols(np.array([1, 1, 1]), 3).tolist() == [7]


def test_chop_drops_remainder_with_warning():
    with pytest.warns(UserWarning):
        out = chop_symbols(np.array([1, 0, 1, 1, 0]), 2)
    assert out.tolist() == [2, 3]


def test_chop_rejects_bad_m():
    with pytest.raises(ValueError):
        chop_symbols(np.array([1, 0]), 0)


def test_expand_identity():
    m = 3
    ident = [list(range(8))] * m
    assert expand_keystream([5], ident, 8).tolist() == [5, 5, 5]


def test_expand_hand_example():
    tables = [[0, 1, 2, 3], [1, 0, 3, 2]]  # f1 = z, f2 = z xor 1
    assert expand_keystream([2, 3], tables, 4).tolist() == [2, 3, 3, 2]


def test_expand_empty():
    assert expand_keystream([], [[0, 1]], 2).tolist() == []


def test_expand_arity_mismatch():
    with pytest.raises(ValueError):
        expand_keystream([0], [[0, 1]], 4)  # M=4 needs m=2 functions


def test_first_symbol_forms_select_seed_bits():
    forms = keystream_linear_forms(CFG4, 1, 2)
    # Most significant bit of Z_1 is the first emitted seed bit.
    assert forms == [0b0001, 0b0010]


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(1, 255), i=st.integers(1, 80), m=st.sampled_from([1, 2, 4]))
def test_forms_reproduce_simulation(seed, i, m):
    cfg = LfsrConfig(8, (8, 6, 5, 4), tuple([0] * 7 + [1])).with_seed(seed)
    symbols = lfsr_symbols(cfg, i, m)
    forms = keystream_linear_forms(cfg, i, m)
    value = 0
    for b, f in enumerate(forms):
        value |= evaluate_form(f, cfg.seed_int) << (m - 1 - b)
    assert value == symbols[i - 1]


def test_forms_linear_in_seed():
    cfg = LfsrConfig(6, (6, 1), (1,) + (0,) * 5)
    forms = keystream_linear_forms(cfg, 7, 2)
    for f in forms:
        for a in (0b101, 0b1, 0b110000):
            for b in (0b11, 0b100000):
                assert evaluate_form(f, a ^ b) == evaluate_form(f, a) ^ evaluate_form(f, b)


def test_seed_from_hex():
    assert seed_from_hex("1", 4) == (0, 0, 0, 1)
    assert seed_from_hex("8", 4) == (1, 0, 0, 0)
    with pytest.raises(ValueError):
        seed_from_hex("1f", 4)
