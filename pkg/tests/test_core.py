"""Words, eventually periodic configurations, and arithmetic helpers."""

import random
from fractions import Fraction

import pytest

from casweep.core import (EpConfig, all_words, ep_equal, ep_replace,
                          ep_splice, ep_unzip, ep_zip, is_prime, pair_symbol,
                          prime_factors, random_ep_config, split_symbol, vp,
                          word_index, word_of_index)


def test_word_index_roundtrip():
    for q in (2, 3, 5):
        for n in (0, 1, 3):
            for k in range(q**n):
                w = word_of_index(k, n, q)
                assert len(w) == n
                assert word_index(w, q) == k


def test_word_index_big_endian():
    # leftmost cell is the most significant digit
    assert word_index((1, 0, 0), 2) == 4
    assert word_of_index(5, 3, 2) == (1, 0, 1)


def test_all_words_order():
    ws = list(all_words(2, 3))
    assert len(ws) == 9
    assert ws[0] == (0, 0)
    assert ws[-1] == (2, 2)
    assert ws == sorted(ws)


def test_word_index_rejects_bad_symbols():
    with pytest.raises(ValueError):
        word_index((0, 2), 2)


def test_pair_symbol_roundtrip():
    for a in range(3):
        for b in range(3):
            assert split_symbol(pair_symbol(a, b, 3), 3) == (a, b)


def test_epconfig_cells():
    x = EpConfig(2, (0, 1), (1, 1, 0), 5, (0, 0, 1))
    assert x.center_end == 8
    assert [x.cell(i) for i in range(5, 8)] == [1, 1, 0]
    # left tail: ...0 1 0 1 | center, so cell 4 closes a period copy
    assert [x.cell(i) for i in range(1, 5)] == [0, 1, 0, 1]
    assert [x.cell(i) for i in range(8, 14)] == [0, 0, 1, 0, 0, 1]
    assert x.window(3, 10) == (0, 1, 1, 1, 0, 0, 0)


def test_epconfig_shift():
    x = EpConfig(2, (0,), (1, 0, 1), 0, (1, 1, 0))
    y = x.shifted(2)
    for i in range(-6, 10):
        assert y.cell(i) == x.cell(i + 2)


def test_epconfig_reversed():
    x = EpConfig(3, (0, 1), (2, 1, 0, 2), -1, (1, 2, 2))
    y = x.reversed()
    for i in range(-9, 9):
        assert y.cell(i) == x.cell(-i)
    assert ep_equal(y.reversed(), x)


def test_normalize_minimal_periods():
    x = EpConfig(2, (0, 1, 0, 1), (1,), 0, (1, 0, 1, 0, 1, 0))
    n = x.normalize()
    assert len(n.left_period) == 2
    assert len(n.right_period) == 2
    assert ep_equal(n, x)


def test_normalize_absorbs_constant_center():
    # center cells equal to the adjacent tail get folded into the tails
    x = EpConfig(2, (0,), (0, 0, 1, 0, 0), 0, (0,))
    n = x.normalize()
    assert ep_equal(n, x)
    assert n.center == (1,)
    assert n.center_start == 2


def test_normalize_fully_periodic():
    a = EpConfig(2, (1, 0), (1, 0, 1, 0), 3, (1, 0)).normalize()
    b = EpConfig(2, (0, 1), (), 0, (0, 1)).normalize()
    assert ep_equal(a, b)
    assert a == b  # canonical form is literally identical


def test_ep_equal_across_presentations():
    a = EpConfig(2, (0,), (1, 1), 0, (1, 0))
    b = EpConfig(2, (0, 0, 0), (1, 1, 1, 0, 1), 0, (0, 1, 0, 1, 0, 1))
    assert ep_equal(a, b)
    c = EpConfig(2, (0,), (1, 1), 1, (1, 0))
    assert not ep_equal(a, c)


def test_ep_splice():
    y = EpConfig(2, (0,), (1, 1, 1), 0, (0,))
    z = EpConfig(2, (1,), (0, 0), 0, (1,))
    x = ep_splice(z, 1, (0, 1), y)
    # z's cells below 1, the word on [1, 3), y's cells from 3 on
    assert [x.cell(i) for i in range(-2, 6)] == [1, 1, 0, 0, 1, 0, 0, 0]


def test_ep_replace():
    x = EpConfig(2, (0,), (), 0, (0,))
    y = ep_replace(x, -2, (1, 1))
    assert [y.cell(i) for i in range(-4, 2)] == [0, 0, 1, 1, 0, 0]


def test_ep_zip_unzip():
    a = EpConfig(2, (0,), (1, 0), 0, (1,))
    b = EpConfig(2, (1,), (0, 1, 1), -1, (0, 1))
    z = ep_zip(a, b)
    assert z.q == 4
    aa, bb = ep_unzip(z)
    assert ep_equal(aa, a)
    assert ep_equal(bb, b)
    for i in range(-6, 8):
        assert z.cell(i) == pair_symbol(a.cell(i), b.cell(i), 2)


def test_random_ep_config_seeded():
    a = random_ep_config(random.Random(7), 3)
    b = random_ep_config(random.Random(7), 3)
    assert a == b
    assert a.q == 3


def test_prime_helpers():
    assert is_prime(2) and is_prime(13) and not is_prime(1) and not is_prime(12)
    assert prime_factors(360) == [2, 3, 5]
    assert prime_factors(1) == []
    assert vp(Fraction(8, 3), 2) == 3
    assert vp(Fraction(3, 8), 2) == -3
    assert vp(Fraction(5, 7), 2) == 0
