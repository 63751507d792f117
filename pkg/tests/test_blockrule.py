"""In-place block rules and exact limit sweeps."""

import random

import pytest

from casweep.blockrule import (BUILTIN_BLOCK_RULES, BlockRule, apply_at,
                               builtin_block_rule, count_representations,
                               identity_block, representation_eval,
                               reverse_block, sweep_range, sweep_left_limit,
                               sweep_right_limit)
from casweep.ca import apply_ep, builtin_rule
from casweep.core import EpConfig, ResourceCapError, ep_equal, ep_splice, \
    random_ep_config


def random_permutation_rule(rng, q, m):
    table = list(range(q**m))
    rng.shuffle(table)
    return BlockRule(q, m, tuple(table))


def random_block_rule(rng, q, m):
    size = q**m
    return BlockRule(q, m, tuple(rng.randrange(size) for _ in range(size)))


def test_builtin_block_rules():
    for name in BUILTIN_BLOCK_RULES:
        rule = builtin_block_rule(name)
        assert rule.is_bijective()
    swap = builtin_block_rule("swap")
    assert swap((0, 1)) == (1, 0)
    assert swap((1, 1)) == (1, 1)
    nc = builtin_block_rule("not_closed")
    assert nc.q == 4 and nc.block_length == 2
    assert nc((2, 0)) == (0, 1)
    assert nc((0, 1)) == (2, 0)


def test_inverse():
    rng = random.Random(1)
    for m in (1, 2, 3):
        rule = random_permutation_rule(rng, 2, m)
        inv = rule.inverse()
        for k in range(2**m):
            assert inv.table[rule.table[k]] == k
    with pytest.raises(ValueError):
        BlockRule(2, 1, (0, 0)).inverse()


def test_reverse_block():
    rng = random.Random(2)
    rule = random_block_rule(rng, 3, 2)
    rev = reverse_block(rule)
    for a in range(3):
        for b in range(3):
            assert rev((a, b)) == tuple(reversed(rule((b, a))))
    assert reverse_block(rev) == rule


def test_apply_at():
    swap = builtin_block_rule("swap")
    x = EpConfig(2, (0,), (1, 0), 0, (0,))
    y = apply_at(swap, x, 0)
    assert [y.cell(i) for i in range(-1, 3)] == [0, 0, 1, 0]
    # tails untouched
    y2 = apply_at(swap, x, -3)
    assert ep_equal(y2, x)  # swap of (0, 0) is a fixed point


@pytest.mark.parametrize("seed", range(4))
def test_sweep_range_matches_sequential(seed):
    rng = random.Random(10 + seed)
    q = rng.choice((2, 3))
    m = rng.randrange(1, 4)
    rule = random_block_rule(rng, q, m)
    x = random_ep_config(rng, q)
    i = rng.randrange(-4, 2)
    j = i + rng.randrange(0, 6)
    y = x
    for p in range(i, j):
        y = apply_at(rule, y, p)
    assert ep_equal(sweep_range(rule, x, i, j), y)
    y = x
    for p in reversed(range(i, j)):
        y = apply_at(rule, y, p)
    assert ep_equal(sweep_range(rule, x, i, j, reverse=True), y)


@pytest.mark.parametrize("seed", range(8))
def test_sweep_right_limit_matches_long_finite_sweep(seed):
    """Cells left of the frontier are final, so a long finite sweep agrees."""
    rng = random.Random(20 + seed)
    q = rng.choice((2, 3))
    m = rng.randrange(1, 4)
    rule = random_block_rule(rng, q, m)
    x = random_ep_config(rng, q)
    i = rng.randrange(-3, 3)
    steps = 40
    lim = sweep_right_limit(rule, x, i)
    fin = sweep_range(rule, x, i, i + steps)
    for p in range(i - 8, i + steps - m + 1):
        assert lim.cell(p) == fin.cell(p)
    # untouched region below the anchor
    for p in range(i - 8, i):
        assert lim.cell(p) == x.cell(p)


@pytest.mark.parametrize("seed", range(8))
def test_sweep_left_limit_matches_long_finite_sweep(seed):
    rng = random.Random(40 + seed)
    q = rng.choice((2, 3))
    m = rng.randrange(1, 4)
    rule = random_block_rule(rng, q, m)
    x = random_ep_config(rng, q)
    i = rng.randrange(-3, 3)
    steps = 40
    lim = sweep_left_limit(rule, x, i)
    fin = sweep_range(rule, x, i - steps, i, reverse=True)
    for p in range(i - steps + m - 1, i + 8):
        assert lim.cell(p) == fin.cell(p)
    for p in range(i + m - 1, i + m + 8):
        assert lim.cell(p) == x.cell(p)


def test_swap_forward_sweep_is_left_shift():
    swap = builtin_block_rule("swap")
    sig = builtin_rule("shift")
    rng = random.Random(5)
    for _ in range(5):
        x = random_ep_config(rng, 2)
        i = rng.randrange(-3, 3)
        z = sweep_right_limit(swap, x, i)
        zz = apply_ep(sig, x)
        for p in range(i, i + 12):
            assert z.cell(p) == zz.cell(p)
        for p in range(i - 6, i):
            assert z.cell(p) == x.cell(p)


@pytest.mark.parametrize("seed", range(6))
def test_representation_recovers_tails(seed):
    """y matches the seed from i+m-1 rightward, z matches it below i."""
    rng = random.Random(60 + seed)
    q = 2
    m = rng.randrange(1, 4)
    rule = random_permutation_rule(rng, q, m)
    x = random_ep_config(rng, q)
    i = rng.randrange(-3, 3)
    y, z = representation_eval(rule, x, i)
    for p in range(i + m - 1, i + m + 10):
        assert y.cell(p) == x.cell(p)
    for p in range(i - 10, i):
        assert z.cell(p) == x.cell(p)


def test_count_representations_swap_shift():
    """The swap rule realizes the left shift with exactly two seeds per pair."""
    swap = builtin_block_rule("swap")
    sig = builtin_rule("shift")
    rng = random.Random(9)
    for _ in range(3):
        y = random_ep_config(rng, 2)
        for i in (-2, 0, 3):
            assert count_representations(swap, sig, y, i) == 2


def test_count_representations_identity():
    rule = identity_block(2, 1)
    ident = builtin_rule("identity")
    y = EpConfig(2, (0,), (1, 0, 1), 0, (1,))
    assert count_representations(rule, ident, y, 0) == 1


def test_count_representations_cap():
    rule = identity_block(2, 3)
    ident = builtin_rule("identity")
    y = EpConfig(2, (0,), (), 0, (0,))
    with pytest.raises(ResourceCapError):
        count_representations(rule, ident, y, 0, cap=4)


def test_block_json_roundtrip():
    rule = builtin_block_rule("xor_block")
    blob = rule.to_json()
    assert set(blob) == {"alphabet", "block_length", "table"}
    assert BlockRule.from_json(blob) == rule
