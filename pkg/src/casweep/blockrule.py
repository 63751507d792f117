"""Block permutations applied in place, and the sweeps they generate.

A `BlockRule` of length m rewrites the window ``x[i .. i+m)`` in place when
applied at position i.  Sweeping left to right from an anchor i applies the
rule at i, i+1, i+2, ...; each cell is rewritten at most m times and then
never again, so the sweep has a well defined limit configuration.  On an
eventually periodic configuration the whole limit is computed exactly by
running the sweep as a finite-state transducer and detecting the cycle its
window state enters inside the periodic tail.

Right-to-left sweeps are reduced to left-to-right ones by reversing both the
tape and the rule, so there is exactly one sweep engine.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .core import (EpConfig, ResourceCapError, all_words, check_alphabet,
                   ep_equal, ep_splice, word_index, word_of_index)
from .ca import LocalRule, apply_ep


@dataclass(frozen=True)
class BlockRule:
    """Length-m block map over alphabet 0..q-1.

    The table maps `word_index` of the input block to `word_index` of the
    output block.  Most operations require the table to be a permutation;
    `is_bijective` checks and `inverse` inverts.
    """

    q: int
    block_length: int
    table: tuple[int, ...]

    def __post_init__(self):
        check_alphabet(self.q)
        if self.block_length < 1:
            raise ValueError("block length must be at least 1")
        size = self.q**self.block_length
        if len(self.table) != size:
            raise ValueError(f"table has {len(self.table)} entries, expected {size}")
        for v in self.table:
            if not 0 <= v < size:
                raise ValueError(f"table value {v} is not a block index")
        object.__setattr__(self, "table", tuple(self.table))

    def __call__(self, w: tuple[int, ...]) -> tuple[int, ...]:
        if len(w) != self.block_length:
            raise ValueError(f"block length {len(w)}, expected {self.block_length}")
        return word_of_index(self.table[word_index(w, self.q)],
                             self.block_length, self.q)

    def is_bijective(self) -> bool:
        return sorted(self.table) == list(range(self.q**self.block_length))

    def inverse(self) -> "BlockRule":
        if not self.is_bijective():
            raise ValueError("block rule is not bijective")
        inv = [0] * len(self.table)
        for u, v in enumerate(self.table):
            inv[v] = u
        return BlockRule(self.q, self.block_length, tuple(inv))

    def to_json(self) -> dict:
        return {"alphabet": self.q, "block_length": self.block_length,
                "table": list(self.table)}

    @classmethod
    def from_json(cls, obj: dict) -> "BlockRule":
        try:
            return cls(int(obj["alphabet"]), int(obj["block_length"]),
                       tuple(obj["table"]))
        except KeyError as e:
            raise ValueError(f"block rule file missing field {e}") from e


def reverse_block(rule: BlockRule) -> BlockRule:
    """Rule seen from a reversed tape: conjugate by word reversal."""
    m, q = rule.block_length, rule.q
    table = tuple(word_index(tuple(reversed(rule(tuple(reversed(u))))), q)
                  for u in all_words(m, q))
    return BlockRule(q, m, table)


def identity_block(q: int, m: int = 1) -> BlockRule:
    return BlockRule(q, m, tuple(range(q**m)))


# ---------------------------------------------------------------------------
# Finite sweeps

def apply_at(rule: BlockRule, x: EpConfig, i: int) -> EpConfig:
    """Apply the rule once, in place, at position i."""
    return sweep_range(rule, x, i, i + 1)


def sweep_range(rule: BlockRule, x: EpConfig, i: int, j: int,
                reverse: bool = False) -> EpConfig:
    """Apply at every position of [i, j), ascending, or descending if reverse.

    Cells outside [min(i, ...), j + m) keep their values, so the periodic
    tails survive unchanged.
    """
    if x.q != rule.q:
        raise ValueError("alphabet mismatch")
    if j < i:
        raise ValueError("empty or inverted sweep range")
    m = rule.block_length
    lo = min(i, x.center_start)
    hi = max(j + m - 1, x.center_end)
    cells = list(x.window(lo, hi))
    order = range(i, j) if not reverse else range(j - 1, i - 1, -1)
    for p in order:
        k = p - lo
        cells[k:k + m] = rule(tuple(cells[k:k + m]))
    lper = len(x.left_period)
    rper = len(x.right_period)
    return EpConfig(x.q, x.window(lo - lper, lo), tuple(cells), lo,
                    x.window(hi, hi + rper))


def sweep_step(rule: BlockRule, window: tuple[int, ...],
               incoming: int) -> tuple[int, tuple[int, ...]]:
    """One transducer step of a left-to-right sweep.

    The window holds the m tape cells the next application will rewrite.
    Applying the rule finalizes the leftmost cell (that is the emitted
    output) and shifting in the next original tape symbol forms the window
    of the following position.
    """
    img = rule(window)
    return img[0], img[1:] + (incoming,)


def sweep_right_limit(rule: BlockRule, x: EpConfig, i: int) -> EpConfig:
    """Limit of applying the rule at i, i+1, i+2, ... forever.

    Exact: once the consumed inputs come from the right periodic tail the
    pair (window, input phase) lives in a finite state space, so the output
    becomes periodic when that pair first repeats.
    """
    if x.q != rule.q:
        raise ValueError("alphabet mismatch")
    return sweep_right_limit_from(rule, x, i, x.window(i, i + rule.block_length))


def sweep_right_limit_from(rule: BlockRule, x: EpConfig, i: int,
                           window: tuple[int, ...]) -> EpConfig:
    """Rightward limit sweep continued from a mid-sweep window.

    Like sweep_right_limit but the m cells at [i, i+m) are taken from the
    given window instead of the tape; cells below i are returned as in x.
    """
    m = rule.block_length
    rper = len(x.right_period)
    outs: list[int] = []
    p = i
    while p + m < x.center_end:
        out, window = sweep_step(rule, window, x.cell(p + m))
        outs.append(out)
        p += 1
    seen: dict[tuple[tuple[int, ...], int], int] = {}
    tail: list[int] = []
    phase = (p + m - x.center_end) % rper
    while (window, phase) not in seen:
        seen[(window, phase)] = len(tail)
        out, window = sweep_step(rule, window, x.right_period[phase])
        tail.append(out)
        phase = (phase + 1) % rper
    start = seen[(window, phase)]
    cs = min(i, x.center_start)
    lper = len(x.left_period)
    center = x.window(cs, i) + tuple(outs) + tuple(tail[:start])
    return EpConfig(x.q, x.window(cs - lper, cs), center, cs,
                    tuple(tail[start:])).normalize()


def sweep_left_limit(rule: BlockRule, x: EpConfig, i: int) -> EpConfig:
    """Limit of applying the rule at i-1, i-2, ... leftward forever.

    An application at p rewrites [p, p+m), so cells from i+m-1 on are never
    touched.  Implemented by reversing the tape and the rule: the descending
    applications at i-1, i-2, ... become ascending applications starting at
    position 2 - i - m of the reversed tape.
    """
    y = sweep_right_limit(reverse_block(rule), x.reversed(),
                          2 - i - rule.block_length)
    return y.reversed()


# ---------------------------------------------------------------------------
# Representations of configuration pairs

def representation_eval(rule: BlockRule, x: EpConfig,
                        i: int) -> tuple[EpConfig, EpConfig]:
    """Pair (y, z) represented by seed configuration x with anchor i.

    Sweeping the inverse rule leftward from i yields y, sweeping the rule
    itself rightward from i yields z.  For a bijective rule this is the pair
    the seed witnesses in the rule's input/output relation; y keeps x's
    cells from i+m-1 on and z keeps x's cells below i.
    """
    inv = rule.inverse()
    y = sweep_left_limit(inv, x, i)
    z = sweep_right_limit(rule, x, i)
    return y, z


def count_representations(rule: BlockRule, f: LocalRule, y: EpConfig, i: int,
                          cap: int = 1 << 16) -> int:
    """How many seeds witness the pair (y, f(y)) at anchor i.

    Tries every middle word w of block length: the seed is f(y) below i,
    then w, then y from i+m on.  The count is the same for every y and every
    anchor when the rule actually realizes f as a sweep.
    """
    if rule.q != y.q or f.q != y.q:
        raise ValueError("alphabet mismatch")
    m = rule.block_length
    if rule.q**m > cap:
        raise ResourceCapError(
            f"{rule.q ** m} candidate middle words exceed the cap {cap}")
    z = apply_ep(f, y)
    count = 0
    for w in all_words(m, rule.q):
        x = ep_splice(z, i, w, y)
        y2, z2 = representation_eval(rule, x, i)
        if ep_equal(y2, y) and ep_equal(z2, z):
            count += 1
    return count


# ---------------------------------------------------------------------------
# Bundled block rules

BUILTIN_BLOCK_RULES = ("swap", "xor_block", "identity_block", "not_closed")


def builtin_block_rule(name: str) -> BlockRule:
    """Load one of the bundled block rules by name."""
    if name not in BUILTIN_BLOCK_RULES:
        raise ValueError(f"unknown built-in block rule {name!r}; "
                         f"choose from {', '.join(BUILTIN_BLOCK_RULES)}")
    text = resources.files("casweep.data").joinpath(f"{name}.json").read_text()
    return BlockRule.from_json(json.loads(text))
