"""Shift offsets and two-stage sweep decompositions.

A left-closing automaton that misses being realizable by one left-to-right
sweep only misses it by a shift: composing with a large enough power of the
shift clears every prime from the numerator of lambda.  Automata closing on
both sides therefore factor into a right-to-left sweep realizing the inverse
shift followed by a left-to-right sweep realizing the shifted automaton.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .core import EpConfig, IntegrityError, ep_equal, prime_factors, \
    random_ep_config, vp
from .ca import LocalRule, apply_ep, shift_compose, shift_rule
from .blockrule import BlockRule, identity_block
from .closing import ClosingVerdict, left_closing_decide, right_closing_decide
from .stairs import NotLeftClosingError, slider_exists
from .synthesis import synthesize
from .mealy import sweeper_eval


class NotBiClosingError(ValueError):
    """Raised with the failing side's verdict when a closing check fails."""

    def __init__(self, verdict: ClosingVerdict):
        self.verdict = verdict
        super().__init__(f"rule is not {verdict.side}-closing")


class Direction(Enum):
    LEFT_TO_RIGHT = "LR"
    RIGHT_TO_LEFT = "RL"


@dataclass(frozen=True)
class DirectedSlider:
    """A block rule swept in a fixed direction.

    Right-to-left application is the mirror image of the only sweep engine
    there is: reverse the tape, sweep left to right, reverse back.
    """

    rule: BlockRule
    direction: Direction

    def __call__(self, y: EpConfig) -> EpConfig:
        flipped = self.direction is Direction.RIGHT_TO_LEFT
        out = sweeper_eval(self.rule, y.reversed() if flipped else y)
        if not out.converges:
            raise ValueError("sweeps diverge on this input")
        return out.limit.reversed() if flipped else out.limit

    def to_json(self) -> dict:
        return {"direction": self.direction.value, "rule": self.rule.to_json()}


@dataclass(frozen=True)
class Decomposition:
    stages: tuple[DirectedSlider, ...]
    claimed_ca: LocalRule

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        if not self.stages:
            raise ValueError("a decomposition needs at least one stage")
        for a, b in zip(self.stages, self.stages[1:]):
            if a.direction is b.direction:
                raise ValueError("stage directions must alternate")

    def to_json(self) -> dict:
        return {"claimed_ca": self.claimed_ca.to_json(),
                "stages": [s.to_json() for s in self.stages]}


def shift_offset(f: LocalRule) -> int:
    """Smallest k >= 0 making sigma^k o f realizable left to right.

    Each prime p in the numerator of lambda needs v_p(lambda) - k v_p(q)
    to reach zero; composing with the shift divides lambda by q.
    """
    verdict = slider_exists(f)
    if not verdict.left_closing:
        raise NotLeftClosingError(verdict.left_closing)
    k = 0
    for p in verdict.violating_primes:
        vq = vp(Fraction(f.q), p)
        if vq == 0:
            raise IntegrityError(
                f"prime {p} divides the stair count but not the alphabet")
        k = max(k, -(-vp(verdict.lam, p) // vq))
    return k


def decompose_biclosing(f: LocalRule) -> Decomposition:
    """Factor a both-sides-closing automaton into two opposite sweeps.

    With k the shift offset, the stages realize sigma^(-k) (right to left)
    and sigma^k o f (left to right); shifts commute with every cellular
    automaton, so the composite is f itself.  The first stage's rule is
    synthesized from the mirror image sigma^k, whose lambda is 1/q^k.
    """
    left = left_closing_decide(f)
    if not left:
        raise NotBiClosingError(left)
    right = right_closing_decide(f)
    if not right:
        raise NotBiClosingError(right)
    k = shift_offset(f)
    if k == 0:
        first = DirectedSlider(identity_block(f.q, 1),
                               Direction.RIGHT_TO_LEFT)
    else:
        first = DirectedSlider(synthesize(shift_rule(f.q, k)),
                               Direction.RIGHT_TO_LEFT)
    second = DirectedSlider(synthesize(shift_compose(f, k)),
                            Direction.LEFT_TO_RIGHT)
    return Decomposition((first, second), f)


def verify_decomposition(d: Decomposition, samples: int = 100,
                         seed: int = 0) -> bool:
    """Do the stages, applied in order, reproduce the claimed automaton?"""
    rng = random.Random(seed)
    for _ in range(samples):
        y = random_ep_config(rng, d.claimed_ca.q)
        v = y
        try:
            for stage in d.stages:
                v = stage(v)
        except ValueError:
            return False
        if not ep_equal(v, apply_ep(d.claimed_ca, y)):
            return False
    return True
