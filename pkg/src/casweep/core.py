"""Core data model: finite alphabets, words, eventually periodic configurations.

An alphabet is the integer range 0..q-1 for some q >= 2 and is passed around
as the plain integer q.  A word is a tuple of symbols.  A configuration is a
bi-infinite sequence of symbols; the only configurations this package ever
materializes are eventually periodic ones, represented by `EpConfig`: a left
periodic tail, a finite center anchored at an absolute coordinate, and a
right periodic tail.  Every exact algorithm in the package reduces questions
about arbitrary configurations to questions about these.

Rational bookkeeping (densities and their p-adic valuations) is done with
`fractions.Fraction`, which already keeps values in lowest terms.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction


class ResourceCapError(RuntimeError):
    """An enumeration or construction would exceed its configured cap."""


class IntegrityError(RuntimeError):
    """An internal cross-check failed; indicates a bug, not bad input."""


def check_alphabet(q: int) -> int:
    if not isinstance(q, int) or q < 2:
        raise ValueError(f"alphabet size must be an integer >= 2, got {q!r}")
    return q


def check_word(w: tuple[int, ...], q: int) -> tuple[int, ...]:
    for s in w:
        if not 0 <= s < q:
            raise ValueError(f"symbol {s} out of range for alphabet of size {q}")
    return tuple(w)


def word_index(w: tuple[int, ...], q: int) -> int:
    """Rank of a word among all words of its length, most significant first.

    The encoding is positional base q: ``word_index((1, 0), 2) == 2`` and
    ``word_index((2, 1), 3) == 7``.  Inverse of `word_of_index`.
    """
    i = 0
    for s in w:
        if not 0 <= s < q:
            raise ValueError(f"symbol {s} out of range for alphabet of size {q}")
        i = i * q + s
    return i


def word_of_index(i: int, length: int, q: int) -> tuple[int, ...]:
    """Word of the given length whose `word_index` is i."""
    if not 0 <= i < q**length:
        raise ValueError(f"index {i} out of range for {length} symbols over {q}")
    out = []
    for _ in range(length):
        i, s = divmod(i, q)
        out.append(s)
    return tuple(reversed(out))


def all_words(length: int, q: int):
    """Iterate all words of a length in lexicographic (index) order."""
    for i in range(q**length):
        yield word_of_index(i, length, q)


def pair_symbol(a: int, b: int, q: int) -> int:
    """Encode a pair of symbols over 0..q-1 as one symbol over 0..q*q-1."""
    return a * q + b


def split_symbol(s: int, q: int) -> tuple[int, int]:
    return divmod(s, q)


# ---------------------------------------------------------------------------
# Eventually periodic configurations


@dataclass(frozen=True)
class EpConfig:
    """Eventually periodic bi-infinite configuration.

    Cells below `center_start` repeat `left_period`, tiled so that one copy
    ends exactly at `center_start`.  Cells in ``[center_start, center_start +
    len(center))`` come from `center`.  Cells from `center_end` on repeat
    `right_period`, with the first copy starting at `center_end`.

    Instances are not normalized on construction; `normalize` produces the
    canonical representative and `ep_equal` compares semantically.
    """

    q: int
    left_period: tuple[int, ...]
    center: tuple[int, ...]
    center_start: int
    right_period: tuple[int, ...]

    def __post_init__(self):
        check_alphabet(self.q)
        if not self.left_period or not self.right_period:
            raise ValueError("periodic tails must be nonempty words")
        object.__setattr__(self, "left_period", check_word(self.left_period, self.q))
        object.__setattr__(self, "center", check_word(self.center, self.q))
        object.__setattr__(self, "right_period", check_word(self.right_period, self.q))

    @property
    def center_end(self) -> int:
        return self.center_start + len(self.center)

    def cell(self, i: int) -> int:
        if i < self.center_start:
            return self.left_period[(i - self.center_start) % len(self.left_period)]
        if i < self.center_end:
            return self.center[i - self.center_start]
        return self.right_period[(i - self.center_end) % len(self.right_period)]

    def window(self, lo: int, hi: int) -> tuple[int, ...]:
        """Cells at positions lo <= i < hi."""
        return tuple(self.cell(i) for i in range(lo, hi))

    def shifted(self, k: int) -> "EpConfig":
        """Configuration y with y[i] = self[i + k] (k = 1 is the left shift)."""
        return EpConfig(self.q, self.left_period, self.center,
                        self.center_start - k, self.right_period)

    def reversed(self) -> "EpConfig":
        """Configuration y with y[i] = self[-i]."""
        rev_center = tuple(reversed(self.center))
        return EpConfig(
            self.q,
            tuple(reversed(self.right_period)),
            rev_center,
            1 - self.center_end,
            tuple(reversed(self.left_period)),
        )

    def normalize(self) -> "EpConfig":
        """Canonical representative: minimal periods, maximally absorbed center.

        Idempotent.  Two configurations with the same cells normalize to the
        same dataclass value, except that a fully periodic configuration is
        additionally rotated so that its phase is anchored at coordinate 0.
        """
        left = _minimal_period(self.left_period)
        right = _minimal_period(self.right_period)
        center = list(self.center)
        cs = self.center_start
        # absorb center symbols that already match the adjacent tail tiling
        while center and center[-1] == right[-1]:
            center.pop()
            right = right[-1:] + right[:-1]
        while center and center[0] == left[0]:
            center.pop(0)
            cs += 1
            left = left[1:] + left[:1]
        if not center:
            # fully periodic iff both tilings agree on every cell
            period = math.lcm(len(left), len(right))
            lt = [left[(i - cs) % len(left)] for i in range(period)]
            rt = [right[(i - cs) % len(right)] for i in range(period)]
            if lt == rt:
                p = _minimal_period(tuple(lt))
                return EpConfig(self.q, p, (), 0, p)
        return EpConfig(self.q, tuple(left), tuple(center), cs, tuple(right))


def _minimal_period(p: tuple[int, ...]) -> tuple[int, ...]:
    n = len(p)
    for d in range(1, n + 1):
        if n % d == 0 and p == p[:d] * (n // d):
            return p[:d]
    return p


def ep_equal(x: EpConfig, y: EpConfig) -> bool:
    """Exact cell-wise equality of two eventually periodic configurations.

    Both tails are compared over one least common period beyond the last
    center cell on each side; inside that range the cells are compared
    directly, which is sound because both configurations are purely periodic
    there.
    """
    if x.q != y.q:
        return False
    lo = min(x.center_start, y.center_start)
    hi = max(x.center_end, y.center_end)
    lper = math.lcm(len(x.left_period), len(y.left_period))
    rper = math.lcm(len(x.right_period), len(y.right_period))
    return x.window(lo - lper, hi + rper) == y.window(lo - lper, hi + rper)


def ep_splice(left_src: EpConfig, at: int, w: tuple[int, ...],
              right_src: EpConfig) -> EpConfig:
    """Configuration equal to left_src below `at`, to `w` on
    [at, at+len(w)), and to right_src from at+len(w) on."""
    if left_src.q != right_src.q:
        raise ValueError("alphabet mismatch in splice")
    cut = at + len(w)
    cs = min(left_src.center_start, at)
    ce = max(right_src.center_end, cut)
    lper = left_src.left_period
    rper = right_src.right_period
    center = (left_src.window(cs, at) + tuple(w) + right_src.window(cut, ce))
    return EpConfig(
        left_src.q,
        left_src.window(cs - len(lper), cs),
        center,
        cs,
        right_src.window(ce, ce + len(rper)),
    )


def ep_replace(x: EpConfig, at: int, w: tuple[int, ...]) -> EpConfig:
    """Copy of x with cells [at, at+len(w)) replaced by w."""
    return ep_splice(x, at, w, x)


def ep_zip(y: EpConfig, z: EpConfig) -> EpConfig:
    """Pair two configurations into one over the product alphabet q*q.

    Cell i of the result is ``pair_symbol(y[i], z[i], q)``.  This is how the
    bi-infinite automata consume relations: a pair of configurations becomes
    a single probe word.
    """
    if y.q != z.q:
        raise ValueError("alphabet mismatch in zip")
    q = y.q
    cs = min(y.center_start, z.center_start)
    ce = max(y.center_end, z.center_end)
    lper = math.lcm(len(y.left_period), len(z.left_period))
    rper = math.lcm(len(y.right_period), len(z.right_period))
    cells = lambda lo, hi: tuple(
        pair_symbol(y.cell(i), z.cell(i), q) for i in range(lo, hi))
    return EpConfig(q * q, cells(cs - lper, cs), cells(cs, ce), cs,
                    cells(ce, ce + rper))


def ep_unzip(x: EpConfig) -> tuple[EpConfig, EpConfig]:
    """Inverse of `ep_zip`; x.q must be a perfect square."""
    q = math.isqrt(x.q)
    if q * q != x.q:
        raise ValueError("config alphabet is not a product of two equal factors")
    def part(which):
        pick = lambda s: split_symbol(s, q)[which]
        return EpConfig(q, tuple(map(pick, x.left_period)),
                        tuple(map(pick, x.center)), x.center_start,
                        tuple(map(pick, x.right_period)))
    return part(0), part(1)


def ep_to_json(x: EpConfig) -> dict:
    return {"alphabet": x.q, "left_period": list(x.left_period),
            "center": list(x.center), "center_start": x.center_start,
            "right_period": list(x.right_period)}


def ep_from_json(obj: dict) -> EpConfig:
    try:
        return EpConfig(int(obj["alphabet"]), tuple(obj["left_period"]),
                        tuple(obj["center"]), int(obj["center_start"]),
                        tuple(obj["right_period"]))
    except KeyError as e:
        raise ValueError(f"configuration file missing field {e}") from e


def random_ep_config(rng: random.Random, q: int, max_period: int = 3,
                     max_center: int = 4, span: int = 3) -> EpConfig:
    """Seeded random configuration for sampling-based checks."""
    word = lambda n: tuple(rng.randrange(q) for _ in range(n))
    return EpConfig(
        q,
        word(rng.randint(1, max_period)),
        word(rng.randint(0, max_center)),
        rng.randint(-span, span),
        word(rng.randint(1, max_period)),
    )


# ---------------------------------------------------------------------------
# p-adic valuations of rationals

def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n >= 1, ascending."""
    if n < 1:
        raise ValueError("prime_factors expects a positive integer")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def vp(r: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational.

    vp(a/b, p) is the exponent of p in a minus the exponent of p in b, so
    ``vp(Fraction(324, 216), 2) == -1`` and ``vp(Fraction(324, 216), 3) == 1``.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if r == 0:
        raise ValueError("valuation of zero is undefined")
    def exp_of(n: int) -> int:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        return e
    return exp_of(abs(r.numerator)) - exp_of(r.denominator)
