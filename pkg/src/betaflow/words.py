"""Finite and eventually periodic binary words.

An ``EPWord`` stores ``pre`` and ``per`` so that the infinite word is
``pre + per + per + ...``. The constructor normalises to the canonical form
(primitive period, shortest preperiod), so structural equality is equality
of infinite words.
"""

from __future__ import annotations

import math
import re
from enum import IntEnum
from functools import total_ordering


class Order(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def as_letters(word) -> tuple:
    """Coerce a string like ``"0110"`` or an iterable of bits to a tuple."""
    if isinstance(word, str):
        letters = tuple(int(c) for c in word)
    else:
        letters = tuple(int(c) for c in word)
    if any(c not in (0, 1) for c in letters):
        raise ValueError(f"letters must be 0 or 1: {word!r}")
    return letters


def _primitive_root(per: tuple) -> tuple:
    n = len(per)
    for d in range(1, n + 1):
        if n % d == 0 and per[:d] * (n // d) == per:
            return per[:d]
    return per


@total_ordering
class EPWord:
    __slots__ = ("pre", "per", "_hash")

    def __init__(self, pre=(), per=(0,)):
        pre = as_letters(pre)
        per = as_letters(per)
        if not per:
            raise ValueError("period must be nonempty")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)
        object.__setattr__(self, "_hash", hash((pre, per)))

    def __setattr__(self, name, value):
        raise AttributeError("EPWord is immutable")

    @classmethod
    def periodic(cls, block) -> "EPWord":
        return cls((), block)

    @classmethod
    def parse(cls, text: str) -> "EPWord":
        """Parse ``11(100)`` or the star shorthand ``10*`` (= 1 0^inf)."""
        s = text.strip().replace(" ", "")
        m = re.fullmatch(r"([01]*)\(([01]+)\)(?:\^?(?:inf|∞))?", s)
        if m:
            return cls(m.group(1), m.group(2))
        m = re.fullmatch(r"([01]*)([01])\*", s)
        if m:
            return cls(m.group(1), m.group(2))
        raise ValueError(f"cannot parse word {text!r}")

    def __str__(self):
        return "".join(map(str, self.pre)) + "(" + "".join(map(str, self.per)) + ")"

    def __repr__(self):
        return f"EPWord({str(self)!r})"

    def __eq__(self, other):
        if not isinstance(other, EPWord):
            return NotImplemented
        return self.pre == other.pre and self.per == other.per

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        if not isinstance(other, EPWord):
            return NotImplemented
        return lex_compare(self, other) == Order.LT

    def __getitem__(self, i: int) -> int:
        return self.letter(i)

    def letter(self, i: int) -> int:
        if i < len(self.pre):
            return self.pre[i]
        return self.per[(i - len(self.pre)) % len(self.per)]

    def prefix(self, n: int) -> tuple:
        return tuple(self.letter(i) for i in range(n))

    def shift(self, k: int = 1) -> "EPWord":
        return shift(self, k)

    def prepend(self, letters) -> "EPWord":
        return EPWord(as_letters(letters) + self.pre, self.per)

    def distinct_shifts(self) -> list:
        """All distinct words sigma^n(self), n >= 0."""
        return [shift(self, k) for k in range(len(self.pre) + len(self.per))]

    @property
    def is_periodic(self) -> bool:
        return not self.pre

    @property
    def span(self) -> int:
        return len(self.pre) + len(self.per)

    def canonical_index(self, i: int) -> int:
        """Reduce a letter position to a representative below ``span``."""
        if i < len(self.pre):
            return i
        return len(self.pre) + (i - len(self.pre)) % len(self.per)


def compare_window(a: EPWord, b: EPWord) -> int:
    la, lb = len(a.per), len(b.per)
    return len(a.pre) + len(b.pre) + la * lb // math.gcd(la, lb) + max(la, lb)


def lex_compare(a: EPWord, b: EPWord) -> Order:
    if a == b:
        return Order.EQ
    for i in range(compare_window(a, b)):
        x, y = a.letter(i), b.letter(i)
        if x != y:
            return Order.LT if x < y else Order.GT
    # unreachable for canonical words; kept as a guard
    raise AssertionError(f"comparison window too short for {a} and {b}")


def shift(a: EPWord, k: int) -> EPWord:
    if k < 0:
        raise ValueError("shift amount must be nonnegative")
    if k <= len(a.pre):
        return EPWord(a.pre[k:], a.per)
    j = (k - len(a.pre)) % len(a.per)
    return EPWord((), a.per[j:] + a.per[:j])


def reflect(a: EPWord) -> EPWord:
    return EPWord(tuple(1 - c for c in a.pre), tuple(1 - c for c in a.per))


def is_lyndon(s) -> bool:
    s = as_letters(s)
    if not s:
        raise ValueError("Lyndon test needs a nonempty word")
    return all(s < s[k:] + s[:k] for k in range(1, len(s)))


def is_balanced(a: EPWord) -> bool:
    longest = len(a.pre) + 2 * len(a.per)
    starts = len(a.pre) + len(a.per)
    letters = a.prefix(starts + longest)
    for length in range(1, longest + 1):
        ones = [sum(letters[i:i + length]) for i in range(starts)]
        if max(ones) - min(ones) > 1:
            return False
    return True


def smallest_period(a: EPWord) -> tuple:
    return len(a.pre), len(a.per)


def compare_prefixes(u, v) -> Order:
    """Order of two finite words on their common length (EQ if one is a prefix)."""
    for x, y in zip(u, v):
        if x != y:
            return Order.LT if x < y else Order.GT
    return Order.EQ


def format_letters(letters) -> str:
    return "".join(map(str, letters))
