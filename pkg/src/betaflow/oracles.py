"""Independent cross-checks: exhaustive prefix enumeration, box counting and
escape sampling.

Nothing here reuses the map, expansion or automaton code of the package; the
only shared piece is exact sign evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .numerics import sign_of


class Method(Enum):
    INTERVAL_SUBDIVISION = "interval_subdivision"
    ORBIT_SAMPLING = "orbit_sampling"


@dataclass(frozen=True)
class EnumerationReport:
    n: int
    words: frozenset
    method: Method

    @property
    def count(self) -> int:
        return len(self.words)


def _nonempty(lo, hi, lo_closed, hi_closed) -> bool:
    s = sign_of(hi - lo)
    return s > 0 or (s == 0 and lo_closed and hi_closed)


def brute_force_language(params, n: int) -> EnumerationReport:
    """All length-n prefixes of upper itineraries, by splitting intervals.

    Each live prefix carries the exact interval T^k(I(prefix)) with its
    endpoint closedness; a letter is admissible when the piece of that
    interval on the corresponding side of the critical point is nonempty.
    """
    for level in _levels(params, n):
        pass
    return EnumerationReport(n, frozenset(w for w, *_ in level), Method.INTERVAL_SUBDIVISION)


def language_counts(params, n_max: int) -> list:
    """Brute-force counts for lengths 1..n_max in one subdivision pass."""
    return [len(level) for level in _levels(params, n_max)][1:]


def _levels(params, n: int):
    beta, alpha = params.beta, params.alpha
    crit = (1 - alpha) / beta
    zero, one = alpha - alpha, alpha - alpha + 1
    # the upper itineraries are those of points of [0, 1)
    level = [((), zero, one, True, False)]
    yield level
    for _ in range(n):
        nxt = []
        for word, lo, hi, lc, hc in level:
            # letter 0 on [lo, hi] intersected with [0, crit)
            if sign_of(hi - crit) < 0:
                a, b, ac, bc = lo, hi, lc, hc
            else:
                a, b, ac, bc = lo, crit, lc, False
            if sign_of(a - crit) < 0 and _nonempty(a, b, ac, bc):
                nxt.append((word + (0,), beta * a + alpha, beta * b + alpha, ac, bc))
            # letter 1 on [lo, hi] intersected with [crit, 1]
            if sign_of(lo - crit) >= 0:
                a, b, ac, bc = lo, hi, lc, hc
            else:
                a, b, ac, bc = crit, hi, True, hc
            if sign_of(b - crit) >= 0 and _nonempty(a, b, ac, bc):
                nxt.append((word + (1,), beta * a + alpha - 1, beta * b + alpha - 1, ac, bc))
        level = nxt
        yield level


def landing_words(params, t, k: int, extra: int = 12, zero_letters=None) -> set:
    """Length-k itinerary prefixes of points that reach 0 within k + extra
    steps while every earlier orbit point lies in (t, 1).

    Built backwards from 0 through the two inverse branches, with exact
    arithmetic; ``zero_letters`` is the itinerary of 0 used after landing
    (computed by direct iteration when omitted).
    """
    beta, alpha = params.beta, params.alpha
    crit = (1 - alpha) / beta
    zero = alpha - alpha
    if zero_letters is None:
        zero_letters, y = [], zero
        for _ in range(k):
            letter = 0 if sign_of(y - crit) < 0 else 1
            zero_letters.append(letter)
            y = beta * y + alpha - letter
    words = set()
    level = [(zero, ())]
    for depth in range(k + extra + 1):
        for _, prefix in level:
            words.add((prefix + tuple(zero_letters))[:k])
        nxt = []
        for y, prefix in level:
            for letter in (0, 1):
                x = (y - alpha + letter) / beta
                side = sign_of(x - crit)
                if (letter == 0 and side >= 0) or (letter == 1 and side < 0):
                    continue
                if sign_of(x - t) > 0 and sign_of(1 - x) > 0:
                    nxt.append((x, (letter,) + prefix))
        level = nxt
    return words


def _orbit_survivors(beta: float, alpha: float, t: float, x: np.ndarray, steps: int) -> np.ndarray:
    crit = (1 - alpha) / beta
    alive = x >= t
    y = x.copy()
    for _ in range(steps):
        y = np.where(y < crit, beta * y + alpha, beta * y + alpha - 1)
        alive &= y >= t
    return alive


def box_counting_dim(params, t, grid: int = 2 ** 18, steps: int | None = None) -> float:
    """Slope of log(occupied boxes) against log(1/box size) for the points of
    a fine grid that avoid [0, t) for ``steps`` iterations."""
    if grid > 2 ** 20:
        raise ValueError("grid is limited to 2^20 points")
    beta, alpha, t = float(params.beta), float(params.alpha), float(t)
    if steps is None:
        steps = int(math.log(grid) / math.log(beta))
    x = (np.arange(grid) + 0.5) / grid
    alive = _orbit_survivors(beta, alpha, t, x, steps)
    if not alive.any():
        return 0.0
    idx = np.flatnonzero(alive)
    levels = int(math.log2(grid))
    scales, counts = [], []
    for k in range(3, levels - 3):
        boxes = np.unique(idx >> (levels - k))
        scales.append(k * math.log(2))
        counts.append(math.log(len(boxes)))
    slope = np.polyfit(scales, counts, 1)[0]
    return float(max(0.0, min(1.0, slope)))


def escape_fraction(params, t, samples: int = 100_000, steps: int = 1000, seed: int = 0,
                    shards: int = 4) -> float:
    """Share of uniform random points whose orbit meets [0, t) within
    ``steps`` iterations (the starting point counts). Shards draw from
    independent child streams of one 64-bit seed, so the result depends only
    on (seed, samples, shards)."""
    beta, alpha, t = float(params.beta), float(params.alpha), float(t)
    children = np.random.SeedSequence(seed).spawn(shards)
    sizes = [samples // shards + (1 if i < samples % shards else 0) for i in range(shards)]
    escaped = 0
    for child, size in zip(children, sizes):
        x = np.random.default_rng(child).random(size)
        escaped += int(size - _orbit_survivors(beta, alpha, t, x, steps).sum())
    return escaped / samples

