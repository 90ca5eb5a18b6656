"""Finite-depth evidence for the geometric condition behind winning sets.

For a transitive finite-type system with Markov partition cells I(0..n-1),
the condition on a point x with cell itinerary w has two parts: cylinder
ratios |I(u w|_i)| / |I(u)| decay in i, and separated cylinders stay
separated by a fixed fraction after appending w|_i. Both are checked here
with exact cylinder endpoints up to a chosen depth. The output is a report,
not a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InvalidParams, NotTransitive
from .itinerary import Params, apply_map
from .numerics import exact_log, sign_of
from .sft import SftSystem, admissible_words, compile, cylinder, transitivity_report


# ----------------------------------------------------------- cell itineraries

@dataclass(frozen=True)
class CellWord:
    """Eventually periodic word over cell indices."""

    pre: tuple
    per: tuple

    def letter(self, i: int) -> int:
        if i < len(self.pre):
            return self.pre[i]
        return self.per[(i - len(self.pre)) % len(self.per)]

    def prefix(self, n: int) -> tuple:
        return tuple(self.letter(i) for i in range(n))

    @property
    def is_periodic(self) -> bool:
        return not self.pre

    def __str__(self):
        return "".join(f"{c}." for c in self.pre) + "(" + ".".join(map(str, self.per)) + ")"


def cell_itinerary(system: SftSystem, x, max_steps: int = 500) -> CellWord:
    """Cells visited by the orbit of x, certified by an exact revisit."""
    params = system.params
    x = params.scalar(x)
    seen = {}
    cells = []
    for k in range(max_steps):
        if x in seen:
            start = seen[x]
            return CellWord(tuple(cells[:start]), tuple(cells[start:]))
        seen[x] = k
        cells.append(system.locate(x))
        x = apply_map(params, x)
    raise InvalidParams(f"orbit of x does not close within {max_steps} steps")


def _overlap(w: CellWord, k: int, limit: int) -> int:
    n = 0
    while n < limit and w.letter(n + k) == w.letter(n):
        n += 1
    return n


def offset_M(w: CellWord, k0: int) -> int:
    """Longest agreement of w with its own shifts (periodic: within one
    period; otherwise over shifts 1..k0, windowed by pre + period)."""
    if w.is_periodic:
        shifts = range(1, len(w.per))
        limit = len(w.per) * 2
    else:
        shifts = range(1, k0 + 1)
        limit = len(w.pre) + 2 * len(w.per) + k0
    return max((_overlap(w, k, limit) for k in shifts), default=0)


# ------------------------------------------------------------------ constants

def mixing_time(system) -> int:
    """Least m with every entry of A^m positive."""
    report = transitivity_report(system)
    if not report.transitive:
        raise NotTransitive(f"system is {report}")
    mat = system.adjacency if isinstance(system, SftSystem) else np.asarray(system)
    n = mat.shape[0]
    power = (mat > 0).astype(np.int64)
    step = (mat > 0).astype(np.int64)
    for m in range(1, (n - 1) ** 2 + 2):
        if power.min() > 0:
            return m
        power = np.minimum(power @ step, 1)
    raise NotTransitive("matrix is not primitive")


def min_cell_length(system: SftSystem):
    lengths = [system.partition[i + 1] - system.partition[i] for i in range(system.cells)]
    best = lengths[0]
    for v in lengths[1:]:
        if sign_of(v - best) < 0:
            best = v
    return best


def comparability_window(system: SftSystem, gamma) -> int:
    """k0: gamma/4-comparable cylinders differ in length by at most k0 letters."""
    rho = float(min_cell_length(system))
    return math.ceil(math.log(4 / (float(gamma) * rho)) / exact_log(system.params.beta))


# --------------------------------------------------------------- conditions

class _Cylinders:
    def __init__(self, system):
        self.system = system
        self._get = lru_cache(maxsize=None)(lambda w: cylinder(system, w))

    def __call__(self, word):
        return self._get(tuple(word))

    def length(self, word):
        lo, hi = self(word)
        return hi - lo

    def distance(self, a, b):
        (a0, a1), (b0, b1) = self(a), self(b)
        if sign_of(a1 - b0) <= 0:
            return b0 - a1
        if sign_of(b1 - a0) <= 0:
            return a0 - b1
        return self.system.params.scalar(0)


@dataclass
class CylinderBoundsReport:
    depth: int
    checked: int
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_cylinder_bounds(system: SftSystem, depth: int) -> CylinderBoundsReport:
    """rho * beta^-|v| <= |I(v)| <= beta^-|v| for every admissible v, |v| <= depth."""
    beta = system.params.beta
    rho = min_cell_length(system)
    cyl = _Cylinders(system)
    report = CylinderBoundsReport(depth, 0)
    for n in range(1, depth + 1):
        scale = 1 / beta ** n
        for word in admissible_words(system, n):
            size = cyl.length(word)
            report.checked += 1
            if sign_of(size - rho * scale) < 0 or sign_of(scale - size) < 0:
                report.violations.append(word)
    return report


@dataclass
class RatioReport:
    depth: int
    sup_ratio: list  # sup over u, per i = 0..depth
    bounds: list
    within_bound: bool
    nonincreasing: bool

    @property
    def passed(self) -> bool:
        return self.within_bound and self.nonincreasing


def check_ratio_condition(system: SftSystem, x_word: CellWord, depth: int) -> RatioReport:
    beta = system.params.beta
    rho = min_cell_length(system)
    cyl = _Cylinders(system)
    words = [w for n in range(1, depth + 1) for w in admissible_words(system, n)]
    sups, bounds = [1.0], [1.0 / float(rho)]
    ok = True
    for i in range(1, depth + 1):
        tail = x_word.prefix(i)
        bound = 1 / (beta ** i * rho)
        best = None
        for u in words:
            if not system.adjacency[u[-1], tail[0]]:
                continue
            ratio = cyl.length(u + tail) / cyl.length(u)
            if best is None or sign_of(ratio - best) > 0:
                best = ratio
        if best is not None and sign_of(bound - best) < 0:
            ok = False
        sups.append(float(best) if best is not None else 0.0)
        bounds.append(float(bound))
    mono = all(a >= b - 1e-15 for a, b in zip(sups, sups[1:]))
    return RatioReport(depth, sups, bounds, ok, mono)


@dataclass
class DistanceReport:
    depth: int
    gamma: Fraction
    c_bound: float
    k0: int
    m: int
    M: int
    i_star: int
    pairs: int = 0
    zero_distance: int = 0
    prefix_pairs: int = 0
    worst_ratio: float = math.inf
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_distance_condition(system: SftSystem, x_word: CellWord, gamma, depth: int) -> DistanceReport:
    """Every pair (v, e) of admissible words of length <= depth, with cylinder
    lengths within a factor 4/gamma of each other and both followed by w|_i
    (1 <= i <= depth), either touches after appending w|_i or keeps at least
    c = rho * beta^-(m+1) times its original distance."""
    gamma = Fraction(gamma)
    beta = system.params.beta
    rho = min_cell_length(system)
    m = mixing_time(system)
    k0 = comparability_window(system, gamma)
    M = offset_M(x_word, k0)
    c = rho / beta ** (m + 1)
    report = DistanceReport(depth, gamma, float(c), k0, m, M, k0 + m + M)
    cyl = _Cylinders(system)
    words = [w for n in range(1, depth + 1) for w in admissible_words(system, n)]
    lengths = {w: cyl.length(w) for w in words}
    quarter = gamma / 4
    for i in range(1, depth + 1):
        tail = x_word.prefix(i)
        ext = [w for w in words if system.adjacency[w[-1], tail[0]]]
        for a_idx, v in enumerate(ext):
            for e in ext[a_idx + 1:]:
                lv, le = lengths[v], lengths[e]
                if sign_of(lv - le * quarter) < 0 or sign_of(le - lv * quarter) < 0:
                    continue
                report.pairs += 1
                if v == e[:len(v)] or e == v[:len(e)]:
                    report.prefix_pairs += 1
                after = cyl.distance(v + tail, e + tail)
                if sign_of(after) == 0:
                    report.zero_distance += 1
                    continue
                before = cyl.distance(v, e)
                if sign_of(before) == 0:
                    continue
                ratio = float(after / before)
                report.worst_ratio = min(report.worst_ratio, ratio)
                if sign_of(after - c * before) < 0:
                    report.violations.append((v, e, i))
    return report


# ------------------------------------------------------------------- report

@dataclass
class WinningReport:
    transitive: bool
    period: int
    certified_points: list
    ratio: object = None
    distance: object = None
    pieces: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if self.transitive:
            return bool(self.ratio and self.ratio.passed and self.distance and self.distance.passed)
        return bool(self.pieces) and all(p["primitive"] for p in self.pieces)

    def as_dict(self) -> dict:
        out = {"transitive": self.transitive, "period": self.period,
               "certified_points": self.certified_points, "passed": self.passed}
        if self.ratio is not None:
            out["ratio"] = {"depth": self.ratio.depth, "sup_ratio": [round(v, 12) for v in self.ratio.sup_ratio],
                            "bound": [round(v, 12) for v in self.ratio.bounds],
                            "within_bound": self.ratio.within_bound,
                            "nonincreasing": self.ratio.nonincreasing}
        if self.distance is not None:
            d = self.distance
            out["distance"] = {"depth": d.depth, "gamma": str(d.gamma), "c": round(d.c_bound, 12),
                               "k0": d.k0, "m": d.m, "M": d.M, "i_star": d.i_star, "pairs": d.pairs,
                               "zero_distance": d.zero_distance, "prefix_pairs": d.prefix_pairs,
                               "worst_ratio": None if math.isinf(d.worst_ratio) else round(d.worst_ratio, 12),
                               "violations": len(d.violations)}
        if self.pieces:
            out["pieces"] = self.pieces
        return out


def composed_report(system: SftSystem, start_cells) -> WinningReport:
    """For a system whose dominant class has period n, the n-th power of the
    adjacency restricted to each cyclic class is examined; a class whose block
    is primitive supports a certificate for the n-th iterate."""
    report = transitivity_report(system)
    n = report.period
    mat = system.adjacency.astype(np.int64)
    members = list(report.dominant)
    power = np.linalg.matrix_power(mat, n)
    from .sft import _cyclic_classes
    _, cls = _cyclic_classes(mat, members)
    pieces = []
    for c in range(n):
        cells = [u for u in members if cls[u] == c]
        block = np.minimum(power[np.ix_(cells, cells)], 1)
        try:
            m = mixing_time(block)
            primitive = True
        except NotTransitive:
            m, primitive = None, False
        pieces.append({"class": c, "cells": cells, "primitive": primitive, "mixing_time": m})
    certified = [j for j, cell in enumerate(start_cells) if cell in members]
    return WinningReport(False, n, certified, pieces=pieces)


def winning_report(params: Params, xi, gamma, depth: int = 10, distance_depth: int | None = None) -> WinningReport:
    gamma = Fraction(gamma)
    if not 0 < gamma < 1:
        raise InvalidParams("gamma must lie strictly between 0 and 1")
    system = compile(params)
    word = cell_itinerary(system, xi)
    trans = transitivity_report(system)
    if not trans.transitive:
        starts = [word.letter(j) for j in range(trans.period)]
        return composed_report(system, starts)
    ratio = check_ratio_condition(system, word, depth)
    dist = check_distance_condition(system, word, gamma, distance_depth or min(depth, 8))
    return WinningReport(True, 1, [0], ratio, dist)
