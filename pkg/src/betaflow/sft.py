"""Markov partitions of finite-type intermediate maps.

The partition points are the critical point together with the orbit of 0
under the upper map and the orbit of 1 under the lower map. When both orbits
are finite, each cell is mapped affinely onto a union of cells and the map is
encoded by a 0/1 adjacency matrix.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, reduce

import numpy as np
import sympy
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import InvalidParams, MarkovViolation, NoRoot, NotAdmissible, NotSFT
from .itinerary import LOWER, UPPER, Params, apply_map, orbit
from .numerics import compare, exact_log, format_element, max_real_root_in, sign_of


@dataclass(frozen=True, eq=False)
class SftSystem:
    params: Params
    partition: tuple  # a_1 < ... < a_n
    letters: tuple  # letter of each of the n-1 cells
    adjacency: np.ndarray

    @property
    def cells(self) -> int:
        return len(self.partition) - 1

    def cell(self, i: int) -> tuple:
        return self.partition[i], self.partition[i + 1]

    def locate(self, x) -> int:
        """Index of the cell containing x (cells are half-open, the last closed)."""
        for i in range(self.cells - 1):
            if sign_of(x - self.partition[i + 1]) < 0:
                return i
        return self.cells - 1


def _point_index(points, x) -> int:
    for i, a in enumerate(points):
        if sign_of(a - x) == 0:
            return i
    return -1


def compile(params: Params, max_steps: int = 500) -> SftSystem:
    """Markov partition and adjacency matrix of ``params``.

    Raises NotSFT when either critical orbit is not finite within
    ``max_steps`` and MarkovViolation when some cell image is not a union of
    cells.
    """
    if not params.exact:
        raise InvalidParams("compilation needs exact parameters; float mode is refused")
    points = [params.scalar(0), params.scalar(1), params.p]
    for start, side in ((0, UPPER), (1, LOWER)):
        orb = orbit(params, start, side, max_steps)
        if not orb.cycle_certified:
            raise NotSFT(f"orbit of {start} is not finite within {max_steps} steps")
        points.extend(orb.points)
    ordered = []
    for x in sorted(points, key=cmp_to_key(compare)):
        if not ordered or sign_of(x - ordered[-1]) != 0:
            ordered.append(x)
    n = len(ordered) - 1
    p = params.p
    letters = tuple(0 if sign_of(ordered[i + 1] - p) <= 0 else 1 for i in range(n))
    adj = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        left, right = ordered[i], ordered[i + 1]
        lo = apply_map(params, left, UPPER)
        hi = apply_map(params, right, LOWER)
        j0, j1 = _point_index(ordered, lo), _point_index(ordered, hi)
        if j0 < 0 or j1 < 0:
            raise MarkovViolation(f"image of cell {i} does not end on partition points")
        adj[i, j0:j1] = 1
    return SftSystem(params, tuple(ordered), letters, adj)


def from_adjacency(matrix) -> SftSystem:
    """A bare system holding only a matrix, for digraph-level tools."""
    mat = np.asarray(matrix, dtype=np.int64)
    return SftSystem(None, tuple(range(mat.shape[0] + 1)), tuple([0] * mat.shape[0]), mat)


# ------------------------------------------------------------------ entropy

def characteristic_polynomial(system) -> tuple:
    """Integer coefficients of det(xI - A), constant term first."""
    mat = system.adjacency if isinstance(system, SftSystem) else np.asarray(system)
    poly = sympy.Matrix(mat.tolist()).charpoly()
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def perron_root(system):
    """Exact spectral radius as an AlgebraicReal (0 for a nilpotent matrix)."""
    coeffs = characteristic_polynomial(system)
    bound = 2 + max(abs(c) for c in coeffs[:-1])
    try:
        # a nonnegative integer matrix has spectral radius 0 or at least 1
        return max_real_root_in(coeffs, Fraction(1, 2), bound)
    except NoRoot:
        return max_real_root_in((0, 1), -1, 1)


def entropy(system) -> float:
    lam = perron_root(system)
    return exact_log(lam) if float(lam) > 0 else float("-inf")


# --------------------------------------------------------------- transitivity

@dataclass(frozen=True)
class TransitivityReport:
    transitive: bool
    period: int = 1
    shift: int | None = None  # k: cyclic classes move k steps in spatial order
    components: int = 1
    dominant: tuple = ()

    def __str__(self):
        if self.transitive:
            return "TRANSITIVE"
        extra = f", k={self.shift}" if self.shift is not None else ""
        return f"NOT_TRANSITIVE(n={self.period}{extra})"


def _cyclic_classes(mat, members):
    """Period of a strongly connected subgraph and the class of each vertex."""
    members = list(members)
    inside = set(members)
    level = {members[0]: 0}
    order = [members[0]]
    for u in order:
        for v in np.flatnonzero(mat[u]):
            v = int(v)
            if v in inside and v not in level:
                level[v] = level[u] + 1
                order.append(v)
    g = 0
    for u in members:
        for v in np.flatnonzero(mat[u]):
            v = int(v)
            if v in inside:
                g = math.gcd(g, level[u] + 1 - level[v])
    g = abs(g) or 1
    return g, {u: level[u] % g for u in members}


def transitivity_report(system) -> TransitivityReport:
    """Transitive means one strongly connected, aperiodic class covers every
    cell. Otherwise the period of the component with the largest Perron root
    is reported, with the spatial rotation k when its classes are ordered."""
    mat = system.adjacency if isinstance(system, SftSystem) else np.asarray(system, dtype=np.int64)
    ncomp, labels = connected_components(csr_matrix(mat), directed=True, connection="strong")
    best, best_rho = None, -1.0
    for c in range(ncomp):
        members = np.flatnonzero(labels == c)
        sub = mat[np.ix_(members, members)]
        if sub.sum() == 0:
            continue
        rho = float(max(abs(np.linalg.eigvals(sub.astype(float)))))
        if rho > best_rho + 1e-12:
            best, best_rho = members, rho
    if best is None:
        return TransitivityReport(False, 1, None, int(ncomp), ())
    period, cls = _cyclic_classes(mat, [int(u) for u in best])
    if ncomp == 1 and period == 1:
        return TransitivityReport(True, 1, None, 1, tuple(int(u) for u in best))
    shift = None
    if period > 1:
        shift = _spatial_shift(mat, cls, period)
    return TransitivityReport(False, period, shift, int(ncomp), tuple(int(u) for u in best))


def _spatial_shift(mat, cls, period):
    """k such that the class at spatial rank r maps into rank r + k, if any."""
    first = {}
    for u, c in cls.items():
        first[c] = min(first.get(c, u), u)
    ranking = sorted(first, key=first.get)
    rank = {c: r for r, c in enumerate(ranking)}
    ks = set()
    for u, c in cls.items():
        for v in np.flatnonzero(mat[u]):
            if int(v) in cls:
                ks.add((rank[cls[int(v)]] - rank[c]) % period)
    if len(ks) == 1:
        k = ks.pop()
        return k if math.gcd(k, period) == 1 else None
    return None


# ---------------------------------------------------------------- cylinders

def is_admissible(system: SftSystem, cells) -> bool:
    return all(system.adjacency[a, b] for a, b in zip(cells, cells[1:]))


def cylinder(system: SftSystem, cells) -> tuple:
    """Exact endpoints of the set of points visiting ``cells`` in order."""
    cells = tuple(cells)
    if not cells:
        raise NotAdmissible("empty cell word")
    if not is_admissible(system, cells):
        raise NotAdmissible(f"cell word {cells} is not allowed by the adjacency matrix")
    params = system.params
    lo, hi = system.cell(cells[-1])
    for c in reversed(cells[:-1]):
        shift = system.letters[c]
        lo = (lo - params.alpha + shift) / params.beta
        hi = (hi - params.alpha + shift) / params.beta
    return lo, hi


def cylinder_length(system: SftSystem, cells):
    lo, hi = cylinder(system, cells)
    return hi - lo


def admissible_words(system: SftSystem, length: int):
    """All admissible cell words of the given length (depth-first)."""
    n = system.cells
    succ = [tuple(int(j) for j in np.flatnonzero(system.adjacency[i])) for i in range(n)]
    stack = [(i,) for i in reversed(range(n))]
    while stack:
        word = stack.pop()
        if len(word) == length:
            yield word
            continue
        for j in reversed(succ[word[-1]]):
            stack.append(word + (j,))


def count_cell_words(system: SftSystem, length: int) -> int:
    if length <= 0:
        return 1
    power = np.linalg.matrix_power(system.adjacency.astype(object), length - 1)
    return int(sum(sum(row) for row in power.tolist()))


# ----------------------------------------------------------------- emission

def emit_csv(system: SftSystem) -> str:
    out = io.StringIO()
    n = system.cells
    out.write("cell," + ",".join(f"c{j}" for j in range(n)) + "\n")
    for i in range(n):
        out.write(f"c{i}," + ",".join(str(int(v)) for v in system.adjacency[i]) + "\n")
    return out.getvalue()


def emit_dot(system: SftSystem) -> str:
    lines = ["digraph markov {", "  rankdir=LR;"]
    for i in range(system.cells):
        lo, hi = system.cell(i)
        close = "]" if i == system.cells - 1 else ")"
        label = f"c{i} [{float(lo):.6f}, {float(hi):.6f}{close} letter {system.letters[i]}"
        lines.append(f'  c{i} [label="{label}"];')
    for i, j in zip(*np.nonzero(system.adjacency)):
        lines.append(f"  c{i} -> c{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def describe(system: SftSystem) -> dict:
    return {
        "cells": system.cells,
        "partition": [format_element(a) for a in system.partition],
        "partition_decimal": [round(float(a), 12) for a in system.partition],
        "letters": list(system.letters),
        "adjacency": system.adjacency.tolist(),
    }


def row_sums_positive(system: SftSystem) -> bool:
    return bool(reduce(lambda ok, row: ok and row.sum() > 0, system.adjacency, True))
