"""Deterministic automata for shifts cut out by lexicographic bounds.

A rule assigns to each letter ``a`` a pair ``(lower, upper)`` of EPWords (either
may be None). A word xi is accepted when every suffix sigma^n(xi) starting with
``a`` satisfies ``lower <= sigma^n(xi) <= upper``. States are the sets of
bounds that are still tied with the suffix read so far, each recorded with its
position inside the bounding word. Bounds are eventually periodic, so there are
finitely many states.

The accepted language is that of the closed (weak-inequality) shift, which has
the same finite prefixes and the same entropy as the strict-inequality sets used
in the theory.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np
from scipy.sparse.csgraph import connected_components
from scipy.sparse import csr_matrix

from .words import EPWord, Order, lex_compare

LOWER_BOUND, UPPER_BOUND = 0, 1


class LexAutomaton:
    def __init__(self, rules: dict):
        self.bounds = []
        self._starts = {}
        for letter in (0, 1):
            lower, upper = rules.get(letter, (None, None))
            starts = []
            if lower is not None:
                starts.append((self._bound_id(lower), LOWER_BOUND, 0))
            if upper is not None:
                starts.append((self._bound_id(upper), UPPER_BOUND, 0))
            self._starts[letter] = tuple(starts)
        self.states = [frozenset()]
        self.index = {frozenset(): 0}
        self.delta = []  # delta[s][letter] -> state or -1
        self._explore()
        self.live = self._live_states()

    def _bound_id(self, word: EPWord) -> int:
        for i, w in enumerate(self.bounds):
            if w == word:
                return i
        self.bounds.append(word)
        return len(self.bounds) - 1

    def step(self, state: frozenset, x: int):
        nxt = set()
        for wid, kind, pos in tuple(state) + self._starts[x]:
            word = self.bounds[wid]
            expect = word.letter(pos)
            if x == expect:
                nxt.add((wid, kind, word.canonical_index(pos + 1)))
            elif (kind == LOWER_BOUND) == (x < expect):
                return None
        return frozenset(nxt)

    def _explore(self):
        queue = deque([0])
        self.delta.append([-1, -1])
        while queue:
            s = queue.popleft()
            for x in (0, 1):
                nxt = self.step(self.states[s], x)
                if nxt is None:
                    continue
                j = self.index.get(nxt)
                if j is None:
                    j = len(self.states)
                    self.states.append(nxt)
                    self.index[nxt] = j
                    self.delta.append([-1, -1])
                    queue.append(j)
                self.delta[s][x] = j

    def _live_states(self) -> frozenset:
        """States from which an infinite path exists."""
        alive = set(range(len(self.states)))
        changed = True
        while changed:
            changed = False
            for s in list(alive):
                if not any(t in alive for t in self.delta[s] if t >= 0):
                    alive.discard(s)
                    changed = True
        return frozenset(alive)

    @property
    def nonempty(self) -> bool:
        return 0 in self.live

    def run(self, letters):
        """State index after reading ``letters`` from the start, or None."""
        s = 0
        for x in letters:
            s = self.delta[s][x]
            if s < 0:
                return None
        return s

    def count_words(self, n: int) -> int:
        """Number of length-n prefixes of accepted infinite words."""
        if not self.nonempty:
            return 0
        counts = {0: 1}
        for _ in range(n):
            nxt = {}
            for s, c in counts.items():
                for t in self.delta[s]:
                    if t in self.live:
                        nxt[t] = nxt.get(t, 0) + c
            counts = nxt
        return sum(counts.values())

    def count_sequence(self, n: int) -> list:
        """Counts for lengths 0..n in one pass."""
        out = [1 if self.nonempty else 0]
        if not self.nonempty:
            return out + [0] * n
        counts = {0: 1}
        for _ in range(n):
            nxt = {}
            for s, c in counts.items():
                for t in self.delta[s]:
                    if t in self.live:
                        nxt[t] = nxt.get(t, 0) + c
            counts = nxt
            out.append(sum(counts.values()))
        return out

    def live_adjacency(self):
        order = sorted(self.live)
        pos = {s: i for i, s in enumerate(order)}
        mat = np.zeros((len(order), len(order)), dtype=np.int64)
        for s in order:
            for t in self.delta[s]:
                if t in self.live:
                    mat[pos[s], pos[t]] += 1
        return mat

    def has_positive_entropy(self) -> bool:
        """Exact test: some strongly connected component carries two cycles,
        i.e. has more internal edges than vertices."""
        mat = self.live_adjacency()
        if mat.size == 0:
            return False
        ncomp, labels = connected_components(csr_matrix(mat), directed=True, connection="strong")
        for c in range(ncomp):
            members = np.flatnonzero(labels == c)
            sub = mat[np.ix_(members, members)]
            if sub.sum() > len(members):
                return True
        return False

    def perron_root(self) -> float:
        """Spectral radius of the live part (float; 0 for an empty shift)."""
        mat = self.live_adjacency()
        if mat.size == 0:
            return 0.0
        if not self.has_positive_entropy():
            # finitely many cycles; radius 1 if any cycle survives
            return 1.0 if _has_cycle(mat) else 0.0
        return float(max(abs(np.linalg.eigvals(mat.astype(float)))))

    def entropy(self) -> float:
        lam = self.perron_root()
        return math.log(lam) if lam > 0 else float("-inf")

    def tail_acceptable(self, state: int, tail: EPWord, strict_lower: bool, strict_upper: bool) -> bool:
        """Whether the pending ties in ``state`` are resolved acceptably when
        the infinite word ``tail`` follows (no new constraints are started)."""
        for wid, kind, pos in self.states[state]:
            bound = self.bounds[wid].shift(pos)
            order = lex_compare(tail, bound)
            if kind == LOWER_BOUND:
                if order == Order.LT or (strict_lower and order == Order.EQ):
                    return False
            else:
                if order == Order.GT or (strict_upper and order == Order.EQ):
                    return False
        return True


def _has_cycle(mat) -> bool:
    ncomp, labels = connected_components(csr_matrix(mat), directed=True, connection="strong")
    for c in range(ncomp):
        members = np.flatnonzero(labels == c)
        if mat[np.ix_(members, members)].sum() >= len(members) and (
                len(members) > 1 or mat[members[0], members[0]] > 0):
            return True
    return False


def interval_automaton(lower: EPWord, upper: EPWord) -> LexAutomaton:
    """Every shift must lie in [lower, upper]."""
    return LexAutomaton({0: (lower, upper), 1: (lower, upper)})
