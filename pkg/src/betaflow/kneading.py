"""Kneading invariants, admissibility and recovery of (beta, alpha) from them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .automaton import LexAutomaton
from .errors import NoPeriodWithinBudget, NotAdmissible, RoundtripMismatch, TargetOutOfRange
from .itinerary import LOWER, UPPER, Params, Variant, WordPrefix, expansion, project_pi
from .numerics import max_real_root_in
from .words import EPWord, Order, compare_prefixes, lex_compare

ZERO_WORD = EPWord((), (0,))


@dataclass(frozen=True)
class KneadingPair:
    lower: EPWord  # omega, the lower expansion of p (WordPrefix when uncertified)
    upper: EPWord  # nu, the upper expansion of p

    def __str__(self):
        return f"({self.lower}, {self.upper})"


@dataclass(frozen=True)
class Validation:
    valid: bool
    reason: Optional[str] = None
    detail: str = ""

    def __bool__(self):
        return self.valid

    def __str__(self):
        return "VALID" if self.valid else f"INVALID({self.reason})"


def kneading_invariants(params: Params, max_steps: int = 500, require_period: bool = True) -> KneadingPair:
    """The two expansions of the critical point p.

    The first letter is fixed by the branch convention (the lower map sends p
    to 1, the upper map to 0), so p is never compared with itself; this keeps
    float mode usable. Without ``require_period`` uncertified expansions come
    back as ``WordPrefix`` objects.
    """
    lower = _after(0, expansion(params, 1, LOWER, max_steps - 1, require_period))
    upper = _after(1, expansion(params, 0, UPPER, max_steps - 1, require_period))
    return KneadingPair(lower, upper)


def _after(letter: int, word):
    if isinstance(word, EPWord):
        return word.prepend((letter,))
    return WordPrefix((letter,) + word.letters, None, word.exact)


def _pair_of(source):
    if isinstance(source, KneadingPair):
        return source.lower, source.upper
    if isinstance(source, Params):
        pair = kneading_invariants(source)
        return pair.lower, pair.upper
    omega, nu = source
    return omega, nu


def _in_omega(w: EPWord, omega: EPWord, nu: EPWord, plus: bool) -> bool:
    s_nu, s_omega = nu.shift(1), omega.shift(1)
    for s in w.distinct_shifts():
        lo1, hi1 = lex_compare(s_nu, s), lex_compare(s, omega)
        lo2, hi2 = lex_compare(nu, s), lex_compare(s, s_omega)
        if plus:
            first = lo1 != Order.GT and hi1 == Order.LT
            second = lo2 != Order.GT and hi2 == Order.LT
        else:
            first = lo1 == Order.LT and hi1 != Order.GT
            second = lo2 == Order.LT and hi2 != Order.GT
        if not (first or second):
            return False
    return True


def in_omega_plus(w: EPWord, source) -> bool:
    """Membership in the upper shift, from params or a kneading pair."""
    omega, nu = _pair_of(source)
    return _in_omega(w, omega, nu, plus=True)


def in_omega_minus(w: EPWord, source) -> bool:
    omega, nu = _pair_of(source)
    return _in_omega(w, omega, nu, plus=False)


def omega_automaton(omega: EPWord, nu: EPWord) -> LexAutomaton:
    """Automaton for the closure of the shift with kneading pair (omega, nu)."""
    return LexAutomaton({0: (nu.shift(1), omega), 1: (nu, omega.shift(1))})


def _parses(w: EPWord, xi: tuple, zeta: tuple) -> bool:
    """Whether w is an infinite concatenation of the blocks xi and zeta."""
    i = 0
    seen = set()
    while True:
        key = w.canonical_index(i)
        if i >= len(w.pre) and key in seen:
            return True
        if i >= len(w.pre):
            seen.add(key)
        block = xi if w.letter(i) == xi[0] else zeta
        if w.prefix(i + len(block))[i:] != block:
            return False
        i += len(block)


def two_block_witness(omega: EPWord, nu: EPWord, bound: Optional[int] = None):
    """Blocks (xi, zeta) breaking the renormalisation condition, or None."""
    if bound is None:
        bound = len(omega.pre) + len(nu.pre) + len(omega.per) + len(nu.per)
    for lx in range(3, bound + 1):
        xi = omega.prefix(lx)
        if xi[:2] != (0, 1):
            continue
        for lz in range(3, bound + 1):
            zeta = nu.prefix(lz)
            if zeta[:2] != (1, 0):
                continue
            if not (_parses(omega, xi, zeta) and _parses(nu, xi, zeta)):
                continue
            X, Z = EPWord.periodic(xi), EPWord.periodic(zeta)
            if _in_omega(X, X, Z, plus=False) and _in_omega(Z, X, Z, plus=True):
                if omega != X or nu != Z:
                    return xi, zeta
    return None


def validate_kneading_pair(omega: EPWord, nu: EPWord) -> Validation:
    if omega.letter(0) != 0 or nu.letter(0) != 1:
        return Validation(False, "COND1", "lower must start with 0 and upper with 1")
    if not (_in_omega(omega, omega, nu, plus=False) and _in_omega(nu, omega, nu, plus=True)):
        return Validation(False, "COND2", "kneading words violate their own shift bounds")
    if not omega_automaton(omega, nu).has_positive_entropy():
        return Validation(False, "COND3", "the shift has zero entropy")
    witness = two_block_witness(omega, nu)
    if witness is not None:
        xi, zeta = witness
        return Validation(False, "COND4",
                          f"renormalisable by blocks {''.join(map(str, xi))}, {''.join(map(str, zeta))}")
    return Validation(True)


def is_sft(params: Params, max_steps: int = 500) -> Optional[bool]:
    """True/False, or None when a kneading period is not found in budget."""
    try:
        pair = kneading_invariants(params, max_steps)
    except NoPeriodWithinBudget:
        return None
    return pair.lower.is_periodic and pair.upper.is_periodic


# ----------------------------------------------------------- root equations

def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _pneg(a):
    return [-c for c in a]


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def series_fraction(w: EPWord):
    """Integer polynomials (N, D), constant first, with sum_k w_k z^-k = N/D."""
    a, b = len(w.pre), len(w.per)
    A = [0] * a
    for k, letter in enumerate(w.pre, start=1):
        A[a - k] += letter
    B = [0] * b
    for j, letter in enumerate(w.per, start=1):
        B[b - j] += letter
    zb1 = [-1] + [0] * (b - 1) + [1]
    D = [0] * a + zb1
    N = _padd(_pmul(A, zb1) if A else [0], B)
    return N, D


def parry_polynomial(w: EPWord) -> list:
    """Cleared-denominator form of 1 = sum_k w_k z^-k."""
    N, D = series_fraction(w)
    return _padd(D, _pneg(N))


def kneading_polynomial(omega: EPWord, nu: EPWord) -> list:
    """Cleared-denominator form of sum_k (omega_k - nu_k) z^-k = 0."""
    N1, D1 = series_fraction(omega)
    N2, D2 = series_fraction(nu)
    return _padd(_pmul(N1, D2), _pneg(_pmul(N2, D1)))


def is_quasi_greedy_admissible(w: EPWord) -> bool:
    return all(lex_compare(s, w) != Order.GT for s in w.distinct_shifts())


def solve_parry_beta(w: EPWord):
    """The beta in (1, 2) whose quasi-greedy expansion of 1 is ``w``."""
    if not is_quasi_greedy_admissible(w):
        raise NotAdmissible(f"{w} has a shift exceeding itself")
    if w.per == (0,):
        raise NotAdmissible(f"{w} ends in zeros; quasi-greedy words never do")
    return max_real_root_in(parry_polynomial(w), 1, 2)


def alpha_from_pair(beta, nu: EPWord):
    """alpha solving alpha/(1-beta) + pi_{beta,0}(nu) = (1-alpha)/beta."""
    greedy = Params(beta, 0, validate=False)
    s = project_pi(greedy, nu)
    b = greedy.beta
    return (1 - b) * (1 - b * s)


def system_from_kneading_pair(omega: EPWord, nu: EPWord, verify: bool = True,
                              max_steps: int = 500) -> Params:
    beta = max_real_root_in(kneading_polynomial(omega, nu), 1, 2)
    alpha = alpha_from_pair(beta, nu)
    params = Params(beta, alpha, validate=False)
    params.check()
    if verify:
        try:
            back = kneading_invariants(params, max_steps)
        except NoPeriodWithinBudget as exc:
            raise RoundtripMismatch(f"recovered system has no periodic kneading data: {exc}")
        if back.lower != omega or back.upper != nu:
            raise RoundtripMismatch(f"recovered pair {back} differs from ({omega}, {nu})")
    return params


def beta_from_kneading_pair(omega: EPWord, nu: EPWord):
    """Only the Parry root of the pair (no alpha, no round trip)."""
    return max_real_root_in(kneading_polynomial(omega, nu), 1, 2)


# ------------------------------------------------------------ alpha search

def _prefix_of(beta, alpha, side, n):
    params = Params(beta, alpha, validate=False)
    word = expansion(params, params.p, side, n)
    return word.prefix(n) if isinstance(word, EPWord) else word.letters[:n]


def search_alpha(beta, target: EPWord, side: Variant = UPPER, tol=Fraction(1, 10 ** 9)):
    """Bisection in alpha for the kneading word ``target`` (one side)."""
    tol = Fraction(tol)
    base = Params(beta, 0)
    b = base.beta
    k_symbolic = math.ceil(1 - math.log2(tol))
    n = k_symbolic + math.ceil(math.log(1 / float(tol)) / math.log(float(b))) + 8
    want = target.prefix(n)
    lo, hi = Fraction(0), 2 - b

    def word(alpha):
        return _prefix_of(b, alpha, side, n)

    at_lo, at_hi = word(lo), word(hi)
    if compare_prefixes(want, at_lo) == Order.LT or compare_prefixes(want, at_hi) == Order.GT:
        raise TargetOutOfRange(f"{target} is outside the kneading range for this beta")

    if side is UPPER:
        def below(alpha):
            return compare_prefixes(word(alpha), want) == Order.LT
    else:
        def below(alpha):
            return compare_prefixes(word(alpha), want) != Order.GT

    if side is UPPER and not below(lo):
        return lo
    if side is LOWER and below(hi):
        return hi
    while float(hi - lo) > tol:
        mid = (lo + hi) / 2
        if below(mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
