"""Passing between an intermediate map and a greedy map with a hole at 0.

An intermediate system (beta, alpha) shares its expansion of 1 with the greedy
system of base ``beta' = greedy_base(beta, alpha)``. Pushing upper expansions
through the greedy projection sends [0, 1] onto a survivor set of the greedy
map, with hole [0, t) where t is the image of 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .automaton import interval_automaton
from .errors import BetaflowError, NoPeriodWithinBudget, SearchExhausted
from .itinerary import LOWER, UPPER, Params, Variant, WordPrefix, expansion, project_pi, project_prefix
from .kneading import (Validation, kneading_invariants, lex_compare, solve_parry_beta,
                       system_from_kneading_pair, validate_kneading_pair)
from .numerics import Approx, AlgebraicReal, compare, is_exact
from .words import EPWord, Order

ZERO = EPWord((), (0,))


def greedy_base(params: Params, max_steps: int = 500) -> AlgebraicReal:
    """The greedy base with the same lower expansion of 1."""
    word = expansion(params, 1, LOWER, max_steps, require_period=True)
    return solve_parry_beta(word)


@dataclass(frozen=True)
class GreedyHoleSystem:
    beta_prime: AlgebraicReal
    hole_t: object
    hole_word: EPWord
    source: Params

    @property
    def greedy(self) -> Params:
        return Params(self.beta_prime, 0)


def to_hole_system(params: Params, max_steps: int = 500) -> GreedyHoleSystem:
    beta_prime = greedy_base(params, max_steps)
    hole_word = expansion(params, 0, UPPER, max_steps, require_period=True)
    greedy = Params(beta_prime, 0)
    return GreedyHoleSystem(beta_prime, project_pi(greedy, hole_word), hole_word, params)


def conjugacy_image(params: Params, x, variant: Variant = UPPER, beta_prime=None,
                    letters: int = 200, max_steps: int = 500):
    """Greedy projection of the expansion of ``x``.

    Exact when the expansion is certified periodic. Otherwise the first
    ``letters`` letters are summed and an ``Approx`` carrying the tail bound is
    returned. ``beta_prime`` may be passed in to skip recomputing it, which is
    also the only option when ``params`` is in float mode.
    """
    if beta_prime is None:
        beta_prime = greedy_base(params, max_steps)
    greedy = Params(beta_prime, 0)
    word = expansion(params, x, variant, max_steps if is_exact(params.beta) else letters)
    if isinstance(word, EPWord):
        return project_pi(greedy, word)
    prec = params.beta.prec if isinstance(params.beta, Approx) else 128
    fgreedy = greedy.to_float_mode(prec)
    total, tail = project_prefix(fgreedy, word.letters[:letters])
    return Approx(total.value + tail.value / 2, total.err + tail.value / 2 + abs(tail.err), prec)


def rho_inf(beta, max_steps: int = 500):
    """Smallest projection among the shifts of the quasi-greedy expansion of 1."""
    greedy = Params(beta, 0)
    word = expansion(greedy, 1, LOWER, max_steps, require_period=True)
    values = [project_pi(greedy, s) for s in word.distinct_shifts()]
    best = values[0]
    for v in values[1:]:
        if compare(v, best) < 0:
            best = v
    return best


def _greedy_top(beta, max_steps: int = 500) -> EPWord:
    return expansion(Params(beta, 0), 1, LOWER, max_steps, require_period=True)


def in_bifurcation_word(xi: EPWord, top: EPWord) -> bool:
    """Symbolic bifurcation-set test: xi <= every shift of xi < top."""
    for s in xi.distinct_shifts():
        if lex_compare(s, xi) == Order.LT or lex_compare(s, top) != Order.LT:
            return False
    return True


def membership_B(beta, xi: EPWord, max_steps: int = 500) -> bool:
    top = _greedy_top(beta, max_steps)
    if not in_bifurcation_word(xi, top):
        return False
    greedy = Params(beta, 0)
    if compare(project_pi(greedy, xi), rho_inf(beta, max_steps)) > 0:
        return False
    return interval_automaton(xi, top).has_positive_entropy()


@dataclass(frozen=True)
class Verdict:
    yes: bool
    reason: Optional[str] = None

    def __bool__(self):
        return self.yes

    def __str__(self):
        return "YES" if self.yes else f"NO({self.reason})"


def membership_A(beta, xi: EPWord, max_steps: int = 500) -> Verdict:
    """Whether (0 top, 1 xi) is the kneading pair of some intermediate map."""
    top = _greedy_top(beta, max_steps)
    check: Validation = validate_kneading_pair(top.prepend((0,)), xi.prepend((1,)))
    return Verdict(check.valid, check.reason)


# --------------------------------------------------- finite-type approximation

@dataclass(frozen=True)
class Approximant:
    params: Params
    lower: EPWord
    upper: EPWord
    agreement: int  # letters shared with the source kneading words


def _letters(word, n: int) -> Optional[tuple]:
    if isinstance(word, EPWord):
        return word.prefix(n)
    return word.letters[:n] if len(word.letters) >= n else None


def _order_against(candidate: EPWord, source) -> Optional[Order]:
    """Order of candidate vs source; None when a finite source prefix cannot tell."""
    if isinstance(source, EPWord):
        return lex_compare(candidate, source)
    for i, y in enumerate(source.letters):
        x = candidate.letter(i)
        if x != y:
            return Order.LT if x < y else Order.GT
    return None


def _agreement(candidate: EPWord, source) -> int:
    limit = 4096 if isinstance(source, EPWord) else len(source.letters)
    for i in range(limit):
        if candidate.letter(i) != source.letter(i):
            return i
    return limit


def _source_words(params: Params, max_steps: int):
    """Kneading words of the source, each an EPWord or a long prefix."""
    out = []
    for side in (LOWER, UPPER):
        word = expansion(params, params.p, side, max_steps)
        out.append(word)
    return out


def _lower_candidates(omega, m: int):
    """Periodic words below omega sharing a long prefix with it."""
    if isinstance(omega, EPWord) and omega.is_periodic:
        yield omega
    block = _letters(omega, m)
    if block is None:
        return
    yield EPWord.periodic(block)
    if block[-1] == 1:
        yield EPWord.periodic(block[:-1] + (0,))


def _upper_candidates(nu, m: int):
    if isinstance(nu, EPWord) and nu.is_periodic:
        yield nu
    block = _letters(nu, m)
    if block is None:
        return
    yield EPWord.periodic(block)
    if block[-1] == 0:
        yield EPWord.periodic(block[:-1] + (1,))


def approximants(params: Params, n: int, start: int = 10, step: int = 5,
                 budget: int = 40, max_steps: int = 500) -> list:
    """Finite-type systems inside ``params`` whose kneading words agree with
    the source on at least start, start+step, ... letters.

    Candidates are periodic words below the lower kneading word and above the
    upper one. These two inequalities imply that the candidate shift is a
    subshift of the source. Each accepted candidate must be a valid kneading
    pair whose recovered parameters reproduce it exactly. Successive upper
    words strictly decrease, so the sequence moves monotonically towards the
    source.
    """
    if not params.exact:
        raise SearchExhausted("approximation needs exact parameters")
    omega, nu = _source_words(params, max_steps)
    if isinstance(omega, EPWord) and isinstance(nu, EPWord) and omega.is_periodic and nu.is_periodic:
        return [Approximant(params, omega, nu, 4096)] * n
    out = []
    previous_upper = None
    for k in range(n):
        need = start + step * k
        found = None
        for m in range(need, need + budget):
            for low in _lower_candidates(omega, m):
                if _order_against(low, omega) not in (Order.LT, Order.EQ):
                    continue
                if _agreement(low, omega) < need:
                    continue
                for up in _upper_candidates(nu, m):
                    if _order_against(up, nu) not in (Order.GT, Order.EQ):
                        continue
                    if _agreement(up, nu) < need:
                        continue
                    if previous_upper is not None and lex_compare(up, previous_upper) != Order.LT:
                        continue
                    found = _try_pair(low, up, omega, nu, max_steps)
                    if found is not None:
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            raise SearchExhausted(f"no finite-type approximant agreeing on {need} letters "
                                  f"within {budget} extra letters")
        out.append(found)
        previous_upper = found.upper
    return out


def _try_pair(low: EPWord, up: EPWord, omega, nu, max_steps: int) -> Optional[Approximant]:
    if not validate_kneading_pair(low, up):
        return None
    try:
        found = system_from_kneading_pair(low, up, verify=True, max_steps=max_steps)
    except (BetaflowError, NoPeriodWithinBudget):
        return None
    agree = min(_agreement(low, omega), _agreement(up, nu))
    return Approximant(found, low, up, agree)


def sft_approx_sequence(params: Params, n: int, **options) -> list:
    """Parameters of finite-type subsystems converging to ``params``."""
    return [a.params for a in approximants(params, n, **options)]


def kneading_contained(inner, outer) -> bool:
    """Symbolic containment test of two kneading pairs (lower, upper): the
    inner shift lies inside the outer one when its lower word is not above
    the outer lower word and its upper word is not below the outer upper."""
    (lo_in, up_in), (lo_out, up_out) = inner, outer
    a = _order_against(lo_in, lo_out)
    b = _order_against(up_in, up_out)
    return a in (Order.LT, Order.EQ) and b in (Order.GT, Order.EQ)


__all__ = [
    "GreedyHoleSystem", "Approximant", "Verdict", "greedy_base", "to_hole_system",
    "conjugacy_image", "rho_inf", "membership_A", "membership_B", "in_bifurcation_word",
    "approximants", "sft_approx_sequence", "kneading_contained", "kneading_invariants",
    "WordPrefix",
]
