"""Holes [0, t), their survivor sets and the dimension function t -> dim K(t).

Symbolically the survivor set of the hole [0, t) is the set of words all of
whose shifts lie in [tau+(t), tau-(1)). Its dimension is its entropy divided
by log(beta). Two estimates are provided: the kneading estimate rebuilds the
survivor set as the full shift of another intermediate map and reads off its
slope; the counting estimate counts prefixes with a constraint automaton.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .automaton import interval_automaton
from .errors import BetaflowError, EPlusSearchExhausted, InvalidParams, NoPeriodWithinBudget
from .itinerary import LOWER, UPPER, Params, Variant, apply_map, expansion, project_pi
from .kneading import system_from_kneading_pair, validate_kneading_pair
from .numerics import AlgebraicReal, exact_log, format_element, format_poly, is_exact, sign_of
from .words import EPWord, Order, is_lyndon, lex_compare

GOLDEN_TOP = EPWord((), (1, 0))


# ------------------------------------------------------------ bifurcation set

@dataclass(frozen=True)
class EPlusStatus:
    state: str  # "YES", "NO" or "UNKNOWN"
    step: Optional[int] = None  # first escape step for NO, depth for UNKNOWN

    def __bool__(self):
        return self.state == "YES"

    def __str__(self):
        return self.state if self.step is None else f"{self.state}({self.step})"


@dataclass(frozen=True)
class HoleSpec:
    params: Params
    t: object
    t_word: object  # EPWord or WordPrefix
    in_E_plus: EPlusStatus


def in_bifurcation_set(params: Params, t, depth: int = 500, variant: Variant = UPPER) -> EPlusStatus:
    """Whether the orbit of t never falls into [0, t).

    ``variant`` picks the branch convention at the critical point. The upper
    map is the one defining the hole system; the lower map reproduces the
    lower expansion convention (needed, for instance, for t = 1/G^2 in the
    golden greedy system, where the upper orbit hits 0 at the second step).
    """
    t = params.scalar(t)
    if sign_of(t) == 0:
        return EPlusStatus("YES")
    exact = params.exact and is_exact(t)
    seen = {t} if exact else None
    x = t
    for k in range(1, depth + 1):
        x = apply_map(params, x, variant)
        if sign_of(x - t) < 0:
            return EPlusStatus("NO", k)
        if exact:
            if x in seen:
                return EPlusStatus("YES")
            seen.add(x)
    return EPlusStatus("UNKNOWN", depth)


def make_hole(params: Params, t, depth: int = 500, variant: Variant = UPPER) -> HoleSpec:
    t = params.scalar(t)
    if sign_of(t) < 0 or sign_of(t - 1) > 0:
        raise InvalidParams(f"hole size must lie in [0, 1], got {float(t):.6g}")
    word = expansion(params, t, UPPER, depth)
    return HoleSpec(params, t, word, in_bifurcation_set(params, t, depth, variant))


def upper_limit_word(params: Params, max_steps: int = 500) -> EPWord:
    """tau-(1), the supremum of all survivor words."""
    return expansion(params, 1, LOWER, max_steps, require_period=True)


def _lower_bound(word, length: int) -> EPWord:
    """An EPWord standing in for the lower bound: exact, or a long prefix
    followed by zeros (which can only enlarge the survivor set)."""
    if isinstance(word, EPWord):
        return word
    return EPWord(word.letters[:length], (0,))


def survivor_member(params: Params, hole: HoleSpec, w: EPWord) -> bool:
    if not isinstance(hole.t_word, EPWord):
        raise NoPeriodWithinBudget("survivor membership needs a certified hole word")
    top = upper_limit_word(params)
    for s in w.distinct_shifts():
        if lex_compare(s, hole.t_word) == Order.LT or lex_compare(s, top) != Order.LT:
            return False
    return True


def survivor_automaton(params: Params, hole: HoleSpec, length: int = 64):
    return interval_automaton(_lower_bound(hole.t_word, length), upper_limit_word(params))


def count_survivor_words(params: Params, hole: HoleSpec, n: int) -> int:
    return survivor_automaton(params, hole, 2 * n + 8).count_words(n)


# ------------------------------------------- words that eventually hit 0

def count_k0_words(params: Params, hole: HoleSpec, k: int, extra: int = 12) -> int:
    """Length-k prefixes of words u.tau+(0) whose shifts before the landing
    time lie strictly between tau+(t) and tau-(1). Landing times up to
    k + extra are explored."""
    return k0_word_counts(params, hole, k, extra)[-1]


def k0_word_counts(params: Params, hole: HoleSpec, k_max: int, extra: int = 12) -> list:
    """``count_k0_words`` for k = 1..k_max from a single search."""
    if not isinstance(hole.t_word, EPWord):
        raise NoPeriodWithinBudget("needs a certified hole word")
    zero_word = expansion(params, 0, UPPER, 500, require_period=True)
    auto = interval_automaton(hole.t_word, upper_limit_word(params))
    tail = zero_word.prefix(k_max)
    # ties still pending are settled by the tail; earlier ones were settled
    # strictly inside u, otherwise the run would have died
    accepts = [auto.tail_acceptable(q, zero_word, strict_lower=True, strict_upper=True)
               for q in range(len(auto.delta))]
    found = [set() for _ in range(k_max + 1)]
    stack = [(0, ())]
    while stack:
        state, u = stack.pop()
        if accepts[state]:
            word = (u + tail)[:k_max]
            for k in range(max(1, len(u) - extra), k_max + 1):
                found[k].add(word[:k])
        if len(u) >= k_max + extra:
            continue
        for x in (0, 1):
            nxt = auto.delta[state][x]
            if nxt >= 0:
                stack.append((nxt, u + (x,)))
    return [len(found[k]) for k in range(1, k_max + 1)]


# ----------------------------------------------------------- dimension, A

@dataclass(frozen=True)
class EtaResult:
    eta: Optional[float]
    beta2: Optional[AlgebraicReal] = None
    alpha2: object = None
    plateau: Optional[EPWord] = None
    route: str = "kneading"
    note: str = ""


_PLATEAU_CACHE: dict = {}


def _first_descent(word, limit: int) -> Optional[int]:
    """Least n <= limit with shift^n(word) < word, 0 when none exists (exact
    words only), None when a finite prefix cannot decide."""
    if isinstance(word, EPWord):
        for n in range(1, limit + 1):
            if lex_compare(word.shift(n), word) == Order.LT:
                return n
        if all(lex_compare(s, word) != Order.LT for s in word.distinct_shifts()):
            return 0
        return None
    letters = word.letters
    for n in range(1, limit + 1):
        for i in range(len(letters) - n):
            a, b = letters[n + i], letters[i]
            if a != b:
                if a < b:
                    return n
                break
        else:
            return None
    return None


def plateau_word(params: Params, t, max_lyndon: int = 24, letters: int = 160):
    """The word tau+(t*) of the least point t* >= t of the bifurcation set,
    together with a flag telling whether it is a periodic Lyndon block."""
    word = expansion(params, t, UPPER, letters)
    n = _first_descent(word, max_lyndon)
    if n is None:
        raise EPlusSearchExhausted(f"no descent within {max_lyndon} letters and hole word is not periodic")
    if n == 0:
        return word
    block = word.prefix(n) if isinstance(word, EPWord) else word.letters[:n]
    if not is_lyndon(block):
        raise EPlusSearchExhausted(f"prefix {''.join(map(str, block))} is not a Lyndon word")
    return EPWord.periodic(block)


def eta_kneading(params: Params, t, max_lyndon: int = 24) -> EtaResult:
    """Dimension of the survivor set via the kneading pair of the plateau."""
    t = params.scalar(t)
    log_beta = exact_log(params.beta)
    if sign_of(t) <= 0:
        return EtaResult(1.0, None, params.alpha, None, "endpoint")
    if sign_of(t - params.p) >= 0:
        return EtaResult(0.0, None, None, None, "endpoint")
    top = upper_limit_word(params)
    star = plateau_word(params, t, max_lyndon)
    key = (params, top, star)
    hit = _PLATEAU_CACHE.get(key)
    if hit is not None:
        return hit
    if any(lex_compare(s, top) != Order.LT for s in star.distinct_shifts()):
        auto = interval_automaton(EPWord(star.per, (0,)), top)
        if not auto.has_positive_entropy():
            result = EtaResult(0.0, None, None, star, "automaton", "inadmissible block, zero entropy")
        else:
            raise EPlusSearchExhausted(f"block {star} is not admissible below {top}")
    else:
        result = _solve_plateau(params, top, star, log_beta)
    _PLATEAU_CACHE[key] = result
    return result


def _solve_plateau(params, top, star, log_beta) -> EtaResult:
    lower, upper = top.prepend((0,)), star.prepend((1,))
    check = validate_kneading_pair(lower, upper)
    if check.valid:
        try:
            found = system_from_kneading_pair(lower, upper)
        except BetaflowError as exc:
            check_note = f"round trip failed: {exc}"
        else:
            beta2 = found.beta_real or AlgebraicReal((-found.beta.numerator, found.beta.denominator),
                                                     found.beta, found.beta)
            return EtaResult(exact_log(beta2) / log_beta, beta2, found.alpha, star, "kneading")
    else:
        check_note = str(check)
    if check.reason == "COND3":
        return EtaResult(0.0, None, None, star, "kneading", "zero entropy")
    lam = interval_automaton(star, top).perron_root()
    return EtaResult(math.log(lam) / log_beta if lam > 0 else 0.0, None, None, star,
                     "automaton", check_note)


# ----------------------------------------------------------- dimension, B

def eta_counting(params: Params, t, depth: int = 30, estimator: str = "ratio") -> float:
    """Growth rate of survivor prefixes at ``depth``, normalised by log beta.

    ``estimator="average"`` is log(c_n)/n. The default ``"ratio"`` uses
    log(c_n / c_{n/2}) / (n/2), which cancels the constant prefactor of the
    counts and is far more accurate at moderate depth.
    """
    t = params.scalar(t)
    hole = HoleSpec(params, t, expansion(params, t, UPPER, 2 * depth + 8), EPlusStatus("UNKNOWN"))
    auto = survivor_automaton(params, hole, 2 * depth + 8)
    log_beta = exact_log(params.beta)
    if not auto.has_positive_entropy():
        return 0.0
    counts = auto.count_sequence(depth)
    if estimator == "average":
        return math.log(counts[depth]) / depth / log_beta
    half = depth // 2
    return math.log(counts[depth] / counts[half]) / (depth - half) / log_beta


def eta(params: Params, t, method: str = "kneading", **options) -> float:
    if method == "kneading":
        return eta_kneading(params, t, **options).eta
    if method == "counting":
        return eta_counting(params, t, **options)
    raise ValueError(f"unknown method {method!r}")


# ------------------------------------------------------------ critical hole

def critical_hole(params: Params, tol=Fraction(1, 10 ** 12)):
    """Largest hole with positive-dimensional survivor set.

    When tau-(1) = (10)^inf the value is the projection of 00(10)^inf, equal
    to (1 - alpha - beta*alpha)/beta^2. Otherwise a bisection on the
    dimension function is used.
    """
    top = upper_limit_word(params)
    if top == GOLDEN_TOP:
        return project_pi(params, EPWord((0, 0), (1, 0)))
    lo, hi = Fraction(0), None
    hi = params.p
    while float(hi - lo) > float(tol):
        mid = lo + (hi - lo) / 2
        if _positive(params, mid):
            lo = mid
        else:
            hi = mid
    return hi


def _positive(params, t) -> bool:
    try:
        return eta_kneading(params, t).eta > 0
    except EPlusSearchExhausted:
        return eta_counting(params, t) > 0


# ------------------------------------------------------------------- sweep

SWEEP_HEADER = ("t", "eta_kneading", "eta_counting", "beta2_minpoly", "alpha2", "plateau")


@dataclass
class SweepRow:
    t: Fraction
    eta_kneading: Optional[float]
    eta_counting: Optional[float]
    beta2_minpoly: str = ""
    alpha2: str = ""
    plateau: str = ""
    errors: list = field(default_factory=list)


def dimension_sweep(params: Params, samples: int, depth: int = 30, max_lyndon: int = 24) -> list:
    if samples < 2:
        raise ValueError("a sweep needs at least two samples")
    rows = []
    for i in range(samples):
        t = Fraction(i, samples - 1)
        row = SweepRow(t, None, None)
        try:
            res = eta_kneading(params, t, max_lyndon)
            row.eta_kneading = res.eta
            if res.beta2 is not None:
                row.beta2_minpoly = format_poly(res.beta2.minpoly)
                row.alpha2 = f"{float(res.alpha2):.12f}"
            if res.plateau is not None:
                row.plateau = str(res.plateau)
        except BetaflowError as exc:
            row.errors.append(exc.code)
        try:
            row.eta_counting = eta_counting(params, t, depth)
        except BetaflowError as exc:
            row.errors.append(exc.code)
        rows.append(row)
    return rows


def sweep_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for r in rows:
        writer.writerow([
            f"{float(r.t):.12f}",
            "" if r.eta_kneading is None else f"{r.eta_kneading:.12f}",
            "" if r.eta_counting is None else f"{r.eta_counting:.12f}",
            r.beta2_minpoly,
            r.alpha2,
            r.plateau or "".join(f"error:{e}" for e in r.errors[:1]),
        ])
    return out.getvalue()


def balanced_flag(params: Params) -> bool:
    """Whether tau-(1) is balanced (the case without isolated points)."""
    from .words import is_balanced
    return is_balanced(upper_limit_word(params))


def describe_hole(hole: HoleSpec) -> dict:
    return {"t": format_element(hole.t), "t_decimal": float(hole.t), "t_word": str(hole.t_word),
            "in_E_plus": str(hole.in_E_plus)}
