"""The maps x -> beta*x + alpha mod 1, their orbits and symbolic expansions."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .errors import InvalidParams, NoPeriodWithinBudget, UndecidableAtPrecision
from .numerics import (Approx, AlgebraicReal, FieldElement, NumberField, format_element,
                       format_poly, is_exact, sign_of)
from .words import EPWord


class Variant(Enum):
    UPPER = "upper"
    LOWER = "lower"


UPPER, LOWER = Variant.UPPER, Variant.LOWER


def _normalise_beta(beta):
    if isinstance(beta, AlgebraicReal):
        if beta.is_rational:
            return beta.as_fraction()
        return NumberField.of(beta).gen()
    if isinstance(beta, int):
        return Fraction(beta)
    if isinstance(beta, float):
        return Approx.of(beta)
    return beta


def _normalise_alpha(alpha, beta):
    if isinstance(alpha, int):
        alpha = Fraction(alpha)
    if isinstance(alpha, float):
        alpha = Approx.of(alpha, beta.prec if isinstance(beta, Approx) else 64)
    if isinstance(beta, Approx) and not isinstance(alpha, Approx):
        alpha = Approx.of(alpha, beta.prec)
    if isinstance(alpha, FieldElement):
        rational = alpha.rational_value()
        if rational is not None and not isinstance(beta, FieldElement):
            alpha = rational
    return alpha


class Params:
    """A point (beta, alpha) of the admissible parameter region.

    ``beta`` is stored as a scalar: a ``FieldElement`` equal to the generator
    for irrational algebraic beta, a ``Fraction`` for rational beta, or an
    ``Approx`` in float mode.
    """

    __slots__ = ("beta", "alpha", "__dict__")

    def __init__(self, beta, alpha=0, validate: bool = True):
        self.beta = _normalise_beta(beta)
        self.alpha = _normalise_alpha(alpha, self.beta)
        if validate:
            self.check()

    def check(self):
        b, a = self.beta, self.alpha
        if not (sign_of(b - 1) > 0 and sign_of(b - 2) < 0):
            raise InvalidParams(f"beta must lie in (1, 2), got {float(b):.6g}")
        if sign_of(a) < 0 or sign_of(2 - b - a) < 0:
            raise InvalidParams(f"alpha must lie in [0, 2 - beta], got {float(a):.6g}")

    @cached_property
    def p(self):
        return (1 - self.alpha) / self.beta

    @property
    def exact(self) -> bool:
        return is_exact(self.beta) and is_exact(self.alpha)

    @property
    def beta_real(self) -> Optional[AlgebraicReal]:
        if isinstance(self.beta, FieldElement):
            return self.beta.field.generator
        return None

    def to_float_mode(self, prec: int = 64) -> "Params":
        return Params(Approx.of(self.beta, prec), Approx.of(self.alpha, prec), validate=False)

    def reflected(self) -> "Params":
        """The parameters (beta, 2 - beta - alpha) of the reflected map."""
        return Params(self.beta, 2 - self.beta - self.alpha)

    def scalar(self, value):
        """Bring a rational into the arithmetic of these parameters."""
        if isinstance(self.beta, Approx):
            return Approx.of(value, self.beta.prec)
        if isinstance(value, (int, float)):
            # a float is taken at its exact binary value
            return Fraction(value)
        return value

    def __eq__(self, other):
        if not isinstance(other, Params):
            return NotImplemented
        if self.exact != other.exact:
            return False
        if isinstance(self.beta, FieldElement) != isinstance(other.beta, FieldElement):
            return False
        if isinstance(self.beta, FieldElement):
            if self.beta.field.key != other.beta.field.key:
                return False
        return self.beta == other.beta and self.alpha == other.alpha

    def __hash__(self):
        return hash((self.beta, self.alpha))

    def describe(self) -> dict:
        out = {"beta": float(self.beta), "alpha": float(self.alpha)}
        if isinstance(self.beta, FieldElement):
            out["beta_minpoly"] = format_poly(self.beta.field.generator.minpoly)
            out["alpha_exact"] = format_element(self.alpha)
        return out

    def __repr__(self):
        return f"Params(beta~{float(self.beta):.10g}, alpha~{float(self.alpha):.10g})"


@dataclass(frozen=True)
class WordPrefix:
    """A finite prefix of an expansion whose period was not certified."""

    letters: tuple
    probable_period: Optional[tuple] = None  # (entry index, cycle length)
    exact: bool = True

    def letter(self, i: int) -> int:
        return self.letters[i]

    def prefix(self, n: int) -> tuple:
        if n > len(self.letters):
            raise IndexError("prefix longer than the computed expansion")
        return self.letters[:n]

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        flag = "" if self.probable_period is None else f" [probable period {self.probable_period[1]}]"
        return "".join(map(str, self.letters)) + "..." + flag


@dataclass(frozen=True)
class Orbit:
    params: Params
    start: object
    variant: Variant
    points: tuple
    letters: tuple
    cycle: Optional[tuple] = None  # (entry index, cycle length)
    cycle_certified: bool = False


def critical_point(params: Params):
    return params.p


def branch_letter(params: Params, x, variant: Variant = UPPER) -> int:
    s = sign_of(x - params.p)
    if variant is Variant.UPPER:
        return 0 if s < 0 else 1
    return 0 if s <= 0 else 1


def apply_map(params: Params, x, variant: Variant = UPPER):
    y = params.beta * x + params.alpha
    return y if branch_letter(params, x, variant) == 0 else y - 1


def _step(params, x, variant):
    letter = branch_letter(params, x, variant)
    y = params.beta * x + params.alpha
    return letter, (y if letter == 0 else y - 1)


def _probable_period(letters, min_repeats: int = 4):
    n = len(letters)
    for per in range(1, n // min_repeats + 1):
        tail = letters[n - per * min_repeats:]
        if all(tail[i] == tail[i % per] for i in range(len(tail))):
            entry = n - per * min_repeats
            while entry > 0 and letters[entry - 1] == letters[entry - 1 + per]:
                entry -= 1
            return (entry, per)
    return None


def orbit(params: Params, x, variant: Variant = UPPER, steps: int = 200) -> Orbit:
    x = params.scalar(x)
    points = [x]
    letters = []
    exact = params.exact and is_exact(x)
    seen = {x: 0} if exact else None
    cycle = None
    for k in range(steps):
        if exact:
            letter, x = _step(params, x, variant)
        else:
            try:
                letter, x = _step(params, x, variant)
            except UndecidableAtPrecision:
                # the error has swallowed the value; keep the decided prefix
                break
        letters.append(letter)
        if exact:
            if x in seen:
                cycle = (seen[x], k + 1 - seen[x])
                points.append(x)
                break
            seen[x] = k + 1
        points.append(x)
    certified = cycle is not None
    if cycle is None and not exact:
        cycle = _probable_period(letters)
    return Orbit(params, points[0], variant, tuple(points), tuple(letters), cycle, certified)


def expansion(params: Params, x, variant: Variant = UPPER, max_steps: int = 500,
              require_period: bool = False):
    """Symbolic expansion of ``x``: an ``EPWord`` when an exact orbit revisit
    is found, otherwise a ``WordPrefix`` of ``max_steps`` letters (fewer in
    float mode once the branch can no longer be decided)."""
    orb = orbit(params, x, variant, max_steps)
    if orb.cycle_certified:
        entry, length = orb.cycle
        return EPWord(orb.letters[:entry], orb.letters[entry:entry + length])
    prefix = WordPrefix(orb.letters, orb.cycle, exact=params.exact and is_exact(params.scalar(x)))
    if require_period:
        raise NoPeriodWithinBudget(f"no certified period within {max_steps} steps", prefix=prefix)
    return prefix


def tau_plus(params: Params, x, max_steps: int = 500):
    return expansion(params, x, UPPER, max_steps)


def tau_minus(params: Params, x, max_steps: int = 500):
    return expansion(params, x, LOWER, max_steps)


def project_pi(params: Params, w: EPWord):
    """alpha/(1 - beta) + sum_k w_k beta^-k, summed in closed form."""
    beta = params.beta
    r = 1 / beta
    total = params.alpha / (1 - beta)
    power = params.scalar(1)
    for letter in w.pre:
        power = power * r
        if letter:
            total = total + power
    block = params.scalar(0)
    inner = params.scalar(1)
    for letter in w.per:
        inner = inner * r
        if letter:
            block = block + inner
    return total + power * block / (1 - inner)


def project_prefix(params: Params, letters):
    """Partial sum of the projection over a finite prefix, and the tail bound
    beta^-n / (beta - 1) covering any continuation."""
    beta = params.beta
    r = 1 / beta
    total = params.alpha / (1 - beta)
    power = params.scalar(1)
    for letter in letters:
        power = power * r
        if letter:
            total = total + power
    return total, power / (beta - 1)
