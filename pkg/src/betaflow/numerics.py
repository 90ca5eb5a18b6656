"""Exact real algebraic numbers, arithmetic in Q(theta), and an error-bounded
float backend.

Three scalar kinds flow through the library:

* ``Fraction`` (and ``int``) for rationals,
* ``FieldElement``: a polynomial in one ``AlgebraicReal`` generator with
  rational coefficients, reduced modulo the generator's minimal polynomial,
* ``Approx``: a multiprecision float carrying a rigorous error bound.

``sign_of`` decides signs exactly for the first two and refuses to guess for
the third.
"""

from __future__ import annotations

import math
from enum import IntEnum
from fractions import Fraction
from functools import cached_property

import mpmath
from sympy import Poly, QQ, Rational, ZZ, symbols
from sympy.polys.euclidtools import dup_invert

from .errors import NoRoot, UndecidableAtPrecision

_X = symbols("x")
_EPS = 2.0 ** -52


class Sign(IntEnum):
    NEG = -1
    ZERO = 0
    POS = 1


# ---------------------------------------------------------------- polynomials
# Integer polynomials are tuples of ints, constant term first.

def _to_sympy(coeffs) -> Poly:
    return Poly(list(reversed([int(c) for c in coeffs])), _X, domain=ZZ)


def _from_sympy(poly: Poly) -> tuple:
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    return tuple(coeffs)


def _primitive(coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial")
    g = 0
    for c in coeffs:
        g = math.gcd(g, c)
    sgn = 1 if coeffs[-1] > 0 else -1
    return tuple(sgn * c // g for c in coeffs)


def squarefree_part(coeffs) -> tuple:
    return _primitive(_from_sympy(_to_sympy(_primitive(coeffs)).sqf_part()))


def poly_eval(coeffs, x):
    """Horner evaluation; works for any ring element ``x``."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def _rat(x):
    x = Fraction(x)
    return Rational(x.numerator, x.denominator)


def _frac(r) -> Fraction:
    r = Rational(r)
    return Fraction(int(r.p), int(r.q))


def count_roots(coeffs, lo=None, hi=None) -> int:
    """Number of distinct real roots in the closed interval [lo, hi] (Sturm)."""
    return _to_sympy(coeffs).count_roots(None if lo is None else _rat(lo),
                                         None if hi is None else _rat(hi))


def poly_from_string(text: str) -> tuple:
    return tuple(int(c) for c in text.replace(" ", "").split(",") if c)


def format_poly(coeffs, var="x") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            power = var if k == 1 else f"{var}^{k}"
            body = power if mag == 1 else f"{mag}*{power}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text


# ------------------------------------------------------------- AlgebraicReal

class AlgebraicReal:
    """A real root of a squarefree integer polynomial, pinned by a rational
    isolating interval ``(lo, hi)``.

    Either ``lo == hi`` (a rational root) or the polynomial changes sign
    strictly across the interval and has no other root inside it.
    """

    __slots__ = ("poly", "lo", "hi", "__dict__")

    def __init__(self, poly, lo, hi):
        self.poly = tuple(poly)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        if self.lo > self.hi:
            raise ValueError("empty isolating interval")
        if self.lo == self.hi:
            if poly_eval(self.poly, self.lo) != 0:
                raise ValueError("degenerate interval is not a root")
        elif _sgn(poly_eval(self.poly, self.lo)) * _sgn(poly_eval(self.poly, self.hi)) >= 0:
            raise ValueError("interval does not witness a sign change")

    def __repr__(self):
        return f"AlgebraicReal({format_poly(self.minpoly)}, ~{float(self):.15g})"

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi or len(self.minpoly) == 2

    def as_fraction(self) -> Fraction:
        mp = self.minpoly
        if len(mp) != 2:
            raise ValueError("not a rational number")
        return Fraction(-mp[0], mp[1])

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def _bisect_once(self):
        lo, hi = self.lo, self.hi
        mid = (lo + hi) / 2
        s_mid = _sgn(poly_eval(self.poly, mid))
        if s_mid == 0:
            return mid, mid
        if s_mid == _sgn(poly_eval(self.poly, lo)):
            return mid, hi
        return lo, mid

    def refine(self, width) -> "AlgebraicReal":
        """Same root, isolating interval no wider than ``width``."""
        width = Fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        out = AlgebraicReal.__new__(AlgebraicReal)
        out.poly, out.lo, out.hi = self.poly, self.lo, self.hi
        while out.hi - out.lo > width:
            out.lo, out.hi = out._bisect_once()
        if "minpoly" in self.__dict__:
            out.__dict__["minpoly"] = self.__dict__["minpoly"]
        return out

    def _tighten(self, width) -> None:
        # private cache refinement; the represented number never changes
        width = Fraction(width)
        while self.hi - self.lo > width:
            self.lo, self.hi = self._bisect_once()
        self.__dict__.pop("approx", None)

    @cached_property
    def minpoly(self) -> tuple:
        """The irreducible primitive factor of ``poly`` vanishing at the root."""
        if self.lo == self.hi:
            r = self.lo
            return _primitive((-r.numerator, r.denominator))
        _, factors = _to_sympy(self.poly).factor_list()
        for factor, _mult in factors:
            f = _primitive(_from_sympy(factor))
            if len(f) < 2:
                continue
            if _sgn(poly_eval(f, self.lo)) * _sgn(poly_eval(f, self.hi)) < 0:
                return f
        raise AssertionError("no factor changes sign on the isolating interval")

    @cached_property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @cached_property
    def root_index(self) -> int:
        """How many real roots of the minimal polynomial lie below this one."""
        mp = self.minpoly
        if len(mp) == 2:
            return 0
        return count_roots(mp, None, self.lo)

    @cached_property
    def key(self) -> tuple:
        return (self.minpoly, self.root_index)

    def __eq__(self, other):
        if isinstance(other, AlgebraicReal):
            return self.key == other.key
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.as_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.key)

    @cached_property
    def approx(self) -> float:
        self._tighten(Fraction(1, 2 ** 62))
        return float((self.lo + self.hi) / 2)

    def __float__(self):
        return self.approx

    def to_mpf(self, prec: int):
        """Interval-certified mpmath value with at least ``prec`` bits."""
        self._tighten(Fraction(1, 2 ** (prec + 8)))
        ctx = _context(prec)
        mid = (self.lo + self.hi) / 2
        width = self.hi - self.lo
        return ctx.mpf(mid.numerator) / mid.denominator, ctx.mpf(width.numerator) / width.denominator


def max_real_root_in(coeffs, lo, hi) -> AlgebraicReal:
    """Largest real root of ``coeffs`` in the open interval (lo, hi)."""
    lo, hi = Fraction(lo), Fraction(hi)
    sqf = squarefree_part(coeffs)
    if len(sqf) < 2:
        raise NoRoot("constant polynomial has no roots", lo=lo, hi=hi)
    poly = _to_sympy(sqf)
    # split off rational roots so that isolating intervals of the rest never
    # have a root of the polynomial at an endpoint
    rational = []
    for (a, b), _mult in poly.intervals():
        if a == b:
            r = _frac(a)
            rational.append(r)
            poly = poly.quo(_to_sympy((-r.numerator, r.denominator)))
    best_rational = max((r for r in rational if lo < r < hi), default=None)
    best = None
    if poly.degree() > 0:
        for (a, b), _mult in poly.intervals(inf=_rat(lo), sup=_rat(hi)):
            a, b = _frac(a), _frac(b)
            if a < b and (best is None or a >= best[1]):
                best = (a, b)
    if best is None:
        if best_rational is None:
            raise NoRoot(f"no real root of {format_poly(sqf)} in ({lo}, {hi})", lo=lo, hi=hi)
        return AlgebraicReal(sqf, best_rational, best_rational)
    deflated = _primitive(_from_sympy(poly))
    root = AlgebraicReal(deflated, *best)
    while root.lo < lo or root.hi > hi or (
            best_rational is not None and root.lo < best_rational < root.hi):
        root.lo, root.hi = root._bisect_once()
    if best_rational is not None and best_rational > root.hi:
        return AlgebraicReal(sqf, best_rational, best_rational)
    return root


def refine(x: AlgebraicReal, width) -> AlgebraicReal:
    return x.refine(width)


def from_polynomial(coeffs, lo, hi) -> AlgebraicReal:
    """Convenience: the unique root of ``coeffs`` in (lo, hi), else the largest."""
    return max_real_root_in(coeffs, lo, hi)


def golden() -> AlgebraicReal:
    return max_real_root_in((-1, -1, 1), 1, 2)


# ------------------------------------------------------------- number fields

_FIELDS: dict = {}


class NumberField:
    """Q(theta) for a real algebraic ``theta`` of degree >= 2."""

    def __init__(self, generator: AlgebraicReal):
        mp = generator.minpoly
        if len(mp) < 3:
            raise ValueError("rational generator: use Fraction arithmetic")
        self.generator = generator
        self.key = generator.key
        lead = Fraction(mp[-1])
        self.modulus = tuple(Fraction(c) / lead for c in mp)  # monic
        self.degree = len(mp) - 1
        d = self.degree
        # reduction table: theta^k for k in [d, 2d-2] as coefficient vectors
        table = []
        cur = [-c for c in self.modulus[:-1]]
        for _ in range(d - 1):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            if top:
                for i in range(d):
                    cur[i] -= top * self.modulus[i]
        table.append(tuple(cur))
        self._table = table
        self._zero = (Fraction(0),) * d

    @staticmethod
    def of(generator: AlgebraicReal) -> "NumberField":
        field = _FIELDS.get(generator.key)
        if field is None:
            field = NumberField(generator)
            _FIELDS[generator.key] = field
        return field

    def __repr__(self):
        return f"NumberField({format_poly(self.generator.minpoly)})"

    def gen(self) -> "FieldElement":
        c = [Fraction(0)] * self.degree
        c[1] = Fraction(1)
        return FieldElement(self, tuple(c))

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self and value.field.key != self.key:
                raise TypeError("element of a different number field")
            return value
        c = [Fraction(0)] * self.degree
        c[0] = Fraction(value)
        return FieldElement(self, tuple(c))

    def from_coeffs(self, coeffs) -> "FieldElement":
        coeffs = [Fraction(c) for c in coeffs]
        return FieldElement(self, self._reduce(coeffs))

    def _reduce(self, prod) -> tuple:
        d = self.degree
        out = list(prod[:d]) + [Fraction(0)] * max(0, d - len(prod))
        for k in range(d, len(prod)):
            c = prod[k]
            if c:
                row = self._table[k - d] if k - d < len(self._table) else self._power_row(k)
                for i in range(d):
                    if row[i]:
                        out[i] += c * row[i]
        return tuple(out)

    def _power_row(self, k):
        while len(self._table) <= k - self.degree:
            last = list(self._table[-1])
            top = last[-1]
            cur = [Fraction(0)] + last[:-1]
            if top:
                for i in range(self.degree):
                    cur[i] -= top * self.modulus[i]
            self._table.append(tuple(cur))
        return self._table[k - self.degree]


class FieldElement:
    __slots__ = ("field", "c", "_hash")

    def __init__(self, field: NumberField, coeffs: tuple):
        self.field = field
        self.c = coeffs
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field.key == self.field.key:
                return other.c
            raise TypeError("mixed number fields; compare with compare_mixed instead")
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),) + self.field._zero[1:]
        return None

    def __add__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.c, oc)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.c))

    def __sub__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.c, oc)))

    def __rsub__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return FieldElement(self.field, tuple(b - a for a, b in zip(self.c, oc)))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return FieldElement(self.field, self.field._zero)
            return FieldElement(self.field, tuple(a * other for a in self.c))
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        a, b = self.c, oc
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return FieldElement(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in number field")
        f = list(reversed(self.c))
        while f and f[0] == 0:
            f.pop(0)
        m = list(reversed(self.field.modulus))
        inv = dup_invert([QQ(x.numerator, x.denominator) for x in f],
                         [QQ(x.numerator, x.denominator) for x in m], QQ)
        coeffs = [Fraction(int(q.numerator), int(q.denominator)) for q in reversed(inv)]
        return self.field.from_coeffs(coeffs)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError
            return FieldElement(self.field, tuple(a / other for a in self.c))
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return self * FieldElement(self.field, oc).inverse()

    def __rtruediv__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return FieldElement(self.field, oc) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.element(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.c)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.field.key != self.field.key:
                return compare_mixed(self, other) == 0
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if not any(self.c[1:]):
                self._hash = hash(self.c[0])
            else:
                self._hash = hash((self.field.key, self.c))
        return self._hash

    def __lt__(self, other):
        return sign_of(self - other) < 0

    def __le__(self, other):
        return sign_of(self - other) <= 0

    def __gt__(self, other):
        return sign_of(self - other) > 0

    def __ge__(self, other):
        return sign_of(self - other) >= 0

    def rational_value(self):
        """The value as a Fraction when it lies in Q, else None."""
        if any(self.c[1:]):
            return None
        return self.c[0]

    def __float__(self):
        if not any(self.c):
            return 0.0
        # coefficients can be large and nearly cancel, so evaluate with
        # enough bits for a correctly rounded double
        prec = 96
        while True:
            value = Approx.of(self, prec)
            if abs(value.value) > value.err * 2 ** 54 or prec >= 8192:
                return float(value.value)
            prec *= 2

    def __repr__(self):
        return f"FieldElement({format_element(self)} ~ {float(self):.12g})"

    def sign(self) -> Sign:
        if not any(self.c):
            return Sign.ZERO
        s = self._fast_sign()
        if s is not None:
            return s
        return self._exact_sign()

    def _fast_sign(self):
        gen = self.field.generator
        theta = gen.approx
        delta = float(gen.hi - gen.lo) + abs(theta) * _EPS
        top = abs(theta) + delta
        val = 0.0
        bound = 0.0
        for i, c in enumerate(self.c):
            if c:
                fc = float(c)
                if math.isinf(fc) or fc == 0.0:
                    return None
                val += fc * theta ** i
                term = top ** i
                bound += abs(fc) * (i * top ** max(i - 1, 0) * delta + (2 * i + 4) * _EPS * term)
        if not math.isfinite(val) or not math.isfinite(bound):
            return None
        bound = 2 * bound + 1e-300
        if val > bound:
            return Sign.POS
        if val < -bound:
            return Sign.NEG
        return None

    def _exact_sign(self) -> Sign:
        gen = self.field.generator
        width = gen.hi - gen.lo
        while True:
            lo, hi = _interval_poly(self.c, gen.lo, gen.hi)
            if lo > 0:
                return Sign.POS
            if hi < 0:
                return Sign.NEG
            width /= 1024
            gen._tighten(width)


def _interval_poly(coeffs, lo, hi):
    """Enclosure of sum coeffs[i] * x^i for x in [lo, hi]."""
    acc_lo = acc_hi = Fraction(0)
    for c in reversed(coeffs):
        products = (acc_lo * lo, acc_lo * hi, acc_hi * lo, acc_hi * hi)
        acc_lo = min(products) + c
        acc_hi = max(products) + c
    return acc_lo, acc_hi


def format_element(x, var="b") -> str:
    if isinstance(x, FieldElement):
        parts = []
        for i, c in enumerate(x.c):
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if i == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")
    return str(x)


# ---------------------------------------------------------------- float mode

_CONTEXTS: dict = {}


def _context(prec: int):
    ctx = _CONTEXTS.get(prec)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.prec = prec
        _CONTEXTS[prec] = ctx
    return ctx


DEFAULT_PRECISION = 64


class Approx:
    """Multiprecision float ``value`` with |true - value| <= ``err``."""

    __slots__ = ("value", "err", "prec")

    def __init__(self, value, err=0, prec: int = DEFAULT_PRECISION):
        ctx = _context(prec)
        self.prec = prec
        if isinstance(value, Fraction):
            v = ctx.mpf(value.numerator) / value.denominator
            err = ctx.mpf(err) + abs(v) * ctx.mpf(2) ** (1 - prec)
        else:
            v = ctx.mpf(value)
        self.value = v
        self.err = ctx.mpf(err)

    @classmethod
    def of(cls, x, prec: int = DEFAULT_PRECISION) -> "Approx":
        if isinstance(x, Approx):
            return x
        if isinstance(x, AlgebraicReal):
            v, w = x.to_mpf(prec)
            return cls(v, w + abs(v) * _context(prec).mpf(2) ** (1 - prec), prec)
        if isinstance(x, FieldElement):
            gen = cls.of(x.field.generator, prec)
            acc = cls(0, 0, prec)
            for c in reversed(x.c):
                acc = acc * gen + cls(Fraction(c), 0, prec)
            return acc
        if isinstance(x, (int, Fraction)):
            return cls(Fraction(x), 0, prec)
        if isinstance(x, float):
            return cls(x, 0, prec)
        raise TypeError(f"cannot convert {type(x).__name__} to Approx")

    def _lift(self, other):
        if isinstance(other, Approx):
            return other
        return Approx.of(other, self.prec)

    def _round(self, v):
        return abs(v) * _context(self.prec).mpf(2) ** (1 - self.prec)

    def __add__(self, other):
        o = self._lift(other)
        v = self.value + o.value
        return Approx(v, self.err + o.err + self._round(v), self.prec)

    __radd__ = __add__

    def __neg__(self):
        return Approx(-self.value, self.err, self.prec)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        v = self.value * o.value
        err = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
        return Approx(v, err + self._round(v), self.prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        denom = abs(o.value) - o.err
        if denom <= 0:
            raise UndecidableAtPrecision("division by an interval containing zero")
        v = self.value / o.value
        err = (abs(self.value) * o.err / abs(o.value) + self.err) / denom
        return Approx(v, err + self._round(v), self.prec)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        result = Approx(1, 0, self.prec)
        for _ in range(abs(k)):
            result = result * self
        return result if k >= 0 else Approx(1, 0, self.prec) / result

    def sign(self) -> Sign:
        if self.value > self.err:
            return Sign.POS
        if self.value < -self.err:
            return Sign.NEG
        if self.value == 0 and self.err == 0:
            return Sign.ZERO
        raise UndecidableAtPrecision(
            f"|{mpmath.nstr(self.value, 8)}| within error bound {mpmath.nstr(self.err, 3)}")

    def __lt__(self, other):
        return sign_of(self - other) < 0

    def __le__(self, other):
        return sign_of(self - other) <= 0

    def __gt__(self, other):
        return sign_of(self - other) > 0

    def __ge__(self, other):
        return sign_of(self - other) >= 0

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return f"Approx({mpmath.nstr(self.value, 17)} ± {mpmath.nstr(self.err, 3)})"


# ---------------------------------------------------------- generic helpers

def sign_of(x) -> Sign:
    if isinstance(x, (FieldElement, Approx)):
        return x.sign()
    if isinstance(x, (int, Fraction, float)):
        return Sign(_sgn(x))
    if isinstance(x, AlgebraicReal):
        if x.lo == x.hi:
            return Sign(_sgn(x.lo))
        while x.lo < 0 < x.hi or x.lo == 0 or x.hi == 0:
            if poly_eval(x.poly, 0) == 0 and x.lo <= 0 <= x.hi:
                return Sign.ZERO
            x._tighten((x.hi - x.lo) / 2)
        return Sign.POS if x.lo > 0 else Sign.NEG
    raise TypeError(f"no sign for {type(x).__name__}")


def compare(a, b) -> int:
    """-1, 0 or 1 according to a < b, a == b, a > b."""
    if isinstance(a, FieldElement) and isinstance(b, FieldElement) and a.field.key != b.field.key:
        return compare_mixed(a, b)
    return int(sign_of(a - b))


def compare_mixed(a, b, max_bits: int = 4096) -> int:
    """Order two exact values from different fields by interval refinement."""
    prec = 64
    while prec <= max_bits:
        x, y = Approx.of(a, prec), Approx.of(b, prec)
        try:
            return int((x - y).sign())
        except UndecidableAtPrecision:
            prec *= 2
    raise UndecidableAtPrecision("values agree to the refinement limit", bits=max_bits)


def to_float(x) -> float:
    return float(x)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, FieldElement))


def exact_log(x) -> float:
    """Natural log of a positive scalar, computed in float at output time."""
    if isinstance(x, AlgebraicReal):
        v, _ = x.to_mpf(80)
        return float(mpmath.log(v))
    return math.log(float(x))
