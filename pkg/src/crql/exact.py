"""Exact scalars in Q(i)[sqrt2] and the ordered-index sign calculus.

Every coefficient appearing in the frame formulas (powers of i, +-1, 1/sqrt2)
lives in the ring Q(i)[sqrt2], so all operator identities downstream are
decided by exact equality, never by floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_SQRT2 = math.sqrt(2.0)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


@dataclass(frozen=True)
class ExactScalar:
    """(re_rat + re_rad*sqrt2) + i*(im_rat + im_rad*sqrt2) with Fraction parts."""

    re_rat: Fraction = Fraction(0)
    re_rad: Fraction = Fraction(0)
    im_rat: Fraction = Fraction(0)
    im_rad: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re_rat", _frac(self.re_rat))
        object.__setattr__(self, "re_rad", _frac(self.re_rad))
        object.__setattr__(self, "im_rat", _frac(self.im_rat))
        object.__setattr__(self, "im_rad", _frac(self.im_rad))

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, x) -> ExactScalar:
        return cls(_frac(x))

    @classmethod
    def i_power(cls, k: int) -> ExactScalar:
        return (ONE, I, MINUS_ONE, MINUS_I)[k % 4]

    @classmethod
    def sign(cls, s: int) -> ExactScalar:
        if s == 1:
            return ONE
        if s == -1:
            return MINUS_ONE
        raise ValueError(f"sign must be +-1, got {s}")

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not (self.re_rat or self.re_rad or self.im_rat or self.im_rad)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_real(self) -> bool:
        return not (self.im_rat or self.im_rad)

    def is_rational(self) -> bool:
        return not (self.re_rad or self.im_rat or self.im_rad)

    def is_unit_modulus(self) -> bool:
        return (self * self.conj()) == ONE

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactScalar(_frac(other))
        return None

    def __add__(self, other) -> ExactScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactScalar(
            self.re_rat + o.re_rat,
            self.re_rad + o.re_rad,
            self.im_rat + o.im_rat,
            self.im_rad + o.im_rad,
        )

    __radd__ = __add__

    def __neg__(self) -> ExactScalar:
        return ExactScalar(-self.re_rat, -self.re_rad, -self.im_rat, -self.im_rad)

    def __sub__(self, other) -> ExactScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> ExactScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other) -> ExactScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ar, as_, at, au = self.re_rat, self.re_rad, self.im_rat, self.im_rad
        br, bs, bt, bu = o.re_rat, o.re_rad, o.im_rat, o.im_rad
        return ExactScalar(
            ar * br + 2 * as_ * bs - at * bt - 2 * au * bu,
            ar * bs + as_ * br - at * bu - au * bt,
            ar * bt + at * br + 2 * (as_ * bu + au * bs),
            ar * bu + au * br + as_ * bt + at * bs,
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> ExactScalar:
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_rational(self, f: Fraction) -> ExactScalar:
        """Fast scaling by a plain rational (hot path in matrix assembly)."""
        return ExactScalar(
            self.re_rat * f, self.re_rad * f, self.im_rat * f, self.im_rad * f
        )

    def conj(self) -> ExactScalar:
        return ExactScalar(self.re_rat, self.re_rad, -self.im_rat, -self.im_rad)

    def inverse(self) -> ExactScalar:
        if self.is_zero():
            raise ZeroDivisionError("ExactScalar inverse of zero")
        # 1/x = conj(x)/(x conj(x)); the denominator lies in Q[sqrt2] and is
        # rationalized by its sqrt2-conjugate.
        den = self * self.conj()
        a, b = den.re_rat, den.re_rad
        norm = a * a - 2 * b * b
        return self.conj() * ExactScalar(a / norm, -b / norm)

    def __truediv__(self, other) -> ExactScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    # -- output ------------------------------------------------------------

    def real_float(self) -> float:
        return float(self.re_rat) + float(self.re_rad) * _SQRT2

    def imag_float(self) -> float:
        return float(self.im_rat) + float(self.im_rad) * _SQRT2

    def to_complex(self) -> complex:
        return complex(self.real_float(), self.imag_float())

    def real_sign(self) -> int:
        """Exact sign of the real part a + b*sqrt2 (requires a real scalar)."""
        if not self.is_real():
            raise ValueError("real_sign of a non-real scalar")
        a, b = self.re_rat, self.re_rad
        if not a and not b:
            return 0
        if not b:
            return 1 if a > 0 else -1
        if not a:
            return 1 if b > 0 else -1
        # sqrt2 irrational: a^2 != 2b^2 when both are nonzero
        if a * a > 2 * b * b:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def to_json(self) -> list:
        return [
            [p.numerator, p.denominator]
            for p in (self.re_rat, self.re_rad, self.im_rat, self.im_rad)
        ]

    @classmethod
    def from_json(cls, data) -> ExactScalar:
        return cls(*(Fraction(num, den) for num, den in data))

    def __repr__(self) -> str:
        parts = []
        for val, sym in (
            (self.re_rat, ""),
            (self.re_rad, "*sqrt2"),
            (self.im_rat, "*i"),
            (self.im_rad, "*i*sqrt2"),
        ):
            if val:
                parts.append(f"{val}{sym}")
        return "(" + (" + ".join(parts) if parts else "0") + ")"


ZERO = ExactScalar()
ONE = ExactScalar(Fraction(1))
MINUS_ONE = ExactScalar(Fraction(-1))
I = ExactScalar(Fraction(0), Fraction(0), Fraction(1))
MINUS_I = ExactScalar(Fraction(0), Fraction(0), Fraction(-1))
SQRT2 = ExactScalar(Fraction(0), Fraction(1))
INV_SQRT2 = ExactScalar(Fraction(0), Fraction(1, 2))


# ---------------------------------------------------------------------------
# Ordered multi-indices and permutation signs
# ---------------------------------------------------------------------------


def _validate_elems(n: int, elems: tuple[int, ...]):
    if n < 0:
        raise ValueError("ambient size must be nonnegative")
    prev = 0
    for e in elems:
        if not (1 <= e <= n):
            raise ValueError(f"index {e} outside 1..{n}")
        if e <= prev:
            raise ValueError(f"indices not strictly increasing: {elems}")
        prev = e


@dataclass(frozen=True)
class IndexSet:
    """Strictly increasing subset of {1..n}, the paper-style ordered index set."""

    n: int
    elems: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elems", tuple(self.elems))
        _validate_elems(self.n, self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def __contains__(self, j: int) -> bool:
        return j in self.elems

    def complement(self) -> IndexSet:
        inside = set(self.elems)
        return IndexSet(self.n, tuple(k for k in range(1, self.n + 1) if k not in inside))

    def to_json(self) -> list[int]:
        return list(self.elems)


def complement(n: int, elems: tuple[int, ...]) -> tuple[int, ...]:
    inside = set(elems)
    return tuple(k for k in range(1, n + 1) if k not in inside)


def eps_concat(first: tuple[int, ...], second: tuple[int, ...]) -> int:
    """Signature of (first..., second...) -> sorted, for disjoint increasing blocks.

    Inversions only occur across the blocks, so the count is the number of
    pairs (a, b) with a in first, b in second, a > b.
    """
    inv = 0
    bi = 0
    # second is increasing: for each b, count elements of first above it
    for b in second:
        while bi < len(first) and first[bi] < b:
            bi += 1
        inv += len(first) - bi
    return -1 if inv & 1 else 1


def eps_sign(n: int, elems: tuple[int, ...]) -> int:
    """epsilon(J, J^c): signature of (J..., J^c...) -> (1..n)."""
    _validate_elems(n, elems)
    return eps_concat(elems, complement(n, elems))


def tilde_eps(j: int, elems: tuple[int, ...]) -> int:
    """(-1)^k where k = #{elements of the set below j}; j must not be a member."""
    if j in elems:
        raise ValueError(f"insertion sign undefined: {j} already in {elems}")
    below = sum(1 for e in elems if e < j)
    return -1 if below & 1 else 1
