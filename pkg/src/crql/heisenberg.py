"""Left-invariant operator algebra of the (2n+1)-dimensional Heisenberg group.

Elements are kept in PBW normal form X_1^{e_1} ... X_{2n}^{e_{2n}} X_0^{e_0}
(the central generator last), with the relations

    [X_j, X_{n+k}] = -2 delta_{jk} X_0,      all other generator brackets zero.

Normal ordering of a product only ever has to move X_{n+j} powers past X_j
powers, which is a one-variable Weyl-algebra straightening with central
parameter 2 X_0.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import comb, factorial

from .exact import INV_SQRT2, MINUS_I, ONE, ExactScalar

Mono = tuple  # (e_1, ..., e_2n, e_0)


class EnvOp:
    """PBW-normal-form element of the enveloping algebra over Q(i)[sqrt2]."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[Mono, ExactScalar] | None = None):
        if n < 1:
            raise ValueError("CR dimension must be >= 1")
        self.n = n
        self.terms: dict[Mono, ExactScalar] = {}
        if terms:
            width = 2 * n + 1
            for m, c in terms.items():
                if len(m) != width or any(e < 0 for e in m):
                    raise ValueError(f"bad monomial {m} for n={n}")
                if c:
                    self.terms[tuple(m)] = c

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> EnvOp:
        return cls(n)

    @classmethod
    def scalar(cls, n: int, c) -> EnvOp:
        if not isinstance(c, ExactScalar):
            c = ExactScalar.from_rational(c)
        return cls(n, {(0,) * (2 * n + 1): c})

    @classmethod
    def one(cls, n: int) -> EnvOp:
        return cls.scalar(n, 1)

    @classmethod
    def generator(cls, n: int, k: int) -> EnvOp:
        """X_k for k in 0..2n (k=0 is the central generator)."""
        if not (0 <= k <= 2 * n):
            raise ValueError(f"generator index {k} outside 0..{2*n}")
        m = [0] * (2 * n + 1)
        if k == 0:
            m[2 * n] = 1
        else:
            m[k - 1] = 1
        return cls(n, {tuple(m): ONE})

    # -- bookkeeping -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        return isinstance(other, EnvOp) and self.n == other.n and self.terms == other.terms

    def _require_same(self, other: EnvOp):
        if not isinstance(other, EnvOp) or other.n != self.n:
            raise ValueError("dimension mismatch between operators")

    # -- linear structure ----------------------------------------------------

    def __add__(self, other: EnvOp) -> EnvOp:
        self._require_same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            tot = c if s is None else s + c
            if tot:
                out[m] = tot
            elif s is not None:
                del out[m]
        return EnvOp(self.n, out)

    def __neg__(self) -> EnvOp:
        return EnvOp(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: EnvOp) -> EnvOp:
        return self + (-other)

    def scale(self, c) -> EnvOp:
        if not isinstance(c, ExactScalar):
            c = ExactScalar.from_rational(c)
        if not c:
            return EnvOp(self.n)
        return EnvOp(self.n, {m: c * v for m, v in self.terms.items()})

    # -- multiplication ------------------------------------------------------

    def __mul__(self, other: EnvOp) -> EnvOp:
        self._require_same(other)
        n = self.n
        out: dict[Mono, ExactScalar] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                for m, c in _mono_product(n, ma, mb):
                    coef = ca * cb * c
                    s = out.get(m)
                    tot = coef if s is None else s + coef
                    if tot:
                        out[m] = tot
                    elif s is not None:
                        del out[m]
        return EnvOp(n, out)

    def commutator(self, other: EnvOp) -> EnvOp:
        return self * other - other * self

    def __pow__(self, k: int) -> EnvOp:
        if k < 0:
            raise ValueError("negative powers not defined")
        out = EnvOp.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    # -- involutions ---------------------------------------------------------

    def conj(self) -> EnvOp:
        """Complex conjugate (generators are real, coefficients conjugated)."""
        return EnvOp(self.n, {m: c.conj() for m, c in self.terms.items()})

    def adjoint(self) -> EnvOp:
        """Formal adjoint for Haar measure: X_k* = -X_k, antilinear anti-homomorphism."""
        n = self.n
        out = EnvOp.zero(n)
        for m, c in self.terms.items():
            deg = sum(m)
            coef = c.conj()
            if deg % 2:
                coef = -coef
            # reversed word X_{2n}^{e_{2n}} ... X_1^{e_1}, renormalized; X_0 central
            word = EnvOp.scalar(n, coef)
            for k in range(2 * n, 0, -1):
                e = m[k - 1]
                if e:
                    word = word * (EnvOp.generator(n, k) ** e)
            if m[2 * n]:
                word = word * (EnvOp.generator(n, 0) ** m[2 * n])
            out = out + word
        return out

    # -- Heisenberg grading ----------------------------------------------------

    def heisenberg_order(self) -> int:
        """Max parabolic weight: X_0 counts 2, each X_k (k>=1) counts 1."""
        if not self.terms:
            raise ValueError("order of the zero operator is undefined")
        return max(2 * m[-1] + sum(m[:-1]) for m in self.terms)

    def leading_part(self) -> EnvOp:
        top = self.heisenberg_order()
        return EnvOp(
            self.n,
            {m: c for m, c in self.terms.items() if 2 * m[-1] + sum(m[:-1]) == top},
        )

    def is_oh1(self) -> bool:
        """True when the operator is a weight <= 1 combination (scalars and single X_k, k>=1)."""
        return self.is_zero() or self.heisenberg_order() <= 1

    # -- output ------------------------------------------------------------

    def to_json(self) -> list:
        # exponent vector serialized as (e_0, e_1, ..., e_2n)
        items = sorted(self.terms.items())
        return [[[m[-1], *m[:-1]], c.to_json()] for m, c in items]

    @classmethod
    def from_json(cls, n: int, data) -> EnvOp:
        terms = {}
        for vec, c in data:
            m = tuple(vec[1:]) + (vec[0],)
            terms[m] = ExactScalar.from_json(c)
        return cls(n, terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            gens = []
            for k in range(1, 2 * self.n + 1):
                if m[k - 1]:
                    gens.append(f"X{k}" + (f"^{m[k-1]}" if m[k - 1] > 1 else ""))
            if m[-1]:
                gens.append("X0" + (f"^{m[-1]}" if m[-1] > 1 else ""))
            parts.append(f"{c!r}" + ("*" + "*".join(gens) if gens else ""))
        return " + ".join(parts)


def _mono_product(n: int, ma: Mono, mb: Mono):
    """Normal-order the product of two PBW monomials.

    Only X_{n+j}^{a} (left factor) passing X_j^{b} (right factor) reorders:
    X_{n+j}^a X_j^b = sum_i i! C(a,i) C(b,i) (2 X_0)^i X_j^{b-i} X_{n+j}^{a-i}.
    """
    ranges = [range(min(ma[n + j - 1], mb[j - 1]) + 1) for j in range(1, n + 1)]
    for ivec in iproduct(*ranges):
        coef = 1
        m = [ma[k] + mb[k] for k in range(2 * n)]
        for j, i in enumerate(ivec, start=1):
            if i:
                coef *= factorial(i) * comb(ma[n + j - 1], i) * comb(mb[j - 1], i) * (2 ** i)
                m[j - 1] -= i
                m[n + j - 1] -= i
        m.append(ma[2 * n] + mb[2 * n] + sum(ivec))
        yield tuple(m), ExactScalar.from_rational(Fraction(coef))


# ---------------------------------------------------------------------------
# Frames
# ---------------------------------------------------------------------------


def x0(n: int) -> EnvOp:
    return EnvOp.generator(n, 0)


def z_field(n: int, j: int) -> EnvOp:
    """Z_j = (1/sqrt2)(X_j - i X_{n+j})."""
    if not (1 <= j <= n):
        raise ValueError(f"frame index {j} outside 1..{n}")
    return (
        EnvOp.generator(n, j).scale(INV_SQRT2)
        + EnvOp.generator(n, n + j).scale(MINUS_I * INV_SQRT2)
    )


def zbar_field(n: int, j: int) -> EnvOp:
    """Z_jbar = conj(Z_j) = (1/sqrt2)(X_j + i X_{n+j})."""
    return z_field(n, j).conj()


def complex_frame(n: int) -> dict[str, list[EnvOp]]:
    """Admissible frame {Z_j, Z_jbar}, 1-indexed (index 0 unused)."""
    return {
        "Z": [None] + [z_field(n, j) for j in range(1, n + 1)],
        "Zbar": [None] + [zbar_field(n, j) for j in range(1, n + 1)],
    }
