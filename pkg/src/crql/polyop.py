"""Polynomial-coefficient differential operators in complex variables.

Used in two roles:

* rigid-hypersurface frames Z_j = d/dz^j + i (dF/dz^j) d/dw, where the
  brackets have non-constant coefficients, so the enveloping-algebra model
  does not apply;
* fiber operators on the transform side, whose coefficients are polynomials
  in the positive symbol a = |xi_0| (APoly below).

Variable layout for n complex pairs: coefficient slots are
(z_1..z_n, zbar_1..zbar_n); derivative slots are
(d/dz_1..d/dz_n, d/dzbar_1..d/dzbar_n) followed by optional extra
derivative-only symbols (e.g. d/dw, d/dwbar) that never appear in
coefficients.  Wirtinger calculus is the standard normalized one:
[d/dz, z] = 1, [d/dz, zbar] = 0.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import comb

from .exact import ExactScalar, ONE


class APoly:
    """Polynomial in a single positive symbol `a` with ExactScalar coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, ExactScalar] | None = None):
        self.coeffs: dict[int, ExactScalar] = {}
        if coeffs:
            for d, c in coeffs.items():
                if d < 0:
                    raise ValueError("negative degree")
                if c:
                    self.coeffs[d] = c

    @classmethod
    def const(cls, c) -> APoly:
        if not isinstance(c, ExactScalar):
            c = ExactScalar.from_rational(c)
        return cls({0: c})

    @classmethod
    def a_power(cls, d: int, c=1) -> APoly:
        if not isinstance(c, ExactScalar):
            c = ExactScalar.from_rational(c)
        return cls({d: c})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, APoly) and self.coeffs == other.coeffs

    def __add__(self, other: APoly) -> APoly:
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            s = out.get(d)
            tot = c if s is None else s + c
            if tot:
                out[d] = tot
            elif s is not None:
                del out[d]
        return APoly(out)

    def __neg__(self) -> APoly:
        return APoly({d: -c for d, c in self.coeffs.items()})

    def __sub__(self, other: APoly) -> APoly:
        return self + (-other)

    def __mul__(self, other) -> APoly:
        if isinstance(other, (int, Fraction, ExactScalar)):
            other = APoly.const(other)
        out: dict[int, ExactScalar] = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                c = c1 * c2
                s = out.get(d)
                tot = c if s is None else s + c
                if tot:
                    out[d] = tot
                elif s is not None:
                    del out[d]
        return APoly(out)

    __rmul__ = __mul__

    def conj(self) -> APoly:
        return APoly({d: c.conj() for d, c in self.coeffs.items()})

    def substitute(self, a_value) -> ExactScalar:
        a = ExactScalar.from_rational(a_value) if not isinstance(a_value, ExactScalar) else a_value
        out = ExactScalar()
        for d, c in self.coeffs.items():
            out = out + c * a ** d
        return out

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(
            f"{c!r}" + (f"*a^{d}" if d > 1 else "*a" if d == 1 else "")
            for d, c in sorted(self.coeffs.items())
        )


APOLY_ZERO = APoly()
APOLY_ONE = APoly.const(1)


Key = tuple  # (cexp: tuple, dexp: tuple)


class PolyOp:
    """Operator sum of  coeff(a) * z^cexp * d^dexp  terms; exact composition."""

    __slots__ = ("nz", "extra", "terms")

    def __init__(self, nz: int, terms: dict[Key, APoly] | None = None, extra: tuple[str, ...] = ()):
        self.nz = nz
        self.extra = tuple(extra)
        self.terms: dict[Key, APoly] = {}
        cw, dw = 2 * nz, 2 * nz + len(self.extra)
        if terms:
            for (cexp, dexp), p in terms.items():
                if len(cexp) != cw or len(dexp) != dw:
                    raise ValueError("malformed exponent tuples")
                if p:
                    self.terms[(tuple(cexp), tuple(dexp))] = p

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nz: int, extra: tuple[str, ...] = ()) -> PolyOp:
        return cls(nz, None, extra)

    @classmethod
    def constant(cls, nz: int, p, extra: tuple[str, ...] = ()) -> PolyOp:
        if not isinstance(p, APoly):
            p = APoly.const(p)
        op = cls(nz, None, extra)
        if p:
            op.terms[((0,) * (2 * nz), (0,) * (2 * nz + len(extra)))] = p
        return op

    @classmethod
    def one(cls, nz: int, extra: tuple[str, ...] = ()) -> PolyOp:
        return cls.constant(nz, 1, extra)

    def _mono(self, cexp, dexp, p) -> PolyOp:
        return PolyOp(self.nz, {(tuple(cexp), tuple(dexp)): p}, self.extra)

    @classmethod
    def z_mult(cls, nz: int, j: int, bar: bool = False, extra=()) -> PolyOp:
        """Multiplication by z_j (or zbar_j)."""
        cexp = [0] * (2 * nz)
        cexp[(nz if bar else 0) + j - 1] = 1
        return cls(nz, {(tuple(cexp), (0,) * (2 * nz + len(extra))): APOLY_ONE}, extra)

    @classmethod
    def d_z(cls, nz: int, j: int, bar: bool = False, extra=()) -> PolyOp:
        """d/dz_j (or d/dzbar_j)."""
        dexp = [0] * (2 * nz + len(extra))
        dexp[(nz if bar else 0) + j - 1] = 1
        return cls(nz, {((0,) * (2 * nz), tuple(dexp)): APOLY_ONE}, extra)

    @classmethod
    def d_extra(cls, nz: int, name: str, extra: tuple[str, ...]) -> PolyOp:
        dexp = [0] * (2 * nz + len(extra))
        dexp[2 * nz + extra.index(name)] = 1
        return cls(nz, {((0,) * (2 * nz), tuple(dexp)): APOLY_ONE}, extra)

    # -- structure ---------------------------------------------------------

    def _require_same(self, other: PolyOp):
        if self.nz != other.nz or self.extra != other.extra:
            raise ValueError("operator domains differ")

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyOp)
            and self.nz == other.nz
            and self.extra == other.extra
            and self.terms == other.terms
        )

    def __add__(self, other: PolyOp) -> PolyOp:
        self._require_same(other)
        out = dict(self.terms)
        for k, p in other.terms.items():
            s = out.get(k)
            tot = p if s is None else s + p
            if tot:
                out[k] = tot
            elif s is not None:
                del out[k]
        return PolyOp(self.nz, out, self.extra)

    def __neg__(self) -> PolyOp:
        return PolyOp(self.nz, {k: -p for k, p in self.terms.items()}, self.extra)

    def __sub__(self, other: PolyOp) -> PolyOp:
        return self + (-other)

    def scale(self, c) -> PolyOp:
        if not isinstance(c, APoly):
            c = APoly.const(c)
        return PolyOp(self.nz, {k: c * p for k, p in self.terms.items()}, self.extra)

    def __mul__(self, other: PolyOp) -> PolyOp:
        """Composition self . other via the exact Leibniz rule."""
        self._require_same(other)
        nz = self.nz
        out: dict[Key, APoly] = {}
        for (c1, d1), p1 in self.terms.items():
            for (c2, d2), p2 in other.terms.items():
                # derivative slots 0..2nz-1 act on the matching coefficient slot
                limits = [range(min(d1[s], c2[s]) + 1) for s in range(2 * nz)]
                for kvec in iproduct(*limits):
                    coef = 1
                    for s, k in enumerate(kvec):
                        if k:
                            c = comb(d1[s], k)
                            # falling factorial c2[s] * (c2[s]-1) * ...
                            f = 1
                            for t in range(k):
                                f *= c2[s] - t
                            coef *= c * f
                    cexp = tuple(
                        c1[s] + c2[s] - (kvec[s] if s < 2 * nz else 0)
                        for s in range(2 * nz)
                    )
                    dexp = tuple(
                        d1[s] - (kvec[s] if s < 2 * nz else 0) + d2[s]
                        for s in range(len(d1))
                    )
                    p = p1 * p2 * Fraction(coef)
                    if not p:
                        continue
                    key = (cexp, dexp)
                    s0 = out.get(key)
                    tot = p if s0 is None else s0 + p
                    if tot:
                        out[key] = tot
                    elif s0 is not None:
                        del out[key]
        return PolyOp(nz, out, self.extra)

    def commutator(self, other: PolyOp) -> PolyOp:
        return self * other - other * self

    def __pow__(self, k: int) -> PolyOp:
        out = PolyOp.one(self.nz, self.extra)
        for _ in range(k):
            out = out * self
        return out

    def conj(self) -> PolyOp:
        """Swap z_j <-> zbar_j, d/dz_j <-> d/dzbar_j, pair extras, conjugate coefficients.

        Extra symbols are conjugated pairwise in order (w, wbar), so the list
        must have even length if nonempty.
        """
        nz = self.nz
        ne = len(self.extra)
        if ne % 2:
            raise ValueError("extras must pair up under conjugation")

        def swap_c(exp):
            return tuple(exp[nz:2 * nz] + exp[0:nz])

        def swap_d(exp):
            core = exp[nz:2 * nz] + exp[0:nz]
            tail = list(exp[2 * nz:])
            for i in range(0, ne, 2):
                tail[i], tail[i + 1] = tail[i + 1], tail[i]
            return tuple(core) + tuple(tail)

        return PolyOp(
            nz,
            {(swap_c(c), swap_d(d)): p.conj() for (c, d), p in self.terms.items()},
            self.extra,
        )

    # -- inspection ----------------------------------------------------------

    def derivative_orders(self) -> set[tuple[int, ...]]:
        return {d for (_, d) in self.terms}

    def coefficient_of_derivative(self, dexp: tuple[int, ...]) -> dict[tuple[int, ...], APoly]:
        """Coefficient polynomial (as cexp -> APoly) multiplying d^dexp."""
        dexp = tuple(dexp)
        return {c: p for (c, d), p in self.terms.items() if d == dexp}

    def evaluate_coefficient(self, dexp, point: list[ExactScalar]) -> ExactScalar:
        """Evaluate the coefficient of d^dexp at z_j = point[j-1], zbar_j = conj."""
        nz = self.nz
        if len(point) != nz:
            raise ValueError("point dimension mismatch")
        vals = [*point, *[v.conj() for v in point]]
        out = ExactScalar()
        for cexp, p in self.coefficient_of_derivative(dexp).items():
            c = p.substitute(0) if p.coeffs.keys() <= {0} else None
            if c is None:
                raise ValueError("coefficient depends on the symbol a")
            for s, e in enumerate(cexp):
                for _ in range(e):
                    c = c * vals[s]
            out = out + c
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        nz = self.nz
        names = [f"z{j}" for j in range(1, nz + 1)] + [f"zb{j}" for j in range(1, nz + 1)]
        dnames = [f"dz{j}" for j in range(1, nz + 1)] + [f"dzb{j}" for j in range(1, nz + 1)]
        dnames += [f"d{x}" for x in self.extra]
        parts = []
        for (cexp, dexp), p in sorted(self.terms.items()):
            factors = [f"({p!r})"]
            factors += [f"{names[s]}^{e}" if e > 1 else names[s] for s, e in enumerate(cexp) if e]
            factors += [f"{dnames[s]}^{e}" if e > 1 else dnames[s] for s, e in enumerate(dexp) if e]
            parts.append("*".join(factors))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Rigid-hypersurface frames
# ---------------------------------------------------------------------------

RIGID_EXTRA = ("w", "wbar")


class RealPolynomial:
    """Real-valued polynomial F(z, zbar) with rational coefficients.

    Stored as {(alpha, beta): Fraction} for the monomials z^alpha zbar^beta.
    Real-valuedness demands the coefficient symmetry c[beta,alpha] == c[alpha,beta].
    """

    def __init__(self, nz: int, coeffs: dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]):
        self.nz = nz
        self.coeffs = {}
        for (alpha, beta), c in coeffs.items():
            alpha, beta = tuple(alpha), tuple(beta)
            if len(alpha) != nz or len(beta) != nz:
                raise ValueError("exponent arity mismatch")
            c = Fraction(c)
            if c:
                self.coeffs[(alpha, beta)] = c
        for (alpha, beta), c in self.coeffs.items():
            if self.coeffs.get((beta, alpha)) != c:
                raise ValueError("F is not real-valued: coefficient map not conj-symmetric")

    def wirtinger(self, j: int, bar: bool = False) -> dict:
        """dF/dz_j (or dF/dzbar_j) as {(alpha,beta): Fraction}."""
        out = {}
        for (alpha, beta), c in self.coeffs.items():
            src = beta if bar else alpha
            e = src[j - 1]
            if not e:
                continue
            new = list(src)
            new[j - 1] -= 1
            key = (alpha, tuple(new)) if bar else (tuple(new), beta)
            out[key] = out.get(key, Fraction(0)) + c * e
        return {k: v for k, v in out.items() if v}


def hyperquadric_f(n: int, p: int) -> RealPolynomial:
    """F = sum_{j<=p} |z^j|^2 - sum_{j>p} |z^j|^2."""
    coeffs = {}
    for j in range(1, n + 1):
        alpha = tuple(1 if t == j - 1 else 0 for t in range(n))
        coeffs[(alpha, alpha)] = Fraction(1 if j <= p else -1)
    return RealPolynomial(n, coeffs)


def rigid_frame(F: RealPolynomial) -> list[PolyOp]:
    """Commuting frame Z_j = d/dz^j + i (dF/dz^j) d/dw on the graph of F (1-indexed)."""
    nz = F.nz
    dw = PolyOp.d_extra(nz, "w", RIGID_EXTRA)
    frame: list[PolyOp] = [None]
    for j in range(1, nz + 1):
        op = PolyOp.d_z(nz, j, extra=RIGID_EXTRA)
        for (alpha, beta), c in F.wirtinger(j).items():
            cexp = tuple(alpha) + tuple(beta)
            coeff = APoly.const(ExactScalar(0, 0, Fraction(c)))  # i * c
            op = op + dw._mono(cexp, dw_exponent(nz), coeff)
        frame.append(op)
    return frame


def dw_exponent(nz: int) -> tuple[int, ...]:
    d = [0] * (2 * nz + len(RIGID_EXTRA))
    d[2 * nz] = 1
    return tuple(d)


def dwbar_exponent(nz: int) -> tuple[int, ...]:
    d = [0] * (2 * nz + len(RIGID_EXTRA))
    d[2 * nz + 1] = 1
    return tuple(d)
