"""Fourier-fiber analysis: transformed frame, oscillator algebra, kernel witnesses.

The fiber model is the one in which the transformed frame takes the printed
closed form

    Zhat_j    = (1/sqrt2)(d/dz^j  - zbar^j xi_0),
    Zhat_jbar = (1/sqrt2)(d/dzbar^j + z^j xi_0),

with standard Wirtinger calculus.  These satisfy [Zhat_j, Zhat_jbar] = xi_0,
which forces fiber(X_0) = i xi_0 / 2 for the transform to be an algebra
homomorphism; the homomorphism property is machine-checked.  The symbol
a = |xi_0| is kept abstract (positive indeterminate) with an explicit branch
tag xi_0 = +a or xi_0 = -a, so every identity is decided per branch and
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from scipy.integrate import quad

from .exact import ExactScalar, I, ONE
from .forms import FormBasis, bidegree_basis
from .heisenberg import EnvOp
from .opmatrix import OpMatrix
from .polyop import APoly, PolyOp


def _branch_sign(branch) -> int:
    if branch in (1, "+", "pos"):
        return 1
    if branch in (-1, "-", "neg"):
        return -1
    raise ValueError(f"branch must be +-1, got {branch!r}")


class FiberOp:
    """Branch-tagged polynomial-coefficient operator in the fiber variables."""

    __slots__ = ("n", "branch", "op")

    def __init__(self, n: int, branch: int, op: PolyOp):
        if op.nz != n or op.extra:
            raise ValueError("fiber operator must live in the n complex fiber variables")
        self.n = n
        self.branch = _branch_sign(branch)
        self.op = op

    def _require_same(self, other: FiberOp):
        if self.n != other.n:
            raise ValueError("fiber dimension mismatch")
        if self.branch != other.branch:
            raise ValueError("cannot mix xi_0 branches")

    def __add__(self, other: FiberOp) -> FiberOp:
        self._require_same(other)
        return FiberOp(self.n, self.branch, self.op + other.op)

    def __sub__(self, other: FiberOp) -> FiberOp:
        self._require_same(other)
        return FiberOp(self.n, self.branch, self.op - other.op)

    def __neg__(self) -> FiberOp:
        return FiberOp(self.n, self.branch, -self.op)

    def __mul__(self, other: FiberOp) -> FiberOp:
        self._require_same(other)
        return FiberOp(self.n, self.branch, self.op * other.op)

    def commutator(self, other: FiberOp) -> FiberOp:
        return self * other - other * self

    def scale(self, c) -> FiberOp:
        return FiberOp(self.n, self.branch, self.op.scale(c))

    def is_zero(self) -> bool:
        return self.op.is_zero()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiberOp)
            and self.n == other.n
            and self.branch == other.branch
            and self.op == other.op
        )

    def __repr__(self) -> str:
        tag = "+" if self.branch > 0 else "-"
        return f"FiberOp[xi0={tag}a]({self.op!r})"


# -- generator images --------------------------------------------------------


def xi0_poly(branch) -> APoly:
    """xi_0 as a polynomial in a on the given branch."""
    return APoly.a_power(1, _branch_sign(branch))


def fiber_zhat(n: int, j: int, branch) -> FiberOp:
    """(1/sqrt2)(d/dz_j - zbar_j xi_0)."""
    s = _branch_sign(branch)
    inv = ExactScalar(0, Fraction(1, 2))  # 1/sqrt2
    op = PolyOp.d_z(n, j).scale(APoly.const(inv)) + PolyOp.z_mult(n, j, bar=True).scale(
        APoly.a_power(1, -s * inv)
    )
    return FiberOp(n, s, op)


def fiber_zbarhat(n: int, j: int, branch) -> FiberOp:
    """(1/sqrt2)(d/dzbar_j + z_j xi_0)."""
    s = _branch_sign(branch)
    inv = ExactScalar(0, Fraction(1, 2))
    op = PolyOp.d_z(n, j, bar=True).scale(APoly.const(inv)) + PolyOp.z_mult(n, j).scale(
        APoly.a_power(1, s * inv)
    )
    return FiberOp(n, s, op)


def fiber_x0(n: int, branch) -> FiberOp:
    """fiber(X_0) = i xi_0 / 2, forced by the frame images and the bracket relations."""
    s = _branch_sign(branch)
    return FiberOp(n, s, PolyOp.constant(n, APoly.a_power(1, I * Fraction(s, 2))))


def fiber_xj(n: int, k: int, branch) -> FiberOp:
    """Image of the real generator X_k, k = 1..2n."""
    s = _branch_sign(branch)
    inv = ExactScalar(0, Fraction(1, 2))
    if 1 <= k <= n:
        zh, zbh = fiber_zhat(n, k, s), fiber_zbarhat(n, k, s)
        return (zh + zbh).scale(APoly.const(inv))  # (1/sqrt2)(Zhat + Zbarhat)
    if n < k <= 2 * n:
        j = k - n
        zh, zbh = fiber_zhat(n, j, s), fiber_zbarhat(n, j, s)
        return (zh - zbh).scale(APoly.const(I * inv))  # (i/sqrt2)(Zhat - Zbarhat)
    raise ValueError(f"generator index {k} outside 1..{2*n}")


def fiber_envop(a: EnvOp, branch) -> FiberOp:
    """Algebra homomorphism on PBW monomials: ordered product of generator images."""
    n = a.n
    s = _branch_sign(branch)
    gens = [fiber_xj(n, k, s) for k in range(1, 2 * n + 1)]
    x0 = fiber_x0(n, s)
    out = FiberOp(n, s, PolyOp.zero(n))
    for mono, c in a.terms.items():
        acc = FiberOp(n, s, PolyOp.constant(n, APoly.const(c)))
        for k in range(2 * n):
            for _ in range(mono[k]):
                acc = acc * gens[k]
        for _ in range(mono[2 * n]):
            acc = acc * x0
        out = out + acc
    return out


def fiber_opmatrix(opm: OpMatrix, branch) -> dict[tuple[FormBasis, FormBasis], FiberOp]:
    return {key: fiber_envop(op, branch) for key, op in opm.entries.items()}


# -- oscillator building blocks ----------------------------------------------


def oscillator_h(n: int, j: int, branch) -> FiberOp:
    """H_j = d^2/dzbar_j dz_j - |z_j|^2 xi_0^2 (xi_0^2 = a^2 on either branch)."""
    s = _branch_sign(branch)
    dd = PolyOp.d_z(n, j, bar=True) * PolyOp.d_z(n, j)
    zz = PolyOp.z_mult(n, j) * PolyOp.z_mult(n, j, bar=True)
    return FiberOp(n, s, dd + zz.scale(APoly.a_power(2, -1)))


def rotation_r(n: int, j: int, branch) -> FiberOp:
    """R_j = z_j d/dz_j - zbar_j d/dzbar_j."""
    s = _branch_sign(branch)
    op = PolyOp.z_mult(n, j) * PolyOp.d_z(n, j) - PolyOp.z_mult(n, j, bar=True) * PolyOp.d_z(
        n, j, bar=True
    )
    return FiberOp(n, s, op)


@dataclass
class OscillatorReport:
    n: int
    j: int
    branch: int
    lowering_ok: bool    # 2 Zbarhat_j Zhat_j == H_j + xi0 R_j - xi0
    raising_ok: bool     # 2 Zhat_j Zbarhat_j == H_j + xi0 R_j + xi0
    commutator_ok: bool  # difference of the two products is 2 xi0
    diff_lowering: PolyOp | None = None
    diff_raising: PolyOp | None = None

    def ok(self) -> bool:
        return self.lowering_ok and self.raising_ok and self.commutator_ok


def oscillator_decompose(n: int, j: int, branch) -> OscillatorReport:
    s = _branch_sign(branch)
    zh, zbh = fiber_zhat(n, j, s), fiber_zbarhat(n, j, s)
    h, r = oscillator_h(n, j, s), rotation_r(n, j, s)
    xi = xi0_poly(s)
    one = FiberOp(n, s, PolyOp.constant(n, xi))

    lower = (zbh * zh).scale(2)
    raise_ = (zh * zbh).scale(2)
    want_lower = h + r.scale(xi) - one
    want_raise = h + r.scale(xi) + one
    dl = (lower - want_lower).op
    dr = (raise_ - want_raise).op
    comm_ok = (raise_ - lower) == one.scale(2)
    return OscillatorReport(
        n, j, s,
        dl.is_zero(), dr.is_zero(), comm_ok,
        None if dl.is_zero() else dl,
        None if dr.is_zero() else dr,
    )


# -- Gaussian-class functions --------------------------------------------------


class GaussianFun:
    """p(z, zbar; a) * exp(-a |z|^2) with exact polynomial p."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[tuple[tuple[int, ...], tuple[int, ...]], APoly] | None = None):
        self.n = n
        self.terms: dict[tuple[tuple[int, ...], tuple[int, ...]], APoly] = {}
        if terms:
            for (alpha, beta), p in terms.items():
                if len(alpha) != n or len(beta) != n:
                    raise ValueError("exponent arity mismatch")
                if p:
                    self.terms[(tuple(alpha), tuple(beta))] = p

    @classmethod
    def ground(cls, n: int) -> GaussianFun:
        """The radial Gaussian exp(-a|z|^2) itself."""
        return cls(n, {((0,) * n, (0,) * n): APoly.const(1)})

    @classmethod
    def monomial(cls, n: int, alpha, beta, coeff=None) -> GaussianFun:
        return cls(n, {(tuple(alpha), tuple(beta)): coeff or APoly.const(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, GaussianFun) and self.n == other.n and self.terms == other.terms

    def __add__(self, other: GaussianFun) -> GaussianFun:
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        out = dict(self.terms)
        for k, p in other.terms.items():
            s = out.get(k)
            tot = p if s is None else s + p
            if tot:
                out[k] = tot
            elif s is not None:
                del out[k]
        return GaussianFun(self.n, out)

    def __neg__(self) -> GaussianFun:
        return GaussianFun(self.n, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other: GaussianFun) -> GaussianFun:
        return self + (-other)

    def scale(self, c) -> GaussianFun:
        if not isinstance(c, APoly):
            c = APoly.const(c)
        return GaussianFun(self.n, {k: c * p for k, p in self.terms.items()})

    def max_degree(self) -> int:
        return max((sum(a) + sum(b) for (a, b) in self.terms), default=0)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (alpha, beta), p in sorted(self.terms.items()):
            mono = "".join(
                f"z{j+1}^{e}" if e > 1 else f"z{j+1}" for j, e in enumerate(alpha) if e
            ) + "".join(
                f"zb{j+1}^{e}" if e > 1 else f"zb{j+1}" for j, e in enumerate(beta) if e
            )
            parts.append(f"({p!r}){mono}")
        return (" + ".join(parts)) + " * exp(-a|z|^2)"


def _apply_dz(f: GaussianFun, j: int, bar: bool) -> GaussianFun:
    """d/dz_j resp. d/dzbar_j of p e^{-a|z|^2}; the weight contributes -a zbar_j resp. -a z_j."""
    n = f.n
    out: dict = {}

    def add(key, p):
        s = out.get(key)
        tot = p if s is None else s + p
        if tot:
            out[key] = tot
        elif s is not None:
            del out[key]

    for (alpha, beta), p in f.terms.items():
        if not bar:
            e = alpha[j - 1]
            if e:
                na = list(alpha); na[j - 1] -= 1
                add((tuple(na), beta), p * Fraction(e))
            nb = list(beta); nb[j - 1] += 1
            add((alpha, tuple(nb)), p * APoly.a_power(1, -1))
        else:
            e = beta[j - 1]
            if e:
                nb = list(beta); nb[j - 1] -= 1
                add((alpha, tuple(nb)), p * Fraction(e))
            na = list(alpha); na[j - 1] += 1
            add((tuple(na), beta), p * APoly.a_power(1, -1))
    return GaussianFun(n, out)


def apply_gaussian(op: FiberOp | PolyOp, f: GaussianFun) -> GaussianFun:
    """Exact action of a fiber operator on the Gaussian class (closed under it)."""
    pop = op.op if isinstance(op, FiberOp) else op
    if pop.nz != f.n or pop.extra:
        raise ValueError("operator/function dimension mismatch")
    n = f.n
    total = GaussianFun(n)
    for (cexp, dexp), p in pop.terms.items():
        g = f
        for j in range(1, n + 1):
            for _ in range(dexp[j - 1]):
                g = _apply_dz(g, j, bar=False)
            for _ in range(dexp[n + j - 1]):
                g = _apply_dz(g, j, bar=True)
        shifted: dict = {}
        for (alpha, beta), q in g.terms.items():
            na = tuple(alpha[t] + cexp[t] for t in range(n))
            nb = tuple(beta[t] + cexp[n + t] for t in range(n))
            key = (na, nb)
            s = shifted.get(key)
            tot = q * p if s is None else s + q * p
            if tot:
                shifted[key] = tot
            elif s is not None:
                del shifted[key]
        total = total + GaussianFun(n, shifted)
    return total


# -- the kernel witnesses on the 5-dimensional group ---------------------------


@dataclass
class GroundStateReport:
    branch: int
    h_eigenvalue: APoly            # machine-derived: H_j uhat = (this) * uhat
    h_difference_zero: bool        # (H_1 - H_2) uhat = 0
    r_zero: bool                   # R_j uhat = 0
    t_zero: bool                   # That uhat = 0
    lowering_annihilates: bool     # (d/dz_j - zbar_j xi0) uhat = 0 on this branch?
    raising_annihilates: bool      # (d/dzbar_j + z_j xi0) uhat = 0 on this branch?

    def ok(self) -> bool:
        return self.h_difference_zero and self.r_zero and self.t_zero


def t_hat(branch) -> FiberOp:
    """That = 2(Zbarhat_1 Zhat_2 + Zhat_1 Zbarhat_2) on the 2-dimensional fiber."""
    s = _branch_sign(branch)
    return (
        fiber_zbarhat(2, 1, s) * fiber_zhat(2, 2, s)
        + fiber_zhat(2, 1, s) * fiber_zbarhat(2, 2, s)
    ).scale(2)


def ground_state_report(branch) -> GroundStateReport:
    s = _branch_sign(branch)
    n = 2
    u = GaussianFun.ground(n)

    h1u = apply_gaussian(oscillator_h(n, 1, s), u)
    h2u = apply_gaussian(oscillator_h(n, 2, s), u)
    # eigenvalue: H_1 u must be (poly) * u with the polynomial supported on the
    # ground key
    eig = APoly()
    ground_key = ((0,) * n, (0,) * n)
    rest = GaussianFun(n, {k: p for k, p in h1u.terms.items() if k != ground_key})
    if rest.is_zero() and ground_key in h1u.terms:
        eig = h1u.terms[ground_key]
    hdiff = (h1u - h2u).is_zero()

    r_zero = all(
        apply_gaussian(rotation_r(n, j, s), u).is_zero() for j in (1, 2)
    )
    t_zero = apply_gaussian(t_hat(s), u).is_zero()

    lower = PolyOp.d_z(n, 1) + PolyOp.z_mult(n, 1, bar=True).scale(APoly.a_power(1, -s))
    raise_ = PolyOp.d_z(n, 1, bar=True) + PolyOp.z_mult(n, 1).scale(APoly.a_power(1, s))
    lo = apply_gaussian(lower, u).is_zero()
    hi = apply_gaussian(raise_, u).is_zero()
    return GroundStateReport(s, eig, hdiff, r_zero, t_zero, lo, hi)


WITNESS_BIDEGREES = ((0, 1), (1, 1), (2, 1))


def witness_form(p: int, q: int) -> FormBasis:
    """The covector carrying the singular solution: J = (1..p), K = (1)."""
    if q != 1 or p not in (0, 1, 2):
        raise ValueError("witnesses live on (0,1), (1,1), (2,1)")
    return FormBasis(2, tuple(range(1, p + 1)), (1,))


@dataclass
class KernelWitnessReport:
    branch: int
    results: dict[tuple[int, int], bool]
    sanity_nonzero_00: bool
    residuals: dict[tuple[int, int], str] = field(default_factory=dict)

    def ok(self) -> bool:
        return all(self.results.values()) and self.sanity_nonzero_00


def kernel_witness_check(branch, ql: OpMatrix | None = None) -> KernelWitnessReport:
    """Apply the transformed Q_L to uhat-valued witness forms on the n=2 group."""
    s = _branch_sign(branch)
    ql = ql if ql is not None else _QL2()
    fql = fiber_opmatrix(ql, s)
    u = GaussianFun.ground(2)

    results = {}
    residuals = {}
    for (p, q) in WITNESS_BIDEGREES:
        col = witness_form(p, q)
        rows = bidegree_basis(2, p, q)
        image_zero = True
        for row in rows:
            ent = fql.get((row, col))
            if ent is None:
                continue
            res = apply_gaussian(ent, u)
            if not res.is_zero():
                image_zero = False
                residuals[(p, q)] = f"{row!r}: {res!r}"
        results[(p, q)] = image_zero

    f00 = FormBasis(2, (), ())
    ent = fql.get((f00, f00))
    sanity = ent is not None and not apply_gaussian(ent, u).is_zero()
    return KernelWitnessReport(s, results, sanity, residuals)


_ql2_cache: OpMatrix | None = None


def _QL2() -> OpMatrix:
    global _ql2_cache
    if _ql2_cache is None:
        from .opmatrix import build_ql

        _ql2_cache = build_ql(2)
    return _ql2_cache


# -- inverse transform of the ground state -------------------------------------

# Sign of u = F_0^{-1}[exp(-|xi_0| |z|^2)], derived from the exact antiderivative
# int_0^inf e^{-c t} cos(x t) dt = c/(c^2 + x^2): the transform of a positive
# function is positive.
CLOSED_FORM_SIGN = 1


def closed_form_u(x0: float, znorm2: float) -> float:
    """u(x^0, z) = sign * (1/pi) |z|^2 / (|x^0|^2 + |z|^4), with the derived sign."""
    return CLOSED_FORM_SIGN * znorm2 / (math.pi * (x0 * x0 + znorm2 * znorm2))


def closed_form_u_exact(x0: Fraction, znorm2: Fraction) -> Fraction:
    """The rational part |z|^2/(x0^2+|z|^4); multiply by sign/pi for the value."""
    return znorm2 / (x0 * x0 + znorm2 * znorm2)


def half_line_cos_laplace(c: Fraction, x: Fraction) -> Fraction:
    """Exact value of int_0^inf e^{-c t} cos(x t) dt for c > 0."""
    if c <= 0:
        raise ValueError("needs a positive decay rate")
    return c / (c * c + x * x)


def inverse_fourier_quad(x0: float, znorm2: float, rel_tol: float = 1e-12) -> tuple[float, float]:
    """(1/pi) int_0^T cos(x0 t) e^{-|z|^2 t} dt with a certified truncation bound.

    Returns (value, error_bound) where the bound covers both the quadrature
    estimate and the dropped tail |int_T^inf| <= e^{-cT}/c.
    """
    c = znorm2
    if c <= 0:
        raise ValueError("|z| must be positive; the solution is singular at z = 0")
    # choose T so the tail is negligible against the closed-form magnitude
    target = abs(closed_form_u(x0, znorm2))
    T = max(50.0 / c, -math.log(max(rel_tol * target * math.pi * c / 2, 1e-300)) / c)
    if x0 != 0.0:
        val, err = quad(lambda t: math.exp(-c * t), 0.0, T, weight="cos", wvar=x0,
                        epsabs=1e-14, epsrel=1e-12, limit=400)
    else:
        val, err = quad(lambda t: math.exp(-c * t), 0.0, T, epsabs=1e-14, epsrel=1e-12, limit=400)
    tail = math.exp(-c * T) / c
    return val / math.pi, (err + tail) / math.pi


@dataclass
class FourierPoint:
    x0: float
    z: tuple[complex, ...]
    u_closed: float
    u_quad: float
    abs_err: float


@dataclass
class FourierReport:
    points: list[FourierPoint]
    max_rel_err: float
    tol: float
    derived_sign: int = CLOSED_FORM_SIGN

    def ok(self) -> bool:
        return self.max_rel_err < self.tol


def inverse_fourier_check(points: list[tuple[float, tuple[complex, ...]]], tol: float = 1e-8) -> FourierReport:
    rows = []
    worst = 0.0
    for x0, z in points:
        znorm2 = sum(abs(w) ** 2 for w in z)
        uc = closed_form_u(x0, znorm2)
        uq, _ = inverse_fourier_quad(x0, znorm2)
        err = abs(uq - uc)
        worst = max(worst, err / abs(uc))
        rows.append(FourierPoint(x0, tuple(z), uc, uq, err))
    return FourierReport(rows, worst, tol)


def default_fourier_points(count: int = 24) -> list[tuple[float, tuple[complex, ...]]]:
    """Deterministic sample grid away from the singular origin (n = 2 fiber)."""
    pts = []
    radii = [0.5, 1.0, 1.7, 2.3]
    x0s = [0.0, 0.25, 1.0, -1.5, 3.0, -4.0]
    k = 0
    for r in radii:
        for x0 in x0s:
            z1 = complex(r * math.cos(0.3 + k), r * math.sin(0.3 + k))
            z2 = complex(r * math.sin(1.1 * k + 0.2), r * math.cos(0.7 * k))
            scale = r / math.hypot(abs(z1), abs(z2))
            pts.append((x0, (z1 * scale, z2 * scale)))
            k += 1
            if len(pts) >= count:
                return pts
    return pts
