"""Finite fiber truncations in a monomial-Gaussian dictionary and their spectra.

Dictionary elements are z^alpha zbar^beta exp(-a|z|^2) up to a total degree
cutoff.  Applying any fiber operator to an element stays inside the Gaussian
class, so matrix entries are exact inner products (rational multiples of
pi^n, the pi^n dropped consistently from both sides of the pencil); the only
numerical step is the generalized Hermitian eigensolve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np
from scipy.linalg import eigh

from .exact import ExactScalar
from .fiber import FiberOp, GaussianFun, apply_gaussian, fiber_opmatrix
from .forms import FormBasis, bidegree_basis
from .opmatrix import OpMatrix, gamma_form_matrix, lambda_basis

KERNEL_RELTOL = 1e-8          # |lambda| < tol * ||A||_inf declares a zero mode
CONDITION_LIMIT = 1e12
RESIDUAL_RELTOL = 1e-10


def _monomials(n: int, cutoff: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(alpha, beta) with |alpha|+|beta| <= cutoff, sorted by (degree, beta, alpha)."""
    out = []
    for total in range(cutoff + 1):
        batch = []
        for alpha in _compositions(n, total):
            rest = total - sum(alpha)
            for beta in _compositions(n, rest):
                if sum(alpha) + sum(beta) == total:
                    batch.append((alpha, beta))
        batch.sort(key=lambda ab: (ab[1], ab[0]))
        out.extend(batch)
    return out


def _compositions(n: int, max_total: int):
    """All exponent tuples of length n with sum <= max_total."""
    if n == 0:
        yield ()
        return
    for head in range(max_total + 1):
        for tail in _compositions(n - 1, max_total - head):
            yield (head,) + tail


class DictionaryBasis:
    """Monomial-Gaussian dictionary with its exact Gram matrix (in units of pi^n)."""

    def __init__(self, n: int, a: Fraction, cutoff: int):
        a = Fraction(a)
        if a <= 0:
            raise ValueError("the symbol a = |xi_0| must be positive")
        if cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        self.n = n
        self.a = a
        self.cutoff = cutoff
        self.elements = _monomials(n, cutoff)
        self.index = {ab: i for i, ab in enumerate(self.elements)}
        # elements grouped by the charge vector alpha - beta; pairings are
        # nonzero only within a group
        self.charge_groups: dict[tuple[int, ...], list[int]] = {}
        for i, (alpha, beta) in enumerate(self.elements):
            ch = tuple(alpha[j] - beta[j] for j in range(n))
            self.charge_groups.setdefault(ch, []).append(i)
        self._moments: list[Fraction] = [Fraction(0)]
        # moment(k) = k!/(2a)^{k+1}; precomputed beyond any cutoff+coefficient need
        top = 2 * cutoff + 8
        self._moments = [
            Fraction(factorial(k)) / (2 * a) ** (k + 1) for k in range(top + 1)
        ]

    def __len__(self) -> int:
        return len(self.elements)

    def moment(self, k: int, l: int) -> Fraction:
        """int z^k zbar^l e^{-2a|z|^2} dA / pi = delta_{kl} k! / (2a)^{k+1}, one variable."""
        if k != l:
            return Fraction(0)
        if k < len(self._moments):
            return self._moments[k]
        return Fraction(factorial(k)) / (2 * self.a) ** (k + 1)

    def pair_monomials(self, left: tuple, right: tuple) -> Fraction:
        """<z^al zb^bl e, z^ar zb^br e> in units of pi^n."""
        (al, bl), (ar, br) = left, right
        out = Fraction(1)
        for j in range(self.n):
            m = self.moment(al[j] + br[j], bl[j] + ar[j])
            if not m:
                return Fraction(0)
            out *= m
        return out

    def pair(self, f: GaussianFun, element: tuple) -> ExactScalar:
        """<f, e_u> exactly; f may exceed the cutoff (moments handle any degree)."""
        out = ExactScalar()
        for key, p in f.terms.items():
            c = p.substitute(self.a)
            if not c:
                continue
            m = self.pair_monomials(key, element)
            if m:
                out = out + c.mul_rational(m)
        return out

    def project_column(self, f: GaussianFun) -> dict[int, ExactScalar]:
        """Sparse exact column of <f, e_u> over the whole dictionary."""
        col: dict[int, ExactScalar] = {}
        n = self.n
        for (alpha, beta), p in f.terms.items():
            c = p.substitute(self.a)
            if not c:
                continue
            charge = tuple(alpha[j] - beta[j] for j in range(n))
            for u in self.charge_groups.get(charge, ()):
                ua, ub = self.elements[u]
                m = Fraction(1)
                for j in range(n):
                    m *= self.moment(alpha[j] + ub[j], beta[j] + ua[j])
                    if not m:
                        break
                if not m:
                    continue
                add = c.mul_rational(m)
                s = col.get(u)
                tot = add if s is None else s + add
                if tot:
                    col[u] = tot
                elif s is not None:
                    del col[u]
        return col

    def gram_exact(self) -> list[list[Fraction]]:
        size = len(self.elements)
        g = [[Fraction(0)] * size for _ in range(size)]
        for i, u in enumerate(self.elements):
            for j in range(i, size):
                val = self.pair_monomials(self.elements[j], u)
                g[j][i] = val
                g[i][j] = val
        return g

    def gram(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.gram_exact()], dtype=float)

    def gaussian(self, idx: int) -> GaussianFun:
        alpha, beta = self.elements[idx]
        return GaussianFun.monomial(self.n, alpha, beta)


def scalar_block_exact(fop: FiberOp, dic: DictionaryBasis) -> list[list[ExactScalar]]:
    """Exact matrix <fop e_v, e_u> of one fiber operator on the dictionary."""
    nd = len(dic)
    zero = ExactScalar()
    out = [[zero] * nd for _ in range(nd)]
    for v in range(nd):
        image = apply_gaussian(fop, dic.gaussian(v))
        if image.is_zero():
            continue
        for u, val in dic.project_column(image).items():
            out[u][v] = out[u][v] + val
    return out


@dataclass
class FiberMatrix:
    """Floated pencil (A, G) for one bidegree block, plus the exact A for audits."""

    n: int
    p: int
    q: int
    xi0: Fraction
    cutoff: int
    components: list[FormBasis]
    dictionary: DictionaryBasis
    a_exact: list[list[ExactScalar]]
    A: np.ndarray = field(default=None)
    G: np.ndarray = field(default=None)

    def __post_init__(self):
        size = len(self.a_exact)
        self.A = np.empty((size, size), dtype=complex)
        for i in range(size):
            row = self.a_exact[i]
            for j in range(size):
                self.A[i, j] = row[j].to_complex()
        gd = self.dictionary.gram()
        self.G = np.kron(np.eye(len(self.components)), gd)

    def hermitian_exact(self) -> bool:
        """Exact check A == A^H before floating."""
        size = len(self.a_exact)
        for i in range(size):
            for j in range(i, size):
                if self.a_exact[i][j] != self.a_exact[j][i].conj():
                    return False
        return True


def assemble_fiber_matrix(
    opm: OpMatrix, p: int, q: int, xi0: Fraction, cutoff: int,
    fiber_entries: dict | None = None,
) -> FiberMatrix:
    """Exact matrix of the transformed operator block on the dictionary.

    `fiber_entries` may carry the symbolic transform of the block (computed
    once per branch) to be reused across xi_0 values and cutoffs.
    """
    xi0 = Fraction(xi0)
    if xi0 == 0:
        raise ValueError("xi_0 = 0 rejected: the fiber degenerates there")
    n = opm.n
    branch = 1 if xi0 > 0 else -1
    a = abs(xi0)
    dic = DictionaryBasis(n, a, cutoff)
    comps = bidegree_basis(n, p, q)
    cidx = {fb: i for i, fb in enumerate(comps)}
    nd = len(dic)
    size = len(comps) * nd
    zero = ExactScalar()
    amat = [[zero] * size for _ in range(size)]

    fib = fiber_entries if fiber_entries is not None else fiber_opmatrix(
        opm.restrict_cols(p, q), branch
    )
    for (row, col), fop in fib.items():
        if row.bidegree != (p, q) or col.bidegree != (p, q):
            raise ValueError("operator does not preserve the requested bidegree")
        if fop.branch != branch:
            raise ValueError("fiber entries were transformed on the other branch")
        block = scalar_block_exact(fop, dic)
        r0, c0 = cidx[row] * nd, cidx[col] * nd
        for u in range(nd):
            brow = block[u]
            arow = amat[r0 + u]
            for v in range(nd):
                if brow[v]:
                    arow[c0 + v] = arow[c0 + v] + brow[v]
    return FiberMatrix(n, p, q, xi0, cutoff, comps, dic, amat)


@dataclass
class SpectralReport:
    n: int
    p: int
    q: int
    xi0: Fraction
    cutoff: int
    eigenvalues: list[float]          # k smallest in magnitude, sorted by |.|
    residuals: list[float]            # relative to ||A|| + |lambda| ||G||
    zero_modes: int
    condition: float
    min_abs: float
    norm_a: float
    threshold: float
    threshold_sensitivity: tuple[int, int]  # zero-mode counts at 10x tighter/looser

    def ok_residuals(self) -> bool:
        return all(r <= RESIDUAL_RELTOL for r in self.residuals)


def spectrum(fm: FiberMatrix, k: int = 6) -> SpectralReport:
    """Generalized Hermitian eigensolve A v = lambda G v with residual audit."""
    cond = float(np.linalg.cond(fm.G))
    if cond > CONDITION_LIMIT:
        raise ValueError(
            f"Gram condition {cond:.3e} exceeds {CONDITION_LIMIT:.0e};"
            " lower the cutoff or re-orthogonalize"
        )
    vals, vecs = eigh(fm.A, fm.G)
    order = np.argsort(np.abs(vals))
    norm_a = float(np.linalg.norm(fm.A, np.inf))
    norm_g = float(np.linalg.norm(fm.G, np.inf))
    sel = order[: min(k, len(vals))]
    eigs, resids = [], []
    for idx in sel:
        v = vecs[:, idx]
        r = float(np.linalg.norm(fm.A @ v - vals[idx] * (fm.G @ v)))
        bound_scale = norm_a + abs(vals[idx]) * norm_g
        eigs.append(float(vals[idx]))
        resids.append(r / bound_scale if bound_scale else r)
    thr = KERNEL_RELTOL * norm_a
    zm = int(np.sum(np.abs(vals) < thr))
    sens = (
        int(np.sum(np.abs(vals) < thr / 10)),
        int(np.sum(np.abs(vals) < thr * 10)),
    )
    return SpectralReport(
        fm.n, fm.p, fm.q, fm.xi0, fm.cutoff,
        eigs, resids, zm, cond,
        float(np.min(np.abs(vals))), norm_a, thr, sens,
    )


def spectral_suite(opm: OpMatrix, blocks, xi0: Fraction, cutoff: int, k: int = 6):
    return [spectrum(assemble_fiber_matrix(opm, p, q, xi0, cutoff), k) for (p, q) in blocks]


# ---------------------------------------------------------------------------
# Fiber index on the truncated Lambda^{*,0} (+) Lambda^{*,n}
# ---------------------------------------------------------------------------


@dataclass
class FiberIndexReport:
    n: int
    xi0: Fraction
    cutoff: int
    dim_ker_plus: int
    dim_ker_minus: int
    index: int
    kernel_dim_lambda: int
    bijection_rank_plus: int     # rank of (1+gamma) on the (*,0)-block kernel
    bijection_rank_minus: int
    conclusive: bool

    def ok(self) -> bool:
        return (
            self.conclusive
            and self.index == 0
            and self.dim_ker_plus == self.dim_ker_minus
            and self.bijection_rank_plus == self.dim_ker_plus
            and self.bijection_rank_minus == self.dim_ker_minus
        )


def _scalar_identity_structure(fib: dict, comps: list[FormBasis]) -> FiberOp | None:
    """If the block is (same scalar operator) x Identity, return the scalar."""
    scalar = None
    for r in comps:
        for c in comps:
            ent = fib.get((r, c))
            if r == c:
                if ent is None:
                    return None
                if scalar is None:
                    scalar = ent
                elif ent != scalar:
                    return None
            elif ent is not None and not ent.is_zero():
                return None
    return scalar


def fiber_index(opm: OpMatrix, xi0: Fraction, cutoff: int) -> FiberIndexReport:
    """dim ker Qhat+ - dim ker Qhat- on the truncated graded fiber.

    The kernel of Qhat on Lambda is gamma-invariant, so the graded kernel
    dimensions are the ranks of the projectors (1 +- gamma)/2 on a kernel
    basis.  Blocks are assembled per bidegree (Qhat preserves bidegree); an
    eigenvalue within a decade of the zero-mode threshold marks the run
    inconclusive.  Blocks of the shape scalar x Identity are eigensolved once
    on the scalar factor (structure verified symbolically beforehand).
    """
    n = opm.n
    xi0 = Fraction(xi0)
    branch = 1 if xi0 > 0 else -1
    offsets = {}
    pos = 0

    blocks = [(p, 0) for p in range(n + 1)] + [(p, n) for p in range(n + 1)]
    scalar_cache: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
    dic = DictionaryBasis(n, abs(xi0), cutoff)
    nd = len(dic)
    gram = dic.gram()

    comp_lists = {}
    for (p, q) in blocks:
        comps = bidegree_basis(n, p, q)
        comp_lists[(p, q)] = comps
        for comp in comps:
            offsets[comp] = pos
            pos += nd
    total = pos

    kernel_vecs: list[np.ndarray] = []
    conclusive = True
    for (p, q) in blocks:
        comps = comp_lists[(p, q)]
        fib = fiber_opmatrix(opm.restrict_cols(p, q), branch)
        scalar = _scalar_identity_structure(fib, comps)
        if scalar is not None:
            cache_key = repr(scalar.op)
            if cache_key not in scalar_cache:
                a_exact = scalar_block_exact(scalar, dic)
                A = np.array([[v.to_complex() for v in row] for row in a_exact])
                vals, vecs = eigh(A, gram)
                scalar_cache[cache_key] = (A, vals, vecs)
            A, vals, vecs = scalar_cache[cache_key]
            thr = KERNEL_RELTOL * float(np.linalg.norm(A, np.inf))
            for idx in range(len(vals)):
                mag = abs(vals[idx])
                if mag < thr:
                    for comp in comps:
                        full = np.zeros(total, dtype=complex)
                        o = offsets[comp]
                        full[o:o + nd] = vecs[:, idx]
                        kernel_vecs.append(full)
                elif mag < 10 * thr:
                    conclusive = False
            continue
        fm = assemble_fiber_matrix(opm, p, q, xi0, cutoff, fiber_entries=fib)
        vals, vecs = eigh(fm.A, fm.G)
        thr = KERNEL_RELTOL * float(np.linalg.norm(fm.A, np.inf))
        for idx in range(len(vals)):
            mag = abs(vals[idx])
            if mag < thr:
                full = np.zeros(total, dtype=complex)
                for ci, comp in enumerate(comps):
                    o = offsets[comp]
                    full[o:o + nd] = vecs[ci * nd:(ci + 1) * nd, idx]
                kernel_vecs.append(full)
            elif mag < 10 * thr:
                conclusive = False

    kdim = len(kernel_vecs)
    gf = gamma_form_matrix(n)
    lam = set(lambda_basis(n))
    gam = np.zeros((total, total), dtype=complex)
    for (row, col), c in gf.items():
        if row in lam and col in lam:
            ro, co = offsets[row], offsets[col]
            gam[ro:ro + nd, co:co + nd] = c.to_complex() * np.eye(nd)

    if kdim:
        K = np.array(kernel_vecs).T                     # total x kdim
        plus = 0.5 * (K + gam @ K)
        minus = 0.5 * (K - gam @ K)
        dim_plus = int(np.linalg.matrix_rank(plus, tol=1e-9))
        dim_minus = int(np.linalg.matrix_rank(minus, tol=1e-9))
    else:
        dim_plus = dim_minus = 0

    # Prop.-6.1-style mechanism: kernel vectors supported on the (*,0) block,
    # pushed through 1 +- gamma, must have ranks equal to the graded kernels.
    star0_vecs = [
        v for v in kernel_vecs
        if _supported_on(v, offsets, nd, lambda fb: fb.q == 0)
    ]
    if star0_vecs:
        S = np.array(star0_vecs).T
        bij_plus = int(np.linalg.matrix_rank(S + gam @ S, tol=1e-9))
        bij_minus = int(np.linalg.matrix_rank(S - gam @ S, tol=1e-9))
    else:
        bij_plus = bij_minus = 0

    return FiberIndexReport(
        n, xi0, cutoff,
        dim_plus, dim_minus, dim_plus - dim_minus,
        kdim, bij_plus, bij_minus, conclusive,
    )


def _supported_on(vec, offsets, nd, pred) -> bool:
    for fb, o in offsets.items():
        seg = vec[o:o + nd]
        if np.linalg.norm(seg) > 1e-9 and not pred(fb):
            return False
    return True
