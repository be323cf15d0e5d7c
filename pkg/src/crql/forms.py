"""Bigraded covectors theta^{J,Kbar}, wedge/interior operators, star and gamma.

Conventions (fixed across the whole engine):

* wedge_eps(j) inserts j into the antiholomorphic block K with the insertion
  sign teps(j, K); interior_iota(j) removes j from K with teps(j, K\\{j}).
  Neither carries a (-1)^p crossing sign over the holomorphic block; the two
  are then exact adjoints for the orthonormal basis, which is validated
  globally by tests.  ("j not in K" is the membership test for the wedge.)
* gamma acts on basis covectors by the closed form consistent with
  gamma = i^{n+(p+q)^2} star, i.e. including the i^{2n} factor, and a test
  asserts equality of the closed form with the star route.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .exact import (
    ONE,
    ExactScalar,
    complement,
    eps_sign,
    tilde_eps,
)


@dataclass(frozen=True)
class FormBasis:
    """Basis covector theta^{J,Kbar} of Lambda^{p,q} with p=|J|, q=|K|."""

    n: int
    J: tuple[int, ...]
    K: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "J", tuple(self.J))
        object.__setattr__(self, "K", tuple(self.K))
        for block in (self.J, self.K):
            prev = 0
            for e in block:
                if not (1 <= e <= self.n) or e <= prev:
                    raise ValueError(f"bad index block {block} for n={self.n}")
                prev = e

    @property
    def p(self) -> int:
        return len(self.J)

    @property
    def q(self) -> int:
        return len(self.K)

    @property
    def bidegree(self) -> tuple[int, int]:
        return (len(self.J), len(self.K))

    def sort_key(self):
        return (len(self.J), len(self.K), self.J, self.K)

    def to_json(self) -> dict:
        return {"J": list(self.J), "K": list(self.K)}

    def __repr__(self) -> str:
        j = ",".join(map(str, self.J))
        k = ",".join(map(str, self.K))
        return f"th[{j}|{k}]"


def bidegree_basis(n: int, p: int, q: int) -> list[FormBasis]:
    """Basis of Lambda^{p,q} in (J lex, K lex) order."""
    return [
        FormBasis(n, J, K)
        for J in combinations(range(1, n + 1), p)
        for K in combinations(range(1, n + 1), q)
    ]


def full_basis(n: int) -> list[FormBasis]:
    """Basis of Lambda^{*,*} in the serialization order (p, q, J lex, K lex)."""
    out = []
    for p in range(n + 1):
        for q in range(n + 1):
            out.extend(bidegree_basis(n, p, q))
    return out


class FormVector:
    """Finite ExactScalar-linear combination of basis covectors (mixed bidegree allowed)."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: dict[FormBasis, ExactScalar] | None = None):
        self.n = n
        self._terms: dict[FormBasis, ExactScalar] = {}
        if terms:
            for fb, c in terms.items():
                if fb.n != n:
                    raise ValueError("mixed CR dimension in FormVector")
                if c:
                    self._terms[fb] = c

    @classmethod
    def zero(cls, n: int) -> FormVector:
        return cls(n)

    @classmethod
    def basis(cls, fb: FormBasis) -> FormVector:
        return cls(fb.n, {fb: ONE})

    @classmethod
    def unit(cls, n: int) -> FormVector:
        return cls.basis(FormBasis(n, (), ()))

    def terms(self):
        return self._terms.items()

    def coefficient(self, fb: FormBasis) -> ExactScalar:
        return self._terms.get(fb, ExactScalar())

    def is_zero(self) -> bool:
        return not self._terms

    def bidegrees(self) -> set[tuple[int, int]]:
        return {fb.bidegree for fb in self._terms}

    def homogeneous_bidegree(self) -> tuple[int, int]:
        degs = self.bidegrees()
        if len(degs) != 1:
            raise ValueError(f"form is not bidegree-homogeneous: {degs}")
        return degs.pop()

    def __add__(self, other: FormVector) -> FormVector:
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        out = dict(self._terms)
        for fb, c in other._terms.items():
            s = out.get(fb)
            c = c if s is None else s + c
            if c:
                out[fb] = c
            elif s is not None:
                del out[fb]
        return FormVector(self.n, out)

    def __neg__(self) -> FormVector:
        return FormVector(self.n, {fb: -c for fb, c in self._terms.items()})

    def __sub__(self, other: FormVector) -> FormVector:
        return self + (-other)

    def scale(self, c) -> FormVector:
        if not isinstance(c, ExactScalar):
            c = ExactScalar.from_rational(c)
        if not c:
            return FormVector(self.n)
        return FormVector(self.n, {fb: c * v for fb, v in self._terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FormVector)
            and self.n == other.n
            and self._terms == other._terms
        )

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(
            f"{c!r}{fb!r}" for fb, c in sorted(self._terms.items(), key=lambda t: t[0].sort_key())
        )


def inner_product(a: FormVector, b: FormVector) -> ExactScalar:
    """Orthonormal-basis pairing, linear in the first slot, conjugate in the second."""
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    out = ExactScalar()
    small, big = (a, b) if len(a._terms) <= len(b._terms) else (b, a)
    for fb, c in small._terms.items():
        d = big._terms.get(fb)
        if d is not None:
            out = out + (c * d.conj() if small is a else d * c.conj())
    return out


# ---------------------------------------------------------------------------
# Basis operators
# ---------------------------------------------------------------------------


def _check_index(n: int, j: int):
    if not (1 <= j <= n):
        raise ValueError(f"index {j} outside 1..{n}")


def wedge_eps(j: int, omega: FormVector) -> FormVector:
    """Exterior multiplication by theta^{jbar} with the insertion sign."""
    _check_index(omega.n, j)
    out: dict[FormBasis, ExactScalar] = {}
    for fb, c in omega.terms():
        if j in fb.K:
            continue
        sign = tilde_eps(j, fb.K)
        newK = tuple(sorted(fb.K + (j,)))
        target = FormBasis(fb.n, fb.J, newK)
        add = c if sign == 1 else -c
        prev = out.get(target)
        tot = add if prev is None else prev + add
        if tot:
            out[target] = tot
        elif prev is not None:
            del out[target]
    return FormVector(omega.n, out)


def interior_iota(j: int, omega: FormVector) -> FormVector:
    """Interior product removing j from the antiholomorphic block; adjoint of wedge_eps(j)."""
    _check_index(omega.n, j)
    out: dict[FormBasis, ExactScalar] = {}
    for fb, c in omega.terms():
        if j not in fb.K:
            continue
        newK = tuple(x for x in fb.K if x != j)
        sign = tilde_eps(j, newK)
        target = FormBasis(fb.n, fb.J, newK)
        add = c if sign == 1 else -c
        prev = out.get(target)
        tot = add if prev is None else prev + add
        if tot:
            out[target] = tot
        elif prev is not None:
            del out[target]
    return FormVector(omega.n, out)


def _star_coeff(fb: FormBasis) -> ExactScalar:
    n, p, q = fb.n, fb.p, fb.q
    exp = (n * (n - 1)) // 2 + q * (n - p)
    c = ExactScalar.i_power(n)
    if exp % 2:
        c = -c
    s = eps_sign(n, fb.J) * eps_sign(n, fb.K)
    return c if s == 1 else -c


def hodge_star(omega: FormVector) -> FormVector:
    """star theta^{J,Kbar} = i^n (-1)^{n(n-1)/2+q(n-p)} eps(J,Jc) eps(K,Kc) theta^{Jc,Kcbar}."""
    out: dict[FormBasis, ExactScalar] = {}
    for fb, c in omega.terms():
        target = FormBasis(fb.n, complement(fb.n, fb.J), complement(fb.n, fb.K))
        out[target] = _star_coeff(fb) * c
    return FormVector(omega.n, out)


def gamma(omega: FormVector) -> FormVector:
    """Chirality operator: i^{n+(p+q)^2} star on Lambda^{p,q}, as a basis closed form."""
    out: dict[FormBasis, ExactScalar] = {}
    for fb, c in omega.terms():
        pre = ExactScalar.i_power(fb.n + (fb.p + fb.q) ** 2)
        target = FormBasis(fb.n, complement(fb.n, fb.J), complement(fb.n, fb.K))
        out[target] = pre * _star_coeff(fb) * c
    return FormVector(omega.n, out)


def gamma_via_star(omega: FormVector) -> FormVector:
    """gamma computed literally as i^{n+(p+q)^2} * star, for the two-route test."""
    out = FormVector.zero(omega.n)
    for fb, c in omega.terms():
        piece = hodge_star(FormVector(omega.n, {fb: c}))
        out = out + piece.scale(ExactScalar.i_power(fb.n + (fb.p + fb.q) ** 2))
    return out


def wedge_basis(a: FormBasis, b: FormBasis) -> tuple[int, FormBasis] | None:
    """theta^{J,Kbar} ^ theta^{J',K'bar} as (sign, basis), or None when blocks collide.

    The J' block crosses the Kbar block ((-1)^{|J'| |K|}), then each block pair
    is merged by its concatenation signature.
    """
    if set(a.J) & set(b.J) or set(a.K) & set(b.K):
        return None
    from .exact import eps_concat

    sign = (-1) ** (len(b.J) * len(a.K))
    sign *= eps_concat(a.J, b.J) * eps_concat(a.K, b.K)
    return sign, FormBasis(a.n, tuple(sorted(a.J + b.J)), tuple(sorted(a.K + b.K)))


def wedge(u: FormVector, v: FormVector) -> FormVector:
    """Exterior product extended bilinearly; the oracle behind the star checks."""
    if u.n != v.n:
        raise ValueError("dimension mismatch")
    out = FormVector.zero(u.n)
    for fa, ca in u.terms():
        for fb, cb in v.terms():
            merged = wedge_basis(fa, fb)
            if merged is None:
                continue
            sign, target = merged
            c = ca * cb
            out = out + FormVector(u.n, {target: c if sign == 1 else -c})
    return out


def underline(omega: FormVector) -> FormVector:
    """Antilinear involution fixing the admissible coframe: conjugate coefficients."""
    return FormVector(omega.n, {fb: c.conj() for fb, c in omega.terms()})


def volume_form(n: int) -> FormVector:
    """v_H = i^n theta^1 ^ theta^{1bar} ^ ... = i^n (-1)^{n(n-1)/2} theta^{N,Nbar}."""
    c = ExactScalar.i_power(n)
    if ((n * (n - 1)) // 2) % 2:
        c = -c
    top = FormBasis(n, tuple(range(1, n + 1)), tuple(range(1, n + 1)))
    return FormVector(n, {top: c})


# ---------------------------------------------------------------------------
# Operator matrices over the form basis and the conjugation identities
# ---------------------------------------------------------------------------


def operator_matrix(func, n: int) -> dict[tuple[FormBasis, FormBasis], ExactScalar]:
    """Matrix of a linear map on Lambda^{*,*} over the full basis (sparse dict)."""
    mat: dict[tuple[FormBasis, FormBasis], ExactScalar] = {}
    for col in full_basis(n):
        image = func(FormVector.basis(col))
        for row, c in image.terms():
            mat[(row, col)] = c
    return mat


def matrices_equal(m1, m2) -> bool:
    keys = set(m1) | set(m2)
    z = ExactScalar()
    return all(m1.get(k, z) == m2.get(k, z) for k in keys)


@dataclass(frozen=True)
class ConjugationIdentity:
    """A matched closed form gamma . A . gamma = scalar * B on Lambda^{*,*}."""

    source: str
    target: str
    j: int
    k: int | None
    scalar: ExactScalar
    n: int

    def describe(self) -> str:
        c = self.scalar
        return f"gamma {self.source} gamma = {c!r} * {self.target}   (n={self.n})"


_UNITS = [
    ONE,
    -ONE,
    ExactScalar.i_power(1),
    -ExactScalar.i_power(1),
]


def _match_unit_multiple(mat, candidates, n):
    """Find the unique (name, unit) with mat == unit * candidate matrix."""
    hits = []
    for name, cand in candidates:
        cmat = operator_matrix(cand, n)
        for u in _UNITS:
            scaled = {k: u * v for k, v in cmat.items()}
            if matrices_equal(mat, scaled):
                hits.append((name, u))
    if len(hits) != 1:
        raise ValueError(f"expected a unique unit-scalar match, found {hits}")
    return hits[0]


def gamma_conjugate_wedge(n: int, j: int) -> ConjugationIdentity:
    """Machine-derive gamma eps(theta^{jbar}) gamma as a unit multiple of an interior product."""
    mat = operator_matrix(lambda w: gamma(wedge_eps(j, gamma(w))), n)
    candidates = [
        (f"iota(theta^{k})", (lambda w, k=k: interior_iota(k, w)))
        for k in range(1, n + 1)
    ]
    name, unit = _match_unit_multiple(mat, candidates, n)
    return ConjugationIdentity(f"eps(theta^{j}bar)", name, j, None, unit, n)


def gamma_conjugate_iota(n: int, j: int) -> ConjugationIdentity:
    """Machine-derive gamma iota(theta^j) gamma as a unit multiple of a wedge."""
    mat = operator_matrix(lambda w: gamma(interior_iota(j, gamma(w))), n)
    candidates = [
        (f"eps(theta^{k}bar)", (lambda w, k=k: wedge_eps(k, w)))
        for k in range(1, n + 1)
    ]
    name, unit = _match_unit_multiple(mat, candidates, n)
    return ConjugationIdentity(f"iota(theta^{j})", name, j, None, unit, n)


def gamma_conjugate_composite(n: int, j: int, k: int) -> bool:
    """Check gamma eps(theta^{jbar}) iota(theta^k) gamma == iota(theta^j) eps(theta^{kbar})."""
    lhs = operator_matrix(
        lambda w: gamma(wedge_eps(j, interior_iota(k, gamma(w)))), n
    )
    rhs = operator_matrix(lambda w: interior_iota(j, wedge_eps(k, w)), n)
    return matrices_equal(lhs, rhs)


def gamma_conjugate_composite_rev(n: int, j: int, k: int) -> bool:
    """Check gamma iota(theta^j) eps(theta^{kbar}) gamma == eps(theta^{jbar}) iota(theta^k)."""
    lhs = operator_matrix(
        lambda w: gamma(interior_iota(j, wedge_eps(k, gamma(w)))), n
    )
    rhs = operator_matrix(lambda w: wedge_eps(j, interior_iota(k, w)), n)
    return matrices_equal(lhs, rhs)
