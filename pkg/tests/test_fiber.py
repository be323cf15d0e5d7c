"""Fiber transform, oscillator decomposition, kernel witnesses, inverse transform."""

import math
import random
from fractions import Fraction

import pytest

from crql.exact import ExactScalar, I
from crql.fiber import (
    CLOSED_FORM_SIGN,
    FiberOp,
    GaussianFun,
    apply_gaussian,
    closed_form_u,
    closed_form_u_exact,
    default_fourier_points,
    fiber_envop,
    fiber_x0,
    fiber_zbarhat,
    fiber_zhat,
    ground_state_report,
    half_line_cos_laplace,
    inverse_fourier_check,
    inverse_fourier_quad,
    kernel_witness_check,
    oscillator_decompose,
    oscillator_h,
    rotation_r,
    t_hat,
    witness_form,
    xi0_poly,
)
from crql.heisenberg import EnvOp, x0, z_field, zbar_field
from crql.polyop import APoly, PolyOp


def rand_env(rng, n, deg):
    out = EnvOp.zero(n)
    for _ in range(2):
        m = [0] * (2 * n + 1)
        for _ in range(rng.randint(0, deg)):
            m[rng.randrange(2 * n + 1)] += 1
        out = out + EnvOp(
            n, {tuple(m): ExactScalar(Fraction(rng.randint(-2, 2)), 0, Fraction(rng.randint(-2, 2)))}
        )
    return out


# -- generator images ------------------------------------------------------------


@pytest.mark.parametrize("branch", (1, -1))
@pytest.mark.parametrize("n", (1, 2, 3))
def test_frame_images_match_printed_forms(n, branch):
    inv = ExactScalar(0, Fraction(1, 2))  # 1/sqrt2
    for j in range(1, n + 1):
        want = PolyOp.d_z(n, j).scale(APoly.const(inv)) + PolyOp.z_mult(n, j, bar=True).scale(
            APoly.a_power(1, -branch * inv)
        )
        assert fiber_envop(z_field(n, j), branch).op == want
        wantb = PolyOp.d_z(n, j, bar=True).scale(APoly.const(inv)) + PolyOp.z_mult(n, j).scale(
            APoly.a_power(1, branch * inv)
        )
        assert fiber_envop(zbar_field(n, j), branch).op == wantb


@pytest.mark.parametrize("branch", (1, -1))
def test_commutator_consistency(branch):
    """fiber(-2i X_0) == [Zhat_1, Zhat_1bar] == xi_0, forced by fiber(X_0) = i xi_0/2."""
    lhs = fiber_envop(x0(2).scale(ExactScalar(0, 0, -2)), branch)
    rhs = fiber_zhat(2, 1, branch).commutator(fiber_zbarhat(2, 1, branch))
    xi = FiberOp(2, branch, PolyOp.constant(2, xi0_poly(branch)))
    assert lhs == rhs == xi
    assert fiber_x0(2, branch).op == PolyOp.constant(2, APoly.a_power(1, I * Fraction(branch, 2)))


def test_fiber_of_scalar_is_scalar():
    one = EnvOp.one(2)
    assert fiber_envop(one, 1).op == PolyOp.one(2)


def test_homomorphism_on_random_pairs():
    rng = random.Random(7)
    count = 0
    for n in (1, 2, 3):
        for _ in range(34):
            a, b = rand_env(rng, n, 3), rand_env(rng, n, 3)
            s = rng.choice((1, -1))
            assert fiber_envop(a * b, s) == fiber_envop(a, s) * fiber_envop(b, s)
            count += 1
    assert count >= 100


def test_branch_mixing_rejected():
    zp = fiber_zhat(1, 1, 1)
    zm = fiber_zhat(1, 1, -1)
    with pytest.raises(ValueError):
        zp * zm


# -- oscillator decomposition -------------------------------------------------------


@pytest.mark.parametrize("branch", (1, -1))
@pytest.mark.parametrize("j", (1, 2))
def test_oscillator_decomposition(branch, j):
    rep = oscillator_decompose(2, j, branch)
    assert rep.lowering_ok and rep.raising_ok and rep.commutator_ok
    assert rep.diff_lowering is None and rep.diff_raising is None


@pytest.mark.parametrize("branch", (1, -1))
def test_product_difference_is_2xi(branch):
    zh, zbh = fiber_zhat(2, 1, branch), fiber_zbarhat(2, 1, branch)
    diff = (zh * zbh).scale(2) - (zbh * zh).scale(2)
    assert diff == FiberOp(2, branch, PolyOp.constant(2, xi0_poly(branch))).scale(2)


# -- Gaussian class --------------------------------------------------------------------


def test_gaussian_derivative_rule():
    u = GaussianFun.ground(1)
    img = apply_gaussian(PolyOp.d_z(1, 1), u)
    assert img == GaussianFun.monomial(1, (0,), (1,), APoly.a_power(1, -1))


@pytest.mark.parametrize("branch", (1, -1))
def test_gaussian_closure_spot_checks(branch):
    """Order <= 4 operators keep degree <= 6 elements in the Gaussian class."""
    rng = random.Random(23)
    ops = [
        oscillator_h(2, 1, branch),
        rotation_r(2, 2, branch),
        t_hat(branch),
        (fiber_zhat(2, 1, branch) * fiber_zbarhat(2, 2, branch)) ** 2,
    ]
    for _ in range(10):
        alpha = tuple(rng.randint(0, 2) for _ in range(2))
        beta = tuple(rng.randint(0, 1) for _ in range(2))
        f = GaussianFun.monomial(2, alpha, beta)
        for op in ops:
            g = apply_gaussian(op, f)
            assert isinstance(g, GaussianFun)
            assert g.max_degree() <= sum(alpha) + sum(beta) + 4


# -- ground state and witnesses ----------------------------------------------------------


@pytest.mark.parametrize("branch", (1, -1))
def test_ground_state_relations(branch):
    rep = ground_state_report(branch)
    assert rep.h_eigenvalue == APoly.a_power(1, -1)  # machine-derived -|xi_0|
    assert rep.h_difference_zero
    assert rep.r_zero
    assert rep.t_zero
    assert rep.lowering_annihilates == (branch == -1)
    assert rep.raising_annihilates == (branch == 1)


def test_annihilation_branch_determination():
    """(d/dz - zbar xi)uhat = -(a + xi) zbar uhat: zero exactly on the negative branch."""
    for s in (1, -1):
        u = GaussianFun.ground(1)
        lower = PolyOp.d_z(1, 1) + PolyOp.z_mult(1, 1, bar=True).scale(APoly.a_power(1, -s))
        img = apply_gaussian(lower, u)
        if s == -1:
            assert img.is_zero()
        else:
            assert img == GaussianFun.monomial(1, (0,), (1,), APoly.a_power(1, -2))


@pytest.mark.parametrize("branch", (1, -1))
def test_kernel_witnesses(branch, ql_by_n):
    rep = kernel_witness_check(branch, ql_by_n[2])
    assert rep.results == {(0, 1): True, (1, 1): True, (2, 1): True}
    assert rep.sanity_nonzero_00
    assert rep.ok()


def test_witness_form_layout():
    assert witness_form(0, 1).J == ()
    assert witness_form(1, 1).J == (1,)
    assert witness_form(2, 1).J == (1, 2)
    with pytest.raises(ValueError):
        witness_form(0, 2)


def test_00_sanity_value(ql_by_n):
    """Qhat on functions multiplies uhat by 2a (nonzero eigenvalue, n = 2)."""
    from crql.fiber import fiber_opmatrix
    from crql.forms import FormBasis

    f00 = FormBasis(2, (), ())
    for s in (1, -1):
        ent = fiber_opmatrix(ql_by_n[2].restrict_cols(0, 0), s)[(f00, f00)]
        img = apply_gaussian(ent, GaussianFun.ground(2))
        assert img == GaussianFun.ground(2).scale(APoly.a_power(1, 2))


# -- inverse transform ------------------------------------------------------------------


def test_half_line_cos_laplace():
    assert half_line_cos_laplace(Fraction(1), Fraction(0)) == Fraction(1)
    assert half_line_cos_laplace(Fraction(2), Fraction(3)) == Fraction(2, 13)
    with pytest.raises(ValueError):
        half_line_cos_laplace(Fraction(0), Fraction(1))


def test_derived_sign_is_positive():
    assert CLOSED_FORM_SIGN == 1
    assert closed_form_u(0.0, 1.0) == pytest.approx(1 / math.pi, rel=1e-15)
    assert closed_form_u(1.0, 1.0) == pytest.approx(1 / (2 * math.pi), rel=1e-15)


def test_quadrature_matches_closed_form_and_refutes_negated_form():
    uq, err = inverse_fourier_quad(0.0, 1.0)
    assert abs(uq - 1 / math.pi) < 1e-10
    assert abs(uq - (-1 / math.pi)) > 0.5  # the sign-flipped variant is far off
    uq2, _ = inverse_fourier_quad(1.0, 1.0)
    assert abs(uq2 - 1 / (2 * math.pi)) < 1e-10


def test_inverse_fourier_check_suite():
    pts = default_fourier_points(24)
    assert len(pts) >= 20
    rep = inverse_fourier_check(pts, tol=1e-8)
    assert rep.ok()
    assert rep.max_rel_err < 1e-10


def test_quadrature_refinement_stability():
    """Tightening the truncation changes results below 1e-10."""
    for (x0v, zn) in ((0.5, 1.0), (2.0, 0.25), (-1.0, 2.0)):
        a, ea = inverse_fourier_quad(x0v, zn, rel_tol=1e-10)
        b, eb = inverse_fourier_quad(x0v, zn, rel_tol=1e-14)
        assert abs(a - b) < 1e-10


def test_origin_rejected():
    with pytest.raises(ValueError):
        inverse_fourier_quad(0.0, 0.0)


def test_parabolic_homogeneity_exact():
    rng = random.Random(9)
    for _ in range(10):
        x0v = Fraction(rng.randint(-8, 8), rng.randint(1, 5))
        zn = Fraction(rng.randint(1, 9), rng.randint(1, 5))
        t = Fraction(rng.randint(1, 6), rng.randint(1, 4))
        assert closed_form_u_exact(t * t * x0v, t * t * zn) == closed_form_u_exact(x0v, zn) / (t * t)


def test_homogeneity_float_within_1e12():
    rng = random.Random(10)
    for _ in range(10):
        x0v = rng.uniform(-3, 3)
        r = rng.uniform(0.3, 2.0)
        t = 2.0
        lhs = closed_form_u(t * t * x0v, (t * r) ** 2)
        rhs = closed_form_u(x0v, r * r) / (t * t)
        assert abs(lhs - rhs) <= 1e-12 * abs(rhs)
