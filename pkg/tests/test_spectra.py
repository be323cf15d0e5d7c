"""Dictionary Gram matrices, fiber spectra, and the graded index on truncations."""

from fractions import Fraction

import numpy as np
import pytest

from crql.spectra import (
    DictionaryBasis,
    assemble_fiber_matrix,
    fiber_index,
    spectrum,
)


def test_gram_example_n1():
    dic = DictionaryBasis(1, Fraction(1), 1)
    assert dic.elements == [((0,), (0,)), ((1,), (0,)), ((0,), (1,))]  # 1, z, zbar
    g = dic.gram_exact()
    assert [g[i][i] for i in range(3)] == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]
    assert g[1][2] == 0 and g[0][1] == 0


def test_gram_moment_oracle():
    """Moments against the polar-coordinates formula k! / (2a)^(k+1)."""
    from math import factorial

    for a in (Fraction(1), Fraction(1, 2), Fraction(3)):
        dic = DictionaryBasis(1, a, 4)
        for k in range(5):
            assert dic.moment(k, k) == Fraction(factorial(k)) / (2 * a) ** (k + 1)
            assert dic.moment(k, k + 1) == 0


def test_gram_positive_definite():
    dic = DictionaryBasis(2, Fraction(1), 3)
    g = dic.gram()
    eigvals = np.linalg.eigvalsh(g)
    assert eigvals.min() > 0


def test_dictionary_rejects_bad_inputs():
    with pytest.raises(ValueError):
        DictionaryBasis(1, Fraction(0), 2)
    with pytest.raises(ValueError):
        DictionaryBasis(1, Fraction(-1), 2)
    with pytest.raises(ValueError):
        DictionaryBasis(1, Fraction(1), -1)


def test_xi0_zero_rejected(ql_by_n):
    with pytest.raises(ValueError):
        assemble_fiber_matrix(ql_by_n[1], 0, 0, Fraction(0), 2)


def test_assembled_block_exactly_hermitian(ql_by_n):
    for (p, q) in ((0, 0), (0, 1)):
        fm = assemble_fiber_matrix(ql_by_n[2], p, q, Fraction(1), 3)
        assert fm.hermitian_exact()


def test_ground_vector_exact_zero_residual(ql_by_n):
    """The pure Gaussian is an exact eigenvector of the function block."""
    fm = assemble_fiber_matrix(ql_by_n[1], 0, 0, Fraction(1), 4)
    e0 = np.zeros(len(fm.dictionary))
    e0[0] = 1.0
    assert np.linalg.norm(fm.A @ e0 - 1.0 * (fm.G @ e0)) < 1e-14


@pytest.mark.parametrize("xi0", (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(2), Fraction(-2)))
def test_h5_01_zero_mode(xi0, ql_by_n):
    fm = assemble_fiber_matrix(ql_by_n[2], 0, 1, xi0, 6)
    rep = spectrum(fm)
    assert rep.min_abs < 1e-10 * rep.norm_a
    assert rep.zero_modes >= 1
    assert rep.ok_residuals()


def test_h5_01_zero_mode_at_every_small_cutoff(ql_by_n):
    """The Gaussian sits in the cutoff-0 dictionary, so the mode persists for all N."""
    for cutoff in (0, 2, 4):
        fm = assemble_fiber_matrix(ql_by_n[2], 0, 1, Fraction(1), cutoff)
        rep = spectrum(fm, k=2)
        assert rep.min_abs < 1e-12 * max(rep.norm_a, 1.0)


@pytest.mark.parametrize("n,p,q", ((1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1),
                                   (2, 0, 0), (2, 1, 0), (2, 2, 0), (2, 0, 2), (2, 2, 2)))
def test_gap_on_graded_blocks(n, p, q, ql_by_n):
    """min |lambda| = n |xi_0| on (p,0) and (p,n): the exact ground-state value."""
    for xi0 in (Fraction(1), Fraction(-2)):
        fm = assemble_fiber_matrix(ql_by_n[n], p, q, xi0, 4)
        rep = spectrum(fm)
        expected = float(n * abs(xi0))
        assert abs(rep.min_abs - expected) < 1e-8 * expected
        assert rep.zero_modes == 0


def test_gap_persists_across_cutoffs(ql_by_n):
    for cutoff in (4, 6, 8):
        fm = assemble_fiber_matrix(ql_by_n[1], 0, 0, Fraction(1), cutoff)
        rep = spectrum(fm)
        assert abs(rep.min_abs - 1.0) < 1e-8


def test_eigenvalues_scale_linearly_in_xi0(ql_by_n):
    ra = spectrum(assemble_fiber_matrix(ql_by_n[1], 0, 1, Fraction(1), 4), k=6)
    rb = spectrum(assemble_fiber_matrix(ql_by_n[1], 0, 1, Fraction(4), 4), k=6)
    for x, y in zip(ra.eigenvalues, rb.eigenvalues):
        assert abs(4 * x - y) < 1e-7 * max(1.0, abs(y))


def test_convergence_between_cutoffs(ql_by_n):
    """Accepted eigenvalues move by < 1e-6 relative between N and N+2."""
    ra = spectrum(assemble_fiber_matrix(ql_by_n[1], 0, 0, Fraction(1), 4), k=3)
    rb = spectrum(assemble_fiber_matrix(ql_by_n[1], 0, 0, Fraction(1), 6), k=3)
    for x, y in zip(sorted(ra.eigenvalues), sorted(rb.eigenvalues)):
        assert abs(x - y) <= 1e-6 * max(1.0, abs(x))


def test_condition_guard():
    from crql.spectra import FiberMatrix, CONDITION_LIMIT  # noqa: F401
    # condition stays graceful at moderate cutoffs
    dic = DictionaryBasis(2, Fraction(1), 6)
    g = dic.gram()
    assert np.linalg.cond(g) < 1e9


@pytest.mark.parametrize("xi0", (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2)))
@pytest.mark.parametrize("cutoff", (4, 6, 8))
def test_fiber_index_vanishes(xi0, cutoff, ql_by_n):
    for n in (1, 2):
        rep = fiber_index(ql_by_n[n], xi0, cutoff)
        assert rep.conclusive
        assert rep.dim_ker_plus == rep.dim_ker_minus == 0
        assert rep.index == 0
        assert rep.bijection_rank_plus == rep.dim_ker_plus
        assert rep.bijection_rank_minus == rep.dim_ker_minus
        assert rep.ok()


def test_threshold_sensitivity_reported(ql_by_n):
    fm = assemble_fiber_matrix(ql_by_n[2], 0, 1, Fraction(1), 4)
    rep = spectrum(fm)
    tighter, looser = rep.threshold_sensitivity
    assert tighter <= rep.zero_modes <= looser
