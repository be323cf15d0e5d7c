"""Assembly identities for dbar, dbar*, the Kohn Laplacian, and the graded operator."""

import pytest

from crql.exact import ExactScalar
from crql.forms import FormBasis, bidegree_basis, full_basis
from crql.heisenberg import EnvOp, z_field, zbar_field
from crql.opmatrix import (
    OpMatrix,
    build_box,
    build_dbar,
    build_dbar_star,
    build_ql,
    build_ql_prime,
    gamma_opmatrix,
    graded_split,
    lambda_basis,
    exact_rank,
    sum_of_squares,
    verify_prop31,
)


@pytest.mark.parametrize("n", (1, 2, 3))
def test_dbar_squared_zero(n):
    d = build_dbar(n)
    assert d.shifts() <= {(0, 1)}
    assert (d * d).is_zero()


@pytest.mark.parametrize("n", (1, 2, 3))
def test_dbar_star_squared_zero_and_shift(n):
    ds = build_dbar_star(n)
    assert ds.shifts() <= {(0, -1)}
    assert (ds * ds).is_zero()


@pytest.mark.parametrize("n", (1, 2, 3))
def test_dbar_star_equals_adjoint_route(n):
    assert build_dbar_star(n) == build_dbar(n).adjoint()


def test_n1_entries():
    f00, f01 = FormBasis(1, (), ()), FormBasis(1, (), (1,))
    assert build_dbar(1).entry(f01, f00) == zbar_field(1, 1)
    assert build_dbar_star(1).entry(f00, f01) == -z_field(1, 1)
    assert build_box(1).entry(f00, f00) == -z_field(1, 1) * zbar_field(1, 1)


def test_dbar_block_structure():
    d = build_dbar(2)
    for (r, c) in d.entries:
        assert (r.p, r.q) == (c.p, c.q + 1)


@pytest.mark.parametrize("n", (1, 2, 3))
def test_box_self_adjoint(n):
    b = build_box(n)
    assert b.adjoint() == b
    assert b.shifts() <= {(0, 0)}


@pytest.mark.parametrize("n", (1, 2, 3))
def test_ql_identities(n, ql_by_n):
    ql = ql_by_n[n]
    g = gamma_opmatrix(n)
    assert ql.shifts() <= {(0, 0)}
    assert (ql * g + g * ql).is_zero()
    assert ql.adjoint() == ql


@pytest.mark.parametrize("n", (1, 2, 3))
def test_ql_restricted_sum_of_squares(n, ql_by_n):
    ql = ql_by_n[n]
    sq = sum_of_squares(n)
    for p in range(n + 1):
        for col in bidegree_basis(n, p, 0):
            assert ql.entry(col, col) == -sq
        for col in bidegree_basis(n, p, n):
            assert ql.entry(col, col) == sq


def test_ql_n1_function_block(ql_by_n):
    f00 = FormBasis(1, (), ())
    z, zb = z_field(1, 1), zbar_field(1, 1)
    assert ql_by_n[1].entry(f00, f00) == -(z * zb + zb * z)


@pytest.mark.parametrize("n", (1, 2, 3))
def test_prop31_exact(n):
    rep = verify_prop31(n)
    assert rep.exact_match
    assert rep.oh1_match
    assert rep.p0_form_match
    assert rep.pn_form_match
    assert not rep.diff_entries


def test_h5_01_block_matches_printed_matrix(ql_by_n):
    ql = ql_by_n[2]
    b1, b2 = FormBasis(2, (), (1,)), FormBasis(2, (), (2,))
    Z = [None, z_field(2, 1), z_field(2, 2)]
    Zb = [None, zbar_field(2, 1), zbar_field(2, 2)]
    delta = [None] + [Zb[j] * Z[j] + Z[j] * Zb[j] for j in (1, 2)]
    t = (Zb[1] * Z[2] + Z[1] * Zb[2]).scale(2)
    assert ql.entry(b1, b1) == delta[1] - delta[2]
    assert ql.entry(b2, b2) == delta[2] - delta[1]
    assert ql.entry(b1, b2) == t
    assert ql.entry(b2, b1) == t
    # off-block entries on (0,1) columns vanish
    for row in full_basis(2):
        if row.bidegree != (0, 1):
            assert ql.entry(row, b1).is_zero()
            assert ql.entry(row, b2).is_zero()


def test_ql_prime_not_bidegree_symmetric():
    """The ungraded part alone is not gamma-anticommuting; the sandwich is essential."""
    qp = build_ql_prime(2)
    g = gamma_opmatrix(2)
    assert not (qp * g + g * qp).is_zero()


@pytest.mark.parametrize("n", (1, 2, 3))
def test_graded_split(n):
    gs = graded_split(n)
    assert gs.rank_plus == 2 ** n
    assert gs.rank_minus == 2 ** n
    assert gs.off_diagonal
    assert gs.adjoint_pairing
    assert gs.star0_rank_plus == 2 ** n
    assert gs.star0_rank_minus == 2 ** n
    dim = len(gs.basis)
    # P+ P- = 0 and P+ + P- = Id
    for i in range(dim):
        for j in range(dim):
            acc = ExactScalar()
            for k in range(dim):
                acc = acc + gs.p_plus[i][k] * gs.p_minus[k][j]
            assert acc.is_zero()
            s = gs.p_plus[i][j] + gs.p_minus[i][j]
            assert s == (ExactScalar(1) if i == j else ExactScalar())


def test_lambda_basis_layout():
    basis = lambda_basis(2)
    assert len(basis) == 8
    assert all(fb.q == 0 for fb in basis[:4])
    assert all(fb.q == 2 for fb in basis[4:])


def test_exact_rank():
    one = ExactScalar(1)
    z = ExactScalar()
    assert exact_rank([[one, one], [one, one]]) == 1
    assert exact_rank([[one, z], [z, one]]) == 2
    assert exact_rank([[z, z], [z, z]]) == 0


def test_opmatrix_json_schema():
    d = build_dbar(1)
    data = d.to_json()
    assert set(data) == {"n", "basis", "entries"}
    assert data["n"] == 1
    assert len(data["basis"]) == 4
    for e in data["entries"]:
        assert set(e) == {"row", "col", "op"}
        EnvOp.from_json(1, e["op"])  # parses back


def test_restrict_cols():
    ql = build_ql(2)
    sub = ql.restrict_cols(0, 1)
    assert all(c.bidegree == (0, 1) for (_, c) in sub.entries)
    assert sub.entries  # nonempty
