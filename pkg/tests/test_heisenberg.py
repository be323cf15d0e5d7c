"""PBW algebra, admissible frames, formal adjoints, the parabolic grading."""

import random
from fractions import Fraction

import pytest

from crql.exact import ExactScalar, I
from crql.heisenberg import EnvOp, complex_frame, x0, z_field, zbar_field

MINUS_2I = ExactScalar(0, 0, -2)


def rand_env(rng, n, deg, nterms=3):
    out = EnvOp.zero(n)
    for _ in range(nterms):
        m = [0] * (2 * n + 1)
        for _ in range(rng.randint(0, deg)):
            m[rng.randrange(2 * n + 1)] += 1
        c = ExactScalar(
            Fraction(rng.randint(-3, 3)), 0, Fraction(rng.randint(-3, 3)), 0
        )
        out = out + EnvOp(n, {tuple(m): c})
    return out


# -- bracket relations -----------------------------------------------------------


@pytest.mark.parametrize("n", (1, 2, 3))
def test_generator_brackets(n):
    X = [EnvOp.generator(n, k) for k in range(2 * n + 1)]
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            expect = X[0].scale(-2) if j == k else EnvOp.zero(n)
            assert X[j].commutator(X[n + k]) == expect
            assert X[j].commutator(X[k]).is_zero()
            assert X[n + j].commutator(X[n + k]).is_zero()
        assert X[0].commutator(X[j]).is_zero()
        assert X[0].commutator(X[n + j]).is_zero()


def test_x0_central_against_general_elements():
    rng = random.Random(3)
    for _ in range(20):
        a = rand_env(rng, 2, 4)
        assert (x0(2) * a) == (a * x0(2))


def test_associativity_example():
    n = 1
    X1, X2 = EnvOp.generator(1, 1), EnvOp.generator(1, 2)
    assert (X1 * X1) * X2 == X1 * (X1 * X2)


@pytest.mark.parametrize("n", (1, 2, 3))
def test_associativity_random(n):
    rng = random.Random(100 + n)
    for _ in range(40):
        a, b, c = (rand_env(rng, n, 4) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_normal_form_confluence():
    """Different association orders of a generator word give one normal form."""
    rng = random.Random(11)
    n = 2
    for _ in range(40):
        word = [rng.randrange(2 * n + 1) for _ in range(rng.randint(2, 6))]
        results = []
        for _ in range(4):
            ops = [EnvOp.generator(n, g) for g in word]
            while len(ops) > 1:
                i = rng.randrange(len(ops) - 1)
                ops[i:i + 2] = [ops[i] * ops[i + 1]]
            results.append(ops[0])
        assert all(r == results[0] for r in results)


def test_weyl_straightening_coefficients():
    # X_{n+1}^2 X_1^2 = X_1^2 X_{n+1}^2 + 4 (2 X_0) X_1 X_{n+1} + 2 (2 X_0)^2
    n = 1
    D, x = EnvOp.generator(n, 2), EnvOp.generator(n, 1)
    lhs = D * D * x * x
    X0 = x0(n)
    rhs = (
        x * x * D * D
        + (x * D * X0).scale(8)
        + (X0 * X0).scale(8)
    )
    assert lhs == rhs


# -- frames ------------------------------------------------------------------------


@pytest.mark.parametrize("n", (1, 2, 3, 4))
def test_complex_frame_brackets(n):
    fr = complex_frame(n)
    for j in range(1, n + 1):
        assert fr["Zbar"][j] == fr["Z"][j].conj()
        assert fr["Z"][j].conj().conj() == fr["Z"][j]
        for k in range(1, n + 1):
            br = fr["Z"][j].commutator(fr["Zbar"][k])
            expect = x0(n).scale(MINUS_2I) if j == k else EnvOp.zero(n)
            assert br == expect
            assert fr["Z"][j].commutator(fr["Z"][k]).is_zero()
            assert fr["Zbar"][j].commutator(fr["Zbar"][k]).is_zero()


def test_h5_mixed_brackets_vanish():
    assert z_field(2, 1).commutator(zbar_field(2, 2)).is_zero()
    assert z_field(2, 2).commutator(zbar_field(2, 1)).is_zero()


# -- formal adjoint ------------------------------------------------------------------


def test_adjoint_conventions():
    n = 2
    assert EnvOp.generator(n, 1).adjoint() == -EnvOp.generator(n, 1)
    assert EnvOp.generator(n, 0).adjoint() == -EnvOp.generator(n, 0)
    assert z_field(n, 1).adjoint() == -zbar_field(n, 1)
    prod = z_field(n, 1) * zbar_field(n, 1)
    assert prod.adjoint() == prod
    ix0 = x0(n).scale(I)
    assert ix0.adjoint() == ix0


def test_adjoint_anti_homomorphism():
    rng = random.Random(5)
    n = 2
    for _ in range(60):
        a, b = rand_env(rng, n, 3, 2), rand_env(rng, n, 3, 2)
        assert (a * b).adjoint() == b.adjoint() * a.adjoint()
        assert a.adjoint().adjoint() == a


def test_adjoint_antilinear():
    a = EnvOp.generator(1, 1).scale(I)
    assert a.adjoint() == EnvOp.generator(1, 1).scale(I)  # conj(i)*(-X) = i X


# -- grading -------------------------------------------------------------------------


def test_heisenberg_order_examples():
    assert x0(1).heisenberg_order() == 2
    op = z_field(1, 1) * zbar_field(1, 1)
    assert op.heisenberg_order() == 2
    assert op.leading_part() == op
    m = EnvOp.generator(2, 1) * EnvOp.generator(2, 2) + EnvOp.generator(2, 3)
    assert m.heisenberg_order() == 2
    assert m.leading_part() == EnvOp.generator(2, 1) * EnvOp.generator(2, 2)
    with pytest.raises(ValueError):
        EnvOp.zero(1).heisenberg_order()


def test_order_additivity_on_homogeneous():
    rng = random.Random(17)
    n = 2

    def rand_homog(w):
        out = EnvOp.zero(n)
        for _ in range(2):
            m = [0] * (2 * n + 1)
            budget = w
            while budget >= 2 and rng.random() < 0.4:
                m[2 * n] += 1
                budget -= 2
            for _ in range(budget):
                m[rng.randrange(2 * n)] += 1
            out = out + EnvOp(n, {tuple(m): ExactScalar(Fraction(rng.randint(1, 3)))})
        return out

    for _ in range(50):
        a, b = rand_homog(rng.randint(1, 3)), rand_homog(rng.randint(1, 4))
        assert (a * b).heisenberg_order() == a.heisenberg_order() + b.heisenberg_order()


def test_oh1_predicate():
    n = 1
    assert EnvOp.one(n).is_oh1()
    assert EnvOp.generator(n, 1).is_oh1()
    assert not x0(n).is_oh1()
    assert not (EnvOp.generator(n, 1) * EnvOp.generator(n, 2)).is_oh1()


def test_envop_json_roundtrip():
    op = z_field(2, 1) * zbar_field(2, 2) + x0(2).scale(I)
    assert EnvOp.from_json(2, op.to_json()) == op
