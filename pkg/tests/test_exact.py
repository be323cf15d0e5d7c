"""Ring laws for the exact scalars and the ordered-index sign calculus."""

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crql.exact import (
    I,
    ONE,
    SQRT2,
    ExactScalar,
    IndexSet,
    complement,
    eps_concat,
    eps_sign,
    tilde_eps,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(ExactScalar, fractions, fractions, fractions, fractions)


# -- brute-force oracles -------------------------------------------------------


def inversion_parity(word):
    """Naive O(len^2) inversion count; the independent sign oracle."""
    inv = sum(
        1 for i in range(len(word)) for k in range(i + 1, len(word)) if word[i] > word[k]
    )
    return -1 if inv & 1 else 1


# -- ExactScalar ---------------------------------------------------------------


def test_unit_identities():
    assert I * I * I * I == ONE
    assert SQRT2 * SQRT2 == ExactScalar(2)
    assert (I * SQRT2) * (I * SQRT2) == ExactScalar(-2)


@settings(max_examples=200)
@given(scalars, scalars, scalars)
def test_ring_laws_hypothesis(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()
    assert a.conj().conj() == a


def test_ring_laws_bulk_samples():
    """At least 10^4 sampled triples through the full law set."""
    rng = random.Random(12345)

    def rand():
        return ExactScalar(
            Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
            Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
            Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
            Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
        )

    for _ in range(10000):
        a, b, c = rand(), rand(), rand()
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a * b).conj() == a.conj() * b.conj()


@settings(max_examples=150)
@given(scalars)
def test_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == ONE


def test_real_sign_exact():
    assert ExactScalar(1, -1).real_sign() == -1        # 1 - sqrt2 < 0
    assert ExactScalar(3, -2).real_sign() == 1         # 3 - 2 sqrt2 > 0
    assert ExactScalar(-3, 2).real_sign() == -1
    assert ExactScalar().real_sign() == 0
    with pytest.raises(ValueError):
        I.real_sign()


def test_json_roundtrip():
    a = ExactScalar(Fraction(3, 7), Fraction(-1, 2), Fraction(5), Fraction(0))
    assert ExactScalar.from_json(a.to_json()) == a


# -- index sets ----------------------------------------------------------------


def test_complement_examples():
    assert IndexSet(2, (1, 2)).complement().elems == ()
    assert IndexSet(3, ()).complement().elems == (1, 2, 3)
    assert IndexSet(3, (2,)).complement().elems == (1, 3)


@pytest.mark.parametrize("n", range(1, 7))
def test_complement_involution(n):
    for p in range(n + 1):
        for J in combinations(range(1, n + 1), p):
            s = IndexSet(n, J)
            assert s.complement().complement() == s


def test_index_set_validation():
    with pytest.raises(ValueError):
        IndexSet(3, (2, 2))
    with pytest.raises(ValueError):
        IndexSet(3, (0,))
    with pytest.raises(ValueError):
        IndexSet(3, (4,))


@pytest.mark.parametrize("n", range(1, 7))
def test_eps_sign_against_oracle(n):
    for p in range(n + 1):
        for J in combinations(range(1, n + 1), p):
            Jc = complement(n, J)
            assert eps_sign(n, J) == inversion_parity(list(J) + list(Jc))


@pytest.mark.parametrize("n", range(1, 7))
def test_eps_sign_complement_law(n):
    for p in range(n + 1):
        for J in combinations(range(1, n + 1), p):
            Jc = complement(n, J)
            assert eps_sign(n, J) * eps_sign(n, Jc) == (-1) ** (p * (n - p))


def test_eps_sign_prefix_is_positive():
    for n in range(1, 7):
        for p in range(n + 1):
            assert eps_sign(n, tuple(range(1, p + 1))) == 1
    assert eps_sign(3, (2,)) == -1


def test_tilde_eps_examples():
    assert tilde_eps(1, (2, 3)) == 1
    assert tilde_eps(3, (1, 2)) == 1
    assert tilde_eps(2, (1, 3)) == -1
    with pytest.raises(ValueError):
        tilde_eps(2, (1, 2))


@pytest.mark.parametrize("n", range(1, 6))
def test_tilde_eps_insertion_oracle(n):
    for q in range(n + 1):
        for K in combinations(range(1, n + 1), q):
            for j in range(1, n + 1):
                if j in K:
                    continue
                assert tilde_eps(j, K) == (-1) ** sorted(K + (j,)).index(j)


@pytest.mark.parametrize("n", range(1, 6))
def test_tilde_eps_chain_relation(n):
    """The permutation chain behind the conjugation lemma, oracle-verified."""
    for q in range(1, n + 1):
        for K in combinations(range(1, n + 1), q):
            Kc = complement(n, K)
            for j in K:
                Kminus = tuple(x for x in K if x != j)
                Kcup = tuple(sorted(Kc + (j,)))
                lhs = eps_concat(K, Kc) * eps_concat(Kcup, Kminus) * tilde_eps(j, Kc)
                assert lhs == (-1) ** (n + n * q) * tilde_eps(j, Kminus)
