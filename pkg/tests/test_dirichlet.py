import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pvbounds import arith
from pvbounds.dirichlet import (DirichletCharacter, character_matrix, enumerate_characters, gauss_sum,
                                is_fundamental_discriminant, is_primitive, kronecker, parity,
                                parity_of_exponents, primitive_characters, verify_fourier_expansion)


def legendre(a, p):
    """Euler's criterion."""
    t = pow(a % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def quadratic(p):
    return DirichletCharacter(p, ((p - 1) // 2,))


def test_counts():
    assert len(enumerate_characters(1)) == 1
    assert len(enumerate_characters(5)) == 4
    assert len(enumerate_characters(15)) == 8
    assert len({tuple(np.round(c.table, 12)) for c in enumerate_characters(30)}) == arith.phi(30)


def test_rejects_non_squarefree():
    with pytest.raises(ValueError):
        enumerate_characters(12)
    with pytest.raises(ValueError):
        DirichletCharacter(7, (6,))


def test_legendre_symbols():
    for p in (3, 5, 7, 11, 13, 101):
        chi = quadratic(p)
        assert [int(round(chi(a).real)) for a in range(p)] == [legendre(a, p) for a in range(p)]
    assert quadratic(5)(2) == -1


def test_primitivity_and_parity():
    chi = DirichletCharacter(15, (1, 0))
    assert not is_primitive(chi)
    assert is_primitive(quadratic(7)) and parity(quadratic(7)) == "odd"
    assert is_primitive(quadratic(5)) and parity(quadratic(5)) == "even"
    assert not primitive_characters(30)


def test_parity_of_exponents_matches_value_at_minus_one():
    for q in (15, 21, 105):
        exps = [c.exponents for c in enumerate_characters(q)]
        par = parity_of_exponents(q, exps)
        for e, p in zip(exps, par):
            assert DirichletCharacter(q, e)(-1).real == pytest.approx(p)


def test_character_matrix_matches_tables():
    chis = enumerate_characters(35)
    mat = character_matrix(35, [c.exponents for c in chis])
    for row, c in zip(mat, chis):
        assert np.allclose(row, c.table, atol=0)


@pytest.mark.parametrize("q", [7, 15, 21, 30, 35, 77, 105])
def test_character_axioms(q):
    for chi in enumerate_characters(q):
        t = chi.table
        units = np.array([math.gcd(n, q) == 1 for n in range(q)])
        assert np.all(t[~units] == 0)
        assert np.allclose(np.abs(t[units]), 1, atol=1e-15)
        for m, n in [(2, 3), (4, q - 1), (5, 8)]:
            assert chi(m * n) == pytest.approx(chi(m) * chi(n), abs=1e-12)
        assert chi(q + 4) == chi(4)


def test_real_characters_are_exactly_real():
    for chi in enumerate_characters(105):
        if chi.is_real:
            assert np.all(chi.table.imag == 0)


@pytest.mark.parametrize("q", [5, 21, 97, 105, 221, 499])
def test_column_orthogonality(q):
    for chi in enumerate_characters(q):
        s = chi.table.sum()
        if chi.is_trivial:
            assert s.real == pytest.approx(arith.phi(q))
        else:
            assert abs(s) < 1e-9


def test_row_orthogonality():
    rng = random.Random(5)
    for q in (15, 77, 143, 195):
        mat = character_matrix(q, [c.exponents for c in enumerate_characters(q)])
        for _ in range(20):
            m, n = rng.randrange(q), rng.randrange(q)
            val = (mat[:, m] * mat[:, n].conj()).sum() / arith.phi(q)
            expected = 1.0 if (m == n and math.gcd(m, q) == 1) else 0.0
            assert abs(val - expected) < 1e-9


def test_conjugate():
    chi = DirichletCharacter(35, (1, 2))
    assert np.allclose(chi.conj().table, chi.table.conj())
    assert chi.label == "q=35;a=1,2"


def test_kronecker_examples():
    assert kronecker(-4, 3) == -1
    assert kronecker(5, 5) == 0
    assert all(kronecker(d, 1) == 1 for d in range(-50, 50))
    assert kronecker(5, 2) == -1 and kronecker(-3, 2) == -1 and kronecker(8, 3) == -1


@settings(max_examples=300, deadline=None)
@given(st.integers(-500, 500), st.sampled_from([3, 5, 7, 11, 13, 17, 19, 23, 29, 31]))
def test_kronecker_at_odd_primes_is_legendre(d, p):
    assert kronecker(d, p) == legendre(d, p)


def test_kronecker_completely_multiplicative_in_n():
    for d in (-23, -4, 5, 12, 13, -7):
        for m in range(1, 40):
            for n in range(1, 40):
                assert kronecker(d, m * n) == kronecker(d, m) * kronecker(d, n)


def test_kronecker_matches_real_characters():
    for d in range(-300, 301):
        if not is_fundamental_discriminant(d) or d % 2 == 0:
            continue
        q = abs(d)
        vals = [kronecker(d, n) for n in range(q)]
        reals = [c for c in primitive_characters(q) if c.is_real]
        assert any(np.array_equal(np.real(c.table).astype(int), vals) for c in reals), d


def test_fundamental_discriminants():
    fund = [d for d in range(-30, 30) if is_fundamental_discriminant(d)]
    assert fund == [-24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 5, 8, 12, 13, 17, 21, 24, 28, 29]


def test_gauss_sum_examples():
    assert gauss_sum(quadratic(5)).value == pytest.approx(math.sqrt(5), abs=1e-12)
    assert gauss_sum(DirichletCharacter(1, ())).value == pytest.approx(1)
    assert gauss_sum(quadratic(3)).value == pytest.approx(1j * math.sqrt(3), abs=1e-12)


def test_gauss_sum_direct_oracle():
    chi = DirichletCharacter(21, (1, 5))
    direct = sum(chi(a) * cmath.exp(2j * math.pi * a / 21) for a in range(1, 22))
    assert gauss_sum(chi).value == pytest.approx(direct, abs=1e-12)


def test_fourier_expansion():
    rec = verify_fourier_expansion(quadratic(5), 2)
    assert rec.status == "pass" and rec.params["error"] < 1e-12
    assert verify_fourier_expansion(quadratic(5), 10).params["error"] < 1e-12
    for chi in primitive_characters(7):
        assert verify_fourier_expansion(chi, 3).status == "pass"
    with pytest.raises(ValueError):
        verify_fourier_expansion(DirichletCharacter(15, (1, 0)), 2)
