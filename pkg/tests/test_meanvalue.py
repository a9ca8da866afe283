import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pvbounds import arith, meanvalue
from pvbounds.dirichlet import DirichletCharacter, primitive_characters
from pvbounds.meanvalue import MeanValueInstance, TupleInstance


def loop_mean_value(q, r, V, beta, chi):
    """Triple loop straight from the definition."""
    total = 0.0
    for lam in range(q):
        for mu in range(q):
            s = sum(beta[v - 1] * chi(lam + v) * cmath.exp(2j * math.pi * mu * v / q) for v in range(1, V + 1))
            total += abs(s) ** (2 * r)
    return total / q


def test_instance_validation():
    with pytest.raises(ValueError):
        MeanValueInstance(5, 2, 5)
    with pytest.raises(ValueError):
        MeanValueInstance(5, 2, 2, [1, 2])
    with pytest.raises(ValueError):
        MeanValueInstance(5, 2, 2, [1])
    with pytest.raises(ValueError):
        TupleInstance(7, 2, (1, 2, 3))


def test_tuple_products():
    t = TupleInstance(7, 2, (1, 2, 3, 5))
    assert t.difference_product(0) == (2 - 1) * (3 - 1) * (5 - 1)
    assert t.difference_product_mod_q(3) == t.difference_product(3) % 7
    assert t.nonzero_js() == [0, 1, 2, 3]
    assert TupleInstance(7, 2, (1, 1, 2, 3)).nonzero_js() == [2, 3]


def test_rational_charsum_perfect_cancellation():
    for q in (7, 15, 35):
        for chi in primitive_characters(q)[:4]:
            val = meanvalue.complete_rational_charsum(q, chi, (1, 2, 1, 2))
            expected = sum(1 for lam in range(q) if math.gcd((lam + 1) * (lam + 2), q) == 1)
            assert val == pytest.approx(expected, abs=1e-12)


def test_rational_charsum_direct_and_crt():
    chi = DirichletCharacter(15, (1, 3))
    v = (1, 2, 3, 4)
    direct = sum(chi((l + 1) * (l + 2)) * np.conj(chi((l + 3) * (l + 4))) for l in range(15))
    val = meanvalue.complete_rational_charsum(15, chi, v)
    assert val == pytest.approx(direct, abs=1e-12)
    local = [meanvalue.complete_rational_charsum(p, DirichletCharacter(p, (a,)), v)
             for p, a in ((3, 1), (5, 3))]
    assert val == pytest.approx(local[0] * local[1], abs=1e-12)


def test_weil_bound_examples():
    chi = DirichletCharacter(7, (1,))
    rec = meanvalue.check_weil_bound(7, chi, (1, 2, 3, 4))
    assert rec.status == "pass"
    assert rec.rhs <= 4 * math.sqrt(7) * math.sqrt(7) + 1e-12
    assert meanvalue.check_weil_bound(7, chi, (1, 2, 1, 2)).status == "hypotheses-unmet"
    with pytest.raises(ValueError):
        meanvalue.check_weil_bound(15, DirichletCharacter(15, (1, 0)), (1, 2, 3, 4))


def test_weil_bound_uses_smallest_gcd():
    # A_j for v = (0, 3, 6, 1) mod 15: choose j with gcd 1 when one exists
    rec = meanvalue.check_weil_bound(15, DirichletCharacter(15, (1, 1)), (0, 3, 6, 1))
    gcds = [TupleInstance(15, 2, (0, 3, 6, 1)).gcd_with_q(j) for j in range(4)]
    assert rec.params["gcd"] == min(gcds)


def test_weil_bound_random_tuples():
    rng = random.Random(3)
    for _ in range(500):
        q = rng.choice([15, 21, 33, 35])
        chi = rng.choice(primitive_characters(q))
        while True:
            v = tuple(rng.randrange(1, 20) for _ in range(4))
            if len(set(v)) >= 3:
                break
        assert meanvalue.check_weil_bound(q, chi, v).status == "pass"


def test_mean_value_small_cases():
    q = 7
    chi = DirichletCharacter(q, (1,))
    assert meanvalue.twisted_moment(MeanValueInstance(q, 2, 1), chi) == pytest.approx(arith.phi(q))
    assert meanvalue.twisted_moment(MeanValueInstance(q, 2, 3, np.zeros(3)), chi) == 0
    legendre5 = DirichletCharacter(5, (2,))
    inst = MeanValueInstance(5, 2, 2)
    expected = loop_mean_value(5, 2, 2, [1, 1], legendre5)
    assert meanvalue.twisted_moment(inst, legendre5) == pytest.approx(expected, rel=1e-12)
    assert meanvalue.twisted_moment_naive(inst, legendre5) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([5, 7, 11, 13, 15, 21, 35]), st.integers(2, 3), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_dft_path_matches_triple_loop(q, r, V, seed):
    if V >= q:
        return
    rng = np.random.default_rng(seed)
    beta = np.exp(2j * np.pi * rng.random(V)) * rng.random(V)
    chi = primitive_characters(q)[seed % len(primitive_characters(q))]
    inst = MeanValueInstance(q, r, V, beta)
    assert meanvalue.twisted_moment(inst, chi) == pytest.approx(loop_mean_value(q, r, V, beta, chi), rel=1e-10)


def test_conjugation_symmetry_and_batch():
    q = 35
    chis = primitive_characters(q)
    inst = MeanValueInstance(q, 2, 6)
    batch = meanvalue.twisted_moment_batch(inst, chis)
    for c, b in zip(chis, batch):
        assert meanvalue.twisted_moment(inst, c.conj()) == pytest.approx(b, rel=1e-12)
    assert len(chis) == 3 * 5


def test_moment_bound_examples():
    assert meanvalue.check_moment_bound(MeanValueInstance(5, 2, 2), DirichletCharacter(5, (2,))).status == "pass"
    inst = MeanValueInstance(35, 2, 6)
    assert all(meanvalue.check_moment_bound(inst, c).status == "pass" for c in primitive_characters(35))
    rec = meanvalue.check_moment_bound(MeanValueInstance(7, 2, 1), DirichletCharacter(7, (1,)))
    assert rec.lhs == pytest.approx(6) and rec.rhs > 2 * 7


def test_rhs_formulas():
    q, r, V = 35, 2, 6
    w, t = 4**2, 4.0**4
    expected = 2 * q * V**2 + 2**4 * 2 * w * t * math.sqrt(q) * V**3 + 4**5 * 2 * w * 36 * t * math.sqrt(q) * V**2.5
    assert meanvalue.moment_rhs(q, r, V) == pytest.approx(expected, rel=1e-14)
    expected = 2 * q * V**2 + 4.0**8 * w * t * math.sqrt(q) * V**3
    assert meanvalue.simplified_moment_rhs(q, r, V) == pytest.approx(expected, rel=1e-14)


def test_simplified_moment_bound():
    inst = MeanValueInstance(41, 2, 36)
    assert all(meanvalue.check_simplified_moment_bound(inst, c).status == "pass" for c in primitive_characters(41))
    small = meanvalue.check_simplified_moment_bound(MeanValueInstance(41, 2, 35), DirichletCharacter(41, (1,)))
    assert small.status == "hypotheses-unmet" and "V >= (2r-1)!^2" in small.params["hypothesis"]
    rng = np.random.default_rng(7)
    beta = np.exp(2j * np.pi * rng.random(36))
    inst = MeanValueInstance(101, 2, 36, beta)
    assert meanvalue.check_simplified_moment_bound(inst, DirichletCharacter(101, (7,))).status == "pass"


def test_kernel_examples():
    assert meanvalue.kernel_length(13, 2) == 1
    assert meanvalue.kernel_length(100, 1) == 24
    assert meanvalue.kernel_length(5, 3) == -1
    rec = meanvalue.verify_inverse_kernel(13, 2)
    assert rec.status == "pass" and rec.params["identity_error"] < 1e-12
    assert meanvalue.verify_inverse_kernel(5, 3).status == "hypotheses-unmet"


def test_kernel_large_L():
    V = 3
    q = 100 * V
    rec = meanvalue.verify_inverse_kernel(q, V)
    L = meanvalue.kernel_length(q, V)
    assert rec.status == "pass" and rec.params["max_theta"] <= 1 / (L + 0.5)
    thetas = [meanvalue.inverse_kernel(q, V, v) for v in range(1, V + 1)]
    assert all(t > 0 for t in thetas)


def test_kernel_singular():
    # q = 9, V = 1: L = 1 and (2L+1) v = 3 v; never 0 mod 9 for v = 1, but q = 3 gives L = 0
    q, V = 6, 1
    L = meanvalue.kernel_length(q, V)
    assert L == 1
    rec = meanvalue.verify_inverse_kernel(q, V)
    assert rec.status == "pass"
    # (2L+1) v = 3 v divides q = 3 * something: q = 15, V = 3 gives L = 0 and v = 15 is out of range;
    # q = 18, V = 2 gives L = 1 and v must be a multiple of 6: none in range, pass
    assert meanvalue.verify_inverse_kernel(18, 2).status == "pass"
    singular = [(q, V) for q in range(3, 60) for V in range(1, q // 2 + 1)
                if meanvalue.verify_inverse_kernel(q, V).status == "singular"]
    for q, V in singular:
        L = meanvalue.kernel_length(q, V)
        assert any(((2 * L + 1) * v) % q == 0 for v in range(1, V + 1))
