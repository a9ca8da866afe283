import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pvbounds import arith, congruence
from pvbounds.congruence import CongruenceCountInstance as Inst


def test_sieve_examples():
    count, rec = congruence.sieve_count(30, 100)
    assert count == 26 == sum(1 for u in range(1, 101) if math.gcd(u, 30) == 1)
    assert rec.lhs == pytest.approx(2 / 3) and rec.rhs == 8 and rec.status == "pass"
    count, rec = congruence.sieve_count(30, 0)
    assert count == 0 and rec.lhs == 0
    assert congruence.sieve_count(1, 57)[0] == 57
    with pytest.raises(ValueError):
        congruence.coprime_count(0, 5)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5000), st.integers(0, 3000))
def test_coprime_count_against_gcd_scan(q, U):
    assert congruence.coprime_count(q, U) == sum(1 for u in range(1, U + 1) if math.gcd(u, q) == 1)


def test_sieve_deviation_exhaustive():
    """Every q <= 10^4 and U <= 10^3, counted by cumulative gcd masks."""
    us = np.arange(1, 1001)
    tab = arith.sieve_tables(10**4)
    worst = 0.0
    for q in range(1, 10**4 + 1):
        counts = np.cumsum(np.gcd(us, q) == 1)
        dev = np.abs(counts - tab["phi"][q] / q * us).max()
        worst = max(worst, dev / 2 ** int(tab["omega"][q]))
    assert worst <= 1.0


def test_instance_validation():
    with pytest.raises(ValueError):
        Inst(0, 0, 10, 2)
    with pytest.raises(ValueError):
        Inst(10**6 + 1, 0, 10, 2)
    with pytest.raises(ValueError):
        Inst(101, 0, 10**7, 20)
    assert Inst(101, 0, 288, 24).params()["n_range"] == "closed"


def test_two_algorithms_agree_on_reference_instance():
    inst = Inst(101, 0, 288, 24)
    assert congruence.count_congruence_solutions(inst) == congruence.count_congruence_solutions_sorted(inst) == 476716


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 60), st.integers(0, 100), st.integers(1, 25), st.integers(1, 6))
def test_bucketing_matches_quadruple_loop(q, M, N, U):
    inst = Inst(q, M, N, U)
    assert congruence.count_congruence_solutions(inst) == congruence.count_congruence_solutions_brute(inst) == congruence.count_congruence_solutions_sorted(inst)


def test_single_u_counts_matching_residues():
    q, M, N = 37, 5, 200
    inst = Inst(q, M, N, 1)
    hits = np.bincount(np.arange(M, M + N + 1) % q, minlength=q)
    assert congruence.count_congruence_solutions(inst) == int((hits**2).sum())
    assert congruence.count_congruence_solutions(inst) >= N + 1


def test_histogram_sum_of_squares():
    inst = Inst(53, 7, 400, 9)
    hist = congruence.residue_histogram(inst)
    pairs = [(n * u) % 53 for n in range(7, 408) for u in range(1, 10)]
    assert hist.tolist() == np.bincount(pairs, minlength=53).tolist()
    assert congruence.count_congruence_solutions(inst) == int((hist.astype(object) ** 2).sum())


def test_bound_examples():
    assert congruence.check_congruence_count(Inst(101, 0, 288, 24)).status == "pass"
    assert congruence.check_congruence_count(Inst(997, 50, 600, 30)).status == "pass"
    assert congruence.check_congruence_count(Inst(997, 50, 600, 23)).status == "hypotheses-unmet"
    assert congruence.check_congruence_count(Inst(997, 50, 300, 30)).status == "hypotheses-unmet"
    inst = Inst(101, 0, 288, 24)
    assert congruence.congruence_count_bound(inst) == pytest.approx(2 * 24 * 288 * (288 * 24 / 101 + math.log(1.85 * 24)))


def test_random_grid_is_reproducible_and_in_window():
    a = congruence.random_grid(20, seed=4)
    assert a == congruence.random_grid(20, seed=4)
    assert all(i.in_window and 300 <= i.q <= 10**5 for i in a)
    assert all(congruence.check_congruence_count(i).status == "pass" for i in a)
