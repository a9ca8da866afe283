import json
import math
import random

import pytest

from pvbounds import lfunc
from pvbounds.lfunc import LFunctionQuery

# L(s, chi_d) and L'(s, chi_d) from the Hurwitz zeta decomposition
# q^-s sum_a chi(a) zeta(s, a/q), evaluated at 30 digits with mpmath.
HURWITZ = {
    (-4, 0.5): (0.66769145718960918, 0.28186474831561178),
    (-3, 0.8): (0.55808759741578706, 0.24250261551895288),
    (5, 0.7): (0.3160092540716337, 0.40593056857982697),
    (-23, 0.9): (2.0512983848886068, -0.89243305479724812),
    (8, 0.99): (0.61926696990397926, 0.39770868281111759),
    (-163, 0.6): (0.073906648839750061, 0.18493742164686828),
    (12, 1.5): (0.88904051293251436, 0.17355233014905223),
}


def leibniz(terms):
    """Average of consecutive partial sums of 1 - 1/3 + 1/5 - ..."""
    s, prev = 0.0, 0.0
    for k in range(terms):
        prev = s
        s += (-1) ** k / (2 * k + 1)
    return 0.5 * (s + prev)


def test_validation():
    with pytest.raises(ValueError):
        LFunctionQuery(12 * 4, 1.0)
    with pytest.raises(ValueError):
        LFunctionQuery(-4, 0.0)
    with pytest.raises(ValueError):
        LFunctionQuery(-4, 1.6)
    with pytest.raises(ValueError):
        LFunctionQuery(-4, 1.0, eps=0)


def test_closed_forms_at_one():
    v = lfunc.evaluate_L(LFunctionQuery(-4, 1.0, 1e-8))
    assert abs(v.value - math.pi / 4) <= v.error + 1e-15 and v.error <= 1e-8
    assert abs(v.value - leibniz(10**6)) < 1e-8
    assert lfunc.evaluate_L(LFunctionQuery(-3, 1.0)).value == pytest.approx(math.pi / (3 * math.sqrt(3)), abs=1e-10)
    golden = (1 + math.sqrt(5)) / 2
    assert lfunc.evaluate_L(LFunctionQuery(5, 1.0)).value == pytest.approx(2 * math.log(golden) / math.sqrt(5), abs=1e-10)


@pytest.mark.parametrize("key", sorted(HURWITZ))
def test_against_hurwitz_values(key):
    d, s = key
    L, Lp = HURWITZ[key]
    v = lfunc.evaluate_L(LFunctionQuery(d, s, 1e-11))
    assert abs(v.value - L) <= v.error + 1e-14
    w = lfunc.evaluate_L_prime(LFunctionQuery(d, s, 1e-11))
    assert abs(w.value - Lp) <= w.error + 1e-14


def test_derivative_against_finite_differences():
    for d in (-4, -23, 5, 13, -87):
        for s in (0.7, 0.9):
            h = 1e-5
            hi, lo = lfunc.evaluate_many(d, [s + h, s - h], 1e-13)
            fd = (hi.value - lo.value) / (2 * h)
            exact = lfunc.evaluate_L_prime(LFunctionQuery(d, s, 1e-12)).value
            assert abs(fd - exact) <= 1e-6 * abs(exact)


def test_halving_eps_stays_within_old_eps():
    rng = random.Random(2024)
    discs = lfunc.fundamental_discriminants(-1000, 1000)
    for _ in range(100):
        d = rng.choice(discs)
        s = rng.uniform(0.3, 1.0)
        eps = 10 ** rng.uniform(-10, -5)
        a = lfunc.evaluate_L(LFunctionQuery(d, s, eps))
        b = lfunc.evaluate_L(LFunctionQuery(d, s, eps / 2))
        assert a.error <= eps and b.error <= eps / 2
        assert abs(a.value - b.value) <= eps


def test_positive_at_one():
    for d in lfunc.fundamental_discriminants(-1000, 1000):
        v = lfunc.evaluate_L(LFunctionQuery(d, 1.0, 1e-6))
        assert v.value - v.error > 0, d


def test_class_number_examples():
    r = lfunc.class_number(-4)
    assert (r.h, r.w) == (1, 4)
    assert lfunc.reduced_forms_negative(-4) == [(1, 0, 1)]
    assert lfunc.class_number(-23).h == 3
    assert sorted(lfunc.reduced_forms_negative(-23)) == [(1, 1, 6), (2, -1, 3), (2, 1, 3)]
    assert lfunc.class_number(-3).w == 6 and lfunc.class_number(-7).w == 2
    r = lfunc.class_number(5)
    assert (r.h, r.v0, r.u0) == (1, 3, 1) and r.eta == pytest.approx((3 + math.sqrt(5)) / 2)
    with pytest.raises(ValueError):
        lfunc.class_number(20)


def test_known_class_numbers():
    # Heegner discriminants have class number one; -56 and -84 have 4
    for d in (-3, -4, -7, -8, -11, -19, -43, -67, -163):
        assert lfunc.class_number(d).h == 1
    assert lfunc.class_number(-56).h == 4 and lfunc.class_number(-84).h == 4
    # narrow class numbers: 12 has a unit of norm +1 only
    assert lfunc.class_number(12).h == 2 and lfunc.class_number(13).h == 1


def test_units_solve_pell():
    for d in lfunc.fundamental_discriminants(2, 600):
        v, u = lfunc.fundamental_unit(d)
        assert v * v - d * u * u == 4
        scan = lfunc.pell_scan(d, umax=10**4)
        if scan is not None:
            assert scan == (v, u)
    assert lfunc.fundamental_unit(376) == (4286590, 221064)


def test_class_number_formula_inversion():
    for d in lfunc.fundamental_discriminants(-1000, -5):
        L = lfunc.evaluate_L(LFunctionQuery(d, 1.0, 1e-8)).value
        assert lfunc.class_number(d).h == round(L * 2 * math.sqrt(-d) / (2 * math.pi))


def test_class_number_formula_records():
    assert lfunc.check_class_number_formula(-4).status == "pass"
    for d in lfunc.fundamental_discriminants(2, 200):
        assert lfunc.check_class_number_formula(d).status == "pass", d


def test_exclusion_radius():
    q = 1e6
    assert lfunc.exclusion_radius(q, 2) == pytest.approx(3200 * math.pi * 4 / 9 / (1e3 * math.log(q) ** 2))
    limit = 3200 * math.pi / (math.sqrt(q) * math.log(q) ** 2)
    assert lfunc.exclusion_radius(q, 10**6) == pytest.approx(limit, rel=1e-5)
    with pytest.raises(ValueError):
        lfunc.exclusion_radius(2, 2)
    with pytest.raises(ValueError):
        lfunc.exclusion_radius(10, 1)


def test_lower_bound_ratio():
    assert lfunc.l1_lower_bound_ratio(-4) == pytest.approx(1 / 200, rel=1e-9)


def test_zero_scan():
    for d in (-3, -4):
        rep = lfunc.scan_real_zeros(d, 0.5, 0.999, 1e-3)
        assert rep.brackets == [] and rep.indeterminate == []
        assert lfunc.zero_scan_record(rep).status == "pass"
    data = json.loads(lfunc.scan_real_zeros(5, 0.8, 0.9, 0.05).to_json())
    assert set(data) == {"d", "interval", "step", "brackets", "indeterminate", "exclusion_radius"}
    assert data["interval"] == [0.8, 0.9]
    with pytest.raises(ValueError):
        lfunc.scan_real_zeros(5, 0.9, 0.8, 0.01)


def test_pv_max_of_matches_running_sum():
    for d in (-4, -23, 5, 12, -163):
        chi = lfunc.character_table(d)
        s, best = 0, 0
        for n in range(1, abs(d) + 1):
            s += int(chi[n % abs(d)])
            best = max(best, abs(s))
        assert lfunc.pv_max_of(d) == best


def test_abel_integral_quadrature_matches_closed_form():
    for sigma, C1, C2, M in [(0.9, 10, 10**4, 1), (0.7, 30, 10**4, 5), (0.99, 30, 500, 1000), (0.7, 30, 40, 35)]:
        val, err = lfunc.abel_rhs(sigma, C1, C2, M)
        head = math.fsum(math.log(n) / n**sigma for n in range(2, C1 + 1))
        closed = head + M * math.log(C2) / C2**sigma - C1 * math.log(C1) / C1**sigma
        closed -= lfunc.abel_integral_closed_form(sigma, C1, C2, M)
        assert val == pytest.approx(closed, abs=1e-8)


def test_abel_bound_examples():
    assert lfunc.check_abel_bound(-4, 0.9, 10, 10**4).status == "pass"
    deg = lfunc.check_abel_bound(-4, 0.9, 10, 10)
    assert deg.status == "pass"
    assert lfunc.abel_rhs(0.9, 10, 10, 1)[1] == 0.0
    assert lfunc.check_abel_bound(-4, 0.5, 5, 10**4).status == "hypotheses-unmet"
    for sigma in (0.7, 0.9, 0.99):
        C1 = lfunc.abel_default_head_cutoff(sigma)
        for d in (-4, -3, 5, 8, 12, -199):
            assert lfunc.check_abel_bound(d, sigma, C1, 10**4).status == "pass"


def test_monotone_free_head():
    # f decreases from n = 3 on for sigma = 0.99, so the two heads differ only by early terms
    sigma, C1 = 0.99, 50
    stated = math.fsum(math.log(n) / n**sigma for n in range(2, C1 + 1)) - C1 * math.log(C1) / C1**sigma
    assert lfunc.monotone_free_head(sigma, C1) >= stated
