"""Exact arithmetic functions and explicit bounds for omega, tau and phi.

Factorization is plain trial division; the sizes used here (n below 1e9 in
sweeps) never need more. Bulk sweeps over every n up to some limit go
through :func:`sieve_tables` instead, which computes the same functions with
a smallest-prime-factor sieve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

EULER_GAMMA = 0.57721566490153286
PI = 3.1415926535897932

OMEGA_CONST = 1.45743
TAU_CONST = 1.5379
PHI_CONST = 2.50637

# Comparisons closer than this to equality are flagged marginal.
REL_TOL = 1e-12
MARGINAL_ABS = 1e-9

MAX_N = 2**63 - 1


@dataclass(frozen=True)
class Factorization:
    n: int
    primes: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.primes:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization of {self.n}: {self.primes}")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factors {self.primes} do not multiply to {self.n}")

    @property
    def prime_list(self) -> list[int]:
        return [p for p, _ in self.primes]


@dataclass(frozen=True)
class ExplicitBoundReport:
    """Outcome of comparing an arithmetic function with its explicit bound.

    ``sense`` is "upper" when the claim is value <= bound and "lower" when it
    is value > bound. ``margin`` is signed so that a positive margin always
    means the claim holds.
    """

    n: float
    value: float
    bound: float
    satisfied: bool
    margin: float
    marginal: bool = False
    sense: str = "upper"


def _report(n, value, bound, sense="upper") -> ExplicitBoundReport:
    value = float(value)
    bound = float(bound)
    margin = bound - value if sense == "upper" else value - bound
    tol = max(MARGINAL_ABS, REL_TOL * max(abs(bound), abs(value)))
    marginal = abs(margin) <= tol
    if sense == "upper":
        satisfied = value <= bound * (1 + REL_TOL) if bound >= 0 else value <= bound
    else:
        satisfied = value > bound * (1 - REL_TOL) if bound >= 0 else value > bound
    return ExplicitBoundReport(n, value, bound, satisfied, margin, marginal, sense)


def factorize(n: int) -> Factorization:
    n = int(n)
    if n < 1 or n > MAX_N:
        raise ValueError(f"factorize needs 1 <= n <= 2^63-1, got {n}")
    m = n
    out = []
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    f = 5
    step = 2
    while f * f <= m:
        if m % f == 0:
            e = 0
            while m % f == 0:
                m //= f
                e += 1
            out.append((f, e))
        f += step
        step = 6 - step
    if m > 1:
        out.append((m, 1))
    return Factorization(n, tuple(out))


def omega(n: int) -> int:
    return len(factorize(n).primes)


def tau(n: int) -> int:
    return reduce(lambda acc, pe: acc * (pe[1] + 1), factorize(n).primes, 1)


def phi(n: int) -> int:
    out = 1
    for p, e in factorize(n).primes:
        out *= (p - 1) * p ** (e - 1)
    return out


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n).primes)


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac.primes):
        return 0
    return -1 if len(fac.primes) % 2 else 1


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).primes:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n).primes == ((n, 1),)


def primitive_root(p: int) -> int:
    """Least primitive root of the prime p."""
    if p == 2:
        return 1
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    qs = factorize(p - 1).prime_list
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q in qs):
        g += 1
    return g


def squarefree_range(lo: int, hi: int) -> list[int]:
    """Squarefree integers in [lo, hi]."""
    if hi < lo:
        return []
    mask = np.ones(hi + 1, dtype=bool)
    mask[0] = False
    k = 2
    while k * k <= hi:
        mask[k * k::k * k] = False
        k += 1
    return [int(q) for q in np.nonzero(mask[lo:])[0] + lo]


def _loglog(n: float) -> float:
    if n < 3:
        raise ValueError(f"bound needs n >= 3 (log log n > 0), got {n}")
    return math.log(math.log(n))


def omega_bound(n: float) -> float:
    ll = _loglog(n)
    ln = math.log(n)
    return ln / ll + OMEGA_CONST * ln / ll**2


def tau_bound(n: float) -> float:
    # grouping: exp((1.5379 * log 2 * log n) / log log n)
    return math.exp(TAU_CONST * math.log(2) * math.log(n) / _loglog(n))


def phi_lower_bound(n: float) -> float:
    ll = _loglog(n)
    return n * math.exp(-EULER_GAMMA) / (ll + PHI_CONST / ll)


def check_omega_bound(n: int) -> ExplicitBoundReport:
    bound = omega_bound(n)
    return _report(n, omega(n), bound)


def check_tau_bound(n: int) -> ExplicitBoundReport:
    bound = tau_bound(n)
    return _report(n, tau(n), bound)


def check_phi_bound(n: int) -> ExplicitBoundReport:
    bound = phi_lower_bound(n)
    return _report(n, phi(n), bound, sense="lower")


def trig_sums(alpha: float, x: float) -> tuple[float, float]:
    """sum_{n<=x} (1-cos(alpha n))/n and sum_{n<=x} |sin(alpha n)|/n, correctly rounded."""
    m = math.floor(x)
    if m < 1:
        return 0.0, 0.0
    n = np.arange(1, m + 1, dtype=float)
    # 1 - cos t = 2 sin^2(t/2) avoids cancellation for small alpha
    first = math.fsum(2.0 * np.sin(alpha * n / 2.0) ** 2 / n)
    second = math.fsum(np.abs(np.sin(alpha * n)) / n)
    return first, second


def trig_bounds(x: float) -> tuple[float, float]:
    c = EULER_GAMMA + math.log(2) + 3.0 / x
    return math.log(x) + c, (2.0 / PI) * (math.log(x) + c)


def trig_sum_check(alpha: float, x: float) -> tuple[ExplicitBoundReport, ExplicitBoundReport]:
    if x < 1:
        raise ValueError(f"trig_sum_check needs x >= 1, got {x}")
    first, second = trig_sums(alpha, x)
    b1, b2 = trig_bounds(x)
    return _report(x, first, b1), _report(x, second, b2)


# ---------------------------------------------------------------------------
# bulk tables for exhaustive sweeps

def sieve_tables(limit: int) -> dict[str, np.ndarray]:
    """omega, tau and phi for every n <= limit (index n), via a prime sieve."""
    n = np.arange(limit + 1, dtype=np.int64)
    om = np.zeros(limit + 1, dtype=np.int64)
    ta = np.ones(limit + 1, dtype=np.int64)
    ph = n.copy()
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, int(math.isqrt(limit)) + 1):
        if is_p[p]:
            is_p[p * p::p] = False
    for p in np.nonzero(is_p)[0]:
        p = int(p)
        om[p::p] += 1
        ph[p::p] -= ph[p::p] // p
        # exponent of p in each multiple
        mult = n[p::p]
        e = np.ones_like(mult)
        pk = p * p
        while pk <= limit:
            e[(mult % pk) == 0] += 1
            pk *= p
        ta[p::p] *= e + 1
    return {"omega": om, "tau": ta, "phi": ph}


def compensated_cumsum(terms: np.ndarray, axis: int = -1) -> np.ndarray:
    """Running sums along ``axis`` with Neumaier compensation."""
    terms = np.moveaxis(np.asarray(terms, dtype=float), axis, 0)
    out = np.empty_like(terms)
    s = np.zeros(terms.shape[1:])
    c = np.zeros(terms.shape[1:])
    for i in range(terms.shape[0]):
        x = terms[i]
        t = s + x
        big = np.abs(s) >= np.abs(x)
        c += np.where(big, (s - t) + x, (x - t) + s)
        s = t
        out[i] = s + c
    return np.moveaxis(out, 0, axis)
