"""Dirichlet characters to squarefree moduli, Kronecker symbols, Gauss sums.

A character mod squarefree q is stored by its per-prime exponents: the
component at p sends the least primitive root g_p to e(a_p/(p-1)). Values
are kept as integer phases k/order with order = lcm(p-1), so e(k/order) is
always evaluated at a reduced argument.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from . import arith
from .records import VerificationRecord, check

IDENTITY_TOL = 1e-9


def e(x):
    """The additive character exp(2 pi i x); x is reduced mod 1 first."""
    x = np.asarray(x, dtype=float)
    return np.exp(2j * np.pi * (x - np.floor(x)))


def roots_of_unity(m: int) -> np.ndarray:
    """e(k/m) for k = 0..m-1, exact at multiples of a quarter turn."""
    k = np.arange(m)
    r = np.exp(2j * np.pi * k / m)
    quarter = (4 * k) % m == 0
    r[quarter] = np.array([1, 1j, -1, -1j])[(4 * k[quarter]) // m]
    return r


def _check_modulus(q: int) -> arith.Factorization:
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    fac = arith.factorize(q)
    if any(e > 1 for _, e in fac.primes):
        raise ValueError(f"modulus {q} is not squarefree")
    return fac


@lru_cache(maxsize=64)
def _group_data(q: int):
    """Per-prime discrete logs lifted to residues mod q, and the group exponent."""
    fac = _check_modulus(q)
    primes = fac.prime_list
    order = 1
    for p in primes:
        order = order * (p - 1) // math.gcd(order, p - 1)
    n = np.arange(q)
    logs = np.zeros((len(primes), q), dtype=np.int64)
    units = np.ones(q, dtype=bool)
    for i, p in enumerate(primes):
        g = arith.primitive_root(p)
        ind = np.full(p, -1, dtype=np.int64)
        x = 1
        for k in range(p - 1):
            ind[x] = k
            x = x * g % p
        logs[i] = ind[n % p]
        units &= logs[i] >= 0
    logs[:, ~units] = 0
    return tuple(primes), order, logs, units


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        primes, _, _, _ = _group_data(self.modulus)
        if len(self.exponents) != len(primes):
            raise ValueError(f"need one exponent per prime of {self.modulus}")
        for p, a in zip(primes, self.exponents):
            if not 0 <= a < max(p - 1, 1):
                raise ValueError(f"exponent {a} out of range for p={p}")

    @property
    def primes(self) -> tuple[int, ...]:
        return _group_data(self.modulus)[0]

    @property
    def components(self) -> list[tuple[int, int]]:
        return list(zip(self.primes, self.exponents))

    @cached_property
    def phases(self) -> np.ndarray:
        """Integer phase k with chi(n) = e(k/order); -1 where gcd(n, q) > 1."""
        primes, order, logs, units = _group_data(self.modulus)
        scale = np.array([a * (order // (p - 1)) if p > 2 else 0
                          for p, a in zip(primes, self.exponents)], dtype=np.int64)
        ph = (scale @ logs) % order if len(primes) else np.zeros(self.modulus, dtype=np.int64)
        ph = np.where(units, ph, -1)
        ph.setflags(write=False)
        return ph

    @property
    def order_of_group(self) -> int:
        return _group_data(self.modulus)[1]

    @cached_property
    def table(self) -> np.ndarray:
        """chi(n) for n = 0..q-1."""
        roots = roots_of_unity(self.order_of_group)
        ph = self.phases
        t = np.where(ph >= 0, roots[np.maximum(ph, 0)], 0)
        t.setflags(write=False)
        return t

    def __call__(self, n):
        return self.table[np.asarray(n) % self.modulus]

    def conj(self) -> "DirichletCharacter":
        neg = tuple((-a) % max(p - 1, 1) for p, a in self.components)
        return DirichletCharacter(self.modulus, neg)

    @property
    def label(self) -> str:
        return f"q={self.modulus};a=" + ",".join(str(a) for a in self.exponents)

    @property
    def is_trivial(self) -> bool:
        return all(a == 0 for a in self.exponents)

    @property
    def is_real(self) -> bool:
        return all((2 * a) % max(p - 1, 1) == 0 for p, a in self.components)

    def is_primitive(self) -> bool:
        return is_primitive(self)

    def parity(self) -> str:
        return parity(self)

    def __repr__(self):
        return f"DirichletCharacter({self.label})"


def exponent_tuples(q: int, primitive_only: bool = False):
    primes = _group_data(q)[0]
    ranges = []
    for p in primes:
        lo = 1 if primitive_only else 0
        ranges.append(range(lo, max(p - 1, 1)))
    return itertools.product(*ranges)


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod squarefree q, in lexicographic exponent order."""
    if q > 10**6:
        raise ValueError("modulus above 1e6 not supported")
    return [DirichletCharacter(q, a) for a in exponent_tuples(q)]


def primitive_characters(q: int) -> list[DirichletCharacter]:
    return [DirichletCharacter(q, a) for a in exponent_tuples(q, primitive_only=True)]


def is_primitive(chi: DirichletCharacter) -> bool:
    # squarefree modulus: primitive iff every local component is nontrivial;
    # the only character mod 2 is trivial, so even moduli have none
    if chi.modulus == 1:
        return True
    return 2 not in chi.primes and all(a != 0 for a in chi.exponents)


def parity(chi: DirichletCharacter) -> str:
    v = chi(-1)
    return "even" if v.real > 0 else "odd"


def character_matrix(q: int, exponents) -> np.ndarray:
    """Value tables of several characters mod q as rows of a complex array."""
    primes, order, logs, units = _group_data(q)
    a = np.asarray(list(exponents), dtype=np.int64).reshape(-1, len(primes))
    scale = np.array([order // (p - 1) if p > 2 else 0 for p in primes], dtype=np.int64)
    ph = ((a * scale) @ logs) % order
    roots = roots_of_unity(order)
    return np.where(units, roots[ph], 0)


def parity_of_exponents(q: int, exponents) -> np.ndarray:
    """+1 / -1 for even / odd characters given as exponent rows."""
    primes, _, _, _ = _group_data(q)
    a = np.asarray(list(exponents), dtype=np.int64).reshape(-1, len(primes))
    # chi_p(-1) = e(a_p * ((p-1)/2) / (p-1)) = (-1)^{a_p}
    odd_primes = np.array([p > 2 for p in primes])
    s = (a[:, odd_primes].sum(axis=1) % 2) if odd_primes.any() else np.zeros(len(a), dtype=np.int64)
    return np.where(s == 0, 1, -1)


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n)."""
    d = int(d)
    n = int(n)
    if n == 0:
        return 1 if abs(d) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if d % 2 == 0:
            return 0
        if v % 2 and d % 8 in (3, 5):
            result = -result
    # now n odd positive: Jacobi symbol (d/n)
    a = d % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return arith.is_squarefree(abs(d))
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and arith.is_squarefree(abs(m))
    return False


@dataclass(frozen=True)
class GaussSumValue:
    character: DirichletCharacter
    value: complex
    modulus_sqrt: float


def gauss_sum(chi: DirichletCharacter) -> GaussSumValue:
    """tau(chi) = sum_{a mod q} chi(a) e(a/q)."""
    q = chi.modulus
    value = complex(np.sum(chi.table * roots_of_unity(q)))
    return GaussSumValue(chi, value, math.sqrt(q))


def fourier_rhs(chi: DirichletCharacter, n) -> np.ndarray:
    """(1/tau(conj chi)) sum_a conj chi(a) e(an/q), evaluated at each n."""
    q = chi.modulus
    cbar = chi.conj()
    tau_bar = gauss_sum(cbar).value
    n = np.atleast_1d(np.asarray(n, dtype=np.int64)) % q
    a = np.arange(q, dtype=np.int64)
    roots = roots_of_unity(q)
    total = (cbar.table[None, :] * roots[(n[:, None] * a[None, :]) % q]).sum(axis=1)
    return total / tau_bar


def verify_fourier_expansion(chi: DirichletCharacter, n: int) -> VerificationRecord:
    if not is_primitive(chi):
        raise ValueError(f"{chi.label} is not primitive; the expansion needs a primitive character")
    rhs = complex(fourier_rhs(chi, n)[0])
    err = abs(rhs - complex(chi(n)))
    # reported as error / tolerance against 1 so the marginal band means something
    return check("fourier-expansion", {"char": chi.label, "n": int(n), "error": err}, err / IDENTITY_TOL, 1.0)
