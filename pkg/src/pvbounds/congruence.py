"""Coprime counts in short ranges and the multiplicative congruence count.

``count_congruence_solutions`` counts quadruples (n1, u1, n2, u2) with n1*u1 = n2*u2 mod q.
Grouping the pairs (n, u) by the residue of n*u turns this into a sum of
squares of bucket sizes, which costs O(NU) time and O(q) memory.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import arith
from .records import VerificationRecord, check, unmet

MAX_Q = 10**6
MAX_PAIRS = 10**8


def coprime_count(q: int, U: int) -> int:
    """#{1 <= u <= U : gcd(u, q) = 1} by inclusion-exclusion over squarefree divisors."""
    if q < 1 or U < 0:
        raise ValueError("need q >= 1 and U >= 0")
    primes = arith.factorize(q).prime_list
    total = 0
    for mask in range(1 << len(primes)):
        d = 1
        bits = 0
        for i, p in enumerate(primes):
            if mask >> i & 1:
                d *= p
                bits += 1
        total += (-1) ** bits * (U // d)
    return total


def sieve_count(q: int, U: int) -> tuple[int, VerificationRecord]:
    count = coprime_count(q, U)
    deviation = abs(Fraction(count) - Fraction(arith.phi(q), q) * U)
    rec = check("sieve-count", {"q": q, "U": U}, float(deviation), float(2 ** arith.omega(q)))
    return count, rec


@dataclass(frozen=True)
class CongruenceCountInstance:
    q: int
    M: int
    N: int
    U: int

    def __post_init__(self):
        if not 1 <= self.q <= MAX_Q:
            raise ValueError(f"q must lie in [1, {MAX_Q}]")
        if self.N < 1 or self.U < 1 or self.M < 0:
            raise ValueError("need N >= 1, U >= 1, M >= 0")
        if (self.N + 1) * self.U > MAX_PAIRS:
            raise ValueError("instance too large: (N+1)*U exceeds 1e8")

    @property
    def in_window(self) -> bool:
        return 24 <= self.U and 12 * self.U <= self.N

    def params(self) -> dict:
        # n runs over the closed range M..M+N, i.e. N+1 values
        return {"q": self.q, "M": self.M, "N": self.N, "U": self.U, "n_range": "closed"}


def residue_histogram(inst: CongruenceCountInstance) -> np.ndarray:
    """I(lam) = #{(n, u) : M <= n <= M+N, 1 <= u <= U, gcd(u,q)=1, n*u = lam mod q}."""
    q = inst.q
    n_mod = np.bincount(np.arange(inst.M, inst.M + inst.N + 1) % q, minlength=q).astype(np.int64)
    us = np.arange(1, inst.U + 1, dtype=np.int64)
    us = us[np.gcd(us, q) == 1] % q
    hist = np.zeros(q, dtype=np.int64)
    residues = np.nonzero(n_mod)[0]
    for u in us:
        np.add.at(hist, (residues * u) % q, n_mod[residues])
    return hist


def count_congruence_solutions(inst: CongruenceCountInstance) -> int:
    hist = residue_histogram(inst)
    return int(sum(int(x) * int(x) for x in hist[hist > 0]))


def count_congruence_solutions_sorted(inst: CongruenceCountInstance) -> int:
    """Same count by sorting all residues n*u mod q and summing squared run lengths."""
    n = np.arange(inst.M, inst.M + inst.N + 1, dtype=np.int64)
    u = np.arange(1, inst.U + 1, dtype=np.int64)
    u = u[np.gcd(u, inst.q) == 1]
    res = np.sort(((n[:, None] % inst.q) * (u[None, :] % inst.q) % inst.q).ravel())
    if res.size == 0:
        return 0
    edges = np.flatnonzero(np.diff(res)) + 1
    runs = np.diff(np.concatenate(([0], edges, [res.size])))
    return int(np.sum(runs.astype(object) ** 2))


def count_congruence_solutions_brute(inst: CongruenceCountInstance) -> int:
    """Quadruple loop; only for tiny instances."""
    q = inst.q
    pairs = [(n, u) for n in range(inst.M, inst.M + inst.N + 1)
             for u in range(1, inst.U + 1) if math.gcd(u, q) == 1]
    return sum(1 for a, b in pairs for c, d in pairs if (a * b - c * d) % q == 0)


def congruence_count_bound(inst: CongruenceCountInstance) -> float:
    U, N = inst.U, inst.N
    return 2 * U * N * (N * U / inst.q + math.log(1.85 * U))


def check_congruence_count(inst: CongruenceCountInstance) -> VerificationRecord:
    if not inst.in_window:
        return unmet("congruence-count", inst.params(), "24 <= U <= N/12")
    return check("congruence-count", inst.params(), float(count_congruence_solutions(inst)), congruence_count_bound(inst))


def random_grid(count: int = 500, seed: int = 20190715, qlo: int = 300, qhi: int = 10**5):
    """Hypothesis-satisfying instances with q in [qlo, qhi]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        q = int(rng.integers(qlo, qhi + 1))
        U = int(rng.integers(24, 61))
        N = int(rng.integers(12 * U, 12 * U + 2000))
        M = int(rng.integers(0, q))
        out.append(CongruenceCountInstance(q, M, N, U))
    return out
