"""Small-rank lattices, successive minima and the classical geometry-of-numbers bounds.

Everything is exact: bases and half-widths are Fractions, and the gauge of a
lattice point is computed as an integer numerator over a fixed denominator.
Lattice points are found by scanning a coefficient box after LLL-reducing
the basis; at rank <= 4 this is all that is needed.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce

import numpy as np

from .records import VerificationRecord, check

MAX_RANK = 4
MAX_SCAN = 4_000_000
DEFAULT_SEED = 20190715


def _frac_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def det(rows) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                for j in range(c, n):
                    m[i][j] -= f * m[c][j]
    return out


def inverse(rows) -> list[list[Fraction]]:
    n = len(rows)
    m = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return [row[n:] for row in m]


def rank(vectors) -> int:
    m = [list(map(Fraction, v)) for v in vectors]
    if not m:
        return 0
    r = 0
    cols = len(m[0])
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c] / m[r][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def lll(basis, delta=Fraction(3, 4)) -> list[list[int]]:
    """LLL reduction of an integer basis (rows), exact arithmetic."""
    b = [list(map(int, r)) for r in basis]
    n = len(b)

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gso():
        bs, mu = [], [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = Fraction(dot(b[i], bs[j])) / dot(bs[j], bs[j]) if any(bs[j]) else Fraction(0)
                v = [x - mu[i][j] * y for x, y in zip(v, bs[j])]
            bs.append(v)
        return bs, mu

    bs, mu = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            c = round(mu[k][j])
            if c:
                b[k] = [x - c * y for x, y in zip(b[k], b[j])]
                bs, mu = gso()
        if dot(bs[k], bs[k]) >= (delta - mu[k][k - 1] ** 2) * dot(bs[k - 1], bs[k - 1]):
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            bs, mu = gso()
            k = max(k - 1, 1)
    return b


def hnf_basis(generators) -> list[list[int]]:
    """A basis (upper triangular) of the Z-span of full-rank integer generators."""
    rows = [list(map(int, g)) for g in generators if any(g)]
    k = len(rows[0])
    basis = []
    for col in range(k):
        while True:
            nz = [r for r in rows if r[col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                f = r[col] // piv[col]
                for i in range(k):
                    r[i] -= f * piv[i]
        pivot = next((r for r in rows if r[col] != 0), None)
        if pivot is None:
            raise ValueError("generators do not span a full-rank lattice")
        if pivot[col] < 0:
            pivot[:] = [-x for x in pivot]
        basis.append(pivot)
        rows = [r for r in rows if r is not pivot and any(r)]
    return basis


@dataclass(frozen=True)
class LatticeInstance:
    basis: tuple[tuple[Fraction, ...], ...]

    def __init__(self, basis):
        object.__setattr__(self, "basis", _frac_matrix(basis))
        d = len(self.basis)
        if not 1 <= d <= MAX_RANK or any(len(r) != d for r in self.basis):
            raise ValueError(f"need a square basis of rank <= {MAX_RANK}")
        if det(self.basis) == 0:
            raise ValueError("basis is singular")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def covolume(self) -> Fraction:
        return abs(det(self.basis))

    @cached_property
    def _integer_form(self):
        """(den, LLL-reduced integer basis) with lattice = basis_int / den."""
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for r in self.basis for x in r), 1)
        ints = [[int(x * den) for x in r] for r in self.basis]
        return den, lll(ints)

    def contains(self, x) -> bool:
        coeffs = np.array(inverse(self.basis), dtype=object)
        c = np.array([Fraction(v) for v in x], dtype=object) @ coeffs
        return all(Fraction(v).denominator == 1 for v in c)

    def __repr__(self):
        return "LatticeInstance(" + str([[str(x) for x in r] for r in self.basis]) + ")"


def _int_array(values) -> np.ndarray:
    return np.array(values, dtype=np.int64 if max(values) < 2**62 else object)


class _Body:
    """Symmetric convex body given by a gauge with an integer numerator."""

    def integer_gauge(self, den: int):
        raise NotImplementedError

    def gauge(self, x) -> Fraction:
        raise NotImplementedError

    def support(self, y) -> Fraction:
        """max over the body of |<x, y>|."""
        raise NotImplementedError

    def contains(self, x) -> bool:
        return self.gauge(x) <= 1


@dataclass(frozen=True)
class BoxBody(_Body):
    half_widths: tuple[Fraction, ...]

    def __init__(self, half_widths):
        hw = tuple(Fraction(w) for w in half_widths)
        if any(w <= 0 for w in hw):
            raise ValueError("half-widths must be positive")
        object.__setattr__(self, "half_widths", hw)

    @property
    def dim(self) -> int:
        return len(self.half_widths)

    @property
    def volume(self) -> Fraction:
        return reduce(lambda a, w: a * 2 * w, self.half_widths, Fraction(1))

    def gauge(self, x) -> Fraction:
        return max(abs(Fraction(v)) / w for v, w in zip(x, self.half_widths))

    def support(self, y) -> Fraction:
        return sum(abs(Fraction(v)) * w for v, w in zip(y, self.half_widths))

    def integer_gauge(self, den):
        # |y_i| / (den w_i) = |y_i| m_i (Lc/n_i) / (den Lc) with w_i = n_i/m_i
        lc = reduce(lambda a, b: a * b // math.gcd(a, b), (w.numerator for w in self.half_widths), 1)
        wts = _int_array([w.denominator * (lc // w.numerator) for w in self.half_widths])
        return "max", wts, den * lc

    def scaled(self, c) -> "BoxBody":
        return BoxBody([w * Fraction(c) for w in self.half_widths])


@dataclass(frozen=True)
class CrossPolytope(_Body):
    """{z : sum_i w_i |z_i| <= 1}, the polar body of the box with half-widths w."""

    weights: tuple[Fraction, ...]

    def __init__(self, weights):
        w = tuple(Fraction(x) for x in weights)
        if any(x <= 0 for x in w):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def volume(self) -> Fraction:
        d = self.dim
        return Fraction(2**d, math.factorial(d)) / reduce(lambda a, w: a * w, self.weights, Fraction(1))

    def gauge(self, x) -> Fraction:
        return sum(w * abs(Fraction(v)) for v, w in zip(x, self.weights))

    def support(self, y) -> Fraction:
        return max(abs(Fraction(v)) / w for v, w in zip(y, self.weights))

    def integer_gauge(self, den):
        lm = reduce(lambda a, b: a * b // math.gcd(a, b), (w.denominator for w in self.weights), 1)
        wts = _int_array([w.numerator * (lm // w.denominator) for w in self.weights])
        return "sum", wts, den * lm


@dataclass
class SuccessiveMinima:
    minima: list[Fraction]
    witnesses: list[tuple[Fraction, ...]]


def _scan(lattice: LatticeInstance, body: _Body, t: Fraction):
    """All lattice points with gauge <= t: (integer vectors y, gauge numerators G, den, K)."""
    den, B = lattice._integer_form
    d = lattice.rank
    binv = inverse(B)                    # coefficients c = y @ binv, y = den * x
    bounds = []
    for k in range(d):
        col = [binv[i][k] * den for i in range(d)]     # c_k = <x, col>
        bounds.append(int(math.floor(t * body.support(col))))
    size = reduce(lambda a, b: a * (2 * b + 1), bounds, 1)
    if size > MAX_SCAN:
        raise RuntimeError(f"enumeration box too large ({size} points)")
    kind, wts, K = body.integer_gauge(den)
    # fall back to Python integers when int64 products could overflow
    worst = max(bounds + [1]) * max(sum(abs(x) for x in col) for col in zip(*B)) * max(int(w) for w in wts) * d
    worst *= max(t.denominator, t.numerator, K)
    dtype = np.int64 if worst < 2**62 else object
    grids = np.meshgrid(*[np.arange(-b, b + 1, dtype=np.int64) for b in bounds], indexing="ij")
    C = np.stack([g.ravel() for g in grids], axis=1).astype(dtype)
    Y = C @ np.array(B, dtype=dtype)
    A = np.abs(Y) * wts.astype(dtype)
    G = A.max(axis=1) if kind == "max" else A.sum(axis=1)
    keep = G * t.denominator <= t.numerator * K
    return Y[keep], G[keep], den, K


def points_within(lattice: LatticeInstance, body: _Body, t=1) -> list[tuple[Fraction, ...]]:
    Y, _, den, _ = _scan(lattice, body, Fraction(t))
    return [tuple(Fraction(int(v), den) for v in y) for y in Y]


def count_lattice_points(lattice: LatticeInstance, body: _Body) -> int:
    Y, _, _, _ = _scan(lattice, body, Fraction(1))
    return len(Y)


def successive_minima(lattice: LatticeInstance, body: _Body) -> SuccessiveMinima:
    """Exact successive minima by scanning t*body for growing t and greedy selection."""
    d = lattice.rank
    den, B = lattice._integer_form
    kind, wts, K = body.integer_gauge(den)
    weights = [int(w) for w in wts]
    agg = max if kind == "max" else sum
    basis_gauges = [Fraction(agg(abs(x) * w for x, w in zip(b, weights)), K) for b in B]
    t = min(basis_gauges)
    while True:
        Y, G, den, K = _scan(lattice, body, t)
        order = np.lexsort(tuple(Y[:, i] for i in reversed(range(d))) + (G,))
        chosen, minima = [], []
        for idx in order:
            if G[idx] == 0:
                continue
            cand = chosen + [Y[idx].tolist()]
            if rank(cand) == len(cand):
                chosen = cand
                minima.append(Fraction(int(G[idx]), K))
                if len(chosen) == d:
                    wit = [tuple(Fraction(v, den) for v in y) for y in chosen]
                    return SuccessiveMinima(minima, wit)
        t *= 2


def dual_lattice(lattice: LatticeInstance) -> LatticeInstance:
    """Basis of {x : <x, y> in Z for all y in the lattice}: the inverse transpose."""
    inv = inverse(lattice.basis)
    return LatticeInstance([[inv[i][j] for i in range(lattice.rank)] for j in range(lattice.rank)])


def dual_box(body: BoxBody) -> CrossPolytope:
    return CrossPolytope(body.half_widths)


def congruence_lattice(coeffs, modulus: int) -> LatticeInstance:
    """{h in Z^k : sum_i c_i h_i = 0 mod m}, built as the dual of Z^k + Z c/m."""
    k = len(coeffs)
    gens = [[modulus * int(i == j) for j in range(k)] for i in range(k)] + [[int(c) for c in coeffs]]
    dual = LatticeInstance([[Fraction(x, modulus) for x in row] for row in hnf_basis(gens)])
    return dual_lattice(dual)


def congruence_dual_generators(coeffs, modulus: int) -> list[tuple[Fraction, ...]]:
    """Explicit description of the dual: y/m with y = lambda c mod m, plus Z^k."""
    k = len(coeffs)
    gens = [tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k)]
    gens.append(tuple(Fraction(int(c) % modulus, modulus) for c in coeffs))
    return gens


def same_lattice(a: LatticeInstance, b: LatticeInstance) -> bool:
    return (a.covolume == b.covolume and all(b.contains(r) for r in a.basis)
            and all(a.contains(r) for r in b.basis))


# ---------------------------------------------------------------------------
# checks

def minkowski_second_sides(lattice, body, minima=None) -> tuple[Fraction, Fraction]:
    d = lattice.rank
    lam = (minima or successive_minima(lattice, body)).minima
    lhs = 1 / reduce(lambda a, x: a * x, lam, Fraction(1))
    rhs = Fraction(math.factorial(d), 2**d) * body.volume / lattice.covolume
    return lhs, rhs


def _params(lattice, body) -> dict:
    p = {"basis": [[str(x) for x in r] for r in lattice.basis]}
    if isinstance(body, BoxBody):
        p["half_widths"] = [str(w) for w in body.half_widths]
    else:
        p["weights"] = [str(w) for w in body.weights]
    return p


def _exact_check(statement, params, lhs: Fraction, rhs: Fraction) -> VerificationRecord:
    rec = check(statement, params, float(lhs), float(rhs))
    # the comparison is exact; floats are only for reporting
    if lhs <= rhs and rec.status == "fail":
        rec.status = "marginal"
    return rec


def check_minkowski_second(lattice: LatticeInstance, body: _Body) -> VerificationRecord:
    lhs, rhs = minkowski_second_sides(lattice, body)
    return _exact_check("minkowski-second", _params(lattice, body), lhs, rhs)


def point_count_bound(minima: list[Fraction]) -> Fraction:
    return reduce(lambda a, jl: a * (Fraction(2 * jl[0]) / jl[1] + 1), enumerate(minima, 1), Fraction(1))


def check_point_count_bound(lattice: LatticeInstance, body: _Body) -> VerificationRecord:
    m = successive_minima(lattice, body)
    count = count_lattice_points(lattice, body)
    return _exact_check("point-count", _params(lattice, body), Fraction(count), point_count_bound(m.minima))


def transference_products(lattice: LatticeInstance, body: BoxBody) -> list[Fraction]:
    lam = successive_minima(lattice, body).minima
    lam_star = successive_minima(dual_lattice(lattice), dual_box(body)).minima
    d = lattice.rank
    return [lam[j] * lam_star[d - 1 - j] for j in range(d)]


def check_transference(lattice: LatticeInstance, body: BoxBody) -> VerificationRecord:
    prods = transference_products(lattice, body)
    d = lattice.rank
    params = _params(lattice, body)
    params["products"] = [str(p) for p in prods]
    params["min_product"] = str(min(prods))
    return _exact_check("transference", params, max(prods), Fraction(math.factorial(d) ** 2))


# ---------------------------------------------------------------------------
# random instances

def random_instance(rng: random.Random, d: int, entry: int = 5) -> tuple[LatticeInstance, BoxBody]:
    while True:
        rows = [[rng.randint(-entry, entry) for _ in range(d)] for _ in range(d)]
        if det(rows) != 0:
            break
    widths = [Fraction(rng.randint(1, 8), rng.randint(1, 4)) for _ in range(d)]
    return LatticeInstance(rows), BoxBody(widths)


def random_instances(count: int, d: int, seed: int = DEFAULT_SEED):
    rng = random.Random(seed * 31 + d)
    return [random_instance(rng, d) for _ in range(count)]


def brute_force_points(lattice: LatticeInstance, body: _Body, coeff_bound: int):
    """Points c.B with |c_i| <= coeff_bound inside body (oracle for small cases)."""
    d = lattice.rank
    out = []
    for c in itertools.product(range(-coeff_bound, coeff_bound + 1), repeat=d):
        x = tuple(sum(c[i] * lattice.basis[i][j] for i in range(d)) for j in range(d))
        if body.contains(x):
            out.append(x)
    return out
