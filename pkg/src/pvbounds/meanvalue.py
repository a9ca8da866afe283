"""Complete mean values of short twisted character sums and the bounds on them.

The central quantity is

    S = (1/q) sum_{lambda mod q} sum_{mu mod q} |sum_{1<=v<=V} beta_v chi(lambda+v) e_q(mu v)|^{2r}.

For fixed lambda the inner sums over all mu form a length-q discrete
Fourier transform of the zero-padded coefficients, so the whole double sum
costs O(q^2 log q) instead of O(q^2 V).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import arith
from .dirichlet import DirichletCharacter, character_matrix, is_primitive, roots_of_unity
from .records import SINGULAR, VerificationRecord, check, unmet


@dataclass
class MeanValueInstance:
    q: int
    r: int
    V: int
    beta: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.beta is None:
            self.beta = np.ones(self.V, dtype=complex)
        self.beta = np.asarray(self.beta, dtype=complex)
        if len(self.beta) != self.V:
            raise ValueError(f"need {self.V} coefficients, got {len(self.beta)}")
        if not 1 <= self.V < self.q:
            raise ValueError(f"need 1 <= V < q, got V={self.V}, q={self.q}")
        if np.any(np.abs(self.beta) > 1 + 1e-12):
            raise ValueError("coefficients must satisfy |beta_v| <= 1")


@dataclass(frozen=True)
class TupleInstance:
    q: int
    r: int
    v: tuple[int, ...]

    def __post_init__(self):
        if len(self.v) != 2 * self.r:
            raise ValueError(f"need a tuple of length {2 * self.r}")

    @property
    def distinct(self) -> int:
        return len(set(self.v))

    def difference_product(self, j: int) -> int:
        """A_j(v) = prod_{i != j} (v_i - v_j), exact integer (0-based j)."""
        out = 1
        for i, x in enumerate(self.v):
            if i != j:
                out *= x - self.v[j]
        return out

    def difference_product_mod_q(self, j: int) -> int:
        out = 1
        for i, x in enumerate(self.v):
            if i != j:
                out = out * ((x - self.v[j]) % self.q) % self.q
        return out

    def gcd_with_q(self, j: int) -> int:
        # A_j != 0 is decided on the integers; the gcd only needs A_j mod q
        return math.gcd(self.q, self.difference_product_mod_q(j))

    def nonzero_js(self) -> list[int]:
        return [j for j in range(len(self.v)) if self.v.count(self.v[j]) == 1]


def complete_rational_charsum(q: int, chi: DirichletCharacter, v) -> complex:
    """sum_{lambda mod q} chi((lambda+v_1)...(lambda+v_r)) conj chi((lambda+v_{r+1})...(lambda+v_2r))."""
    v = tuple(int(x) for x in v)
    if len(v) % 2:
        raise ValueError("tuple length must be even")
    if chi.modulus != q:
        raise ValueError("character modulus does not match q")
    r = len(v) // 2
    lam = np.arange(q, dtype=np.int64)
    ph = chi.phases
    order = chi.order_of_group
    total = np.zeros(q, dtype=np.int64)
    alive = np.ones(q, dtype=bool)
    for i, x in enumerate(v):
        p = ph[(lam + x) % q]
        alive &= p >= 0
        total += p if i < r else -p
    vals = roots_of_unity(order)[total[alive] % order]
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


def weil_rhs(q: int, r: int, g: int) -> float:
    return (2 * r) ** arith.omega(q) * math.sqrt(g) * math.sqrt(q)


def check_weil_bound(q: int, chi: DirichletCharacter, v) -> VerificationRecord:
    inst = TupleInstance(q, len(v) // 2, tuple(int(x) for x in v))
    params = {"q": q, "char": chi.label, "v": list(inst.v)}
    if not is_primitive(chi):
        raise ValueError(f"{chi.label} is not primitive")
    if inst.distinct < inst.r + 1:
        return unmet("weil-sum", params, "|{v_1..v_2r}| >= r+1")
    js = inst.nonzero_js()
    # strongest admissible claim: the j with the smallest gcd(q, A_j)
    g, j = min((inst.gcd_with_q(j), j) for j in js)
    params["j"] = j + 1
    params["gcd"] = g
    lhs = abs(complete_rational_charsum(q, chi, inst.v))
    return check("weil-sum", params, lhs, weil_rhs(q, inst.r, g))


def _as_matrix(chis, q):
    if isinstance(chis, DirichletCharacter):
        return chis.table[None, :]
    chis = list(chis)
    if chis and isinstance(chis[0], DirichletCharacter):
        return np.stack([c.table for c in chis])
    return character_matrix(q, chis)


def twisted_moment_batch(inst: MeanValueInstance, chis, block: int | None = None) -> np.ndarray:
    """twisted_moment for several characters mod q (DFT path)."""
    q, r, V = inst.q, inst.r, inst.V
    tables = _as_matrix(chis, q)
    nchar = tables.shape[0]
    v = np.arange(1, V + 1)
    if block is None:
        block = max(1, min(q, 2_000_000 // max(1, nchar * q)))
    acc = np.zeros(nchar)
    for lo in range(0, q, block):
        lam = np.arange(lo, min(q, lo + block))
        x = np.zeros((nchar, len(lam), q), dtype=complex)
        x[:, :, 1:V + 1] = tables[:, (lam[:, None] + v[None, :]) % q] * inst.beta
        # c_mu = sum_v x_v e(mu v / q) = q * ifft(x)[mu]
        c = np.fft.ifft(x, axis=2) * q
        acc += np.sum(np.abs(c) ** (2 * r), axis=(1, 2))
    return acc / q


def twisted_moment(inst: MeanValueInstance, chi: DirichletCharacter) -> float:
    if chi.modulus != inst.q:
        raise ValueError("character modulus does not match q")
    return float(twisted_moment_batch(inst, chi)[0])


def twisted_moment_naive(inst: MeanValueInstance, chi: DirichletCharacter) -> float:
    """Same quantity by the direct O(q^2 V) double loop (independent oracle)."""
    q, r, V = inst.q, inst.r, inst.V
    v = np.arange(1, V + 1)
    mu = np.arange(q)
    E = roots_of_unity(q)[(mu[:, None] * v[None, :]) % q]      # (mu, v)
    total = 0.0
    for lam in range(q):
        coeff = inst.beta * chi.table[(lam + v) % q]
        c = E @ coeff
        total += float(np.sum(np.abs(c) ** (2 * r)))
    return total / q


def moment_rhs(q: int, r: int, V: float) -> float:
    w = (2 * r) ** arith.omega(q)
    t = float(arith.tau(q)) ** (2 * r)
    sq = math.sqrt(q)
    return (math.factorial(r) * q * V**r
            + 2.0 ** (2 * r) * r * w * t * sq * V ** (2 * r - 1)
            + 4.0 ** (2 * r + 1) * r * w * math.factorial(2 * r - 1) ** 2 * t * sq * V ** (2 * r - 1.5))


def simplified_moment_rhs(q: int, r: int, V: float) -> float:
    return (math.factorial(r) * q * V**r
            + 4.0 ** (4 * r) * (2 * r) ** arith.omega(q) * float(arith.tau(q)) ** (2 * r)
            * math.sqrt(q) * V ** (2 * r - 1))


def _instance_params(inst: MeanValueInstance, chi) -> dict:
    return {"q": inst.q, "char": chi.label, "r": inst.r, "V": inst.V}


def check_moment_bound(inst: MeanValueInstance, chi: DirichletCharacter, value: float | None = None) -> VerificationRecord:
    if inst.r < 2:
        raise ValueError("need r >= 2")
    if not is_primitive(chi):
        raise ValueError(f"{chi.label} is not primitive")
    lhs = twisted_moment(inst, chi) if value is None else value
    return check("mean-value", _instance_params(inst, chi), lhs, moment_rhs(inst.q, inst.r, inst.V))


def check_simplified_moment_bound(inst: MeanValueInstance, chi: DirichletCharacter, value: float | None = None) -> VerificationRecord:
    params = _instance_params(inst, chi)
    if inst.r < 2:
        return unmet("mean-value-simplified", params, "r >= 2")
    if inst.V < math.factorial(2 * inst.r - 1) ** 2:
        return unmet("mean-value-simplified", params, "V >= (2r-1)!^2")
    if not is_primitive(chi):
        raise ValueError(f"{chi.label} is not primitive")
    lhs = twisted_moment(inst, chi) if value is None else value
    return check("mean-value-simplified", params, lhs, simplified_moment_rhs(inst.q, inst.r, inst.V))


# ---------------------------------------------------------------------------
# smoothing kernel used to complete the sum over shifts

def kernel_length(q: int, V: int) -> int:
    """L = floor(q/(4V) - 1/2), computed exactly."""
    return (q - 2 * V) // (4 * V)


def inverse_kernel(q: int, V: int, v: int) -> complex:
    """theta(v) = sin(pi v/q) / sin(pi (2L+1) v/q); inverse of the Dirichlet kernel."""
    L = kernel_length(q, V)
    den = math.sin(math.pi * (((2 * L + 1) * v) % (2 * q)) / q)
    if den == 0.0:
        raise ZeroDivisionError(f"kernel singular at v={v} (q={q}, L={L})")
    return math.sin(math.pi * (v % (2 * q)) / q) / den


def verify_inverse_kernel(q: int, V: int) -> VerificationRecord:
    L = kernel_length(q, V)
    params = {"q": q, "V": V, "L": L}
    if L < 0:
        return unmet("inverse-kernel", params, "q/(4V) - 1/2 >= 0")
    ells = np.arange(-L, L + 1)
    roots = roots_of_unity(q)
    worst_id = 0.0
    max_theta = 0.0
    bound = 1 / (L + 0.5)
    for v in range(1, V + 1):
        if ((2 * L + 1) * v) % q == 0:
            return VerificationRecord("inverse-kernel", {**params, "v": v}, None, None, None, SINGULAR)
        theta = inverse_kernel(q, V, v)
        dk = np.sum(roots[(ells * v) % q])
        worst_id = max(worst_id, abs(theta * dk - 1))
        max_theta = max(max_theta, abs(theta))
    params["identity_error"] = worst_id
    params["max_theta"] = max_theta
    params["kernel_bound"] = bound
    # identity error <= 1e-9 and |theta| <= 1/(L+1/2) + 1e-12, as one ratio against 1
    lhs = max(worst_id / 1e-9, max_theta / (bound + 1e-12))
    return check("inverse-kernel", params, lhs, 1.0)
