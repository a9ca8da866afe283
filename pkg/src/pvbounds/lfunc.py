"""Real primitive L-functions on (0, 1.5], class numbers and real-zero scans.

L(s, chi_d) for the Kronecker character chi_d = (d/.) is summed directly up
to a cutoff T that is a multiple of |d|. The tail beyond T is handled by
repeated summation by parts against the periodic partial sums of chi_d:
at each level the mean of the current periodic sequence is split off and
contributes an exactly computable term, and after k levels what remains is
bounded by

    max |B_k| * |f^(k-1)(T+1)|,

where B_k is the mean-free k-th iterated partial sum. This is valid as long
as (-1)^k f^(k) >= 0 beyond T, which always holds for x^-s and holds for
log(x) x^-s once log(T+1) exceeds sum_{i<k} 1/(s+i). Level 1 is the plain
partial-sum bound; higher levels need much smaller cutoffs.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from .dirichlet import is_fundamental_discriminant, kronecker
from .records import INDETERMINATE, VerificationRecord, check, unmet

EPS_MACHINE = 2.0**-52
MAX_LEVEL = 4
MAX_CUTOFF = 200_000_000
CHUNK = 1 << 20


def _validate(d: int, sigma=None):
    if not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    if sigma is not None:
        s = np.atleast_1d(np.asarray(sigma, dtype=float))
        if np.any(s <= 0) or np.any(s > 1.5):
            raise ValueError("need 0 < sigma <= 1.5")


@lru_cache(maxsize=256)
def character_table(d: int) -> np.ndarray:
    """chi_d(n) for n = 0..|d|-1 as int8."""
    q = abs(d)
    t = np.array([kronecker(d, n) for n in range(q)], dtype=np.int8)
    t.setflags(write=False)
    return t


@lru_cache(maxsize=256)
def _tail_data(d: int):
    """Exact means m_1..m_K and max |B_k| for the iterated periodic partial sums."""
    chi = character_table(d)
    q = len(chi)
    # level j is stored multiplied by q^(j-1) so everything stays an exact integer
    A1 = np.cumsum(np.concatenate((chi[1:], chi[:1])).astype(object))   # sum_{n<=k}, k = 1..q
    means, maxb, pv = [], [], int(max(abs(int(x)) for x in A1))
    level = A1
    scale = 1
    for _ in range(MAX_LEVEL):
        total = int(sum(level))
        m = Fraction(total, q * scale)
        B = level * q - total                       # q*scale*(A - m)
        scale *= q
        means.append(m)
        maxb.append(Fraction(int(max(abs(int(x)) for x in B)), scale))
        level = np.cumsum(B)                        # next level, times scale
    return tuple(means), tuple(maxb), pv


def _poch(s, k):
    out = np.ones_like(s)
    for i in range(k):
        out = out * (s + i)
    return out


def _tail_bound(maxb, s, k, x, deriv):
    """max|B_k| * |f^(k-1)(x)| for f = x^-s (deriv=False) or log(x) x^-s."""
    b = _poch(s, k - 1) * x ** (-s - k + 1) * float(maxb)
    if deriv:
        b = b * np.log(x)
    return b


def _needs_log(s, k):
    return sum(1.0 / (s + i) for i in range(k))


def _choose_cutoff(d, s, eps, deriv):
    """Smallest multiple of q (over levels 1..MAX_LEVEL) whose tail bound is <= eps/2."""
    q = abs(d)
    _, maxb, _ = _tail_data(d)
    best = None
    for k in range(1, MAX_LEVEL + 1):
        if maxb[k - 1] == 0:
            return q, k
        x = (float(maxb[k - 1]) * _poch(np.float64(s), k - 1) * 2 / eps) ** (1.0 / (s + k - 1))
        T = max(q, int(math.ceil(x / q)) * q)
        if deriv:
            need = math.exp(_needs_log(s, k))
            T = max(T, int(math.ceil(need / q)) * q)
            while _tail_bound(maxb[k - 1], s, k, T + 1.0, True) > eps / 2:
                T *= 2
        if best is None or T < best[0]:
            best = (T, k)
    return best


def _g_level(s, j, x, deriv):
    """(-Delta)^(j-1) f(x), with f = x^-s or log(x) x^-s."""
    val = 0.0
    for i in range(j):
        y = x + i
        term = y ** (-s) * (math.log(y) if deriv else 1.0)
        val += (-1) ** i * math.comb(j - 1, i) * term
    return val


@dataclass
class LValue:
    d: int
    sigma: float
    value: float
    error: float
    cutoff: int
    level: int
    derivative: bool = False


@dataclass(frozen=True)
class LFunctionQuery:
    d: int
    sigma: float
    eps: float = 1e-10

    def __post_init__(self):
        _validate(self.d, self.sigma)
        if not self.eps > 0:
            raise ValueError("precision target must be positive")


def _direct_sums(d: int, sigmas: np.ndarray, T: int, deriv: bool):
    """sum_{n<=T} chi(n) w(n) n^-s for each s, plus sum of |terms| for rounding slack."""
    chi = character_table(d).astype(float)
    q = len(chi)
    S = len(sigmas)
    step = max(q, (CHUNK // max(S, 1)) // q * q)
    parts, abs_parts = [], []
    for lo in range(1, T + 1, step):
        n = np.arange(lo, min(T, lo + step - 1) + 1, dtype=np.float64)
        c = chi[(np.arange(lo, lo + len(n))) % q]
        mask = c != 0
        n, c = n[mask], c[mask]
        logn = np.log(n)
        terms = np.exp(-np.outer(logn, sigmas)) * c[:, None]
        if deriv:
            terms *= -logn[:, None]
        parts.append(terms.sum(axis=0))
        abs_parts.append(np.abs(terms).sum(axis=0))
    vals = np.array([math.fsum(p[i] for p in parts) for i in range(S)])
    mags = np.array([math.fsum(p[i] for p in abs_parts) for i in range(S)])
    return vals, mags


def evaluate_many(d: int, sigmas, eps: float = 1e-10, deriv: bool = False) -> list[LValue]:
    """Certified values of L(s, chi_d) (or L'(s, chi_d)) at several real s."""
    _validate(d, sigmas)
    sig = np.atleast_1d(np.asarray(sigmas, dtype=float))
    means, maxb, _ = _tail_data(d)
    choices = [_choose_cutoff(d, float(s), eps, deriv) for s in sig]
    T = max(c[0] for c in choices)
    if T > MAX_CUTOFF:
        raise ValueError(f"precision {eps} needs cutoff {T} > {MAX_CUTOFF}")
    vals, mags = _direct_sums(d, sig, T, deriv)
    out = []
    for i, s in enumerate(sig):
        s = float(s)
        # the same T serves every level; pick the level with the tightest bound at T
        bounds = [float(_tail_bound(maxb[k - 1], s, k, T + 1.0, deriv)) for k in range(1, MAX_LEVEL + 1)]
        admissible = [k for k in range(1, MAX_LEVEL + 1)
                      if not deriv or math.log(T + 1.0) >= _needs_log(s, k)]
        k = min(admissible, key=lambda k: bounds[k - 1])
        sign = -1.0 if deriv else 1.0
        corr = sign * sum(float(means[j - 1]) * _g_level(s, j, T + 1.0, deriv) for j in range(1, k + 1))
        rounding = (math.log2(T) + 8) * EPS_MACHINE * (mags[i] + abs(corr) + 1.0)
        out.append(LValue(d, s, float(vals[i] + corr), float(bounds[k - 1] + rounding), T, k, deriv))
    return out


def evaluate_L(query: LFunctionQuery) -> LValue:
    return evaluate_many(query.d, [query.sigma], query.eps)[0]


def evaluate_L_prime(query: LFunctionQuery) -> LValue:
    return evaluate_many(query.d, [query.sigma], query.eps, deriv=True)[0]


def pv_max_of(d: int) -> int:
    """max over k of |sum_{n<=k} chi_d(n)|."""
    _validate(d)
    return _tail_data(d)[2]


# ---------------------------------------------------------------------------
# class numbers

@dataclass
class ClassNumberResult:
    d: int
    h: int
    w: int | None = None
    v0: int | None = None
    u0: int | None = None
    eta: float | None = None
    narrow: bool = False


def reduced_forms_negative(d: int) -> list[tuple[int, int, int]]:
    """Reduced positive definite forms (a, b, c) of discriminant d < 0."""
    out = []
    D = -d
    a = 1
    while 3 * a * a <= D:
        for b in range(-a + 1, a + 1):
            if (b * b + D) % (4 * a):
                continue
            c = (b * b + D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                out.append((a, b, c))
        a += 1
    return out


def reduced_forms_positive(d: int) -> list[tuple[int, int, int]]:
    """Reduced indefinite forms: 0 < b < sqrt d, sqrt d - b < 2|a| < sqrt d + b."""
    s = math.isqrt(d)
    sq = math.sqrt(d)
    out = []
    for b in range(1, s + 1):
        if (b - d) % 2:
            continue
        n = (d - b * b) // 4               # -a*c
        if n <= 0:
            continue
        for a in range(1, n + 1):
            if n % a:
                continue
            if not (sq - b < 2 * a < sq + b):
                continue
            for sa in (a, -a):
                c = -n // sa
                if math.gcd(math.gcd(a, b), abs(c)) == 1:
                    out.append((sa, b, c))
    return out


def _rho(form, d):
    a, b, c = form
    s = math.isqrt(d)
    m = 2 * abs(c)
    r = s - ((s + b) % m)
    return (c, r, (r * r - d) // (4 * c))


def narrow_class_number(d: int) -> int:
    """Number of cycles of reduced indefinite forms under the reduction step."""
    forms = set(reduced_forms_positive(d))
    seen, cycles = set(), 0
    for f in sorted(forms):
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            if g not in forms:
                raise RuntimeError(f"reduction left the reduced set at {g}")
            seen.add(g)
            g = _rho(g, d)
    return cycles


def _cf_unit(D: int, P: int, Q: int, half: bool) -> tuple[int, int]:
    """First convergent p/q of (P + sqrt D)/Q giving a unit; returns (v, u) with v^2 - d u^2 = +-4."""
    s = math.isqrt(D)
    p0, p1 = 0, 1
    q0, q1 = 1, 0
    while True:
        a = (P + s) // Q
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
        if half:
            v, u, dd = 2 * p1 - q1, q1, D
        else:
            v, u, dd = 2 * p1, q1, 4 * D
        if abs(v * v - dd * u * u) == 4:
            return v, u
        P = a * Q - P
        Q = (D - P * P) // Q


def fundamental_unit(d: int) -> tuple[int, int]:
    """Least (v0, u0) > 0 with v0^2 - d u0^2 = 4 (the smallest unit of norm +1)."""
    _validate(d)
    if d <= 0:
        raise ValueError("need d > 0")
    if d % 4 == 1:
        v, u = _cf_unit(d, 1, 2, half=True)
    else:
        v, u = _cf_unit(d // 4, 0, 1, half=False)
    if v * v - d * u * u == -4:
        v, u = (v * v + d * u * u) // 2, u * v
    return v, u


def pell_scan(d: int, umax: int = 10**5) -> tuple[int, int] | None:
    """Brute-force search for the least u with d u^2 + 4 a perfect square."""
    for u in range(1, umax + 1):
        t = d * u * u + 4
        v = math.isqrt(t)
        if v * v == t:
            return v, u
    return None


def class_number(d: int) -> ClassNumberResult:
    _validate(d)
    if d < 0:
        if -d > 10**6:
            raise ValueError("|d| above 1e6 not supported")
        w = {-3: 6, -4: 4}.get(d, 2)
        return ClassNumberResult(d, len(reduced_forms_negative(d)), w=w)
    if d > 10**4:
        raise ValueError("d above 1e4 not supported")
    v, u = fundamental_unit(d)
    eta = (v + u * math.sqrt(d)) / 2
    return ClassNumberResult(d, narrow_class_number(d), v0=v, u0=u, eta=eta, narrow=True)


def class_number_formula_value(res: ClassNumberResult) -> float:
    if res.d < 0:
        return 2 * math.pi * res.h / (res.w * math.sqrt(-res.d))
    # log eta computed without cancellation from v0, u0
    log_eta = math.log(res.v0 / 2 + res.u0 * math.sqrt(res.d) / 2)
    return res.h * log_eta / math.sqrt(res.d)


def check_class_number_formula(d: int, eps: float = 1e-9) -> VerificationRecord:
    res = class_number(d)
    L = evaluate_L(LFunctionQuery(d, 1.0, eps))
    formula = class_number_formula_value(res)
    params = {"d": d, "h": res.h, "L1": L.value, "certified_error": L.error, "formula": formula}
    return check("class-number-formula", params, abs(L.value - formula), max(1e-6, 3 * L.error))


# ---------------------------------------------------------------------------
# exceptional-zero machinery

def exclusion_radius(q: float, ell: float) -> float:
    if q < 3 or ell < 2:
        raise ValueError("need q >= 3 and ell >= 2")
    lq = math.log(q)
    return 3200 * math.pi * (ell / (ell + 1)) ** 2 / (math.sqrt(q) * lq * lq)


def l1_lower_bound_ratio(d: int, eps: float = 1e-10) -> float:
    """L(1, chi_d) sqrt|d| / (100 pi), the observed ratio against the lower bound."""
    L = evaluate_L(LFunctionQuery(d, 1.0, eps))
    return L.value * math.sqrt(abs(d)) / (100 * math.pi)


@dataclass
class ZeroScanReport:
    d: int
    interval: tuple[float, float]
    step: float
    brackets: list = field(default_factory=list)
    indeterminate: list = field(default_factory=list)
    exclusion_radius: float | None = None

    def to_json(self) -> str:
        out = asdict(self)
        out["interval"] = list(self.interval)
        return json.dumps(out, sort_keys=True)


SCAN_EPS = (1e-4, 1e-8, 1e-12)


def _certain_sign(d, s):
    for eps in SCAN_EPS:
        v = evaluate_many(d, [s], eps)[0]
        if abs(v.value) > v.error:
            return 1 if v.value > 0 else -1
    return 0


def scan_real_zeros(d: int, sigma_lo: float, sigma_hi: float, step: float, ell: int = 2) -> ZeroScanReport:
    _validate(d)
    if not 0 < sigma_lo < sigma_hi <= 1:
        raise ValueError("need 0 < sigma_lo < sigma_hi <= 1")
    count = int(round((sigma_hi - sigma_lo) / step))
    grid = [sigma_lo + i * step for i in range(count + 1)]
    if grid[-1] > sigma_hi:
        grid[-1] = sigma_hi
    signs = np.zeros(len(grid), dtype=int)
    vals = evaluate_many(d, grid, SCAN_EPS[0])
    for i, v in enumerate(vals):
        if abs(v.value) > v.error:
            signs[i] = 1 if v.value > 0 else -1
        else:
            signs[i] = _certain_sign(d, grid[i])
    q = abs(d)
    report = ZeroScanReport(d, (sigma_lo, sigma_hi), step,
                            exclusion_radius=exclusion_radius(q, ell) if q >= 3 else None)
    report.indeterminate = [grid[i] for i in range(len(grid)) if signs[i] == 0]
    known = [i for i in range(len(grid)) if signs[i] != 0]
    for i, j in zip(known, known[1:]):
        if signs[i] != signs[j]:
            report.brackets.append(_bisect(d, grid[i], grid[j], signs[i]))
    return report


def _bisect(d, lo, hi, sign_lo, width=1e-8):
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        s = _certain_sign(d, mid)
        if s == 0:
            break
        if s == sign_lo:
            lo = mid
        else:
            hi = mid
    return [lo, hi]


def abel_f(x, sigma):
    return np.log(x) / np.power(x, sigma)


def abel_fprime(x, sigma):
    return np.power(x, -sigma - 1) * (1 - sigma * np.log(x))


def abel_rhs(sigma: float, C1: int, C2: int, M: float) -> tuple[float, float]:
    """The four-term bound with V(x) = min(x, M); returns (value, quadrature error)."""
    n = np.arange(2, C1 + 1, dtype=float)
    head = math.fsum(abel_f(n, sigma))

    def integrand(x):
        return min(x, M) * abel_fprime(x, sigma)

    integral, err = 0.0, 0.0
    if C2 > C1:
        pts = [M] if C1 < M < C2 else None
        integral, err = integrate.quad(integrand, C1, C2, points=pts, epsabs=1e-12, epsrel=1e-12, limit=500)
    value = head + M * float(abel_f(C2, sigma)) - C1 * float(abel_f(C1, sigma)) - integral
    return value, err


def abel_integral_closed_form(sigma: float, C1: float, C2: float, M: float) -> float:
    """Exact value of int_{C1}^{C2} min(x, M) f'(x) dx for sigma != 1."""
    def F(x):      # antiderivative of f
        a = 1 - sigma
        return x**a * (math.log(x) / a - 1 / a**2)

    def f(x):
        return math.log(x) / x**sigma

    b = min(max(M, C1), C2)
    lower = b * f(b) - C1 * f(C1) - (F(b) - F(C1))      # int x f' over [C1, b]
    upper = M * (f(C2) - f(b))                          # int M f' over [b, C2]
    return lower + upper


def monotone_free_head(sigma: float, C1: int) -> float:
    """sum_{n<C1} n |f(n) - f(n+1)|: the head term Abel summation gives without monotonicity.

    It equals the stated head sum_{2<=n<=C1} f(n) - C1 f(C1) exactly when f
    decreases on [1, C1], and exceeds it otherwise.
    """
    n = np.arange(1, C1, dtype=float)
    return math.fsum(n * np.abs(abel_f(n, sigma) - abel_f(n + 1, sigma)))


def abel_default_head_cutoff(sigma: float) -> int:
    """One decade above the knee e^(1/sigma) of log(x)/x^sigma."""
    return 10 * math.ceil(math.exp(1 / sigma))


def check_abel_bound(d: int, sigma: float, C1: int, C2: int, eps: float = 1e-10) -> VerificationRecord:
    _validate(d, sigma)
    M = pv_max_of(d)
    params = {"d": d, "sigma": sigma, "C1": C1, "C2": C2, "M": M}
    if C1 > C2:
        raise ValueError("need C1 <= C2")
    if not math.log(C1) > 1 / sigma:
        return unmet("abel-bound", params, "f decreasing on [C1, C2]: C1 > e^(1/sigma)")
    deriv = evaluate_L_prime(LFunctionQuery(d, sigma, eps))
    rhs, qerr = abel_rhs(sigma, C1, C2, M)
    params["derivative"] = deriv.value
    params["certified_error"] = deriv.error
    params["monotone_free_head"] = monotone_free_head(sigma, C1)
    # charge both the tail error and the quadrature error against the claim
    return check("abel-bound", params, abs(deriv.value) + deriv.error, rhs - qerr)


def zero_scan_record(report: ZeroScanReport) -> VerificationRecord:
    params = {"d": report.d, "interval": list(report.interval), "step": report.step,
              "brackets": report.brackets, "indeterminate": report.indeterminate}
    if report.indeterminate:
        return VerificationRecord("zero-scan", params, None, None, None, INDETERMINATE)
    found = len(report.brackets)
    return VerificationRecord("zero-scan", params, float(found), 0.0, -float(found), "fail" if found else "pass")


def fundamental_discriminants(lo: int, hi: int) -> list[int]:
    return [d for d in range(lo, hi + 1) if is_fundamental_discriminant(d)]
