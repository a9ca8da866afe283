"""Partial character sums, partial Gaussian sums and the explicit bounds on them."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import arith
from .dirichlet import (DirichletCharacter, _group_data, character_matrix, exponent_tuples,
                        is_primitive, parity, parity_of_exponents, roots_of_unity)
from .records import VerificationRecord, check, unmet

PI = arith.PI
TIE_TOL = 1e-9

PV_EVEN_MIN_Q = 1200
PV_ODD_MIN_Q = 40


@dataclass(frozen=True)
class BoundParameters:
    """Parameters of one explicit inequality. Exactly one of r / ell is set."""

    q: int
    r: int | None = None
    ell: int | None = None
    alpha: float | None = None
    N: int = 1
    M: int = 0
    a: int = 0

    def __post_init__(self):
        if (self.r is None) == (self.ell is None):
            raise ValueError("set exactly one of r and ell")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if not 0 <= self.a < max(self.q, 1):
            raise ValueError(f"twist a={self.a} outside [0, q)")


@dataclass
class SumProfile:
    label: str
    values: np.ndarray        # values[N] = sum_{n<=N} chi(n), N = 0..q
    running_max: np.ndarray   # max_{M<=N} |values[M]|


def partial_sum(chi: DirichletCharacter, M: int, N: int) -> complex:
    """sum_{M < n <= M+N} chi(n)."""
    if N < 0:
        raise ValueError("N must be non-negative")
    q = chi.modulus
    periods, rest = divmod(N, q)
    t = chi.table
    idx = (M + 1 + np.arange(rest)) % q
    head = t[idx]
    total_re = math.fsum(head.real)
    total_im = math.fsum(head.imag)
    if periods:
        total_re += periods * math.fsum(t.real)
        total_im += periods * math.fsum(t.imag)
    return complex(total_re, total_im)


def sum_profile(chi: DirichletCharacter) -> SumProfile:
    # index N holds sum_{1<=n<=N}; n = q wraps to chi(0)
    vals = np.concatenate([[0], np.cumsum(chi.table[np.arange(1, chi.modulus + 1) % chi.modulus])])
    return SumProfile(chi.label, vals, np.maximum.accumulate(np.abs(vals)))


def _argmax_first(absvals: np.ndarray) -> tuple[float, int]:
    m = float(absvals.max())
    idx = int(np.nonzero(absvals >= m - TIE_TOL)[0][0])
    return m, idx


def pv_max(chi: DirichletCharacter) -> tuple[float, int]:
    """S(chi) = max_{1<=N<=q} |sum_{n<=N} chi(n)| and the smallest N attaining it."""
    if chi.is_trivial:
        raise ValueError("pv_max is undefined for the trivial character")
    prof = sum_profile(chi)
    s, idx = _argmax_first(np.abs(prof.values[1:]))
    return s, idx + 1


def pv_max_batch(q: int, exponents, chunk: int = 256) -> tuple[np.ndarray, np.ndarray]:
    """pv_max for many characters mod q at once (rows of exponent tuples)."""
    exps = np.asarray(list(exponents), dtype=np.int64).reshape(-1, len(_group_data(q)[0]))
    S = np.empty(len(exps))
    arg = np.empty(len(exps), dtype=np.int64)
    shift = np.arange(1, q + 1) % q
    for lo in range(0, len(exps), chunk):
        mat = character_matrix(q, exps[lo:lo + chunk])[:, shift]
        absv = np.abs(np.cumsum(mat, axis=1))
        m = absv.max(axis=1)
        S[lo:lo + chunk] = m
        arg[lo:lo + chunk] = np.argmax(absv >= (m - TIE_TOL)[:, None], axis=1) + 1
    return S, arg


def partial_gauss_sum(chi: DirichletCharacter, a: int, M: int, N: int) -> complex:
    """sum_{M < n <= M+N} chi(n) e_q(a n)."""
    if N < 0:
        raise ValueError("N must be non-negative")
    q = chi.modulus
    n = M + 1 + np.arange(N, dtype=np.int64)
    terms = chi.table[n % q] * roots_of_unity(q)[(a * n) % q]
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


# ---------------------------------------------------------------------------
# closed-form right-hand sides

def burgess_constant(q: int, r: int) -> float:
    """2^{6(1+1/r)} (2r)^{omega/2r} tau(q) (q/phi(q))^{1/r} (log q)^{1/2r}."""
    if q < 3:
        raise ValueError(f"burgess_constant needs q >= 3, got {q}")
    if r < 2:
        raise ValueError(f"burgess_constant needs r >= 2, got {r}")
    if not arith.is_squarefree(q):
        raise ValueError(f"{q} is not squarefree")
    om, ta, ph = arith.omega(q), arith.tau(q), arith.phi(q)
    return (2.0 ** (6 * (1 + 1 / r)) * (2.0 * r) ** (om / (2 * r)) * ta
            * (q / ph) ** (1 / r) * math.log(q) ** (1 / (2 * r)))


def partial_gauss_rhs(q: int, r: int, N: float) -> float:
    return 2 * burgess_constant(q, r) * q ** (1 / (4 * (r - 1))) * N ** (1 - 1 / r)


def partial_gauss_length_limit(q: int, r: int) -> float:
    return q ** (0.5 + 1 / (4 * (r - 1)))


def partial_gauss_modulus_condition(q: int) -> bool:
    """q >= (q/phi(q))^4 2^{4 omega(q) - 4}."""
    return q >= (q / arith.phi(q)) ** 4 * 2.0 ** (4 * arith.omega(q) - 4)


def check_partial_gauss_bound(chi: DirichletCharacter, params: BoundParameters) -> VerificationRecord:
    q, r, N, M, a = params.q, params.r, params.N, params.M, params.a
    if not arith.is_squarefree(q):
        raise ValueError(f"{q} is not squarefree")
    if r is None or r < 2:
        raise ValueError("check_partial_gauss_bound needs r >= 2")
    inst = {"char": chi.label, "r": r, "a": a, "M": M, "N": N}
    if not partial_gauss_modulus_condition(q):
        return unmet("partial-gauss", inst, "q >= (q/phi(q))^4 2^(4 omega(q) - 4)")
    if N > partial_gauss_length_limit(q, r):
        return unmet("partial-gauss", inst, "N <= q^(1/2 + 1/(4(r-1)))")
    lhs = abs(partial_gauss_sum(chi, a, M, N))
    return check("partial-gauss", inst, lhs, partial_gauss_rhs(q, r, N))


def pv_rhs(q: int, even: bool) -> float:
    """Best previous explicit Polya-Vinogradov constants (even/odd characters)."""
    sq = math.sqrt(q)
    if even:
        return sq * math.log(q) / PI**2 + 0.5 * sq
    return sq * math.log(q) / (2 * PI) + sq


def check_pv_bound(chi: DirichletCharacter) -> VerificationRecord:
    if not is_primitive(chi):
        raise ValueError(f"{chi.label} is not primitive")
    q = chi.modulus
    even = parity(chi) == "even"
    inst = {"char": chi.label, "parity": "even" if even else "odd"}
    if q < (PV_EVEN_MIN_Q if even else PV_ODD_MIN_Q):
        return unmet("pv-bound", inst, f"q >= {PV_EVEN_MIN_Q if even else PV_ODD_MIN_Q}")
    s, _ = pv_max(chi)
    return check("pv-bound", inst, s, pv_rhs(q, even))


def _loglog_q(q: float) -> float:
    if q < 16:
        raise ValueError(f"need q >= 16 so that log log q > 0, got {q}")
    return math.log(math.log(q))


def power_saving_rhs(q: float, ell: int, alpha: float | None = None, N: float = 1.0) -> float:
    """Power-saving bound for partial Gaussian sums (coefficient of N unless N given).

    Without ``alpha`` the saving is q^{1/(16 l^2 + 8 l) - 1.4/log log q};
    with ``alpha`` it is q^{1/(alpha l^2)}.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    lq = math.log(q)
    llq = _loglog_q(q)
    num = 2.0**7 * (lq * llq) ** (1 / (4 * ell))
    if alpha is None:
        expo = 1 / (16 * ell**2 + 8 * ell) - 1.4 / llq
    else:
        if alpha <= 24:
            raise ValueError("alpha must exceed 24")
        expo = 1 / (alpha * ell**2)
    return num / q**expo * N


def power_saving_hypothesis(q: float, ell: int, alpha: float | None = None) -> bool:
    return _loglog_q(q) >= _log_threshold(ell, alpha)


def _log_threshold(ell: int, alpha: float | None) -> float:
    """Exponent E with the hypothesis log q >= e^E."""
    if alpha is None:
        return 16.0 * ell**2
    return (ell**2 + ell / 2) * alpha / ((alpha - 16) * ell**2 - 8 * ell) * 22.4 * ell**2


def explicit_pv_rhs(q: float, ell: int, alpha: float, even: bool) -> float:
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if alpha <= 24:
        raise ValueError("alpha must exceed 24")
    sq, lq, llq = math.sqrt(q), math.log(q), _loglog_q(q)
    lead = (2 / PI**2 if even else 1 / PI) * (0.25 + 1 / (4 * ell))
    secondary = 2.0**9 * (lq * llq) ** (1 / (4 * ell)) * lq / (PI * q ** (1 / (alpha * ell**2)))
    return lead * sq * lq + (6.5 + secondary) * sq


def explicit_pv_hypothesis(q: float, ell: int, alpha: float) -> bool:
    return _loglog_q(q) >= _log_threshold(ell, alpha)


def simplified_pv_rhs(q: float, ell: int, even: bool) -> float:
    if ell < 2:
        raise ValueError("ell must be >= 2")
    sq, lq = math.sqrt(q), math.log(q)
    _loglog_q(q)
    lead = (2 / PI**2 if even else 1 / PI) * (0.25 + 1 / (4 * ell))
    return lead * sq * lq + (6.5 + 1 / (1088 * ell)) * sq


def simplified_pv_hypothesis(q: float, ell: int) -> bool:
    return _loglog_q(q) >= 1088.0 * ell**2


def leading_constant(ell: int, even: bool) -> float:
    return (2 / PI**2 if even else 1 / PI) * (0.25 + 1 / (4 * ell))


def constants_table(q: float, ell: int, alpha: float = 25.0) -> dict:
    """Every closed-form right-hand side at (q, ell, alpha), with hypothesis status."""
    out = {"q": q, "ell": ell, "alpha": alpha}
    for par, even in (("even", True), ("odd", False)):
        out[f"pv_{par}"] = pv_rhs(q, even)
        out[f"explicit_pv_{par}"] = explicit_pv_rhs(q, ell, alpha, even) if ell >= 2 else None
        out[f"simplified_pv_{par}"] = simplified_pv_rhs(q, ell, even) if ell >= 2 else None
    out["power_saving_coefficient"] = power_saving_rhs(q, ell)
    out["power_saving_alpha_coefficient"] = power_saving_rhs(q, ell, alpha)
    out["hypotheses"] = {
        "power_saving": power_saving_hypothesis(q, ell),
        "power_saving_alpha": power_saving_hypothesis(q, ell, alpha),
        "explicit_pv": explicit_pv_hypothesis(q, ell, alpha),
        "simplified_pv": simplified_pv_hypothesis(q, ell),
    }
    return out


# ---------------------------------------------------------------------------
# sweeps

def pv_ratio_scan(qs: Iterable[int], sink=None) -> Iterator[dict]:
    """Emit (q, char_label, parity, S, argmax_N, ratio) for every primitive character.

    ``sink`` may be a ``csv.writer``; rows are written as they are produced.
    """
    for q in qs:
        if q < 3 or not arith.is_squarefree(q):
            continue
        exps = list(exponent_tuples(q, primitive_only=True))
        if not exps:
            continue
        S, arg = pv_max_batch(q, exps)
        par = parity_of_exponents(q, exps)
        norm = math.sqrt(q) * math.log(q)
        for a, s, n, p in zip(exps, S, arg, par):
            row = {
                "q": q,
                "char_label": f"q={q};a=" + ",".join(str(x) for x in a),
                "parity": "even" if p > 0 else "odd",
                "S": float(s),
                "argmax_N": int(n),
                "ratio": float(s) / norm,
            }
            if sink is not None:
                sink.writerow([row["q"], row["char_label"], row["parity"], f"{row['S']:.17g}",
                               row["argmax_N"], f"{row['ratio']:.17g}"])
            yield row


PV_CSV_HEADER = ["q", "char_label", "parity", "S", "argmax_N", "ratio"]


def write_pv_csv(qs: Iterable[int], fh) -> int:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(PV_CSV_HEADER)
    return sum(1 for _ in pv_ratio_scan(qs, w))


def _conjugate_representatives(q: int) -> list[tuple[int, ...]]:
    """One exponent tuple from each {chi, conj chi} pair of primitive characters."""
    primes = _group_data(q)[0]
    seen = set()
    reps = []
    for a in exponent_tuples(q, primitive_only=True):
        if a in seen:
            continue
        b = tuple((-x) % (p - 1) for p, x in zip(primes, a))
        seen.add(a)
        seen.add(b)
        reps.append(a)
    return reps


def pv_sweep_modulus(q: int) -> list[VerificationRecord]:
    """Worst primitive character of each parity mod q against the explicit even/odd bound."""
    reps = _conjugate_representatives(q)
    if not reps:
        return []
    S, arg = pv_max_batch(q, reps)
    par = parity_of_exponents(q, reps)
    out = []
    for sign, name in ((1, "even"), (-1, "odd")):
        sel = np.nonzero(par == sign)[0]
        if len(sel) == 0:
            continue
        threshold = PV_EVEN_MIN_Q if sign > 0 else PV_ODD_MIN_Q
        inst = {"q": q, "parity": name, "characters": int(len(sel))}
        if q < threshold:
            out.append(unmet("pv-bound", inst, f"q >= {threshold}"))
            continue
        k = sel[np.argmax(S[sel])]
        inst["char"] = f"q={q};a=" + ",".join(str(x) for x in reps[k])
        inst["argmax_N"] = int(arg[k])
        out.append(check("pv-bound", inst, S[k], pv_rhs(q, sign > 0)))
    return out


def partial_gauss_sweep_modulus(q: int, rs=(2, 3), chunk: int = 16) -> list[VerificationRecord]:
    """Worst |partial Gaussian sum| / bound over chi, a, M in {0, q//3}, admissible N."""
    reps = list(exponent_tuples(q, primitive_only=True))
    if not reps:
        return []
    if not partial_gauss_modulus_condition(q):
        return [unmet("partial-gauss", {"q": q, "r": r},
                      "q >= (q/phi(q))^4 2^(4 omega(q) - 4)") for r in rs]
    nmax = {r: min(q, int(math.floor(partial_gauss_length_limit(q, r) + 1e-9))) for r in rs}
    top = max(nmax.values())
    roots = roots_of_unity(q)
    a = np.arange(q, dtype=np.int64)
    worst = {r: (-1.0, None) for r in rs}
    for M in sorted({0, q // 3}):
        n = M + 1 + np.arange(top, dtype=np.int64)
        twist = roots[(a[:, None] * n[None, :]) % q]           # (a, n)
        for lo in range(0, len(reps), chunk):
            block = reps[lo:lo + chunk]
            vals = character_matrix(q, block)[:, n % q]       # (chi, n)
            sums = np.abs(np.cumsum(vals[:, None, :] * twist[None, :, :], axis=2))
            for r in rs:
                N = np.arange(1, nmax[r] + 1)
                rhs = partial_gauss_rhs(q, r, 1.0) * N ** (1 - 1 / r)
                ratio = sums[:, :, : nmax[r]] / rhs
                idx = np.unravel_index(np.argmax(ratio), ratio.shape)
                if ratio[idx] > worst[r][0]:
                    worst[r] = (float(ratio[idx]), (block[idx[0]], int(idx[1]), M, int(idx[2]) + 1,
                                                    float(sums[idx]), float(rhs[idx[2]])))
    out = []
    for r in rs:
        _, (chi_a, aa, M, N, lhs, rhs) = worst[r]
        inst = {"q": q, "r": r, "char": f"q={q};a=" + ",".join(str(x) for x in chi_a),
                "a": aa, "M": M, "N": N, "N_max": nmax[r]}
        out.append(check("partial-gauss", inst, lhs, rhs))
    return out
