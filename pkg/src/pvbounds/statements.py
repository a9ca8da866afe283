"""Registry of checkable statements and the sweeps that exercise them.

Each statement splits its sweep into independent tasks (plain tuples, so
they can be shipped to worker processes) and turns one task into a list of
records. Parameters come from a flat mapping; every key has a default, so
an empty mapping runs the standard sweep.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import arith, charsum, congruence, lattice, lfunc, meanvalue
from .dirichlet import (IDENTITY_TOL, DirichletCharacter, character_matrix, exponent_tuples, fourier_rhs,
                        primitive_characters, roots_of_unity)
from .records import VerificationRecord, check

DEFAULT_SEED = 20190715


@dataclass(frozen=True)
class Statement:
    id: str
    description: str
    tasks: Callable[[dict, int], list]
    run: Callable[[tuple], list]
    defaults: dict


def _int(p, key, default):
    return int(p.get(key, default))


def _floats(p, key, default):
    v = p.get(key, default)
    if isinstance(v, str):
        return [float(x) for x in v.split(",") if x]
    return [float(x) for x in v]


def _ints(p, key, default):
    return [int(x) for x in _floats(p, key, default)]


def _odd_squarefree(lo, hi):
    return [q for q in arith.squarefree_range(max(lo, 1), hi) if q % 2]


# ---------------------------------------------------------------------------
# explicit arithmetic bounds

def _arith_tasks(p, seed):
    lo, hi = max(3, _int(p, "n_min", 3)), _int(p, "n_max", 10**6)
    return [(lo, hi, _int(p, "block", 10**4))]


def _arith_runner(kind):
    def run(task):
        lo, hi, block = task
        tab = arith.sieve_tables(hi)
        n = np.arange(lo, hi + 1, dtype=float)
        ln = np.log(n)
        ll = np.log(ln)
        if kind == "omega":
            value, bound = tab["omega"][lo:].astype(float), ln / ll + arith.OMEGA_CONST * ln / ll**2
        elif kind == "tau":
            value, bound = tab["tau"][lo:].astype(float), np.exp(arith.TAU_CONST * math.log(2) * ln / ll)
        else:
            # lower bound: phi(n) > bound, checked as bound <= phi(n)
            value = n * math.exp(-arith.EULER_GAMMA) / (ll + arith.PHI_CONST / ll)
            bound = tab["phi"][lo:].astype(float)
        out = []
        slack = bound - value
        for start in range(0, len(n), block):
            sl = slice(start, start + block)
            i = start + int(np.argmin(slack[sl] / np.maximum(np.abs(bound[sl]), 1.0)))
            params = {"n_lo": lo + start, "n_hi": min(hi, lo + start + block - 1), "n": lo + i}
            out.append(check(f"{kind}-bound", params, value[i], bound[i]))
        return out
    return run


def _trig_tasks(p, seed):
    step = float(p.get("alpha_step", 0.01))
    count = int(math.floor(2 * math.pi / step + 1e-9))
    alphas = [round(k * step, 12) for k in range(count + 1)]
    xmax = _int(p, "x_max", 1000)
    return [(tuple(alphas[i:i + 64]), xmax) for i in range(0, len(alphas), 64)]


def _trig_run(task):
    alphas, xmax = task
    a = np.array(alphas)[:, None]
    n = np.arange(1, xmax + 1, dtype=float)[None, :]
    first = np.cumsum(2.0 * np.sin(a * n / 2.0) ** 2 / n, axis=1)
    second = np.cumsum(np.abs(np.sin(a * n)) / n, axis=1)
    # the sums are constant on [m, m+1); the bound is least at the left end for m >= 3
    # and at the right end for m = 1, 2 (where log x + 3/x still decreases)
    xs = np.arange(1, xmax + 1, dtype=float)
    xs_eff = xs.copy()
    xs_eff[:2] = np.nextafter(xs[:2] + 1, 0) if xmax >= 2 else xs_eff[:2]
    xs_eff = np.minimum(xs_eff, xmax)
    c = arith.EULER_GAMMA + math.log(2) + 3.0 / xs_eff
    b1 = np.log(xs_eff) + c
    b2 = (2.0 / arith.PI) * b1
    out = []
    for j, alpha in enumerate(alphas):
        for name, vals, bnd in (("cosine", first[j], b1), ("sine", second[j], b2)):
            i = int(np.argmin(bnd - vals))
            out.append(check("trig-sums", {"alpha": alpha, "sum": name, "x": float(xs_eff[i])}, vals[i], bnd[i]))
    return out


def _sieve_tasks(p, seed):
    qmax, umax = _int(p, "q_max", 100), _int(p, "U_max", 100)
    agg = p.get("aggregate", "auto")
    per_q = (qmax * umax > 200_000) if agg == "auto" else str(agg).lower() in ("1", "true", "yes")
    qs = list(range(max(1, _int(p, "q_min", 1)), qmax + 1))
    return [(tuple(qs[i:i + 200]), umax, per_q) for i in range(0, len(qs), 200)]


def _sieve_run(task):
    qs, umax, per_q = task
    u = np.arange(0, umax + 1)
    out = []
    for q in qs:
        coprime = np.concatenate(([0], np.cumsum(np.gcd(u[1:], q) == 1)))
        ph, w = arith.phi(q), 2 ** arith.omega(q)
        # |count - phi U / q| scaled by q stays an exact integer
        dev_num = np.abs(coprime * q - ph * u)
        if per_q:
            U = int(np.argmax(dev_num))
            out.append(check("sieve-count", {"q": q, "U": U, "U_max": umax}, dev_num[U] / q, float(w)))
        else:
            for U in range(1, umax + 1):
                out.append(check("sieve-count", {"q": q, "U": U}, dev_num[U] / q, float(w)))
    return out


def _congruence_tasks(p, seed):
    grid = congruence.random_grid(_int(p, "count", 500), seed, _int(p, "q_min", 300), _int(p, "q_max", 10**5))
    return [tuple((x.q, x.M, x.N, x.U) for x in grid[i:i + 25]) for i in range(0, len(grid), 25)]


def _congruence_run(task):
    return [congruence.check_congruence_count(congruence.CongruenceCountInstance(*t)) for t in task]


# ---------------------------------------------------------------------------
# geometry of numbers

DETERMINISTIC_LATTICES = [
    ([[1, 0], [0, 1]], [1, 1]),
    ([[1, 0], [0, 1]], ["2", "1/2"]),
    ([[3, 0], [0, 1]], [1, 1]),
    ([[1, 0], [0, 1]], ["5/2", "5/2"]),
    ("congruence", [1, 1]),
]


def _lattice_tasks(p, seed):
    count = _int(p, "count", 200)
    ranks = _ints(p, "ranks", [2, 3, 4])
    tasks = [("fixed", i) for i in range(len(DETERMINISTIC_LATTICES))]
    for d in ranks:
        for lo in range(0, count, 50):
            tasks.append(("random", d, seed, lo, min(count, lo + 50)))
    return tasks


def _lattice_instance(task):
    if task[0] == "fixed":
        basis, widths = DETERMINISTIC_LATTICES[task[1]]
        L = lattice.congruence_lattice([2, 3], 5) if basis == "congruence" else lattice.LatticeInstance(basis)
        return [(L, lattice.BoxBody(widths), {"instance": f"fixed-{task[1]}"})]
    _, d, seed, lo, hi = task
    inst = lattice.random_instances(hi, d, seed)[lo:hi]
    return [(L, D, {"instance": f"random-{d}-{lo + i}", "seed": seed}) for i, (L, D) in enumerate(inst)]


def _lattice_runner(checker):
    def run(task):
        out = []
        for L, D, extra in _lattice_instance(task):
            rec = checker(L, D)
            rec.params.update(extra)
            out.append(rec)
        return out
    return run


# ---------------------------------------------------------------------------
# character sums

def _weil_tasks(p, seed):
    qs = _odd_squarefree(_int(p, "q_min", 15), _int(p, "q_max", 105))
    qs = [q for q in qs if q >= 3]
    count = _int(p, "count", 10**4)
    rs = _ints(p, "r", [2, 3])
    per = 500
    return [(qs, rs, seed, lo, min(count, lo + per)) for lo in range(0, count, per)]


def _weil_run(task):
    qs, rs, seed, lo, hi = task
    out = []
    for k in range(lo, hi):
        rng = random.Random(seed * 1_000_003 + k)
        q = rng.choice(qs)
        r = rng.choice(rs)
        exps = tuple(rng.randrange(1, p - 1) for p in arith.factorize(q).prime_list)
        while True:
            v = tuple(rng.randrange(q) for _ in range(2 * r))
            if len(set(v)) >= r + 1:
                break
        rec = meanvalue.check_weil_bound(q, DirichletCharacter(q, exps), v)
        rec.params["sample"] = k
        out.append(rec)
    return out


def _mean_tasks(p, seed):
    qs = [q for q in _odd_squarefree(_int(p, "q_min", 3), _int(p, "q_max", 105)) if q >= 3]
    Vs = _ints(p, "V", [2, 6, 12])
    draws = _int(p, "draws", 20)
    r = _int(p, "r", 2)
    return [(q, r, V, draws, seed) for q in qs for V in Vs if V < q]


def _mean_run(task):
    q, r, V, draws, seed = task
    chis = primitive_characters(q)
    if not chis:
        return []
    rng = np.random.default_rng([seed, q, V])
    betas = [np.ones(V, dtype=complex)] + [np.exp(2j * np.pi * rng.random(V)) for _ in range(draws)]
    out = []
    for b, beta in enumerate(betas):
        inst = meanvalue.MeanValueInstance(q, r, V, beta)
        vals = meanvalue.twisted_moment_batch(inst, chis)
        k = int(np.argmax(vals))
        rec = meanvalue.check_moment_bound(inst, chis[k], float(vals[k]))
        rec.params.update({"q": q, "beta": "ones" if b == 0 else f"draw-{b}", "characters": len(chis)})
        out.append(rec)
    return out


def _cor53_tasks(p, seed):
    tasks = [(q, 2, 36) for q in _ints(p, "q", [41, 101])]
    big_q = _int(p, "big_q", 14401)
    if big_q:
        tasks.append((big_q, 3, _int(p, "big_V", 14400)))
    return tasks


def _cor53_run(task):
    q, r, V = task
    inst = meanvalue.MeanValueInstance(q, r, V)
    chis = primitive_characters(q) if r == 2 else [DirichletCharacter(q, (1,) * len(arith.factorize(q).primes))]
    vals = meanvalue.twisted_moment_batch(inst, chis)
    return [meanvalue.check_simplified_moment_bound(inst, c, float(v)) for c, v in zip(chis, vals)]


def _pg_tasks(p, seed):
    return [(q,) for q in _odd_squarefree(_int(p, "q_min", 3), _int(p, "q_max", 200)) if q >= 3]


def _pg_run(task):
    return charsum.partial_gauss_sweep_modulus(task[0])


def _pv_tasks(p, seed):
    qs = arith.squarefree_range(_int(p, "q_min", 40), _int(p, "q_max", 3000))
    return [tuple(qs[i:i + 40]) for i in range(0, len(qs), 40)]


def _pv_run(task):
    return [rec for q in task for rec in charsum.pv_sweep_modulus(q)]


def _gauss_tasks(p, seed):
    qs = [q for q in _odd_squarefree(_int(p, "q_min", 3), _int(p, "q_max", 500)) if q >= 3]
    return [tuple(qs[i:i + 20]) for i in range(0, len(qs), 20)]


def _gauss_run(task):
    out = []
    for q in task:
        exps = list(exponent_tuples(q, primitive_only=True))
        vals = character_matrix(q, exps) @ roots_of_unity(q)
        err = np.abs(np.abs(vals) - math.sqrt(q))
        k = int(np.argmax(err))
        label = f"q={q};a=" + ",".join(map(str, exps[k]))
        params = {"q": q, "char": label, "characters": len(exps), "error": float(err[k])}
        out.append(check("gauss-modulus", params, err[k] / IDENTITY_TOL, 1.0))
    return out


def _fourier_tasks(p, seed):
    qs = [q for q in _odd_squarefree(_int(p, "q_min", 3), _int(p, "q_max", 200)) if q >= 3]
    return [tuple(qs[i:i + 20]) for i in range(0, len(qs), 20)]


def _fourier_run(task):
    out = []
    for q in task:
        worst = (-1.0, None, None)
        n = np.arange(q)
        for chi in primitive_characters(q):
            err = np.abs(fourier_rhs(chi, n) - chi.table)
            i = int(np.argmax(err))
            if err[i] > worst[0]:
                worst = (float(err[i]), chi.label, i)
        params = {"q": q, "char": worst[1], "n": worst[2], "error": worst[0]}
        out.append(check("fourier-expansion", params, worst[0] / IDENTITY_TOL, 1.0))
    return out


def _kernel_tasks(p, seed):
    return [(q, V) for q in range(_int(p, "q_min", 20), _int(p, "q_max", 300) + 1, _int(p, "q_step", 7))
            for V in _ints(p, "V", [1, 2, 3, 5, 8])]


def _kernel_run(task):
    return [meanvalue.verify_inverse_kernel(*task)]


# ---------------------------------------------------------------------------
# L-functions

def _discriminants(p, lo_key, hi_key, lo, hi):
    return lfunc.fundamental_discriminants(_int(p, lo_key, lo), _int(p, hi_key, hi))


def _cnf_tasks(p, seed):
    ds = (_discriminants(p, "d_min", "d_neg_max", -1000, -1)
          + _discriminants(p, "d_pos_min", "d_max", 2, 500))
    return [tuple(ds[i:i + 50]) for i in range(0, len(ds), 50)]


def _cnf_run(task):
    return [lfunc.check_class_number_formula(d) for d in task]


def _zero_tasks(p, seed):
    dmax = _int(p, "d_max", 1000)
    ds = lfunc.fundamental_discriminants(-dmax, dmax)
    lo, hi, step = float(p.get("sigma_lo", 0.8)), float(p.get("sigma_hi", 0.999)), float(p.get("step", 1e-3))
    return [(tuple(ds[i:i + 40]), lo, hi, step) for i in range(0, len(ds), 40)]


def _zero_run(task):
    ds, lo, hi, step = task
    return [lfunc.zero_scan_record(lfunc.scan_real_zeros(d, lo, hi, step)) for d in ds]


def _abel_tasks(p, seed):
    dmax = _int(p, "d_max", 200)
    sigmas = _floats(p, "sigma", [0.7, 0.9, 0.99])
    C2 = _int(p, "C2", 10**4)
    C1 = p.get("C1")
    return [(d, s, int(C1) if C1 is not None else lfunc.abel_default_head_cutoff(s), C2)
            for d in lfunc.fundamental_discriminants(-dmax, dmax) for s in sigmas]


def _abel_run(task):
    return [lfunc.check_abel_bound(*task)]


STATEMENTS: dict[str, Statement] = {s.id: s for s in [
    Statement("omega-bound", "number of distinct prime factors against its explicit upper bound",
              _arith_tasks, _arith_runner("omega"), {"n_min": 3, "n_max": 10**6}),
    Statement("tau-bound", "number of divisors against its explicit upper bound",
              _arith_tasks, _arith_runner("tau"), {"n_min": 3, "n_max": 10**6}),
    Statement("phi-bound", "Euler phi against its explicit lower bound",
              _arith_tasks, _arith_runner("phi"), {"n_min": 3, "n_max": 10**6}),
    Statement("trig-sums", "sums of (1-cos an)/n and |sin an|/n against log x + constants",
              _trig_tasks, _trig_run, {"alpha_step": 0.01, "x_max": 1000}),
    Statement("sieve-count", "integers up to U coprime to q against phi(q)U/q + 2^omega(q)",
              _sieve_tasks, _sieve_run, {"q_max": 100, "U_max": 100}),
    Statement("congruence-count", "solutions of n1 u1 = n2 u2 mod q against 2UN(NU/q + log 1.85U)",
              _congruence_tasks, _congruence_run, {"count": 500, "q_min": 300, "q_max": 10**5}),
    Statement("minkowski-second", "product of successive minima against the volume ratio",
              _lattice_tasks, _lattice_runner(lattice.check_minkowski_second), {"count": 200, "ranks": "2,3,4"}),
    Statement("point-count", "lattice points in a box against the successive-minima product",
              _lattice_tasks, _lattice_runner(lattice.check_point_count_bound), {"count": 200, "ranks": "2,3,4"}),
    Statement("transference", "minima of a lattice and its dual against (d!)^2",
              _lattice_tasks, _lattice_runner(lattice.check_transference), {"count": 200, "ranks": "2,3,4"}),
    Statement("weil-sum", "complete sums of characters of rational functions against the Weil-type bound",
              _weil_tasks, _weil_run, {"count": 10**4, "q_min": 15, "q_max": 105, "r": "2,3"}),
    Statement("mean-value", "complete 2r-th moment of short twisted sums against the three-term bound",
              _mean_tasks, _mean_run, {"q_max": 105, "r": 2, "V": "2,6,12", "draws": 20}),
    Statement("mean-value-simplified", "complete 2r-th moment against the simplified two-term bound",
              _cor53_tasks, _cor53_run, {"q": "41,101", "big_q": 14401, "big_V": 14400}),
    Statement("partial-gauss", "partial Gaussian sums against the Burgess-type bound",
              _pg_tasks, _pg_run, {"q_max": 200}),
    Statement("pv-bound", "Polya-Vinogradov maximum against the explicit even/odd bounds",
              _pv_tasks, _pv_run, {"q_min": 40, "q_max": 3000}),
    Statement("gauss-modulus", "|tau(chi)| = sqrt q for primitive characters",
              _gauss_tasks, _gauss_run, {"q_max": 500}),
    Statement("fourier-expansion", "chi(n) recovered from its finite Fourier expansion",
              _fourier_tasks, _fourier_run, {"q_max": 200}),
    Statement("inverse-kernel", "inverse Dirichlet kernel identity and size bound",
              _kernel_tasks, _kernel_run, {"q_min": 20, "q_max": 300, "q_step": 7, "V": "1,2,3,5,8"}),
    Statement("class-number-formula", "L(1, chi_d) against the class number formula",
              _cnf_tasks, _cnf_run, {"d_min": -1000, "d_max": 500}),
    Statement("zero-scan", "sign changes of L(s, chi_d) on a real grid",
              _zero_tasks, _zero_run, {"d_max": 1000, "sigma_lo": 0.8, "sigma_hi": 0.999, "step": 1e-3}),
    Statement("abel-bound", "|L'(s, chi_d)| against the Abel-summation bound",
              _abel_tasks, _abel_run, {"d_max": 200, "sigma": "0.7,0.9,0.99", "C2": 10**4}),
]}


def execute(task: tuple) -> list[VerificationRecord]:
    """Run one (statement id, task) pair; top level so worker processes can import it."""
    sid, payload = task
    return STATEMENTS[sid].run(payload)
