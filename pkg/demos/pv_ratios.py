"""
How large do character sums get?
================================

The largest partial sum S(chi) of a primitive character, divided by
sqrt(q) log q, for every modulus up to a few hundred. The explicit even and
odd bounds are printed next to the observed maxima.
"""

import math

import numpy as np

from pvbounds import charsum

# one row per primitive character: modulus, label, parity, S(chi), argmax, ratio
rows = list(charsum.pv_ratio_scan(range(3, 400)))
ratio = np.array([r["ratio"] for r in rows])
print(f"{len(rows)} primitive characters, largest ratio {ratio.max():.4f}")

# the record holders
for r in sorted(rows, key=lambda r: -r["ratio"])[:5]:
    print(f"  {r['char_label']:>16}  {r['parity']:>4}  S = {r['S']:8.3f}  at N = {r['argmax_N']}")

# Per parity, the worst character against the closed-form bound.
# The even bound is only claimed from q = 1200 on; below that it is shown for scale.
for parity in ("even", "odd"):
    worst = max((r for r in rows if r["parity"] == parity and r["q"] >= 40),
                key=lambda r: r["S"] / charsum.pv_rhs(r["q"], parity == "even"))
    bound = charsum.pv_rhs(worst["q"], parity == "even")
    print(f"{parity}: q = {worst['q']}, S = {worst['S']:.3f}, bound = {bound:.3f}")

# the leading constant of the even bound tends to 1/(2 pi^2) as q grows
for q in (10**3, 10**6, 10**12):
    print(q, charsum.leading_constant(q, True), 1 / (2 * math.pi**2))
