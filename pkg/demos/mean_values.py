"""
Moments of short twisted character sums
=======================================

The average of |sum_v beta_v chi(lam + v) e(mu v / q)|^(2r) over lam, mu,
computed with one FFT per shift, against the three-term bound.
"""

import numpy as np

from pvbounds import meanvalue
from pvbounds.dirichlet import primitive_characters

q, r = 101, 2
chis = primitive_characters(q)
for V in (2, 6, 12, 36):
    inst = meanvalue.MeanValueInstance(q, r, V)
    vals = meanvalue.twisted_moment_batch(inst, chis)
    # the diagonal term r! q V^r dominates for small V
    print(f"V = {V:3d}  max moment {vals.max():12.1f}  diagonal {2 * q * V**2:10d}"
          f"  bound {meanvalue.moment_rhs(q, r, V):.3e}")

# random unimodular weights do not change the picture much
rng = np.random.default_rng(0)
beta = np.exp(2j * np.pi * rng.random(12))
vals = meanvalue.twisted_moment_batch(meanvalue.MeanValueInstance(q, r, 12, beta), chis)
print("random beta, V = 12:", round(float(vals.max()), 1))

# The complete sums behind the off-diagonal terms
chi = chis[0]
for v in [(1, 2, 3, 4), (1, 2, 1, 2), (0, 5, 7, 50)]:
    s = meanvalue.complete_rational_charsum(q, chi, v)
    print(v, f"|sum| = {abs(s):8.3f}", meanvalue.check_weil_bound(q, chi, v).status)
