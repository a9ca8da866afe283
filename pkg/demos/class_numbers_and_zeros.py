"""
Real characters, class numbers and real zeros
=============================================

L(1, chi_d) computed with a certified tail is compared with the class
number formula, and L(s, chi_d) is scanned for sign changes near s = 1.
"""

import math

from pvbounds import lfunc
from pvbounds.lfunc import LFunctionQuery

# A few imaginary quadratic fields
for d in (-3, -4, -23, -47, -163):
    res = lfunc.class_number(d)
    L = lfunc.evaluate_L(LFunctionQuery(d, 1.0, 1e-10))
    print(f"d = {d:5d}  h = {res.h}  L(1) = {L.value:.12f} +- {L.error:.1e}"
          f"  formula = {lfunc.class_number_formula_value(res):.12f}")

# Real quadratic fields: narrow class number and the unit of norm +1
for d in (5, 12, 13, 40, 376):
    res = lfunc.class_number(d)
    print(f"d = {d:4d}  h+ = {res.h}  unit = ({res.v0} + {res.u0} sqrt d)/2"
          f"  log eta = {math.log(res.eta):.6f}")

# Sign scan: no real zero in [0.5, 0.999] for small discriminants
ds = lfunc.fundamental_discriminants(-100, 100)
found = [d for d in ds if lfunc.scan_real_zeros(d, 0.5, 0.999, 1e-3).brackets]
print(f"{len(ds)} discriminants scanned, sign changes for {found or 'none'}")

# L(1) sqrt|d| / (100 pi): how far small fields sit from the asymptotic lower bound
for d in (-4, -163, 5, 997):
    print(d, round(lfunc.l1_lower_bound_ratio(d), 5))
