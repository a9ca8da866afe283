"""
Successive minima of small lattices
===================================

Exact minima for the lattice {h : 2 h1 + 3 h2 = 0 mod 5} and random
integer lattices, with the volume inequality and transference products.
"""

from fractions import Fraction

from pvbounds import lattice
from pvbounds.lattice import BoxBody

L = lattice.congruence_lattice([2, 3], 5)
box = BoxBody([1, 1])
m = lattice.successive_minima(L, box)
print("basis", [[str(x) for x in row] for row in L.basis], "covolume", L.covolume)
print("minima", [str(x) for x in m.minima], "witnesses", [[str(x) for x in w] for w in m.witnesses])

lhs, rhs = lattice.minkowski_second_sides(L, box)
print("1/(l1 l2) =", lhs, "<=", rhs)
print("transference products", [str(p) for p in lattice.transference_products(L, box)])

# The box matters: stretching one side changes which vector is shortest
for w in ("1/2", "2", "5"):
    mm = lattice.successive_minima(L, BoxBody([Fraction(w), 1]))
    print(f"half-widths ({w}, 1): minima {[str(x) for x in mm.minima]}")

# A handful of random rank-3 instances
for lat, b in lattice.random_instances(5, 3, seed=1):
    prods = lattice.transference_products(lat, b)
    print(f"covolume {str(lat.covolume):>4}  points in box {lattice.count_lattice_points(lat, b):3d}"
          f"  products {[str(p) for p in prods]}")
