"""Z[e]/(e^4) with |e| = 1 and d(e) = 2: integral DGA whose homology lives over Z/2."""

from dgmorita import homology, homology_dga, validate_dga
from dgmorita.dga import dugger_shipley

C = dugger_shipley()
print("axioms hold:", bool(validate_dga(C)))

H = homology(C.complex)
for n in H.nonzero_degrees():
    print(f"H_{n} =", H.module(n))

HA, reps = homology_dga(C)
print("homology algebra base ring:", HA.ring)
print("degrees:", [int(n) for n in HA.degrees], "names:", HA.names)
x = HA.ring.zeros((HA.dim,))
x[1] = 1
print("[e^2] * [e^2] =", HA.product(x, x))
