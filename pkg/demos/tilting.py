"""Tilting checks: M_2(k) against its row module, and a non-generator over k x k."""

from dgmorita import GF, ZZ, Window, tilting_pipeline
from dgmorita.dga import matrix_algebra, product_algebra
from dgmorita.generators import right_ideal_module

w = Window(-1, 3)

for R in (GF(5), ZZ()):
    S = matrix_algebra(R, 2)
    row = right_ideal_module(S, [0, 1], name="row")
    v = tilting_pipeline(S, row, w)
    print(f"M_2({R}) with row module:", v.status, "| End has dimension", v.E.dim)

P = product_algebra(GF(5), 2)
first = right_ideal_module(P, [0], name="first")
v = tilting_pipeline(P, first, w)
print("F5 x F5 with first factor:", v.status)
print("  counit witness:", v.witnesses.get("counit"))
