"""Formality zig-zag H_0(E) <- E_+ -> E for E = End(D^1 + S^0) over F_3."""

from dgmorita import GF, ChainComplex, formality_zigzag, homology
from dgmorita.generators import end_algebra

R = GF(3)
d = R.zeros((3, 3))
d[0, 1] = 1  # D^1 is spanned by (bottom, top), S^0 by the last generator
E = end_algebra(ChainComplex(R, [0, 1, 0], d))

print("dim E =", E.dim, "| homology degrees:", homology(E.complex).nonzero_degrees())
v = formality_zigzag(E)
print("verdict:", v.status)
print("legs are quasi-isos (E_+ -> E, E_+ -> H_0):", v.legs)
