"""Enrichment of restriction along a cofibrant bimodule, with and without a perturbation."""

from dgmorita import GF
from dgmorita.bicat import unit_cell
from dgmorita.dga import matrix_algebra
from dgmorita.generators import right_ideal_module
from dgmorita.morita import enrichment_transform

S = matrix_algebra(GF(5), 2)
row = right_ideal_module(S, [0, 1], name="row")
Q = unit_cell(S)

ok = enrichment_transform(Q, row, row, row)
print("unperturbed:", ok)
bad = enrichment_transform(Q, row, row, row, perturb="zero")
print("structure map replaced by zero:", bad)
