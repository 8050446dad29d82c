"""Built-in example documents, each loadable with :func:`dgmorita.io.parse_input`."""

from __future__ import annotations

from .bicat import shift_bimodule, unit_cell
from .complex import ChainComplex
from .dga import dugger_shipley, matrix_algebra, product_algebra, truncate_plus
from .generators import end_algebra, right_ideal_module
from .io import InputDocument, serialize
from .rings import GF, ZZ

__all__ = ["builtin_examples", "builtin", "BUILTIN_NAMES"]


def _dugger_shipley():
    C = dugger_shipley()
    doc = InputDocument(C.ring, algebras={"C": C})
    doc.params = {"algebra": "C"}
    return doc


def _matrix_morita(R):
    S = matrix_algebra(R, 2)
    row = right_ideal_module(S, [0, 1], name="row")
    doc = InputDocument(R, algebras={"S": S}, bimodules={"row": row})
    doc.params = {"S": "S", "T": "row", "window": "-1:3"}
    return doc


def _product_ring_nongenerator():
    R = GF(5)
    P = product_algebra(R, 2)
    first = right_ideal_module(P, [0], name="first")
    doc = InputDocument(R, algebras={"P": P}, bimodules={"first": first})
    doc.params = {"S": "P", "T": "first", "window": "-1:3"}
    return doc


def _shift_equivalence():
    R = GF(5)
    S = matrix_algebra(R, 2)
    sigma = shift_bimodule(unit_cell(S), 1)
    sigma.name = "sigma"
    doc = InputDocument(R, algebras={"S": S}, bimodules={"sigma": sigma})
    doc.params = {"S": "S", "T": "sigma", "window": "-1:3"}
    return doc


def _truncation_zigzag():
    R = GF(3)
    # End of D^1 + S^0 with basis (bottom, top, sphere)
    d = R.zeros((3, 3))
    d[0, 1] = 1
    E = end_algebra(ChainComplex(R, [0, 1, 0], d))
    T = truncate_plus(E)
    doc = InputDocument(R, algebras={"E": E, "Eplus": T.Eplus}, maps={"incl": T.incl})
    doc.params = {"algebra": "E", "f": "incl", "window": "-1:3"}
    return doc


_BUILDERS = {
    "dugger_shipley": (_dugger_shipley, "Z[e]/(e^4), |e| = 1, d(e) = 2: homology is a DGA over Z/2"),
    "matrix_morita": (lambda: _matrix_morita(GF(5)), "M_2(F_5) with the row module as tilting module"),
    "matrix_morita_z": (lambda: _matrix_morita(ZZ()), "M_2(Z) with the row module as tilting module"),
    "product_ring_nongenerator": (_product_ring_nongenerator, "F_5 x F_5 with the first factor: not a generator"),
    "shift_equivalence": (_shift_equivalence, "M_2(F_5) with the suspended unit bimodule"),
    "truncation_zigzag": (_truncation_zigzag, "End(D^1 + S^0) over F_3: homology in degree 0 only"),
}

BUILTIN_NAMES = tuple(_BUILDERS)


def builtin(name: str) -> dict:
    """The JSON document of a built-in example."""
    if name not in _BUILDERS:
        raise KeyError(f"unknown built-in {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    return serialize(_BUILDERS[name][0]())


def builtin_examples() -> dict:
    """Name -> (description, document)."""
    return {name: (desc, builtin(name)) for name, (_, desc) in _BUILDERS.items()}
