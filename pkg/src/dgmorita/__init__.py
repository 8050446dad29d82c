"""Exact computations with DG algebras, DG bimodules and Morita-type equivalences.

Everything is over ``Z``, ``Q`` or ``F_p`` with finite bases in each degree.
"""

from .rings import CoeffRing, GF, QQ, ZZ
from .complex import ChainComplex, ChainMap, cone, homology, is_quasi_iso
from .dga import DGAlgebra, DGAlgebraMap, homology_dga, truncate_plus, validate_dga
from .bicat import Bimodule, TwoCell, odot, rhom, unit_cell
from .model import Window, cofibrant_replace, lifting_solve, pushout_product
from .derived import derived_tensor, end_dga, ext, formality_zigzag
from .morita import check_dual_pair, quillen_equiv_check, tilting_pipeline
from .io import ParseError, parse_input, serialize
from .registry import builtin_examples

__all__ = [
    "CoeffRing",
    "GF",
    "QQ",
    "ZZ",
    "ChainComplex",
    "ChainMap",
    "cone",
    "homology",
    "is_quasi_iso",
    "DGAlgebra",
    "DGAlgebraMap",
    "homology_dga",
    "truncate_plus",
    "validate_dga",
    "Bimodule",
    "TwoCell",
    "odot",
    "rhom",
    "unit_cell",
    "Window",
    "cofibrant_replace",
    "lifting_solve",
    "pushout_product",
    "derived_tensor",
    "end_dga",
    "ext",
    "formality_zigzag",
    "check_dual_pair",
    "quillen_equiv_check",
    "tilting_pipeline",
    "ParseError",
    "parse_input",
    "serialize",
    "builtin_examples",
]
