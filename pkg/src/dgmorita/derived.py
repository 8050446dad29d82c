"""Derived tensor, Ext, derived endomorphism algebras and the formality zig-zag.

Every derived value carries the degree range on which it is known to agree
with the value computed from a complete semifree replacement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bicat import Bimodule, TwoCell, forget_left, odot, rhom
from .complex import HomologyResult, homology, is_quasi_iso
from .dga import DGAlgebra, TruncationResult, truncate_plus, validate_dga
from .model import Certificate, Window, cell_map, cell_module, cofibrant_replace, is_certified_cofibrant

__all__ = [
    "DerivedValue",
    "derived_tensor",
    "ext",
    "end_dga",
    "EndResult",
    "formality_zigzag",
    "FormalityVerdict",
    "replace_if_needed",
]


@dataclass
class DerivedValue:
    """A derived result with the homological degrees on which it is exact.

    ``valid`` is ``(lo, hi)``; ``None`` on either side means unbounded.
    ``full`` means the replacement was a quasi-isomorphism in every degree.
    """

    result: object
    certificate: Certificate
    valid: tuple
    replacement: object = None

    @property
    def full(self) -> bool:
        return self.certificate.full

    def covers(self, n: int) -> bool:
        lo, hi = self.valid
        return (lo is None or n >= lo) and (hi is None or n <= hi)

    def homology(self) -> HomologyResult:
        if isinstance(self.result, HomologyResult):
            return self.result
        return homology(self.result.carrier)

    def certified_homology(self) -> dict:
        """Iso types of the homology on the nonzero degrees inside the valid range."""
        H = self.homology()
        return {n: H.module(n).iso_type for n in H.nonzero_degrees() if self.covers(n)}


def replace_if_needed(M: Bimodule, w: Window):
    """Cofibrant replacement unless ``M`` is already certified cofibrant.

    A right module with a known free basis of cycles is replaced by the cell
    module on that basis, mapping isomorphically onto it.  A right module that
    is a retract of a finite free one (checked through its dual basis) is
    cofibrant already and is kept as is.
    """
    full = Certificate(w.lo, w.hi, list(range(w.lo, w.hi + 1)), True)
    if is_certified_cofibrant(M):
        return M, TwoCell.identity(M), full
    if M.free_right is not None and M.target.dim == 1:
        Q = cell_module(M.source, M.target, [t for _, t in M.free_right])
        imgs = np.column_stack([v for v, _ in M.free_right])
        q = cell_map(Q, M, imgs)
        if q.is_iso():
            return Q, q, full
    if M.target.dim == 1 and not M.relations.shape[1] and M.n:
        from .morita import dual_basis_retract

        try:
            rd = dual_basis_retract(M)
        except ValueError:
            rd = None
        if rd is not None and rd.verify():
            M.retract_of_free = True
            return M, TwoCell.identity(M), full
    r = cofibrant_replace(M, w)
    return r.Q, r.q, r.certificate


def _top_certified(cert: Certificate):
    """Largest ``c`` with ``[w.lo, c]`` certified, or ``None``."""
    c = None
    for n in range(cert.lo, cert.hi + 1):
        if n not in cert.certified:
            break
        c = n
    return c


def _min(a):
    return int(np.min(a)) if len(a) else 0


def _max(a):
    return int(np.max(a)) if len(a) else 0


def derived_tensor(L: Bimodule, M: Bimodule, w: Window) -> DerivedValue:
    """``L (.)^L M``: replace the left factor, then compose."""
    Q, q, cert = replace_if_needed(L, w)
    out = odot(Q, M)
    if cert.full:
        valid = (None, None)
    else:
        c = _top_certified(cert)
        if c is None:
            valid = (0, -1)
        else:
            # cells missing from Q sit in degrees >= c + 2
            valid = (None, c + _min(L.target.degrees) + _min(M.degrees))
    return DerivedValue(out, cert, valid, (Q, q))


def ext(T: Bimodule, U: Bimodule, w: Window) -> DerivedValue:
    """Homology of ``Q_T |> U`` in homological degrees (``Ext^i`` sits in degree ``-i``)."""
    Q, q, cert = replace_if_needed(T, w)
    H = rhom(Q, U)
    if cert.full:
        valid = (None, None)
    else:
        c = _top_certified(cert)
        valid = (0, -1) if c is None else (_max(U.degrees) - _min(T.target.degrees) - c, None)
    return DerivedValue(homology(H.carrier), cert, valid, (Q, q, H))


@dataclass
class EndResult:
    algebra: DGAlgebra
    hom: Bimodule  # Q |> Q as a complex
    Q: Bimodule
    q: object
    certificate: Certificate


def end_dga(T: Bimodule, w: Window | None = None) -> EndResult:
    """``Q |> Q`` for a semifree replacement ``Q`` of ``T``, with composition as product.

    Only the right module structure of ``T`` is used.
    """
    if T.target.dim != 1:
        T = forget_left(T)
    if w is None:
        w = Window(_min(T.degrees) - 1, _max(T.degrees) + 1)
    Q, q, cert = replace_if_needed(T, w)
    H = rhom(Q, Q)
    if H.relations.shape[1]:
        raise ValueError("endomorphism complex is not free over the ground ring")
    R = T.ring
    hd = H.hom_data
    N = H.n
    maps = [hd.basis_map(i) for i in range(N)]
    mult = R.zeros((N, N, N))
    for i in range(N):
        for j in range(N):
            F = R.matmul(maps[i], maps[j])
            if R.is_zero_array(F):
                continue
            mult[i, j, :] = hd.map_to_element(F, int(H.degrees[i] + H.degrees[j]))
    unit = hd.map_to_element(R.eye(Q.n), 0)
    names = [f"f{i}" for i in range(N)]
    E = DGAlgebra(R, H.degrees, mult, H.d, unit, names, check=False)
    rep = validate_dga(E)
    if not rep.ok:
        raise RuntimeError(f"endomorphism algebra failed validation: {rep.first()}")
    return EndResult(E, H, Q, q, cert)


@dataclass
class FormalityVerdict:
    status: str  # "formal via zig-zag", "criterion inapplicable", "legs fail"
    homology_degrees: list
    truncation: TruncationResult | None = None
    legs: tuple = field(default_factory=tuple)

    @property
    def formal(self) -> bool:
        return self.status == "formal via zig-zag"


def formality_zigzag(E: DGAlgebra) -> FormalityVerdict:
    """Build ``H_0(E) <- E_+ -> E`` and test both legs when homology sits in degree 0."""
    H = homology(E.complex)
    degs = H.nonzero_degrees()
    if any(n != 0 for n in degs):
        return FormalityVerdict("criterion inapplicable", degs)
    tr = truncate_plus(E)
    legs = (bool(is_quasi_iso(tr.incl.chain_map)), bool(is_quasi_iso(tr.proj_chain)))
    status = "formal via zig-zag" if all(legs) else "legs fail"
    return FormalityVerdict(status, degs, tr, legs)
