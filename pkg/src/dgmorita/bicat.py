"""DG bimodules as 1-cells, bimodule maps as 2-cells, and the closed structure.

A bimodule ``M: A -> B`` is a (B, A)-bimodule: ``left[b]`` is the matrix of
the left action of the basis element ``b`` of ``B`` and ``right[a]`` that of
the right action of ``a`` in ``A``.  Leibniz for the actions reads::

    d L_b = L_{db} + (-1)^|b| L_b d        d R_a = R_a d + R_{da} Sigma

with ``Sigma = diag((-1)^deg)``.  All equations are checked modulo the
relations of the carrier.

A 2-cell of degree ``s`` satisfies ``h(b x) = (-1)^{s|b|} b h(x)`` and
``h(x a) = h(x) a``.  The composite ``L (.) M`` uses ``d(l (x) m) = dl (x) m +
(-1)^|l| l (x) dm``; the right hom uses ``D(f) = d f - (-1)^|f| f d`` with
``(c f)(m) = c f(m)`` and ``(f b)(m) = f(b m)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complex import ChainComplex, ChainMap, homology, is_quasi_iso, sign_diag, _sgn
from .dga import DGAlgebra, ValidationReport, opposite, tensor_dga
from .exactlin import Coordinatizer, MapSystem, solve_linear

__all__ = [
    "Bimodule",
    "TwoCell",
    "OdotData",
    "HomData",
    "same_algebra",
    "unit_cell",
    "shift_bimodule",
    "op_bimodule",
    "as_right_module",
    "direct_sum_bimodules",
    "odot",
    "odot_cells",
    "rhom",
    "lhom",
    "rhom_cells",
    "transpose",
    "right_adjunct",
    "right_unadjunct",
    "left_adjunct",
    "left_unadjunct",
    "evaluation",
    "twocell_space",
    "twocell_system",
    "associator",
    "left_unitor",
    "right_unitor",
    "shift_alpha",
    "tc1_composite",
    "structural_isos",
]


def same_algebra(A: DGAlgebra, B: DGAlgebra) -> bool:
    if A is B:
        return True
    return (
        A.ring == B.ring
        and A.dim == B.dim
        and np.array_equal(A.degrees, B.degrees)
        and A.ring.equal(A.mult, B.mult)
        and A.ring.equal(A.d, B.d)
        and A.ring.equal(A.unit, B.unit)
    )


def _stack_zero(C, mats) -> bool:
    mats = [m for m in mats if m.size]
    if not mats:
        return True
    return C.is_zero(np.hstack(mats))


class Bimodule:
    """A 1-cell ``source -> target`` with carrier complex and action matrices."""

    def __init__(self, source: DGAlgebra, target: DGAlgebra, carrier: ChainComplex, left, right, check=True, name=None):
        if source.ring != target.ring or carrier.ring != source.ring:
            raise ValueError("all data must live over one coefficient ring")
        self.source = source
        self.target = target
        self.carrier = carrier
        self.ring = carrier.ring
        n = carrier.ngens
        R = self.ring
        self.left = R.reduce(np.asarray(left).reshape(target.dim, n, n)) if n else R.zeros((target.dim, 0, 0))
        self.right = R.reduce(np.asarray(right).reshape(source.dim, n, n)) if n else R.zeros((source.dim, 0, 0))
        self.name = name
        self.cell = None  # CellStructure when built by attaching cells
        self.odot_data = None
        self.hom_data = None
        self.dual_data = None
        self.free_right = None  # [(vector, degree)]: free right-module basis of cycles, when known
        if check:
            rep = self.validate()
            if not rep:
                raise ValueError(f"invalid bimodule: {rep.first()}")

    # -- basic views ------------------------------------------------------
    @property
    def n(self) -> int:
        return self.carrier.ngens

    @property
    def degrees(self):
        return self.carrier.degrees

    @property
    def d(self):
        return self.carrier.d

    @property
    def relations(self):
        return self.carrier.relations

    def left_by(self, x: np.ndarray) -> np.ndarray:
        return self.ring.reduce(np.tensordot(x, self.left, axes=([0], [0])))

    def right_by(self, x: np.ndarray) -> np.ndarray:
        return self.ring.reduce(np.tensordot(x, self.right, axes=([0], [0])))

    def homology(self):
        return homology(self.carrier)

    def is_zero(self, x) -> bool:
        return self.carrier.is_zero(x)

    def __repr__(self):
        nm = f"{self.name}: " if self.name else ""
        return f"Bimodule({nm}{self.carrier!r})"

    # -- axioms -------------------------------------------------------------
    def validate(self) -> ValidationReport:
        R, C = self.ring, self.carrier
        A, B = self.source, self.target
        n = self.n
        fails = []
        if n == 0:
            return ValidationReport(True)
        deg = self.degrees
        for side, alg, acts in (("left", B, self.left), ("right", A, self.right)):
            for b in range(alg.dim):
                r, c = np.nonzero(acts[b] != 0)
                if np.any(deg[r] != deg[c] + alg.degrees[b]):
                    fails.append((f"{side} action grading", (b,)))
                    break
            if C.relations.shape[1] and not _stack_zero(C, [R.matmul(acts[b], C.relations) for b in range(alg.dim)]):
                fails.append((f"{side} action on relations", ()))
            u = R.reduce(np.tensordot(alg.unit, acts, axes=([0], [0])))
            if not C.is_zero(R.sub(u, R.eye(n))):
                fails.append((f"{side} unit", ()))
        if fails:
            return ValidationReport(False, fails)
        L, Rr = self.left, self.right
        # associativity
        for b in range(B.dim):
            for b2 in range(B.dim):
                lhs = R.matmul(L[b], L[b2])
                rhs = R.reduce(np.tensordot(B.mult[b, b2], L, axes=([0], [0])))
                if not C.is_zero(R.sub(lhs, rhs)):
                    fails.append(("left associativity", (b, b2)))
                    break
            if fails:
                break
        for a in range(A.dim):
            for a2 in range(A.dim):
                lhs = R.matmul(Rr[a2], Rr[a])
                rhs = R.reduce(np.tensordot(A.mult[a, a2], Rr, axes=([0], [0])))
                if not C.is_zero(R.sub(lhs, rhs)):
                    fails.append(("right associativity", (a, a2)))
                    break
            if fails:
                break
        for b in range(B.dim):
            for a in range(A.dim):
                if not C.is_zero(R.sub(R.matmul(L[b], Rr[a]), R.matmul(Rr[a], L[b]))):
                    fails.append(("actions commute", (b, a)))
                    break
            if fails:
                break
        D = self.d
        Sg = sign_diag(R, deg)
        for b in range(B.dim):
            db = B.d[:, b]
            rhs = R.add(self.left_by(db), R.scale(_sgn(int(B.degrees[b])), R.matmul(L[b], D)))
            if not C.is_zero(R.sub(R.matmul(D, L[b]), rhs)):
                fails.append(("left Leibniz", (b,)))
                break
        for a in range(A.dim):
            da = A.d[:, a]
            rhs = R.add(R.matmul(Rr[a], D), R.matmul(self.right_by(da), Sg))
            if not C.is_zero(R.sub(R.matmul(D, Rr[a]), rhs)):
                fails.append(("right Leibniz", (a,)))
                break
        return ValidationReport(not fails, fails)


@dataclass
class TwoCell:
    """A bimodule map of degree ``degree`` (``matrix`` is ``target.n x source.n``)."""

    source: Bimodule
    target: Bimodule
    matrix: np.ndarray
    degree: int = 0
    check: bool = True

    def __post_init__(self):
        R = self.source.ring
        if not (same_algebra(self.source.source, self.target.source) and same_algebra(self.source.target, self.target.target)):
            raise ValueError("2-cell frame mismatch")
        if self.matrix.dtype != R.dtype:
            self.matrix = R.array(self.matrix.tolist(), shape=self.matrix.shape)
        self.matrix = R.reduce(self.matrix)
        if self.matrix.shape != (self.target.n, self.source.n):
            raise ValueError("2-cell matrix has the wrong shape")
        if self.check:
            rep = self.validate()
            if not rep:
                raise ValueError(f"invalid 2-cell: {rep.first()}")

    @property
    def ring(self):
        return self.source.ring

    def validate(self) -> ValidationReport:
        R = self.ring
        X, Y, h, s = self.source, self.target, self.matrix, self.degree
        fails = []
        try:
            ChainMap(X.carrier, Y.carrier, h, s)
        except ValueError as e:
            fails.append(("chain map", str(e)))
            return ValidationReport(False, fails)
        B, A = X.target, X.source
        for b in range(B.dim):
            sg = _sgn(s * int(B.degrees[b]))
            if not Y.is_zero(R.sub(R.matmul(h, X.left[b]), R.scale(sg, R.matmul(Y.left[b], h)))):
                fails.append(("left equivariance", (b,)))
                break
        for a in range(A.dim):
            if not Y.is_zero(R.sub(R.matmul(h, X.right[a]), R.matmul(Y.right[a], h))):
                fails.append(("right equivariance", (a,)))
                break
        return ValidationReport(not fails, fails)

    @property
    def chain_map(self) -> ChainMap:
        return ChainMap(self.source.carrier, self.target.carrier, self.matrix, self.degree, check=False)

    def __matmul__(self, other: "TwoCell") -> "TwoCell":
        R = self.ring
        return TwoCell(other.source, self.target, R.matmul(self.matrix, other.matrix), self.degree + other.degree, check=False)

    def __add__(self, other):
        return TwoCell(self.source, self.target, self.ring.add(self.matrix, other.matrix), self.degree, check=False)

    def __sub__(self, other):
        return TwoCell(self.source, self.target, self.ring.sub(self.matrix, other.matrix), self.degree, check=False)

    def scaled(self, c):
        return TwoCell(self.source, self.target, self.ring.scale(c, self.matrix), self.degree, check=False)

    def equals(self, other) -> bool:
        return self.matrix.shape == other.matrix.shape and self.target.is_zero(self.ring.sub(self.matrix, other.matrix))

    def is_zero(self) -> bool:
        return self.target.is_zero(self.matrix)

    def is_quasi_iso(self):
        return is_quasi_iso(self.chain_map)

    def is_iso(self) -> bool:
        """Chain-level isomorphism: every degree is an isomorphism of modules."""
        if self.degree != 0:
            return False
        X, Y = self.source.carrier, self.target.carrier
        for n in sorted(set(X.degree_list()) | set(Y.degree_list())):
            if not self.chain_map.module_map(n).is_iso():
                return False
        return True

    def inverse(self) -> "TwoCell":
        """Inverse of a chain-level isomorphism."""
        R = self.ring
        X, Y = self.source, self.target
        if not self.is_iso():
            raise ValueError("2-cell is not invertible")
        A = np.hstack([self.matrix, Y.relations]) if Y.relations.shape[1] else self.matrix
        Xm = solve_linear(A, R.eye(Y.n), R)[: X.n]
        return TwoCell(Y, X, X.carrier.reduce(Xm), -self.degree, check=False)

    @classmethod
    def identity(cls, M: Bimodule) -> "TwoCell":
        return cls(M, M, M.ring.eye(M.n), 0, check=False)

    @classmethod
    def zero(cls, X: Bimodule, Y: Bimodule, degree=0) -> "TwoCell":
        return cls(X, Y, X.ring.zeros((Y.n, X.n)), degree, check=False)


# -- constructions of 1-cells ---------------------------------------------


def unit_cell(A: DGAlgebra) -> Bimodule:
    """``A`` as the identity 1-cell ``A -> A``."""
    M = Bimodule(A, A, A.complex, A.L, A.R, check=False, name="unit")
    M.free_right = [(A.unit, 0)]
    return M


def shift_bimodule(M: Bimodule, k: int) -> Bimodule:
    """``Sigma^k M``; the left action picks up ``(-1)^{k|b|}``."""
    R = M.ring
    C = ChainComplex(R, M.degrees + k, R.scale(_sgn(k), M.d), M.relations, check=False)
    sg = np.array([_sgn(k * int(t)) for t in M.target.degrees])
    left = R.reduce(M.left * (sg.astype(object) if R.dtype is object else sg)[:, None, None])
    out = Bimodule(M.source, M.target, C, left, M.right, check=False, name=f"Σ^{k}{M.name or ''}")
    if M.free_right is not None:
        out.free_right = [(v, t + k) for v, t in M.free_right]
    return out


def forget_left(M: Bimodule) -> Bimodule:
    """The underlying right module of ``M: A -> B`` as a 1-cell ``A -> k``."""
    from .dga import ground

    R = M.ring
    out = Bimodule(M.source, ground(R), M.carrier, R.eye(M.n)[None], M.right, check=False, name=M.name)
    out.free_right = M.free_right
    return out


def shift_cell(h: TwoCell, k: int, src=None, tgt=None) -> TwoCell:
    """``Sigma^k h`` for a degree-0 2-cell (same matrix)."""
    return TwoCell(src or shift_bimodule(h.source, k), tgt or shift_bimodule(h.target, k), h.matrix, h.degree, check=False)


def _sign_for(R, degrees, parity_vec):
    """diag of (-1)^{deg * p} for p given per action basis element (0/1)."""
    out = []
    for p in parity_vec:
        out.append(sign_diag(R, degrees) if p % 2 else R.eye(len(degrees)))
    return out


def op_bimodule(M: Bimodule) -> Bimodule:
    """``M°: B° -> A°`` with ``a° m = (-1)^{|a||m|} m a`` and ``m b° = (-1)^{|m||b|} b m``."""
    R = M.ring
    A, B = M.source, M.target
    Ao, Bo = _op(A), _op(B)
    Sg = sign_diag(R, M.degrees)
    left = np.array([R.matmul(M.right[a], Sg) if A.degrees[a] % 2 else M.right[a] for a in range(A.dim)])
    right = np.array([R.matmul(M.left[b], Sg) if B.degrees[b] % 2 else M.left[b] for b in range(B.dim)])
    if M.n == 0:
        left = R.zeros((A.dim, 0, 0))
        right = R.zeros((B.dim, 0, 0))
    out = Bimodule(Bo, Ao, M.carrier, left, right, check=False, name=f"{M.name or 'M'}°")
    out.hom_data = M.hom_data
    out._op_of = M
    return out


def _op(A: DGAlgebra) -> DGAlgebra:
    if getattr(A, "_opposite", None) is None:
        Ao = opposite(A)
        A._opposite = Ao
        Ao._opposite = A
    return A._opposite


def as_right_module(M: Bimodule):
    """``M: A -> B`` as a right module over ``E = A (x) B^op`` (a 1-cell ``E -> k``).

    ``m (a (x) b°) = (-1)^{|b|(|m| + |a|)} b m a``.
    """
    from .dga import ground

    R = M.ring
    A, B = M.source, M.target
    E = tensor_dga(A, _op(B))
    Sg = sign_diag(R, M.degrees)
    right = []
    for a in range(A.dim):
        for b in range(B.dim):
            mat = R.matmul(M.left[b], M.right[a])
            if B.degrees[b] % 2:
                mat = R.matmul(mat, Sg)
                if A.degrees[a] % 2:
                    mat = R.neg(mat)
            right.append(mat)
    k = ground(R)
    right = np.array(right) if M.n else R.zeros((E.dim, 0, 0))
    left = np.array([R.eye(M.n)])
    return Bimodule(E, k, M.carrier, left, right, check=False, name=f"{M.name or 'M'}_E"), E


def direct_sum_bimodules(*Ms: Bimodule) -> Bimodule:
    from .complex import direct_sum
    from .exactlin import block_diag

    R = Ms[0].ring
    A, B = Ms[0].source, Ms[0].target
    C = direct_sum(*[M.carrier for M in Ms])
    left = np.array([block_diag(R, [M.left[b] for M in Ms]) for b in range(B.dim)])
    right = np.array([block_diag(R, [M.right[a] for M in Ms]) for a in range(A.dim)])
    return Bimodule(A, B, C, left, right, check=False, name="⊕")


def _normalize(raw_complex: ChainComplex, source, target, left, right, name=None):
    """Normalize a raw bimodule presentation; returns ``(M, P, S)``."""
    R = raw_complex.ring
    perm = raw_complex.sorting_permutation()
    C2, P, S = raw_complex.normalized()
    if perm is not None:
        ix = np.ix_(perm, perm)
        nl = np.array([left[b][ix] for b in range(len(left))]) if C2.ngens else R.zeros((len(left), 0, 0))
        nr = np.array([right[a][ix] for a in range(len(right))]) if C2.ngens else R.zeros((len(right), 0, 0))
        return Bimodule(source, target, C2, nl, nr, check=False, name=name), P, S
    nl = np.array([C2.reduce(R.mul(P, left[b], S)) for b in range(len(left))]) if C2.ngens else R.zeros((len(left), 0, 0))
    nr = np.array([C2.reduce(R.mul(P, right[a], S)) for a in range(len(right))]) if C2.ngens else R.zeros((len(right), 0, 0))
    return Bimodule(source, target, C2, nl, nr, check=False, name=name), P, S


@dataclass
class OdotData:
    """Bookkeeping for ``L (.) M``: raw pair ``(i, j)`` is index ``i * M.n + j``."""

    left: Bimodule
    right: Bimodule
    P: np.ndarray
    S: np.ndarray

    def pair(self, i: int, j: int) -> np.ndarray:
        return self.P[:, i * self.right.n + j]

    def element(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Normalized coordinates of ``x (x) y``."""
        R = self.left.ring
        return R.matmul(self.P, R.reduce(np.kron(x, y)))


def odot(L: Bimodule, M: Bimodule, check=False) -> Bimodule:
    """``L (.) M = L (x)_B M`` for ``L: B -> C`` and ``M: A -> B``."""
    if not same_algebra(L.source, M.target):
        raise ValueError("0-cell mismatch: middle algebras differ")
    R = L.ring
    B = M.target
    nl, nm = L.n, M.n
    Il, Im = R.eye(nl), R.eye(nm)
    degs = (L.degrees[:, None] + M.degrees[None, :]).reshape(-1)
    rels = []
    if L.relations.shape[1]:
        rels.append(np.kron(L.relations, Im))
    if M.relations.shape[1]:
        rels.append(np.kron(Il, M.relations))
    for b in range(B.dim):
        rels.append(R.sub(np.kron(L.right[b], Im), np.kron(Il, M.left[b])))
    relm = R.reduce(np.hstack(rels)) if rels else R.zeros((nl * nm, 0))
    d = R.add(np.kron(L.d, Im), np.kron(sign_diag(R, L.degrees), M.d))
    raw = ChainComplex(R, degs, d, relm, check=False)
    left = [np.kron(L.left[c], Im) for c in range(L.target.dim)]
    right = [np.kron(Il, M.right[a]) for a in range(M.source.dim)]
    out, P, S = _normalize(raw, M.source, L.target, left, right, name=f"{L.name or 'L'}⊙{M.name or 'M'}")
    out.odot_data = OdotData(L, M, P, S)
    if check:
        rep = out.validate()
        if not rep:
            raise ValueError(f"odot produced an invalid bimodule: {rep.first()}")
    return out


def odot_cells(f: TwoCell, g: TwoCell, source: Bimodule | None = None, target: Bimodule | None = None) -> TwoCell:
    """``f (.) g`` with ``(f (x) g)(l (x) m) = (-1)^{|g||l|} f l (x) g m``."""
    R = f.ring
    src = source or odot(f.source, g.source)
    tgt = target or odot(f.target, g.target)
    fm = R.matmul(f.matrix, sign_diag(R, f.source.degrees)) if g.degree % 2 else f.matrix
    raw = np.kron(fm, g.matrix)
    mat = R.mul(tgt.odot_data.P, raw, src.odot_data.S)
    return TwoCell(src, tgt, tgt.carrier.reduce(mat), f.degree + g.degree, check=False)


# -- right hom ------------------------------------------------------------


class HomData:
    """Dictionary between elements of a hom bimodule and matrices of maps."""

    def __init__(self, M, W, Kblocks, offsets, P, S, ring, left_linear=False):
        self.M, self.W = M, W
        self.K = Kblocks  # degree -> (MapSystem, K in unknown coords, Coordinatizer)
        self.offsets = offsets
        self.P, self.S = P, S
        self.ring = ring
        self.left_linear = left_linear

    def map_to_element(self, F: np.ndarray, degree: int) -> np.ndarray:
        """Normalized coordinates of the map ``F`` (matrix ``W.n x M.n``) of the given degree."""
        R = self.ring
        if degree not in self.K:
            if not R.is_zero_array(F):
                raise ValueError("map of a degree with no homs")
            return R.zeros((self.P.shape[0],))
        ms, K, co = self.K[degree]
        rows, cols = np.nonzero(F != 0)
        if len(rows) and np.any(ms.tgt_deg[rows] != ms.src_deg[cols] + degree):
            raise ValueError("map is not homogeneous of the stated degree")
        x = co.solve(F[ms.I, ms.J])
        raw = R.zeros((self.P.shape[1],))
        off = self.offsets[degree]
        raw[off : off + K.shape[1]] = x
        return R.matmul(self.P, raw)

    def element_to_map(self, x: np.ndarray) -> np.ndarray:
        R = self.ring
        raw = R.matmul(self.S, x)
        F = R.zeros((self.W.n, self.M.n))
        for n, (ms, K, co) in self.K.items():
            off = self.offsets[n]
            part = raw[off : off + K.shape[1]]
            if K.shape[1] and not R.is_zero_array(part):
                F = R.add(F, ms.to_matrix(R.matmul(K, part)))
        return F

    def basis_map(self, g: int) -> np.ndarray:
        e = self.ring.zeros((self.S.shape[1],))
        e[g] = self.ring.one()
        return self.element_to_map(e)


def rhom(M: Bimodule, W: Bimodule) -> Bimodule:
    """``M |> W``: right ``A``-linear maps ``M -> W`` for ``M: A -> B`` and ``W: A -> C``.

    The result is a 1-cell ``B -> C``.
    """
    if not same_algebra(M.source, W.source):
        raise ValueError("0-cell mismatch: sources differ")
    R = M.ring
    A, B, C = M.source, M.target, W.target
    nm, nw = M.n, W.n
    Iw, Im = R.eye(nw), R.eye(nm)
    if nm == 0 or nw == 0:
        empty = ChainComplex(R, [], None, None, check=False)
        out = Bimodule(B, C, empty, R.zeros((C.dim, 0, 0)), R.zeros((B.dim, 0, 0)), check=False)
        out.hom_data = HomData(M, W, {}, {}, R.zeros((0, 0)), R.zeros((0, 0)), R)
        return out
    degs = sorted({int(w - m) for w in set(W.degrees.tolist()) for m in set(M.degrees.tolist())})
    blocks, offsets, raw_deg = {}, {}, []
    for n in degs:
        ms = MapSystem(R, M.degrees, W.degrees, n)
        if ms.nunknowns == 0:
            continue
        if M.relations.shape[1]:
            ms.add([(1, Iw, M.relations)], mod=W.relations)
        for a in range(A.dim):
            ms.add([(1, Iw, M.right[a]), (-1, W.right[a], Im)], mod=W.relations)
        K = ms.solution_vectors()
        if K.shape[1] == 0:
            continue
        blocks[n] = (ms, K, Coordinatizer(K, R))
        offsets[n] = len(raw_deg)
        raw_deg += [n] * K.shape[1]
    N = len(raw_deg)

    def coords_of(maps, n):
        """Coordinates (raw rhom vectors) of a list of degree-n map matrices."""
        out = R.zeros((N, len(maps)))
        if not maps:
            return out
        if n not in blocks:
            for F in maps:
                if not W.is_zero(F):
                    raise ValueError(f"map of degree {n} outside the hom complex")
            return out
        ms, K, co = blocks[n]
        vecs = np.column_stack([F[ms.I, ms.J] for F in maps])
        x = co.solve(vecs)
        off = offsets[n]
        out[off : off + K.shape[1], :] = x
        return out

    basis = []  # (degree, map matrix)
    for n in sorted(blocks):
        ms, K, _ = blocks[n]
        for c in range(K.shape[1]):
            basis.append((n, ms.to_matrix(K[:, c])))

    def image(fn, shift_deg):
        """Matrix (N x N) of the linear map F -> fn(F) on raw generators."""
        out = R.zeros((N, N))
        by_deg = {}
        for idx, (n, F) in enumerate(basis):
            by_deg.setdefault(n + shift_deg, []).append((idx, fn(F, n)))
        for t, items in by_deg.items():
            cols = coords_of([G for _, G in items], t)
            for k, (idx, _) in enumerate(items):
                out[:, idx] = cols[:, k]
        return out

    # relations: maps landing in relations of W
    rel_cols = []
    if W.relations.shape[1]:
        for n in sorted(blocks):
            ms, K, co = blocks[n]
            zs = []
            for c in range(W.relations.shape[1]):
                r = W.relations[:, c]
                t = int(W.carrier.rel_degrees[c])
                for j in np.nonzero(M.degrees + n == t)[0]:
                    F = R.zeros((nw, nm))
                    F[:, j] = r
                    zs.append(F)
            if zs:
                rel_cols.append(coords_of(zs, n))
    relm = np.hstack(rel_cols) if rel_cols else R.zeros((N, 0))

    D = image(lambda F, n: R.sub(R.matmul(W.d, F), R.scale(_sgn(n), R.matmul(F, M.d))), -1)
    left = [image(lambda F, n, c=c: R.matmul(W.left[c], F), int(C.degrees[c])) for c in range(C.dim)]
    right = [image(lambda F, n, b=b: R.matmul(F, M.left[b]), int(B.degrees[b])) for b in range(B.dim)]
    raw = ChainComplex(R, raw_deg, D, relm, check=False)
    out, P, S = _normalize(raw, B, C, left, right, name=f"{M.name or 'M'}▷{W.name or 'W'}")
    out.hom_data = HomData(M, W, blocks, offsets, P, S, R)
    return out


def lhom(U: Bimodule, M: Bimodule) -> Bimodule:
    """``U <| M``: left ``B``-linear maps ``M -> U`` for ``U: D -> B``, ``M: A -> B``; a 1-cell ``D -> A``."""
    if not same_algebra(U.target, M.target):
        raise ValueError("0-cell mismatch: targets differ")
    inner = rhom(op_bimodule(M), op_bimodule(U))
    out = op_bimodule(inner)
    hd = inner.hom_data
    out.hom_data = HomData(M, U, hd.K, hd.offsets, hd.P, hd.S, hd.ring, left_linear=True)
    return out


def rhom_cells(M: Bimodule, g: TwoCell, source=None, target=None) -> TwoCell:
    """``M |> g``: post-composition with a degree-0 2-cell ``g: W -> W'``."""
    src = source or rhom(M, g.source)
    tgt = target or rhom(M, g.target)
    R = M.ring
    cols = []
    for x in range(src.n):
        F = src.hom_data.basis_map(x)
        cols.append(tgt.hom_data.map_to_element(R.matmul(g.matrix, F), int(src.degrees[x])))
    mat = np.column_stack(cols) if cols else R.zeros((tgt.n, 0))
    return TwoCell(src, tgt, mat, check=False)


# -- adjunction transposes --------------------------------------------------


def right_adjunct(phi: TwoCell, H: Bimodule | None = None) -> TwoCell:
    """``phi: V (.) M -> W``  |->  ``V -> M |> W``, ``v |-> (m |-> phi(v (x) m))``."""
    VM = phi.source
    od = VM.odot_data
    if od is None:
        raise ValueError("frame mismatch: source is not a composite V (.) M")
    V, M = od.left, od.right
    W = phi.target
    H = H or rhom(M, W)
    R = phi.ring
    nm = M.n
    cols = []
    for i in range(V.n):
        F = R.matmul(phi.matrix, od.P[:, i * nm : (i + 1) * nm])
        cols.append(H.hom_data.map_to_element(F, int(V.degrees[i]) + phi.degree))
    mat = np.column_stack(cols) if cols else R.zeros((H.n, 0))
    return TwoCell(V, H, mat, phi.degree, check=False)


def right_unadjunct(psi: TwoCell, VM: Bimodule | None = None) -> TwoCell:
    """Inverse of :func:`right_adjunct`: ``v (x) m |-> psi(v)(m)``."""
    H = psi.target
    hd = H.hom_data
    if hd is None or hd.left_linear:
        raise ValueError("frame mismatch: target is not a right hom")
    V, M, W = psi.source, hd.M, hd.W
    VM = VM or odot(V, M)
    R = psi.ring
    nm = M.n
    raw = R.zeros((W.n, V.n * nm))
    for i in range(V.n):
        raw[:, i * nm : (i + 1) * nm] = hd.element_to_map(psi.matrix[:, i])
    mat = R.matmul(raw, VM.odot_data.S)
    return TwoCell(VM, W, W.carrier.reduce(mat), psi.degree, check=False)


def left_adjunct(phi: TwoCell, H: Bimodule | None = None) -> TwoCell:
    """``phi: M (.) V -> U``  |->  ``V -> U <| M``, ``v |-> (m |-> (-1)^{|m||v|} phi(m (x) v))``."""
    MV = phi.source
    od = MV.odot_data
    if od is None:
        raise ValueError("frame mismatch: source is not a composite M (.) V")
    M, V = od.left, od.right
    U = phi.target
    H = H or lhom(U, M)
    R = phi.ring
    nv = V.n
    cols = []
    for i in range(nv):
        F = R.matmul(phi.matrix, od.P[:, i::nv][:, : M.n])
        if V.degrees[i] % 2:
            F = R.matmul(F, sign_diag(R, M.degrees))
        cols.append(H.hom_data.map_to_element(F, int(V.degrees[i]) + phi.degree))
    mat = np.column_stack(cols) if cols else R.zeros((H.n, 0))
    return TwoCell(V, H, mat, phi.degree, check=False)


def left_unadjunct(psi: TwoCell, MV: Bimodule | None = None) -> TwoCell:
    """Inverse of :func:`left_adjunct`."""
    H = psi.target
    hd = H.hom_data
    if hd is None or not hd.left_linear:
        raise ValueError("frame mismatch: target is not a left hom")
    V, M, U = psi.source, hd.M, hd.W
    MV = MV or odot(M, V)
    R = psi.ring
    nv = V.n
    raw = R.zeros((U.n, M.n * nv))
    for i in range(nv):
        F = hd.element_to_map(psi.matrix[:, i])
        if V.degrees[i] % 2:
            F = R.matmul(F, sign_diag(R, M.degrees))
        raw[:, i::nv] = F
    mat = R.matmul(raw, MV.odot_data.S)
    return TwoCell(MV, U, U.carrier.reduce(mat), psi.degree, check=False)


def transpose(phi: TwoCell, side: str = "right", other: Bimodule | None = None) -> TwoCell:
    """Adjunction transpose in either direction.

    ``side="right"``: ``V (.) M -> W`` becomes ``V -> M |> W`` and back;
    ``side="left"``: ``M (.) V -> U`` becomes ``V -> U <| M`` and back.  The
    direction is inferred from where the hom sits.
    """
    side = side.lower()
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    hd = phi.target.hom_data
    if hd is not None and phi.source.odot_data is None:
        return right_unadjunct(phi, other) if side == "right" else left_unadjunct(phi, other)
    if phi.source.odot_data is None:
        raise ValueError("frame mismatch for transpose")
    return right_adjunct(phi, other) if side == "right" else left_adjunct(phi, other)


def evaluation(M: Bimodule, W: Bimodule, H: Bimodule | None = None, HM: Bimodule | None = None) -> TwoCell:
    """``(M |> W) (.) M -> W``, ``f (x) m |-> f(m)``."""
    H = H or rhom(M, W)
    return right_unadjunct(TwoCell.identity(H), HM or odot(H, M))


# -- spaces of 2-cells --------------------------------------------------------


def twocell_system(X: Bimodule, Y: Bimodule, degree: int = 0) -> MapSystem:
    """Linear system whose solutions are the 2-cells ``X -> Y`` of a degree."""
    R = X.ring
    ms = MapSystem(R, X.degrees, Y.degrees, degree)
    Iy, Ix = R.eye(Y.n), R.eye(X.n)
    mod = Y.relations
    if X.relations.shape[1]:
        ms.add([(1, Iy, X.relations)], mod=mod)
    ms.add([(1, Y.d, Ix), (-_sgn(degree), Iy, X.d)], mod=mod)
    B, A = X.target, X.source
    for b in range(B.dim):
        ms.add([(1, Iy, X.left[b]), (-_sgn(degree * int(B.degrees[b])), Y.left[b], Ix)], mod=mod)
    for a in range(A.dim):
        ms.add([(1, Iy, X.right[a]), (-1, Y.right[a], Ix)], mod=mod)
    return ms


def twocell_space(X: Bimodule, Y: Bimodule, degree: int = 0) -> list:
    """Generators of the 2-cells ``X -> Y`` (a basis over a field, modulo maps into relations)."""
    R = X.ring
    ms = twocell_system(X, Y, degree)
    sols = ms.solution_vectors()
    if Y.relations.shape[1] and sols.shape[1]:
        # quotient by maps landing in relations
        zs = []
        for c in range(Y.relations.shape[1]):
            t = int(Y.carrier.rel_degrees[c])
            for j in np.nonzero(X.degrees + degree == t)[0]:
                F = R.zeros((Y.n, X.n))
                F[:, j] = Y.relations[:, c]
                zs.append(F[ms.I, ms.J])
        if zs and R.is_field:
            from .exactlin import FPModule

            co = Coordinatizer(sols, R)
            rel = co.solve(np.column_stack(zs))
            Q = FPModule(R, sols.shape[1], rel)
            sols = R.matmul(sols, Q.sect)
    return [TwoCell(X, Y, ms.to_matrix(sols[:, i]), degree, check=False) for i in range(sols.shape[1])]


# -- structural isomorphisms ------------------------------------------------


def left_unitor(M: Bimodule, BM: Bimodule | None = None) -> TwoCell:
    """``B (.) M -> M``, ``b (x) m |-> b m``."""
    BM = BM or odot(unit_cell(M.target), M)
    R = M.ring
    raw = np.hstack(list(M.left)) if M.n else R.zeros((0, 0))
    mat = R.matmul(raw, BM.odot_data.S) if M.n else R.zeros((M.n, BM.n))
    return TwoCell(BM, M, M.carrier.reduce(mat), check=False)


def right_unitor(M: Bimodule, MA: Bimodule | None = None) -> TwoCell:
    """``M (.) A -> M``, ``m (x) a |-> m a``."""
    MA = MA or odot(M, unit_cell(M.source))
    R = M.ring
    NA = M.source.dim
    raw = M.right.transpose(1, 2, 0).reshape(M.n, M.n * NA)
    mat = R.matmul(raw, MA.odot_data.S) if M.n else R.zeros((M.n, MA.n))
    return TwoCell(MA, M, M.carrier.reduce(mat), check=False)


def associator(L, M, N, LM=None, MN=None, LM_N=None, L_MN=None) -> TwoCell:
    """``(L (.) M) (.) N -> L (.) (M (.) N)``."""
    R = L.ring
    LM = LM or odot(L, M)
    MN = MN or odot(M, N)
    LM_N = LM_N or odot(LM, N)
    L_MN = L_MN or odot(L, MN)
    mat = R.mul(
        L_MN.odot_data.P,
        np.kron(R.eye(L.n), MN.odot_data.P),
        np.kron(LM.odot_data.S, R.eye(N.n)),
        LM_N.odot_data.S,
    )
    return TwoCell(LM_N, L_MN, L_MN.carrier.reduce(mat), check=False)


def shift_alpha(X: Bimodule, SA: Bimodule | None = None, XSA: Bimodule | None = None, SX: Bimodule | None = None) -> TwoCell:
    """``alpha: X (.) Sigma A -> Sigma X``, ``x (x) sigma a |-> (-1)^|x| sigma(x a)``."""
    R = X.ring
    A = X.source
    SA = SA or shift_bimodule(unit_cell(A), 1)
    XSA = XSA or odot(X, SA)
    SX = SX or shift_bimodule(X, 1)
    NA = A.dim
    raw = X.right.transpose(1, 2, 0).reshape(X.n, X.n * NA)
    sg = np.repeat(np.array([_sgn(int(t)) for t in X.degrees]), NA)
    raw = R.reduce(raw * (sg.astype(object) if R.dtype is object else sg)[None, :])
    mat = R.matmul(raw, XSA.odot_data.S)
    return TwoCell(XSA, SX, SX.carrier.reduce(mat), check=False)


def _koszul_swap_sign(ring, p: int, q: int) -> int:
    """Sign of ``s_p (x) s_q |-> s_q (x) s_p``, read off the Koszul rule for maps."""
    from .complex import sphere, tensor, tensor_maps

    Sp, Sq = sphere(ring, p), sphere(ring, q)
    g = ChainMap(Sq, Sq, ring.eye(1), q, check=False)
    f = ChainMap(Sp, Sp, ring.eye(1), 0, check=False)
    v = tensor_maps(f, g, tensor(Sp, Sq), tensor(Sp, Sq)).matrix[0, 0]
    return 1 if v == 1 else -1


def tc1_composite(A: DGAlgebra):
    """The composite ``Sigma^2 A -> Sigma A (.) Sigma A -> Sigma A (.) Sigma A -> Sigma^2 A``.

    The middle map swaps the two suspension coordinates with the Koszul
    sign and fixes the algebra part.  Returns ``(composite, alpha, kappa)``.
    """
    R = A.ring
    U = unit_cell(A)
    SA = shift_bimodule(U, 1)
    SASA = odot(SA, SA)
    S2A = shift_bimodule(SA, 1)
    alpha = shift_alpha(SA, SA, SASA, S2A)
    if not alpha.validate():
        raise ValueError("alpha is not a bimodule map")
    # psi: sigma a (x) sigma a' |-> (-1)^|a| sigma^2 (a a'); kappa = psi^-1 tau psi
    N = A.dim
    raw = A.R.transpose(1, 2, 0).reshape(N, N * N)
    sg = np.repeat(np.array([_sgn(int(t)) for t in A.degrees]), N)
    raw = R.reduce(raw * (sg.astype(object) if R.dtype is object else sg)[None, :])
    psi = TwoCell(SASA, S2A, R.matmul(raw, SASA.odot_data.S), check=False)
    tau = _koszul_swap_sign(R, 1, 1)
    kappa = psi.inverse() @ TwoCell.identity(S2A).scaled(tau) @ psi
    kappa.check = False
    comp = alpha @ kappa @ alpha.inverse()
    return comp, alpha, kappa


def structural_isos(X: Bimodule, request: str, *others):
    """Dispatch to the structural 2-cells by name.

    ``Assoc`` takes ``(L, M, N)`` as ``X`` and two further cells;
    ``LeftUnit``, ``RightUnit`` and ``ShiftAlpha`` act on ``X``.
    """
    req = request.lower()
    if req == "assoc":
        if len(others) != 2:
            raise ValueError("shape mismatch: associator needs three 1-cells")
        return associator(X, *others)
    if req in ("leftunit", "left_unit"):
        return left_unitor(X)
    if req in ("rightunit", "right_unit"):
        return right_unitor(X)
    if req in ("shiftalpha", "shift_alpha"):
        return shift_alpha(X)
    raise ValueError(f"unknown structural isomorphism {request!r}")
