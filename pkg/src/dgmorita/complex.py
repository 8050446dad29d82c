"""Bounded chain complexes of finitely presented modules.

A complex is stored flat: one list of generator degrees, one differential
matrix ``d`` on all generators (homogeneous of degree -1) and one relation
matrix whose columns are homogeneous relators.  Per-degree pieces are views.

Sign conventions used throughout the package:

* homological grading, ``d`` lowers degree by one;
* ``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy``;
* a map ``f`` of degree ``s`` is a chain map when ``d f = (-1)^s f d``;
* ``(Sigma^k C)_n = C_{n-k}`` with differential ``(-1)^k d``;
* ``cone(f)_n = Y_n + X_{n-1}`` with ``d(y, x) = (dy + f x, -dx)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .exactlin import (
    Coordinatizer,
    FPModule,
    MapSystem,
    ModuleMap,
    block_diag,
    image_basis,
    kernel,
)
from .rings import CoeffRing

__all__ = [
    "GradedModule",
    "ChainComplex",
    "ChainMap",
    "HomologyResult",
    "QuasiIsoResult",
    "homology",
    "cone",
    "shift",
    "shift_map",
    "direct_sum",
    "tensor",
    "tensor_maps",
    "is_quasi_iso",
    "chain_homotopy_solve",
    "sphere",
    "disk",
    "interval",
    "sign_diag",
]


def sign_diag(ring: CoeffRing, degrees) -> np.ndarray:
    """Diagonal matrix of ``(-1)^deg``."""
    m = ring.zeros((len(degrees), len(degrees)))
    for i, n in enumerate(degrees):
        m[i, i] = ring.scalar(-1 if n % 2 else 1)
    return m


def _sgn(n: int) -> int:
    return -1 if n % 2 else 1


class GradedModule:
    """Finitely many generators with degrees, modulo homogeneous relators."""

    def __init__(self, ring: CoeffRing, degrees, relations=None):
        self.ring = ring
        self.degrees = np.asarray(list(degrees), dtype=np.int64).reshape(-1)
        n = len(self.degrees)
        if relations is None:
            relations = ring.zeros((n, 0))
        if relations.dtype != ring.dtype:
            relations = ring.array(relations.tolist(), shape=relations.shape)
        relations = ring.reduce(relations)
        nz = relations != 0
        keep = np.nonzero(nz.any(axis=0))[0]
        if len(keep) != relations.shape[1]:
            relations = relations[:, keep]
            nz = nz[:, keep]
        if relations.shape[1]:
            big = np.iinfo(np.int64).max
            lo = np.where(nz, self.degrees[:, None], big).min(axis=0)
            hi = np.where(nz, self.degrees[:, None], -big).max(axis=0)
            if np.any(lo != hi):
                raise ValueError("relations must be homogeneous")
            rdeg = lo
        else:
            rdeg = []
        self.relations = relations
        self.rel_degrees = np.asarray(rdeg, dtype=np.int64)

    @property
    def ngens(self) -> int:
        return len(self.degrees)

    @property
    def support(self) -> tuple:
        """``(lo, hi)`` of generator degrees; ``(0, -1)`` when empty."""
        if self.ngens == 0:
            return (0, -1)
        return (int(self.degrees.min()), int(self.degrees.max()))

    def degree_list(self):
        return sorted(set(self.degrees.tolist()))

    @cached_property
    def _idx(self):
        out = {}
        for i, n in enumerate(self.degrees.tolist()):
            out.setdefault(n, []).append(i)
        return {n: np.asarray(v, dtype=np.int64) for n, v in out.items()}

    @cached_property
    def _ridx(self):
        out = {}
        for j, n in enumerate(self.rel_degrees.tolist()):
            out.setdefault(n, []).append(j)
        return {n: np.asarray(v, dtype=np.int64) for n, v in out.items()}

    def idx(self, n: int) -> np.ndarray:
        return self._idx.get(int(n), np.zeros(0, dtype=np.int64))

    def rel_block(self, n: int) -> np.ndarray:
        rows = self.idx(n)
        cols = self._ridx.get(int(n), np.zeros(0, dtype=np.int64))
        return self.relations[np.ix_(rows, cols)]

    @cached_property
    def _pieces(self):
        return {}

    def piece(self, n: int) -> FPModule:
        n = int(n)
        if n not in self._pieces:
            self._pieces[n] = FPModule(self.ring, len(self.idx(n)), self.rel_block(n))
        return self._pieces[n]

    @property
    def pieces(self) -> dict:
        return {n: self.piece(n) for n in self.degree_list()}

    def is_zero(self, x: np.ndarray) -> bool:
        """Whether ``x`` (vector or columns on all generators) vanishes."""
        if x.size == 0:
            return True
        if self.relations.shape[1] == 0:
            return self.ring.is_zero_array(x)
        for n in self.degree_list():
            ix = self.idx(n)
            if not self.piece(n).is_zero(x[ix]):
                return False
        return True

    def reduce(self, x: np.ndarray) -> np.ndarray:
        """Canonical representative when relations are diagonal moduli (after normalization)."""
        R = self.ring
        if R.kind != "Z" or self.relations.shape[1] == 0:
            return x
        x = x.copy()
        for j in range(self.relations.shape[1]):
            rows = np.nonzero(self.relations[:, j] != 0)[0]
            if len(rows) == 1:
                i = rows[0]
                d = abs(self.relations[i, j])
                x[i] = x[i] % d
        return x


class ChainComplex(GradedModule):
    """A bounded complex; ``d`` is validated (degree -1, ``d^2 = 0``) on construction."""

    def __init__(self, ring, degrees, d=None, relations=None, check=True):
        super().__init__(ring, degrees, relations)
        n = self.ngens
        if d is None:
            d = ring.zeros((n, n))
        if d.dtype != ring.dtype:
            d = ring.array(d.tolist(), shape=d.shape)
        self.d = ring.reduce(d)
        if self.d.shape != (n, n):
            raise ValueError("differential has the wrong shape")
        if check:
            self.validate()

    def validate(self):
        R = self.ring
        rows, cols = np.nonzero(self.d != 0)
        if np.any(self.degrees[rows] != self.degrees[cols] - 1):
            raise ValueError("differential must have degree -1")
        if not self.is_zero(R.matmul(self.d, self.relations)):
            raise ValueError("differential does not preserve relations")
        if not self.is_zero(R.matmul(self.d, self.d)):
            raise ValueError("invalid complex: d^2 != 0")

    @property
    def graded(self) -> GradedModule:
        return GradedModule(self.ring, self.degrees, self.relations)

    def d_block(self, n: int) -> np.ndarray:
        """``d_n : C_n -> C_{n-1}`` on the generators of those degrees."""
        return self.d[np.ix_(self.idx(n - 1), self.idx(n))]

    def sorting_permutation(self):
        """Generator order by degree when there are no relations to normalize away, else ``None``."""
        if not self.ring.is_zero_array(self.relations):
            return None
        return np.concatenate([self.idx(n) for n in self.degree_list()] or [np.zeros(0, dtype=np.int64)]).astype(np.int64)

    def normalized(self):
        """``(C', P, S)``: each piece on canonical generators.

        ``P`` takes vectors on old generators to new coordinates and ``S``
        embeds new generators as old vectors; ``P S`` is the identity and
        ``d' = P d S``.
        """
        R = self.ring
        perm = self.sorting_permutation()
        if perm is not None:
            P = R.eye(self.ngens)[perm]
            C2 = ChainComplex(R, self.degrees[perm], self.d[np.ix_(perm, perm)], None, check=False)
            return C2, P, P.T.copy()
        new_deg, Pb, Sb, rel_cols = [], [], [], []
        order = []
        for n in self.degree_list():
            M = self.piece(n)
            k = M.ncanon
            order.append((n, k))
            new_deg += [n] * k
        N = len(new_deg)
        P = R.zeros((N, self.ngens))
        S = R.zeros((self.ngens, N))
        rel = []
        off = 0
        for n, k in order:
            M = self.piece(n)
            ix = self.idx(n)
            if k:
                P[off : off + k, ix] = M.proj
                S[ix, off : off + k] = M.sect
            for i, dmod in enumerate(M.moduli):
                if dmod != 0:
                    col = R.zeros((N,))
                    col[off + i] = dmod
                    rel.append(col)
            off += k
        relm = np.column_stack(rel) if rel else R.zeros((N, 0))
        C2 = ChainComplex(R, new_deg, R.zeros((N, N)), relm, check=False)
        C2.d = C2.reduce(R.mul(P, self.d, S))
        return C2, P, S

    def homology(self) -> "HomologyResult":
        return homology(self)

    def __repr__(self):
        lo, hi = self.support
        ranks = {n: str(self.piece(n)) for n in self.degree_list()}
        return f"ChainComplex({self.ring}, {ranks})"


@dataclass
class ChainMap:
    """Map of complexes of a given degree: ``d f = (-1)^degree f d``."""

    source: ChainComplex
    target: ChainComplex
    matrix: np.ndarray
    degree: int = 0
    check: bool = True

    def __post_init__(self):
        R = self.source.ring
        if self.matrix.dtype != R.dtype:
            self.matrix = R.array(self.matrix.tolist(), shape=self.matrix.shape)
        self.matrix = R.reduce(self.matrix)
        if self.matrix.shape != (self.target.ngens, self.source.ngens):
            raise ValueError("map matrix has the wrong shape")
        if self.check:
            self.validate()

    def validate(self):
        R = self.source.ring
        rows, cols = np.nonzero(self.matrix != 0)
        if np.any(self.target.degrees[rows] != self.source.degrees[cols] + self.degree):
            raise ValueError("map is not homogeneous of the stated degree")
        if not self.target.is_zero(R.matmul(self.matrix, self.source.relations)):
            raise ValueError("map does not respect relations")
        lhs = R.sub(
            R.matmul(self.target.d, self.matrix),
            R.scale(_sgn(self.degree), R.matmul(self.matrix, self.source.d)),
        )
        if not self.target.is_zero(lhs):
            raise ValueError("map does not commute with the differentials")

    @property
    def ring(self):
        return self.source.ring

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        R = self.ring
        return ChainMap(
            other.source, self.target, R.matmul(self.matrix, other.matrix),
            self.degree + other.degree, check=False,
        )

    def __add__(self, other):
        return ChainMap(self.source, self.target, self.ring.add(self.matrix, other.matrix), self.degree, check=False)

    def __sub__(self, other):
        return ChainMap(self.source, self.target, self.ring.sub(self.matrix, other.matrix), self.degree, check=False)

    def scaled(self, c):
        return ChainMap(self.source, self.target, self.ring.scale(c, self.matrix), self.degree, check=False)

    def equals(self, other) -> bool:
        return self.target.is_zero(self.ring.sub(self.matrix, other.matrix))

    def is_zero(self) -> bool:
        return self.target.is_zero(self.matrix)

    def block(self, n: int) -> np.ndarray:
        return self.matrix[np.ix_(self.target.idx(n + self.degree), self.source.idx(n))]

    def module_map(self, n: int) -> ModuleMap:
        return ModuleMap(self.source.piece(n), self.target.piece(n + self.degree), self.block(n))

    @classmethod
    def identity(cls, C):
        return cls(C, C, C.ring.eye(C.ngens), 0, check=False)

    @classmethod
    def zero(cls, X, Y, degree=0):
        return cls(X, Y, X.ring.zeros((Y.ngens, X.ngens)), degree, check=False)

    def induced(self, n: int) -> np.ndarray:
        """Matrix of ``H_n(f)`` on canonical homology generators."""
        HX = homology(self.source)
        HY = homology(self.target)
        reps = HX.reps(n)
        if reps.shape[1] == 0:
            return self.ring.zeros((HY.module(n + self.degree).ncanon, 0))
        return HY.class_of(n + self.degree, self.ring.matmul(self.matrix, reps))


@dataclass
class _HDegree:
    module: FPModule  # on cycle-lattice generators
    cycles: np.ndarray  # columns: cycle lattice basis on C_n generators
    coord: Coordinatizer


class HomologyResult:
    """Homology of a complex with cycle representatives per generator."""

    def __init__(self, C: ChainComplex):
        self.complex = C
        self.ring = C.ring
        self._cache = {}

    def _compute(self, n: int) -> _HDegree:
        C, R = self.complex, self.ring
        ix, ixm = C.idx(n), C.idx(n - 1)
        if len(ix) == 0:
            z = R.zeros((0, 0))
            return _HDegree(FPModule(R, 0), z, Coordinatizer(z, R))
        Dn = C.d_block(n)
        Rm = C.rel_block(n - 1)
        sys = np.hstack([Dn, R.neg(Rm)]) if Rm.shape[1] else Dn
        if sys.shape[0] == 0:
            cyc = R.eye(len(ix))
        else:
            K = kernel(sys, R)
            cyc = image_basis(K[: len(ix), :], R)
        coord = Coordinatizer(cyc, R)
        bnd = np.hstack([C.d[np.ix_(ix, C.idx(n + 1))], C.rel_block(n)])
        rel = coord.solve(bnd) if bnd.shape[1] else R.zeros((cyc.shape[1], 0))
        return _HDegree(FPModule(R, cyc.shape[1], rel), cyc, coord)

    def _get(self, n: int) -> _HDegree:
        n = int(n)
        if n not in self._cache:
            self._cache[n] = self._compute(n)
        return self._cache[n]

    def module(self, n: int) -> FPModule:
        """``H_n`` (on the cycle lattice; use ``.iso_type`` or ``str``)."""
        return self._get(n).module

    def reps(self, n: int) -> np.ndarray:
        """Cycle representatives (columns on all generators) of the canonical generators."""
        C, R = self.complex, self.ring
        h = self._get(n)
        out = R.zeros((C.ngens, h.module.ncanon))
        if h.module.ncanon:
            out[C.idx(n), :] = R.matmul(h.cycles, h.module.sect)
        return out

    def class_of(self, n: int, z: np.ndarray) -> np.ndarray:
        """Canonical coordinates in ``H_n`` of a cycle (or columns of cycles)."""
        C = self.complex
        h = self._get(n)
        zz = z[C.idx(n)]
        if h.module.ncanon == 0:
            shape = (0,) if z.ndim == 1 else (0, z.shape[1])
            return self.ring.zeros(shape)
        return h.module.canonical(h.coord.solve(zz))

    def is_boundary(self, n: int, z: np.ndarray) -> bool:
        return self.ring.is_zero_array(self.class_of(n, z))

    def degrees(self):
        return self.complex.degree_list()

    def nonzero_degrees(self):
        return [n for n in self.degrees() if self.module(n).ncanon]

    def is_acyclic(self) -> bool:
        return not self.nonzero_degrees()

    def as_dict(self) -> dict:
        return {n: str(self.module(n)) for n in self.nonzero_degrees()}

    def iso_types(self) -> dict:
        return {n: self.module(n).iso_type for n in self.nonzero_degrees()}

    def __repr__(self):
        return f"HomologyResult({self.as_dict()})"


def homology(C: ChainComplex) -> HomologyResult:
    cached = C.__dict__.get("_homology")
    if cached is None:
        cached = HomologyResult(C)
        C.__dict__["_homology"] = cached
    return cached


@dataclass
class ConeResult:
    complex: ChainComplex
    incl: ChainMap  # target -> cone
    proj: ChainMap  # cone -> shift(source, 1)


def cone(f: ChainMap) -> ConeResult:
    """Mapping cone with its inclusion and projection."""
    if f.degree != 0:
        raise ValueError("cone needs a degree-0 map")
    X, Y, R = f.source, f.target, f.ring
    ny, nx = Y.ngens, X.ngens
    d = R.zeros((ny + nx, ny + nx))
    d[:ny, :ny] = Y.d
    d[:ny, ny:] = f.matrix
    d[ny:, ny:] = R.neg(X.d)
    degs = list(Y.degrees) + [n + 1 for n in X.degrees]
    rel = block_diag(R, [Y.relations, X.relations])
    Cn = ChainComplex(R, degs, d, rel, check=False)
    incl = ChainMap(Y, Cn, np.vstack([R.eye(ny), R.zeros((nx, ny))]), check=False)
    SX = shift(X, 1)
    proj = ChainMap(Cn, SX, np.hstack([R.zeros((nx, ny)), R.eye(nx)]), check=False)
    return ConeResult(Cn, incl, proj)


def shift(C: ChainComplex, k: int) -> ChainComplex:
    R = C.ring
    return ChainComplex(R, C.degrees + k, R.scale(_sgn(k), C.d), C.relations, check=False)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    """``Sigma^k f``: the same matrix between shifted complexes (degree 0 maps)."""
    return ChainMap(shift(f.source, k), shift(f.target, k), f.matrix, f.degree, check=False)


def direct_sum(*Cs: ChainComplex) -> ChainComplex:
    R = Cs[0].ring
    degs = [n for C in Cs for n in C.degrees]
    return ChainComplex(
        R, degs, block_diag(R, [C.d for C in Cs]), block_diag(R, [C.relations for C in Cs]), check=False
    )


def tensor(X: ChainComplex, Y: ChainComplex) -> ChainComplex:
    """``X (x)_k Y``; generator ``(i, j)`` sits at index ``i * Y.ngens + j``."""
    R = X.ring
    degs = (X.degrees[:, None] + Y.degrees[None, :]).reshape(-1)
    d = R.add(np.kron(X.d, R.eye(Y.ngens)), np.kron(sign_diag(R, X.degrees), Y.d))
    rel = np.hstack([np.kron(X.relations, R.eye(Y.ngens)), np.kron(R.eye(X.ngens), Y.relations)])
    return ChainComplex(R, degs, d, rel, check=False)


def tensor_maps(f: ChainMap, g: ChainMap, source=None, target=None) -> ChainMap:
    """``(f (x) g)(x (x) y) = (-1)^{|g||x|} f x (x) g y``."""
    R = f.ring
    src = source or tensor(f.source, g.source)
    tgt = target or tensor(f.target, g.target)
    sgn = sign_diag(R, f.source.degrees) if g.degree % 2 else R.eye(f.source.ngens)
    return ChainMap(src, tgt, np.kron(R.matmul(f.matrix, sgn), g.matrix), f.degree + g.degree, check=False)


@dataclass
class QuasiIsoResult:
    ok: bool
    failing_degrees: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def is_quasi_iso(f: ChainMap) -> QuasiIsoResult:
    """Quasi-isomorphism test via acyclicity of the cone.

    A failure in cone degree ``n`` is reported as degree ``n`` (a kernel
    problem in ``H_{n-1}`` or cokernel problem in ``H_n`` of ``f``).
    """
    H = homology(cone(f).complex)
    bad = H.nonzero_degrees()
    return QuasiIsoResult(not bad, bad)


def homotopy_system(f: ChainMap, g: ChainMap) -> MapSystem:
    """System for ``h`` of degree +1 with ``d h + h d = f - g``."""
    X, Y, R = f.source, f.target, f.ring
    ms = MapSystem(R, X.degrees, Y.degrees, f.degree + 1)
    rhs = R.sub(f.matrix, g.matrix)
    sgn = _sgn(f.degree)  # d h - (-1)^{|h|} h d with |h| = |f| + 1
    ms.add([(1, Y.d, R.eye(X.ngens)), (sgn, R.eye(Y.ngens), X.d)], rhs=rhs, mod=Y.relations)
    if X.relations.shape[1]:
        ms.add([(1, R.eye(Y.ngens), X.relations)], mod=Y.relations)
    return ms


def chain_homotopy_solve(f: ChainMap, g: ChainMap):
    """A degree +1 map ``h`` with ``d h + h d = f - g``, or ``None``."""
    if f.source is not g.source and f.source.ngens != g.source.ngens:
        raise ValueError("maps have different sources")
    h = homotopy_system(f, g).solve()
    if h is None:
        return None
    return ChainMap(f.source, f.target, h, f.degree + 1, check=False)


def sphere(ring: CoeffRing, n: int) -> ChainComplex:
    """``S^n``: one generator in degree ``n``."""
    return ChainComplex(ring, [n])


def disk(ring: CoeffRing, n: int) -> ChainComplex:
    """``D^n``: generators in degrees ``n`` and ``n-1`` with ``d(top) = bottom``."""
    d = ring.zeros((2, 2))
    d[1, 0] = ring.one()
    return ChainComplex(ring, [n, n - 1], d)


def interval(ring: CoeffRing) -> ChainComplex:
    """Generators ``<I>`` (degree 1), ``<0>``, ``<1>`` with ``d<I> = <0> - <1>``."""
    d = ring.zeros((3, 3))
    d[1, 0] = ring.one()
    d[2, 0] = ring.scalar(-1)
    return ChainComplex(ring, [1, 0, 0], d)
