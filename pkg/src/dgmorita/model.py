"""Cell bimodules, semifree replacement, lifting problems and pushout products.

A cell bimodule ``A -> B`` is free over ``B (x) A^op`` on generators ``g``;
its carrier basis is ``b (x) g (x) a`` at index ``(b * ng + g) * A.dim + a``
and::

    d(b g a) = db g a + (-1)^|b| b (dg) a + (-1)^{|b|+|g|} b g da
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bicat import Bimodule, TwoCell, twocell_system, same_algebra
from .complex import (
    ChainComplex,
    ChainMap,
    chain_homotopy_solve,
    cone,
    homology,
    interval,
    is_quasi_iso,
    sign_diag,
    tensor,
    tensor_maps,
    _sgn,
)
from .dga import DGAlgebra, ground
from .exactlin import FPModule, MapSystem, ModuleMap, image_basis, kernel, solve_linear
from .rings import CoeffRing

__all__ = [
    "Window",
    "CellStructure",
    "Certificate",
    "ReplacementResult",
    "LiftingProblem",
    "cell_module",
    "cell_generators",
    "cell_map",
    "attach_cell",
    "free_on_complex",
    "cofibrant_replace",
    "is_certified_cofibrant",
    "lifting_solve",
    "help_lift",
    "help_homology_check",
    "pushout_product",
    "PushoutProduct",
    "interval_basis_change",
    "deformation_retraction",
    "generator_maps",
]


@dataclass(frozen=True)
class Window:
    """Degree interval ``[lo, hi]`` and a cap on attachment stages."""

    lo: int
    hi: int
    cap: int = 8

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("window must have lo <= hi")
        if self.cap < 1:
            raise ValueError("stage cap must be at least 1")

    @classmethod
    def parse(cls, text: str, cap: int = 8) -> "Window":
        lo, hi = text.split(":")
        return cls(int(lo), int(hi), cap)

    def __contains__(self, n):
        return self.lo <= n <= self.hi


@dataclass
class CellStructure:
    """Generators of a cell bimodule with their boundaries.

    ``dgen[:, g]`` is ``d(g)`` in the carrier basis; ``stages[s]`` lists the
    generators attached at stage ``s`` (boundaries lie in earlier stages).
    """

    source: DGAlgebra
    target: DGAlgebra
    gen_degrees: list
    dgen: np.ndarray
    stages: list

    @property
    def ngens(self):
        return len(self.gen_degrees)

    def index(self, b, g, a):
        return (b * self.ngens + g) * self.source.dim + a

    def generator_vector(self, g) -> np.ndarray:
        """The element ``1 (x) g (x) 1``."""
        A, B = self.source, self.target
        R = A.ring
        v = R.reduce(np.kron(np.kron(B.unit, _unit(R, self.ngens, g)), A.unit))
        return v

    def check_triangular(self) -> bool:
        """Each boundary only involves generators from earlier stages."""
        R = self.source.ring
        seen = set()
        for st in self.stages:
            for g in st:
                x = self.dgen[:, g]
                for h in range(self.ngens):
                    if h in seen:
                        continue
                    if np.any(x[self._gen_slice(h)] != 0):
                        return False
            seen.update(st)
        return True

    def _gen_slice(self, g):
        A, B = self.source, self.target
        return np.array([self.index(b, g, a) for b in range(B.dim) for a in range(A.dim)], dtype=np.int64)


def _unit(R, n, i):
    v = R.zeros((n,))
    v[i] = R.one()
    return v


@dataclass
class Certificate:
    """Degrees on which the replacement map is known to be a homology isomorphism."""

    lo: int
    hi: int
    certified: list
    full: bool

    @property
    def range(self):
        return (min(self.certified), max(self.certified)) if self.certified else None

    def as_dict(self):
        return {"window": [self.lo, self.hi], "certified_degrees": list(self.certified), "full": self.full}


def cell_module(A: DGAlgebra, B: DGAlgebra, gen_degrees, dgen=None, stages=None) -> Bimodule:
    """The cell bimodule ``A -> B`` on generators with prescribed boundaries."""
    R = A.ring
    ng = len(gen_degrees)
    NA, NB = A.dim, B.dim
    n = NB * ng * NA
    gdeg = np.asarray(list(gen_degrees), dtype=np.int64)
    degs = (B.degrees[:, None, None] + gdeg[None, :, None] + A.degrees[None, None, :]).reshape(-1)
    Ig = R.eye(ng)
    left = np.array([np.kron(np.kron(B.L[b], Ig), R.eye(NA)) for b in range(NB)]) if n else R.zeros((NB, 0, 0))
    right = np.array([np.kron(np.kron(R.eye(NB), Ig), A.R[a]) for a in range(NA)]) if n else R.zeros((NA, 0, 0))
    if dgen is None:
        dgen = R.zeros((n, ng))
    dgen = R.reduce(dgen)
    Sb = sign_diag(R, B.degrees)
    Sg = sign_diag(R, gdeg)
    d = R.add(np.kron(np.kron(B.d, Ig), R.eye(NA)), np.kron(np.kron(Sb, Sg), A.d))
    # middle term: (-1)^|b| b (dg) a
    for b in range(NB):
        sb = _sgn(int(B.degrees[b]))
        for g in range(ng):
            x = dgen[:, g]
            if not np.any(x != 0):
                continue
            y = R.matmul(left[b], x)
            for a in range(NA):
                col = (b * ng + g) * NA + a
                d[:, col] = R.add(d[:, col], R.scale(sb, R.matmul(right[a], y)))
    C = ChainComplex(R, degs, d, check=True)
    M = Bimodule(A, B, C, left, right, check=False, name="cell")
    if stages is None:
        stages = _default_stages(gdeg)
    M.cell = CellStructure(A, B, list(gdeg.tolist()), dgen, stages)
    return M


def _default_stages(gdeg):
    order = sorted(set(gdeg.tolist()))
    return [[int(g) for g in np.nonzero(gdeg == t)[0]] for t in order]


def cell_generators(A: DGAlgebra, B: DGAlgebra, n: int, kind: str) -> Bimodule:
    """``S^n``, ``D^n`` or the interval ``I`` (shifted by ``n``) as cell bimodules ``A -> B``."""
    kind = kind.lower()
    R = A.ring
    NA, NB = A.dim, B.dim

    def vec(ng, g):
        return R.reduce(np.kron(np.kron(B.unit, _unit(R, ng, g)), A.unit))

    if kind == "sphere":
        return cell_module(A, B, [n])
    if kind == "disk":
        dg = R.zeros((NB * 2 * NA, 2))
        dg[:, 0] = vec(2, 1)
        return cell_module(A, B, [n, n - 1], dg, [[1], [0]])
    if kind == "interval":
        dg = R.zeros((NB * 3 * NA, 3))
        dg[:, 0] = R.sub(vec(3, 1), vec(3, 2))
        return cell_module(A, B, [n + 1, n, n], dg, [[1, 2], [0]])
    raise ValueError(f"unknown cell kind {kind!r}")


def free_on_complex(A: DGAlgebra, B: DGAlgebra, V: ChainComplex) -> Bimodule:
    """``B (x) V (x) A`` for a complex ``V`` of free ``k``-modules (a finite cell bimodule)."""
    if V.relations.shape[1]:
        raise ValueError("complex must have free pieces")
    R = A.ring
    ng = V.ngens
    NA, NB = A.dim, B.dim
    dg = R.zeros((NB * ng * NA, ng))
    for g in range(ng):
        for h in np.nonzero(V.d[:, g] != 0)[0]:
            dg[:, g] = R.add(dg[:, g], R.scale(V.d[h, g], R.reduce(np.kron(np.kron(B.unit, _unit(R, ng, h)), A.unit))))
    return cell_module(A, B, list(V.degrees), dg)


def cell_map(Q: Bimodule, M: Bimodule, images: np.ndarray, degree: int = 0, check=True) -> TwoCell:
    """The 2-cell from a cell bimodule determined by generator images (columns)."""
    if Q.cell is None:
        raise ValueError("source is not a cell bimodule")
    cs = Q.cell
    R = Q.ring
    A, B = Q.source, Q.target
    NA, NB, ng = A.dim, B.dim, cs.ngens
    mat = R.zeros((M.n, Q.n))
    for b in range(NB):
        sb = _sgn(degree * int(B.degrees[b]))
        for g in range(ng):
            y = R.matmul(M.left[b], images[:, g])
            for a in range(NA):
                mat[:, (b * ng + g) * NA + a] = R.scale(sb, R.matmul(M.right[a], y))
    return TwoCell(Q, M, M.carrier.reduce(mat), degree, check=check)


def _reindex(cs_old_ng, new_ng, NA, NB):
    """Index map from an old cell carrier to one with more generators appended."""
    idx = []
    for b in range(NB):
        for g in range(cs_old_ng):
            for a in range(NA):
                idx.append((b * new_ng + g) * NA + a)
    return np.asarray(idx, dtype=np.int64)


def _extend(A, B, gdeg, dgen, new_deg, new_dgen_old_coords, stages):
    """Append generators; boundaries given in the old carrier coordinates."""
    R = A.ring
    NA, NB = A.dim, B.dim
    old = len(gdeg)
    ng = old + len(new_deg)
    idx = _reindex(old, ng, NA, NB)
    D = R.zeros((NB * ng * NA, ng))
    if old:
        D[idx, :old] = dgen
    for k, x in enumerate(new_dgen_old_coords):
        D[idx, old + k] = x
    stages = stages + [list(range(old, ng))]
    return list(gdeg) + list(new_deg), D, stages


def attach_cell(C: Bimodule, q: int, attach, window: Window | None = None):
    """Attach a cell of dimension ``q + 1`` along a cycle of degree ``q``.

    ``attach`` is either a 2-cell from the sphere ``S^q`` (its value on the
    generator is used) or the cycle itself.  Returns the new cell bimodule and
    the inclusion 2-cell.
    """
    if C.cell is None:
        raise ValueError("attach_cell needs a cell bimodule")
    if window is not None and not (window.lo <= q + 1 <= window.hi + 1):
        raise ValueError("degree out of window")
    R = C.ring
    z = attach
    if isinstance(attach, TwoCell):
        S = attach.source
        z = R.matmul(attach.matrix, S.cell.generator_vector(0))
    z = R.reduce(np.asarray(z))
    if np.any(z != 0) and set(C.degrees[np.nonzero(z != 0)[0]].tolist()) != {q}:
        raise ValueError("attaching element must have degree q")
    if not C.is_zero(R.matmul(C.d, z)):
        raise ValueError("attaching element is not a cycle")
    cs = C.cell
    gdeg, D, stages = _extend(C.source, C.target, cs.gen_degrees, cs.dgen, [q + 1], [z], cs.stages)
    Cn = cell_module(C.source, C.target, gdeg, D, stages)
    idx = _reindex(cs.ngens, len(gdeg), C.source.dim, C.target.dim)
    inc = R.zeros((Cn.n, C.n))
    inc[idx, np.arange(C.n)] = R.one()
    return Cn, TwoCell(C, Cn, inc, check=False)


# -- cofibrant replacement ----------------------------------------------------

# replacement stops (with a partial certificate) before the carrier exceeds this rank
MAX_CELL_RANK = 600


@dataclass
class ReplacementResult:
    Q: Bimodule
    q: TwoCell
    certificate: Certificate
    stages: int


def is_certified_cofibrant(M: Bimodule) -> bool:
    """Cell bimodules, and retracts of finite free ones recorded by the dual-basis construction."""
    return M.cell is not None or getattr(M, "retract_of_free", False)


def _canonical_module(H):
    R = H.ring
    k = H.ncanon
    cols = [i for i, d in enumerate(H.moduli) if d != 0]
    rel = R.zeros((k, len(cols)))
    for c, i in enumerate(cols):
        rel[i, c] = H.moduli[i]
    return FPModule(R, k, rel)


def certificate_for(q: TwoCell, lo: int, hi: int) -> Certificate:
    H = homology(cone(q.chain_map).complex)
    bad = set(H.nonzero_degrees())
    cert = [n for n in range(lo, hi + 1) if n not in bad and n + 1 not in bad]
    return Certificate(lo, hi, cert, not bad)


def cofibrant_replace(M: Bimodule, w: Window) -> ReplacementResult:
    """Semifree replacement by killing cycles degree by degree inside ``w``."""
    R = M.ring
    A, B = M.source, M.target
    if M.cell is not None:
        q = TwoCell.identity(M)
        return ReplacementResult(M, q, certificate_for(q, w.lo, w.hi), 0)
    HM = homology(M.carrier)
    gdeg, D, stages, images = [], R.zeros((0, 0)), [], []
    nstages = 0

    def build():
        Q = cell_module(A, B, gdeg, D if gdeg else R.zeros((0, 0)), [list(s) for s in stages])
        img = np.column_stack(images) if images else R.zeros((M.n, 0))
        return Q, cell_map(Q, M, img, check=False)

    Q, q = build()
    exhausted = False

    def too_big(extra):
        return Q.n + extra * A.dim * B.dim > MAX_CELL_RANK

    for n in range(w.lo, w.hi + 1):
        # surjectivity on H_n
        HMn = HM.module(n)
        if HMn.ncanon:
            Hq = q.chain_map.induced(n)
            Mc = _canonical_module(HMn)
            cok = FPModule(R, Mc.ngens, np.hstack([Hq, Mc.relations]))
            if cok.ncanon:
                if nstages >= w.cap or too_big(cok.ncanon):
                    exhausted = True
                    break
                reps = R.matmul(HM.reps(n), cok.sect)
                old = len(gdeg)
                gdeg, D, stages = _extend(A, B, gdeg, D, [n] * reps.shape[1], [R.zeros((Q.n,))] * reps.shape[1], stages)
                images += [reps[:, c] for c in range(reps.shape[1])]
                nstages += 1
                Q, q = build()
        # injectivity on H_n
        HQ = homology(Q.carrier)
        HQn = HQ.module(n)
        if HQn.ncanon:
            Hq = q.chain_map.induced(n)
            src = _canonical_module(HQn)
            tgt = _canonical_module(HMn)
            _, Kx = ModuleMap(src, tgt, Hq).kernel()
            if Kx.shape[1] and not src.is_zero(Kx):
                if nstages >= w.cap or too_big(Kx.shape[1]):
                    exhausted = True
                    break
                zs = R.matmul(HQ.reps(n), Kx)
                new_d, new_img = [], []
                ixn, ixn1 = M.carrier.idx(n), M.carrier.idx(n + 1)
                sysm = np.hstack([M.carrier.d[np.ix_(ixn, ixn1)], M.carrier.rel_block(n)])
                for c in range(zs.shape[1]):
                    z = zs[:, c]
                    if Q.is_zero(z):
                        continue
                    target = R.matmul(q.matrix, z)[ixn]
                    sol = solve_linear(sysm, target, R)
                    if sol is None:
                        raise RuntimeError("kernel class does not bound in the target")
                    m = R.zeros((M.n,))
                    m[ixn1] = sol[: len(ixn1)]
                    new_d.append(z)
                    new_img.append(m)
                if new_d:
                    gdeg, D, stages = _extend(A, B, gdeg, D, [n + 1] * len(new_d), new_d, stages)
                    images += new_img
                    nstages += 1
                    Q, q = build()
    cert = certificate_for(q, w.lo, w.hi)
    if exhausted:
        cert.full = False
    return ReplacementResult(Q, q, cert, nstages)


# -- lifting ------------------------------------------------------------------


@dataclass
class LiftingProblem:
    """Square ``top: A' -> X``, ``i: A' -> B'``, ``p: X -> Y``, ``bottom: B' -> Y``."""

    i: TwoCell
    p: TwoCell
    top: TwoCell
    bottom: TwoCell

    def commutes(self) -> bool:
        R = self.i.ring
        lhs = R.matmul(self.p.matrix, self.top.matrix)
        rhs = R.matmul(self.bottom.matrix, self.i.matrix)
        return self.p.target.is_zero(R.sub(lhs, rhs))


def lifting_solve(P: LiftingProblem):
    """A 2-cell ``B' -> X`` making both triangles commute, or ``None``."""
    if not P.commutes():
        raise ValueError("square does not commute")
    Bp, X, Y = P.i.target, P.p.source, P.p.target
    R = Bp.ring
    ms = twocell_system(Bp, X, 0)
    ms.add([(1, R.eye(X.n), P.i.matrix)], rhs=P.top.matrix, mod=X.relations)
    ms.add([(1, P.p.matrix, R.eye(Bp.n))], rhs=P.bottom.matrix, mod=Y.relations)
    sol = ms.solve()
    if sol is None:
        return None
    return TwoCell(Bp, X, X.carrier.reduce(sol), check=False)


def _block(C, rows_deg, cols_deg, mat):
    return mat[np.ix_(C[0].idx(rows_deg), C[1].idx(cols_deg))]


def help_lift(e, n: int):
    """Homotopy lifting of ``e`` against ``S^n -> D^{n+1}``, decided by linear algebra.

    Data are triples ``(z, w', t)`` with ``dz = 0`` in ``X_n`` and
    ``e z - d w' = d t`` in ``Y_n`` (``w', t`` in ``Y_{n+1}``).  A solution is
    ``(w, u)`` with ``dw = z`` and ``du = e w - w' - t``.  Returns
    ``(all_lift, failing_data)``; solutions are affine, so checking a
    generating set of data suffices.
    """
    f = e.chain_map if isinstance(e, TwoCell) else e
    X, Y = f.source, f.target
    R = f.ring
    ixn, ixn1 = X.idx(n), X.idx(n + 1)
    iyn, iyn1, iyn2 = Y.idx(n), Y.idx(n + 1), Y.idx(n + 2)
    iym = Y.idx(n - 1)
    ixm = X.idx(n - 1)
    nz, nw, nt = len(ixn), len(iyn1), len(iyn1)
    if nz + nw == 0:
        return True, []
    dX_n = X.d[np.ix_(ixm, ixn)]
    dY_n1 = Y.d[np.ix_(iyn, iyn1)]
    e_n = f.matrix[np.ix_(iyn, ixn)]
    RXm, RYn = X.rel_block(n - 1), Y.rel_block(n)
    # unknowns: z, w', t, slack_x, slack_y
    rows1 = np.hstack([dX_n, R.zeros((len(ixm), nw + nt)), R.neg(RXm), R.zeros((len(ixm), RYn.shape[1]))])
    rows2 = np.hstack([e_n, R.neg(dY_n1), R.neg(dY_n1), R.zeros((len(iyn), RXm.shape[1])), R.neg(RYn)])
    sysm = np.vstack([rows1, rows2])
    K = kernel(sysm, R) if sysm.shape[0] else R.eye(sysm.shape[1])
    data = image_basis(K[: nz + nw + nt, :], R)
    # lifting system: unknowns w in X_{n+1}, u in Y_{n+2}, slacks
    dX_n1 = X.d[np.ix_(ixn, ixn1)]
    dY_n2 = Y.d[np.ix_(iyn1, iyn2)]
    e_n1 = f.matrix[np.ix_(iyn1, ixn1)]
    RXn, RYn1 = X.rel_block(n), Y.rel_block(n + 1)
    top = np.hstack([dX_n1, R.zeros((nz, len(iyn2))), R.neg(RXn), R.zeros((nz, RYn1.shape[1]))])
    bot = np.hstack([R.neg(e_n1), dY_n2, R.zeros((nw, RXn.shape[1])), R.neg(RYn1)])
    L = np.vstack([top, bot])
    failing = []
    for c in range(data.shape[1]):
        z = data[:nz, c]
        wp = data[nz : nz + nw, c]
        t = data[nz + nw :, c]
        rhs = np.concatenate([z, R.neg(R.add(wp, t))])
        if L.shape[1] == 0:
            ok = R.is_zero_array(rhs)
        else:
            ok = solve_linear(L, rhs, R) is not None
        if not ok:
            failing.append(c)
    return not failing, failing


def help_homology_check(e, n: int) -> bool:
    """``H_n(e)`` injective and ``H_{n+1}(e)`` surjective."""
    f = e.chain_map if isinstance(e, TwoCell) else e
    X, Y = f.source, f.target
    HX, HY = homology(X), homology(Y)
    src, tgt = _canonical_module(HX.module(n)), _canonical_module(HY.module(n))
    inj = ModuleMap(src, tgt, f.induced(n)).is_injective() if src.ngens else True
    src1, tgt1 = _canonical_module(HX.module(n + 1)), _canonical_module(HY.module(n + 1))
    surj = ModuleMap(src1, tgt1, f.induced(n + 1)).is_surjective() if tgt1.ngens else True
    return inj and surj


# -- pushout products over k ----------------------------------------------------


@dataclass
class PushoutProduct:
    map: ChainMap  # P -> X' (x) Y'
    injective: bool
    new_cells: list  # degrees of generators of the cokernel
    cokernel_free: bool

    @property
    def is_quasi_iso(self):
        return bool(is_quasi_iso(self.map))


def pushout_product(i: ChainMap, j: ChainMap) -> PushoutProduct:
    """``i box j: X' (x) Y  u_{X (x) Y}  X (x) Y' -> X' (x) Y'`` over ``k``."""
    R = i.ring
    X, Xp, Y, Yp = i.source, i.target, j.source, j.target
    XpY, XYp, XY, XpYp = tensor(Xp, Y), tensor(X, Yp), tensor(X, Y), tensor(Xp, Yp)
    iy = tensor_maps(i, ChainMap.identity(Y), XY, XpY)
    xj = tensor_maps(ChainMap.identity(X), j, XY, XYp)
    n1, n2 = XpY.ngens, XYp.ngens
    degs = list(XpY.degrees) + list(XYp.degrees)
    d = R.zeros((n1 + n2, n1 + n2))
    d[:n1, :n1] = XpY.d
    d[n1:, n1:] = XYp.d
    glue = np.vstack([iy.matrix, R.neg(xj.matrix)])
    rel = np.hstack([
        np.vstack([XpY.relations, R.zeros((n2, XpY.relations.shape[1]))]),
        np.vstack([R.zeros((n1, XYp.relations.shape[1])), XYp.relations]),
        glue,
    ])
    raw = ChainComplex(R, degs, d, rel, check=False)
    P, Pm, Sm = raw.normalized()
    jm = tensor_maps(ChainMap.identity(Xp), j, XpY, XpYp).matrix
    im = tensor_maps(i, ChainMap.identity(Yp), XYp, XpYp).matrix
    to = R.matmul(np.hstack([jm, im]), Sm)
    f = ChainMap(P, XpYp, to)
    inj = all(f.module_map(n).is_injective() for n in P.degree_list())
    new, free = [], True
    for n in XpYp.degree_list():
        cok = f.module_map(n).cokernel() if len(P.idx(n)) else XpYp.piece(n)
        if cok.torsion:
            free = False
        new += [n] * cok.ncanon
    return PushoutProduct(f, inj, new, free)


def generator_maps(ring: CoeffRing, q: int, kind: str) -> ChainMap:
    """``S^q -> D^{q+1}`` (``"cof"``) or ``D^{q+1} -> D^{q+1} (x) I`` at ``<0>`` (``"acyclic"``)."""
    from .complex import disk, sphere

    if kind == "cof":
        S, D = sphere(ring, q), disk(ring, q + 1)
        m = ring.zeros((2, 1))
        m[1, 0] = ring.one()
        return ChainMap(S, D, m)
    if kind == "acyclic":
        D = disk(ring, q + 1)
        I = interval(ring)
        DI = tensor(D, I)
        m = ring.zeros((DI.ngens, D.ngens))
        for g in range(D.ngens):
            m[g * 3 + 1, g] = ring.one()
        return ChainMap(D, DI, m)
    raise ValueError("kind must be 'cof' or 'acyclic'")


@dataclass
class IntervalBasisChange:
    phi: ChainMap  # I -> D^1 + S^0
    phi_inv: ChainMap
    proj: ChainMap  # I -> D^1
    i0: ChainMap
    i1: ChainMap
    incl: ChainMap  # standard S^0 -> D^1


def interval_basis_change(ring: CoeffRing) -> IntervalBasisChange:
    """``I = D^1 + S^0`` after the degree-0 change of basis ``<0> = b + s``, ``<1> = s``."""
    from .complex import direct_sum, disk, sphere

    I = interval(ring)
    D1, S0 = disk(ring, 1), sphere(ring, 0)
    DS = direct_sum(D1, S0)  # t, b, s
    phi = ring.array([[1, 0, 0], [0, 1, 0], [0, 1, 1]])
    phi_inv = ring.array([[1, 0, 0], [0, 1, 0], [0, -1, 1]])
    f = ChainMap(I, DS, phi)
    g = ChainMap(DS, I, phi_inv)
    # projection onto S^0 followed by the inclusion S^0 -> D^1 (bottom)
    pr = ChainMap(DS, D1, ring.array([[0, 0, 0], [0, 0, 1]]))
    proj = pr @ f
    i0 = ChainMap(S0, I, ring.array([[0], [1], [0]]))
    i1 = ChainMap(S0, I, ring.array([[0], [0], [1]]))
    incl = ChainMap(S0, D1, ring.array([[0], [1]]))
    return IntervalBasisChange(f, g, proj, i0, i1, incl)


def deformation_retraction(ring: CoeffRing, n: int):
    """``r: D^n (x) I -> D^n`` with ``r i0 = id`` and a homotopy ``i0 r ~ id``."""
    from .complex import disk

    D = disk(ring, n)
    I = interval(ring)
    DI = tensor(D, I)
    eps = ChainMap(I, ChainComplex(ring, [0]), ring.array([[0, 1, 1]]))
    # D (x) S^0 is D itself
    r = ChainMap(DI, D, np.kron(ring.eye(D.ngens), eps.matrix))
    i0 = generator_maps(ring, n - 1, "acyclic")
    h = chain_homotopy_solve(i0 @ r, ChainMap.identity(DI))
    return r, i0, h
