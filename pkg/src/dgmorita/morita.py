"""Dual pairs, base change, tilting and the enrichment checks.

Frames follow the bicategory convention of :mod:`dgmorita.bicat`: a dual pair
is ``X: B -> A`` and ``Y: A -> B`` with ``eta: A -> X (.) Y`` and
``eps: Y (.) X -> B``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bicat import (
    Bimodule,
    TwoCell,
    associator,
    evaluation,
    forget_left,
    left_unitor,
    odot,
    odot_cells,
    rhom,
    right_adjunct,
    right_unadjunct,
    right_unitor,
    same_algebra,
    twocell_space,
    unit_cell,
)
from .complex import ChainMap, homology, is_quasi_iso, _sgn
from .dga import DGAlgebra, DGAlgebraMap, ValidationReport
from .derived import derived_tensor, end_dga, replace_if_needed
from .exactlin import FPModule, MapSystem, iso_test, kernel
from .model import Window, cell_map, free_on_complex

__all__ = [
    "DualPair",
    "DualPairReport",
    "check_dual_pair",
    "twocell_homotopy_solve",
    "coevaluation",
    "canonical_dual_coev",
    "canonical_dual_pair",
    "DualCoevResult",
    "dual_basis_retract",
    "RetractData",
    "BaseChange",
    "base_change_functors",
    "quillen_equiv_check",
    "QuillenReport",
    "EquivalenceVerdict",
    "tilting_pipeline",
    "odot_detect_check",
    "DetectReport",
    "enrichment_transform",
    "EnrichmentReport",
    "watts_consistency",
    "WattsReport",
    "standard_equivalence_report",
]

CERTIFIED = "CertifiedStandardEquivalence"
REFUTED = "RefutedOnWitness"
INCONCLUSIVE = "InconclusiveWindow"


def twocell_homotopy_solve(f: TwoCell, g: TwoCell):
    """A degree-1 bimodule map ``h`` with ``d h + h d = f - g``, or ``None``."""
    X, Y = f.source, f.target
    R = f.ring
    Ix, Iy = R.eye(X.n), R.eye(Y.n)
    ms = MapSystem(R, X.degrees, Y.degrees, 1)
    mod = Y.relations
    if X.relations.shape[1]:
        ms.add([(1, Iy, X.relations)], mod=mod)
    ms.add([(1, Y.d, Ix), (1, Iy, X.d)], rhs=R.sub(f.matrix, g.matrix), mod=mod)
    B, A = X.target, X.source
    for b in range(B.dim):
        ms.add([(1, Iy, X.left[b]), (-_sgn(int(B.degrees[b])), Y.left[b], Ix)], mod=mod)
    for a in range(A.dim):
        ms.add([(1, Iy, X.right[a]), (-1, Y.right[a], Ix)], mod=mod)
    h = ms.solve()
    return None if h is None else TwoCell(X, Y, h, 1, check=False)


# -- dual pairs -------------------------------------------------------------


@dataclass
class DualPair:
    X: Bimodule  # B -> A
    Y: Bimodule  # A -> B
    eta: TwoCell  # unit of A -> X (.) Y
    eps: TwoCell  # Y (.) X -> unit of B


@dataclass
class DualPairReport:
    ok: bool
    mode: str
    failures: list = field(default_factory=list)
    eta_iso: bool | None = None
    eps_iso: bool | None = None

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {
            "ok": self.ok,
            "mode": self.mode,
            "failures": [list(f) for f in self.failures],
            "eta_iso": self.eta_iso,
            "eps_iso": self.eps_iso,
        }


def _check_frames(P: DualPair):
    X, Y = P.X, P.Y
    if not (same_algebra(X.source, Y.target) and same_algebra(X.target, Y.source)):
        raise ValueError("frame mismatch: X and Y do not point in opposite directions")
    od1, od2 = P.eta.target.odot_data, P.eps.source.odot_data
    if od1 is None or od1.left is not X or od1.right is not Y:
        raise ValueError("frame mismatch: eta must land in X (.) Y")
    if od2 is None or od2.left is not Y or od2.right is not X:
        raise ValueError("frame mismatch: eps must start at Y (.) X")
    if P.eta.source.n != X.target.dim or P.eps.target.n != X.source.dim:
        raise ValueError("frame mismatch: eta/eps must involve unit 1-cells")


def triangle_composites(P: DualPair):
    """Both triangle composites ``X -> X`` and ``Y -> Y``."""
    X, Y, eta, eps = P.X, P.Y, P.eta, P.eps
    XY, YX = eta.target, eps.source
    UA, UB = eta.source, eps.target
    # X -> UA X -> (XY) X -> X (YX) -> X UB -> X
    UA_X, XY_X, X_YX, X_UB = odot(UA, X), odot(XY, X), odot(X, YX), odot(X, UB)
    lam = left_unitor(X, UA_X).inverse()
    e1 = odot_cells(eta, TwoCell.identity(X), UA_X, XY_X)
    a1 = associator(X, Y, X, XY, YX, XY_X, X_YX)
    e2 = odot_cells(TwoCell.identity(X), eps, X_YX, X_UB)
    rho = right_unitor(X, X_UB)
    tX = rho @ e2 @ a1 @ e1 @ lam
    # Y -> Y UA -> Y (XY) -> (YX) Y -> UB Y -> Y
    Y_UA, Y_XY, YX_Y, UB_Y = odot(Y, UA), odot(Y, XY), odot(YX, Y), odot(UB, Y)
    rho2 = right_unitor(Y, Y_UA).inverse()
    f1 = odot_cells(TwoCell.identity(Y), eta, Y_UA, Y_XY)
    a2 = associator(Y, X, Y, YX, XY, YX_Y, Y_XY).inverse()
    f2 = odot_cells(eps, TwoCell.identity(Y), YX_Y, UB_Y)
    lam2 = left_unitor(Y, UB_Y)
    tY = lam2 @ f2 @ a2 @ f1 @ rho2
    return tX, tY


def check_dual_pair(P: DualPair, mode: str = "strict") -> DualPairReport:
    """Triangle identities, exactly or up to a bimodule homotopy."""
    mode = mode.lower()
    if mode not in ("strict", "homotopy"):
        raise ValueError("mode must be 'strict' or 'homotopy'")
    _check_frames(P)
    fails = []
    for name, c in (("eta", P.eta), ("eps", P.eps)):
        rep = c.validate()
        if not rep:
            fails.append((name, str(rep.first())))
    tX, tY = triangle_composites(P)
    for name, t in (("triangle X", tX), ("triangle Y", tY)):
        ident = TwoCell.identity(t.source)
        if t.equals(ident):
            continue
        if mode == "homotopy" and twocell_homotopy_solve(t, ident) is not None:
            continue
        fails.append((name, "composite is not the identity"))
    return DualPairReport(not fails, mode, fails, P.eta.is_iso(), P.eps.is_iso())


# -- coevaluation and dual bases ---------------------------------------------


def coevaluation(X: Bimodule, Y: Bimodule, XY: Bimodule | None = None, XX: Bimodule | None = None) -> TwoCell:
    """``nu: X (.) (X |> B) -> X |> X``, ``x (x) phi |-> (x' |-> x phi(x'))``."""
    XY = XY or odot(X, Y)
    XX = XX or rhom(X, X)
    R = X.ring
    hd = Y.hom_data
    ny = Y.n
    raw = R.zeros((XX.n, X.n * ny))
    phis = [hd.basis_map(j) for j in range(ny)]
    for i in range(X.n):
        rc = X.right[:, :, i].T  # column i of every right action, shape (n, B.dim)
        for j in range(ny):
            F = R.matmul(rc, phis[j])
            if R.is_zero_array(F):
                continue
            raw[:, i * ny + j] = XX.hom_data.map_to_element(F, int(X.degrees[i] + Y.degrees[j]))
    mat = R.matmul(raw, XY.odot_data.S)
    return TwoCell(XY, XX, XX.carrier.reduce(mat), check=False)


@dataclass
class DualCoevResult:
    Y: Bimodule
    nu: TwoCell
    iso: bool
    certificate: object
    status: str  # "dualizable", "not dualizable", "inconclusive window"
    Q: Bimodule = None

    def as_dict(self):
        return {"iso": self.iso, "status": self.status, "certificate": self.certificate.as_dict()}


def canonical_dual_coev(X: Bimodule, w: Window) -> DualCoevResult:
    """``Y = X |> B`` for a replacement of ``X: B -> A`` and its coevaluation."""
    Q, q, cert = replace_if_needed(X, w)
    Y = rhom(Q, unit_cell(Q.source))
    nu = coevaluation(Q, Y)
    iso = bool(is_quasi_iso(nu.chain_map))
    if not cert.full:
        status = "inconclusive window"
    else:
        status = "dualizable" if iso else "not dualizable"
    return DualCoevResult(Y, nu, iso, cert, status, Q)


def canonical_dual_pair(X: Bimodule) -> DualPair:
    """``Y = X |> B`` with evaluation as counit and ``nu^-1 o iota`` as unit.

    Needs the coevaluation ``nu`` to be an isomorphism on the nose.
    """
    UB = unit_cell(X.source)
    Y = rhom(X, UB)
    XY, XX = odot(X, Y), rhom(X, X)
    nu = coevaluation(X, Y, XY, XX)
    if not nu.is_iso():
        raise ValueError("not chain-level dualizable")
    iota = unit_into_end(X, XX)
    eta = nu.inverse() @ iota
    YX = odot(Y, X)
    eps = evaluation(X, UB, Y, YX)
    return DualPair(X, Y, eta, eps)


@dataclass
class RetractData:
    free: Bimodule  # finite free right module
    p: TwoCell  # free -> M
    section: TwoCell  # M -> free
    dual_basis: np.ndarray  # raw coordinates of sum m_i (x) phi_i
    method: str = "dual basis"

    def verify(self) -> bool:
        return (self.p @ self.section).equals(TwoCell.identity(self.p.target))


def dual_basis_retract(M: Bimodule) -> RetractData:
    """Exhibit a right module ``M: S -> k`` as a retract of a finite free one.

    The preimage of the identity under the coevaluation is a finite sum
    ``sum m_i (x) phi_i``; then ``p(e_i a) = m_i a`` and ``s(m) = sum e_i phi_i(m)``.
    The free module is ``M (x)_k S``, so ``s`` is a chain map only when the
    sum lifts to a cycle there.  Finite cell modules without such a lift are
    returned as their own retract (``method == "cell"``).
    """
    if M.target.dim != 1:
        raise ValueError("dual basis retract is implemented for right modules (target k)")
    if M.relations.shape[1]:
        raise ValueError("carrier is not free over the ground ring")
    R = M.ring
    S = M.source
    Y = rhom(M, unit_cell(S))
    MY, MM = odot(M, Y), rhom(M, M)
    nu = coevaluation(M, Y, MY, MM)
    if not nu.is_iso():
        raise ValueError("not chain-level dualizable")
    ident = MM.hom_data.map_to_element(R.eye(M.n), 0)
    omega = R.matmul(nu.inverse().matrix, ident)
    raw = R.matmul(MY.odot_data.S, omega)
    # adjust by balancing relations so the raw sum is a cycle
    P = MY.odot_data.P
    ny = Y.n
    Draw = R.add(np.kron(M.d, R.eye(ny)), np.kron(np.diag([_sgn(int(t)) for t in M.degrees]).astype(raw.dtype), Y.d))
    Draw = R.reduce(Draw)
    if not R.is_zero_array(R.matmul(Draw, raw)):
        from .exactlin import solve_linear

        K = kernel(P, R)
        r = solve_linear(R.matmul(Draw, K), R.neg(R.matmul(Draw, raw)), R)
        if r is None:
            if M.cell is not None:
                # a finite cell module is its own finite free retract
                ident = TwoCell.identity(M)
                return RetractData(M, ident, ident, raw, method="cell")
            raise ValueError("dual basis has no cycle lift")
        raw = R.add(raw, R.matmul(K, r))
    Om = raw.reshape(M.n, ny)
    F = free_on_complex(S, M.target, M.carrier)
    p = cell_map(F, M, R.eye(M.n))
    NA = S.dim
    phis = [Y.hom_data.basis_map(j) for j in range(ny)]  # NA x M.n each
    smat = R.zeros((F.n, M.n))
    for m in range(M.n):
        Phi = np.array([phis[j][:, m] for j in range(ny)]) if ny else R.zeros((0, NA))
        Phi = R.array(Phi.tolist(), shape=(ny, NA)) if ny else Phi
        W = R.matmul(Om, Phi)
        smat[:, m] = W.reshape(-1)
    s = TwoCell(M, F, smat, check=False)
    rep = s.validate()
    if not rep:
        raise RuntimeError(f"section is not a module map: {rep.first()}")
    return RetractData(F, p, s, raw)


# -- base change --------------------------------------------------------------


@dataclass
class BaseChange:
    f: DGAlgebraMap
    X: Bimodule  # _A B_B : B -> A
    Y: Bimodule  # _B B_A : A -> B
    pair: DualPair

    @property
    def source(self):
        return self.f.source

    @property
    def target(self):
        return self.f.target

    def extend(self, M: Bimodule) -> Bimodule:
        """``f_! M = M (.) X`` for ``M: A -> C``."""
        return odot(M, self.X)

    def restrict(self, N: Bimodule) -> Bimodule:
        """``f^* N = N (.) Y`` for ``N: B -> C``."""
        return odot(N, self.Y)

    def restrict_hom(self, N: Bimodule) -> Bimodule:
        """``f^* N`` presented as ``X |> N``."""
        return rhom(self.X, N)

    def coextend(self, N: Bimodule) -> Bimodule:
        """``f_* N = Y |> N`` for ``N: A -> C``."""
        return rhom(self.Y, N)

    def extend_cell(self, g: TwoCell) -> TwoCell:
        return odot_cells(g, TwoCell.identity(self.X))

    def restrict_cell(self, g: TwoCell) -> TwoCell:
        return odot_cells(g, TwoCell.identity(self.Y))

    def reflects_quasi_iso(self, g: TwoCell) -> tuple[bool, bool]:
        """Whether ``g`` and ``f^* g`` are quasi-isomorphisms; restriction creates them when these agree."""
        return bool(is_quasi_iso(g.chain_map)), bool(is_quasi_iso(self.restrict_cell(g).chain_map))

    def restriction_comparison(self, N: Bimodule, NY=None, XN=None) -> TwoCell:
        """``N (.) Y -> X |> N``, ``n (x) b |-> (x |-> n (b x))``."""
        NY = NY or self.restrict(N)
        XN = XN or self.restrict_hom(N)
        R = N.ring
        B = self.target
        nb = B.dim
        raw = R.zeros((XN.n, N.n * nb))
        for i in range(N.n):
            ncol = N.right[:, :, i].T
            for b in range(nb):
                F = R.matmul(ncol, B.mult[b].T)
                if R.is_zero_array(F):
                    continue
                raw[:, i * nb + b] = XN.hom_data.map_to_element(F, int(N.degrees[i] + B.degrees[b]))
        return TwoCell(NY, XN, XN.carrier.reduce(R.matmul(raw, NY.odot_data.S)), check=False)

    def unit_map(self, M: Bimodule, fM=None, ffM=None) -> ChainMap:
        """``M -> f^* f_! M``, ``m |-> m (x) 1 (x) 1`` (as a chain map)."""
        fM = fM or self.extend(M)
        ffM = ffM or odot(fM, self.Y)
        R = M.ring
        one = self.target.unit
        cols = []
        for i in range(M.n):
            e = R.zeros((M.n,))
            e[i] = R.one()
            cols.append(ffM.odot_data.element(fM.odot_data.element(e, one), one))
        mat = np.column_stack(cols) if cols else R.zeros((ffM.n, 0))
        return ChainMap(M.carrier, ffM.carrier, ffM.carrier.reduce(mat), check=False)

    def counit_map(self, N: Bimodule, w: Window):
        """``f_! Q(f^* N) -> N`` for a semifree replacement ``Q`` of ``f^* N``."""
        R = N.ring
        nb = self.target.dim
        fN = self.restrict(N)
        Q, q, cert = replace_if_needed(fN, w)
        FQ = self.extend(Q)
        raw_eps = N.right.transpose(1, 2, 0).reshape(N.n, N.n * nb)
        epsN = R.matmul(raw_eps, fN.odot_data.S)
        G = R.matmul(epsN, q.matrix)
        raw = R.zeros((N.n, Q.n * nb))
        for i in range(Q.n):
            for b in range(nb):
                raw[:, i * nb + b] = R.matmul(N.right[b], G[:, i])
        mat = R.matmul(raw, FQ.odot_data.S)
        return ChainMap(FQ.carrier, N.carrier, N.carrier.reduce(mat), check=False), cert


def base_change_functors(f: DGAlgebraMap) -> BaseChange:
    """The cells ``_A B_B`` and ``_B B_A`` of an algebra map with their dual pair."""
    A, B = f.source, f.target
    R = A.ring
    fa = [f.matrix[:, a] for a in range(A.dim)]
    X = Bimodule(B, A, B.complex, np.array([B.left_matrix(v) for v in fa]), B.R, check=False, name="_A B_B")
    Y = Bimodule(A, B, B.complex, B.L, np.array([B.right_matrix(v) for v in fa]), check=False, name="_B B_A")
    UA, UB = unit_cell(A), unit_cell(B)
    XY, YX = odot(X, Y), odot(Y, X)
    eta_cols = [XY.odot_data.element(v, B.unit) for v in fa]
    eta = TwoCell(UA, XY, np.column_stack(eta_cols) if eta_cols else R.zeros((XY.n, 0)), check=False)
    N = B.dim
    raw = B.mult.reshape(N * N, N).T
    eps = TwoCell(YX, UB, UB.carrier.reduce(R.matmul(raw, YX.odot_data.S)), check=False)
    return BaseChange(f, X, Y, DualPair(X, Y, eta, eps))


@dataclass
class QuillenReport:
    precondition: bool
    units: list  # (label, ok, failing degrees)
    counits: list  # (label, ok, failing degrees, certificate)

    @property
    def ok(self) -> bool:
        return all(u[1] for u in self.units) and all(c[1] for c in self.counits)

    def as_dict(self):
        return {
            "precondition": self.precondition,
            "units": [{"sample": u[0], "ok": u[1], "failing_degrees": u[2]} for u in self.units],
            "counits": [
                {"sample": c[0], "ok": c[1], "failing_degrees": c[2], "certificate": c[3].as_dict()}
                for c in self.counits
            ],
            "ok": self.ok,
        }


def quillen_equiv_check(f: DGAlgebraMap, samples_A, samples_B, w: Window) -> QuillenReport:
    """Unit ``M -> f^* f_! M`` on replaced samples over ``A`` and counit on samples over ``B``."""
    bc = base_change_functors(f)
    pre = bool(is_quasi_iso(f.chain_map))
    units, counits = [], []
    for k, M in enumerate(samples_A):
        Qm, _, _ = replace_if_needed(M, w)
        res = is_quasi_iso(bc.unit_map(Qm))
        units.append((M.name or f"A{k}", bool(res), res.failing_degrees))
    for k, N in enumerate(samples_B):
        cm, cert = bc.counit_map(N, w)
        res = is_quasi_iso(cm)
        counits.append((N.name or f"B{k}", bool(res), res.failing_degrees, cert))
    return QuillenReport(pre, units, counits)


# -- tilting ----------------------------------------------------------------


@dataclass
class EquivalenceVerdict:
    status: str
    witnesses: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    E: DGAlgebra | None = None
    data: dict = field(default_factory=dict, repr=False)

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def as_dict(self):
        return {"status": self.status, "witnesses": self.witnesses, "certificates": self.certificates}


def _cokernel_witness(f: ChainMap, n: int, names) -> list:
    """Basis names occurring in representatives of ``coker H_n(f)``."""
    R = f.ring
    HY = homology(f.target)
    Hn = HY.module(n)
    mods = [d for d in Hn.moduli if d != 0]
    rel = R.zeros((Hn.ncanon, len(mods)))
    c = 0
    for i, d in enumerate(Hn.moduli):
        if d != 0:
            rel[i, c] = d
            c += 1
    cok = FPModule(R, Hn.ncanon, np.hstack([f.induced(n), rel]))
    if not cok.ncanon:
        return []
    reps = R.matmul(HY.reps(n), cok.sect)
    out = []
    for col in range(reps.shape[1]):
        nz = np.nonzero(reps[:, col] != 0)[0]
        out.append([names[i] for i in nz])
    return out


def tilting_pipeline(S: DGAlgebra, T: Bimodule, w: Window) -> EquivalenceVerdict:
    """Decide whether ``- (.) T~`` is a standard equivalence via unit and counit checks.

    ``E = End(T)``; ``T~: S -> E``; the unit is the coevaluation of ``T~``
    and the counit is evaluation ``(T~ |> S) (.)^L T~ -> S``.
    """
    if T.target.dim != 1:
        T = forget_left(T)
    if not same_algebra(T.source, S):
        raise ValueError("frame mismatch: T must be a right S-module")
    R = S.ring
    er = end_dga(T, w)
    E, Q = er.algebra, er.Q
    hd = er.hom.hom_data
    left = np.array([hd.basis_map(e) for e in range(E.dim)])
    Tt = Bimodule(S, E, Q.carrier, left, Q.right, check=True, name="T~")
    US, UE = unit_cell(S), unit_cell(E)
    D = rhom(Tt, US)
    TD, TT = odot(Tt, D), rhom(Tt, Tt)
    nu = coevaluation(Tt, D, TD, TT)
    ucols = [TT.hom_data.map_to_element(left[e], int(E.degrees[e])) for e in range(E.dim)]
    iota = TwoCell(UE, TT, np.column_stack(ucols) if ucols else R.zeros((TT.n, 0)), check=False)
    nu_ok = bool(is_quasi_iso(nu.chain_map))
    iota_ok = bool(is_quasi_iso(iota.chain_map))
    DT = odot(D, Tt)
    ev = evaluation(Tt, US, D, DT)
    Qd, qd, certd = replace_if_needed(forget_left(D), w)
    QdT = odot(Qd, Tt)
    mat = R.mul(ev.matrix, DT.odot_data.P, np.kron(qd.matrix, R.eye(Tt.n)), QdT.odot_data.S)
    counit = ChainMap(QdT.carrier, US.carrier, US.carrier.reduce(mat), check=False)
    cres = is_quasi_iso(counit)
    certs = {"end": er.certificate.as_dict(), "counit": certd.as_dict()}
    wit = {}
    if not (nu_ok and iota_ok):
        wit["unit"] = {"coevaluation_quasi_iso": nu_ok, "action_quasi_iso": iota_ok}
    if not cres:
        bad = cres.failing_degrees
        wit["counit"] = {"failing_degrees": bad}
        miss = {}
        for n in homology(US.carrier).nonzero_degrees():
            names = _cokernel_witness(counit, n, S.names)
            if names:
                miss[n] = names
        if miss:
            wit["counit"]["missing"] = {str(k): v for k, v in miss.items()}
    decided = er.certificate.full and certd.full
    if nu_ok and iota_ok and cres:
        status = CERTIFIED if decided else INCONCLUSIVE
    else:
        status = REFUTED if decided else INCONCLUSIVE
    data = {"Tt": Tt, "D": D, "nu": nu, "iota": iota, "counit": counit, "end": er}
    return EquivalenceVerdict(status, wit, certs, E, data)


def round_trip_check(v: EquivalenceVerdict, M: Bimodule) -> bool:
    """``M -> (M (.) T~) (.) (T~ |> S)`` is a quasi-isomorphism for a right ``E``-module ``M``."""
    if not v.certified:
        raise ValueError("round trips are only meaningful for certified verdicts")
    Tt, D, nu, iota = v.data["Tt"], v.data["D"], v.data["nu"], v.data["iota"]
    eta = nu.inverse() @ iota
    UE = eta.source
    MU = odot(M, UE)
    rho = right_unitor(M, MU).inverse()
    TD = eta.target
    M_TD = odot(M, TD)
    step = odot_cells(TwoCell.identity(M), eta, MU, M_TD)
    MT = odot(M, Tt)
    MT_D = odot(MT, D)
    a = associator(M, Tt, D, MT, TD, MT_D, M_TD).inverse()
    return bool(is_quasi_iso((a @ step @ rho).chain_map))


# -- detection -----------------------------------------------------------------


@dataclass
class DetectReport:
    vanishing: bool
    per_member: list  # (label, certified homology, valid range)

    def __bool__(self):
        return self.vanishing

    def as_dict(self):
        return {
            "all_vanish": self.vanishing,
            "members": [{"member": a, "homology": {str(k): list(map(_plain, v)) for k, v in b.items()}, "valid": list(c)} for a, b, c in self.per_member],
        }


def _plain(x):
    return list(x) if isinstance(x, tuple) else x


def odot_detect_check(family, Z: Bimodule, w: Window) -> DetectReport:
    """True iff ``W (.)^L Z`` has vanishing certified homology for every ``W``."""
    if isinstance(family, Bimodule):
        family = [family]
    per = []
    ok = True
    for k, W in enumerate(family):
        dv = derived_tensor(W, Z, w)
        h = dv.certified_homology()
        per.append((W.name or f"W{k}", h, dv.valid))
        if h:
            ok = False
    return DetectReport(ok, per)


# -- enrichment -----------------------------------------------------------------


def structure_cell(K: Bimodule, X: Bimodule, Q: Bimodule, K_XQ=None, KX_Q=None, XQ=None, KX=None) -> TwoCell:
    """``K (.) F(X) -> F(K (.) X)`` for ``F = - (.) Q`` (the inverse associator)."""
    XQ = XQ or odot(X, Q)
    KX = KX or odot(K, X)
    return associator(K, X, Q, KX, XQ, KX_Q or odot(KX, Q), K_XQ or odot(K, XQ)).inverse()


def enrichment_from_structure(T, U, Q, sigma_fn, K=None, FT=None, FU=None) -> TwoCell:
    """``T |> U -> F T |> F U``: adjoint of ``F(ev) o sigma: (T |> U) (.) F T -> F U``."""
    K = K or rhom(T, U)
    FT = FT or odot(T, Q)
    FU = FU or odot(U, Q)
    KT = odot(K, T)
    ev = evaluation(T, U, K, KT)
    KT_Q = odot(KT, Q)
    Fev = odot_cells(ev, TwoCell.identity(Q), KT_Q, FU)
    K_FT = odot(K, FT)
    sigma = sigma_fn(K, T, Q, K_FT, KT_Q, FT, KT)
    return right_adjunct(Fev @ sigma, rhom(FT, FU))


def structure_from_enrichment(K, X, Q, en_fn) -> TwoCell:
    """``K (.) F X -> F(K (.) X)`` recovered from the enrichment ``X |> (K (.) X) -> F X |> F(K (.) X)``."""
    KX = odot(K, X)
    H = rhom(X, KX)
    c = right_adjunct(TwoCell.identity(KX), H)
    en = en_fn(X, KX, H)
    FX = odot(X, Q)
    return right_unadjunct(en @ c, odot(K, FX))


def enrichment_direct(T, U, Q, K=None, FT=None, FU=None, H=None) -> TwoCell:
    """``phi |-> phi (x) id_Q`` written out on hom bases."""
    K = K or rhom(T, U)
    FT = FT or odot(T, Q)
    FU = FU or odot(U, Q)
    H = H or rhom(FT, FU)
    R = T.ring
    cols = []
    for g in range(K.n):
        F = K.hom_data.basis_map(g)
        G = R.mul(FU.odot_data.P, np.kron(F, R.eye(Q.n)), FT.odot_data.S)
        cols.append(H.hom_data.map_to_element(G, int(K.degrees[g])))
    mat = np.column_stack(cols) if cols else R.zeros((H.n, 0))
    return TwoCell(K, H, H.carrier.reduce(mat), check=False)


def composition_cell(T, U, V, KUV=None, KTU=None, KTV=None, src=None) -> TwoCell:
    """``(U |> V) (.) (T |> U) -> T |> V``, ``psi (x) phi |-> psi o phi``."""
    KUV = KUV or rhom(U, V)
    KTU = KTU or rhom(T, U)
    KTV = KTV or rhom(T, V)
    src = src or odot(KUV, KTU)
    R = T.ring
    n2 = KTU.n
    raw = R.zeros((KTV.n, KUV.n * n2))
    psis = [KUV.hom_data.basis_map(i) for i in range(KUV.n)]
    phis = [KTU.hom_data.basis_map(j) for j in range(n2)]
    for i in range(KUV.n):
        for j in range(n2):
            F = R.matmul(psis[i], phis[j])
            if R.is_zero_array(F):
                continue
            raw[:, i * n2 + j] = KTV.hom_data.map_to_element(F, int(KUV.degrees[i] + KTU.degrees[j]))
    return TwoCell(src, KTV, KTV.carrier.reduce(R.matmul(raw, src.odot_data.S)), check=False)


def unit_into_end(T: Bimodule, TT=None) -> TwoCell:
    """``C -> T |> T``, ``c |-> (t |-> c t)`` for ``T: A -> C``."""
    TT = TT or rhom(T, T)
    R = T.ring
    C = T.target
    cols = [TT.hom_data.map_to_element(T.left[c], int(C.degrees[c])) for c in range(C.dim)]
    UC = unit_cell(C)
    return TwoCell(UC, TT, np.column_stack(cols) if cols else R.zeros((TT.n, 0)), check=False)


@dataclass
class EnrichmentReport:
    square: bool
    unit: bool
    explicit: bool
    round_trip: bool
    witnesses: list = field(default_factory=list)

    @property
    def ok(self):
        return self.square and self.unit and self.explicit and self.round_trip

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {
            "square": self.square,
            "unit": self.unit,
            "explicit_formula": self.explicit,
            "round_trip": self.round_trip,
            "witnesses": self.witnesses,
        }


def _sigma_default(K, X, Q, K_FX, KX_Q, FX, KX):
    return structure_cell(K, X, Q, K_FX, KX_Q, FX, KX)


def enrichment_transform(Q: Bimodule, T: Bimodule, U: Bimodule, V: Bimodule, perturb: str | None = None) -> EnrichmentReport:
    """Enrichment of ``F = - (.) Q`` on ``T, U, V`` with its composition square and unit triangle.

    ``perturb="sign"`` negates the enrichment map ``T |> V -> F T |> F V``
    and ``perturb="zero"`` replaces it by zero, to show that the square
    check has teeth (negation is invisible in characteristic 2).
    """
    for M in (T, U, V):
        if not same_algebra(M.source, Q.target):
            raise ValueError("frame mismatch: samples must start where Q ends")
    R = Q.ring
    FT, FU, FV = odot(T, Q), odot(U, Q), odot(V, Q)
    KTU, KUV, KTV, KTT = rhom(T, U), rhom(U, V), rhom(T, V), rhom(T, T)
    HTU, HUV, HTV, HTT = rhom(FT, FU), rhom(FU, FV), rhom(FT, FV), rhom(FT, FT)

    def en(X, Y, K, FX, FY):
        return enrichment_from_structure(X, Y, Q, _sigma_default, K, FX, FY)

    eTU, eUV, eTV, eTT = en(T, U, KTU, FT, FU), en(U, V, KUV, FU, FV), en(T, V, KTV, FT, FV), en(T, T, KTT, FT, FT)
    wit = []
    explicit = all(
        e.equals(enrichment_direct(X, Y, Q, K, FX, FY, H))
        for e, X, Y, K, FX, FY, H in (
            (eTU, T, U, KTU, FT, FU, HTU),
            (eUV, U, V, KUV, FU, FV, HUV),
            (eTV, T, V, KTV, FT, FV, HTV),
        )
    )
    if not explicit:
        wit.append("adjoint formula differs from phi (x) id")
    if perturb == "sign":
        eTV = eTV.scaled(-1)
    elif perturb == "zero":
        eTV = eTV.scaled(0)
    elif perturb is not None:
        raise ValueError("unknown perturbation")
    src = odot(KUV, KTU)
    comp = composition_cell(T, U, V, KUV, KTU, KTV, src)
    compF = composition_cell(FT, FU, FV, HUV, HTU, HTV)
    lhs = eTV @ comp
    rhs = compF @ odot_cells(eUV, eTU, src, compF.source)
    square = lhs.equals(rhs)
    if not square:
        diff = R.sub(lhs.matrix, rhs.matrix)
        cols = [int(c) for c in np.nonzero(np.any(diff != 0, axis=0))[0]]
        wit.append({"square": "composition", "columns": cols[:5]})
    iT = unit_into_end(T, KTT)
    iFT = unit_into_end(FT, HTT)
    unit = (eTT @ iT).equals(iFT)
    if not unit:
        wit.append({"triangle": "unit"})
    # structure -> enrichment -> structure on (K, X) = (T |> U, T)
    K = KTU
    sig = structure_cell(K, T, Q)
    back = structure_from_enrichment(K, T, Q, lambda X, KX, H: enrichment_from_structure(X, KX, Q, _sigma_default, H))
    rt1 = back.equals(sig)
    # enrichment -> structure -> enrichment on (T, U)
    def sigma_from_en(K_, X_, Q_, K_FX, KX_Q, FX, KX):
        return structure_from_enrichment(K_, X_, Q_, lambda X, KX2, H: enrichment_direct(X, KX2, Q_, K=H))

    eTU2 = enrichment_from_structure(T, U, Q, sigma_from_en, KTU, FT, FU)
    rt2 = eTU2.matrix.shape == eTU.matrix.shape and R.is_zero_array(R.sub(eTU2.matrix, eTU.matrix))
    if not (rt1 and rt2):
        wit.append({"round_trip": [rt1, rt2]})
    return EnrichmentReport(square, unit, explicit, rt1 and rt2, wit)


# -- Watts-type consistency ---------------------------------------------------------


@dataclass
class WattsReport:
    consistent: bool
    samples: list  # dicts

    def __bool__(self):
        return self.consistent

    def as_dict(self):
        return {"consistent": self.consistent, "samples": self.samples}


def _find_quasi_iso(X: Bimodule, Y: Bimodule, rng, tries=6):
    if not X.ring.is_field:
        return None
    basis = twocell_space(X, Y, 0)
    if not basis:
        return None
    R = X.ring
    for _ in range(tries):
        coeffs = R.random_array(rng, (len(basis),), bound=max(2, (R.p or 5)))
        m = R.zeros((Y.n, X.n))
        for c, b in zip(coeffs, basis):
            m = R.add(m, R.scale(c, b.matrix))
        cand = TwoCell(X, Y, m, check=False)
        if is_quasi_iso(cand.chain_map):
            return cand
    return None


def watts_consistency(samples, Q: Bimodule, w: Window, seed: int = 0) -> WattsReport:
    """Compare each ``f(M)`` with ``M (.)^L Q`` on homology, looking for a witnessing quasi-isomorphism."""
    rng = np.random.default_rng(seed)
    out = []
    ok = True
    for k, (M, fM) in enumerate(samples):
        dv = derived_tensor(M, Q, w)
        H1 = homology(fM.carrier)
        H2 = dv.homology()
        degs = sorted(set(H1.nonzero_degrees()) | set(H2.nonzero_degrees()))
        bad = [n for n in degs if dv.covers(n) and not iso_test(H1.module(n), H2.module(n))]
        witness = None
        if not bad:
            cand = _find_quasi_iso(fM, dv.result, rng)
            witness = cand is not None
        rec = {"sample": M.name or f"M{k}", "consistent": not bad, "mismatch_degrees": bad, "witness_map": witness}
        if bad:
            ok = False
        out.append(rec)
    return WattsReport(ok, out)


def standard_equivalence_report(Q: Bimodule, frames, samples, w: Window) -> dict:
    """Enrichment squares on ``frames`` plus Watts consistency on ``samples``, reported together."""
    en = [enrichment_transform(Q, *fr) for fr in frames]
    wt = watts_consistency(samples, Q, w)
    return {
        "enrichment": [e.as_dict() for e in en],
        "watts": wt.as_dict(),
        "ok": all(e.ok for e in en) and wt.consistent,
    }
