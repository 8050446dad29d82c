"""DG algebras given by multiplication tables on a homogeneous basis.

``mult[i, j, k]`` is the coefficient of ``e_k`` in ``e_i e_j`` and
``d[:, j]`` is ``d(e_j)``.  Leibniz: ``d(ab) = (da)b + (-1)^|a| a(db)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .complex import ChainComplex, ChainMap, homology, is_quasi_iso, sign_diag
from .exactlin import Coordinatizer, kernel
from .rings import CoeffRing, GF

__all__ = [
    "DGAlgebra",
    "DGAlgebraMap",
    "ValidationReport",
    "validate_dga",
    "opposite",
    "tensor_dga",
    "enveloping",
    "ring_as_dga",
    "ground",
    "homology_dga",
    "truncate_plus",
    "TruncationResult",
    "matrix_algebra",
    "product_algebra",
    "dugger_shipley",
    "truncated_polynomial",
]


@dataclass
class ValidationReport:
    ok: bool
    failures: list = field(default_factory=list)  # (axiom, basis tuple)

    def __bool__(self):
        return self.ok

    def first(self):
        return self.failures[0] if self.failures else None


class DGAlgebra:
    """A DG algebra with free graded pieces."""

    def __init__(self, ring: CoeffRing, degrees, mult, d=None, unit=None, names=None, check=True):
        self.ring = ring
        self.degrees = np.asarray(list(degrees), dtype=np.int64).reshape(-1)
        N = len(self.degrees)
        mult = np.asarray(mult)
        if mult.dtype != ring.dtype:
            mult = ring.array(mult.tolist(), shape=(N, N, N))
        self.mult = ring.reduce(mult.reshape(N, N, N))
        if d is None:
            d = ring.zeros((N, N))
        elif d.dtype != ring.dtype:
            d = ring.array(d.tolist(), shape=(N, N))
        self.d = ring.reduce(d)
        if unit is None:
            unit = _find_unit(ring, self.mult)
            if unit is None:
                raise ValueError("multiplication table has no unit")
        elif not isinstance(unit, np.ndarray) or unit.dtype != ring.dtype:
            unit = ring.array(list(unit))
        self.unit = ring.reduce(unit)
        self.names = list(names) if names is not None else [f"e{i}" for i in range(N)]
        if check:
            rep = validate_dga(self)
            if not rep:
                raise ValueError(f"invalid DG algebra: {rep.first()}")

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @cached_property
    def complex(self) -> ChainComplex:
        return ChainComplex(self.ring, self.degrees, self.d, check=False)

    @cached_property
    def L(self) -> np.ndarray:
        """``L[i]`` is left multiplication by ``e_i``."""
        return np.ascontiguousarray(self.mult.transpose(0, 2, 1))

    @cached_property
    def R(self) -> np.ndarray:
        """``R[j]`` is right multiplication by ``e_j``."""
        return np.ascontiguousarray(self.mult.transpose(1, 2, 0))

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        return self.ring.reduce(np.tensordot(x, self.L, axes=([0], [0])))

    def right_matrix(self, x: np.ndarray) -> np.ndarray:
        return self.ring.reduce(np.tensordot(x, self.R, axes=([0], [0])))

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.ring.matmul(self.left_matrix(x), y)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.ring.zeros((self.dim,))
        v[i] = self.ring.one()
        return v

    def element(self, name: str) -> np.ndarray:
        return self.basis_vector(self.names.index(name))

    def is_degree_zero(self) -> bool:
        return bool(np.all(self.degrees == 0))

    def has_positive_degrees(self) -> bool:
        return bool(np.any(self.degrees != 0))

    def __repr__(self):
        return f"DGAlgebra({self.ring}, dim={self.dim}, degrees={sorted(set(self.degrees.tolist()))})"


def _find_unit(ring, mult):
    N = mult.shape[0]
    if N == 0:
        return None
    # sum_i u_i mult[i, j, :] = e_j and sum_i u_i mult[j, i, :] = e_j
    A = np.vstack([mult.transpose(1, 2, 0).reshape(N * N, N), mult.transpose(0, 2, 1).reshape(N * N, N)])
    rhs = np.concatenate([ring.eye(N).reshape(-1), ring.eye(N).reshape(-1)])
    from .exactlin import solve_linear

    return solve_linear(ring.reduce(A), ring.reduce(rhs), ring)


def _first_nonzero(arr):
    idx = np.argwhere(arr != 0)
    return tuple(int(v) for v in idx[0][:-1]) if len(idx) else None


def _assoc_failure(R, m):
    N = m.shape[0]
    if R.dtype is not object:
        lhs = R.reduce(np.tensordot(m, m, axes=([2], [0])))  # (i,j,k,out)
        rhs = R.reduce(np.tensordot(m, m, axes=([2], [1]))).transpose(2, 0, 1, 3)
        diff = R.sub(lhs, rhs)
        return None if R.is_zero_array(diff) else _first_nonzero(diff)
    # object entries are slow in dense contractions; structure constants are sparse
    prod = {}
    for i, j, t in zip(*np.nonzero(m != 0)):
        prod.setdefault((int(i), int(j)), {})[int(t)] = m[i, j, t]

    def times(vec, k, left):
        out = {}
        for t, c in vec.items():
            for u, c2 in prod.get((t, k) if left else (k, t), {}).items():
                out[u] = out.get(u, 0) + c * c2
        return {u: c for u, c in out.items() if c != 0}

    for i in range(N):
        for j in range(N):
            ij = prod.get((i, j), {})
            for k in range(N):
                lhs = times(ij, k, True)
                rhs = times(prod.get((j, k), {}), i, False)
                if lhs != rhs:
                    return (i, j, k)
    return None


def validate_dga(A: DGAlgebra) -> ValidationReport:
    """Check grading, unit, associativity, Leibniz and ``d^2 = 0``."""
    R, m, d, deg = A.ring, A.mult, A.d, A.degrees
    fails = []
    N = A.dim
    if N == 0:
        return ValidationReport(False, [("nonzero", ())])
    i, j, k = np.nonzero(m != 0)
    bad = np.nonzero(deg[i] + deg[j] != deg[k])[0]
    if len(bad):
        fails.append(("grading", (int(i[bad[0]]), int(j[bad[0]]))))
    r, c = np.nonzero(d != 0)
    bad = np.nonzero(deg[r] != deg[c] - 1)[0]
    if len(bad):
        fails.append(("differential degree", (int(c[bad[0]]),)))
    if np.any(A.unit[deg != 0] != 0):
        fails.append(("unit degree", ()))
    uL = R.reduce(np.tensordot(A.unit, m, axes=([0], [0])))  # (j, out)
    uR = R.reduce(np.tensordot(A.unit, m, axes=([0], [1])))
    eye = R.eye(N)
    if not R.equal(uL, eye) or not R.equal(uR, eye):
        bad = _first_nonzero(np.concatenate([R.sub(uL, eye), R.sub(uR, eye)], axis=0)[:, :, None])
        fails.append(("unit", bad))
    bad = _assoc_failure(R, m)
    if bad is not None:
        fails.append(("associativity", bad))
    dd = R.matmul(d, d)
    if not R.is_zero_array(dd):
        fails.append(("d^2", (int(np.argwhere(dd != 0)[0][1]),)))
    dab = R.reduce(np.tensordot(m, d, axes=([2], [1])))  # (i,j,out)
    dab_ = R.reduce(np.tensordot(d, m, axes=([0], [0])))  # (i,j,out)
    adb = R.reduce(np.tensordot(m, d, axes=([1], [0]))).transpose(0, 2, 1)
    sg = np.array([-1 if n % 2 else 1 for n in deg], dtype=object if R.dtype is object else np.int64)
    adb = R.reduce(adb * sg[:, None, None])
    diff = R.sub(dab, R.add(dab_, adb))
    if not R.is_zero_array(diff):
        fails.append(("Leibniz", _first_nonzero(diff)))
    return ValidationReport(not fails, fails)


def opposite(A: DGAlgebra) -> DGAlgebra:
    """``a° b° = (-1)^{|a||b|} (ba)°`` on the same basis."""
    R = A.ring
    deg = A.degrees
    sg = np.where((deg[:, None] * deg[None, :]) % 2 == 1, -1, 1)
    if R.dtype is object:
        sg = sg.astype(object)
    m = R.reduce(A.mult.transpose(1, 0, 2) * sg[:, :, None])
    return DGAlgebra(R, deg, m, A.d, A.unit, [_op_name(n) for n in A.names], check=False)


def _op_name(n: str) -> str:
    return n[:-1] if n.endswith("°") else n + "°"


def tensor_dga(A: DGAlgebra, C: DGAlgebra) -> DGAlgebra:
    """``A (x) C`` with ``(a (x) c)(a' (x) c') = (-1)^{|c||a'|} aa' (x) cc'``.

    Basis element ``(a, c)`` sits at index ``a * C.dim + c``.
    """
    if A.ring != C.ring:
        raise ValueError("algebras over different rings")
    R = A.ring
    Na, Nc = A.dim, C.dim
    big = np.multiply.outer(A.mult, C.mult)  # a a' a'' c c' c''
    big = big.transpose(0, 3, 1, 4, 2, 5).reshape(Na * Nc, Na * Nc, Na * Nc)
    sg = np.where((C.degrees[None, :, None] * A.degrees[None, None, :]) % 2 == 1, -1, 1)
    # sign depends on (c, a'): index [(a,c), (a',c')]
    s = np.ones((Na, Nc, Na, Nc), dtype=np.int64)
    s *= sg.reshape(1, Nc, Na, 1)
    s = s.reshape(Na * Nc, Na * Nc)
    if R.dtype is object:
        s = s.astype(object)
    mult = R.reduce(big * s[:, :, None])
    degs = (A.degrees[:, None] + C.degrees[None, :]).reshape(-1)
    d = R.add(np.kron(A.d, R.eye(Nc)), np.kron(sign_diag(R, A.degrees), C.d))
    unit = R.reduce(np.kron(A.unit, C.unit))
    names = [f"{a}⊗{c}" for a in A.names for c in C.names]
    return DGAlgebra(R, degs, mult, d, unit, names, check=False)


def enveloping(A: DGAlgebra, B: DGAlgebra) -> DGAlgebra:
    """``A (x) B^op``."""
    return tensor_dga(A, opposite(B))


def ring_as_dga(ring: CoeffRing, table, names=None, unit=None) -> DGAlgebra:
    """A finite-rank algebra concentrated in degree 0.

    ``table[i][j]`` is the coefficient vector of ``e_i e_j``.
    """
    m = ring.array(table)
    N = m.shape[0]
    A = DGAlgebra(ring, [0] * N, m, None, unit, names, check=False)
    rep = validate_dga(A)
    if not rep:
        raise ValueError(f"not an associative unital algebra: {rep.first()}")
    return A


def ground(ring: CoeffRing) -> DGAlgebra:
    """The ground ring ``k`` as a DGA."""
    return DGAlgebra(ring, [0], ring.array([[[1]]]), None, ring.array([1]), ["1"], check=False)


@dataclass
class DGAlgebraMap:
    """Unital multiplicative chain map ``f: A -> B`` (``matrix`` is ``B.dim x A.dim``)."""

    source: DGAlgebra
    target: DGAlgebra
    matrix: np.ndarray
    check: bool = True

    def __post_init__(self):
        R = self.source.ring
        if self.matrix.dtype != R.dtype:
            self.matrix = R.array(self.matrix.tolist(), shape=self.matrix.shape)
        if self.check:
            rep = self.validate()
            if not rep:
                raise ValueError(f"invalid algebra map: {rep.first()}")

    def validate(self) -> ValidationReport:
        R = self.source.ring
        A, B, f = self.source, self.target, self.matrix
        fails = []
        try:
            ChainMap(A.complex, B.complex, f)
        except ValueError as e:
            fails.append(("chain map", str(e)))
        if not R.equal(R.matmul(f, A.unit), B.unit):
            fails.append(("unital", ()))
        lhs = R.reduce(np.tensordot(A.mult, f, axes=([2], [1])))  # (i,j,out)
        fi = f.T  # (i, out)
        prod = R.reduce(np.tensordot(np.tensordot(fi, B.mult, axes=([1], [0])), fi, axes=([1], [1])))
        prod = prod.transpose(0, 2, 1)
        if not R.equal(lhs, prod):
            fails.append(("multiplicative", _first_nonzero(R.sub(lhs, prod))))
        return ValidationReport(not fails, fails)

    @property
    def chain_map(self) -> ChainMap:
        return ChainMap(self.source.complex, self.target.complex, self.matrix, check=False)

    def __matmul__(self, other):
        R = self.source.ring
        return DGAlgebraMap(other.source, self.target, R.matmul(self.matrix, other.matrix), check=False)

    @classmethod
    def identity(cls, A):
        return cls(A, A, A.ring.eye(A.dim), check=False)


def _single_prime_torsion(H, degrees):
    primes = set()
    for n in degrees:
        M = H.module(n)
        if M.free_rank:
            return None
        for t in M.torsion:
            primes.add(t)
    if len(primes) == 1:
        p = primes.pop()
        from .rings import is_prime

        return p if is_prime(p) else None
    return None


def homology_dga(A: DGAlgebra):
    """Homology algebra with zero differential.

    Returns ``(H, reps)`` where ``reps`` holds cycle representatives (columns
    on ``A``'s basis).  When every homology group is free the result lives
    over ``A.ring``; when all of it is ``p``-torsion with no free part the
    result is an algebra over ``F_p``.  Mixed cases raise ``ValueError``.
    """
    R = A.ring
    H = homology(A.complex)
    degs = H.nonzero_degrees()
    base = R
    if R.kind == "Z" and any(H.module(n).torsion for n in degs):
        p = _single_prime_torsion(H, degs)
        if p is None:
            raise ValueError("homology mixes torsion and free parts; no single base field")
        base = GF(p)
    reps, hdeg, pos = [], [], {}
    for n in degs:
        rp = H.reps(n)
        for c in range(rp.shape[1]):
            pos[(n, c)] = len(hdeg)
            reps.append(rp[:, c])
            hdeg.append(n)
    N = len(hdeg)
    if N == 0:
        raise ValueError("homology is zero")
    repm = np.column_stack(reps)
    mult = base.zeros((N, N, N))

    def coords(vec, n):
        out = base.zeros((N,))
        if n not in degs:
            return out
        cls_ = H.class_of(n, vec)
        for c, v in enumerate(cls_):
            out[pos[(n, c)]] = base.scalar(v)
        return out

    for i in range(N):
        for j in range(N):
            prod = A.product(repm[:, i], repm[:, j])
            mult[i, j, :] = coords(prod, hdeg[i] + hdeg[j])
    unit = coords(A.unit, 0)
    names = []
    for i in range(N):
        nz = np.nonzero(repm[:, i] != 0)[0]
        names.append(f"[{A.names[nz[0]]}]" if len(nz) == 1 else f"h{hdeg[i]}_{i}")
    Hd = DGAlgebra(base, hdeg, mult, None, unit, names, check=False)
    return Hd, repm


@dataclass
class TruncationResult:
    Eplus: DGAlgebra
    incl: DGAlgebraMap
    H0: DGAlgebra
    proj_chain: ChainMap  # E+ -> H0 viewed as a complex over E's ring
    proj: DGAlgebraMap | None  # as an algebra map when H0 lives over E's ring

    def legs_quasi_iso(self):
        return bool(is_quasi_iso(self.incl.chain_map)), bool(is_quasi_iso(self.proj_chain))


def truncate_plus(E: DGAlgebra) -> TruncationResult:
    """``E_+``: cycles in degree 0 plus all positive degrees, with both zig-zag legs."""
    R = E.ring
    deg = E.degrees
    i0 = np.nonzero(deg == 0)[0]
    ipos = np.nonzero(deg > 0)[0]
    im1 = np.nonzero(deg == -1)[0]
    D0 = E.d[np.ix_(im1, i0)]
    Z0 = kernel(D0, R) if len(im1) else R.eye(len(i0))
    cols = []
    for c in range(Z0.shape[1]):
        v = R.zeros((E.dim,))
        v[i0] = Z0[:, c]
        cols.append(v)
    for i in ipos:
        cols.append(E.basis_vector(int(i)))
    incl = np.column_stack(cols)
    Np = incl.shape[1]
    pdeg = [0] * Z0.shape[1] + [int(deg[i]) for i in ipos]
    co = Coordinatizer(incl, R)
    prods = []
    for a in range(Np):
        for b in range(Np):
            prods.append(E.product(incl[:, a], incl[:, b]))
    mult = co.solve(np.column_stack(prods)).T.reshape(Np, Np, Np)
    dplus = co.solve(R.matmul(E.d, incl))
    unit = co.solve(E.unit)
    names = []
    for c in range(Np):
        nz = np.nonzero(incl[:, c] != 0)[0]
        names.append(E.names[nz[0]] if len(nz) == 1 else f"z{c}")
    Ep = DGAlgebra(R, pdeg, mult, dplus, unit, names, check=False)
    inc = DGAlgebraMap(Ep, E, incl, check=False)

    # H_0 of E_+ (same as H_0(E) as a ring)
    Hc = homology(Ep.complex)
    H0m = Hc.module(0)
    base = R
    if H0m.torsion:
        if H0m.free_rank or len(set(H0m.torsion)) != 1:
            raise ValueError("H_0 is not free and not an F_p-vector space")
        base = GF(int(H0m.torsion[0]))
    reps = Hc.reps(0)
    k = reps.shape[1]
    mult0 = base.zeros((k, k, k))
    for a in range(k):
        for b in range(k):
            cl = Hc.class_of(0, Ep.product(reps[:, a], reps[:, b]))
            mult0[a, b, :] = base.array(list(cl)) if k else mult0[a, b, :]
    unit0 = base.array(list(Hc.class_of(0, Ep.unit)))
    H0 = DGAlgebra(base, [0] * k, mult0, None, unit0, [f"h{a}" for a in range(k)], check=False)
    P = R.zeros((k, Np))
    z0 = [c for c in range(Np) if pdeg[c] == 0]
    for c in z0:
        P[:, c] = Hc.class_of(0, Ep.basis_vector(c))
    rel = R.zeros((k, 0))
    if base != R:
        rel = R.scale(base.p, R.eye(k))
    H0c = ChainComplex(R, [0] * k, None, rel, check=False)
    proj_chain = ChainMap(Ep.complex, H0c, P, check=False)
    proj = DGAlgebraMap(Ep, H0, P, check=False) if base == R else None
    return TruncationResult(Ep, inc, H0, proj_chain, proj)


# -- standard algebras -----------------------------------------------------


def matrix_algebra(ring: CoeffRing, n: int) -> DGAlgebra:
    """``M_n(k)`` on matrix units ``E_ij`` at index ``i * n + j``."""
    N = n * n
    m = ring.zeros((N, N, N))
    for i in range(n):
        for j in range(n):
            for l in range(n):
                m[i * n + j, j * n + l, i * n + l] = ring.one()
    unit = ring.zeros((N,))
    for i in range(n):
        unit[i * n + i] = ring.one()
    names = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return DGAlgebra(ring, [0] * N, m, None, unit, names, check=False)


def product_algebra(ring: CoeffRing, k: int) -> DGAlgebra:
    """``k x ... x k`` on orthogonal idempotents."""
    m = ring.zeros((k, k, k))
    for i in range(k):
        m[i, i, i] = ring.one()
    unit = ring.array([1] * k)
    return DGAlgebra(ring, [0] * k, m, None, unit, [f"p{i + 1}" for i in range(k)], check=False)


def truncated_polynomial(ring: CoeffRing, top: int, degree: int = 1, d_gen=0) -> DGAlgebra:
    """``k[e]/(e^{top+1})`` with ``|e| = degree`` and ``d(e) = d_gen``.

    Leibniz fixes ``d(e^j)`` from ``d(e)``; the table is validated.
    """
    N = top + 1
    m = ring.zeros((N, N, N))
    for i in range(N):
        for j in range(N):
            if i + j < N:
                m[i, j, i + j] = ring.one()
    d = ring.zeros((N, N))
    if d_gen and degree == 1:
        # d(e^j) = sum_{a} (-1)^a e^a d(e) e^{j-1-a} = (j odd) * d_gen * e^{j-1}
        for j in range(1, N):
            if j % 2 == 1:
                d[j - 1, j] = ring.scalar(d_gen)
    elif d_gen:
        raise ValueError("a nonzero differential needs |e| = 1")
    names = ["1"] + [f"e^{j}" if j > 1 else "e" for j in range(1, N)]
    return DGAlgebra(ring, [degree * j for j in range(N)], m, d, ring.array([1] + [0] * top), names)


def dugger_shipley() -> DGAlgebra:
    """``Z[e]/(e^4)`` with ``|e| = 1`` and ``d(e) = 2``."""
    from .rings import ZZ

    return truncated_polynomial(ZZ(), 3, 1, 2)
