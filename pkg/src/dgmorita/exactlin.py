"""Exact linear algebra over a PID or field.

Everything rests on :func:`smith_normal_form`: kernels, images, linear
solving and the canonical form of a finitely presented module all read off
the transforms ``U A V = D``.  Matrices are numpy arrays in the dtype chosen
by :class:`~dgmorita.rings.CoeffRing`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .rings import CoeffRing

__all__ = [
    "SmithForm",
    "smith_normal_form",
    "kernel",
    "image_basis",
    "solve_linear",
    "rank",
    "FPModule",
    "ModuleMap",
    "fp_hom",
    "fp_tensor",
    "iso_test",
    "direct_sum",
    "block_diag",
    "hstack",
    "vstack",
    "Coordinatizer",
    "MapSystem",
]


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == D`` with ``D`` diagonal and ``d_1 | d_2 | ... | d_r``."""

    ring: CoeffRing
    D: np.ndarray
    U: np.ndarray
    V: np.ndarray
    Uinv: np.ndarray
    rank: int

    @property
    def invariant_factors(self) -> tuple:
        return tuple(self.D[i, i] for i in range(self.rank))

    def check(self, A: np.ndarray) -> bool:
        R = self.ring
        return R.equal(R.mul(self.U, A, self.V), self.D) and R.equal(
            R.matmul(self.U, self.Uinv), R.eye(self.U.shape[0])
        )


def hstack(ring: CoeffRing, mats, rows: int | None = None) -> np.ndarray:
    mats = [m for m in mats]
    if not mats:
        return ring.zeros((rows or 0, 0))
    return np.hstack(mats) if len(mats) > 1 else mats[0].copy()


def vstack(ring: CoeffRing, mats, cols: int | None = None) -> np.ndarray:
    mats = [m for m in mats]
    if not mats:
        return ring.zeros((0, cols or 0))
    return np.vstack(mats) if len(mats) > 1 else mats[0].copy()


def block_diag(ring: CoeffRing, mats) -> np.ndarray:
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = ring.zeros((rows, cols))
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def _snf_field(A, ring, transforms):
    m, n = A.shape
    A = A.copy()
    U = ring.eye(m) if transforms else None
    Uinv = ring.eye(m) if transforms else None
    V = ring.eye(n)
    r = 0
    for t in range(min(m, n)):
        nz = np.argwhere(A[t:, t:] != 0)
        if len(nz) == 0:
            break
        i, j = int(nz[0][0]) + t, int(nz[0][1]) + t
        if i != t:
            A[[t, i], :] = A[[i, t], :]
            if transforms:
                U[[t, i], :] = U[[i, t], :]
                Uinv[:, [t, i]] = Uinv[:, [i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
        piv = A[t, t]
        inv = ring.inv(piv)
        A[t, :] = ring.reduce(A[t, :] * inv)
        if transforms:
            U[t, :] = ring.reduce(U[t, :] * inv)
            Uinv[:, t] = ring.reduce(Uinv[:, t] * piv)
        col = A[t + 1 :, t].copy()
        if np.any(col != 0):
            A[t + 1 :, :] = ring.reduce(A[t + 1 :, :] - np.outer(col, A[t, :]))
            if transforms:
                U[t + 1 :, :] = ring.reduce(U[t + 1 :, :] - np.outer(col, U[t, :]))
                Uinv[:, t] = ring.reduce(Uinv[:, t] + ring.matmul(Uinv[:, t + 1 :], col))
        row = A[t, t + 1 :].copy()
        if np.any(row != 0):
            A[t, t + 1 :] = 0
            V[:, t + 1 :] = ring.reduce(V[:, t + 1 :] - np.outer(V[:, t], row))
        r += 1
    return A, U, V, Uinv, r


def _snf_pid(A, ring, transforms=True):
    m, n = A.shape
    A = A.copy()
    U = ring.eye(m)
    Uinv = ring.eye(m)
    V = ring.eye(n)

    def row_add(i, t, c):  # R_i += c R_t
        A[i, :] = A[i, :] + c * A[t, :]
        U[i, :] = U[i, :] + c * U[t, :]
        Uinv[:, t] = Uinv[:, t] - c * Uinv[:, i]

    def col_add(j, t, c):  # C_j += c C_t
        A[:, j] = A[:, j] + c * A[:, t]
        V[:, j] = V[:, j] + c * V[:, t]

    def swap_rows(i, t):
        A[[t, i], :] = A[[i, t], :]
        U[[t, i], :] = U[[i, t], :]
        Uinv[:, [t, i]] = Uinv[:, [i, t]]

    def swap_cols(j, t):
        A[:, [t, j]] = A[:, [j, t]]
        V[:, [t, j]] = V[:, [j, t]]

    r = 0
    for t in range(min(m, n)):
        sub = A[t:, t:]
        best = None
        for (i, j), v in np.ndenumerate(sub):
            if v != 0 and (best is None or abs(v) < best[0]):
                best = (abs(v), i + t, j + t)
                if best[0] == 1:
                    break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            dirty = False
            for i in range(t + 1, m):
                if A[i, t] != 0:
                    q = ring.quo(A[i, t], A[t, t])
                    row_add(i, t, -q)
                    if A[i, t] != 0:
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, n):
                if A[t, j] != 0:
                    q = ring.quo(A[t, j], A[t, t])
                    col_add(j, t, -q)
                    if A[t, j] != 0:
                        swap_cols(j, t)
                        dirty = True
            if dirty:
                continue
            piv = A[t, t]
            bad = None
            if abs(piv) != 1:
                for (i, j), v in np.ndenumerate(A[t + 1 :, t + 1 :]):
                    if v % piv != 0:
                        bad = i + t + 1
                        break
            if bad is None:
                break
            row_add(t, bad, 1)
        if A[t, t] < 0:
            A[t, :] = -A[t, :]
            U[t, :] = -U[t, :]
            Uinv[:, t] = -Uinv[:, t]
        r += 1
    return A, U, V, Uinv, r


def smith_normal_form(A: np.ndarray, ring: CoeffRing, transforms: bool = True) -> SmithForm:
    """Smith normal form with unimodular transforms.

    Over a field the diagonal is a run of ones; over ``Z`` the entries are
    positive and form a divisibility chain.
    """
    A = ring.array(A) if not isinstance(A, np.ndarray) or A.dtype != ring.dtype else A
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    if ring.is_field:
        D, U, V, Uinv, r = _snf_field(A, ring, transforms)
    else:
        D, U, V, Uinv, r = _snf_pid(A, ring)
    return SmithForm(ring, D, U, V, Uinv, r)


def rank(A: np.ndarray, ring: CoeffRing) -> int:
    if A.size == 0:
        return 0
    if ring.is_field:
        return len(_rref(A, ring)[1])
    return smith_normal_form(A, ring, transforms=False).rank


def kernel(A: np.ndarray, ring: CoeffRing) -> np.ndarray:
    """Columns spanning ``{x : A x = 0}``; over ``Z`` the span is saturated."""
    m, n = A.shape
    if n == 0:
        return ring.zeros((0, 0))
    if m == 0:
        return ring.eye(n)
    if ring.is_field:
        return _kernel_rref(A, ring)
    S = smith_normal_form(A, ring, transforms=False)
    return S.V[:, S.rank :].copy()


def _rref(A: np.ndarray, ring: CoeffRing):
    """Reduced row echelon form over a field: ``(rows, pivot columns)``.

    Zero rows are dropped first and each pivot only touches the rows that
    are nonzero in its column, which keeps tall sparse systems cheap.
    """
    A = A[np.any(A != 0, axis=1)].copy()
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c] != 0)[0]
        if len(nz) == 0:
            continue
        i = int(nz[0]) + r
        if i != r:
            A[[r, i], :] = A[[i, r], :]
        A[r, c:] = ring.reduce(A[r, c:] * ring.inv(A[r, c]))
        hit = np.nonzero(A[:, c] != 0)[0]
        hit = hit[hit != r]
        if len(hit):
            A[np.ix_(hit, np.arange(c, n))] = ring.reduce(A[np.ix_(hit, np.arange(c, n))] - np.outer(A[hit, c], A[r, c:]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _solve_rref(A: np.ndarray, B: np.ndarray, ring: CoeffRing):
    n = A.shape[1]
    E, pivots = _rref(np.hstack([A, ring.reduce(B)]), ring)
    if pivots and pivots[-1] >= n:
        return None
    X = ring.zeros((n, B.shape[1]))
    if pivots:
        X[pivots, :] = E[:, n:]
    return X


def _kernel_rref(A: np.ndarray, ring: CoeffRing) -> np.ndarray:
    n = A.shape[1]
    E, pivots = _rref(A, ring)
    free = [c for c in range(n) if c not in set(pivots)]
    K = ring.zeros((n, len(free)))
    for k, f in enumerate(free):
        K[f, k] = ring.one()
        if pivots:
            K[pivots, k] = -E[:, f]
    return ring.reduce(K)


def image_basis(A: np.ndarray, ring: CoeffRing) -> np.ndarray:
    """A basis (free over a PID) of the column span of ``A``."""
    m, n = A.shape
    if n == 0 or m == 0:
        return ring.zeros((m, 0))
    if ring.is_field:
        return A[:, _rref(A, ring)[1]].copy()
    S = smith_normal_form(A, ring)
    cols = [ring.reduce(S.Uinv[:, i] * S.D[i, i]) for i in range(S.rank)]
    return np.column_stack(cols) if cols else ring.zeros((m, 0))


def solve_linear(A: np.ndarray, b: np.ndarray, ring: CoeffRing):
    """Return ``X`` with ``A @ X == b`` or ``None`` when no solution exists.

    ``b`` may be a vector or a matrix; the answer has the matching shape.
    """
    vector = b.ndim == 1
    B = b.reshape(-1, 1) if vector else b
    m, n = A.shape
    if B.shape[0] != m:
        raise ValueError(f"dimension mismatch: A is {A.shape}, b has {B.shape[0]} rows")
    if m == 0:
        X = ring.zeros((n, B.shape[1]))
        return X[:, 0] if vector else X
    if n == 0:
        if ring.is_zero_array(B):
            X = ring.zeros((0, B.shape[1]))
            return X[:, 0] if vector else X
        return None
    if ring.is_field:
        X = _solve_rref(A, B, ring)
        if X is None:
            return None
        return X[:, 0] if vector else X
    S = smith_normal_form(A, ring)
    Y = ring.matmul(S.U, B)
    r = S.rank
    if r < m and not ring.is_zero_array(Y[r:, :]):
        return None
    Z = ring.zeros((n, B.shape[1]))
    for i in range(r):
        d = S.D[i, i]
        for c in range(B.shape[1]):
            y = Y[i, c]
            if not ring.divides(d, y):
                return None
            Z[i, c] = ring.quo(y, d) if ring.kind == "Z" else ring.scalar(y * ring.inv(d))
    X = ring.matmul(S.V, Z)
    return X[:, 0] if vector else X


class FPModule:
    """``k^ngens / span(relations)``; relations are the columns.

    The canonical form (free rank plus the non-unit invariant factors of the
    relation matrix) is computed once and drives ``iso_test`` and element
    equality.
    """

    def __init__(self, ring: CoeffRing, ngens: int, relations: np.ndarray | None = None):
        self.ring = ring
        self.ngens = int(ngens)
        if relations is None:
            relations = ring.zeros((self.ngens, 0))
        relations = np.asarray(relations)
        if relations.dtype != ring.dtype:
            relations = ring.array(relations.tolist(), shape=relations.shape)
        if relations.shape[0] != self.ngens:
            raise ValueError("relation matrix must have one row per generator")
        self.relations = relations

    @classmethod
    def free(cls, ring, n):
        return cls(ring, n)

    @classmethod
    def cyclic(cls, ring, d):
        return cls(ring, 1, ring.array([[d]]))

    @classmethod
    def zero(cls, ring):
        return cls(ring, 0)

    @cached_property
    def _canon(self):
        R = self.ring
        g = self.ngens
        rels = self.relations
        if rels.shape[1] == 0 or R.is_zero_array(rels):
            return dict(torsion=(), free=g, proj=R.eye(g), sect=R.eye(g), moduli=[0] * g)
        if R.is_field:
            # complement of the relation span on the non-pivot coordinates
            E, piv = _rref(rels.T, R)
            rest = [i for i in range(g) if i not in set(piv)]
            proj = R.zeros((len(rest), g))
            proj[:, rest] = R.eye(len(rest))
            if piv:
                proj[:, piv] = R.neg(E[:, rest].T)
            return dict(torsion=(), free=len(rest), proj=proj, sect=R.eye(g)[:, rest], moduli=[0] * len(rest))
        S = smith_normal_form(rels, R)
        keep, moduli = [], []
        for i in range(S.rank):
            d = S.D[i, i]
            if not R.is_unit(d):
                keep.append(i)
                moduli.append(d)
        for i in range(S.rank, g):
            keep.append(i)
            moduli.append(0)
        torsion = tuple(d for d in moduli if d != 0)
        return dict(
            torsion=torsion,
            free=g - S.rank,
            proj=S.U[keep, :].copy(),
            sect=S.Uinv[:, keep].copy(),
            moduli=moduli,
        )

    @property
    def free_rank(self) -> int:
        return self._canon["free"]

    @property
    def torsion(self) -> tuple:
        return self._canon["torsion"]

    @property
    def invariant_factors(self) -> tuple:
        return self.torsion

    @property
    def iso_type(self) -> tuple:
        return (self.free_rank, tuple(sorted(self.torsion)))

    @property
    def ncanon(self) -> int:
        return len(self._canon["moduli"])

    @property
    def proj(self) -> np.ndarray:
        """Coordinates on canonical generators (before reduction mod d_i)."""
        return self._canon["proj"]

    @property
    def sect(self) -> np.ndarray:
        """Canonical generators as vectors on the original generators."""
        return self._canon["sect"]

    @property
    def moduli(self) -> list:
        return self._canon["moduli"]

    def canonical(self, x: np.ndarray) -> np.ndarray:
        """Reduced canonical coordinates of ``x`` (vector or columns)."""
        R = self.ring
        y = R.matmul(self.proj, x)
        if R.kind == "Z":
            for i, d in enumerate(self.moduli):
                if d != 0:
                    y[i] = y[i] % d
        return y

    def is_zero(self, x: np.ndarray) -> bool:
        if x.size == 0:
            return True
        return self.ring.is_zero_array(self.canonical(x))

    def is_zero_module(self) -> bool:
        return self.ncanon == 0

    def reduced(self):
        """(M', P, S): isomorphic module on canonical generators, with maps."""
        R = self.ring
        rel = R.zeros((self.ncanon, self.ncanon))
        for i, d in enumerate(self.moduli):
            rel[i, i] = d
        cols = [i for i, d in enumerate(self.moduli) if d != 0]
        return FPModule(R, self.ncanon, rel[:, cols]), self.proj, self.sect

    def __eq__(self, other):
        return isinstance(other, FPModule) and iso_test(self, other)

    __hash__ = object.__hash__

    def __str__(self):
        R = self.ring
        parts = []
        if self.free_rank:
            parts.append(f"{R}^{self.free_rank}" if self.free_rank > 1 else f"{R}")
        for d in sorted(self.torsion):
            parts.append(f"{R}/{d}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FPModule({self})"


@dataclass
class ModuleMap:
    """Homomorphism given by a matrix on generators."""

    source: FPModule
    target: FPModule
    matrix: np.ndarray

    def is_well_defined(self) -> bool:
        R = self.source.ring
        return self.target.is_zero(R.matmul(self.matrix, self.source.relations))

    def kernel(self):
        """(K, inclusion): the kernel as an FPModule with its inclusion."""
        R = self.source.ring
        M, N = self.source, self.target
        sys = hstack(R, [self.matrix, R.neg(N.relations)], rows=N.ngens)
        Kfull = kernel(sys, R)
        Kx = image_basis(Kfull[: M.ngens, :], R)
        rels = solve_linear(Kx, M.relations, R) if M.relations.shape[1] else R.zeros((Kx.shape[1], 0))
        return FPModule(R, Kx.shape[1], rels), Kx

    def cokernel(self) -> FPModule:
        R = self.source.ring
        N = self.target
        return FPModule(R, N.ngens, hstack(R, [self.matrix, N.relations], rows=N.ngens))

    def is_injective(self) -> bool:
        _, Kx = self.kernel()
        return self.source.is_zero(Kx)

    def is_surjective(self) -> bool:
        return self.cokernel().is_zero_module()

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        R = self.source.ring
        return ModuleMap(other.source, self.target, R.matmul(self.matrix, other.matrix))

    def equals(self, other: "ModuleMap") -> bool:
        R = self.source.ring
        return self.target.is_zero(R.sub(self.matrix, other.matrix))


def fp_hom(M: FPModule, N: FPModule):
    """``Hom_k(M, N)`` as an FPModule with its canonical generators as maps.

    Returns ``(H, basis, to_coords)`` where ``basis[i]`` is the ModuleMap of
    the i-th canonical generator and ``to_coords(F)`` gives canonical
    coordinates of a well-defined matrix ``F``.
    """
    if M.ring != N.ring:
        raise ValueError("modules over different rings")
    R = M.ring
    m, n = M.ngens, N.ngens
    rm, rn = M.relations.shape[1], N.relations.shape[1]
    A1 = np.kron(R.eye(n), M.relations.T) if rm else R.zeros((0, n * m))
    A2 = np.kron(N.relations, R.eye(rm)) if rm else R.zeros((0, rn * rm))
    if A1.shape[0]:
        Kfull = kernel(hstack(R, [A1, R.neg(A2)]), R)
        gens = image_basis(Kfull[: n * m, :], R)
    else:
        gens = R.eye(n * m)
    rel_amb = np.kron(N.relations, R.eye(m)) if rn else R.zeros((n * m, 0))
    rels = solve_linear(gens, rel_amb, R) if rel_amb.shape[1] else R.zeros((gens.shape[1], 0))
    H = FPModule(R, gens.shape[1], rels)
    basis = []
    for j in range(H.ncanon):
        vec = R.matmul(gens, H.sect[:, j])
        basis.append(ModuleMap(M, N, vec.reshape(n, m)))

    def to_coords(F):
        x = solve_linear(hstack(R, [gens, rel_amb]), R.reduce(F.reshape(-1)), R)
        if x is None:
            raise ValueError("matrix is not a well-defined homomorphism")
        return H.canonical(x[: gens.shape[1]])

    return H, basis, to_coords


def fp_tensor(M: FPModule, N: FPModule) -> FPModule:
    """``M (x)_k N``: generators are pairs ``(i, j)`` at index ``i * N.ngens + j``."""
    if M.ring != N.ring:
        raise ValueError("modules over different rings")
    R = M.ring
    rels = hstack(
        R,
        [np.kron(M.relations, R.eye(N.ngens)), np.kron(R.eye(M.ngens), N.relations)],
        rows=M.ngens * N.ngens,
    )
    return FPModule(R, M.ngens * N.ngens, rels)


def direct_sum(*mods: FPModule) -> FPModule:
    R = mods[0].ring
    return FPModule(R, sum(m.ngens for m in mods), block_diag(R, [m.relations for m in mods]))


def iso_test(M: FPModule, N: FPModule) -> bool:
    """Isomorphism of finitely presented modules via invariant factors."""
    if M.ring != N.ring:
        raise ValueError("modules over different rings")
    return M.iso_type == N.iso_type


class Coordinatizer:
    """Express vectors in the column span of a fixed matrix ``K``.

    Caches one Smith form so that many right-hand sides cost a matrix
    multiply each.
    """

    def __init__(self, K: np.ndarray, ring: CoeffRing):
        self.K = K
        self.ring = ring
        self._snf = smith_normal_form(K, ring) if K.size else None

    def solve(self, B: np.ndarray, strict: bool = True):
        R = self.ring
        vector = B.ndim == 1
        B2 = B.reshape(-1, 1) if vector else B
        m, n = self.K.shape
        if n == 0 or m == 0:
            if strict and not R.is_zero_array(B2):
                raise ValueError("vector outside the span")
            X = R.zeros((n, B2.shape[1]))
            return X[:, 0] if vector else X
        S = self._snf
        Y = R.matmul(S.U, B2)
        r = S.rank
        if r < m and not R.is_zero_array(Y[r:, :]):
            if strict:
                raise ValueError("vector outside the span")
            return None
        Z = R.zeros((n, B2.shape[1]))
        for i in range(r):
            d = S.D[i, i]
            if R.kind == "Z":
                row = Y[i, :]
                if any(v % d for v in row):
                    if strict:
                        raise ValueError("vector outside the span")
                    return None
                Z[i, :] = np.array([v // d for v in row], dtype=object)
            else:
                Z[i, :] = R.reduce(Y[i, :] * R.inv(d))
        X = R.matmul(S.V, Z)
        return X[:, 0] if vector else X


class MapSystem:
    """Linear constraints on an unknown homogeneous map ``F: V -> W``.

    ``src_deg`` and ``tgt_deg`` are generator degrees and ``degree`` is the
    degree of ``F``; only entries respecting the grading are unknowns.
    Constraints have the form ``sum_t c_t P_t F Q_t == rhs`` modulo the
    column span of a relation matrix of the module the equation lives in.
    """

    def __init__(self, ring, src_deg, tgt_deg, degree=0):
        self.ring = ring
        self.src_deg = np.asarray(src_deg, dtype=np.int64)
        self.tgt_deg = np.asarray(tgt_deg, dtype=np.int64)
        self.nv, self.nw = len(self.src_deg), len(self.tgt_deg)
        I, J = np.nonzero(self.tgt_deg[:, None] == self.src_deg[None, :] + degree)
        self.I, self.J = I, J
        self.blocks = []  # (coefficient rows, slack columns, rhs)

    @property
    def nunknowns(self):
        return len(self.I)

    def add(self, terms, rhs=None, mod=None):
        """Add ``sum c P F Q == rhs`` (mod span of ``mod``) for terms ``(c, P, Q)``."""
        R = self.ring
        if not terms:
            return
        mz = terms[0][1].shape[0]
        nu = terms[0][2].shape[1]
        rows = R.zeros((mz * nu, self.nunknowns))
        for c, P, Q in terms:
            if self.nunknowns == 0 or mz * nu == 0:
                continue
            block = P[:, self.I][:, None, :] * Q[self.J, :].T[None, :, :]
            rows = rows + R.scalar(c) * block.reshape(mz * nu, self.nunknowns)
        rows = R.reduce(rows)
        slack = None
        if mod is not None and mod.shape[1]:
            slack = np.kron(mod, R.eye(nu))
        if rhs is None:
            rhs = R.zeros((mz * nu,))
        else:
            rhs = R.reduce(rhs.reshape(-1))
        self.blocks.append((rows, slack, rhs))

    def _assemble(self):
        R = self.ring
        nrows = sum(b[0].shape[0] for b in self.blocks)
        nslack = sum(b[1].shape[1] for b in self.blocks if b[1] is not None)
        A = R.zeros((nrows, self.nunknowns + nslack))
        rhs = R.zeros((nrows,))
        r = 0
        s = self.nunknowns
        for rows, slack, b in self.blocks:
            h = rows.shape[0]
            A[r : r + h, : self.nunknowns] = rows
            if slack is not None:
                A[r : r + h, s : s + slack.shape[1]] = R.neg(slack)
                s += slack.shape[1]
            rhs[r : r + h] = b
            r += h
        return A, rhs

    def to_matrix(self, x):
        F = self.ring.zeros((self.nw, self.nv))
        if self.nunknowns:
            F[self.I, self.J] = x[: self.nunknowns]
        return F

    def solutions(self):
        """Basis (over a field) or generating set (over Z) of the homogeneous solutions."""
        R = self.ring
        if self.nunknowns == 0:
            return []
        if not self.blocks:
            return [self.to_matrix(R.eye(self.nunknowns)[:, i]) for i in range(self.nunknowns)]
        A, _ = self._assemble()
        K = kernel(A, R)
        B = image_basis(K[: self.nunknowns, :], R)
        return [self.to_matrix(B[:, i]) for i in range(B.shape[1])]

    def solution_vectors(self):
        R = self.ring
        if self.nunknowns == 0:
            return R.zeros((0, 0))
        if not self.blocks:
            return R.eye(self.nunknowns)
        A, _ = self._assemble()
        K = kernel(A, R)
        return image_basis(K[: self.nunknowns, :], R)

    def solve(self):
        """One particular solution ``F`` or ``None``."""
        R = self.ring
        if not self.blocks:
            return self.to_matrix(R.zeros((self.nunknowns,)))
        A, rhs = self._assemble()
        x = solve_linear(A, rhs, R)
        if x is None:
            return None
        return self.to_matrix(x)
