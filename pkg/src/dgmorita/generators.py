"""Random and constructed inputs for property suites and built-in examples.

Everything takes an explicit ``numpy.random.Generator`` so runs are
reproducible from a seed.
"""

from __future__ import annotations

import numpy as np

from .bicat import Bimodule, TwoCell, twocell_space
from .complex import ChainComplex, homology
from .dga import DGAlgebra, ground
from .model import attach_cell, cell_generators, cell_module
from .rings import CoeffRing

__all__ = [
    "end_algebra",
    "random_complex",
    "random_matrix_dga",
    "random_triangular_dga",
    "random_cell_module",
    "random_twocell",
    "random_quasi_iso_pair",
    "right_ideal_module",
]


def end_algebra(V: ChainComplex, upper: bool = False) -> DGAlgebra:
    """``End_k(V)`` as graded ``M_n`` with ``d = [d_V, -]``.

    ``E_ij`` (index ``i * n + j``) sends ``v_j`` to ``v_i`` and has degree
    ``|v_i| - |v_j|``.  With ``upper`` only ``i <= j`` is kept, which is a
    subalgebra when ``d_V`` is strictly upper triangular.
    """
    if V.relations.shape[1]:
        raise ValueError("complex must have free pieces")
    R = V.ring
    n = V.ngens
    v = V.degrees
    pairs = [(i, j) for i in range(n) for j in range(n) if not upper or i <= j]
    if upper and any(V.d[i, j] != 0 for i in range(n) for j in range(i + 1)):
        raise ValueError("differential is not strictly upper triangular")
    pos = {p: t for t, p in enumerate(pairs)}
    N = len(pairs)
    mult = R.zeros((N, N, N))
    for (i, j), a in pos.items():
        for l in range(n):
            b = pos.get((j, l))
            if b is not None:
                mult[a, b, pos[(i, l)]] = R.one()
    degs = [int(v[i] - v[j]) for i, j in pairs]
    d = R.zeros((N, N))
    # d(f) = d_V f - (-1)^{|f|} f d_V
    for (i, j), a in pos.items():
        s = -1 if degs[a] % 2 == 0 else 1
        for k in np.nonzero(V.d[:, i] != 0)[0]:
            d[pos[(int(k), j)], a] += V.d[k, i]
        for k in np.nonzero(V.d[j, :] != 0)[0]:
            d[pos[(i, int(k))], a] += s * V.d[j, k]
    unit = R.zeros((N,))
    for i in range(n):
        unit[pos[(i, i)]] = R.one()
    names = [f"E{i + 1}{j + 1}" for i, j in pairs]
    return DGAlgebra(R, degs, mult, R.reduce(d), unit, names)


def random_complex(ring: CoeffRing, rng, spheres=(0,), disks=(), mix: bool = True) -> ChainComplex:
    """Spheres ``S^n`` for ``n in spheres`` and disks ``D^m`` for ``m in disks``.

    With ``mix`` a random degree-preserving change of basis is applied, so
    the differential is no longer in normal form.
    """
    degs, pairs = [], []
    for n in spheres:
        degs.append(int(n))
    for m in disks:
        pairs.append((len(degs), len(degs) + 1))
        degs += [int(m), int(m) - 1]
    n = len(degs)
    d = ring.zeros((n, n))
    for top, bot in pairs:
        d[bot, top] = ring.one()
    if mix and n:
        P = _random_graded_automorphism(ring, rng, np.array(degs))
        d = ring.matmul(ring.matmul(P, d), _inverse(ring, P))
    return ChainComplex(ring, degs, d)


def _random_graded_automorphism(ring, rng, degs):
    """Unitriangular within each degree, so invertible over any of the rings."""
    n = len(degs)
    P = ring.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            if degs[i] == degs[j]:
                P[i, j] = ring.random_array(rng, (), bound=2)[()]
    return ring.reduce(P)


def _inverse(ring, P):
    n = P.shape[0]
    # unitriangular: back substitution
    inv = ring.eye(n)
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n):
            if P[i, j] != 0:
                inv[i, :] = ring.sub(inv[i, :], ring.scale(P[i, j], inv[j, :]))
    return inv


def random_matrix_dga(ring: CoeffRing, rng, spheres=(0,), disks=None, max_disks: int = 2, lo: int = -1, hi: int = 2):
    """``End(V)`` for a random complex ``V``; homology is ``End(H(V))``."""
    if disks is None:
        disks = [int(rng.integers(lo + 1, hi + 1)) for _ in range(int(rng.integers(0, max_disks + 1)))]
    V = random_complex(ring, rng, spheres, disks)
    return end_algebra(V)


def random_triangular_dga(ring: CoeffRing, rng, spheres=(0,), max_disks: int = 2, lo: int = -1, hi: int = 2):
    """Upper-triangular part of ``End(V)`` with ``V`` in normal form (bottoms before tops)."""
    disks = [int(rng.integers(lo + 1, hi + 1)) for _ in range(int(rng.integers(0, max_disks + 1)))]
    degs, tops = [int(n) for n in spheres], []
    for m in disks:
        degs += [m - 1, m]
        tops.append(len(degs) - 1)
    n = len(degs)
    d = ring.zeros((n, n))
    for t in tops:
        d[t - 1, t] = ring.one()
    return end_algebra(ChainComplex(ring, degs, d), upper=True)


def random_cell_module(A: DGAlgebra, rng, ncells: int = 3, lo: int = -1, hi: int = 2, B: DGAlgebra | None = None) -> Bimodule:
    """Cells attached one at a time along random cycles (or as new spheres)."""
    B = B or ground(A.ring)
    R = A.ring
    M = cell_generators(A, B, int(rng.integers(lo, hi + 1)), "sphere")
    for _ in range(ncells - 1):
        H = homology(M.carrier)
        cand = [q for q in H.nonzero_degrees() if lo <= q + 1 <= hi + 1]
        if cand and rng.random() < 0.6:
            q = int(rng.choice(cand))
            reps = H.reps(q)
            coeffs = R.random_array(rng, (reps.shape[1],), bound=2)
            z = R.matmul(reps, coeffs)
            if not R.is_zero_array(z):
                M, _ = attach_cell(M, q, z)
                continue
        gdeg = list(M.cell.gen_degrees) + [int(rng.integers(lo, hi + 1))]
        ng = len(gdeg)
        dg = R.zeros((B.dim * ng * A.dim, ng))
        old = M.cell
        # re-embed the old boundaries into the enlarged generator set
        NA, NB, on = A.dim, B.dim, old.ngens
        for g in range(on):
            for b in range(NB):
                for h in range(on):
                    for a in range(NA):
                        dg[(b * ng + h) * NA + a, g] = old.dgen[(b * on + h) * NA + a, g]
        stages = [list(s) for s in old.stages] + [[ng - 1]]
        M = cell_module(A, B, gdeg, dg, stages)
    M.name = "random cell"
    return M


def random_twocell(X: Bimodule, Y: Bimodule, rng, degree: int = 0) -> TwoCell:
    """A random combination of a basis of 2-cells ``X -> Y`` (zero if there are none)."""
    R = X.ring
    basis = twocell_space(X, Y, degree)
    m = R.zeros((Y.n, X.n))
    for b in basis:
        m = R.add(m, R.scale(R.random_array(rng, (), bound=2)[()], b.matrix))
    return TwoCell(X, Y, m, degree, check=False)


def random_quasi_iso_pair(ring: CoeffRing, rng, spheres=(0,), disks_x=(), disks_y=(1,)):
    """``(X, Y, f)`` over ``k`` with ``f`` the inclusion of ``X`` into ``X + disks``, basis mixed."""
    k = ground(ring)
    X = random_complex(ring, rng, spheres, disks_x, mix=False)
    Y0 = random_complex(ring, rng, spheres, tuple(disks_x) + tuple(disks_y), mix=False)
    n, m = X.ngens, Y0.ngens
    inc = ring.zeros((m, n))
    for i in range(n):
        inc[i, i] = ring.one()
    P = _random_graded_automorphism(ring, rng, Y0.degrees)
    Pinv = _inverse(ring, P)
    Y = ChainComplex(ring, Y0.degrees, ring.matmul(ring.matmul(P, Y0.d), Pinv))
    BX = Bimodule(k, k, X, ring.eye(n)[None], ring.eye(n)[None], check=False, name="X")
    BY = Bimodule(k, k, Y, ring.eye(m)[None], ring.eye(m)[None], check=False, name="Y")
    return BX, BY, TwoCell(BX, BY, ring.matmul(P, inc))


def right_ideal_module(S: DGAlgebra, idx, name: str | None = None) -> Bimodule:
    """The right ``S``-submodule spanned by the basis elements ``idx`` (must be closed under the action)."""
    R = S.ring
    n = len(idx)
    pos = {int(t): i for i, t in enumerate(idx)}
    right = R.zeros((S.dim, n, n))
    for a in range(S.dim):
        for j, t in enumerate(idx):
            col = S.mult[t, a, :]
            for u in np.nonzero(col != 0)[0]:
                if int(u) not in pos:
                    raise ValueError("basis elements do not span a right ideal")
                right[a, pos[int(u)], j] = col[u]
    degs = [int(S.degrees[t]) for t in idx]
    d = R.zeros((n, n))
    for j, t in enumerate(idx):
        for u in np.nonzero(S.d[:, t] != 0)[0]:
            if int(u) not in pos:
                raise ValueError("basis elements are not closed under the differential")
            d[pos[int(u)], j] = S.d[u, t]
    C = ChainComplex(R, degs, d)
    return Bimodule(S, ground(R), C, R.eye(n)[None], right, name=name)
