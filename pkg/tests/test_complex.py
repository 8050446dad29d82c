import numpy as np
import pytest
from hypothesis import given, strategies as st

from dgmorita.complex import (
    ChainComplex,
    ChainMap,
    chain_homotopy_solve,
    cone,
    disk,
    homology,
    interval,
    is_quasi_iso,
    shift,
    sphere,
)
from dgmorita.dga import dugger_shipley
from dgmorita.generators import random_complex
from dgmorita.rings import GF, ZZ

from oracles import betti_mod_p, rank_mod_p

Z = ZZ()


def times(c, n=0, R=Z):
    return ChainMap(sphere(R, n), sphere(R, n), R.array([[c]]))


def test_dugger_shipley_homology():
    # hand Smith forms: d_1 = (2), d_2 = 0, d_3 = (2)
    H = homology(dugger_shipley().complex)
    assert H.nonzero_degrees() == [0, 2]
    assert H.module(0).iso_type == (0, (2,)) and H.module(2).iso_type == (0, (2,))
    for n in (1, 3):
        assert H.module(n).is_zero_module()


@pytest.mark.parametrize("n", [-2, 0, 3])
def test_disks_are_acyclic_and_spheres_are_not(n):
    assert homology(disk(Z, n)).is_acyclic()
    H = homology(sphere(Z, n))
    assert H.nonzero_degrees() == [n] and H.module(n).iso_type == (1, ())


def test_representatives_are_cycles_and_independent():
    C = dugger_shipley().complex
    H = homology(C)
    for n in H.nonzero_degrees():
        reps = H.reps(n)
        assert C.is_zero(Z.matmul(C.d, reps))
        assert not H.is_boundary(n, reps[:, 0])


def test_invalid_complex_rejected():
    d = Z.zeros((3, 3))
    d[1, 0] = 1
    d[2, 1] = 1
    with pytest.raises(ValueError, match="d\\^2"):
        ChainComplex(Z, [2, 1, 0], d)


def test_cone_examples():
    assert homology(cone(ChainMap.identity(sphere(Z, 1))).complex).is_acyclic()
    C = dugger_shipley().complex
    empty = ChainComplex(Z, [])
    c0 = cone(ChainMap.zero(empty, C)).complex
    assert homology(c0).iso_types() == homology(C).iso_types()
    H = homology(cone(times(2)).complex)
    assert H.iso_types() == {0: (0, (2,))}


def test_shift_examples():
    S = shift(sphere(Z, 2), 1)
    assert list(S.degrees) == [3]
    C = dugger_shipley().complex
    back = shift(shift(C, 1), -1)
    assert list(back.degrees) == list(C.degrees) and Z.equal(back.d, C.d)
    for k in (-2, 1, 3):
        assert homology(shift(C, k)).iso_types() == {n + k: t for n, t in homology(C).iso_types().items()}


def test_quasi_iso_examples():
    assert is_quasi_iso(ChainMap.identity(dugger_shipley().complex))
    r = is_quasi_iso(times(2))
    assert not r and r.failing_degrees == [0]


def test_homotopy_examples():
    C = dugger_shipley().complex
    f = ChainMap.identity(C)
    h = chain_homotopy_solve(f, f)
    assert h is not None and h.is_zero()
    S = sphere(Z, 0)
    assert chain_homotopy_solve(ChainMap.identity(S), ChainMap.zero(S, S)) is None


def test_interval_retraction_homotopy():
    I = interval(Z)
    # r collapses I onto <0>; i0 includes the point <0>
    S = sphere(Z, 0)
    r = ChainMap(I, S, Z.array([[0, 1, 1]]))
    i0 = ChainMap(S, I, Z.array([[0], [1], [0]]))
    h = chain_homotopy_solve(i0 @ r, ChainMap.identity(I))
    assert h is not None
    lhs = Z.add(Z.matmul(I.d, h.matrix), Z.matmul(h.matrix, I.d))
    assert Z.equal(lhs, Z.sub((i0 @ r).matrix, Z.eye(3)))


complexes = st.builds(
    lambda p, seed, sph, dsk: (GF(p), random_complex(GF(p), np.random.default_rng(seed), sph, dsk)),
    st.sampled_from([2, 3]),
    st.integers(0, 10**6),
    st.lists(st.integers(-1, 2), max_size=3),
    st.lists(st.integers(-1, 2), max_size=2),
)


@given(complexes)
def test_homology_matches_rank_oracle(rc):
    R, C = rc
    H = homology(C)
    got = {n: H.module(n).free_rank for n in H.nonzero_degrees()}
    assert got == betti_mod_p([int(t) for t in C.degrees], C.d.tolist(), R.p)


@given(complexes, st.integers(-3, 3))
def test_shift_is_invertible_and_reindexes_homology(rc, k):
    R, C = rc
    S = shift(C, k)
    assert homology(S).iso_types() == {n + k: t for n, t in homology(C).iso_types().items()}
    B = shift(S, -k)
    assert R.equal(B.d, C.d)


@given(complexes, st.integers(0, 10**6))
def test_quasi_iso_agrees_with_induced_maps(rc, seed):
    # a random endomorphism: identity plus a random null-homotopic map d h + h d
    R, C = rc
    rng = np.random.default_rng(seed)
    n = C.ngens
    h = R.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if C.degrees[i] == C.degrees[j] + 1:
                h[i, j] = rng.integers(0, R.p)
    scale = int(rng.integers(0, R.p))
    F = R.add(R.scale(scale, R.eye(n)), R.add(R.matmul(C.d, h), R.matmul(h, C.d)))
    f = ChainMap(C, C, F)
    per_degree = True
    H = homology(C)
    for t in H.nonzero_degrees():
        M = f.induced(t)
        per_degree &= rank_mod_p(M.tolist(), R.p) == M.shape[0] == M.shape[1]
    assert bool(is_quasi_iso(f)) == per_degree


@given(complexes)
def test_cone_ranks_add_up(rc):
    R, C = rc
    f = ChainMap.identity(C)
    K = cone(f).complex
    for n in K.degree_list():
        assert len(K.idx(n)) == len(C.idx(n)) + len(C.idx(n - 1))
