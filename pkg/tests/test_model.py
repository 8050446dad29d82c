import numpy as np
import pytest
from hypothesis import given, strategies as st

from dgmorita.bicat import Bimodule, TwoCell, odot_cells
from dgmorita.complex import ChainComplex, ChainMap, homology, is_quasi_iso
from dgmorita.dga import dugger_shipley, ground, truncated_polynomial
from dgmorita.generators import random_cell_module, random_complex, random_quasi_iso_pair, random_twocell
from dgmorita.model import (
    LiftingProblem,
    Window,
    attach_cell,
    cell_generators,
    cell_map,
    cofibrant_replace,
    deformation_retraction,
    generator_maps,
    help_homology_check,
    help_lift,
    interval_basis_change,
    is_certified_cofibrant,
    lifting_solve,
    pushout_product,
)
from dgmorita.rings import GF, ZZ

Z = ZZ()


def over_k(C):
    R = C.ring
    k = ground(R)
    n = C.ngens
    return Bimodule(k, k, C, R.eye(n)[None], R.eye(n)[None])


def test_window_parse_and_bounds():
    w = Window.parse("-1:3")
    assert (w.lo, w.hi, w.cap) == (-1, 3, 8)
    assert 0 in w and 4 not in w
    with pytest.raises(ValueError):
        Window(2, 1)


@pytest.mark.parametrize("kind,acyclic", [("sphere", False), ("disk", True), ("interval", False)])
def test_generating_cells(kind, acyclic):
    A = dugger_shipley()
    k = ground(Z)
    M = cell_generators(A, k, 1, kind)
    assert M.validate() and M.cell.check_triangular()
    assert homology(M.carrier).is_acyclic() == acyclic


def test_attaching_along_twice_generator_gives_moore_space():
    k = ground(Z)
    S = cell_generators(k, k, 0, "sphere")
    M, inc = attach_cell(S, 0, Z.array([2]))
    assert homology(M.carrier).iso_types() == {0: (0, (2,))}
    assert inc.validate()
    with pytest.raises(ValueError, match="cycle"):
        D = cell_generators(k, k, 1, "disk")
        attach_cell(D, 1, Z.array([1, 0]))


def test_replacement_of_torsion_module():
    # Z/2 over Z is replaced by Z --2--> Z
    M = over_k(ChainComplex(Z, [0], None, Z.array([[2]])))
    r = cofibrant_replace(M, Window(-1, 2))
    assert r.certificate.full and is_quasi_iso(r.q.chain_map)
    assert sorted(r.Q.cell.gen_degrees) == [0, 1]
    assert is_certified_cofibrant(r.Q) and not is_certified_cofibrant(M)


def test_replacement_over_dugger_shipley():
    # k = Z/2 as a right module over C via the augmentation
    C = dugger_shipley()
    k = ground(Z)
    right = Z.zeros((4, 1, 1))
    right[0, 0, 0] = 1
    M = Bimodule(C, k, ChainComplex(Z, [0], None, Z.array([[2]])), Z.eye(1)[None], right)
    r = cofibrant_replace(M, Window(0, 2, cap=6))
    assert r.q.validate()
    assert all(n in r.certificate.certified for n in (0, 1))


def test_lifting_examples():
    k = ground(Z)
    S, D = cell_generators(k, k, 0, "sphere"), cell_generators(k, k, 1, "disk")
    zero = over_k(ChainComplex(Z, []))
    i = cell_map(S, D, Z.array([[0], [1]]))
    # S^0 -> S^0 does not extend over D^1
    top = TwoCell.identity(S)
    P = LiftingProblem(i, TwoCell.zero(S, zero), top, TwoCell.zero(D, zero))
    assert lifting_solve(P) is None
    # but it does against the acyclic target D^1
    P2 = LiftingProblem(i, TwoCell.zero(D, zero), i, TwoCell.zero(D, zero))
    lift = lifting_solve(P2)
    assert lift is not None and lift.equals(TwoCell.identity(D))


def test_help_criterion_examples():
    S = ChainComplex(Z, [0])
    two = ChainMap(S, S, Z.array([[2]]))
    # injective on H_0 but not onto it
    assert help_homology_check(two, 0) and help_lift(two, 0)[0]
    assert not help_homology_check(two, -1) and not help_lift(two, -1)[0]
    assert help_lift(ChainMap.identity(S), 0)[0]


@pytest.mark.parametrize("q", range(-2, 4))
@pytest.mark.parametrize("r", range(-2, 4))
def test_pushout_products_of_generators(q, r):
    R = GF(3)
    pp = pushout_product(generator_maps(R, q, "cof"), generator_maps(R, r, "cof"))
    assert pp.injective and pp.cokernel_free
    assert pp.new_cells == [q + r + 2]
    pa = pushout_product(generator_maps(R, q, "cof"), generator_maps(R, r, "acyclic"))
    assert pa.injective and pa.is_quasi_iso


def test_interval_basis_change():
    for R in (Z, GF(2)):
        ib = interval_basis_change(R)
        assert R.equal((ib.phi_inv @ ib.phi).matrix, R.eye(3))
        assert R.equal((ib.proj @ ib.i0).matrix, ib.incl.matrix)
        assert is_quasi_iso(ib.i0) and is_quasi_iso(ib.i1)


@pytest.mark.parametrize("n", [0, 1, 3])
def test_deformation_retraction(n):
    r, i0, h = deformation_retraction(Z, n)
    assert Z.equal((r @ i0).matrix, Z.eye(2))
    assert h is not None


# -- properties --------------------------------------------------------------


def _random_map(p, seed):
    rng = np.random.default_rng(seed)
    R = GF(p)
    if rng.random() < 0.5:
        X, Y, f = random_quasi_iso_pair(R, rng, spheres=tuple(rng.integers(-1, 2, size=2)))
        if rng.random() < 0.3:
            f = f.scaled(0)
        return f
    X = over_k(random_complex(R, rng, tuple(rng.integers(-1, 2, size=2)), tuple(rng.integers(-1, 2, size=1))))
    Y = over_k(random_complex(R, rng, tuple(rng.integers(-1, 2, size=2)), ()))
    return random_twocell(X, Y, rng)


@given(st.sampled_from([2, 3]), st.integers(0, 10**6))
def test_help_lifting_agrees_with_homology(p, seed):
    f = _random_map(p, seed)
    C = f.chain_map
    degs = set(C.source.degree_list()) | set(C.target.degree_list())
    lo, hi = min(degs) - 1, max(degs) + 1
    lifts = [help_lift(f, n)[0] for n in range(lo, hi + 1)]
    checks = [help_homology_check(f, n) for n in range(lo, hi + 1)]
    assert lifts == checks
    assert all(lifts) == bool(is_quasi_iso(C))


@given(st.integers(0, 10**6))
def test_replacement_is_quasi_iso_on_window(seed):
    rng = np.random.default_rng(seed)
    R = GF(2)
    A = truncated_polynomial(R, 2, 1)
    # restrict a cell module to a non-cell carrier by forgetting its cell structure
    M = random_cell_module(A, rng, 2, lo=0, hi=1)
    plain = Bimodule(M.source, M.target, M.carrier, M.left, M.right, check=False)
    res = cofibrant_replace(plain, Window(-1, 3))
    assert res.q.validate() and is_certified_cofibrant(res.Q)
    for n in res.certificate.certified:
        # injective on H_n from the check at n, surjective from the check at n - 1
        assert help_homology_check(res.q, n) and help_homology_check(res.q, n - 1)
    if res.certificate.full:
        assert is_quasi_iso(res.q.chain_map)


@given(st.integers(0, 10**6))
def test_every_module_is_fibrant(seed):
    # M -> 0 lifts against 0 -> D^n for every n in the window
    rng = np.random.default_rng(seed)
    R = GF(2)
    A = truncated_polynomial(R, 2, 1)
    k = ground(R)
    M = random_cell_module(A, rng, 2)
    zero = Bimodule(A, k, ChainComplex(R, []), R.zeros((1, 0, 0)), R.zeros((A.dim, 0, 0)))
    for n in range(-1, 3):
        D = cell_generators(A, k, n, "disk")
        empty = Bimodule(A, k, ChainComplex(R, []), R.zeros((1, 0, 0)), R.zeros((A.dim, 0, 0)))
        i = TwoCell.zero(empty, D)
        P = LiftingProblem(i, TwoCell.zero(M, zero), TwoCell.zero(empty, M), TwoCell.zero(D, zero))
        assert lifting_solve(P) is not None


@given(st.integers(0, 10**6))
def test_cofibrant_module_preserves_quasi_isos(seed):
    rng = np.random.default_rng(seed)
    R = GF(2)
    A = truncated_polynomial(R, 2, 1)
    k = ground(R)
    M = random_cell_module(A, rng, 2)  # a cofibrant right module A -> k
    N = random_cell_module(k, rng, 2, lo=0, hi=1, B=A)  # a left module k -> A
    plain = Bimodule(N.source, N.target, N.carrier, N.left, N.right, check=False)
    res = cofibrant_replace(plain, Window(-1, 4))
    if not res.certificate.full:
        return
    e = res.q
    Me = odot_cells(TwoCell.identity(M), e)
    assert Me.validate() and is_quasi_iso(Me.chain_map)
