import numpy as np
import pytest
from hypothesis import given, strategies as st

from dgmorita.bicat import (
    Bimodule,
    TwoCell,
    associator,
    evaluation,
    left_adjunct,
    left_unadjunct,
    left_unitor,
    lhom,
    odot,
    odot_cells,
    rhom,
    right_adjunct,
    right_unadjunct,
    right_unitor,
    shift_bimodule,
    tc1_composite,
    twocell_space,
    unit_cell,
)
from dgmorita.complex import ChainComplex, homology
from dgmorita.dga import dugger_shipley, ground, matrix_algebra, truncated_polynomial
from dgmorita.generators import random_cell_module, random_triangular_dga, random_twocell, right_ideal_module
from dgmorita.rings import GF, QQ, ZZ

Z = ZZ()


def column_module(S):
    """Left ``S``-module of columns of ``M_2``: a 1-cell ``k -> S``."""
    R = S.ring
    k = ground(R)
    left = R.zeros((S.dim, 2, 2))
    for i in range(2):
        for j in range(2):
            left[i * 2 + j, i, j] = 1
    return Bimodule(k, S, ChainComplex(R, [0, 0]), left, R.eye(2)[None], name="col")


def test_row_odot_column_is_rank_one():
    S = matrix_algebra(Z, 2)
    row = right_ideal_module(S, [0, 1], name="row")
    col = column_module(S)
    rc = odot(row, col, check=True)
    H = homology(rc.carrier)
    assert H.iso_types() == {0: (1, ())}
    cr = odot(col, row, check=True)
    assert cr.n == 4  # col (x)_k row = M_2(Z)


def test_unit_laws_are_isos():
    for A in (dugger_shipley(), matrix_algebra(GF(3), 2)):
        M = unit_cell(A)
        lu, ru = left_unitor(M), right_unitor(M)
        assert lu.validate() and ru.validate()
        assert lu.is_iso() and ru.is_iso()


def test_shift_of_unit_and_alpha_validate():
    A = truncated_polynomial(GF(3), 2, 1)
    SA = shift_bimodule(unit_cell(A), 1)
    assert SA.validate()
    assert [int(x) for x in SA.degrees] == [1, 2, 3]


def test_rhom_examples():
    A = dugger_shipley()
    U = unit_cell(A)
    H = rhom(U, U)
    # End of the free rank one module is A again
    assert homology(H.carrier).iso_types() == homology(A.complex).iso_types()
    R = GF(5)
    S = matrix_algebra(R, 2)
    row = right_ideal_module(S, [0, 1])
    assert rhom(row, row).n == 1
    assert rhom(row, unit_cell(S)).n == 2
    assert lhom(unit_cell(S), unit_cell(S)).n == 4


def test_evaluation_is_a_twocell():
    S = matrix_algebra(GF(5), 2)
    row = right_ideal_module(S, [0, 1])
    ev = evaluation(row, unit_cell(S))
    assert ev.validate()


def test_twocell_space_over_z_quotients_by_torsion():
    # 2-cells Z/2 -> Z/2 over k = Z form Z/2, generated by the identity
    k = ground(Z)
    C = ChainComplex(Z, [0], None, Z.array([[2]]))
    M = Bimodule(k, k, C, Z.eye(1)[None], Z.eye(1)[None])
    cells = twocell_space(M, M)
    assert len(cells) == 1 and cells[0].matrix[0, 0] % 2 == 1


@pytest.mark.parametrize("R", [GF(3), GF(5), QQ()], ids=["F3", "F5", "Q"])
def test_tc1_is_minus_one_on_examples(R):
    for A in (ground(R), truncated_polynomial(R, 2, 1), matrix_algebra(R, 2)):
        comp, alpha, kappa = tc1_composite(A)
        assert alpha.validate() and alpha.is_iso()
        assert comp.equals(TwoCell.identity(comp.source).scaled(-1))


def test_associator_is_iso():
    R = GF(3)
    A = truncated_polynomial(R, 1, 1)
    U = unit_cell(A)
    S = shift_bimodule(U, 1)
    a = associator(S, U, S)
    assert a.validate() and a.is_iso()


# -- properties --------------------------------------------------------------


def _instance(seed):
    rng = np.random.default_rng(seed)
    R = GF(2)
    A = random_triangular_dga(R, rng, max_disks=1) if seed % 2 else truncated_polynomial(R, 2, 1)
    k = ground(R)
    M = random_cell_module(A, rng, 2, B=k)
    V = random_cell_module(k, rng, 2, B=k)
    W = random_cell_module(A, rng, 2, B=k)
    return rng, M, V, W


@given(st.integers(0, 10**6))
def test_right_adjunction_is_bijective(seed):
    rng, M, V, W = _instance(seed)
    VM, H = odot(V, M), rhom(M, W)
    left, right = twocell_space(VM, W), twocell_space(V, H)
    assert len(left) == len(right)
    phi = random_twocell(VM, W, rng)
    psi = right_adjunct(phi, H)
    assert psi.validate()
    assert right_unadjunct(psi, VM).equals(phi)


@given(st.integers(0, 10**6))
def test_left_adjunction_round_trips(seed):
    rng = np.random.default_rng(seed)
    R = GF(2)
    A = truncated_polynomial(R, 2, 1)
    k = ground(R)
    M = random_cell_module(A, rng, 2, B=k)  # M: A -> k
    V = random_cell_module(k, rng, 2, B=A)  # V: k -> A
    U = random_cell_module(k, rng, 2, B=k)
    MV = odot(M, V)
    H = lhom(U, M)
    assert len(twocell_space(MV, U)) == len(twocell_space(V, H))
    phi = random_twocell(MV, U, rng)
    psi = left_adjunct(phi, H)
    assert psi.validate()
    assert left_unadjunct(psi, MV).equals(phi)


@given(st.integers(0, 10**6))
def test_odot_of_cells_is_functorial(seed):
    rng, M, V, W = _instance(seed)
    f = random_twocell(V, V, rng)
    g = random_twocell(M, M, rng)
    VM = odot(V, M)
    fg = odot_cells(f, g, VM, VM)
    assert fg.validate()
    both = odot_cells(f @ f, g @ g, VM, VM)
    assert both.equals(fg @ fg)


@given(st.integers(0, 10**6))
def test_unitors_are_isos_on_cell_modules(seed):
    rng, M, V, W = _instance(seed)
    lu = left_unitor(M)
    ru = right_unitor(M)
    assert lu.is_iso() and ru.is_iso()


@given(st.integers(0, 10**6), st.sampled_from([GF(3), GF(5), QQ()]))
def test_tc1_on_random_algebras(seed, R):
    A = random_triangular_dga(R, np.random.default_rng(seed), max_disks=1)
    comp, _, _ = tc1_composite(A)
    assert comp.equals(TwoCell.identity(comp.source).scaled(-1))
