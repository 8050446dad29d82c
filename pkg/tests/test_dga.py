import numpy as np
import pytest
from hypothesis import given, strategies as st

from dgmorita.complex import homology
from dgmorita.dga import (
    DGAlgebra,
    DGAlgebraMap,
    dugger_shipley,
    enveloping,
    ground,
    homology_dga,
    matrix_algebra,
    opposite,
    product_algebra,
    ring_as_dga,
    tensor_dga,
    truncate_plus,
    truncated_polynomial,
    validate_dga,
)
from dgmorita.generators import random_matrix_dga, random_triangular_dga
from dgmorita.rings import GF, QQ, ZZ

Z = ZZ()


def test_dugger_shipley_is_valid():
    C = dugger_shipley()
    assert validate_dga(C)
    assert list(C.degrees) == [0, 1, 2, 3]
    # d(e) = 2, d(e^2) = 0, d(e^3) = 2 e^2
    assert C.d[0, 1] == 2 and C.d[2, 3] == 2 and C.d[1, 2] == 0


def test_bad_leibniz_is_reported():
    C = dugger_shipley()
    d = C.d.copy()
    d[1, 2] = 2  # d(e^2) = 2e contradicts (de)e - e(de) = 0
    rep = validate_dga(DGAlgebra(Z, C.degrees, C.mult, d, C.unit, check=False))
    assert not rep
    assert any(name in ("Leibniz", "d^2") for name, _ in rep.failures)
    with pytest.raises(ValueError, match="invalid DG algebra"):
        DGAlgebra(Z, C.degrees, C.mult, d, C.unit)


def test_non_associative_table_rejected():
    R = GF(2)
    # (e1 e1) e1 = e0 but e1 (e1 e1) = e1
    m = R.zeros((3, 3, 3))
    for i in range(3):
        m[0, i, i] = m[i, 0, i] = 1
    m[1, 1, 2] = 1
    m[1, 2, 1] = 1
    m[2, 1, 0] = 1
    with pytest.raises(ValueError, match="associative"):
        ring_as_dga(R, m.tolist())


def test_homology_dga_of_dugger_shipley():
    Hd, reps = homology_dga(dugger_shipley())
    assert Hd.ring.tag == "Fp:2"
    assert sorted(int(x) for x in Hd.degrees) == [0, 2]
    top = int(np.nonzero(Hd.degrees == 2)[0][0])
    assert Hd.ring.is_zero_array(Hd.mult[top, top])
    assert validate_dga(Hd)


def test_homology_dga_over_field_is_cohomology_ring():
    # F_2[e]/(e^4) with zero differential is its own homology
    A = truncated_polynomial(GF(2), 3, 2)
    Hd, _ = homology_dga(A)
    assert Hd.dim == 4 and validate_dga(Hd)
    assert sorted(int(x) for x in Hd.degrees) == [0, 2, 4, 6]


def test_truncation_legs():
    A = random_matrix_dga(GF(3), np.random.default_rng(1), spheres=(0,), disks=(0, 1))
    T = truncate_plus(A)
    assert validate_dga(T.Eplus)
    assert T.incl.validate()
    assert T.legs_quasi_iso() == (True, True)
    assert all(int(x) >= 0 for x in T.Eplus.degrees)


def test_standard_algebras_validate():
    for R in (Z, GF(5), QQ()):
        for A in (matrix_algebra(R, 2), product_algebra(R, 3), ground(R)):
            assert validate_dga(A)
    M = matrix_algebra(Z, 2)
    assert M.names == ["E11", "E12", "E21", "E22"]
    assert list(M.unit) == [1, 0, 0, 1]


def test_enveloping_and_tensor_validate():
    C = dugger_shipley()
    assert validate_dga(enveloping(C, C))
    T = tensor_dga(matrix_algebra(GF(3), 2), truncated_polynomial(GF(3), 2, 1))
    assert validate_dga(T) and T.dim == 12


def test_ring_as_dga():
    # Z[i] with i^2 = -1
    A = ring_as_dga(Z, [[[1, 0], [0, 1]], [[0, 1], [-1, 0]]])
    assert validate_dga(A) and list(A.unit) == [1, 0]


def test_algebra_map_checks():
    C = dugger_shipley()
    assert DGAlgebraMap.identity(C).validate()
    with pytest.raises(ValueError, match="invalid algebra map"):
        DGAlgebraMap(C, C, Z.scale(2, Z.eye(4)))


def _random_dga(p, seed):
    rng = np.random.default_rng(seed)
    if seed % 2:
        return random_triangular_dga(GF(p), rng)
    return random_matrix_dga(GF(p), rng, spheres=(0,), disks=(0,))


algebras = st.builds(_random_dga, st.sampled_from([2, 3]), st.integers(0, 10**5))


@given(algebras)
def test_random_algebras_are_valid(A):
    assert validate_dga(A)


@given(algebras)
def test_opposite_is_an_involution(A):
    B = opposite(opposite(A))
    assert validate_dga(opposite(A))
    assert A.ring.equal(B.mult, A.mult) and B.names == A.names


@given(algebras)
def test_homology_algebra_matches_complex_homology(A):
    Hd, reps = homology_dga(A)
    H = homology(A.complex)
    assert Hd.dim == sum(H.module(n).free_rank for n in H.nonzero_degrees())
    assert validate_dga(Hd)
    # the product of representatives is represented by the product in homology
    for i in range(Hd.dim):
        for j in range(Hd.dim):
            n = int(Hd.degrees[i] + Hd.degrees[j])
            prod = A.product(reps[:, i], reps[:, j])
            if n in H.nonzero_degrees():
                cols = [c for c in range(Hd.dim) if Hd.degrees[c] == n]
                rebuilt = A.ring.matmul(reps[:, cols], Hd.mult[i, j][cols])
                assert H.is_boundary(n, A.ring.sub(prod, rebuilt))


@given(algebras)
def test_enveloping_with_ground_keeps_the_carrier(A):
    E = enveloping(A, ground(A.ring))
    assert list(E.degrees) == list(A.degrees) and A.ring.equal(E.d, A.d)
    assert A.ring.equal(E.mult, A.mult)


def test_truncation_of_torsion_example_loses_degree_two_in_projection():
    # E_+ = C here, so the inclusion is the identity; H_2 is lost on the H_0 leg
    T = truncate_plus(dugger_shipley())
    assert T.legs_quasi_iso() == (True, False)
