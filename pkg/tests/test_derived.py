from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dgmorita.bicat import Bimodule, forget_left, unit_cell
from dgmorita.complex import ChainComplex, homology
from dgmorita.dga import dugger_shipley, ground, matrix_algebra
from dgmorita.derived import derived_tensor, end_dga, ext, formality_zigzag, replace_if_needed
from dgmorita.exactlin import FPModule, iso_test
from dgmorita.generators import random_matrix_dga, right_ideal_module
from dgmorita.model import Window
from dgmorita.rings import GF, ZZ

Z = ZZ()
W = Window(-2, 3)


def cyclic(a):
    k = ground(Z)
    C = ChainComplex(Z, [0], None, Z.array([[a]]))
    return Bimodule(k, k, C, Z.eye(1)[None], Z.eye(1)[None], name=f"Z/{a}")


def free_z():
    k = ground(Z)
    return Bimodule(k, k, ChainComplex(Z, [0]), Z.eye(1)[None], Z.eye(1)[None], name="Z")


def expected(g):
    return (0, (g,) if g > 1 else ())


def test_tor_of_two_copies_of_z_mod_2():
    v = derived_tensor(cyclic(2), cyclic(2), W)
    assert v.full
    assert v.certified_homology() == {0: (0, (2,)), 1: (0, (2,))}


def test_ext_of_z_mod_2_into_z():
    # Hom(Z/2, Z) = 0 and Ext^1 = Z/2 sitting in degree -1
    v = ext(cyclic(2), free_z(), W)
    assert v.certified_homology() == {-1: (0, (2,))}


@given(st.integers(1, 12), st.integers(1, 12))
def test_tor_of_cyclic_groups_is_gcd(a, b):
    g = gcd(a, b)
    H = derived_tensor(cyclic(a), cyclic(b), W).homology()
    for n in (0, 1):
        assert H.module(n).iso_type == expected(g)
    assert set(H.nonzero_degrees()) <= {0, 1}


@given(st.integers(1, 12), st.integers(1, 12))
def test_ext_of_cyclic_groups_is_gcd(a, b):
    g = gcd(a, b)
    H = ext(cyclic(a), cyclic(b), W).homology()
    for n in (0, -1):
        assert H.module(n).iso_type == expected(g)


def test_free_inputs_skip_replacement():
    S = matrix_algebra(GF(5), 2)
    U = forget_left(unit_cell(S))
    U.free_right = [(S.unit, 0)]
    Q, q, cert = replace_if_needed(U, W)
    assert cert.full and q.is_iso()
    row = right_ideal_module(S, [0, 1])
    Q, q, cert = replace_if_needed(row, W)
    assert Q is row and getattr(row, "retract_of_free", False)


def test_end_of_row_module_is_ground_field():
    R = GF(5)
    S = matrix_algebra(R, 2)
    e = end_dga(right_ideal_module(S, [0, 1]), W)
    Hd = homology(e.algebra.complex)
    assert Hd.iso_types() == {0: (1, ())}
    assert iso_test(Hd.module(0), FPModule.free(R, 1))


def test_end_of_free_module_recovers_algebra():
    C = dugger_shipley()
    e = end_dga(unit_cell(C))
    assert homology(e.algebra.complex).iso_types() == homology(C.complex).iso_types()


def test_formality_verdicts():
    assert formality_zigzag(dugger_shipley()).status == "criterion inapplicable"
    v = formality_zigzag(random_matrix_dga(GF(3), np.random.default_rng(7), spheres=(0,), disks=(0, 1)))
    assert v.formal and v.legs == (True, True)


def test_partial_certificate_limits_validity():
    # a capped replacement only certifies the low end of the window
    v = derived_tensor(cyclic(2), cyclic(2), Window(0, 3, cap=1))
    assert not v.full
    assert not v.covers(5)


@given(st.sampled_from([2, 3]), st.integers(0, 10**5))
def test_random_zero_concentrated_algebras_are_formal(p, seed):
    A = random_matrix_dga(GF(p), np.random.default_rng(seed), spheres=(0,))
    v = formality_zigzag(A)
    assert v.homology_degrees == [0]
    assert v.formal
