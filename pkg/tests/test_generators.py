import numpy as np
import pytest
from hypothesis import given, strategies as st

from dgmorita.complex import ChainComplex, homology, is_quasi_iso
from dgmorita.dga import matrix_algebra, truncated_polynomial, validate_dga
from dgmorita.generators import (
    end_algebra,
    random_cell_module,
    random_complex,
    random_quasi_iso_pair,
    random_twocell,
    right_ideal_module,
)
from dgmorita.rings import GF, ZZ

seeds = st.integers(0, 10**6)


def test_end_algebra_of_disk_is_acyclic():
    R = ZZ()
    d = R.zeros((2, 2))
    d[0, 1] = 1
    E = end_algebra(ChainComplex(R, [0, 1], d))
    assert validate_dga(E) and E.dim == 4
    assert homology(E.complex).is_acyclic()
    assert end_algebra(ChainComplex(R, [0, 1], d), upper=True).dim == 3


def test_right_ideal_must_be_closed():
    S = matrix_algebra(GF(3), 2)
    assert right_ideal_module(S, [2, 3]).validate()
    with pytest.raises(ValueError):
        right_ideal_module(S, [0])  # E11 alone is not a right ideal


@given(st.sampled_from([2, 3, 5]), seeds, st.lists(st.integers(-2, 2), max_size=3), st.lists(st.integers(-1, 2), max_size=2))
def test_random_complex_has_prescribed_homology(p, seed, spheres, disks):
    R = GF(p)
    C = random_complex(R, np.random.default_rng(seed), spheres, disks)
    H = homology(C)
    want = {n: spheres.count(n) for n in set(spheres)}
    assert {n: H.module(n).free_rank for n in H.nonzero_degrees()} == want


@given(seeds)
def test_random_quasi_iso_pairs(seed):
    X, Y, f = random_quasi_iso_pair(GF(3), np.random.default_rng(seed), spheres=(0, 1))
    assert f.validate() and is_quasi_iso(f.chain_map)


@given(seeds)
def test_random_cell_modules_and_cells(seed):
    rng = np.random.default_rng(seed)
    A = truncated_polynomial(GF(2), 2, 1)
    M = random_cell_module(A, rng, 3)
    assert M.validate() and M.cell.check_triangular()
    f = random_twocell(M, M, rng)
    assert f.validate()
