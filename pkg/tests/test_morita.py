import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dgmorita.bicat import Bimodule, TwoCell, forget_left, odot, shift_bimodule, unit_cell
from dgmorita.complex import ChainComplex, homology
from dgmorita.dga import ground, matrix_algebra, product_algebra, truncate_plus, truncated_polynomial
from dgmorita.exactlin import FPModule, iso_test
from dgmorita.generators import random_cell_module, random_matrix_dga, random_twocell, right_ideal_module
from dgmorita.model import Window, cell_generators
from dgmorita.morita import (
    CERTIFIED,
    INCONCLUSIVE,
    REFUTED,
    DualPair,
    base_change_functors,
    canonical_dual_coev,
    canonical_dual_pair,
    check_dual_pair,
    dual_basis_retract,
    enrichment_transform,
    odot_detect_check,
    quillen_equiv_check,
    round_trip_check,
    standard_equivalence_report,
    tilting_pipeline,
    watts_consistency,
)
from dgmorita.rings import GF, ZZ

W = Window(-1, 3)


def left_factor(P, i):
    """The ``i``-th factor of a product algebra as a left module ``k -> P``."""
    R = P.ring
    left = R.zeros((P.dim, 1, 1))
    left[i, 0, 0] = 1
    return Bimodule(ground(R), P, ChainComplex(R, [0]), left, R.eye(1)[None], name=f"left{i}")


@pytest.mark.parametrize("R", [GF(5), ZZ()], ids=["F5", "Z"])
def test_row_module_is_tilting_for_matrix_algebra(R):
    S = matrix_algebra(R, 2)
    v = tilting_pipeline(S, right_ideal_module(S, [0, 1], name="row"), W)
    assert v.status == CERTIFIED and v.witnesses == {}
    Hd = homology(v.E.complex)
    assert Hd.iso_types() == {0: (1, ())}
    assert iso_test(Hd.module(0), FPModule.free(R, 1))
    assert round_trip_check(v, forget_left(unit_cell(v.E)))


def test_first_factor_is_refuted_with_missing_factor():
    P = product_algebra(GF(5), 2)
    v = tilting_pipeline(P, right_ideal_module(P, [0], name="first"), W)
    assert v.status == REFUTED
    assert v.witnesses["counit"]["missing"] == {"0": [["p2"]]}
    with pytest.raises(ValueError, match="certified"):
        round_trip_check(v, forget_left(unit_cell(v.E)))


def test_shifted_unit_is_tilting():
    S = matrix_algebra(GF(5), 2)
    v = tilting_pipeline(S, shift_bimodule(unit_cell(S), 1), W)
    assert v.certified and v.E.dim == 4


def test_narrow_window_is_inconclusive():
    R = ZZ()
    k = ground(R)
    M = Bimodule(k, k, ChainComplex(R, [0], None, R.array([[2]])), R.eye(1)[None], R.eye(1)[None])
    assert tilting_pipeline(k, M, Window(0, 3, cap=1)).status == INCONCLUSIVE


def test_canonical_dual_pair_of_row_module():
    S = matrix_algebra(GF(5), 2)
    P = canonical_dual_pair(right_ideal_module(S, [0, 1]))
    rep = check_dual_pair(P)
    assert rep.ok and rep.eta_iso and rep.eps_iso
    # doubling the counit breaks both triangles
    bad = check_dual_pair(DualPair(P.X, P.Y, P.eta, P.eps.scaled(2)), "homotopy")
    assert not bad and {f[0] for f in bad.failures} == {"triangle X", "triangle Y"}
    with pytest.raises(ValueError, match="frame mismatch"):
        check_dual_pair(DualPair(P.Y, P.X, P.eta, P.eps))
    with pytest.raises(ValueError, match="mode"):
        check_dual_pair(P, "loose")


def test_base_change_pair_satisfies_triangles():
    A = random_matrix_dga(GF(3), np.random.default_rng(1), spheres=(0,), disks=(1,))
    bc = base_change_functors(truncate_plus(A).incl)
    assert check_dual_pair(bc.pair)


def test_base_change_along_truncation_is_an_equivalence():
    A = random_matrix_dga(GF(3), np.random.default_rng(1), spheres=(0,), disks=(1,))
    f = truncate_plus(A).incl
    k = ground(A.ring)
    sa = [cell_generators(f.source, k, n, "sphere") for n in (0, 1)]
    sb = [cell_generators(f.target, k, n, "sphere") for n in (0, 1)]
    r = quillen_equiv_check(f, sa, sb, W)
    assert r.precondition and r.ok
    assert len(r.units) == len(r.counits) == 2


def test_restriction_detects_quasi_isos():
    rng = np.random.default_rng(3)
    A = random_matrix_dga(GF(3), rng, spheres=(0,), disks=(1,))
    bc = base_change_functors(truncate_plus(A).incl)
    M = random_cell_module(A, rng, 2)
    assert bc.reflects_quasi_iso(TwoCell.identity(M)) == (True, True)
    assert bc.reflects_quasi_iso(TwoCell.zero(M, M)) == (False, False)


def test_dual_basis_retract_of_row_module():
    S = matrix_algebra(GF(5), 2)
    rd = dual_basis_retract(right_ideal_module(S, [0, 1]))
    assert rd.method == "dual basis" and rd.verify()
    assert rd.free.n == 8  # row (x)_k S


def test_dual_coevaluation_statuses():
    S = truncated_polynomial(GF(2), 1, 1)
    M = random_cell_module(S, np.random.default_rng(0), 3)
    assert canonical_dual_coev(M, W).status == "dualizable"
    R = ZZ()
    k = ground(R)
    torsion = Bimodule(k, k, ChainComplex(R, [0], None, R.array([[2]])), R.eye(1)[None], R.eye(1)[None])
    assert canonical_dual_coev(torsion, Window(0, 3, cap=1)).status == "inconclusive window"
    assert canonical_dual_coev(torsion, W).status == "dualizable"


def test_first_factor_does_not_detect():
    P = product_algebra(GF(5), 2)
    first = right_ideal_module(P, [0], name="first")
    second = right_ideal_module(P, [1], name="second")
    Z = left_factor(P, 1)
    assert odot_detect_check(first, Z, W)
    assert not odot_detect_check([first, second], Z, W)


def _frame(seed):
    rng = np.random.default_rng(seed)
    R = GF(2)
    B = truncated_polynomial(R, 1, int(rng.integers(0, 3)))
    Q = random_cell_module(ground(R), rng, 1, B=B)
    return Q, *(random_cell_module(B, rng, int(rng.integers(1, 3))) for _ in range(3))


def test_enrichment_on_sphere_frames():
    S = matrix_algebra(GF(5), 2)
    rep = enrichment_transform(right_ideal_module(S, [0, 1]), *ground_frames(S))
    assert rep.ok and rep.witnesses == []
    assert not enrichment_transform(right_ideal_module(S, [0, 1]), *ground_frames(S), perturb="sign")


def ground_frames(S):
    k = ground(S.ring)
    return [cell_generators(k, k, n, "sphere") for n in (0, 1, 0)]


@settings(max_examples=5)
@given(st.integers(0, 10**4))
def test_enrichment_squares_commute(seed):
    Q, T, U, V = _frame(seed)
    rep = enrichment_transform(Q, T, U, V)
    assert rep.ok, rep.witnesses
    bad = enrichment_transform(Q, T, U, V, perturb="zero")
    assert not bad.square and bad.unit


def test_enrichment_rejects_bad_frames():
    Q, T, U, V = _frame(0)
    with pytest.raises(ValueError, match="frame mismatch"):
        enrichment_transform(Q, Q, U, V)
    with pytest.raises(ValueError, match="perturbation"):
        enrichment_transform(Q, T, U, V, perturb="twist")


def test_watts_consistency():
    S = matrix_algebra(GF(5), 2)
    row = right_ideal_module(S, [0, 1])
    k = ground(S.ring)
    spheres = [cell_generators(k, k, n, "sphere") for n in (0, 1)]
    good = [(M, odot(M, forget_left(unit_cell(k)))) for M in spheres]
    assert watts_consistency(good, forget_left(unit_cell(k)), W)
    wrong = [(spheres[0], odot(spheres[1], unit_cell(k)))]
    rep = watts_consistency(wrong, unit_cell(k), W)
    assert not rep and rep.samples[0]["mismatch_degrees"] == [0, 1]
    out = standard_equivalence_report(unit_cell(k), [ground_frames(S)], good, W)
    assert out["ok"]
