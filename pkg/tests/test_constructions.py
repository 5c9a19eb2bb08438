import numpy as np
import pytest

from mubforge.algebra import mols_generate
from mubforge.analysis import check_mu_set, entanglement_content, welch_and_design_check
from mubforge.catalogue import fourier
from mubforge.constructions import (
    MUBSet,
    applicable_methods,
    approx_mub,
    complete_missing_basis,
    construct_complete,
    heisenberg_weyl_classes,
    latin_square_mubs,
    product_family_d6,
    tensor_product_mubs,
    weighted_design,
)
from mubforge.core import ConstructionError, DomainError, is_hadamard, purity


def test_ivanovic_3():
    mubs = construct_complete("ivanovic", 3)
    assert len(mubs) == 4
    assert check_mu_set(mubs.bases).max_mu_deviation < 1e-10


def test_ivanovic_rejects_2_and_composite():
    with pytest.raises(ConstructionError):
        construct_complete("ivanovic", 2)
    with pytest.raises(ConstructionError):
        construct_complete("ivanovic", 6)


def test_klappenecker_2_is_pauli_triple():
    mubs = construct_complete("klappenecker_rotteler", 2)
    assert len(mubs) == 3
    _, pauli = heisenberg_weyl_classes(2)
    # basis-wise unitary relabeling: |B^dag P| is a permutation matrix
    matched = set()
    for B in mubs.bases:
        for i, P in enumerate(pauli):
            M = np.abs(B.conj().T @ P)
            if i not in matched and np.abs(np.sort(M.ravel())[::-1][:2] - 1).max() < 1e-10:
                ones = np.isclose(M, 1.0, atol=1e-10)
                if ones.sum() == 2 and (ones.sum(0) <= 1).all() and (ones.sum(1) <= 1).all():
                    matched.add(i)
                    break
    assert len(matched) == 3


def test_wootters_fields_9():
    mubs = construct_complete("wootters_fields", 9)
    assert len(mubs) == 10
    rep = check_mu_set(mubs.bases)
    assert rep.max_mu_deviation < 1e-10
    assert rep.max_orth_deviation < 1e-10


def test_alltop_5_vs_ivanovic_5():
    a = construct_complete("alltop", 5)
    b = construct_complete("ivanovic", 5)
    assert len(a) == len(b) == 6
    assert check_mu_set(a.bases).max_mu_deviation < 1e-10
    assert check_mu_set(b.bases).max_mu_deviation < 1e-10


def test_alltop_rejects_small_characteristic():
    for d in [2, 3, 4, 9]:
        with pytest.raises(ConstructionError):
            construct_complete("alltop", d)


def test_wootters_rejects_even():
    with pytest.raises(ConstructionError):
        construct_complete("wootters_fields", 8)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_heisenberg_weyl_classes(p):
    classes, eigenbases = heisenberg_weyl_classes(p)
    assert len(classes) == p + 1
    seen = set()
    for cls in classes:
        for U in cls.members:
            for V in cls.members:
                assert np.abs(U @ V - V @ U).max() < 1e-12
        for U in cls.members:
            key = tuple(np.round(U.ravel(), 8))
            seen.add(key)
    # cross-class Hilbert-Schmidt orthogonality, identity excluded
    for a in range(len(classes)):
        for b in range(len(classes)):
            if a == b:
                continue
            for U in classes[a].members[1:]:
                for V in classes[b].members[1:]:
                    assert abs(np.trace(U.conj().T @ V)) < 1e-12
    rep = check_mu_set(eigenbases)
    assert rep.max_mu_deviation < 1e-10


def test_hw_commutator_relation():
    from mubforge.constructions import shift_and_phase

    for d in [2, 3, 5, 6]:
        X, Z = shift_and_phase(d)
        w = np.exp(2j * np.pi / d)
        assert np.abs(Z @ X - w * X @ Z).max() < 1e-12


def test_tensor_product_d6():
    s2 = construct_complete("heisenberg_weyl", 2)
    s3 = construct_complete("heisenberg_weyl", 3)
    mubs = tensor_product_mubs([s2, s3])
    assert mubs.dim == 6 and len(mubs) == 3
    assert check_mu_set(mubs.bases).max_mu_deviation < 1e-10


def test_tensor_product_d12():
    s4 = construct_complete("klappenecker_rotteler", 4)
    s3 = construct_complete("wootters_fields", 3)
    mubs = tensor_product_mubs([s4, s3])
    assert mubs.dim == 12 and len(mubs) == 4  # min(5, 4)


def test_tensor_product_d4_bound():
    s2 = construct_complete("klappenecker_rotteler", 2)
    mubs = tensor_product_mubs([s2, s2])
    assert mubs.dim == 4 and len(mubs) == 3


def test_tensor_product_preserves_mu_residual():
    s2 = construct_complete("heisenberg_weyl", 2)
    s3 = construct_complete("heisenberg_weyl", 3)
    r_in = max(check_mu_set(s.bases).max_mu_deviation for s in (s2, s3))
    r_out = check_mu_set(tensor_product_mubs([s2, s3]).bases).max_mu_deviation
    assert r_out <= 10 * max(r_in, 1e-15)


def test_latin_square_mubs_d9():
    mols, _, _ = mols_generate(3)
    mubs = latin_square_mubs(3, mols, fourier(3).matrix)
    assert mubs.dim == 9 and len(mubs) == 4  # mu + 2
    assert check_mu_set(mubs.bases).max_mu_deviation < 1e-10
    # states from genuinely Latin squares are maximally entangled across 3x3
    for B in mubs.bases[:2]:
        for k in range(9):
            assert purity(B[:, k], 3, 3) == pytest.approx(1 / 3, abs=1e-10)


def test_latin_square_mubs_d4_augmentation_only():
    mubs = latin_square_mubs(2, [], fourier(2).matrix)
    assert mubs.dim == 4 and len(mubs) == 2
    assert check_mu_set(mubs.bases).max_mu_deviation < 1e-10


def test_weighted_design_d6():
    mubs = weighted_design(6)
    assert len(mubs) == 8
    assert mubs.weights[0] == pytest.approx(1 / 42)
    assert mubs.weights[1] == pytest.approx(1 / 49)
    assert sum(mubs.weights) == pytest.approx(1 / 6, abs=1e-12)
    rep = welch_and_design_check(mubs.bases, mubs.weights)
    assert rep.two_design_deviation < 1e-9
    # true overlaps, derived numerically: 1/36 when v = v', 7/36 otherwise
    vals = set()
    for i in range(1, 8):
        for j in range(i + 1, 8):
            G = np.abs(mubs.bases[i].conj().T @ mubs.bases[j]) ** 2
            vals |= {round(float(x), 9) for x in G.ravel()}
    assert vals == {round(1 / 36, 9), round(7 / 36, 9)}


def test_weighted_design_d4():
    mubs = weighted_design(4)
    assert len(mubs) == 6
    rep = welch_and_design_check(mubs.bases, mubs.weights)
    assert rep.two_design_deviation < 1e-9


def test_weighted_design_d8_field_trace_path():
    # d + 1 = 9 = 3^2 exercises the nontrivial field-trace branch
    mubs = weighted_design(8)
    assert len(mubs) == 10
    rep = welch_and_design_check(mubs.bases, mubs.weights)
    assert rep.two_design_deviation < 1e-9


def test_weighted_design_unsupported():
    with pytest.raises(ConstructionError):
        weighted_design(5)  # 6 is not a prime power


def test_approx_mub_d6():
    mubs, mx, bound = approx_mub(6)
    assert mubs.params["p"] == 7
    assert len(mubs) == 7
    assert bound == pytest.approx(np.sqrt(7) / 6)
    assert mx <= bound + 1e-12
    assert mx == pytest.approx(7 / 36, abs=1e-10)  # derived: worst case at v = v'


def test_approx_mub_d2():
    mubs, mx, bound = approx_mub(2, 3)
    rep = check_mu_set(mubs.bases)
    assert rep.max_orth_deviation < 1e-12


@pytest.mark.parametrize("which", ["P0", "P1", "P2", "P3", "T0", "T1"])
def test_product_families(which):
    mubs = product_family_d6(which)
    expected = 3 if which.startswith("T") else 2
    assert len(mubs) == expected
    assert check_mu_set(mubs.bases).max_mu_deviation < 1e-10
    from mubforge.core import product_vector_test

    for B in mubs.bases:
        for k in range(6):
            assert product_vector_test(B[:, k], 2, 3)


def test_product_family_p1_reduces_to_p0():
    p1 = product_family_d6("P1", {"xi": 0.0, "eta": 0.0})
    p0 = product_family_d6("P0")
    for A, B in zip(p1.bases, p0.bases):
        assert np.abs(A - B).max() < 1e-12


def test_product_family_t0_is_hw_product_triple():
    mubs = product_family_d6("T0")
    assert check_mu_set(mubs.bases).f_value < 1e-18


def test_product_family_domain_errors():
    with pytest.raises(DomainError):
        product_family_d6("P3", {"sigma": 0.0})
    with pytest.raises(DomainError):
        product_family_d6("P1", {"xi": 7.0})


def test_applicable_methods():
    assert applicable_methods(2) == ["klappenecker_rotteler", "heisenberg_weyl"]
    assert "alltop" in applicable_methods(5)
    assert applicable_methods(6) == []


def test_equivalence2_pair_products_are_hadamard():
    for method, d in [("ivanovic", 3), ("klappenecker_rotteler", 4), ("wootters_fields", 9)]:
        mubs = construct_complete(method, d)
        H = mubs.bases
        for i in range(1, len(H)):
            for j in range(i + 1, len(H)):
                assert is_hadamard(H[i].conj().T @ H[j]).is_hadamard


@pytest.mark.parametrize("method,d", [("heisenberg_weyl", 2), ("ivanovic", 3), ("klappenecker_rotteler", 4), ("ivanovic", 5)])
def test_completion_property(method, d):
    mubs = construct_complete(method, d)
    partial = mubs.bases[:-1]
    rng = np.random.default_rng(11)
    B = complete_missing_basis(partial, rng)
    for A in partial:
        assert np.abs(np.abs(A.conj().T @ B) ** 2 - 1 / d).max() < 1e-9


def test_entanglement_content_complete_sets():
    m4 = construct_complete("klappenecker_rotteler", 4)
    total, verdicts = entanglement_content(m4.bases, 2, 2)
    assert total == pytest.approx(16.0, abs=1e-9)
    m9 = construct_complete("wootters_fields", 9)
    total, _ = entanglement_content(m9.bases, 3, 3)
    assert total == pytest.approx(54.0, abs=1e-9)


def test_entanglement_content_product_triple_saturates():
    mubs = product_family_d6("T0")
    total, verdicts = entanglement_content(mubs.bases, 2, 3)
    assert total == pytest.approx(18.0, abs=1e-9)  # (d1^2 + mu - 1) d2 with mu = 3
    assert verdicts["upper_bound_slack"] == pytest.approx(0.0, abs=1e-9)


def test_mubset_weight_validation():
    from mubforge.core import NumericalError

    mubs = weighted_design(6)
    bad = MUBSet(6, mubs.bases, "weighted_design", weights=[1.0] * 8)
    with pytest.raises(NumericalError):
        bad.validate(expect_mu=False)
