import numpy as np
import pytest

from mubforge.catalogue import fourier, tao_s6
from mubforge.core import (
    DEFAULT_TOL,
    InputError,
    ShapeError,
    ToleranceProfile,
    canonical_phase,
    haar_unitary,
    is_hadamard,
    operator_schmidt_rank,
    product_vector_test,
    purity,
    realign,
)


def test_is_hadamard_f2():
    F2 = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert is_hadamard(F2).is_hadamard


def test_is_hadamard_s6():
    rep = is_hadamard(tao_s6().matrix)
    assert rep.is_hadamard
    assert rep.unitarity_deviation < 1e-12


def test_is_hadamard_identity_fails():
    rep = is_hadamard(np.eye(3))
    assert not rep.is_hadamard
    assert rep.modulus_deviation > 0.4


def test_is_hadamard_rejects_nonsquare():
    with pytest.raises(ShapeError):
        is_hadamard(np.ones((2, 3)))


def test_purity_product_state():
    v = np.zeros(4)
    v[0] = 1.0
    assert purity(v, 2, 2) == pytest.approx(1.0)


def test_purity_bell():
    v = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert purity(v, 2, 2) == pytest.approx(0.5)


def test_purity_ghz3():
    v = np.zeros(9)
    v[[0, 4, 8]] = 1 / np.sqrt(3)
    assert purity(v, 3, 3) == pytest.approx(1 / 3)


def test_purity_shape_error():
    with pytest.raises(ShapeError):
        purity(np.ones(5), 2, 3)


def test_purity_local_unitary_invariant():
    rng = np.random.default_rng(1)
    for _ in range(10):
        v = rng.normal(size=6) + 1j * rng.normal(size=6)
        v /= np.linalg.norm(v)
        U = np.kron(haar_unitary(2, rng), haar_unitary(3, rng))
        assert abs(purity(U @ v, 2, 3) - purity(v, 2, 3)) < 1e-10


def test_schmidt_rank_product_operator():
    F2 = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    F3 = fourier(3).matrix
    assert operator_schmidt_rank(np.kron(F2, F3), 2, 3) == 1


def test_schmidt_rank_haar_generic():
    rng = np.random.default_rng(5)
    for _ in range(5):
        assert operator_schmidt_rank(haar_unitary(6, rng), 2, 3) == 4


def test_schmidt_rank_s6():
    # realignment singular values of the isolated matrix: (1.6054, 1.1927, 1, 1)
    S6 = tao_s6().matrix
    assert operator_schmidt_rank(S6, 2, 3) == 4
    s = np.linalg.svd(realign(S6, 2, 3), compute_uv=False)
    assert s[0] == pytest.approx(1.6054128, abs=1e-6)


def test_schmidt_rank_kron_unitaries_rank_one():
    rng = np.random.default_rng(3)
    for d1, d2 in [(2, 2), (2, 3), (3, 4)]:
        A, B = haar_unitary(d1, rng), haar_unitary(d2, rng)
        assert operator_schmidt_rank(np.kron(A, B), d1, d2) == 1


def test_product_vector_test():
    v01 = np.zeros(6)
    v01[1] = 1.0
    assert product_vector_test(v01, 2, 3)
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert not product_vector_test(bell, 2, 2)


def test_product_vector_f6_columns_crt():
    F6 = fourier(6).matrix
    perm = [(j % 2) * 3 + (j % 3) for j in range(6)]
    M = np.eye(6)[perm] @ F6
    for k in range(6):
        assert product_vector_test(M[:, k], 2, 3)


def test_canonical_phase():
    v = np.array([0, -1j, 1.0]) / np.sqrt(2)
    w = canonical_phase(v)
    assert w[1].real > 0 and abs(w[1].imag) < 1e-15
    with pytest.raises(InputError):
        canonical_phase(np.zeros(3))


def test_tolerance_profile_validation():
    with pytest.raises(InputError):
        ToleranceProfile(eps_unitary=0.5)
    assert DEFAULT_TOL.eps_mu == 1e-10


def test_hadamard_product_pair_not_closed():
    # is_hadamard(H), is_hadamard(K) do not imply is_hadamard(H^dag K) ...
    F6 = fourier(6).matrix
    S6 = tao_s6().matrix
    assert not is_hadamard(F6.conj().T @ S6).is_hadamard
    # ... but bases returned as MU do satisfy it (Hadamard-pair anchor)
    from mubforge.constructions import construct_complete

    mubs = construct_complete("wootters_fields", 3)
    H1, H2 = mubs.bases[1], mubs.bases[2]
    assert is_hadamard(H1.conj().T @ H2).is_hadamard
