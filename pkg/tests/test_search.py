import numpy as np
import pytest

from mubforge.catalogue import bjorck_c6, fourier, tao_s6
from mubforge.constructions import construct_complete
from mubforge.core import InputError
from mubforge.search import (
    ConstellationSpec,
    SearchConfig,
    constellation_search,
    extension_probe,
    full_set_param_count,
    group_into_bases,
    mu_vectors_to_bases,
    mu_vectors_to_pair,
)


def test_f2_two_vectors():
    cfg = SearchConfig(seed=1, restarts=200)
    sol = mu_vectors_to_pair(fourier(2).matrix, cfg)
    assert sol.count == 2
    # the sigma_y eigenvectors (1, +-i)/sqrt(2)
    expect = {1j, -1j}
    got = {complex(np.round(v[1] / v[0], 9)) for v in sol.vectors}
    assert got == expect
    assert sol.residuals.max() < 1e-11


def test_f3_and_f5_counts_and_circulant_bases():
    # any basis MU to {I, F_d} is circulant up to column order
    for d, count in [(3, 6), (5, 20)]:
        cfg = SearchConfig(seed=3, restarts=3000)
        sol = mu_vectors_to_pair(fourier(d).matrix, cfg)
        assert sol.count == count
        bases = group_into_bases(sol)
        assert len(bases) > 0
        for B in bases:
            cols = [B[:, k] * np.conj(B[0, k]) / abs(B[0, k]) for k in range(d)]
            for k in range(d):
                w = np.roll(B[:, k], 1)
                w = w * np.conj(w[0]) / abs(w[0])
                assert any(np.abs(u - w).max() < 1e-8 for u in cols)


def test_f6_small_run_finds_48():
    cfg = SearchConfig(seed=7, restarts=20000)
    sol = mu_vectors_to_pair(fourier(6).matrix, cfg)
    assert sol.count == 48
    assert sol.distinct == 48
    assert not sol.continuum_detected
    assert (sol.multiplicities == 1).all()
    bases = group_into_bases(sol)
    assert len(bases) == 16


def test_s6_small_run_finds_90_no_bases():
    cfg = SearchConfig(seed=7, restarts=20000)
    sol = mu_vectors_to_pair(tao_s6().matrix, cfg)
    assert sol.count == 90
    assert len(group_into_bases(sol)) == 0


def test_c6_multiplicity_structure():
    """{I, C6}: 54 distinct solutions, two of which are rank-deficient fold
    points of multiplicity two (the flat and alternating Fourier vectors)."""
    cfg = SearchConfig(seed=11, restarts=30000)
    sol = mu_vectors_to_pair(bjorck_c6().matrix, cfg)
    assert sol.distinct == 54
    assert sorted(sol.multiplicities)[-2:] == [2, 2]
    assert sol.count == 56


def test_determinism_same_seed():
    cfg = SearchConfig(seed=42, restarts=3000)
    a = mu_vectors_to_pair(fourier(3).matrix, cfg)
    b = mu_vectors_to_pair(fourier(3).matrix, cfg)
    assert a.count == b.count
    assert np.array_equal(a.vectors, b.vectors)


def test_determinism_across_workers(monkeypatch):
    cfg = SearchConfig(seed=42, restarts=4000)
    base = mu_vectors_to_pair(fourier(3).matrix, cfg)
    monkeypatch.setenv("MUBFORGE_THREADS", "3")
    multi = mu_vectors_to_pair(fourier(3).matrix, cfg)
    assert base.count == multi.count
    assert np.allclose(base.vectors, multi.vectors, atol=1e-9)


def test_continuum_detector_f4():
    # d divisible by a square: infinitely many biunimodular sequences
    cfg = SearchConfig(seed=5, restarts=4000)
    sol = mu_vectors_to_pair(fourier(4).matrix, cfg)
    assert sol.continuum_detected


@pytest.mark.parametrize("d,n", [(8, 6000), (9, 8000)])
def test_continuum_detector_square_divisible(d, n):
    sol = mu_vectors_to_pair(fourier(d).matrix, SearchConfig(seed=3, restarts=n))
    assert sol.continuum_detected


def test_rejects_non_hadamard():
    cfg = SearchConfig(seed=0, restarts=10)
    with pytest.raises(InputError):
        mu_vectors_to_pair(np.eye(4), cfg)


def test_vectors_recheck_at_tight_tolerance():
    cfg = SearchConfig(seed=9, restarts=5000)
    sol = mu_vectors_to_pair(fourier(6).matrix, cfg)
    C = np.concatenate([fourier(6).matrix.conj().T])
    for v in sol.vectors:
        r = np.abs(np.abs(C @ v) ** 2 - 1 / 6).max()
        assert r < 1e-10
        assert np.abs(np.abs(v) - 1 / np.sqrt(6)).max() < 1e-10


def test_extension_probe_f6_triples_no_quadruple():
    cfg = SearchConfig(seed=3, restarts=15000)
    F6 = fourier(6).matrix
    sol = mu_vectors_to_pair(F6, cfg)
    bases = group_into_bases(sol)
    assert len(bases) == 16
    triple = [np.eye(6, dtype=complex), F6, bases[0]]
    probe = extension_probe(triple, SearchConfig(seed=4, restarts=8000))
    assert probe.extra_vectors == 0
    assert not probe.extends_to_basis


def test_extension_probe_pair_has_vectors():
    # any MU pair admits at least one further MU vector
    for d, method in [(2, "heisenberg_weyl"), (3, "ivanovic"), (5, "ivanovic")]:
        mubs = construct_complete(method, d)
        probe = extension_probe(mubs.bases[:2], SearchConfig(seed=6, restarts=500))
        assert probe.extra_vectors >= 1


def test_extension_probe_rejects_non_mu():
    bad = [np.eye(3, dtype=complex), np.eye(3, dtype=complex)]
    with pytest.raises(InputError):
        extension_probe(bad, SearchConfig(seed=0, restarts=10))


def test_param_counts():
    assert full_set_param_count(6, 4) == 70
    spec = ConstellationSpec(6, (5, 3, 3, 1))
    assert spec.param_count == 30
    assert ConstellationSpec(6, (5, 5, 5, 5)).param_count == 70


def test_constellation_validation():
    with pytest.raises(InputError):
        ConstellationSpec(6, ())
    with pytest.raises(InputError):
        ConstellationSpec(6, (5,))
    with pytest.raises(InputError):
        ConstellationSpec(6, (7, 1))


def test_constellation_d5_all_found():
    # {4,4,4,4}_5 exists (complete set minus nothing at d = 5)
    spec = ConstellationSpec(5, (4, 4, 4, 4))
    res = constellation_search(spec, SearchConfig(seed=2, restarts=30))
    assert res.found
    assert res.best_residual < 1e-16


def test_constellation_easy_cell_d6():
    spec = ConstellationSpec(6, (5, 3, 3, 1))
    res = constellation_search(spec, SearchConfig(seed=2, restarts=20))
    assert res.found
    assert res.successes >= 15  # reference success rate 99.42%


def test_constellation_impossible_cell_d6():
    spec = ConstellationSpec(6, (5, 5, 5, 1))
    res = constellation_search(spec, SearchConfig(seed=2, restarts=25))
    assert not res.found
    assert res.best_residual > 1e-8
