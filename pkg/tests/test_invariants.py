"""Cross-module invariants that do not fit a single operation."""

import numpy as np
import pytest

from mubforge.analysis import check_mu_set
from mubforge.catalogue import dita_slice, fourier, karlsson_k6_3, szollosi_x6_2
from mubforge.constructions import applicable_methods, construct_complete
from mubforge.core import DomainError, is_hadamard
from mubforge.search import SearchConfig, group_into_bases, mu_vectors_to_pair


@pytest.mark.parametrize("d", [2, 3, 4, 5, 7, 8, 9, 16])
def test_all_constructed_bases_orthonormal(d):
    for method in applicable_methods(d):
        mubs = construct_complete(method, d)
        rep = check_mu_set(mubs.bases)
        assert rep.max_orth_deviation < 1e-10


def test_karlsson_hadamard_sample_100():
    rng = np.random.default_rng(17)
    for _ in range(100):
        th, ph = rng.uniform(0, np.pi, 2)
        lam = rng.uniform(0, 2 * np.pi)
        assert is_hadamard(karlsson_k6_3(th, ph, lam).matrix).is_hadamard


def test_szollosi_and_dita_sample():
    rng = np.random.default_rng(18)
    done = 0
    while done < 100:
        alpha = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        try:
            H = szollosi_x6_2(alpha)
        except DomainError:
            continue
        done += 1
        assert is_hadamard(H.matrix).is_hadamard
    for lam in rng.uniform(0, 2 * np.pi, 100):
        assert is_hadamard(dita_slice(lam).matrix).is_hadamard


def test_dita_counts_recorded_per_sample():
    """The MU-vector count along the Dita slice is recorded per sampled
    parameter without asserting breakpoint locations (observed plateau 120)."""
    counts = {}
    for lam in (0.0, 1.0):
        sol = mu_vectors_to_pair(dita_slice(lam).matrix, SearchConfig(seed=23, restarts=30_000))
        counts[lam] = sol.count
    assert counts[0.0] == 120
    assert all(c in (48, 72, 120) for c in counts.values())


def test_circulant_structure_of_fourier_pair_solutions_d6():
    """Solutions MU to {I, F6} are biunimodular, so each generates a circulant
    Hadamard MU to the pair; the 16 bases are permuted among themselves by the
    coordinate shift, 8 of them being shift-closed (circulant up to column
    phases) and 8 pairing up."""
    F6 = fourier(6).matrix
    sol = mu_vectors_to_pair(F6, SearchConfig(seed=2, restarts=15_000))
    for v in sol.vectors:
        assert np.abs(np.abs(v) - 1 / np.sqrt(6)).max() < 1e-10
        assert np.abs(np.abs(F6.conj().T @ v) - 1 / np.sqrt(6)).max() < 1e-10
        C = np.empty((6, 6), dtype=complex)
        for j in range(6):
            for k in range(6):
                C[j, k] = v[(j - k) % 6] * np.sqrt(6)
        C /= np.sqrt(6)
        assert is_hadamard(C).is_hadamard
        assert np.abs(np.abs(F6.conj().T @ C) - 1 / np.sqrt(6)).max() < 1e-9

    def same_basis(A, B):
        ca = [A[:, k] * np.conj(A[0, k]) / np.abs(A[0, k]) for k in range(6)]
        cb = [B[:, k] * np.conj(B[0, k]) / np.abs(B[0, k]) for k in range(6)]
        return all(any(np.abs(u - w).max() < 1e-7 for w in cb) for u in ca)

    bases = group_into_bases(sol)
    assert len(bases) == 16
    closed = 0
    for B in bases:
        SB = np.roll(B, 1, axis=0)
        partners = [A for A in bases if same_basis(SB, A)]
        assert len(partners) == 1  # the set of bases is shift-closed
        if same_basis(SB, B):
            closed += 1
    assert closed == 8
