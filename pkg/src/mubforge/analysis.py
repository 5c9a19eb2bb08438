"""Verification stack: MU conditions, Welch/2-design identities, entanglement
content, witness values, QRAC measure, Fourier linear constraints, h0."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    InputError,
    ShapeError,
    ToleranceProfile,
    as_square_matrix,
    purity,
)


@dataclass(frozen=True)
class MUReport:
    dim: int
    num_bases: int
    max_mu_deviation: float
    max_orth_deviation: float
    f_value: float
    avg_distance: float

    def is_mu(self, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
        return self.max_mu_deviation < tol.eps_mu and self.max_orth_deviation < tol.eps_unitary


@dataclass(frozen=True)
class DesignCheckReport:
    welch_k1: float
    welch_k2: float
    two_design_deviation: float
    weighted: bool


def _basis_list(bases):
    mats = [as_square_matrix(B) for B in bases]
    if len(mats) < 1:
        raise InputError("need at least one basis")
    d = mats[0].shape[0]
    for M in mats:
        if M.shape[0] != d:
            raise ShapeError("bases have mismatched dimensions")
    return mats, d


def check_mu_set(bases, tol: ToleranceProfile = DEFAULT_TOL) -> MUReport:
    """MU figures of merit for a list of orthonormal bases (columns = vectors).

    f_value is the scalar encoding sum_(b,v),(b',v') (|<v|v'>| - chi)^2 over
    ordered pairs; avg_distance is the mean squared basis distance, 1 iff MU.
    """
    mats, d = _basis_list(bases)
    mu = len(mats)
    if mu < 2:
        raise InputError("need at least two bases")
    max_orth = 0.0
    max_mu = 0.0
    f_value = 0.0
    dist_sum = 0.0
    target = 1.0 / np.sqrt(d)
    for b, B in enumerate(mats):
        G = np.abs(B.conj().T @ B)
        max_orth = max(max_orth, float(np.abs(G - np.eye(d)).max()))
        f_value += float(((G - np.eye(d)) ** 2).sum())
        for b2 in range(b + 1, mu):
            A = np.abs(mats[b].conj().T @ mats[b2])
            max_mu = max(max_mu, float(np.abs(A**2 - 1.0 / d).max()))
            f_value += 2.0 * float(((A - target) ** 2).sum())
            dist_sum += 1.0 - ((A**2 - 1.0 / d) ** 2).sum() / (d - 1)
    avg_distance = 2.0 * dist_sum / (mu * (mu - 1))
    return MUReport(d, mu, max_mu, max_orth, f_value, float(avg_distance))


def _all_vectors(bases_or_vectors):
    if isinstance(bases_or_vectors, np.ndarray) and bases_or_vectors.ndim == 2:
        return np.asarray(bases_or_vectors, dtype=complex)
    mats = [np.asarray(B, dtype=complex) for B in bases_or_vectors]
    return np.concatenate([B.T for B in mats], axis=0)  # rows = vectors


def symmetric_projector(d: int) -> np.ndarray:
    swap = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            swap[a * d + b, b * d + a] = 1.0
    return (np.eye(d * d) + swap) / 2.0


def welch_and_design_check(bases_or_vectors, weights=None) -> DesignCheckReport:
    """Welch power sums (ordered pairs, self-pairs included) and the 2-design
    deviation || sum P x P - 2 Pi_sym ||_op, or its weighted variant."""
    V = _all_vectors(bases_or_vectors)  # rows = unit vectors
    n, d = V.shape
    G2 = np.abs(V @ V.conj().T) ** 2
    k1 = float(G2.sum())
    k2 = float((G2**2).sum())
    S = np.zeros((d * d, d * d), dtype=complex)
    if weights is None:
        for v in V:
            P = np.outer(v, v.conj())
            S += np.kron(P, P)
        target = 2.0 * symmetric_projector(d)
    else:
        weights = np.asarray(weights, dtype=float)
        if weights.size * d != n:
            raise InputError("need one weight per basis")
        for i, v in enumerate(V):
            P = np.outer(v, v.conj())
            S += weights[i // d] * np.kron(P, P)
        target = symmetric_projector(d) / (d * (d + 1) / 2.0)
    dev = float(np.linalg.norm(S - target, 2))
    return DesignCheckReport(k1, k2, dev, weights is not None)


def entanglement_content(bases, d1: int, d2: int, tol: ToleranceProfile = DEFAULT_TOL):
    """Total purity over all vectors plus the fixed-content verdicts.

    For mu = d+1 MU bases equality with d1*d2*(d1+d2) is asserted; otherwise
    the upper bound (d1^2 + mu - 1) * d2 is checked.
    """
    mats, d = _basis_list(bases)
    if d != d1 * d2:
        raise ShapeError(f"dimension {d} != {d1}*{d2}")
    mu = len(mats)
    total = sum(purity(B[:, v], d1, d2) for B in mats for v in range(d))
    report = check_mu_set(mats, tol) if mu >= 2 else None
    verdicts = {}
    if mu == d + 1 and report is not None and report.is_mu(tol):
        verdicts["complete_set_content"] = abs(total - d1 * d2 * (d1 + d2))
    verdicts["upper_bound_slack"] = (d1 * d1 + mu - 1) * d2 - total
    return total, verdicts


def witness_value(bases, rho, tol: ToleranceProfile = DEFAULT_TOL):
    """Tr[B(mu) rho] for B(mu) = sum |v><v| x |v*><v*| and the separable bound
    (d + mu - 1)/d. Returns (value, bound, violated)."""
    mats, d = _basis_list(bases)
    rho = as_square_matrix(rho)
    if rho.shape[0] != d * d:
        raise ShapeError(f"state must live on dimension {d}^2")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -1e-10:
        raise InputError(f"state not positive semidefinite (min eigenvalue {evals.min():.2e})")
    if abs(np.trace(rho).real - 1.0) > 1e-10:
        raise InputError("state must have unit trace")
    B_op = np.zeros((d * d, d * d), dtype=complex)
    for B in mats:
        for v in range(d):
            P = np.outer(B[:, v], B[:, v].conj())
            B_op += np.kron(P, P.conj())
    value = float(np.real(np.trace(B_op @ rho)))
    bound = (d + len(mats) - 1) / d
    return value, bound, value > bound + 1e-10


def qrac_probability(bases) -> float:
    """Average success probability of the pairwise 2 -> 1 random access code
    over all basis pairs; equals (1 + 1/sqrt(d))/2 iff all pairs are MU."""
    mats, d = _basis_list(bases)
    mu = len(mats)
    if mu < 2:
        raise InputError("need at least two bases")
    tot = 0.0
    for b in range(mu):
        for b2 in range(b + 1, mu):
            s = np.abs(mats[b].conj().T @ mats[b2]).sum()
            tot += 0.5 + s / (2.0 * d * d)
    return float(2.0 * tot / (mu * (mu - 1)))


def _flat_columns(bases, d, tol):
    """Split a complete MU set into the standard-like basis and the d flat
    (unimodular-column) bases rescaled to the torus."""
    flat = []
    nonflat = 0
    for B in bases:
        if np.abs(np.abs(B) * np.sqrt(d) - 1.0).max() < 1e3 * tol.eps_mod:
            flat.append(np.asarray(B, dtype=complex) * np.sqrt(d))
        else:
            nonflat += 1
    if len(flat) != d or nonflat != 1:
        raise InputError(
            f"need a complete set (standard basis plus {d} Hadamard bases); "
            f"got {len(flat)} flat and {nonflat} non-flat bases"
        )
    return flat


def fourier_linear_constraints(bases, gammas, tol: ToleranceProfile = DEFAULT_TOL):
    """Evaluate the Fourier-side linear constraints of a complete MU set.

    For each integer vector gamma: g_j(gamma) = sum_k prod_m c_{jk,m}^gamma_m
    over the columns of Hadamard basis j; E = sum |g_j|^2; F = |sum g_j|^2.
    Checks, within 1e-8 * d^4:
      per-basis orthogonality sum_r E_j(gamma + pi_r) = d^2,
      its sum            sum_r E(gamma + pi_r) = d^3,
      the unbiasedness   d E(gamma) + sum_{r != t} F(gamma + pi_r - pi_t) = d^4,
    and reports E(0) = d^3, F(0) = d^4 and the observed max of F - d E.
    """
    mats, d = _basis_list(bases)
    if len(mats) != d + 1:
        raise InputError("input must be a complete set of d+1 MU bases")
    cols = _flat_columns(mats, d, tol)

    def g(j, gamma):
        C = cols[j]
        return np.prod(C ** np.asarray(gamma)[:, None], axis=0).sum()

    def E_and_f(gamma):
        gs = np.array([g(j, gamma) for j in range(d)])
        return float((np.abs(gs) ** 2).sum()), gs.sum()

    scale = d**4
    worst = {"orth_per_basis": 0.0, "orth_sum": 0.0, "unbiased": 0.0}
    fe_gap = -np.inf
    E0, f0 = E_and_f([0] * d)
    for gamma in gammas:
        gamma = list(gamma)
        for j in range(d):
            s = 0.0
            for r in range(d):
                shifted = list(gamma)
                shifted[r] += 1
                s += abs(g(j, shifted)) ** 2
            worst["orth_per_basis"] = max(worst["orth_per_basis"], abs(s - d * d) / scale)
        sE = 0.0
        for r in range(d):
            shifted = list(gamma)
            shifted[r] += 1
            sE += E_and_f(shifted)[0]
        worst["orth_sum"] = max(worst["orth_sum"], abs(sE - d**3) / scale)
        Eg, fg = E_and_f(gamma)
        sF = 0.0
        for r in range(d):
            for t in range(d):
                if r == t:
                    continue
                shifted = list(gamma)
                shifted[r] += 1
                shifted[t] -= 1
                sF += abs(E_and_f(shifted)[1]) ** 2
        worst["unbiased"] = max(worst["unbiased"], abs(d * Eg + sF - scale) / scale)
        fe_gap = max(fe_gap, abs(fg) ** 2 - d * Eg)
    return {
        "E0": E0,
        "F0": float(abs(f0) ** 2),
        "relative_residuals": worst,
        "max_F_minus_dE": float(fe_gap),
        "passed": all(v < 1e-8 for v in worst.values())
        and abs(E0 - d**3) < 1e-10 * d**3
        and abs(abs(f0) ** 2 - d**4) < 1e-10 * d**4,
    }


def delsarte_h0(U) -> float:
    """h0(U) = -1 + sum |U_ij|^4; zero on Hadamard matrices, d-1 at identity."""
    U = as_square_matrix(U)
    return float(-1.0 + (np.abs(U) ** 4).sum())
