"""Complex vector/matrix primitives: Hadamard and unitarity predicates,
purity, operator-Schmidt analysis, canonical phases and tolerances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class MubforgeError(Exception):
    """Base class for all library errors."""


class ShapeError(MubforgeError):
    """Input has the wrong shape or incompatible dimensions."""


class InputError(MubforgeError):
    """Invalid argument value (bad prime, malformed option, ...)."""


class ConstructionError(MubforgeError):
    """A construction's precondition on (method, dimension) is violated."""


class DomainError(MubforgeError):
    """Family parameter outside its admissible domain."""


class UnsupportedError(MubforgeError):
    """Requested case has no implemented construction (by design)."""


class NumericalError(MubforgeError):
    """An internal numerical check failed; carries diagnostics in args."""


@dataclass(frozen=True)
class ToleranceProfile:
    """Numerical thresholds used across the library.

    eps_unitary / eps_mod bound deviations of constructed matrices from
    unitarity / equimodularity, eps_mu bounds MU-overlap deviations,
    eps_orth is the orthogonality-graph edge threshold, eps_dedup the
    projective-distance dedup threshold for search output.
    """

    eps_unitary: float = 1e-10
    eps_mod: float = 1e-10
    eps_mu: float = 1e-10
    eps_orth: float = 1e-8
    eps_dedup: float = 1e-6

    def __post_init__(self):
        for name in ("eps_unitary", "eps_mod", "eps_mu", "eps_orth", "eps_dedup"):
            v = getattr(self, name)
            if not (0.0 < v < 1e-2):
                raise InputError(f"{name} must lie in (0, 1e-2), got {v}")


DEFAULT_TOL = ToleranceProfile()


@dataclass(frozen=True)
class HadamardCheck:
    is_hadamard: bool
    unitarity_deviation: float
    modulus_deviation: float


def as_square_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {M.shape}")
    if not np.isfinite(M).all():
        raise InputError("matrix contains NaN/Inf entries")
    return M


def unitarity_deviation(M: np.ndarray) -> float:
    M = as_square_matrix(M)
    d = M.shape[0]
    return float(np.abs(M.conj().T @ M - np.eye(d)).max())


def is_hadamard(M, tol: ToleranceProfile = DEFAULT_TOL) -> HadamardCheck:
    """True iff M is unitary with all entries of modulus 1/sqrt(d)."""
    M = as_square_matrix(M)
    d = M.shape[0]
    udev = unitarity_deviation(M)
    mdev = float(np.abs(np.abs(M) - 1.0 / np.sqrt(d)).max())
    ok = udev < tol.eps_unitary and mdev < tol.eps_mod
    return HadamardCheck(ok, udev, mdev)


def purity(v, d1: int, d2: int) -> float:
    """Tr[rho_1^2] of the reduction of |v><v| to the first tensor factor."""
    v = np.asarray(v, dtype=complex).ravel()
    if v.size != d1 * d2:
        raise ShapeError(f"vector length {v.size} != {d1}*{d2}")
    A = v.reshape(d1, d2)
    rho1 = A @ A.conj().T
    return float(np.real(np.trace(rho1 @ rho1)))


def realign(M, d1: int, d2: int) -> np.ndarray:
    """Realignment M_{(i1 i2),(j1 j2)} -> R_{(i1 j1),(i2 j2)} of a d1*d2 matrix."""
    M = as_square_matrix(M)
    if M.shape[0] != d1 * d2:
        raise ShapeError(f"matrix order {M.shape[0]} != {d1}*{d2}")
    return M.reshape(d1, d2, d1, d2).transpose(0, 2, 1, 3).reshape(d1 * d1, d2 * d2)


def operator_schmidt_rank(M, d1: int, d2: int, tol: ToleranceProfile = DEFAULT_TOL) -> int:
    """Number of operator-Schmidt coefficients above eps_mod * ||M||_F."""
    R = realign(M, d1, d2)
    s = np.linalg.svd(R, compute_uv=False)
    cutoff = tol.eps_mod * np.linalg.norm(np.asarray(M))
    return int(np.sum(s > cutoff))


def product_vector_test(v, d1: int, d2: int, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """True iff v is a product vector across d1 x d2 (purity within eps_mu of 1)."""
    return purity(v, d1, d2) >= 1.0 - tol.eps_mu


def canonical_phase(v, cutoff: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the first non-negligible component is real positive."""
    v = np.asarray(v, dtype=complex).ravel()
    for c in v:
        if abs(c) > cutoff:
            return v * (np.conj(c) / abs(c))
    raise InputError("cannot canonicalize the zero vector")


def check_orthonormal(B, tol: ToleranceProfile = DEFAULT_TOL) -> float:
    """Max deviation of <col_i|col_j> from delta_ij; raises if above eps_unitary."""
    dev = unitarity_deviation(B)
    if dev >= tol.eps_unitary:
        raise NumericalError(f"basis not orthonormal: deviation {dev:.3e}")
    return dev


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random d x d unitary via QR of a Ginibre matrix."""
    Z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def kron_all(mats) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for M in mats:
        out = np.kron(out, M)
    return out
