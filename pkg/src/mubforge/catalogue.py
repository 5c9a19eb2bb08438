"""Order-6 Hadamard catalogue (Fourier family, Tao, Karlsson, Szollosi,
Bjorck, Dita slice), Zauner MU triples, dephasing, Haagerup sets and defects."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    DEFAULT_TOL,
    DomainError,
    InputError,
    NumericalError,
    ShapeError,
    ToleranceProfile,
    UnsupportedError,
    as_square_matrix,
    is_hadamard,
)

FAMILIES = ("fourier", "fourier6_family", "tao_s6", "karlsson_k6_3", "szollosi_x6_2", "bjorck_c6", "dita_slice")


@dataclass
class HadamardMatrix:
    matrix: np.ndarray
    phase_tags: tuple | None = None  # (root_order, d x d int exponents): entry = exp(2 pi i k/r)/sqrt(d)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def check(self, tol: ToleranceProfile = DEFAULT_TOL):
        rep = is_hadamard(self.matrix, tol)
        if not rep.is_hadamard:
            raise NumericalError(
                f"not Hadamard: unitarity {rep.unitarity_deviation:.2e}, modulus {rep.modulus_deviation:.2e}"
            )
        if self.phase_tags is not None:
            r, K = self.phase_tags
            tagged = np.exp(2j * np.pi * np.asarray(K) / r) / np.sqrt(self.dim)
            if np.abs(tagged - self.matrix).max() >= tol.eps_mod:
                raise NumericalError("phase tags disagree with numeric entries")
        return rep


def fourier(d: int) -> HadamardMatrix:
    """F_jk = exp(2 pi i jk/d)/sqrt(d)."""
    if d < 2:
        raise InputError("d must be >= 2")
    K = np.outer(np.arange(d), np.arange(d)) % d
    return HadamardMatrix(np.exp(2j * np.pi * K / d) / np.sqrt(d), (d, K))


def fourier6_family(a: float = 0.0, b: float = 0.0) -> HadamardMatrix:
    """Two-parameter affine family through F6; (a, b) = (0, 0) is F6 exactly."""
    w = np.exp(2j * np.pi / 3)
    x = np.exp(2j * np.pi * a)
    y = np.exp(2j * np.pi * b)
    M = np.array(
        [
            [1, 1, 1, 1, 1, 1],
            [1, -w**2 * x, w, -x, w**2, -w * x],
            [1, w * y, w**2, y, w, w**2 * y],
            [1, -1, 1, -1, 1, -1],
            [1, w**2 * x, w, x, w**2, w * x],
            [1, -w * y, w**2, -y, w, -(w**2) * y],
        ],
        dtype=complex,
    )
    return HadamardMatrix(M / np.sqrt(6))


def tao_s6() -> HadamardMatrix:
    """The isolated order-6 Butson matrix built from third roots of unity."""
    E = np.array(
        [
            [0, 0, 0, 0, 0, 0],
            [0, 0, 1, 1, 2, 2],
            [0, 1, 0, 2, 2, 1],
            [0, 1, 2, 0, 1, 2],
            [0, 2, 2, 1, 0, 1],
            [0, 2, 1, 2, 1, 0],
        ]
    )
    return HadamardMatrix(np.exp(2j * np.pi * E / 3) / np.sqrt(6), (3, E))


def bjorck_c6() -> HadamardMatrix:
    """Circulant Hadamard from the biunimodular sequence with Bjorck's number
    a = (1 - sqrt(3))/2 + i sqrt(sqrt(3)/2)."""
    a = (1 - np.sqrt(3)) / 2 + 1j * np.sqrt(np.sqrt(3) / 2)
    x = np.array([1, 1j / a, -1 / a, -1j, -a, 1j * a], dtype=complex)
    H = np.empty((6, 6), dtype=complex)
    for j in range(6):
        for k in range(6):
            H[j, k] = x[(j - k) % 6]
    return HadamardMatrix(H / np.sqrt(6))


def _mobius(alpha, beta, z):
    return (alpha * z - beta) / (np.conj(beta) * z - np.conj(alpha))


def _mobius_inv(alpha, beta, w):
    return (np.conj(alpha) * w - beta) / (np.conj(beta) * w - alpha)


def _karlsson_blocks(theta: float, phi: float):
    a = -0.5 + 1j * np.sqrt(3) / 2 * (np.cos(theta) + np.exp(1j * phi) * np.sin(theta))
    b = -0.5 + 1j * np.sqrt(3) / 2 * (-np.cos(theta) + np.exp(-1j * phi) * np.sin(theta))
    A = np.array([[a, b], [np.conj(b), -np.conj(a)]])
    B = -np.array([[1, 1], [1, -1]], dtype=complex) - A
    return A, B


def karlsson_k6_3(theta: float, phi: float, lam: float) -> HadamardMatrix:
    """Karlsson's three-parameter family of H2-reducible order-6 Hadamards.

    z1 = exp(i lam); z2..z4 follow from the Mobius relations on their squares.
    """
    if not (0.0 <= theta < np.pi) or not (0.0 <= phi < np.pi):
        raise DomainError(f"theta, phi must lie in [0, pi); got ({theta}, {phi})")
    F2 = np.array([[1, 1], [1, -1]], dtype=complex)
    A, B = _karlsson_blocks(theta, phi)
    aA, bA = A[0, 1] ** 2, A[0, 0] ** 2
    aB, bB = B[0, 1] ** 2, B[0, 0] ** 2
    z1 = np.exp(1j * lam)
    z3 = np.sqrt(_mobius(aA, bA, z1**2))
    z4 = np.sqrt(_mobius(aB, bB, z1**2))
    z2 = np.sqrt(_mobius_inv(aB, bB, z3**2))

    def ZL(z):
        return np.array([[1, 1], [z, -z]], dtype=complex)

    def ZR(z):
        return np.array([[1, z], [1, -z]], dtype=complex)

    Z1, Z2, Z3, Z4 = ZL(z1), ZL(z2), ZR(z3), ZR(z4)
    K = np.block(
        [
            [F2, Z1, Z2],
            [Z3, 0.5 * Z3 @ A @ Z1, 0.5 * Z3 @ B @ Z2],
            [Z4, 0.5 * Z4 @ B @ Z1, 0.5 * Z4 @ A @ Z2],
        ]
    ) / np.sqrt(6)
    return HadamardMatrix(K)


def karlsson_mobius_residual(theta: float, phi: float, lam: float) -> float:
    """Max deviation of the four Mobius relations among z1..z4 squared."""
    A, B = _karlsson_blocks(theta, phi)
    aA, bA = A[0, 1] ** 2, A[0, 0] ** 2
    aB, bB = B[0, 1] ** 2, B[0, 0] ** 2
    z1sq = np.exp(2j * lam)
    z3sq = _mobius(aA, bA, z1sq)
    z4sq = _mobius(aB, bB, z1sq)
    z2sq = _mobius_inv(aB, bB, z3sq)
    return float(
        max(
            abs(z3sq - _mobius(aA, bA, z1sq)),
            abs(z3sq - _mobius(aB, bB, z2sq)),
            abs(z4sq - _mobius(aA, bA, z2sq)),
            abs(z4sq - _mobius(aB, bB, z1sq)),
        )
    )


DITA_THETA = float(np.arccos(1 / np.sqrt(3)))
DITA_PHI = float(np.pi / 4)


def dita_slice(lam: float) -> HadamardMatrix:
    """One-parameter Dita family realized as the Karlsson slice
    theta = arccos(1/sqrt(3)), phi = pi/4 with lam free."""
    return karlsson_k6_3(DITA_THETA, DITA_PHI, lam)


def szollosi_x6_2(alpha: complex, tol: ToleranceProfile = DEFAULT_TOL) -> HadamardMatrix:
    """Szollosi's two-parameter non-affine family X6(alpha).

    (x, y) and (u, v) are roots of z^3 - a z^2 + conj(a) z - 1 at a = alpha
    and a = -alpha, taken in ascending phase order; alpha outside the
    admissible region is detected by a non-unimodular root and rejected.
    """
    alpha = complex(alpha)

    def two_roots(a):
        r = np.roots([1.0, -a, np.conj(a), -1.0])
        if np.abs(np.abs(r) - 1.0).max() >= max(tol.eps_mod, 1e-9):
            raise DomainError(f"alpha = {alpha} outside the family domain (non-unimodular cubic root)")
        r = r[np.argsort(np.angle(r))]
        return r[0], r[1]

    x, y = two_roots(alpha)
    u, v = two_roots(-alpha)
    M = np.array(
        [
            [1, 1, 1, 1, 1, 1],
            [1, x * x * y, x * y * y, x * y / (u * v), u * x * y, v * x * y],
            [1, x / y, x * x * y, x / u, x / v, u * v * x],
            [1, u * v * x, u * x * y, -1, -u * x * y, -u * v * x],
            [1, x / u, v * x * y, -x / u, -1, -v * x * y],
            [1, x / v, x * y / (u * v), -x * y / (u * v), -x / v, -1],
        ],
        dtype=complex,
    )
    return HadamardMatrix(M / np.sqrt(6))


def generate(family: str, **params) -> HadamardMatrix:
    """Catalogue dispatch; every returned matrix passes is_hadamard."""
    builders = {
        "fourier": lambda: fourier(int(params.pop("d", 6))),
        "fourier6_family": lambda: fourier6_family(params.pop("a", 0.0), params.pop("b", 0.0)),
        "tao_s6": tao_s6,
        "karlsson_k6_3": lambda: karlsson_k6_3(
            params.pop("theta"), params.pop("phi"), params.pop("lam", params.pop("lambda", 0.0))
        ),
        "szollosi_x6_2": lambda: szollosi_x6_2(
            complex(params.pop("re", 0.0), params.pop("im", 0.0))
            if "alpha" not in params
            else params.pop("alpha")
        ),
        "bjorck_c6": bjorck_c6,
        "dita_slice": lambda: dita_slice(params.pop("lam", params.pop("lambda", 0.0))),
    }
    if family not in builders:
        raise InputError(f"unknown family {family!r}; choose from {FAMILIES}")
    H = builders[family]()
    if params:
        raise InputError(f"unused parameters for {family}: {sorted(params)}")
    H.check()
    return H


# -- Zauner triples --

def _circ3(c0, c1, c2):
    c = [c0, c1, c2]
    return np.array([[c[(k - j) % 3] for k in range(3)] for j in range(3)])


def zauner_t_matrix(x: float) -> np.ndarray:
    """The one-parameter unimodular matrix with circulant order-3 blocks whose
    normalization T/sqrt(6) is unitary."""
    e, em = np.exp(1j * x), np.exp(-1j * x)
    return np.block(
        [
            [_circ3(1, -em, e), _circ3(-1, 1j * em, 1j * e)],
            [_circ3(1, 1j * em, 1j * e), _circ3(1, em, -e)],
        ]
    )


def _fourier3():
    w = np.exp(2j * np.pi / 3)
    return np.array([[w ** (j * k) for k in range(3)] for j in range(3)]) / np.sqrt(3)


def zauner_triple(x: float, tol: ToleranceProfile = DEFAULT_TOL):
    """MU triple {I, E1, E2} with E1^-1 E2 = T(x)/sqrt(6).

    The circulant blocks of T are diagonalized by F3; each 2x2 eigenvalue
    matrix S_k must be unitary and is factored into the diagonal-phase form
    that yields E1 and E2.
    """
    T = zauner_t_matrix(x) / np.sqrt(6)
    if np.abs(T.conj().T @ T - np.eye(6)).max() >= tol.eps_unitary:
        raise NumericalError("normalized T(x) is not unitary")
    F3 = _fourier3()
    blk = [[T[:3, :3], T[:3, 3:]], [T[3:, :3], T[3:, 3:]]]
    D = [[F3 @ blk[i][j] @ F3.conj().T for j in range(2)] for i in range(2)]
    for i in range(2):
        for j in range(2):
            off = np.abs(D[i][j] - np.diag(np.diag(D[i][j]))).max()
            if off >= 1e-10:
                raise NumericalError(f"block ({i},{j}) not circulant: off-diagonal {off:.2e}")
    U = np.zeros((4, 3), dtype=complex)
    for k in range(3):
        S = np.array([[D[0][0][k, k], D[0][1][k, k]], [D[1][0][k, k], D[1][1][k, k]]])
        if np.abs(S.conj().T @ S - np.eye(2)).max() >= 1e-10:
            raise NumericalError(f"eigenvalue block S_{k} is not unitary")
        s11, s12, s21, s22 = S[0, 0], S[0, 1], S[1, 0], S[1, 1]
        sig = abs(s11)
        if sig > 1 - 1e-12:
            p = q = s11 / sig
            e4 = 1.0 + 0j
            e3m = s22 / p
        else:
            mu = s11 / sig if sig > 1e-12 else 1.0 + 0j
            w = 1j * mu * np.sqrt(1 - sig**2)
            p, q = s11 + w, s11 - w
            e4 = s12 / w
            e3m = s21 / w
        U[0, k], U[1, k], U[2, k], U[3, k] = p, q, 1.0 / e3m, e4
    U1, U2, U3, U4 = (np.diag(U[i]) for i in range(4))
    E1 = np.block([[F3, U3 @ F3], [F3, -U3 @ F3]]) / np.sqrt(2)
    E2 = np.block([[U1 @ F3, U1 @ U4 @ F3], [U2 @ F3, -U2 @ U4 @ F3]]) / np.sqrt(2)
    H1, H2 = HadamardMatrix(E1), HadamardMatrix(E2)
    H1.check(tol)
    H2.check(tol)
    return H1, H2


# -- equivalence machinery --

def dephase(H) -> np.ndarray:
    """Equivalent Hadamard with first row and column real positive (1/sqrt d)."""
    M = as_square_matrix(H.matrix if isinstance(H, HadamardMatrix) else H)
    col = np.conj(M[0, :]) / np.abs(M[0, :])
    M = M * col[None, :]
    row = np.conj(M[:, 0]) / np.abs(M[:, 0])
    return row[:, None] * M


def random_equivalence(H, rng: np.random.Generator) -> np.ndarray:
    """P1 D1 H D2 P2 for random permutations and diagonal phase unitaries."""
    M = as_square_matrix(H.matrix if isinstance(H, HadamardMatrix) else H)
    d = M.shape[0]
    D1 = np.diag(np.exp(2j * np.pi * rng.random(d)))
    D2 = np.diag(np.exp(2j * np.pi * rng.random(d)))
    P1 = np.eye(d)[rng.permutation(d)]
    P2 = np.eye(d)[rng.permutation(d)]
    return P1 @ D1 @ M @ D2 @ P2


def haagerup_set(H, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Deduplicated multiset of 4-cycle entry products over row pairs (p, r)
    and column pairs (q, s), H_pq H*_rq H_rs H*_ps, rescaled to unit modulus;
    invariant under Hadamard equivalence transformations."""
    M = as_square_matrix(H.matrix if isinstance(H, HadamardMatrix) else H)
    d = M.shape[0]
    Mu = M * np.sqrt(d)
    prods = np.einsum("pq,rq,rs,ps->pqrs", Mu, Mu.conj(), Mu, Mu.conj()).ravel()
    vals: list[complex] = []
    for z in sorted(prods, key=lambda z: (round(z.real, 9), round(z.imag, 9))):
        if not vals or abs(z - vals[-1]) > tol.eps_dedup:
            vals.append(z)
    return np.array(vals)


@dataclass(frozen=True)
class DefectReport:
    defect: int
    system_rank: int
    matrix_order: int


def defect(H, tol: ToleranceProfile = DEFAULT_TOL) -> DefectReport:
    """Nullity of the first-order unitarity-preserving phase system on the
    dephased core (R zero on first row/column); zero means isolated."""
    M = dephase(H)
    d = M.shape[0]
    nvar = (d - 1) * (d - 1)

    def var(j, k):
        return (j - 1) * (d - 1) + (k - 1)

    rows = []
    for j in range(d):
        for k in range(j + 1, d):
            coef = np.zeros(nvar, dtype=complex)
            for el in range(1, d):
                c = M[j, el] * np.conj(M[k, el])
                if j >= 1:
                    coef[var(j, el)] += c
                if k >= 1:
                    coef[var(k, el)] -= c
            rows.append(coef)
    A = np.array(rows)
    A = np.concatenate([A.real, A.imag], axis=0)
    s = np.linalg.svd(A, compute_uv=False)
    rank = int(np.sum(s > 1e-8 * s[0]))
    return DefectReport(nvar - rank, rank, d)


def fourier_defect(d: int) -> int:
    """sum_{n=1}^{d-1} (gcd(n, d) - 1), the defect of the Fourier matrix."""
    if d < 2:
        raise InputError("d must be >= 2")
    return sum(int(np.gcd(n, d)) - 1 for n in range(1, d))


def structure_flags(H, tol: ToleranceProfile = DEFAULT_TOL) -> dict:
    """Butson order, realness, circulance, H2-reducibility and (d = 6 only)
    existence of a 3x3 submatrix proportional to a unitary."""
    M = as_square_matrix(H.matrix if isinstance(H, HadamardMatrix) else H)
    d = M.shape[0]
    Mu = M * np.sqrt(d)
    flags: dict = {}
    butson = None
    for r in range(1, 2 * d + 1):
        K = np.round(np.angle(Mu) * r / (2 * np.pi)).astype(int) % r
        if np.abs(np.exp(2j * np.pi * K / r) - Mu).max() < 1e3 * tol.eps_mod:
            butson = r
            break
    flags["butson_order"] = butson
    flags["is_real"] = bool(np.abs(M.imag).max() < tol.eps_mod)
    circ = True
    for j in range(d):
        for k in range(d):
            if abs(M[j, k] - M[(j + 1) % d, (k + 1) % d]) > 1e3 * tol.eps_mod:
                circ = False
                break
        if not circ:
            break
    flags["is_circulant"] = circ
    Dph = dephase(M) * np.sqrt(d)
    flags["h2_reducible"] = bool(np.abs(Dph + 1.0).min() < 1e3 * tol.eps_mod)
    if d == 6:
        from itertools import combinations

        found = False
        for rows in combinations(range(6), 3):
            for cols in combinations(range(6), 3):
                U = Mu[np.ix_(rows, cols)] / np.sqrt(3)
                if np.abs(U.conj().T @ U - np.eye(3)).max() < 1e-8:
                    found = True
                    break
            if found:
                break
        flags["has_subunitary_3x3"] = found
    else:
        flags["has_subunitary_3x3"] = None
    return flags


def subunitary_3x3(H, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    M = as_square_matrix(H.matrix if isinstance(H, HadamardMatrix) else H)
    if M.shape[0] != 6:
        raise UnsupportedError("3x3 subunitary scan is defined for order 6 only")
    return bool(structure_flags(M, tol)["has_subunitary_3x3"])


def phase_turns(H) -> list | None:
    """Exact phases as rational turns when Butson tags exist, else None."""
    if not isinstance(H, HadamardMatrix) or H.phase_tags is None:
        return None
    r, K = H.phase_tags
    return [[str(Fraction(int(k), r)) for k in row] for row in np.asarray(K)]
