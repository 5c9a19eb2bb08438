"""Numerical enumeration of MU vectors, basis grouping via clique search,
constellation optimization and extension probes."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .analysis import check_mu_set
from .core import (
    DEFAULT_TOL,
    InputError,
    ShapeError,
    ToleranceProfile,
    as_square_matrix,
    is_hadamard,
)

MAX_CLIQUE_VERTICES = 200


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    restarts: int = 200_000
    newton_max_iter: int = 200
    newton_tol: float = 1e-12
    dedup_tol: float = 1e-6
    optimizer: str = "newton_residual"

    def __post_init__(self):
        if self.restarts < 1:
            raise InputError("restarts must be >= 1")
        if self.optimizer not in ("newton_residual", "quasi_newton_f"):
            raise InputError(f"unknown optimizer {self.optimizer!r}")


@dataclass
class VectorSolutionSet:
    label: str
    dim: int
    vectors: np.ndarray          # (n, d) canonical unit vectors
    residuals: np.ndarray        # per-vector max MU deviation
    multiplicities: np.ndarray   # local root multiplicity (2 at fold points)
    continuum_detected: bool
    coverage_warning: bool

    @property
    def count(self) -> int:
        """Solution count including local multiplicities (the algebraic count)."""
        return int(self.multiplicities.sum())

    @property
    def distinct(self) -> int:
        return len(self.vectors)


def _worker_count() -> int:
    env = os.environ.get("MUBFORGE_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _run_kernel_chunk(args):
    C, starts, max_iter, tol = args
    return kernels.run_newton(C, starts, max_iter, tol)


def _newton_all(C: np.ndarray, starts: np.ndarray, max_iter: int, tol: float):
    workers = _worker_count()
    if workers == 1 or starts.shape[0] < 4 * workers:
        return kernels.run_newton(C, starts, max_iter, tol)
    chunks = np.array_split(np.arange(starts.shape[0]), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_kernel_chunk, [(C, starts[c], max_iter, tol) for c in chunks]))
    ph = np.concatenate([p for p, _ in parts], axis=0)
    ok = np.concatenate([o for _, o in parts], axis=0)
    return ph, ok


def _projective_distance(u: np.ndarray, v: np.ndarray) -> float:
    return float(1.0 - abs(np.vdot(u, v)))


def _dedup(vectors: np.ndarray, first_idx: np.ndarray, dedup_tol: float):
    """Greedy projective-distance clustering; returns representatives sorted
    lexicographically by rounded phases plus their earliest restart index."""
    if len(vectors) == 0:
        return vectors, first_idx
    # windowed scan on the first free phase via its cosine (wrap-safe)
    key = vectors[:, 1].real
    order = np.argsort(key, kind="stable")
    reps: list[int] = []
    firsts: list[int] = []
    window = 0.05
    for i in order:
        v = vectors[i]
        dup_at = -1
        for rj, r in enumerate(reps):
            if abs(vectors[r, 1].real - v[1].real) > window:
                continue
            if _projective_distance(vectors[r], v) <= dedup_tol:
                dup_at = rj
                break
        if dup_at < 0:
            reps.append(i)
            firsts.append(int(first_idx[i]))
        else:
            firsts[dup_at] = min(firsts[dup_at], int(first_idx[i]))
    V = vectors[reps]
    F = np.array(firsts)
    keys = np.round(np.angle(V[:, 1:]) % (2 * np.pi), 7)
    order = np.lexsort(keys.T[::-1])
    return V[order], F[order]


def _stacked_conjugates(bases) -> np.ndarray:
    mats = [as_square_matrix(B) for B in bases]
    d = mats[0].shape[0]
    for M in mats:
        if M.shape[0] != d:
            raise ShapeError("stacked bases must share one dimension")
    return np.concatenate([M.conj().T for M in mats], axis=0)


def _residual_rows(C: np.ndarray, v: np.ndarray) -> np.ndarray:
    d = v.size
    return np.abs(C @ v) ** 2 - 1.0 / d


def _jacobian(C: np.ndarray, v: np.ndarray) -> np.ndarray:
    z = C @ v
    return -2.0 * np.imag(np.conj(z)[:, None] * C[:, 1:] * v[None, 1:])


def _multiplicity(C: np.ndarray, v: np.ndarray, phases: np.ndarray):
    """2 for a fold (rank-deficient Jacobian, nonzero second-order term along
    the null direction), else 1."""
    J = _jacobian(C, v)
    s = np.linalg.svd(J, compute_uv=False)
    if s[-1] >= 1e-4 * max(s[0], 1.0):
        return 1
    null = np.linalg.svd(J)[2][-1]
    d = v.size
    t = 1e-4

    def r_at(ph):
        vv = np.concatenate([[1.0], np.exp(1j * ph)]) / np.sqrt(d)
        return _residual_rows(C, vv)

    second = np.abs(r_at(phases + t * null) + r_at(phases - t * null) - 2.0 * r_at(phases)).max() / t**2
    return 2 if second > 1e-6 else 1


def mu_vectors_to_bases(bases, cfg: SearchConfig, label: str = "") -> VectorSolutionSet:
    """All unit vectors (canonical global phase) MU to every given basis.

    The first basis must be the standard one; the remaining bases' columns
    supply the Newton residuals. Solutions are deduplicated at dedup_tol in
    projective distance, checked at 10x newton_tol, and annotated with local
    multiplicities; a continuum flag fires when two solutions come closer
    than 1e-3 with residuals below 1e-12.
    """
    mats = [as_square_matrix(B) for B in bases]
    d = mats[0].shape[0]
    if np.abs(mats[0] - np.eye(d)).max() > 1e-12:
        raise InputError("first basis must be the standard basis")
    C = _stacked_conjugates(mats[1:])
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    starts = rng.uniform(0.0, 2.0 * np.pi, size=(cfg.restarts, d - 1))
    ph, ok = _newton_all(C, starts, cfg.newton_max_iter, cfg.newton_tol)
    ph = ph[ok]
    first_idx = np.where(ok)[0]
    vectors = np.concatenate([np.ones((len(ph), 1)), np.exp(1j * ph)], axis=1) / np.sqrt(d)
    vecs, firsts = _dedup(vectors, first_idx, cfg.dedup_tol)
    residuals = np.array([np.abs(_residual_rows(C, v)).max() for v in vecs])
    keep = residuals < 10.0 * cfg.newton_tol
    vecs, residuals, firsts = vecs[keep], residuals[keep], firsts[keep]
    mult = np.array(
        [_multiplicity(C, v, np.angle(v[1:] * np.sqrt(d))) for v in vecs], dtype=int
    ) if len(vecs) else np.zeros(0, dtype=int)
    continuum = False
    tight = residuals < 1e-12 if len(vecs) else np.zeros(0, dtype=bool)
    tv = vecs[tight] if len(vecs) else vecs
    for i in range(len(tv)):
        for j in range(i + 1, len(tv)):
            if abs(tv[i, 1].real - tv[j, 1].real) > 0.25:
                continue
            if _projective_distance(tv[i], tv[j]) < 1e-3:
                continuum = True
                break
        if continuum:
            break
    coverage = bool(len(firsts)) and bool((firsts > 0.8 * cfg.restarts).any())
    return VectorSolutionSet(label, d, vecs, residuals, mult, continuum, coverage)


def mu_vectors_to_pair(H, cfg: SearchConfig, tol: ToleranceProfile = DEFAULT_TOL) -> VectorSolutionSet:
    """All vectors MU to the pair {identity, H} for a Hadamard H."""
    M = as_square_matrix(getattr(H, "matrix", H))
    rep = is_hadamard(M, tol)
    if not rep.is_hadamard:
        raise InputError(
            f"H is not Hadamard (unitarity {rep.unitarity_deviation:.2e}, "
            f"modulus {rep.modulus_deviation:.2e})"
        )
    d = M.shape[0]
    return mu_vectors_to_bases([np.eye(d, dtype=complex), M], cfg, label=f"pair d={d}")


def group_into_bases(sol: VectorSolutionSet, tol: ToleranceProfile = DEFAULT_TOL):
    """All orthonormal bases formable from the solution set: d-cliques of the
    orthogonality graph (edge iff |<u|v>| < eps_orth), via branch and bound."""
    V = sol.vectors
    n = len(V)
    if n == 0:
        return []
    if n > MAX_CLIQUE_VERTICES:
        raise InputError(f"orthogonality graph too large ({n} > {MAX_CLIQUE_VERTICES})")
    d = sol.dim
    G = np.abs(V @ V.conj().T)
    adj = G < tol.eps_orth
    nbrs = [frozenset(np.flatnonzero(adj[i])) - {i} for i in range(n)]
    cliques: list[tuple] = []

    def extend(clique, cand):
        if len(clique) == d:
            cliques.append(tuple(clique))
            return
        if len(clique) + len(cand) < d:
            return
        for v in sorted(cand):
            extend(clique + [v], {c for c in cand if c > v} & nbrs[v])

    extend([], set(range(n)))
    return [V[list(c)].T.copy() for c in cliques]


@dataclass
class ExtensionReport:
    extra_vectors: int
    extends_to_basis: bool
    solution: VectorSolutionSet
    bases_found: int


def extension_probe(bases, cfg: SearchConfig, tol: ToleranceProfile = DEFAULT_TOL) -> ExtensionReport:
    """Count vectors MU to every input basis and whether they contain a full
    extra basis; inputs must be pairwise MU (standard basis first)."""
    report = check_mu_set(bases, tol)
    if not report.is_mu(tol):
        raise InputError(f"input bases are not pairwise MU (deviation {report.max_mu_deviation:.2e})")
    sol = mu_vectors_to_bases(bases, cfg)
    grouped = group_into_bases(sol, tol) if sol.distinct <= MAX_CLIQUE_VERTICES else []
    return ExtensionReport(sol.count, len(grouped) > 0, sol, len(grouped))


# -- constellation search --

@dataclass(frozen=True)
class ConstellationSpec:
    """Target MU constellation {x_1, ..., x_n}_d.

    The first part is gauge-fixed to the standard basis; a part of size d-1
    denotes a full basis (its last vector is determined). Every remaining
    part contributes its size in parameterized unimodular vectors.
    """

    dim: int
    parts: tuple

    def __post_init__(self):
        if len(self.parts) < 2:
            raise InputError("need the gauge-fixed part plus at least one searched part")
        if any(not (1 <= x <= self.dim) for x in self.parts):
            raise InputError(f"part sizes must lie in [1, {self.dim}]")

    @property
    def free_vectors(self) -> int:
        return int(sum(self.parts[1:]))

    @property
    def param_count(self) -> int:
        return (self.dim - 1) * (self.free_vectors - 1)


def full_set_param_count(d: int, mu: int) -> int:
    """(d-1)((mu-1)(d-1)-1), the phase count for mu deficient bases."""
    return (d - 1) * ((mu - 1) * (d - 1) - 1)


@dataclass
class ConstellationResult:
    found: bool
    best_residual: float
    successes: int
    attempts: int


def _constellation_targets(spec: ConstellationSpec):
    labels = np.concatenate([[i] * s for i, s in enumerate(spec.parts[1:])])
    m = labels.size
    cross = labels[:, None] != labels[None, :]
    return cross, m


def _constellation_f_grad(phi, cross, m, d):
    P = np.zeros((m, d - 1))
    if m > 1:
        P[1:] = phi.reshape(m - 1, d - 1)
    V = np.exp(1j * np.concatenate([np.zeros((m, 1)), P], axis=1)) / np.sqrt(d)
    M = np.conj(V) @ V.T
    A = np.abs(M)
    target = 1.0 / np.sqrt(d)
    off = ~np.eye(m, dtype=bool)
    same = off & ~cross
    F = float((A[same] ** 2).sum() + ((A[cross] - target) ** 2).sum())
    scale = np.zeros_like(A)
    scale[same] = 2.0
    Asafe = np.where(A < 1e-30, 1.0, A)
    scale[cross] = 2.0 * (A[cross] - target) / Asafe[cross]
    X = scale * np.conj(M)
    G = -2.0 * np.imag(np.einsum("ij,im,jm->jm", X, np.conj(V[:, 1:]), V[:, 1:]))
    return F, G[1:].ravel()


def constellation_search(spec: ConstellationSpec, cfg: SearchConfig) -> ConstellationResult:
    """Random-restart quasi-Newton minimization of the constellation-restricted
    scalar MU functional; success iff the final value drops below 1e-16."""
    d = spec.dim
    cross, m = _constellation_targets(spec)
    p = (m - 1) * (d - 1)
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    successes = 0
    best = np.inf
    for _ in range(cfg.restarts):
        x0 = rng.uniform(0.0, 2.0 * np.pi, size=p)
        if p == 0:
            F = _constellation_f_grad(np.zeros(0), cross, m, d)[0]
        else:
            res = minimize(
                _constellation_f_grad,
                x0,
                args=(cross, m, d),
                jac=True,
                method="L-BFGS-B",
                options={"maxiter": 1000, "ftol": 1e-20, "gtol": 1e-14},
            )
            F = res.fun
            if F < 1e-8:
                res = minimize(
                    _constellation_f_grad,
                    res.x,
                    args=(cross, m, d),
                    jac=True,
                    method="L-BFGS-B",
                    options={"maxiter": 2000, "ftol": 0, "gtol": 0},
                )
                F = min(F, res.fun)
        best = min(best, F)
        if F < 1e-16:
            successes += 1
    return ConstellationResult(successes > 0, float(best), successes, cfg.restarts)
