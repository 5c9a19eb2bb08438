"""Pure-numpy (batched) damped-Newton kernel for MU-vector refinement.

Semantics match the compiled kernel in _kernels_cy: candidate vectors are
(1, e^{i phi_1}, ..., e^{i phi_{d-1}})/sqrt(d); the residual system is
|<h_j|psi>|^2 - 1/d over the columns h_j of every target basis stacked into
C = [H_1 | H_2 | ...]^dagger.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"

_ARMIJO = 1e-4
_MAX_BACKTRACK = 25
_RIDGE = 1e-14


def run_newton(C: np.ndarray, starts: np.ndarray, max_iter: int, tol: float):
    """Damped Newton from each starting phase vector.

    C: (m, d) complex, rows are target-vector conjugate transposes <h_j|.
    starts: (n, d-1) float phases.
    Returns (phases (n, d-1), converged (n,) bool); non-converged rows hold
    their last iterate.
    """
    C = np.ascontiguousarray(C, dtype=complex)
    m, d = C.shape
    ph = np.array(starts, dtype=float, copy=True)
    n = ph.shape[0]
    if ph.shape[1] != d - 1:
        raise ValueError(f"starts must have {d - 1} columns")
    inv_d = 1.0 / d
    sq = 1.0 / np.sqrt(d)
    active = np.ones(n, dtype=bool)
    converged = np.zeros(n, dtype=bool)
    eye = np.eye(d - 1)

    def residual(phases):
        E = np.exp(1j * phases)
        z = (C[:, 0][None, :] + E @ C[:, 1:].T) * sq
        return E, z, np.abs(z) ** 2 - inv_d

    for _ in range(max_iter):
        idx = np.where(active)[0]
        if idx.size == 0:
            break
        E, z, r = residual(ph[idx])
        rmax = np.abs(r).max(axis=1)
        done = rmax < tol
        converged[idx[done]] = True
        active[idx[done]] = False
        idx = idx[~done]
        if idx.size == 0:
            continue
        E, z, r = E[~done], z[~done], r[~done]
        J = -2.0 * sq * np.imag(np.conj(z)[:, :, None] * C[None, :, 1:] * E[:, None, :])
        G = np.einsum("bjm,bjn->bmn", J, J) + _RIDGE * eye[None]
        g = np.einsum("bjm,bj->bm", J, r)
        try:
            step = -np.linalg.solve(G, g[..., None])[..., 0]
        except np.linalg.LinAlgError:
            step = -np.array([np.linalg.lstsq(Gi, gi, rcond=None)[0] for Gi, gi in zip(G, g)])
        S0 = (r**2).sum(axis=1)
        lam = np.ones(idx.size)
        accepted = np.zeros(idx.size, dtype=bool)
        new_ph = ph[idx].copy()
        for _ in range(_MAX_BACKTRACK):
            pending = ~accepted
            if not pending.any():
                break
            trial = ph[idx[pending]] + lam[pending, None] * step[pending]
            _, _, rt = residual(trial)
            St = (rt**2).sum(axis=1)
            ok = St <= S0[pending] * (1.0 - _ARMIJO * lam[pending]) + 1e-300
            sel = np.where(pending)[0]
            new_ph[sel[ok]] = trial[ok]
            accepted[sel[ok]] = True
            lam[sel[~ok]] *= 0.5
        ph[idx[accepted]] = new_ph[accepted]
        active[idx[~accepted]] = False  # stalled line search
    # final convergence sweep for rows that hit max_iter while active
    idx = np.where(active)[0]
    if idx.size:
        _, _, r = residual(ph[idx])
        converged[idx] = np.abs(r).max(axis=1) < tol
    return np.mod(ph, 2.0 * np.pi), converged
