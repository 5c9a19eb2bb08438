# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled damped-Newton kernel for MU-vector refinement.

Same contract as _kernels_py.run_newton: one Newton run per starting phase
vector, residuals |<h_j|psi>|^2 - 1/d over the rows of C = stacked H^dagger.
"""

import numpy as np

from libc.math cimport cos, fabs, sin, sqrt

BACKEND = "cython"

DEF ARMIJO = 1e-4
DEF MAX_BACKTRACK = 25
DEF RIDGE = 1e-14


cdef int _solve_spd(double[:, :] G, double[:] rhs, double[:] out, int p) nogil:
    """Gaussian elimination with partial pivoting on the normal equations."""
    cdef int i, j, k, piv
    cdef double best, factor, tmp
    for i in range(p):
        out[i] = rhs[i]
    for k in range(p):
        piv = k
        best = fabs(G[k, k])
        for i in range(k + 1, p):
            if fabs(G[i, k]) > best:
                best = fabs(G[i, k])
                piv = i
        if best == 0.0:
            return 1
        if piv != k:
            for j in range(p):
                tmp = G[k, j]; G[k, j] = G[piv, j]; G[piv, j] = tmp
            tmp = out[k]; out[k] = out[piv]; out[piv] = tmp
        for i in range(k + 1, p):
            factor = G[i, k] / G[k, k]
            if factor != 0.0:
                for j in range(k, p):
                    G[i, j] -= factor * G[k, j]
                out[i] -= factor * out[k]
    for k in range(p - 1, -1, -1):
        tmp = out[k]
        for j in range(k + 1, p):
            tmp -= G[k, j] * out[j]
        out[k] = tmp / G[k, k]
    return 0


def run_newton(C, starts, int max_iter, double tol):
    C = np.ascontiguousarray(C, dtype=complex)
    starts = np.ascontiguousarray(starts, dtype=float)
    cdef int m = C.shape[0]
    cdef int d = C.shape[1]
    cdef int p = d - 1
    if starts.shape[1] != p:
        raise ValueError("starts must have d-1 columns")
    cdef int n = starts.shape[0]

    cdef double[:, :] Cre = np.ascontiguousarray(C.real)
    cdef double[:, :] Cim = np.ascontiguousarray(C.imag)
    out_ph = np.mod(starts.copy(), 2.0 * np.pi)
    conv = np.zeros(n, dtype=np.uint8)
    cdef double[:, :] ph = out_ph
    cdef unsigned char[:] converged = conv

    cdef double inv_d = 1.0 / d
    cdef double sq = 1.0 / sqrt(d)
    cdef double two_pi = 2.0 * np.pi

    buf = np.zeros((12, max(p, m)), dtype=float)
    cdef double[:] er = buf[0]
    cdef double[:] ei = buf[1]
    cdef double[:] zr = buf[2]
    cdef double[:] zi = buf[3]
    cdef double[:] res = buf[4]
    cdef double[:] grad = buf[5]
    cdef double[:] step = buf[6]
    cdef double[:] trial = buf[7]
    cdef double[:] cur = buf[8]
    Jbuf = np.zeros((m, max(p, 1)), dtype=float)
    cdef double[:, :] J = Jbuf
    Gbuf = np.zeros((max(p, 1), max(p, 1)), dtype=float)
    cdef double[:, :] G = Gbuf

    cdef int row, it, j, k, a, b, bt, status
    cdef double rmax, s0, st, lam, re, im, zre, zim, acc
    cdef bint ok

    with nogil:
        for row in range(n):
            for k in range(p):
                cur[k] = ph[row, k]
            for it in range(max_iter):
                # z_j = sq * (C[j,0] + sum_k C[j,k+1] e^{i cur_k}); residual and max
                for k in range(p):
                    er[k] = cos(cur[k])
                    ei[k] = sin(cur[k])
                rmax = 0.0
                for j in range(m):
                    zre = Cre[j, 0]
                    zim = Cim[j, 0]
                    for k in range(p):
                        zre += Cre[j, k + 1] * er[k] - Cim[j, k + 1] * ei[k]
                        zim += Cre[j, k + 1] * ei[k] + Cim[j, k + 1] * er[k]
                    zr[j] = zre * sq
                    zi[j] = zim * sq
                    res[j] = zr[j] * zr[j] + zi[j] * zi[j] - inv_d
                    if fabs(res[j]) > rmax:
                        rmax = fabs(res[j])
                if rmax < tol:
                    converged[row] = 1
                    break
                # J[j,k] = -2 sq Im( conj(z_j) C[j,k+1] e^{i cur_k} )
                for j in range(m):
                    for k in range(p):
                        re = Cre[j, k + 1] * er[k] - Cim[j, k + 1] * ei[k]
                        im = Cre[j, k + 1] * ei[k] + Cim[j, k + 1] * er[k]
                        J[j, k] = -2.0 * sq * (zr[j] * im - zi[j] * re)
                for a in range(p):
                    for b in range(a, p):
                        acc = 0.0
                        for j in range(m):
                            acc += J[j, a] * J[j, b]
                        G[a, b] = acc
                        G[b, a] = acc
                    G[a, a] += RIDGE
                    acc = 0.0
                    for j in range(m):
                        acc += J[j, a] * res[j]
                    grad[a] = acc
                status = _solve_spd(G, grad, step, p)
                if status != 0:
                    break
                s0 = 0.0
                for j in range(m):
                    s0 += res[j] * res[j]
                lam = 1.0
                ok = False
                for bt in range(MAX_BACKTRACK):
                    for k in range(p):
                        trial[k] = cur[k] - lam * step[k]
                        er[k] = cos(trial[k])
                        ei[k] = sin(trial[k])
                    st = 0.0
                    for j in range(m):
                        zre = Cre[j, 0]
                        zim = Cim[j, 0]
                        for k in range(p):
                            zre += Cre[j, k + 1] * er[k] - Cim[j, k + 1] * ei[k]
                            zim += Cre[j, k + 1] * ei[k] + Cim[j, k + 1] * er[k]
                        re = (zre * zre + zim * zim) * sq * sq - inv_d
                        st += re * re
                    if st <= s0 * (1.0 - ARMIJO * lam) + 1e-300:
                        ok = True
                        break
                    lam *= 0.5
                if not ok:
                    break
                for k in range(p):
                    cur[k] = trial[k]
            else:
                # max_iter reached: final residual check
                for k in range(p):
                    er[k] = cos(cur[k])
                    ei[k] = sin(cur[k])
                rmax = 0.0
                for j in range(m):
                    zre = Cre[j, 0]
                    zim = Cim[j, 0]
                    for k in range(p):
                        zre += Cre[j, k + 1] * er[k] - Cim[j, k + 1] * ei[k]
                        zim += Cre[j, k + 1] * ei[k] + Cim[j, k + 1] * er[k]
                    re = (zre * zre + zim * zim) * sq * sq - inv_d
                    if fabs(re) > rmax:
                        rmax = fabs(re)
                if rmax < tol:
                    converged[row] = 1
            for k in range(p):
                cur[k] = cur[k] % two_pi
                if cur[k] < 0:
                    cur[k] += two_pi
                ph[row, k] = cur[k]
    return out_ph, conv.astype(bool)
