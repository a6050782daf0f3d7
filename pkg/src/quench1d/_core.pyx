# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled RK4 propagation kernels (SSH family and Creutz ladder).

The Python-facing contract is shared with ``_kernels_np``: the state vector is
updated in place over ``n_steps`` fixed steps of size ``dt``, couplings are
pre-sampled on the half-step grid (length ``2*n_steps + 1``), and the return
value is the log-norm folded out of the amplitudes by renormalization.
"""

import numpy as np

from libc.math cimport log, sqrt


cdef inline void _hssh_mi(double complex[::1] v, double complex[::1] out,
                          double j1, double j2, double gamma,
                          bint odd, bint periodic) nogil:
    """out = -i * H_ssh(j1, j2, gamma) @ v on the interleaved site basis."""
    cdef Py_ssize_t S = v.shape[0]
    cdef Py_ssize_t N = (S + 1) // 2
    cdef Py_ssize_t c
    cdef double complex mi = -1j
    if odd:
        # A_c at 2c (c=0..N-1), B_c at 2c+1 (c=0..N-2)
        out[0] = mi * (j1 * v[1])
        for c in range(1, N - 1):
            out[2 * c] = mi * (j1 * v[2 * c + 1] + j2 * v[2 * c - 1])
        out[2 * N - 2] = mi * (j2 * v[2 * N - 3])
        for c in range(N - 1):
            out[2 * c + 1] = mi * (j1 * v[2 * c] + j2 * v[2 * c + 2])
    else:
        out[0] = mi * (j1 * v[1])
        for c in range(1, N):
            out[2 * c] = mi * (j1 * v[2 * c + 1] + j2 * v[2 * c - 1])
        for c in range(N - 1):
            out[2 * c + 1] = mi * (j1 * v[2 * c] + j2 * v[2 * c + 2])
        out[S - 1] = mi * (j1 * v[S - 2])
        if periodic:
            out[0] = out[0] + mi * (j2 * v[S - 1])
            out[S - 1] = out[S - 1] + mi * (j2 * v[0])
    if gamma != 0.0:
        # -i * (+i*gamma) = +gamma on A sites, -gamma on B sites
        for c in range(0, S, 2):
            out[c] = out[c] + gamma * v[c]
        for c in range(1, S, 2):
            out[c] = out[c] - gamma * v[c]


def rk4_ssh(double complex[::1] psi, double[::1] j1, double[::1] j2,
            double gamma, double dt, Py_ssize_t n_steps,
            bint odd, bint periodic):
    """Advance psi by n_steps RK4 steps; returns the accumulated log-norm."""
    cdef Py_ssize_t S = psi.shape[0]
    k1_a = np.empty(S, dtype=np.complex128)
    k2_a = np.empty(S, dtype=np.complex128)
    k3_a = np.empty(S, dtype=np.complex128)
    k4_a = np.empty(S, dtype=np.complex128)
    tmp_a = np.empty(S, dtype=np.complex128)
    cdef double complex[::1] k1 = k1_a
    cdef double complex[::1] k2 = k2_a
    cdef double complex[::1] k3 = k3_a
    cdef double complex[::1] k4 = k4_a
    cdef double complex[::1] tmp = tmp_a
    cdef Py_ssize_t i, s
    cdef double h2 = 0.5 * dt, h6 = dt / 6.0
    cdef double nrm2, scale, log_scale = 0.0
    cdef double complex val
    for i in range(n_steps):
        _hssh_mi(psi, k1, j1[2 * i], j2[2 * i], gamma, odd, periodic)
        for s in range(S):
            tmp[s] = psi[s] + h2 * k1[s]
        _hssh_mi(tmp, k2, j1[2 * i + 1], j2[2 * i + 1], gamma, odd, periodic)
        for s in range(S):
            tmp[s] = psi[s] + h2 * k2[s]
        _hssh_mi(tmp, k3, j1[2 * i + 1], j2[2 * i + 1], gamma, odd, periodic)
        for s in range(S):
            tmp[s] = psi[s] + dt * k3[s]
        _hssh_mi(tmp, k4, j1[2 * i + 2], j2[2 * i + 2], gamma, odd, periodic)
        nrm2 = 0.0
        for s in range(S):
            val = psi[s] + h6 * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s])
            psi[s] = val
            nrm2 += val.real * val.real + val.imag * val.imag
        if nrm2 > 4.0 or nrm2 < 0.25:
            scale = sqrt(nrm2)
            log_scale += log(scale)
            scale = 1.0 / scale
            for s in range(S):
                psi[s] = psi[s] * scale
    return log_scale


cdef inline void _hcreutz_mi(double complex[::1] v, double complex[::1] out,
                             double m, double kk, double ct, double st,
                             bint periodic) nogil:
    """out = -i * H_creutz(m, k, theta) @ v with phase e^{+i theta} = ct + i*st
    on the forward A-sublattice hop (and its conjugate on B)."""
    cdef Py_ssize_t S = v.shape[0]
    cdef Py_ssize_t N = S // 2
    cdef Py_ssize_t c
    cdef double complex mi = -1j
    cdef double complex ph = ct + 1j * st      # e^{+i theta}
    cdef double complex phc = ct - 1j * st     # e^{-i theta}
    cdef double complex acc
    for c in range(N):
        acc = m * v[2 * c + 1]
        if c + 1 < N:
            acc = acc + kk * v[2 * c + 3] + kk * ph * v[2 * c + 2]
        elif periodic:
            acc = acc + kk * v[1] + kk * ph * v[0]
        if c > 0:
            acc = acc + kk * v[2 * c - 1] + kk * phc * v[2 * c - 2]
        elif periodic:
            acc = acc + kk * v[S - 1] + kk * phc * v[S - 2]
        # H carries an overall minus sign, so out = -i*(-acc) = -mi*acc
        out[2 * c] = -mi * acc
        acc = m * v[2 * c]
        if c + 1 < N:
            acc = acc + kk * v[2 * c + 2] + kk * phc * v[2 * c + 3]
        elif periodic:
            acc = acc + kk * v[0] + kk * phc * v[1]
        if c > 0:
            acc = acc + kk * v[2 * c - 2] + kk * ph * v[2 * c - 1]
        elif periodic:
            acc = acc + kk * v[S - 2] + kk * ph * v[S - 1]
        out[2 * c + 1] = -mi * acc


def rk4_creutz(double complex[::1] psi, double[::1] m, double[::1] kk,
               double[::1] ct, double[::1] st,
               double dt, Py_ssize_t n_steps, bint periodic):
    """Advance psi by n_steps RK4 steps of the Creutz ladder."""
    cdef Py_ssize_t S = psi.shape[0]
    k1_a = np.empty(S, dtype=np.complex128)
    k2_a = np.empty(S, dtype=np.complex128)
    k3_a = np.empty(S, dtype=np.complex128)
    k4_a = np.empty(S, dtype=np.complex128)
    tmp_a = np.empty(S, dtype=np.complex128)
    cdef double complex[::1] k1 = k1_a
    cdef double complex[::1] k2 = k2_a
    cdef double complex[::1] k3 = k3_a
    cdef double complex[::1] k4 = k4_a
    cdef double complex[::1] tmp = tmp_a
    cdef Py_ssize_t i, s
    cdef double h2 = 0.5 * dt, h6 = dt / 6.0
    cdef double nrm2, scale, log_scale = 0.0
    cdef double complex val
    for i in range(n_steps):
        _hcreutz_mi(psi, k1, m[2 * i], kk[2 * i], ct[2 * i], st[2 * i], periodic)
        for s in range(S):
            tmp[s] = psi[s] + h2 * k1[s]
        _hcreutz_mi(tmp, k2, m[2 * i + 1], kk[2 * i + 1], ct[2 * i + 1], st[2 * i + 1], periodic)
        for s in range(S):
            tmp[s] = psi[s] + h2 * k2[s]
        _hcreutz_mi(tmp, k3, m[2 * i + 1], kk[2 * i + 1], ct[2 * i + 1], st[2 * i + 1], periodic)
        for s in range(S):
            tmp[s] = psi[s] + dt * k3[s]
        _hcreutz_mi(tmp, k4, m[2 * i + 2], kk[2 * i + 2], ct[2 * i + 2], st[2 * i + 2], periodic)
        nrm2 = 0.0
        for s in range(S):
            val = psi[s] + h6 * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s])
            psi[s] = val
            nrm2 += val.real * val.real + val.imag * val.imag
        if nrm2 > 4.0 or nrm2 < 0.25:
            scale = sqrt(nrm2)
            log_scale += log(scale)
            scale = 1.0 / scale
            for s in range(S):
                psi[s] = psi[s] * scale
    return log_scale
