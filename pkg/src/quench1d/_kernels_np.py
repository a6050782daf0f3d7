"""Pure-numpy RK4 kernels, used when the compiled extension is unavailable.

Same contract as ``_core``: psi is updated in place, couplings come
pre-sampled on the half-step grid, the return value is the accumulated
log-norm removed by renormalization.
"""
from __future__ import annotations

import numpy as np


def _hssh_mi(v, out, j1, j2, gamma, odd, periodic):
    """out = -i * H_ssh(j1, j2, gamma) @ v (interleaved A/B basis)."""
    out[:] = 0.0
    a = v[0::2]
    b = v[1::2]
    oa = out[0::2]
    ob = out[1::2]
    if odd:
        oa[:-1] += j1 * b
        oa[1:] += j2 * b
        ob += j1 * a[:-1] + j2 * a[1:]
    else:
        oa += j1 * b
        ob += j1 * a
        oa[1:] += j2 * b[:-1]
        ob[:-1] += j2 * a[1:]
        if periodic:
            out[0] += j2 * v[-1]
            out[-1] += j2 * v[0]
    out *= -1j
    if gamma != 0.0:
        oa += gamma * a
        ob -= gamma * b


def rk4_ssh(psi, j1, j2, gamma, dt, n_steps, odd, periodic):
    S = psi.shape[0]
    k1 = np.empty(S, np.complex128)
    k2 = np.empty(S, np.complex128)
    k3 = np.empty(S, np.complex128)
    k4 = np.empty(S, np.complex128)
    tmp = np.empty(S, np.complex128)
    log_scale = 0.0
    for i in range(n_steps):
        _hssh_mi(psi, k1, j1[2 * i], j2[2 * i], gamma, odd, periodic)
        np.multiply(k1, 0.5 * dt, out=tmp)
        tmp += psi
        _hssh_mi(tmp, k2, j1[2 * i + 1], j2[2 * i + 1], gamma, odd, periodic)
        np.multiply(k2, 0.5 * dt, out=tmp)
        tmp += psi
        _hssh_mi(tmp, k3, j1[2 * i + 1], j2[2 * i + 1], gamma, odd, periodic)
        np.multiply(k3, dt, out=tmp)
        tmp += psi
        _hssh_mi(tmp, k4, j1[2 * i + 2], j2[2 * i + 2], gamma, odd, periodic)
        k2 += k3
        k2 *= 2.0
        k1 += k4
        k1 += k2
        k1 *= dt / 6.0
        psi += k1
        nrm2 = float(psi.real @ psi.real + psi.imag @ psi.imag)
        if nrm2 > 4.0 or nrm2 < 0.25:
            nrm = np.sqrt(nrm2)
            psi /= nrm
            log_scale += np.log(nrm)
    return log_scale


def _hcreutz_mi(v, out, m, kk, ct, st, periodic):
    """out = -i * H_creutz @ v with e^{+i theta} on the forward A-bond."""
    ph = complex(ct, st)
    phc = ph.conjugate()
    a = v[0::2]
    b = v[1::2]
    out[:] = 0.0
    oa = out[0::2]
    ob = out[1::2]
    oa += m * b
    ob += m * a
    oa[:-1] += kk * b[1:]
    oa[1:] += kk * b[:-1]
    ob[:-1] += kk * a[1:]
    ob[1:] += kk * a[:-1]
    oa[:-1] += (kk * ph) * a[1:]
    oa[1:] += (kk * phc) * a[:-1]
    ob[:-1] += (kk * phc) * b[1:]
    ob[1:] += (kk * ph) * b[:-1]
    if periodic:
        oa[-1] += kk * b[0] + (kk * ph) * a[0]
        oa[0] += kk * b[-1] + (kk * phc) * a[-1]
        ob[-1] += kk * a[0] + (kk * phc) * b[0]
        ob[0] += kk * a[-1] + (kk * ph) * b[-1]
    out *= 1j  # -i * (overall minus sign of H)


def rk4_creutz(psi, m, kk, ct, st, dt, n_steps, periodic):
    S = psi.shape[0]
    k1 = np.empty(S, np.complex128)
    k2 = np.empty(S, np.complex128)
    k3 = np.empty(S, np.complex128)
    k4 = np.empty(S, np.complex128)
    tmp = np.empty(S, np.complex128)
    log_scale = 0.0
    for i in range(n_steps):
        _hcreutz_mi(psi, k1, m[2 * i], kk[2 * i], ct[2 * i], st[2 * i], periodic)
        np.multiply(k1, 0.5 * dt, out=tmp)
        tmp += psi
        _hcreutz_mi(tmp, k2, m[2 * i + 1], kk[2 * i + 1], ct[2 * i + 1], st[2 * i + 1], periodic)
        np.multiply(k2, 0.5 * dt, out=tmp)
        tmp += psi
        _hcreutz_mi(tmp, k3, m[2 * i + 1], kk[2 * i + 1], ct[2 * i + 1], st[2 * i + 1], periodic)
        np.multiply(k3, dt, out=tmp)
        tmp += psi
        _hcreutz_mi(tmp, k4, m[2 * i + 2], kk[2 * i + 2], ct[2 * i + 2], st[2 * i + 2], periodic)
        k2 += k3
        k2 *= 2.0
        k1 += k4
        k1 += k2
        k1 *= dt / 6.0
        psi += k1
        nrm2 = float(psi.real @ psi.real + psi.imag @ psi.imag)
        if nrm2 > 4.0 or nrm2 < 0.25:
            nrm = np.sqrt(nrm2)
            psi /= nrm
            log_scale += np.log(nrm)
    return log_scale
