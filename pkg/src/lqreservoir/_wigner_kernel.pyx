# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False, language_level=3
"""Compiled Wigner kernel.

W(x, p) = (1/π) Σ_L Σ_m (-1)^m c_L Re[ρ_{m,m+L} e^{iLφ}] g_m^{(L)}(y) with
y = 2(x² + p²), φ = arg(x + ip), c_0 = 1, c_L = 2, and the normalized
Laguerre functions g_m^{(L)} = √(m!/(m+L)!) y^{L/2} e^{-y/2} L_m^{(L)}(y)
advanced by their three-term recurrence in m.
"""
import numpy as np
from libc.math cimport exp, sqrt, log, lgamma, atan2, cos, sin, M_PI


def wigner_points(const double complex[:, ::1] rho, const double[::1] xs, const double[::1] ps):
    cdef Py_ssize_t dim = rho.shape[0]
    cdef Py_ssize_t npts = xs.shape[0]
    out_arr = np.zeros(npts, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double[::1] y = np.empty(npts)
    cdef double[::1] logy = np.empty(npts)
    cdef double[::1] phi = np.empty(npts)
    # per-L tables: recurrence coefficients and sign-folded diagonal of rho
    cdef double[::1] lin = np.empty(dim)
    cdef double[::1] back = np.empty(dim)
    cdef double[::1] inv = np.empty(dim)
    cdef double[::1] rr = np.empty(dim)
    cdef double[::1] ri = np.empty(dim)
    # per-point recurrence state
    cdef double[::1] ga = np.empty(npts)
    cdef double[::1] gb = np.empty(npts)
    cdef double[::1] cs = np.empty(npts)
    cdef double[::1] sn = np.empty(npts)
    cdef double[::1] diag_v = np.empty(npts)
    cdef Py_ssize_t k, m, L, n, last
    cdef double g0, g2, yk, weight, lg, sgn, inv1, a_re, a_im, cm, bm, im
    cdef bint any_nonzero

    for k in range(npts):
        y[k] = 2.0 * (xs[k] * xs[k] + ps[k] * ps[k])
        logy[k] = log(y[k]) if y[k] > 0.0 else 0.0
        phi[k] = atan2(ps[k], xs[k])

    for L in range(dim):
        n = dim - L
        any_nonzero = False
        last = -1
        sgn = 1.0
        for m in range(n):
            rr[m] = sgn * rho[m, m + L].real
            ri[m] = sgn * rho[m, m + L].imag
            if rr[m] != 0.0 or ri[m] != 0.0:
                any_nonzero = True
                last = m
            sgn = -sgn
            if m >= 2:
                lin[m] = 2.0 * m - 1.0 + L
                back[m] = sqrt((m - 1.0) * (m - 1.0 + L))
                inv[m] = 1.0 / sqrt(m * (m + L) * 1.0)
        if not any_nonzero:
            continue
        weight = 1.0 if L == 0 else 2.0
        lg = 0.5 * lgamma(L + 1.0)
        inv1 = 1.0 / sqrt(L + 1.0)
        # m = 0 and m = 1 terms, then the recurrence with points innermost
        for k in range(npts):
            yk = y[k]
            if L == 0:
                g0 = exp(-0.5 * yk)
            elif yk > 0.0:
                g0 = exp(0.5 * L * logy[k] - lg - 0.5 * yk)
            else:
                g0 = 0.0
            cs[k] = cos(L * phi[k])
            sn[k] = sin(L * phi[k])
            gb[k] = g0
            ga[k] = (1.0 + L - yk) * g0 * inv1
            diag_v[k] = (rr[0] * cs[k] - ri[0] * sn[k]) * g0
            if last >= 1:
                diag_v[k] += (rr[1] * cs[k] - ri[1] * sn[k]) * ga[k]
        for m in range(2, last + 1):
            a_re = rr[m]
            a_im = ri[m]
            cm = lin[m]
            bm = back[m]
            im = inv[m]
            for k in range(npts):
                g2 = ((cm - y[k]) * ga[k] - bm * gb[k]) * im
                gb[k] = ga[k]
                ga[k] = g2
                diag_v[k] += (a_re * cs[k] - a_im * sn[k]) * g2
        for k in range(npts):
            out[k] += weight * diag_v[k]
    for k in range(npts):
        out[k] /= M_PI
    return out_arr
