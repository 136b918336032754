# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for batched piecewise-constant propagation.

Hot loop of the Monte Carlo scan: propagate each amplitude row with the
closed-form SU(2) step exponentials and evaluate J = Tr(A)/2 + (rT.a0)/2.
The pure NumPy twin lives in ``_fallback``.
"""

from libc.math cimport cos, sin, sqrt

import numpy as np

NAME = "compiled"


def objectives_uniform(double vx, double vy,
                       double rx, double ry, double rz,
                       double ax, double ay, double az,
                       double half_trace, double dt,
                       const double[:, ::1] amplitudes not None):
    """Objective values for a batch of uniform-grid piecewise controls.

    amplitudes has shape (n_controls, n_intervals); each row is propagated
    under sigma_z + a*(vx sigma_x + vy sigma_y) for duration dt per
    interval, and J = Tr(A)/2 + (rT . a0)/2 is returned per control.
    """
    cdef Py_ssize_t n = amplitudes.shape[0]
    cdef Py_ssize_t k = amplitudes.shape[1]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    cdef Py_ssize_t i, j
    cdef double a, hx, hy, om, th, c, s
    cdef double complex u00, u01, u10, u11
    cdef double complex s00, s01, s10, s11
    cdef double complex t00, t01, t10, t11
    cdef double complex r00, r01, r10, r11
    cdef double complex q00, q01, q10, q11
    cdef double complex p00, p10, p11
    cdef double rtx, rty, rtz
    r00 = 0.5 * (1.0 + rz)
    r01 = 0.5 * (rx - 1j * ry)
    r10 = 0.5 * (rx + 1j * ry)
    r11 = 0.5 * (1.0 - rz)
    with nogil:
        for i in range(n):
            u00 = 1.0; u01 = 0.0; u10 = 0.0; u11 = 1.0
            for j in range(k):
                a = amplitudes[i, j]
                hx = a * vx
                hy = a * vy
                om = sqrt(1.0 + hx * hx + hy * hy)
                th = om * dt
                c = cos(th)
                s = sin(th) / om
                s00 = c - 1j * s
                s11 = c + 1j * s
                s01 = -1j * s * (hx - 1j * hy)
                s10 = -1j * s * (hx + 1j * hy)
                t00 = s00 * u00 + s01 * u10
                t01 = s00 * u01 + s01 * u11
                t10 = s10 * u00 + s11 * u10
                t11 = s10 * u01 + s11 * u11
                u00 = t00; u01 = t01; u10 = t10; u11 = t11
            # q = U rho0
            q00 = u00 * r00 + u01 * r10
            q01 = u00 * r01 + u01 * r11
            q10 = u10 * r00 + u11 * r10
            q11 = u10 * r01 + u11 * r11
            # p = q U^dagger (only the entries feeding the Bloch vector)
            p00 = q00 * u00.conjugate() + q01 * u01.conjugate()
            p10 = q10 * u00.conjugate() + q11 * u01.conjugate()
            p11 = q10 * u10.conjugate() + q11 * u11.conjugate()
            rtx = 2.0 * p10.real
            rty = 2.0 * p10.imag
            rtz = p00.real - p11.real
            res[i] = half_trace + 0.5 * (rtx * ax + rty * ay + rtz * az)
    return out
