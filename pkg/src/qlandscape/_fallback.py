"""Pure NumPy implementation of the hot kernel.

Mirrors ``_speedups`` operation for operation (same step construction,
same multiplication order) so the two backends agree to a few ulp; used
automatically when the compiled extension is unavailable.
"""

import numpy as np

NAME = "pure"


def objectives_uniform(vx, vy, rx, ry, rz, ax, ay, az, half_trace, dt, amplitudes):
    """Objective values for a batch of uniform-grid piecewise controls.

    amplitudes has shape (n_controls, n_intervals); each row is propagated
    under sigma_z + a*(vx sigma_x + vy sigma_y) for duration dt per
    interval, and J = Tr(A)/2 + (rT . a0)/2 is returned per control.
    """
    amp = np.asarray(amplitudes, dtype=float)
    if amp.ndim != 2:
        raise ValueError(f"amplitudes must be 2-D, got shape {amp.shape}")
    n, k = amp.shape
    hx = amp * vx
    hy = amp * vy
    om = np.sqrt(1.0 + hx * hx + hy * hy)
    th = om * dt
    c = np.cos(th)
    s = np.sin(th) / om
    u = np.zeros((n, 2, 2), dtype=complex)
    u[:, 0, 0] = 1.0
    u[:, 1, 1] = 1.0
    step = np.empty((n, 2, 2), dtype=complex)
    for j in range(k):
        step[:, 0, 0] = c[:, j] - 1j * s[:, j]
        step[:, 1, 1] = c[:, j] + 1j * s[:, j]
        step[:, 0, 1] = -1j * s[:, j] * (hx[:, j] - 1j * hy[:, j])
        step[:, 1, 0] = -1j * s[:, j] * (hx[:, j] + 1j * hy[:, j])
        u = step @ u
    r00 = 0.5 * (1.0 + rz)
    r01 = 0.5 * (rx - 1j * ry)
    r10 = 0.5 * (rx + 1j * ry)
    r11 = 0.5 * (1.0 - rz)
    rho0 = np.array([[r00, r01], [r10, r11]])
    rho_t = u @ rho0 @ np.conj(np.transpose(u, (0, 2, 1)))
    rtx = 2.0 * rho_t[:, 1, 0].real
    rty = 2.0 * rho_t[:, 1, 0].imag
    rtz = (rho_t[:, 0, 0] - rho_t[:, 1, 1]).real
    return half_trace + 0.5 * (rtx * ax + rty * ay + rtz * az)
