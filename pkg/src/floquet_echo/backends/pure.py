"""Pure-numpy batch kernels: the fallback used when the compiled extension
is unavailable. Vectorized over modes; the substep loop stays in Python.

The kernels implement the shared structure of both model families: static
per-mode coefficients (sx, sy, sz0) plus a mode-independent drive d(t)
added to the z component,

    a_m(t_j) = (sx_m, sy_m, sz0_m + drive_j).
"""
from __future__ import annotations

import numpy as np


def _step_matrix(ax, ay, az, dt):
    """Entries of exp(-i a.sigma dt) for arrays of coefficient vectors."""
    w = np.sqrt(ax * ax + ay * ay + az * az)
    ph = w * dt
    c = np.cos(ph)
    s = np.where(w > 0.0, np.sin(ph) / np.where(w > 0.0, w, 1.0), dt)
    e00 = c - 1j * (s * az)
    e01 = -(s * ay) - 1j * (s * ax)
    e10 = (s * ay) - 1j * (s * ax)
    e11 = c + 1j * (s * az)
    return e00, e01, e10, e11


def propagate_z_driven(static: np.ndarray, drive: np.ndarray, dt: float) -> np.ndarray:
    """One-period propagators for a batch of modes.

    static: (M, 3) float64 rows (sx, sy, sz0); drive: (S,) float64 values
    added to sz0 at the S midpoint times; dt: substep length. Returns
    (M, 2, 2) complex128 products U = E_{S-1} ... E_1 E_0.
    """
    static = np.ascontiguousarray(static, dtype=np.float64)
    drive = np.ascontiguousarray(drive, dtype=np.float64)
    m = static.shape[0]
    ax = static[:, 0]
    ay = static[:, 1]
    sz0 = static[:, 2]
    u00 = np.ones(m, dtype=np.complex128)
    u01 = np.zeros(m, dtype=np.complex128)
    u10 = np.zeros(m, dtype=np.complex128)
    u11 = np.ones(m, dtype=np.complex128)
    for d in drive:
        e00, e01, e10, e11 = _step_matrix(ax, ay, sz0 + d, dt)
        n00 = e00 * u00 + e01 * u10
        n01 = e00 * u01 + e01 * u11
        n10 = e10 * u00 + e11 * u10
        n11 = e10 * u01 + e11 * u11
        u00, u01, u10, u11 = n00, n01, n10, n11
    out = np.empty((m, 2, 2), dtype=np.complex128)
    out[:, 0, 0] = u00
    out[:, 0, 1] = u01
    out[:, 1, 0] = u10
    out[:, 1, 1] = u11
    return out


def evolve_z_driven(
    static: np.ndarray,
    drive: np.ndarray,
    dt: float,
    psi: np.ndarray,
    n_periods: int,
) -> np.ndarray:
    """Continuous stepping of a batch of states through n_periods full
    periods (S substeps each) without forming the period propagator."""
    static = np.ascontiguousarray(static, dtype=np.float64)
    drive = np.ascontiguousarray(drive, dtype=np.float64)
    ax = static[:, 0]
    ay = static[:, 1]
    sz0 = static[:, 2]
    c0 = np.array(psi[:, 0], dtype=np.complex128)
    c1 = np.array(psi[:, 1], dtype=np.complex128)
    for _ in range(int(n_periods)):
        for d in drive:
            e00, e01, e10, e11 = _step_matrix(ax, ay, sz0 + d, dt)
            n0 = e00 * c0 + e01 * c1
            n1 = e10 * c0 + e11 * c1
            c0, c1 = n0, n1
    return np.stack([c0, c1], axis=1)
