# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels for the hot loop: ordered products of closed-form
SU(2) substep exponentials over the drive period, per momentum mode.

Mirrors backends/pure.py operation for operation; the pure module is the
import-time fallback when this extension is not built.
"""
import numpy as np

from libc.math cimport cos, sin, sqrt


def propagate_z_driven(double[:, ::1] static, double[::1] drive, double dt):
    """One-period propagators for a batch of modes.

    static: (M, 3) rows (sx, sy, sz0); drive: (S,) z-axis offsets at the
    midpoint times; returns (M, 2, 2) complex128.
    """
    cdef Py_ssize_t m_count = static.shape[0]
    cdef Py_ssize_t s_count = drive.shape[0]
    out = np.empty((m_count, 2, 2), dtype=np.complex128)
    cdef double complex[:, :, ::1] u_view = out
    cdef Py_ssize_t m, j
    cdef double ax, ay, sz0, az, w, ph, c, s
    cdef double complex u00, u01, u10, u11
    cdef double complex e00, e01, e10, e11
    cdef double complex t00, t01, t10, t11
    with nogil:
        for m in range(m_count):
            ax = static[m, 0]
            ay = static[m, 1]
            sz0 = static[m, 2]
            u00 = 1.0
            u01 = 0.0
            u10 = 0.0
            u11 = 1.0
            for j in range(s_count):
                az = sz0 + drive[j]
                w = sqrt(ax * ax + ay * ay + az * az)
                ph = w * dt
                c = cos(ph)
                s = sin(ph) / w if w > 0.0 else dt
                e00 = c - 1j * (s * az)
                e01 = -(s * ay) - 1j * (s * ax)
                e10 = (s * ay) - 1j * (s * ax)
                e11 = c + 1j * (s * az)
                t00 = e00 * u00 + e01 * u10
                t01 = e00 * u01 + e01 * u11
                t10 = e10 * u00 + e11 * u10
                t11 = e10 * u01 + e11 * u11
                u00 = t00
                u01 = t01
                u10 = t10
                u11 = t11
            u_view[m, 0, 0] = u00
            u_view[m, 0, 1] = u01
            u_view[m, 1, 0] = u10
            u_view[m, 1, 1] = u11
    return out


def evolve_z_driven(double[:, ::1] static, double[::1] drive, double dt,
                    double complex[:, ::1] psi, Py_ssize_t n_periods):
    """Continuous stepping of a batch of states through n_periods periods."""
    cdef Py_ssize_t m_count = static.shape[0]
    cdef Py_ssize_t s_count = drive.shape[0]
    out = np.array(psi, dtype=np.complex128, copy=True)
    cdef double complex[:, ::1] p_view = out
    cdef Py_ssize_t m, j, rep
    cdef double ax, ay, sz0, az, w, ph, c, s
    cdef double complex c0, c1, n0, n1
    cdef double complex e00, e01, e10, e11
    with nogil:
        for m in range(m_count):
            ax = static[m, 0]
            ay = static[m, 1]
            sz0 = static[m, 2]
            c0 = p_view[m, 0]
            c1 = p_view[m, 1]
            for rep in range(n_periods):
                for j in range(s_count):
                    az = sz0 + drive[j]
                    w = sqrt(ax * ax + ay * ay + az * az)
                    ph = w * dt
                    c = cos(ph)
                    s = sin(ph) / w if w > 0.0 else dt
                    e00 = c - 1j * (s * az)
                    e01 = -(s * ay) - 1j * (s * ax)
                    e10 = (s * ay) - 1j * (s * ax)
                    e11 = c + 1j * (s * az)
                    n0 = e00 * c0 + e01 * c1
                    n1 = e10 * c0 + e11 * c1
                    c0 = n0
                    c1 = n1
            p_view[m, 0] = c0
            p_view[m, 1] = c1
    return out
