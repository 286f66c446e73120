"""Mode-Hamiltonian families and momentum grids.

Ising chain (J = 1, critical point at h = 1): after the fermionic mapping
each momentum k in (0, pi) is an independent two-level system in the
(|0>, |k,-k>) basis,

    H_k(t) = (-h(t) + cos k) sigma_z + (sin k) sigma_y,
    h(t)   = h + A cos(omega0 t + phi0).

2D massive Dirac model: H(k) = m(t) sigma_z + vF (kx sigma_x + ky sigma_y)
with m(t) = m0 cos(omega0 t), momentum cutoff pi/a per axis.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .su2 import Coeffs

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class DriveParams:
    """Sinusoidal transverse-field drive h(t) = h + A cos(omega0 t + phi0)."""

    h: float = 1.0
    A: float = 1.0
    omega0: float = 1.0
    phi0: float = 0.0

    def __post_init__(self):
        for v in (self.h, self.A, self.omega0, self.phi0):
            if not np.isfinite(v):
                raise ValueError("drive parameters must be finite")
        if self.omega0 <= 0.0:
            raise ValueError("omega0 must be positive")

    @property
    def tau(self) -> float:
        return TWO_PI / self.omega0

    def h_t(self, t: float) -> float:
        return self.h + self.A * np.cos(self.omega0 * t + self.phi0)


@dataclass(frozen=True)
class DiracParams:
    """Periodic mass drive m(t) = m0 cos(omega0 t); hbar*vF = 1 and lattice
    cutoff a = 1 by default (the only dimensionless choice consistent with
    frequencies of order the bandwidth)."""

    m0: float = 1.0
    omega0: float = 1.0
    vF: float = 1.0
    a: float = 1.0

    def __post_init__(self):
        for v in (self.m0, self.omega0, self.vF, self.a):
            if not np.isfinite(v):
                raise ValueError("Dirac parameters must be finite")
        if self.omega0 <= 0.0:
            raise ValueError("omega0 must be positive")
        if self.a <= 0.0:
            raise ValueError("lattice cutoff a must be positive")

    @property
    def tau(self) -> float:
        return TWO_PI / self.omega0

    def m_t(self, t: float) -> float:
        return self.m0 * np.cos(self.omega0 * t)


@dataclass(frozen=True)
class MomentumGrid1D:
    """Antiperiodic momenta k_p = (2p+1) pi / L, p = 0..L/2-1, all in (0, pi).

    k = 0 and k = pi are excluded by construction; there the mode
    Hamiltonian commutes with itself at all times and the Floquet problem
    degenerates.
    """

    L: int
    ks: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.L // 2


@dataclass(frozen=True)
class MomentumGrid2D:
    """Half-step-offset grid k = (pi/(L a))(n + 1/2), n = 0..L-1 per axis,
    tiling the quadrant (0, pi/a)^2 with L^2 points. The offset keeps the
    Dirac point (where the period propagator is the identity) off the grid."""

    L: int
    a: float
    kx: np.ndarray = field(repr=False)  # (L^2,), lexicographic in (kx, ky)
    ky: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.L * self.L


def grid_1d(L: int) -> MomentumGrid1D:
    L = int(L)
    if L < 4 or L % 4 != 0:
        raise ValueError(f"L must be a multiple of 4 and >= 4, got {L}")
    p = np.arange(L // 2)
    return MomentumGrid1D(L=L, ks=(2 * p + 1) * np.pi / L)


def grid_2d(L: int, a: float = 1.0) -> MomentumGrid2D:
    L = int(L)
    if L < 2:
        raise ValueError(f"2D grid needs L >= 2, got {L}")
    if a <= 0.0:
        raise ValueError("lattice cutoff a must be positive")
    axis = (np.arange(L) + 0.5) * np.pi / (L * a)
    kx, ky = np.meshgrid(axis, axis, indexing="ij")
    return MomentumGrid2D(L=L, a=float(a), kx=kx.ravel(), ky=ky.ravel())


def ising_mode_coeffs(k: float, drive: DriveParams, t: float) -> Coeffs:
    """(0, sin k, -h(t) + cos k); the dynamics stays in the sigma_y/sigma_z
    plane."""
    return Coeffs(0.0, float(np.sin(k)), float(-drive.h_t(t) + np.cos(k)))


def dirac_mode_coeffs(kx: float, ky: float, p: DiracParams, t: float) -> Coeffs:
    return Coeffs(p.vF * kx, p.vF * ky, float(p.m_t(t)))


def frequency_bound(params) -> float:
    """Upper bound on |a| over the grid and the drive cycle, used to set the
    default substep count."""
    if isinstance(params, DriveParams):
        return abs(params.h) + abs(params.A) + 1.0
    if isinstance(params, DiracParams):
        return abs(params.m0) + params.vF * np.pi * np.sqrt(2.0) / params.a
    raise TypeError(f"unsupported parameter type {type(params)!r}")


def default_steps(params) -> int:
    """Substeps per period such that doubling them moves any g value by
    well under 1e-8.

    Calibrated against measured O(1/steps^2) convergence of the midpoint
    propagator: the structured region omega0 <= 8 (Floquet resonances, long
    periods) needs 2^15 substeps to push step-doubling deltas below ~2e-9;
    above it 2048 leaves an order of magnitude of margin. The
    64-substeps-per-fastest-oscillation term guards strong-drive corners.
    """
    base = int(np.ceil(64.0 * frequency_bound(params) / params.omega0))
    floor = 32768 if params.omega0 <= 8.0 else 2048
    return max(floor, base)
