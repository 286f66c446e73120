"""Single-mode two-level propagation: exact SU(2) exponentials, the
exponential-midpoint period propagator, and the Floquet decomposition of a
one-period unitary.

All propagators are built as ordered products of closed-form 2x2 matrix
exponentials, so they are unitary with det 1 at machine precision no matter
how many substeps are taken. That matters because the fidelity is
exponentially sensitive to norm drift over thousands of periods.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

UNITARITY_TOL = 1e-10
DEGENERACY_TOL = 1e-9


class Coeffs(NamedTuple):
    """Real coefficient vector (ax, ay, az) of a traceless Hamiltonian a.sigma."""

    ax: float
    ay: float
    az: float

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.ax**2 + self.ay**2 + self.az**2))


class ModeOverlap(NamedTuple):
    """Floquet-mode occupations of the initial state and the interference
    factor q = 2ab/(a^2 + b^2)."""

    a: float
    b: float
    q: float
    degenerate: bool = False


@dataclass(frozen=True)
class FloquetMode:
    """Quasi-energy mu (folded into [0, omega0/2]) and the two orthonormal
    stroboscopic Floquet modes; `degenerate` marks |sin(mu*tau)| below the
    numerical threshold, where the eigenvectors are meaningless and are set
    to the canonical basis."""

    mu: float
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    degenerate: bool


class DegenerateInputError(ValueError):
    """Raised when a Hamiltonian has no unique ground state (|a| = 0)."""


def _check_finite(*values) -> None:
    for v in values:
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite input")


def su2_exp(a: Sequence[float], dt: float) -> np.ndarray:
    """exp(-i (a.sigma) dt) in closed form:
    cos(|a| dt) I - i sin(|a| dt) (a_hat.sigma). |a| = 0 returns I."""
    ax, ay, az = (float(c) for c in a)
    _check_finite(ax, ay, az, dt)
    w = np.sqrt(ax * ax + ay * ay + az * az)
    ph = w * dt
    c = np.cos(ph)
    s = np.sin(ph) / w if w > 0.0 else dt
    return np.array(
        [
            [c - 1j * s * az, -s * ay - 1j * s * ax],
            [s * ay - 1j * s * ax, c + 1j * s * az],
        ],
        dtype=np.complex128,
    )


def propagate_period(
    coeffs: Callable[[float], Sequence[float]], tau: float, steps: int
) -> np.ndarray:
    """One-period propagator by the exponential midpoint rule:
    U = prod_{j=steps-1..0} exp(-i a((j+1/2)dt).sigma dt), dt = tau/steps.

    Exactly unitary by construction; O(dt^2) accurate. The caller is
    responsible for coeffs being tau-periodic when U is fed to the Floquet
    decomposition.
    """
    steps = int(steps)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    _check_finite(tau)
    dt = tau / steps
    u = np.eye(2, dtype=np.complex128)
    for j in range(steps):
        u = su2_exp(coeffs((j + 0.5) * dt), dt) @ u
    return u


def unitarity_error(u: np.ndarray) -> float:
    """max-norm of U^dag U - I."""
    return float(np.max(np.abs(u.conj().T @ u - np.eye(2))))


def det_error(u: np.ndarray) -> float:
    return float(abs(u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0] - 1.0))


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Global phase convention: first nonzero component real positive."""
    pivot = v[0] if abs(v[0]) > 1e-12 else v[1]
    return v * (pivot.conjugate() / abs(pivot))


def floquet_decompose(u: np.ndarray, tau: float) -> FloquetMode:
    """Quasi-energy and Floquet modes of a one-period SU(2) propagator.

    theta = arccos(Re tr U / 2) in [0, pi] gives mu = theta/tau in
    [0, omega0/2]. The modes are the eigenvectors of the Hermitian part
    K = (U - U^dag)/(2i) = -sin(theta) n.sigma, which has a closed-form
    2x2 eigensystem: phi_plus is the eigenvector with eigenvalue
    -sin(theta), so U phi_plus = exp(-i theta) phi_plus.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    if unitarity_error(u) > UNITARITY_TOL or det_error(u) > UNITARITY_TOL:
        raise ValueError("input is not special-unitary within tolerance")
    _check_finite(tau)

    cth = min(1.0, max(-1.0, float((u[0, 0] + u[1, 1]).real) / 2.0))
    theta = float(np.arccos(cth))
    mu = theta / tau
    if abs(np.sin(theta)) < DEGENERACY_TOL:
        e0 = np.array([1.0, 0.0], dtype=np.complex128)
        e1 = np.array([0.0, 1.0], dtype=np.complex128)
        return FloquetMode(mu=mu, phi_plus=e0, phi_minus=e1, degenerate=True)

    # K = b.sigma (+ negligible trace part): bz on the diagonal, c = bx - i*by
    bz = 0.5 * (u[0, 0].imag - u[1, 1].imag)
    c = (u[0, 1] - u[1, 0].conjugate()) * (-0.5j)
    r = np.sqrt(bz * bz + abs(c) ** 2)
    # eigenvector of b.sigma for eigenvalue -r; branch chosen for stability
    if bz <= 0.0:
        v = np.array([bz - r, c.conjugate()], dtype=np.complex128)
    else:
        v = np.array([-c, bz + r], dtype=np.complex128)
    phi_plus = _fix_phase(v / np.linalg.norm(v))
    # orthogonal complement is the other eigenvector of a normal 2x2 matrix
    phi_minus = _fix_phase(
        np.array([-phi_plus[1].conjugate(), phi_plus[0].conjugate()])
    )
    return FloquetMode(mu=mu, phi_plus=phi_plus, phi_minus=phi_minus, degenerate=False)


def ground_state(a: Sequence[float]) -> np.ndarray:
    """Normalized eigenvector of a.sigma with eigenvalue -|a|, global phase
    fixed by making the first nonzero component real positive."""
    ax, ay, az = (float(c) for c in a)
    _check_finite(ax, ay, az)
    c = ax - 1j * ay
    r = np.sqrt(ax * ax + ay * ay + az * az)
    if r == 0.0:
        raise DegenerateInputError("zero coefficient vector has no unique ground state")
    if az <= 0.0:
        v = np.array([az - r, c.conjugate()], dtype=np.complex128)
    else:
        v = np.array([-c, az + r], dtype=np.complex128)
    return _fix_phase(v / np.linalg.norm(v))


def overlaps(mode: FloquetMode, psi0: np.ndarray) -> ModeOverlap:
    """Occupations a = |<phi+|psi0>|^2, b = |<phi-|psi0>|^2 and
    q = 2ab/(a^2+b^2). Degenerate modes contribute nothing to the fidelity
    integrand: the flag is propagated with (a, b, q) = (1, 0, 0)."""
    psi0 = np.asarray(psi0, dtype=np.complex128)
    nrm = np.linalg.norm(psi0)
    if abs(nrm - 1.0) > 1e-12:
        raise ValueError("initial state must be normalized")
    if mode.degenerate:
        return ModeOverlap(1.0, 0.0, 0.0, True)
    a = float(abs(np.vdot(mode.phi_plus, psi0)) ** 2)
    b = float(abs(np.vdot(mode.phi_minus, psi0)) ** 2)
    q = 2.0 * a * b / (a * a + b * b)
    return ModeOverlap(a, b, min(q, 1.0), False)
