"""Per-site log-fidelity g_n from per-mode Floquet data, its decohered
reference g_dec, the asymptotic limit g_inf (closed form and series), and
the direct-evolution oracle.

Per mode with occupations a = |r+|^2, b = |r-|^2 and quasi-phase
theta = mu*tau:

    |z_n|^2 = a^2 + b^2 + 2ab cos(2 n theta),
    g_n     = w * sum_k log |z_n(k)|^2,

with w the quadrature weight of the momentum grid (1/L in 1D; the quadrant
Riemann weight in 2D). All reductions use exact summation in ascending
momentum order, so results are identical no matter how the mode map is
chunked across workers.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import backends
from .models import (
    DiracParams,
    DriveParams,
    default_steps,
    grid_1d,
    grid_2d,
)
from .numerics import LOG_FLOOR, clamped_log, cos_mult_angle, exact_sum
from .su2 import DEGENERACY_TOL, ModeOverlap

LN2 = float(np.log(2.0))


class ModeRecord(NamedTuple):
    """One momentum mode's Floquet data (row view of a FloquetTable)."""

    momentum: object
    mu: float
    overlap: ModeOverlap
    degenerate: bool


@dataclass(frozen=True)
class TableDiagnostics:
    """Worst-case invariant violations across the batch, collected while
    building (criterion material: unitarity, det, overlap sum rule)."""

    max_unitarity_err: float
    max_det_err: float
    max_norm_err: float
    n_degenerate: int


@dataclass(frozen=True)
class FloquetTable:
    """Floquet data for every mode of a momentum grid, ascending order."""

    params: object
    L: int
    ndim: int
    momenta: np.ndarray = field(repr=False)  # (M,) in 1D, (M, 2) in 2D
    theta: np.ndarray = field(repr=False)  # mu * tau, in [0, pi]
    mu: np.ndarray = field(repr=False)
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    q: np.ndarray = field(repr=False)
    degenerate: np.ndarray = field(repr=False)
    steps: int
    diagnostics: TableDiagnostics

    @property
    def tau(self) -> float:
        return self.params.tau

    @property
    def size(self) -> int:
        return self.theta.shape[0]

    @property
    def weight(self) -> float:
        """Quadrature weight per mode: (1/L) sum_k in 1D
        (Delta k = 2 pi / L), (pi/a)^2 / (L^2 (2 pi)^2) in 2D."""
        if self.ndim == 1:
            return 1.0 / self.L
        return 1.0 / (4.0 * self.L * self.L * self.params.a**2)

    def row(self, i: int) -> ModeRecord:
        mom = self.momenta[i] if self.ndim == 1 else tuple(self.momenta[i])
        deg = bool(self.degenerate[i])
        ov = ModeOverlap(float(self.a[i]), float(self.b[i]), float(self.q[i]), deg)
        return ModeRecord(mom, float(self.mu[i]), ov, deg)


# ---------------------------------------------------------------------------
# batched closed-form 2x2 linear algebra


def _eigvec_minus(bz, c):
    """Eigenvector of [[bz, c], [conj(c), -bz]] for eigenvalue -r, r=|b|.
    Branch on the sign of bz for stability; columns returned unnormalized."""
    r = np.sqrt(bz * bz + np.abs(c) ** 2)
    lower = bz <= 0.0
    v0 = np.where(lower, bz - r, -c)
    v1 = np.where(lower, np.conj(c), bz + r)
    nrm = np.sqrt(np.abs(v0) ** 2 + np.abs(v1) ** 2)
    # phase convention: first effectively-nonzero component real positive
    pivot = np.where(np.abs(v0) > 1e-12 * nrm, v0, v1)
    ph = np.conj(pivot) / np.abs(pivot)
    return v0 / nrm * ph, v1 / nrm * ph


def _ground_batch(ax, ay, az):
    """Ground states of a.sigma (eigenvalue -|a|) for arrays of coefficient
    vectors; grids keep |a| > 0 so no degeneracy handling is needed here."""
    return _eigvec_minus(np.asarray(az, dtype=np.float64), ax - 1j * ay)


def _decompose_batch(u, tau):
    """Vectorized Floquet decomposition of a batch of SU(2) propagators.

    Returns (theta, degenerate, phi+ components, phi- components) plus the
    worst unitarity and det deviations for diagnostics.
    """
    u00, u01, u10, u11 = u[:, 0, 0], u[:, 0, 1], u[:, 1, 0], u[:, 1, 1]
    d00 = np.abs(u00) ** 2 + np.abs(u10) ** 2 - 1.0
    d11 = np.abs(u01) ** 2 + np.abs(u11) ** 2 - 1.0
    doff = np.conj(u00) * u01 + np.conj(u10) * u11
    uni_err = float(
        max(np.max(np.abs(d00)), np.max(np.abs(d11)), np.max(np.abs(doff)))
    )
    det_err = float(np.max(np.abs(u00 * u11 - u01 * u10 - 1.0)))

    cth = np.clip(np.real(u00 + u11) / 2.0, -1.0, 1.0)
    theta = np.arccos(cth)
    degenerate = np.abs(np.sin(theta)) < DEGENERACY_TOL

    bz = 0.5 * (np.imag(u00) - np.imag(u11))
    c = (u01 - np.conj(u10)) * (-0.5j)
    # guard the degenerate rows against 0/0; their vectors are overwritten
    c = np.where(degenerate, 1.0 + 0.0j, c)
    vp0, vp1 = _eigvec_minus(np.where(degenerate, 0.0, bz), c)
    vp0 = np.where(degenerate, 1.0 + 0.0j, vp0)
    vp1 = np.where(degenerate, 0.0 + 0.0j, vp1)
    vm0, vm1 = -np.conj(vp1), np.conj(vp0)
    # re-apply the phase convention to phi-
    pivot = np.where(np.abs(vm0) > 1e-12, vm0, vm1)
    ph = np.conj(pivot) / np.abs(pivot)
    vm0, vm1 = vm0 * ph, vm1 * ph
    return theta, degenerate, (vp0, vp1), (vm0, vm1), uni_err, det_err


# ---------------------------------------------------------------------------
# table construction


def _drive_series(params, steps: int) -> np.ndarray:
    """Mode-independent z-drive sampled at the midpoint times."""
    dt = params.tau / steps
    t = (np.arange(steps) + 0.5) * dt
    if isinstance(params, DriveParams):
        return -params.A * np.cos(params.omega0 * t + params.phi0)
    return params.m0 * np.cos(params.omega0 * t)


def _static_and_initial(params, momenta):
    """Static coefficient rows and the t = 0 coefficient vectors whose
    ground states are the per-mode initial states."""
    if isinstance(params, DriveParams):
        ks = momenta
        static = np.column_stack(
            [np.zeros_like(ks), np.sin(ks), np.cos(ks) - params.h]
        )
        a0 = static.copy()
        a0[:, 2] = np.cos(ks) - params.h_t(0.0)
    else:
        kx, ky = momenta[:, 0], momenta[:, 1]
        static = np.column_stack(
            [params.vF * kx, params.vF * ky, np.zeros_like(kx)]
        )
        a0 = static.copy()
        a0[:, 2] = params.m_t(0.0)
    return static, a0


def _build_chunk(args):
    """Worker body: Floquet data for one contiguous slice of the grid.
    Pure function of its arguments, so chunking cannot change any value."""
    params, momenta, steps = args
    static, a0 = _static_and_initial(params, momenta)
    dt = params.tau / steps
    u = backends.propagate_z_driven(static, _drive_series(params, steps), dt)
    theta, degen, (vp0, vp1), (vm0, vm1), uni_err, det_err = _decompose_batch(
        u, params.tau
    )
    g0, g1 = _ground_batch(a0[:, 0], a0[:, 1], a0[:, 2])
    rp = np.conj(vp0) * g0 + np.conj(vp1) * g1
    rm = np.conj(vm0) * g0 + np.conj(vm1) * g1
    a = np.abs(rp) ** 2
    b = np.abs(rm) ** 2
    norm_err = float(np.max(np.abs(a + b - 1.0)))
    a = np.where(degen, 1.0, a)
    b = np.where(degen, 0.0, b)
    q = np.where(degen, 0.0, np.minimum(2.0 * a * b / (a * a + b * b), 1.0))
    return theta, a, b, q, degen, uni_err, det_err, norm_err


def floquet_table(params, L: int, steps: int | None = None, workers: int = 1) -> FloquetTable:
    """Build the per-mode Floquet table for an Ising chain (DriveParams)
    or the 2D Dirac model (DiracParams) on its momentum grid.

    workers > 1 maps contiguous grid chunks over a process pool; values are
    identical for any worker count.
    """
    steps = int(steps) if steps is not None else default_steps(params)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if isinstance(params, DriveParams):
        grid = grid_1d(L)
        momenta = grid.ks
        ndim = 1
    elif isinstance(params, DiracParams):
        grid = grid_2d(L, params.a)
        momenta = np.column_stack([grid.kx, grid.ky])
        ndim = 2
    else:
        raise TypeError(f"unsupported parameter type {type(params)!r}")

    workers = max(1, int(workers))
    if workers == 1 or momenta.shape[0] < 2 * workers:
        parts = [_build_chunk((params, momenta, steps))]
    else:
        chunks = np.array_split(momenta, workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_build_chunk, [(params, c, steps) for c in chunks]))

    theta = np.concatenate([p[0] for p in parts])
    a = np.concatenate([p[1] for p in parts])
    b = np.concatenate([p[2] for p in parts])
    q = np.concatenate([p[3] for p in parts])
    degen = np.concatenate([p[4] for p in parts])
    diag = TableDiagnostics(
        max_unitarity_err=max(p[5] for p in parts),
        max_det_err=max(p[6] for p in parts),
        max_norm_err=max(p[7] for p in parts),
        n_degenerate=int(np.count_nonzero(degen)),
    )
    return FloquetTable(
        params=params,
        L=int(L),
        ndim=ndim,
        momenta=momenta,
        theta=theta,
        mu=theta / params.tau,
        a=a,
        b=b,
        q=q,
        degenerate=degen,
        steps=steps,
        diagnostics=diag,
    )


# ---------------------------------------------------------------------------
# g-value assembly


def log_mode_term(ov: ModeOverlap, mu: float, n: int, tau: float) -> float:
    """log |z_n|^2 = log(a^2 + b^2 + 2ab cos(2 mu n tau)) for one mode;
    clamped at the documented floor, 0 for degenerate modes and for n = 0
    (where |z_0|^2 = (a+b)^2 = 1 by the sum rule)."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0 or ov.degenerate:
        return 0.0
    cphi = float(cos_mult_angle(mu * tau, 2 * n))
    arg = ov.a**2 + ov.b**2 + 2.0 * ov.a * ov.b * cphi
    return float(np.log(max(arg, LOG_FLOOR)))


def finite_mode_terms(table: FloquetTable, n: int):
    """Per-mode log |z_n|^2 terms plus the clamp-event count."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return np.zeros(table.size), 0
    cphi = cos_mult_angle(table.theta, 2 * n)
    arg = table.a**2 + table.b**2 + 2.0 * table.a * table.b * cphi
    terms, clamps = clamped_log(arg)
    return np.where(table.degenerate, 0.0, terms), clamps


def asymptotic_mode_terms(table: FloquetTable) -> np.ndarray:
    """Per-mode n -> infinity integrand: -log(2(1+q)/(1+sqrt(1-q^2)))."""
    s = np.sqrt(np.maximum(0.0, 1.0 - table.q**2))
    return np.log1p(s) - LN2 - np.log1p(table.q)


def g_n(table: FloquetTable, n: int) -> float:
    """Per-site log-fidelity after n periods; exactly 0 at n = 0."""
    if int(n) == 0:
        return 0.0
    terms, _ = finite_mode_terms(table, n)
    return table.weight * exact_sum(terms)


def g_dec(table: FloquetTable) -> float:
    """Decohered reference: -w sum_k log(1 + q_k). Upper bound on the true
    asymptotic value; equals it only when every q_k vanishes."""
    return -table.weight * exact_sum(np.log1p(table.q))


def g_inf_closed(table: FloquetTable) -> float:
    """Exact n -> infinity limit: -w sum_k log(2(1+q)/(1+sqrt(1-q^2)))."""
    return table.weight * exact_sum(asymptotic_mode_terms(table))


def series_tail(q, p_max: int):
    """sum_{p=1}^{p_max} c_p q^{2p} with c_p = (2p-1)!!/(2p (2p)!!), by the
    stable ratio recurrence c_{p+1} = c_p * 2p(2p+1)/(2p+2)^2 (no factorial
    overflow)."""
    p_max = int(p_max)
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    q = np.asarray(q, dtype=np.float64)
    u = q * q
    total = np.zeros_like(u)
    upow = np.ones_like(u)
    c = 0.25
    for p in range(1, p_max + 1):
        upow = upow * u
        total = total + c * upow
        c *= 2.0 * p * (2.0 * p + 1.0) / (2.0 * p + 2.0) ** 2
    return total


def g_inf_series(table: FloquetTable, p_max: int = 200) -> float:
    """Series form of the asymptotic limit: g_dec - w sum_k sum_p c_p q^{2p}."""
    return g_dec(table) - table.weight * exact_sum(series_tail(table.q, p_max))


def bound_gap(table: FloquetTable, n: int) -> float:
    """g_dec + w sum_k q_k cos(2 mu_k n tau) - g_n: the log(1+x) <= x upper
    bound; nonnegative up to rounding for every (n, table)."""
    cphi = cos_mult_angle(table.theta, 2 * int(n))
    rhs = g_dec(table) + table.weight * exact_sum(table.q * cphi)
    return rhs - g_n(table, n)


# ---------------------------------------------------------------------------
# direct-evolution oracle


def direct_fidelity(
    params,
    L: int,
    n: int,
    steps: int | None = None,
    method: str = "power",
) -> float:
    """Per-site log return probability after n periods by explicit state
    evolution: no Floquet decomposition anywhere on this path, which makes
    it the independent cross-check for g_n.

    method "power" applies the one-period propagator n times; "stepwise"
    marches the states through every substep of every period.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 0.0
    steps = int(steps) if steps is not None else default_steps(params)
    if isinstance(params, DriveParams):
        momenta = grid_1d(L).ks
        weight = 1.0 / L
    elif isinstance(params, DiracParams):
        g2 = grid_2d(L, params.a)
        momenta = np.column_stack([g2.kx, g2.ky])
        weight = 1.0 / (4.0 * L * L * params.a**2)
    else:
        raise TypeError(f"unsupported parameter type {type(params)!r}")
    static, a0 = _static_and_initial(params, momenta)
    g0, g1 = _ground_batch(a0[:, 0], a0[:, 1], a0[:, 2])
    psi0 = np.stack([g0, g1], axis=1)
    dt = params.tau / steps
    drive = _drive_series(params, steps)
    if method == "stepwise":
        psi = backends.evolve_z_driven(static, drive, dt, psi0, n)
        c0, c1 = psi[:, 0], psi[:, 1]
    elif method == "power":
        u = backends.propagate_z_driven(static, drive, dt)
        c0, c1 = g0.copy(), g1.copy()
        for _ in range(n):
            c0, c1 = (
                u[:, 0, 0] * c0 + u[:, 0, 1] * c1,
                u[:, 1, 0] * c0 + u[:, 1, 1] * c1,
            )
    else:
        raise ValueError(f"unknown method {method!r}")
    w = np.conj(g0) * c0 + np.conj(g1) * c1
    terms, _ = clamped_log(np.abs(w) ** 2)
    return weight * exact_sum(terms)


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class FidelityCurve:
    """g_n over a list of n values for one parameter set, with the decohered
    and asymptotic reference levels and the clamp-event audit count."""

    params: object
    L: int
    entries: tuple
    g_dec: float
    g_inf: float
    clamp_events: int

    def __post_init__(self):
        if self.g_inf > self.g_dec + 1e-12:
            raise ValueError("g_inf must not exceed g_dec")


def _tidy_g(value: float) -> float:
    """g <= 0 is a theorem; clip summation dust, refuse real violations."""
    if value > 1e-9:
        raise AssertionError(f"g = {value} > 0 beyond rounding; numerical bug")
    return min(value, 0.0)


def fidelity_curve(
    params,
    L: int,
    n_list: Sequence[int],
    steps: int | None = None,
    workers: int = 1,
) -> FidelityCurve:
    """Build the table once and evaluate g_n for every n in n_list."""
    if len(n_list) == 0:
        raise ValueError("n_list must not be empty")
    table = floquet_table(params, L, steps=steps, workers=workers)
    entries = []
    clamp_total = 0
    for n in n_list:
        if int(n) == 0:
            entries.append((0, 0.0))
            continue
        terms, clamps = finite_mode_terms(table, n)
        clamp_total += clamps
        entries.append((int(n), _tidy_g(table.weight * exact_sum(terms))))
    return FidelityCurve(
        params=params,
        L=int(L),
        entries=tuple(entries),
        g_dec=_tidy_g(g_dec(table)),
        g_inf=_tidy_g(g_inf_closed(table)),
        clamp_events=clamp_total,
    )
