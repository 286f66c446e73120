"""Structure of g_n(omega0): coherent-destruction-of-tunneling peaks at the
zeros of J0(2/omega0), dips at omega0 = 4/m from Floquet quasi-degeneracies,
per-mode integrand/resonance profiles, and the high-frequency limit.

The Bessel zeros are computed internally (power series + Hankel form,
bracketing + bisection) so the peak predictions are self-contained.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .fidelity import (
    FloquetTable,
    asymptotic_mode_terms,
    finite_mode_terms,
    floquet_table,
)
from .models import DriveParams

# ---------------------------------------------------------------------------
# Bessel J0: power series on |x| <= 8, Hankel asymptotic form beyond.
# The P/Q rational coefficients are the public-domain Cephes fits
# (Stephen L. Moshier, Cephes Math Library Release 2.1, 1989), accurate to
# ~4e-16 for x > 5.

_SQ2OPI = 7.9788456080286535588e-1  # sqrt(2/pi)
_PIO4 = 7.85398163397448309616e-1

_PP = [
    7.96936729297347051624e-4,
    8.28352392107440799803e-2,
    1.23953371646414299388e0,
    5.44725003058768775090e0,
    8.74716500199817011941e0,
    5.30324038235394892183e0,
    9.99999999999999997821e-1,
]
_PQ = [
    9.24408810558863637013e-4,
    8.56288474354474431428e-2,
    1.25352743901058953537e0,
    5.47097740330417105182e0,
    8.76190883237069594232e0,
    5.30605288235394617618e0,
    1.00000000000000000218e0,
]
_QP = [
    -1.13663838898469149931e-2,
    -1.28252718670509318512e0,
    -1.95539544257735972385e1,
    -9.32060152123768231369e1,
    -1.77681167980488050595e2,
    -1.47077505154951170175e2,
    -5.14105326766599330220e1,
    -6.05014350600728481186e0,
]
_QQ = [  # leading coefficient 1 implicit
    6.43178256118178023184e1,
    8.56430025976980587198e2,
    3.88240183605401609683e3,
    7.24046774195652478189e3,
    5.93072701187316984827e3,
    2.06209331660327847417e3,
    2.42005740240291393179e2,
]


def _polevl(x, coef):
    ans = np.full_like(x, coef[0])
    for c in coef[1:]:
        ans = ans * x + c
    return ans


def _p1evl(x, coef):
    ans = x + coef[0]
    for c in coef[1:]:
        ans = ans * x + c
    return ans


def bessel_j0(x):
    """Zeroth-order Bessel function, absolute error below 1e-12 everywhere.

    Scalars in, scalar out; arrays in, array out.
    """
    x = np.abs(np.asarray(x, dtype=np.float64))
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)

    small = x <= 8.0
    if np.any(small):
        xs = x[small]
        u = 0.25 * xs * xs
        term = np.ones_like(xs)
        acc = np.ones_like(xs)
        for m in range(1, 46):
            term = term * (-u) / (m * m)
            acc = acc + term
        out[small] = acc
    if np.any(~small):
        xl = x[~small]
        z = 25.0 / (xl * xl)
        p = _polevl(z, _PP) / _polevl(z, _PQ)
        q = _polevl(z, _QP) / _p1evl(z, _QQ)
        xn = xl - _PIO4
        p = p * np.cos(xn) - (5.0 / xl) * q * np.sin(xn)
        out[~small] = p * _SQ2OPI / np.sqrt(xl)
    return float(out[0]) if scalar else out


def j0_zeros(count: int) -> np.ndarray:
    """First `count` positive zeros of J0 by bracketing + bisection on
    bessel_j0 itself. McMahon's beta = (s - 1/4) pi lies just left of the
    s-th zero, which sits within beta + 0.3 for every s."""
    zeros = []
    for s in range(1, int(count) + 1):
        lo = (s - 0.25) * np.pi
        hi = lo + 0.3
        flo, fhi = bessel_j0(lo), bessel_j0(hi)
        if flo * fhi > 0.0:  # never triggers for J0, kept as a guard
            hi = lo + 1.0
            fhi = bessel_j0(hi)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            fmid = bessel_j0(mid)
            if flo * fmid <= 0.0:
                hi, fhi = mid, fmid
            else:
                lo, flo = mid, fmid
        zeros.append(0.5 * (lo + hi))
    return np.array(zeros)


def bessel_peak_frequencies(omega_min: float, omega_max: float) -> list[float]:
    """Frequencies 2/j_{0,s} inside [omega_min, omega_max], descending:
    the coherent-destruction-of-tunneling peaks of g_n."""
    if not (0.0 < omega_min < omega_max):
        raise ValueError("need 0 < omega_min < omega_max")
    count = int(np.ceil((2.0 / omega_min) / np.pi)) + 2
    peaks = [2.0 / j for j in j0_zeros(count)]
    return [w for w in peaks if omega_min <= w <= omega_max]


def dip_frequencies(omega_min: float, omega_max: float) -> list[float]:
    """Quasi-degeneracy dip frequencies {4/m : m >= 1} inside the range,
    descending."""
    if not (0.0 < omega_min < omega_max):
        raise ValueError("need 0 < omega_min < omega_max")
    m_lo = max(1, int(np.floor(4.0 / omega_max)))
    m_hi = int(np.ceil(4.0 / omega_min)) + 1
    return [4.0 / m for m in range(m_lo, m_hi + 1) if omega_min <= 4.0 / m <= omega_max]


# ---------------------------------------------------------------------------
# resonances and integrand profiles


class ResonanceKind(enum.Enum):
    ZERO_GAP = "zero_gap"
    HALF_OMEGA_GAP = "half_omega_gap"


@dataclass(frozen=True)
class ResonancePoint:
    """Grid momentum whose quasi-energy approaches a Floquet zone edge."""

    k: object
    kind: ResonanceKind
    mu: float
    gap: float


@dataclass(frozen=True)
class IntegrandProfile:
    """Per-momentum fidelity integrand at finite n or in the n -> infinity
    limit, with the quasi-energies alongside."""

    omega0: float
    mode: object  # int n or "infinity"
    momenta: np.ndarray = field(repr=False)
    mu: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    weight: float = 0.0
    clamp_events: int = 0


def default_resonance_threshold(omega0: float) -> float:
    """1e-3 * omega0: scales with the width of the Floquet zone."""
    return 1e-3 * omega0


def resonance_scan(
    params,
    L: int,
    threshold: float | None = None,
    steps: int | None = None,
    table: FloquetTable | None = None,
) -> list[ResonancePoint]:
    """All grid momenta with min(mu, omega0/2 - mu) below the threshold,
    tagged by which zone edge is approached."""
    if threshold is None:
        threshold = default_resonance_threshold(params.omega0)
    if threshold < 0.0:
        raise ValueError("threshold must be >= 0")
    if table is None:
        table = floquet_table(params, L, steps=steps)
    gap0 = table.mu
    gap_half = params.omega0 / 2.0 - table.mu
    points = []
    for i in np.nonzero(np.minimum(gap0, gap_half) < threshold)[0]:
        zero_side = gap0[i] <= gap_half[i]
        points.append(
            ResonancePoint(
                k=table.row(int(i)).momentum,
                kind=ResonanceKind.ZERO_GAP if zero_side else ResonanceKind.HALF_OMEGA_GAP,
                mu=float(table.mu[i]),
                gap=float(min(gap0[i], gap_half[i])),
            )
        )
    return points


def integrand_profile(
    params,
    L: int,
    mode="infinity",
    steps: int | None = None,
    table: FloquetTable | None = None,
) -> IntegrandProfile:
    """Per-momentum integrand of g_n (mode = n) or of the asymptotic limit
    (mode = "infinity"). Summing values * weight reproduces g_n / g_inf
    exactly: it is the same code path."""
    if table is None:
        table = floquet_table(params, L, steps=steps)
    clamps = 0
    if mode == "infinity":
        values = asymptotic_mode_terms(table)
    else:
        values, clamps = finite_mode_terms(table, int(mode))
    return IntegrandProfile(
        omega0=params.omega0,
        mode=mode,
        momenta=table.momenta,
        mu=table.mu,
        values=values,
        weight=table.weight,
        clamp_events=clamps,
    )


# ---------------------------------------------------------------------------
# small-k tunneling formula and the high-frequency limit


def kayanuma_probability(t: float, k: float, omega0: float) -> float:
    """Small-k transition probability sin^2(t k J0(2/omega0)): the
    tunneling rate is renormalized by J0, vanishing at the peak
    frequencies. Quantitative only for |k| << omega0 (not enforced)."""
    return float(np.sin(t * k * bessel_j0(2.0 / omega0)) ** 2)


def static_dispersion(ks, h: float) -> np.ndarray:
    """Unperturbed mode energies eps_k = sqrt((h - cos k)^2 + sin^2 k)."""
    ks = np.asarray(ks, dtype=np.float64)
    return np.sqrt((h - np.cos(ks)) ** 2 + np.sin(ks) ** 2)


def fold_quasienergy(eps, omega0: float) -> np.ndarray:
    """Fold energies into the Floquet zone [0, omega0/2]."""
    theta = np.mod(np.asarray(eps, dtype=np.float64) * (2.0 * np.pi / omega0), 2.0 * np.pi)
    theta = np.minimum(theta, 2.0 * np.pi - theta)
    return theta * omega0 / (2.0 * np.pi)


@dataclass(frozen=True)
class HighFreqReport:
    """Comparison of the computed Floquet data against the fast-driving
    limit, where the modes see only the average Hamiltonian."""

    omega0: float
    ks: np.ndarray = field(repr=False)
    mu: np.ndarray = field(repr=False)
    mu_limit: np.ndarray = field(repr=False)
    q: np.ndarray = field(repr=False)
    q_limit: np.ndarray = field(repr=False)
    max_mu_err: float = 0.0
    max_q_err: float = 0.0


def highfreq_limit_check(
    params: DriveParams, L: int, steps: int | None = None
) -> HighFreqReport:
    """Compare mu_k against the average-Hamiltonian dispersion folded into
    the Floquet zone, and q_k against the closed-form overlap between the
    eigenbases of the t = 0 Hamiltonian (field h + A cos phi0) and the
    average Hamiltonian (field h)."""
    from .fidelity import _ground_batch  # closed-form 2x2 eigensystem

    table = floquet_table(params, L, steps=steps)
    ks = table.momenta
    mu_limit = fold_quasienergy(static_dispersion(ks, params.h), params.omega0)

    # ground state of the t=0 Hamiltonian in the average-Hamiltonian basis
    sy = np.sin(ks)
    g0, g1 = _ground_batch(np.zeros_like(ks), sy, np.cos(ks) - params.h_t(0.0))
    v0, v1 = _ground_batch(np.zeros_like(ks), sy, np.cos(ks) - params.h)
    b = np.abs(np.conj(v0) * g0 + np.conj(v1) * g1) ** 2
    a = 1.0 - b
    q_limit = 2.0 * a * b / (a * a + b * b)

    return HighFreqReport(
        omega0=params.omega0,
        ks=ks,
        mu=table.mu,
        mu_limit=mu_limit,
        q=table.q,
        q_limit=q_limit,
        max_mu_err=float(np.max(np.abs(table.mu - mu_limit))),
        max_q_err=float(np.max(np.abs(table.q - q_limit))),
    )
