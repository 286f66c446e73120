"""g_n assembly, decohered and asymptotic references, series identity,
direct-evolution oracle, Dirac quadrant integration."""
import numpy as np
import pytest

from floquet_echo import (
    DiracParams,
    DriveParams,
    ModeOverlap,
    bound_gap,
    direct_fidelity,
    fidelity_curve,
    floquet_table,
    g_dec,
    g_inf_closed,
    g_inf_series,
    g_n,
    log_mode_term,
)
from floquet_echo.fidelity import (
    FloquetTable,
    TableDiagnostics,
    asymptotic_mode_terms,
    finite_mode_terms,
    series_tail,
)
from floquet_echo.numerics import LOG_FLOOR


def make_table(theta, a, b, degenerate=None, omega0=2 * np.pi, L=None):
    """Hand-built 1D table for closed-form checks (tau = 2pi/omega0)."""
    theta = np.asarray(theta, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    q = np.where(a + b > 0, 2 * a * b / (a * a + b * b), 0.0)
    if degenerate is None:
        degenerate = np.zeros(theta.shape, dtype=bool)
    L = 2 * theta.size if L is None else L
    params = DriveParams(omega0=omega0)
    return FloquetTable(
        params=params,
        L=L,
        ndim=1,
        momenta=np.linspace(0.1, 3.0, theta.size),
        theta=theta,
        mu=theta / params.tau,
        a=a,
        b=b,
        q=np.minimum(q, 1.0),
        degenerate=degenerate,
        steps=1,
        diagnostics=TableDiagnostics(0.0, 0.0, 0.0, int(np.sum(degenerate))),
    )


# --------------------------------------------------------------------------
# per-mode term


def test_log_mode_term_zero_periods():
    ov = ModeOverlap(0.7, 0.3, 2 * 0.7 * 0.3 / (0.49 + 0.09))
    assert log_mode_term(ov, mu=0.37, n=0, tau=1.9) == 0.0


def test_log_mode_term_quarter_phase():
    # 2 mu n tau = pi/2 -> |z|^2 = 1/2 at a = b = 1/2
    ov = ModeOverlap(0.5, 0.5, 1.0)
    val = log_mode_term(ov, mu=np.pi / 8, n=1, tau=2.0)
    assert np.isclose(val, np.log(0.5), atol=1e-14)


def test_log_mode_term_clamps_at_exact_zero():
    # 2 mu n tau = pi with a = b = 1/2: |z|^2 underflows to the floor
    ov = ModeOverlap(0.5, 0.5, 1.0)
    val = log_mode_term(ov, mu=np.pi / 2, n=1, tau=1.0)
    assert val == np.log(LOG_FLOOR)


def test_log_mode_term_degenerate_returns_zero():
    ov = ModeOverlap(1.0, 0.0, 0.0, degenerate=True)
    assert log_mode_term(ov, mu=0.2, n=7, tau=1.0) == 0.0


def test_log_mode_term_rejects_negative_n():
    with pytest.raises(ValueError):
        log_mode_term(ModeOverlap(1, 0, 0), 0.1, -1, 1.0)


def test_finite_mode_terms_counts_clamps():
    t = make_table([np.pi / 2, 0.3], [0.5, 0.9], [0.5, 0.1])
    terms, clamps = finite_mode_terms(t, 1)
    assert clamps == 1
    assert terms[0] == np.log(LOG_FLOOR)
    assert terms[1] < 0


# --------------------------------------------------------------------------
# g-values on hand-built tables


def test_g_zero_is_exactly_zero():
    t = make_table([0.3, 0.7], [0.6, 0.8], [0.4, 0.2])
    assert g_n(t, 0) == 0.0


def test_g_dec_no_interference():
    t = make_table([0.3, 0.7], [1.0, 1.0], [0.0, 0.0])
    assert g_dec(t) == 0.0


def test_g_dec_full_interference():
    # all q = 1: g_dec = -log 2 after the 1/L weight (L = modes * 2)
    t = make_table([0.3, 0.7, 1.1], [0.5] * 3, [0.5] * 3, L=6)
    assert np.isclose(g_dec(t), -np.log(2.0) / 2.0, atol=1e-15)


def test_g_inf_closed_no_interference():
    t = make_table([0.3, 0.7], [1.0, 1.0], [0.0, 0.0])
    assert g_inf_closed(t) == 0.0


def test_g_inf_closed_single_resonant_mode():
    # q = 1 handled exactly: per-mode term -log 4
    t = make_table([0.4], [0.5], [0.5], L=2)
    assert np.isclose(g_inf_closed(t), -np.log(4.0) / 2.0, atol=1e-14)


def test_g_inf_below_g_dec():
    rng = np.random.default_rng(8)
    a = rng.uniform(0.5, 1.0, size=40)
    t = make_table(rng.uniform(0, np.pi, size=40), a, 1 - a)
    assert g_inf_closed(t) < g_dec(t)
    assert g_inf_series(t, 200) < g_dec(t)


# --------------------------------------------------------------------------
# series form


def test_series_coefficients_by_recurrence():
    # c_1 = 1/4, c_2 = 3/32, c_3 = 5/96 from (2p-1)!!/(2p (2p)!!)
    q = 0.9
    u = q * q
    s1 = float(series_tail(q, 1))
    s2 = float(series_tail(q, 2))
    s3 = float(series_tail(q, 3))
    assert np.isclose(s1, 0.25 * u, rtol=1e-15)
    assert np.isclose(s2 - s1, 3.0 / 32.0 * u**2, rtol=1e-13)
    assert np.isclose(s3 - s2, 5.0 / 96.0 * u**3, rtol=1e-13)


def test_series_first_term_at_half():
    assert np.isclose(float(series_tail(0.5, 1)), 0.0625, rtol=0, atol=1e-17)


def test_series_matches_closed_form_at_half():
    want = np.log(2.0 / (1.0 + np.sqrt(0.75)))
    got = float(series_tail(0.5, 200))
    assert np.isclose(got, want, atol=1e-15)
    assert np.isclose(got, 0.0693364641950739, atol=1e-15)


def test_series_identity_on_table_moderate_q():
    # away from q ~ 1 the 200-term series nails the closed form
    rng = np.random.default_rng(14)
    a = rng.uniform(0.64, 0.97, size=60)  # keeps q <= ~0.94
    t = make_table(rng.uniform(0, np.pi, size=60), a, 1 - a)
    assert float(np.max(t.q)) <= 0.94
    assert abs(g_inf_series(t, 200) - g_inf_closed(t)) < 1e-10


def test_series_rejects_zero_pmax():
    t = make_table([0.3], [0.9], [0.1])
    with pytest.raises(ValueError):
        g_inf_series(t, 0)


def test_phase_average_identity_quadrature():
    # scalar oracle: mean over theta of log(1 + q cos theta) equals
    # -log(2/(1+sqrt(1-q^2))); periodic trapezoid converges geometrically
    n = 8192
    th = 2 * np.pi * np.arange(n) / n
    for q in np.linspace(0.0, 0.99, 12):
        avg = float(np.mean(np.log1p(q * np.cos(th))))
        want = -np.log(2.0 / (1.0 + np.sqrt(1.0 - q * q)))
        assert abs(avg - want) < 1e-10


# --------------------------------------------------------------------------
# real tables: invariants and the direct oracle


@pytest.fixture(scope="module")
def small_tables():
    out = {}
    for w in (0.4, 2.0, 6.0):
        d = DriveParams(omega0=w)
        out[w] = (d, floquet_table(d, 16, steps=2048))
    return out


def test_table_diagnostics_within_tolerance(small_tables):
    for _, t in small_tables.values():
        assert t.diagnostics.max_unitarity_err < 1e-10
        assert t.diagnostics.max_det_err < 1e-10
        assert t.diagnostics.max_norm_err < 1e-10


def test_g_n_nonpositive(small_tables):
    for _, t in small_tables.values():
        for n in (1, 2, 3, 7, 50, 1234):
            assert g_n(t, n) <= 0.0


def test_g_n_matches_direct_at_equal_steps(small_tables):
    # identical propagator on both routes: Eq-level identity, not convergence
    for w, (d, t) in small_tables.items():
        for n in (1, 2, 3, 5):
            gd = direct_fidelity(d, 16, n, steps=2048, method="power")
            assert abs(g_n(t, n) - gd) < 1e-12


def test_direct_methods_agree():
    d = DriveParams(omega0=3.0)
    for n in (1, 4):
        a = direct_fidelity(d, 8, n, steps=256, method="power")
        b = direct_fidelity(d, 8, n, steps=256, method="stepwise")
        assert abs(a - b) < 1e-12


def test_direct_zero_periods():
    assert direct_fidelity(DriveParams(omega0=1.0), 8, 0, steps=64) == 0.0


def test_direct_undriven_is_stationary():
    d = DriveParams(A=0.0, omega0=1.3)
    for n in (1, 7):
        assert abs(direct_fidelity(d, 16, n, steps=512)) < 1e-12


def test_direct_rejects_bad_method():
    with pytest.raises(ValueError):
        direct_fidelity(DriveParams(omega0=1.0), 8, 1, steps=16, method="magic")


def test_bound_inequality_randomized(small_tables):
    rng = np.random.default_rng(19)
    for _, t in small_tables.values():
        for n in rng.integers(1, 3000, size=12):
            assert bound_gap(t, int(n)) >= -1e-12


def test_workers_do_not_change_values():
    d = DriveParams(omega0=2.0)
    t1 = floquet_table(d, 32, steps=512, workers=1)
    t2 = floquet_table(d, 32, steps=512, workers=2)
    assert np.array_equal(t1.theta, t2.theta)
    assert np.array_equal(t1.q, t2.q)


def test_table_rejects_bad_steps():
    with pytest.raises(ValueError):
        floquet_table(DriveParams(omega0=1.0), 8, steps=0)


def test_mode_record_view(small_tables):
    _, t = small_tables[2.0]
    rec = t.row(3)
    assert rec.momentum == t.momenta[3]
    assert rec.overlap.a + rec.overlap.b == pytest.approx(1.0, abs=1e-12)


# --------------------------------------------------------------------------
# Dirac model


def test_dirac_zero_mass_drive_is_stationary():
    p = DiracParams(m0=0.0, omega0=50.0)
    t = floquet_table(p, 8, steps=256)
    for n in (1, 5, 40):
        assert abs(g_n(t, n)) < 1e-12
    assert abs(direct_fidelity(p, 8, 3, steps=256)) < 1e-12


def test_dirac_swap_symmetry_per_mode():
    p = DiracParams(m0=1.0, omega0=50.0)
    t = floquet_table(p, 6, steps=512)
    L = 6
    for i in range(L):
        for j in range(L):
            a, b = i * L + j, j * L + i
            assert abs(t.mu[a] - t.mu[b]) < 1e-12
            assert abs(t.q[a] - t.q[b]) < 1e-12


def test_dirac_weight_normalizes_quadrant_integral():
    # constant integrand 1 over the quadrant: sum(w) = 1/(4 a^2)
    p = DiracParams(m0=1.0, omega0=50.0, a=2.0)
    t = floquet_table(p, 10, steps=64)
    assert np.isclose(t.weight * t.size, 1.0 / (4.0 * p.a**2), rtol=1e-12)


def test_dirac_saturates_toward_asymptotic_level():
    p = DiracParams(m0=1.0, omega0=50.0)
    t = floquet_table(p, 24, steps=2048)
    gi = g_inf_closed(t)
    gd = g_dec(t)
    assert gi < gd
    for n in (60, 75, 90):
        g = g_n(t, n)
        assert abs(g - gi) < 5e-3
        assert g < gd


# --------------------------------------------------------------------------
# curves


def test_fidelity_curve_assembly():
    d = DriveParams(omega0=2.0)
    c = fidelity_curve(d, 16, [0, 1, 2, 3], steps=1024)
    assert c.entries[0] == (0, 0.0)
    assert all(g <= 0.0 for _, g in c.entries)
    assert c.g_inf <= c.g_dec
    assert c.clamp_events >= 0


def test_fidelity_curve_rejects_empty_n():
    with pytest.raises(ValueError):
        fidelity_curve(DriveParams(omega0=2.0), 16, [], steps=64)


def test_grid_convergence_for_smooth_integrand():
    # non-resonant omega0: the momentum sum converges rapidly in L, so the
    # L -> 2L differences shrink monotonically
    d = DriveParams(omega0=7.3)
    g = {L: g_n(floquet_table(d, L, steps=2048), 3) for L in (32, 64, 128, 256)}
    d1 = abs(g[32] - g[64])
    d2 = abs(g[64] - g[128])
    d3 = abs(g[128] - g[256])
    assert d1 > d2 > d3
