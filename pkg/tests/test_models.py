"""Drive protocols, mode Hamiltonians, momentum grids."""
import numpy as np
import pytest

from floquet_echo import (
    DiracParams,
    DriveParams,
    default_steps,
    dirac_mode_coeffs,
    grid_1d,
    grid_2d,
    ising_mode_coeffs,
)


def test_grid_1d_L8():
    g = grid_1d(8)
    assert np.allclose(g.ks, np.array([1, 3, 5, 7]) * np.pi / 8)


def test_grid_1d_L4():
    assert np.allclose(grid_1d(4).ks, [np.pi / 4, 3 * np.pi / 4])


def test_grid_1d_rejects_non_multiple_of_4():
    with pytest.raises(ValueError):
        grid_1d(6)
    with pytest.raises(ValueError):
        grid_1d(0)


def test_grid_1d_open_interval():
    g = grid_1d(256)
    assert g.ks[0] > 0.0 and g.ks[-1] < np.pi
    assert len(g.ks) == 128
    assert np.all(np.diff(g.ks) > 0)


def test_grid_2d_L2():
    g = grid_2d(2, 1.0)
    pts = set(zip(np.round(g.kx, 12), np.round(g.ky, 12)))
    axis = {round(np.pi / 4, 12), round(3 * np.pi / 4, 12)}
    assert pts == {(x, y) for x in axis for y in axis}


def test_grid_2d_counts_and_interior():
    g = grid_2d(7, a=2.0)
    assert g.size == 49
    assert g.kx.min() > 0 and g.ky.min() > 0
    assert g.kx.max() < np.pi / 2.0 and g.ky.max() < np.pi / 2.0


def test_grid_2d_rejects_small_L():
    with pytest.raises(ValueError):
        grid_2d(1)


def test_ising_coeffs_at_k_pi():
    d = DriveParams()
    c = ising_mode_coeffs(np.pi, d, 0.0)
    assert np.allclose(tuple(c), (0.0, 0.0, -3.0), atol=1e-15)


def test_ising_coeffs_at_half_period():
    d = DriveParams()
    c = ising_mode_coeffs(np.pi / 2, d, d.tau / 2)
    assert np.allclose(tuple(c), (0.0, 1.0, 0.0), atol=1e-15)


def test_ising_coeffs_periodic():
    rng = np.random.default_rng(1)
    d = DriveParams(h=0.7, A=1.3, omega0=2.5, phi0=0.4)
    for _ in range(20):
        k, t = rng.uniform(0, np.pi), rng.uniform(-5, 5)
        a = ising_mode_coeffs(k, d, t)
        b = ising_mode_coeffs(k, d, t + d.tau)
        assert np.allclose(tuple(a), tuple(b), atol=1e-12)


def test_ising_coeffs_stay_in_yz_plane_and_bounded():
    rng = np.random.default_rng(2)
    d = DriveParams()
    for _ in range(50):
        c = ising_mode_coeffs(rng.uniform(0, np.pi), d, rng.uniform(0, 10))
        assert c.ax == 0.0
        assert c.norm <= d.h + d.A + 1.0 + 1e-12


def test_dirac_coeffs_at_dirac_point():
    p = DiracParams(m0=0.7, omega0=3.0)
    assert np.allclose(tuple(dirac_mode_coeffs(0.0, 0.0, p, 0.0)), (0, 0, 0.7))


def test_dirac_coeffs_mass_node_at_quarter_period():
    p = DiracParams(m0=2.0, omega0=3.0)
    c = dirac_mode_coeffs(0.3, 1.1, p, p.tau / 4)
    assert np.allclose(tuple(c), (0.3, 1.1, 0.0), atol=1e-12)


def test_dirac_coeffs_swap_symmetry():
    p = DiracParams(m0=1.0, omega0=5.0, vF=1.7)
    rng = np.random.default_rng(3)
    for _ in range(20):
        kx, ky, t = rng.uniform(0, 3, size=3)
        a = dirac_mode_coeffs(kx, ky, p, t)
        b = dirac_mode_coeffs(ky, kx, p, t)
        assert (a.ax, a.ay, a.az) == (b.ay, b.ax, b.az)


def test_dirac_coeffs_periodic_and_odd_in_m0():
    p = DiracParams(m0=0.8, omega0=2.0)
    pm = DiracParams(m0=-0.8, omega0=2.0)
    rng = np.random.default_rng(4)
    for _ in range(20):
        kx, ky, t = rng.uniform(0, 2, size=3)
        a = dirac_mode_coeffs(kx, ky, p, t)
        assert np.allclose(
            tuple(a), tuple(dirac_mode_coeffs(kx, ky, p, t + p.tau)), atol=1e-12
        )
        b = dirac_mode_coeffs(kx, ky, pm, t)
        assert np.allclose((a.ax, a.ay, -a.az), tuple(b), atol=1e-15)


def test_params_validation():
    with pytest.raises(ValueError):
        DriveParams(omega0=0.0)
    with pytest.raises(ValueError):
        DriveParams(h=np.inf)
    with pytest.raises(ValueError):
        DiracParams(omega0=-1.0)
    with pytest.raises(ValueError):
        DiracParams(a=0.0)


def test_tau_derived_from_omega0():
    d = DriveParams(omega0=4.0)
    assert np.isclose(d.tau, np.pi / 2)


def test_default_steps_floors():
    assert default_steps(DriveParams(omega0=0.4)) == 32768
    assert default_steps(DriveParams(omega0=50.0)) == 2048
    # strong drive pushes past the floor via the per-oscillation term
    assert default_steps(DriveParams(A=4000.0, omega0=50.0)) > 2048
    assert default_steps(DiracParams(omega0=50.0)) == 2048
