import numpy as np
import pytest

import entroflux as ef
from conftest import I_GAUSS_SIGMA1, plane_wave


PARAMS = ef.PhysicalParams()


def gaussian_density(grid, sigma=1.0, x0=0.0):
    rho = np.exp(-((grid.x - x0) ** 2) / (2 * sigma**2)) / np.sqrt(2 * np.pi * sigma**2)
    return ef.RealField(grid, rho)


# ---------- information density ----------

def test_info_density_values():
    g = ef.Grid1D(0.0, 1.0, 64)
    out = ef.info_density(ef.RealField(g, np.ones(64)))
    assert np.max(np.abs(out.values - 1.0)) < 1e-15
    out = ef.info_density(ef.RealField(g, np.full(64, np.e)))
    assert np.max(np.abs(out.values)) < 1e-14


def test_info_density_floor():
    g = ef.Grid1D(0.0, 1.0, 64)
    out = ef.info_density(ef.RealField(g, np.full(64, 1e-15)), reg_floor=1e-12)
    assert np.all(out.values == 0.0)


def test_info_density_rejects_negative():
    g = ef.Grid1D(0.0, 1.0, 64)
    rho = np.ones(64)
    rho[3] = -0.1
    with pytest.raises(ValueError, match="negative density"):
        ef.info_density(ef.RealField(g, rho))


# ---------- information entropy ----------

def test_info_entropy_uniform_unit_interval():
    g = ef.Grid1D(0.0, 1.0, 64)
    assert ef.info_entropy(ef.RealField(g, np.ones(64))) == pytest.approx(1.0, abs=1e-12)


def test_info_entropy_uniform_length_two():
    g = ef.Grid1D(0.0, 2.0, 64)
    val = ef.info_entropy(ef.RealField(g, np.full(64, 0.5)))
    assert val == pytest.approx(np.log(2.0) + 1.0, abs=1e-12)


def test_info_entropy_gaussian_matches_quadrature_oracle():
    # independent oracle: brute-force trapezoid quadrature of -rho(ln rho - 1)
    # for the closed-form unit Gaussian on a fine non-periodic grid
    xs = np.linspace(-30.0, 30.0, 1_000_001)
    rho = np.exp(-(xs**2) / 2) / np.sqrt(2 * np.pi)
    integrand = np.where(rho > 0, -rho * (np.log(np.maximum(rho, 1e-300)) - 1.0), 0.0)
    oracle = np.trapezoid(integrand, xs)
    assert oracle == pytest.approx(I_GAUSS_SIGMA1, abs=1e-10)

    g = ef.Grid1D(-20.0, 20.0, 2048)
    val = ef.info_entropy(gaussian_density(g))
    assert val == pytest.approx(I_GAUSS_SIGMA1, rel=1e-6)


def test_info_entropy_rejects_unnormalized():
    g = ef.Grid1D(0.0, 1.0, 64)
    with pytest.raises(ValueError, match="not normalized"):
        ef.info_entropy(ef.RealField(g, np.full(64, 2.0)))


def test_info_entropy_is_differential_entropy_plus_one():
    g = ef.Grid1D(-10.0, 10.0, 512)
    rho = 1.0 + 0.4 * np.sin(2 * np.pi * g.x / g.length) + 0.2 * np.cos(
        4 * np.pi * g.x / g.length
    )
    rho /= g.dx * rho.sum()
    f = ef.RealField(g, rho)
    diff_entropy = -g.dx * np.sum(rho * np.log(rho))
    assert ef.info_entropy(f) == pytest.approx(diff_entropy + 1.0, abs=1e-12)


def test_info_entropy_translation_and_phase_invariance():
    g = ef.Grid1D(-20.0, 20.0, 1024)
    wf = ef.init_gaussian(g, PARAMS, sigma0=1.0, k0=2.0)
    rho = ef.density(wf)
    i0 = ef.info_entropy(rho)
    shifted = ef.RealField(g, np.roll(rho.values, 100))
    assert ef.info_entropy(shifted) == pytest.approx(i0, abs=1e-12)
    phased = ef.ComplexField(g, wf.psi.values * np.exp(1j * 0.7))
    import dataclasses
    wf2 = dataclasses.replace(wf, psi=phased)
    assert ef.info_entropy(ef.density(wf2)) == pytest.approx(i0, abs=1e-12)


# ---------- binned entropy ----------

def test_binned_entropy_uniform():
    g = ef.Grid1D(0.0, 1.0, 64)
    rho = ef.RealField(g, np.ones(64))
    # 8 bins of width 1/8 -> ln 8
    assert ef.binned_entropy(rho, 0.125) == pytest.approx(np.log(8.0), abs=1e-12)


def test_binned_entropy_single_bin():
    g = ef.Grid1D(0.0, 1.0, 64)
    rho = ef.RealField(g, np.ones(64))
    assert ef.binned_entropy(rho, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_binned_entropy_rejects_non_tiling_width():
    g = ef.Grid1D(0.0, 1.0, 64)
    rho = ef.RealField(g, np.ones(64))
    with pytest.raises(ValueError, match="integer multiple"):
        ef.binned_entropy(rho, 0.3)


def test_binned_entropy_gaussian_relation():
    # binned + ln(dq) approximates the differential entropy I - 1
    g = ef.Grid1D(-12.8, 12.8, 1024)
    rho = gaussian_density(g)
    binned = ef.binned_entropy(rho, 0.1)
    assert binned + np.log(0.1) == pytest.approx(0.5 * np.log(2 * np.pi * np.e), abs=5e-4)


def test_binning_limit_study_uniform_exact():
    g = ef.Grid1D(0.0, 1.0, 64)
    rows = ef.binning_limit_study(ef.RealField(g, np.ones(64)), [0.25, 0.125])
    for r in rows:
        assert r.defect < 1e-12


def test_binning_limit_study_convergence():
    g = ef.Grid1D(-12.8, 12.8, 1024)
    rows = ef.binning_limit_study(gaussian_density(g), [0.4, 0.2, 0.1])
    assert [r.bin_width for r in rows] == [0.4, 0.2, 0.1]
    assert rows[0].defect / rows[1].defect >= 3.5
    assert rows[1].defect / rows[2].defect >= 3.5
    assert all(r.resolved for r in rows)


def test_binning_limit_study_unresolved_control():
    # sigma = 2 * bin width: delta-like relative to the bins
    g = ef.Grid1D(-12.8, 12.8, 1024)
    rows = ef.binning_limit_study(gaussian_density(g, sigma=0.8), [0.4])
    assert not rows[0].resolved


# ---------- rate identity (chain rule) ----------

def test_rate_identity_stationary_is_zero():
    g = ef.Grid1D(-20.0, 20.0, 1024)
    rho = gaussian_density(g)
    l2, linf = ef.rate_identity_residual(rho, rho, rho, 1e-3)
    assert l2 == 0.0 and linf == 0.0


def test_rate_identity_plane_wave_zero():
    g = ef.Grid1D(0.0, 4.0, 64)
    wf, _ = plane_wave(g, PARAMS, mode=2)
    rho = ef.density(wf)
    l2, _ = ef.rate_identity_residual(rho, rho, rho, 1e-3)
    assert l2 == 0.0


def _spread_rate_residual(dt):
    g = ef.Grid1D(-16.0, 16.0, 512)
    wf = ef.evolve(
        ef.init_gaussian(g, PARAMS, sigma0=1.0), ef.Potential.free(), dt,
        int(round(0.4 / dt))
    )
    rhos = [ef.density(wf)]
    for _ in range(2):
        wf = ef.step(wf, ef.Potential.free(), dt)
        rhos.append(ef.density(wf))
    return ef.rate_identity_residual(rhos[0], rhos[1], rhos[2], dt)


def test_rate_identity_second_order_in_dt():
    l2_a, _ = _spread_rate_residual(1e-3)
    l2_b, _ = _spread_rate_residual(5e-4)
    assert l2_a < 1e-6
    assert l2_a / l2_b >= 3.5


def test_rate_identity_grid_mismatch():
    a = gaussian_density(ef.Grid1D(-20.0, 20.0, 1024))
    b = gaussian_density(ef.Grid1D(-20.0, 20.0, 512))
    with pytest.raises(ValueError, match="mismatched grids"):
        ef.rate_identity_residual(a, b, a, 1e-3)


# ---------- local balance law ----------

def test_balance_residual_coherent_analytic():
    grid = ef.Grid1D(-20.0, 20.0, 1024)
    orc = ef.CoherentOracle(omega=1.0, amplitude=1.0, params=PARAMS)
    dt = 1e-3
    worst = 0.0
    for t in np.linspace(0.0, 2 * np.pi, 9):
        snaps = [orc.fields(grid, t + s * dt) for s in (-1, 0, 1)]
        _, linf = ef.balance_residual(*snaps, dt)
        worst = max(worst, linf)
    assert worst < 1e-6


def test_balance_residual_plane_wave_zero():
    g = ef.Grid1D(0.0, 4.0, 64)
    wf, _ = plane_wave(g, PARAMS, mode=2)
    snaps = [ef.take_snapshot(wf)] * 3
    l2, linf = ef.balance_residual(snaps[0], snaps[1], snaps[2], 1e-3)
    assert linf < 1e-12


@pytest.mark.parametrize(
    "pot,x0,k0",
    [
        (ef.Potential.free(), 0.0, 0.0),
        (ef.Potential.harmonic(1.0), 1.0, 0.0),
        (ef.Potential.gaussian_barrier(0.5, 1.0, 3.0), -2.0, 2.0),
    ],
    ids=["free", "harmonic", "barrier"],
)
def test_balance_residual_second_order_in_dt(pot, x0, k0):
    g = ef.Grid1D(-16.0, 16.0, 512)
    wf0 = ef.init_gaussian(g, PARAMS, sigma0=1.0, x0=x0, k0=k0)

    def resid(dt):
        wf = ef.evolve(wf0, pot, dt, int(round(0.4 / dt)) - 1)
        snaps = [ef.take_snapshot(wf)]
        for _ in range(2):
            wf = ef.step(wf, pot, dt)
            snaps.append(ef.take_snapshot(wf))
        return ef.balance_residual(snaps[0], snaps[1], snaps[2], dt)[0]

    assert resid(1e-3) / resid(5e-4) >= 3.5


# ---------- integral laws ----------

def test_entropy_rate_check_spreading_analytic():
    grid = ef.Grid1D(-20.0, 20.0, 1024)
    orc = ef.GaussianOracle(sigma0=1.0, params=PARAMS)
    times = np.arange(190, 211) * 0.01  # centered on t=2
    snaps = [orc.fields(grid, t) for t in times]
    reports = ef.entropy_rate_check(snaps)
    mid = reports[10]
    assert mid.t == pytest.approx(2.0)
    assert mid.dIdt_fd == pytest.approx(0.25, abs=1e-4)
    assert mid.rhs_eq16 == pytest.approx(0.25, abs=1e-6)
    assert mid.boundary_flux == 0.0


def test_entropy_rate_check_at_rest():
    grid = ef.Grid1D(-20.0, 20.0, 1024)
    orc = ef.GaussianOracle(sigma0=1.0, params=PARAMS)
    snaps = [orc.fields(grid, t) for t in (0.0, 0.01, 0.02)]
    reports = ef.entropy_rate_check(snaps)
    # sigma'(0) = 0, so dI/dt ~ 0 at the first sample; the one-sided
    # difference there is first order, I''(0) dt / 2 = 1.25e-3
    assert abs(reports[0].dIdt_fd) < 2e-3
    assert abs(reports[0].rhs_eq16) < 1e-12


def test_entropy_rate_check_subvolume_flux():
    grid = ef.Grid1D(-20.0, 20.0, 1024)
    orc = ef.GaussianOracle(sigma0=1.0, params=PARAMS)
    times = np.arange(190, 211) * 0.01
    snaps = [orc.fields(grid, t) for t in times]
    sig = np.sqrt(2.0)
    reports = ef.entropy_rate_check(snaps, subvolume=(-2 * sig, 2 * sig))
    mid = reports[10]
    assert mid.boundary_flux != 0.0
    assert mid.rhs_eq15 == pytest.approx(-mid.boundary_flux + mid.rhs_eq16, abs=0.0)
    assert abs(mid.dIdt_fd - mid.rhs_eq15) < 1e-4 * max(abs(mid.dIdt_fd), 1.0)


def test_entropy_rate_check_rejects_irregular_spacing():
    grid = ef.Grid1D(-20.0, 20.0, 1024)
    orc = ef.GaussianOracle(sigma0=1.0, params=PARAMS)
    snaps = [orc.fields(grid, t) for t in (0.0, 0.01, 0.03)]
    with pytest.raises(ValueError, match="uniform"):
        ef.entropy_rate_check(snaps)


def test_entropy_rate_check_single_snapshot():
    grid = ef.Grid1D(-20.0, 20.0, 1024)
    orc = ef.GaussianOracle(sigma0=1.0, params=PARAMS)
    reports = ef.entropy_rate_check([orc.fields(grid, 0.0)])
    assert len(reports) == 1
    assert reports[0].dIdt_fd == 0.0


# ---------- sign witness ----------

def _report(t, didt, rhs16):
    return ef.BalanceReport(
        t=t, residual_l2=0.0, residual_linf=0.0, dIdt_fd=didt,
        rhs_eq16=rhs16, boundary_flux=0.0, rhs_eq15=rhs16,
    )


def test_sign_witness_counts_interior_agreement():
    reports = [
        _report(0.0, 1.0, -1.0),   # endpoint, ignored
        _report(1.0, 0.5, 0.4),
        _report(2.0, -0.5, -0.1),
        _report(3.0, 1e-12, -1.0),  # inside dead-band, skipped
        _report(4.0, 1.0, 1.0),    # endpoint, ignored
    ]
    w = ef.sign_witness(reports)
    assert w.n_eligible == 2
    assert w.fraction == 1.0


def test_sign_witness_detects_disagreement():
    reports = [_report(float(i), 1.0, -1.0) for i in range(4)]
    w = ef.sign_witness(reports)
    assert w.fraction == 0.0


def test_sign_witness_empty_eligible_is_one():
    reports = [_report(float(i), 1e-12, 1.0) for i in range(4)]
    assert ef.sign_witness(reports).fraction == 1.0
