"""Information entropy of a probability density and its balance-law diagnostics.

Quantities:
  rho_I = -rho (ln rho - 1)              information density (nats / length)
  I     = integral of rho_I              information entropy (nats)

For normalized rho this I equals the standard differential entropy plus one.
Natural logarithms throughout; any other base rescales both sides of every
balance law identically.

Diagnostics (all residuals should vanish to discretization order):
  rate identity    d(rho_I)/dt + d(rho)/dt * ln rho = 0   (pure chain rule)
  local balance    d(rho_I)/dt + d/dx[(rho_I - rho) v] + v d(rho)/dx = 0
  integral form    dI/dt = -[(rho_I - rho) v]_boundary - int v d(rho)/dx
with the boundary term vanishing on the full periodic domain.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid1D, RealField, derivative, integrate
from .madelung import DEFAULT_REG_FLOOR, DensityFields, fields
from .propagate import WaveFunction


@dataclass(frozen=True)
class InfoDensityField:
    rho_I: RealField
    I: float
    t: float


@dataclass(frozen=True)
class Snapshot:
    """Madelung fields plus information density at one instant."""

    den: DensityFields
    info: InfoDensityField

    @property
    def t(self) -> float:
        return self.den.t


@dataclass(frozen=True)
class BalanceReport:
    """Per-sample balance diagnostics.

    residual_l2 / residual_linf: norms of the local balance residual.
    dIdt_fd: finite-difference rate of I (restricted to the subvolume if any).
    rhs_eq16: -int v drho/dx over the (sub)volume.
    boundary_flux: [(rho_I - rho) v] at b minus at a (0 on the full domain).
    rhs_eq15: -boundary_flux + rhs_eq16.
    """

    t: float
    residual_l2: float
    residual_linf: float
    dIdt_fd: float
    rhs_eq16: float
    boundary_flux: float
    rhs_eq15: float


@dataclass(frozen=True)
class SignWitness:
    """Agreement between sgn(dI/dt) and sgn(-int v drho/dx) across samples."""

    fraction: float
    n_eligible: int
    n_agree: int


@dataclass(frozen=True)
class BinRow:
    bin_width: float
    binned: float
    binned_plus_log: float
    target: float
    defect: float
    resolved: bool


def info_density(rho: RealField, reg_floor: float = DEFAULT_REG_FLOOR) -> RealField:
    """Pointwise -rho (ln rho - 1), set to 0 where rho < reg_floor."""
    r = rho.values
    if np.any(r < 0.0):
        raise ValueError("negative density")
    out = np.zeros_like(r)
    mask = r >= reg_floor
    rm = r[mask]
    out[mask] = -rm * (np.log(rm) - 1.0)
    return RealField(rho.grid, out)


def info_entropy(rho: RealField, reg_floor: float = DEFAULT_REG_FLOOR) -> float:
    """I = int -rho (ln rho - 1) dx for a normalized density."""
    norm = integrate(rho)
    if abs(norm - 1.0) > 1e-6:
        raise ValueError(f"density not normalized: integral = {norm!r}")
    return integrate(info_density(rho, reg_floor))


def info_field(
    rho: RealField, t: float, reg_floor: float = DEFAULT_REG_FLOOR
) -> InfoDensityField:
    rho_i = info_density(rho, reg_floor)
    return InfoDensityField(rho_I=rho_i, I=integrate(rho_i), t=t)


def take_snapshot(wf: WaveFunction, reg_floor: float = DEFAULT_REG_FLOOR) -> Snapshot:
    den = fields(wf, reg_floor)
    return Snapshot(den=den, info=info_field(den.rho, wf.t, reg_floor))


def binned_entropy(rho: RealField, bin_width: float) -> float:
    """Shannon entropy -sum p_i ln p_i over spatial bins of width bin_width.

    p_i is the rectangle-rule integral of rho over each bin; bins must tile
    the domain with bin_width an integer multiple of dx.
    """
    grid = rho.grid
    ratio = bin_width / grid.dx
    per_bin = int(round(ratio))
    if per_bin < 1 or abs(ratio - per_bin) > 1e-9 * ratio:
        raise ValueError(
            f"bin_width {bin_width} is not an integer multiple of dx = {grid.dx}"
        )
    if grid.n % per_bin != 0:
        raise ValueError(
            f"bins of width {bin_width} do not tile the domain "
            f"(n = {grid.n}, samples per bin = {per_bin})"
        )
    p = grid.dx * rho.values.reshape(grid.n // per_bin, per_bin).sum(axis=1)
    pos = p[p > 0.0]
    return float(-np.sum(pos * np.log(pos)))


def binning_limit_study(
    rho: RealField,
    bin_widths,
    reg_floor: float = DEFAULT_REG_FLOOR,
) -> list[BinRow]:
    """Convergence of binned + ln(dq) toward I - 1 as the bin width shrinks.

    Rows sorted by descending bin width.  A row is flagged unresolved when the
    bins are wider than about half the density's standard deviation (the
    delta-like regime, where the midpoint error model breaks down).
    """
    target = info_entropy(rho, reg_floor) - 1.0
    grid = rho.grid
    mean = grid.dx * np.sum(grid.x * rho.values)
    std = float(np.sqrt(grid.dx * np.sum((grid.x - mean) ** 2 * rho.values)))
    rows = []
    for dq in sorted(bin_widths, reverse=True):
        binned = binned_entropy(rho, dq)
        shifted = binned + np.log(dq)
        defect = abs(shifted - target)
        rows.append(
            BinRow(
                bin_width=float(dq),
                binned=binned,
                binned_plus_log=float(shifted),
                target=target,
                defect=float(defect),
                resolved=bool(dq <= 0.45 * std),
            )
        )
    return rows


def _l2(grid: Grid1D, r: np.ndarray) -> float:
    return float(np.sqrt(grid.dx * np.sum(r * r)))


def rate_identity_residual(
    rho_prev: RealField,
    rho_mid: RealField,
    rho_next: RealField,
    dt: float,
    reg_floor: float = DEFAULT_REG_FLOOR,
) -> tuple[float, float]:
    """Chain-rule identity d(rho_I)/dt = -d(rho)/dt ln(rho), centered in time.

    Returns (L2, Linf) norms of the residual, masked where rho < reg_floor.
    Snapshots are at t-dt, t, t+dt on one grid.
    """
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    grid = rho_mid.grid
    if not (grid.matches(rho_prev.grid) and grid.matches(rho_next.grid)):
        raise ValueError("mismatched grids")
    drho_i = (
        info_density(rho_next, reg_floor).values
        - info_density(rho_prev, reg_floor).values
    ) / (2.0 * dt)
    drho = (rho_next.values - rho_prev.values) / (2.0 * dt)
    mask = rho_mid.values >= reg_floor
    r = np.zeros(grid.n)
    r[mask] = drho_i[mask] + drho[mask] * np.log(rho_mid.values[mask])
    return _l2(grid, r), float(np.max(np.abs(r)))


def balance_residual(
    prev: Snapshot, mid: Snapshot, nxt: Snapshot, dt: float
) -> tuple[float, float]:
    """Local balance residual d(rho_I)/dt + d/dx[(rho_I - rho) v] + v d(rho)/dx.

    Time derivative by centered difference over dt, space derivatives spectral.
    Returns (L2, Linf); an exact identity for any wavefunction, so the result
    is pure discretization error.
    """
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    grid = mid.den.rho.grid
    if not (grid.matches(prev.den.rho.grid) and grid.matches(nxt.den.rho.grid)):
        raise ValueError("mismatched grids")
    dt_rho_i = (nxt.info.rho_I.values - prev.info.rho_I.values) / (2.0 * dt)
    v = mid.den.velocity.values
    flux = (mid.info.rho_I.values - mid.den.rho.values) * v
    div_flux = derivative(RealField(grid, flux), "spectral").values
    drho_dx = derivative(mid.den.rho, "spectral").values
    r = dt_rho_i + div_flux + v * drho_dx
    return _l2(grid, r), float(np.max(np.abs(r)))


def _subvolume_indices(grid: Grid1D, subvolume) -> tuple[int, int]:
    a, b = subvolume
    ia = int(round((a - grid.x_min) / grid.dx))
    ib = int(round((b - grid.x_min) / grid.dx))
    if not (0 <= ia < ib <= grid.n - 1):
        raise ValueError(f"subvolume [{a}, {b}] outside grid domain")
    return ia, ib


def entropy_rate_check(
    snapshots: list[Snapshot], subvolume=None
) -> list[BalanceReport]:
    """Integral balance diagnostics along a time series of snapshots.

    With a subvolume [a, b] (snapped to grid points) the boundary flux is the
    difference of (rho_I - rho) v at the endpoints and integrals use the
    trapezoid rule on the slice; on the full periodic domain the flux is zero
    and the rectangle rule applies.  dI/dt uses centered differences over the
    sample stride (one-sided at the series endpoints, where the local-law
    residual columns are reported as zero).
    """
    if len(snapshots) < 1:
        raise ValueError("empty snapshot series")
    grid = snapshots[0].den.rho.grid
    for s in snapshots:
        if not s.den.rho.grid.matches(grid):
            raise ValueError("mismatched grids")
    times = np.array([s.t for s in snapshots])
    if len(snapshots) >= 2:
        strides = np.diff(times)
        dt_s = float(strides[0])
        if np.any(np.abs(strides - dt_s) > 1e-9 * max(abs(dt_s), 1.0)):
            raise ValueError("snapshots not uniformly spaced in time")
    else:
        dt_s = 0.0

    if subvolume is not None:
        ia, ib = _subvolume_indices(grid, subvolume)
        xs = grid.x[ia : ib + 1]

        def vol_int(values):
            return float(np.trapezoid(values[ia : ib + 1], xs))
    else:
        ia = ib = None

        def vol_int(values):
            return float(grid.dx * values.sum())

    i_series = []
    for s in snapshots:
        i_series.append(vol_int(s.info.rho_I.values))
    i_series = np.array(i_series)

    reports = []
    n = len(snapshots)
    for i, s in enumerate(snapshots):
        v = s.den.velocity.values
        drho_dx = derivative(s.den.rho, "spectral").values
        rhs16 = -vol_int(v * drho_dx)
        if subvolume is not None:
            g = (s.info.rho_I.values - s.den.rho.values) * v
            flux = float(g[ib] - g[ia])
        else:
            flux = 0.0
        if n == 1:
            didt = 0.0
        elif i == 0:
            didt = float((i_series[1] - i_series[0]) / dt_s)
        elif i == n - 1:
            didt = float((i_series[-1] - i_series[-2]) / dt_s)
        else:
            didt = float((i_series[i + 1] - i_series[i - 1]) / (2.0 * dt_s))
        if 0 < i < n - 1:
            r_l2, r_linf = balance_residual(
                snapshots[i - 1], s, snapshots[i + 1], dt_s
            )
        else:
            r_l2 = r_linf = 0.0
        reports.append(
            BalanceReport(
                t=float(s.t),
                residual_l2=r_l2,
                residual_linf=r_linf,
                dIdt_fd=didt,
                rhs_eq16=rhs16,
                boundary_flux=flux,
                rhs_eq15=-flux + rhs16,
            )
        )
    return reports


def sign_witness(
    reports: list[BalanceReport], deadband: float = 1e-8
) -> SignWitness:
    """Fraction of interior samples where sgn(dI/dt) matches sgn(-int v drho/dx).

    Samples with |dI/dt| below the dead-band are excluded, as are the series
    endpoints (one-sided differencing there flips signs spuriously at extrema
    of I).  Fraction is 1.0 when no sample is eligible.
    """
    n_eligible = 0
    n_agree = 0
    for rep in reports[1:-1]:
        if abs(rep.dIdt_fd) < deadband:
            continue
        n_eligible += 1
        if np.sign(rep.dIdt_fd) == np.sign(rep.rhs_eq16):
            n_agree += 1
    fraction = 1.0 if n_eligible == 0 else n_agree / n_eligible
    return SignWitness(fraction=fraction, n_eligible=n_eligible, n_agree=n_agree)
