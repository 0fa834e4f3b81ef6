"""Closed-form reference solutions for oracle-vs-numeric comparisons.

Two analytic families:
  * free spreading Gaussian packet: sigma^2(t) = sigma0^2 (1 + (hbar t / 2 m sigma0^2)^2)
  * harmonic coherent state: rigid Gaussian of width sigma^2 = hbar/(2 m omega)
    whose center oscillates, so its entropy is exactly constant.

Fields are evaluated pointwise on the caller's grid so comparisons against the
simulator are sample-exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .entropy import Snapshot, info_field
from .grid import Grid1D, PhysicalParams, RealField
from .madelung import DEFAULT_REG_FLOOR, DensityFields


def _normal_density(x: np.ndarray, center: float, sigma2: float) -> np.ndarray:
    return np.exp(-((x - center) ** 2) / (2.0 * sigma2)) / np.sqrt(2.0 * np.pi * sigma2)


def _snapshot(grid, t, rho, v, reg_floor) -> Snapshot:
    rho_f = RealField(grid, rho)
    den = DensityFields(
        t=float(t),
        rho=rho_f,
        current=RealField(grid, rho * v),
        velocity=RealField(grid, v),
        floored_points=0,
        phase=None,
    )
    return Snapshot(den=den, info=info_field(rho_f, t, reg_floor))


@dataclass(frozen=True)
class GaussianOracle:
    """Free Gaussian packet with initial width sigma0, center x0, wavenumber k0."""

    sigma0: float
    x0: float = 0.0
    k0: float = 0.0
    params: PhysicalParams = field(default_factory=PhysicalParams)

    def __post_init__(self):
        if not self.sigma0 > 0.0:
            raise ValueError(f"sigma0 must be positive, got {self.sigma0}")

    def sigma2(self, t: float) -> float:
        h, m = self.params.hbar, self.params.mass
        spread = h * t / (2.0 * m * self.sigma0**2)
        return self.sigma0**2 * (1.0 + spread**2)

    def dsigma2_dt(self, t: float) -> float:
        h, m = self.params.hbar, self.params.mass
        return h**2 * t / (2.0 * m**2 * self.sigma0**2)

    def center(self, t: float) -> float:
        return self.x0 + self.params.hbar * self.k0 * t / self.params.mass

    def entropy(self, t: float) -> float:
        return 0.5 * np.log(2.0 * np.pi * np.e * self.sigma2(t)) + 1.0

    def entropy_rate(self, t: float) -> float:
        return self.dsigma2_dt(t) / (2.0 * self.sigma2(t))

    def fields(
        self, grid: Grid1D, t: float, reg_floor: float = DEFAULT_REG_FLOOR
    ) -> Snapshot:
        s2 = self.sigma2(t)
        xc = self.center(t)
        rho = _normal_density(grid.x, xc, s2)
        drift = self.params.hbar * self.k0 / self.params.mass
        v = drift + (grid.x - xc) * self.dsigma2_dt(t) / (2.0 * s2)
        return _snapshot(grid, t, rho, v, reg_floor)


@dataclass(frozen=True)
class CoherentOracle:
    """Harmonic-oscillator coherent state: rigidly transported Gaussian."""

    omega: float
    amplitude: float
    params: PhysicalParams = field(default_factory=PhysicalParams)

    def __post_init__(self):
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")

    def sigma2(self) -> float:
        return self.params.hbar / (2.0 * self.params.mass * self.omega)

    def center(self, t: float) -> float:
        return self.amplitude * np.cos(self.omega * t)

    def entropy(self, t: float = 0.0) -> float:
        return 0.5 * np.log(2.0 * np.pi * np.e * self.sigma2()) + 1.0

    def entropy_rate(self, t: float = 0.0) -> float:
        return 0.0

    def fields(
        self, grid: Grid1D, t: float, reg_floor: float = DEFAULT_REG_FLOOR
    ) -> Snapshot:
        rho = _normal_density(grid.x, self.center(t), self.sigma2())
        v = np.full(grid.n, -self.amplitude * self.omega * np.sin(self.omega * t))
        return _snapshot(grid, t, rho, v, reg_floor)
