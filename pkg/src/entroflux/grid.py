"""Uniform periodic 1-D grid, field containers, quadrature, and derivatives.

All fields live on a ``Grid1D``: n equally spaced samples x_k = x_min + k*dx
with the right endpoint excluded (periodic wrap).  Quadrature is the periodic
rectangle rule, which coincides with the trapezoid rule on periodic data and
is spectrally accurate for smooth periodic fields.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PhysicalParams:
    """Physical constants in natural units."""

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0.0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not self.mass > 0.0:
            raise ValueError(f"mass must be positive, got {self.mass}")


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


class Grid1D:
    """Uniform periodic grid on [x_min, x_max) with n samples.

    n must be a power of two (>= 16) so the FFT-based machinery has a
    well-defined Nyquist mode.
    """

    def __init__(self, x_min: float, x_max: float, n: int):
        if not _is_power_of_two(int(n)) or n < 16:
            raise ValueError(f"n must be a power of two >= 16, got {n}")
        if not x_max > x_min:
            raise ValueError(f"x_max must exceed x_min, got [{x_min}, {x_max})")
        self.x_min = float(x_min)
        self.x_max = float(x_max)
        self.n = int(n)
        self.length = self.x_max - self.x_min
        self.dx = self.length / self.n
        self.x = self.x_min + self.dx * np.arange(self.n)
        self.k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        # Derivative multiplier: the Nyquist mode of an odd-order derivative
        # is ambiguous on a real grid; set it to zero.
        ik = 1j * self.k.copy()
        ik[self.n // 2] = 0.0
        self._ik = ik
        self.periodic = True

    @property
    def k_max(self) -> float:
        """Magnitude of the Nyquist wavenumber, pi/dx."""
        return np.pi / self.dx

    def matches(self, other: "Grid1D") -> bool:
        return (
            self.n == other.n
            and self.x_min == other.x_min
            and self.x_max == other.x_max
        )

    def __repr__(self):
        return f"Grid1D(x_min={self.x_min}, x_max={self.x_max}, n={self.n})"


class _Field:
    """Immutable sampled field on a Grid1D."""

    _dtype: type = float

    def __init__(self, grid: Grid1D, values):
        values = np.asarray(values, dtype=self._dtype)
        if values.shape != (grid.n,):
            raise ValueError(
                f"field length {values.shape} does not match grid n={grid.n}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("non-finite field")
        values.setflags(write=False)
        self.grid = grid
        self.values = values


class RealField(_Field):
    _dtype = float


class ComplexField(_Field):
    _dtype = complex


def integrate(f: _Field) -> float:
    """Periodic rectangle-rule integral dx * sum(f)."""
    if isinstance(f, ComplexField):
        return complex(f.grid.dx * f.values.sum())
    return float(f.grid.dx * f.values.sum())


def _spectral_derivative(values: np.ndarray, grid: Grid1D) -> np.ndarray:
    return np.fft.ifft(grid._ik * np.fft.fft(values))


def _central2_derivative(values: np.ndarray, grid: Grid1D) -> np.ndarray:
    return (np.roll(values, -1) - np.roll(values, 1)) / (2.0 * grid.dx)


def derivative(f: _Field, scheme: str = "spectral") -> _Field:
    """Spatial derivative of a periodic field.

    scheme "spectral": exact for trigonometric polynomials below Nyquist,
    with the Nyquist mode of the derivative set to zero.
    scheme "central2": second-order centered difference with periodic wrap.
    """
    if scheme == "spectral":
        d = _spectral_derivative(f.values, f.grid)
        if isinstance(f, RealField):
            return RealField(f.grid, d.real)
        return ComplexField(f.grid, d)
    if scheme == "central2":
        d = _central2_derivative(f.values, f.grid)
        return type(f)(f.grid, d)
    raise ValueError(f"unknown derivative scheme {scheme!r}")
