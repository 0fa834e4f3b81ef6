"""Flat key = value run configuration with line-precise validation errors.

Format: UTF-8 text, one `key = value` per line, `#` starts a comment, blank
lines ignored.  Unknown keys, type mismatches, and violated physical bounds
are all reported with the offending line number.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .climit import SweepSpec
from .grid import Grid1D, PhysicalParams
from .propagate import Potential, kinetic_phase


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _tokenize(text: str) -> dict:
    """Map key -> (raw value, line number)."""
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("empty key", lineno)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        entries[key] = (value, lineno)
    return entries


def _convert(kind: str, value: str, key: str, line: int):
    try:
        if kind == "float":
            return float(value)
        if kind == "int":
            out = int(value)
            return out
        if kind == "bool":
            if value.lower() in ("true", "yes", "1"):
                return True
            if value.lower() in ("false", "no", "0"):
                return False
            raise ValueError(value)
        if kind == "str":
            return value
        if kind == "float_list":
            items = [s.strip() for s in value.split(",") if s.strip()]
            if not items:
                raise ValueError(value)
            return tuple(float(s) for s in items)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r} as {kind}", line)
    raise AssertionError(f"unknown schema kind {kind}")


class _Entries:
    """Typed access to tokenized entries against a fixed schema."""

    def __init__(self, text: str, schema: dict):
        self.schema = schema
        self.raw = _tokenize(text)
        for key, (_, line) in self.raw.items():
            if key not in schema:
                raise ConfigError(f"unknown key {key!r}", line)

    def has(self, key: str) -> bool:
        return key in self.raw

    def line(self, key: str) -> int | None:
        return self.raw[key][1] if key in self.raw else None

    def get(self, key: str, default=None):
        if key not in self.raw:
            return default
        value, line = self.raw[key]
        return _convert(self.schema[key], value, key, line)

    def require(self, key: str):
        if key not in self.raw:
            raise ConfigError(f"missing required key {key!r}")
        return self.get(key)


@dataclass(frozen=True)
class RunConfig:
    grid: Grid1D
    params: PhysicalParams
    initial_kind: str  # gaussian | coherent
    sigma0: float      # effective initial width (derived for coherent)
    x0: float
    k0: float
    omega: float | None
    amplitude: float | None
    potential: Potential
    dt: float
    t_final: float
    n_steps: int
    observe_stride: int
    reg_floor: float
    subvolume: tuple[float, float] | None
    save_snapshots: bool
    norm_tol: float
    eq16_rel_tol: float | None


_RUN_SCHEMA = {
    "x_min": "float",
    "x_max": "float",
    "n": "int",
    "hbar": "float",
    "mass": "float",
    "initial": "str",
    "sigma0": "float",
    "x0": "float",
    "k0": "float",
    "omega": "float",
    "amplitude": "float",
    "potential": "str",
    "potential_omega": "float",
    "potential_center": "float",
    "barrier_height": "float",
    "barrier_width": "float",
    "barrier_center": "float",
    "dt": "float",
    "t_final": "float",
    "observe_stride": "int",
    "reg_floor": "float",
    "subvolume_a": "float",
    "subvolume_b": "float",
    "save_snapshots": "bool",
    "norm_tol": "float",
    "eq16_rel_tol": "float",
}


def parse_config(text: str) -> RunConfig:
    e = _Entries(text, _RUN_SCHEMA)

    n = e.require("n")
    try:
        grid = Grid1D(e.require("x_min"), e.require("x_max"), n)
    except ValueError as exc:
        raise ConfigError(str(exc), e.line("n")) from exc

    hbar = e.get("hbar", 1.0)
    mass = e.get("mass", 1.0)
    try:
        params = PhysicalParams(hbar=hbar, mass=mass)
    except ValueError as exc:
        raise ConfigError(str(exc), e.line("hbar") or e.line("mass")) from exc

    initial = e.get("initial", "gaussian")
    if initial not in ("gaussian", "coherent"):
        raise ConfigError(
            f"initial must be 'gaussian' or 'coherent', got {initial!r}",
            e.line("initial"),
        )
    omega = amplitude = None
    if initial == "gaussian":
        sigma0 = e.require("sigma0")
        width_line = e.line("sigma0")
    else:
        omega = e.require("omega")
        amplitude = e.require("amplitude")
        if not omega > 0.0:
            raise ConfigError(f"omega must be positive, got {omega}", e.line("omega"))
        sigma0 = float(np.sqrt(hbar / (2.0 * mass * omega)))
        width_line = e.line("omega")
    if not sigma0 > 3.0 * grid.dx:
        raise ConfigError(
            f"grid too coarse: initial width {sigma0:.6g} must exceed "
            f"3*dx = {3.0 * grid.dx:.6g}",
            width_line,
        )
    if not 4.0 * sigma0 < 0.5 * grid.length:
        raise ConfigError(
            f"packet too wide for the domain: 4*width = {4.0 * sigma0:.6g}",
            width_line,
        )

    pot_kind = e.get("potential", "free")
    try:
        if pot_kind == "free":
            potential = Potential.free()
        elif pot_kind == "harmonic":
            potential = Potential.harmonic(
                e.require("potential_omega"), e.get("potential_center", 0.0)
            )
        elif pot_kind == "gaussian_barrier":
            potential = Potential.gaussian_barrier(
                e.require("barrier_height"),
                e.require("barrier_width"),
                e.get("barrier_center", 0.0),
            )
        else:
            raise ConfigError(
                f"potential must be free, harmonic, or gaussian_barrier, "
                f"got {pot_kind!r}",
                e.line("potential"),
            )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc), e.line("potential")) from exc

    dt = e.require("dt")
    if not dt > 0.0:
        raise ConfigError(f"dt must be positive, got {dt}", e.line("dt"))
    phase = kinetic_phase(grid, params, dt)
    if not phase < np.pi:
        raise ConfigError(
            f"time step too large: dt*hbar*k_max^2/(2m) = {phase:.6g} >= pi",
            e.line("dt"),
        )

    t_final = e.require("t_final")
    if t_final < 0.0:
        raise ConfigError(f"t_final must be >= 0, got {t_final}", e.line("t_final"))
    n_steps = int(round(t_final / dt))

    observe_stride = e.get("observe_stride", 10)
    if observe_stride < 1:
        raise ConfigError(
            f"observe_stride must be >= 1, got {observe_stride}",
            e.line("observe_stride"),
        )
    reg_floor = e.get("reg_floor", 1e-12)
    if not reg_floor > 0.0:
        raise ConfigError(
            f"reg_floor must be positive, got {reg_floor}", e.line("reg_floor")
        )

    subvolume = None
    if e.has("subvolume_a") or e.has("subvolume_b"):
        if not (e.has("subvolume_a") and e.has("subvolume_b")):
            raise ConfigError(
                "subvolume_a and subvolume_b must be given together",
                e.line("subvolume_a") or e.line("subvolume_b"),
            )
        a, b = e.get("subvolume_a"), e.get("subvolume_b")
        if not (grid.x_min <= a < b <= grid.x_max - grid.dx):
            raise ConfigError(
                f"subvolume [{a}, {b}] must lie inside [{grid.x_min}, "
                f"{grid.x_max - grid.dx}] with a < b",
                e.line("subvolume_a"),
            )
        subvolume = (a, b)

    return RunConfig(
        grid=grid,
        params=params,
        initial_kind=initial,
        sigma0=sigma0,
        x0=e.get("x0", 0.0),
        k0=e.get("k0", 0.0),
        omega=omega,
        amplitude=amplitude,
        potential=potential,
        dt=dt,
        t_final=t_final,
        n_steps=n_steps,
        observe_stride=observe_stride,
        reg_floor=reg_floor,
        subvolume=subvolume,
        save_snapshots=e.get("save_snapshots", False),
        norm_tol=e.get("norm_tol", 1e-8),
        eq16_rel_tol=e.get("eq16_rel_tol", None),
    )


_SWEEP_SCHEMA = {
    "epsilons": "float_list",
    "t_c": "float",
    "L_c": "float",
    "x_min": "float",
    "x_max": "float",
    "n": "int",
    "mass": "float",
    "x0": "float",
    "k0": "float",
    "dt_ref": "float",
    "n_samples": "int",
    "reg_floor": "float",
}


def parse_sweep_config(text: str) -> SweepSpec:
    e = _Entries(text, _SWEEP_SCHEMA)
    try:
        return SweepSpec(
            epsilons=e.require("epsilons"),
            t_c=e.require("t_c"),
            L_c=e.require("L_c"),
            x_min=e.get("x_min", -20.0),
            x_max=e.get("x_max", 20.0),
            n=e.get("n", 1024),
            mass=e.get("mass", 1.0),
            x0=e.get("x0", 0.0),
            k0=e.get("k0", 0.0),
            dt_ref=e.get("dt_ref", 2e-3),
            n_samples=e.get("n_samples", 100),
            reg_floor=e.get("reg_floor", 1e-12),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc), e.line("epsilons")) from exc


@dataclass(frozen=True)
class BinningConfig:
    grid: Grid1D
    sigma0: float
    x0: float
    bin_widths: tuple
    reg_floor: float


_BINNING_SCHEMA = {
    "x_min": "float",
    "x_max": "float",
    "n": "int",
    "sigma0": "float",
    "x0": "float",
    "bin_widths": "float_list",
    "reg_floor": "float",
}


def parse_binning_config(text: str) -> BinningConfig:
    e = _Entries(text, _BINNING_SCHEMA)
    try:
        grid = Grid1D(e.require("x_min"), e.require("x_max"), e.require("n"))
    except ValueError as exc:
        raise ConfigError(str(exc), e.line("n")) from exc
    sigma0 = e.require("sigma0")
    if not sigma0 > 0.0:
        raise ConfigError(f"sigma0 must be positive, got {sigma0}", e.line("sigma0"))
    bin_widths = e.require("bin_widths")
    for dq in bin_widths:
        if not dq > 0.0:
            raise ConfigError(
                f"bin widths must be positive, got {dq}", e.line("bin_widths")
            )
    return BinningConfig(
        grid=grid,
        sigma0=sigma0,
        x0=e.get("x0", 0.0),
        bin_widths=bin_widths,
        reg_floor=e.get("reg_floor", 1e-12),
    )
