"""Classical-limit sweep over the dimensionless parameter eps = hbar*t_c/(m*L_c^2).

eps is realized by scaling hbar with m, L_c (the initial packet width) and t_c
fixed, so grid and time-step economics stay put.  The sweep observable is the
entropy change over [0, t_c] of a free Gaussian packet; for that scenario the
closed form is delta_I = 0.5*ln(1 + eps^2/4), vanishing quadratically as
eps -> 0.  The per-step kinetic phase is held eps-independent by scaling
dt ~ 1/hbar.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .entropy import entropy_rate_check, sign_witness, take_snapshot
from .grid import Grid1D, PhysicalParams
from .oracle import GaussianOracle
from .propagate import Potential, evolve, init_gaussian

THREADS_ENV = "ENTROFLUX_THREADS"


@dataclass(frozen=True)
class SweepSpec:
    epsilons: tuple
    t_c: float
    L_c: float
    x_min: float = -20.0
    x_max: float = 20.0
    n: int = 1024
    mass: float = 1.0
    x0: float = 0.0
    k0: float = 0.0
    dt_ref: float = 2e-3
    n_samples: int = 100
    reg_floor: float = 1e-12

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilons)
        if len(eps) == 0:
            raise ValueError("epsilons must be nonempty")
        if any(not e > 0.0 for e in eps):
            raise ValueError("epsilons must be positive")
        if any(nxt >= prv for prv, nxt in zip(eps[:-1], eps[1:])):
            raise ValueError("epsilons must be strictly descending")
        object.__setattr__(self, "epsilons", eps)
        if not self.t_c > 0.0:
            raise ValueError(f"t_c must be positive, got {self.t_c}")
        if not self.L_c > 0.0:
            raise ValueError(f"L_c must be positive, got {self.L_c}")

    def hbar_for(self, eps: float) -> float:
        return eps * self.mass * self.L_c**2 / self.t_c


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    hbar: float
    dt: float
    n_steps: int
    delta_I: float
    delta_I_expected: float
    residual13_l2_max: float
    eq16_rel_err: float
    sign_fraction: float
    error: str = ""


@dataclass(frozen=True)
class SweepReport:
    rows: list
    exponent: float


def _run_one(spec: SweepSpec, eps: float) -> SweepRow:
    hbar = spec.hbar_for(eps)
    params = PhysicalParams(hbar=hbar, mass=spec.mass)
    grid = Grid1D(spec.x_min, spec.x_max, spec.n)
    # hold the per-step kinetic phase fixed across the sweep: dt ~ 1/hbar
    dt = spec.dt_ref * spec.epsilons[0] / eps
    n_steps = max(1, int(round(spec.t_c / dt)))
    dt = spec.t_c / n_steps
    stride = max(1, int(round(n_steps / spec.n_samples)))
    oracle = GaussianOracle(sigma0=spec.L_c, x0=spec.x0, k0=spec.k0, params=params)
    expected = oracle.entropy(spec.t_c) - oracle.entropy(0.0)
    try:
        wf = init_gaussian(grid, params, sigma0=spec.L_c, x0=spec.x0, k0=spec.k0)
        snaps = [take_snapshot(wf, spec.reg_floor)]
        evolve(
            wf,
            Potential.free(),
            dt,
            n_steps,
            observer=lambda w: snaps.append(take_snapshot(w, spec.reg_floor)),
            stride=stride,
        )
        seam = max(snaps[-1].den.rho.values[0], snaps[-1].den.rho.values[-1])
        if seam > 1e-20:
            raise ValueError(f"packet reached domain boundary (seam density {seam:.3g})")
        reports = entropy_rate_check(snaps)
        interior = reports[1:-1]
        didt_scale = max(max(abs(r.dIdt_fd) for r in interior), 1e-300)
        eq16_err = max(abs(r.dIdt_fd - r.rhs_eq16) for r in interior) / didt_scale
        row = SweepRow(
            epsilon=eps,
            hbar=hbar,
            dt=dt,
            n_steps=n_steps,
            delta_I=snaps[-1].info.I - snaps[0].info.I,
            delta_I_expected=expected,
            residual13_l2_max=max(r.residual_l2 for r in interior),
            eq16_rel_err=eq16_err,
            sign_fraction=sign_witness(reports).fraction,
        )
    except ValueError as exc:
        row = SweepRow(
            epsilon=eps,
            hbar=hbar,
            dt=dt,
            n_steps=n_steps,
            delta_I=float("nan"),
            delta_I_expected=expected,
            residual13_l2_max=float("nan"),
            eq16_rel_err=float("nan"),
            sign_fraction=float("nan"),
            error=str(exc),
        )
    return row


def run_sweep(spec: SweepSpec, max_workers: int | None = None) -> SweepReport:
    """Run one simulation per epsilon (descending) and fit delta_I ~ eps^p.

    Failed rows carry an error string and are excluded from the fit; the sweep
    continues past them.  Parallelism is capped by max_workers or the
    ENTROFLUX_THREADS environment variable (0 = auto).
    """
    if max_workers is None:
        env = os.environ.get(THREADS_ENV, "0")
        try:
            max_workers = int(env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {env!r}")
    if max_workers <= 0:
        max_workers = min(len(spec.epsilons), os.cpu_count() or 1)
    if max_workers == 1:
        rows = [_run_one(spec, e) for e in spec.epsilons]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(lambda e: _run_one(spec, e), spec.epsilons))
    rows.sort(key=lambda r: -r.epsilon)
    good = [r for r in rows if not r.error and r.delta_I > 0.0]
    if len(good) >= 2:
        exponent = float(
            np.polyfit(
                np.log([r.epsilon for r in good]),
                np.log([r.delta_I for r in good]),
                1,
            )[0]
        )
    else:
        exponent = float("nan")
    return SweepReport(rows=rows, exponent=exponent)
