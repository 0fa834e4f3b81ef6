"""1-D quantum wavepacket simulator with information-entropy balance diagnostics."""

from .climit import SweepReport, SweepRow, SweepSpec, run_sweep
from .config import (
    BinningConfig,
    ConfigError,
    RunConfig,
    parse_binning_config,
    parse_config,
    parse_sweep_config,
)
from .entropy import (
    BalanceReport,
    BinRow,
    InfoDensityField,
    SignWitness,
    Snapshot,
    balance_residual,
    binned_entropy,
    binning_limit_study,
    entropy_rate_check,
    info_density,
    info_entropy,
    info_field,
    rate_identity_residual,
    sign_witness,
    take_snapshot,
)
from .grid import (
    ComplexField,
    Grid1D,
    PhysicalParams,
    RealField,
    derivative,
    integrate,
)
from .madelung import (
    DensityFields,
    current,
    density,
    fields,
    phase_unwrap,
    velocity,
)
from .oracle import CoherentOracle, GaussianOracle
from .propagate import (
    Potential,
    WaveFunction,
    evolve,
    init_gaussian,
    kinetic_phase,
    step,
)
from .report import RunReport, RunRow, run_oracle, run_simulation

__version__ = "0.1.0"
