"""Quantum Lienard oscillator toolkit (Python bindings of the C++ core)."""

from ._core import (
    AveragedCycle,
    Basis,
    BlowUpError,
    ConfigError,
    DampingSpec,
    DegenerateDegreeError,
    Family,
    InsufficientDataError,
    LimitCycle,
    NoiseSpec,
    Stability,
    SystemParams,
    a_from_m,
    averaging_amplitude_condition,
    bath_decay_fit,
    beta_from_m,
    coth_factor,
    fdr_closure_check,
    limit_cycle_census,
    m_from_a,
    m_from_beta,
    noise_intensity,
    preset,
    preset_names,
    radial_statistics,
    run_config,
    simulate,
    __version__,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
