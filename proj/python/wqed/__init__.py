"""Driven Lambda-type emitter in front of a mirror.

Delay-equation dynamics, bound states in the continuum, the emitted field,
and a discretized-continuum reference, backed by the C++ core.
"""

from ._core import (
    AmplitudePair,
    AnalyticVariant,
    BicSolution,
    DESIGN_PHASE_TOLERANCE,
    DETECTION_PHASE_TOLERANCE,
    DressedBasis,
    EmissionRun,
    Frame,
    ModeGrid,
    ModeRun,
    NumericalError,
    SystemParams,
    ValidationError,
    analytic_reference,
    bic_field_profile,
    bic_frequencies,
    build_mode_grid,
    characteristic_function,
    default_spatial_step,
    default_step,
    design_bic_geometry,
    dressed_basis,
    field_profile,
    frame_transform,
    integrate_modes,
    intensity_map,
    longtime_amplitude,
    photon_norm,
    presets,
    run_experiment,
    simulate_emission,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
