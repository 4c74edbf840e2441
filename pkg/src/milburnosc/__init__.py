"""Exact Gaussian dynamics of two coupled oscillators under Milburn intrinsic decoherence."""
from .backend import BACKEND_NAME, HAVE_COMPILED
from .errors import (
    DomainError,
    InstabilityError,
    MilburnError,
    NegativeOccupationError,
    ParameterError,
    UnknownPresetError,
    VerificationError,
)
from .evolution import (
    covariance_trajectory,
    milburn_covariance,
    series_oracle_covariance,
    steady_state_covariance,
    von_neumann_covariance,
)
from .experiments import (
    DEFAULT_GRID,
    RunResult,
    SweepSpec,
    TimeGrid,
    figure_preset,
    parameter_sweep,
    time_series,
)
from .normal_modes import NormalModes, SystemParams, derive_modes
from .quantifiers import (
    CorrelationRecord,
    correlation_record,
    isotropic_closed_form,
    log_negativity,
    purity,
    steering,
    virtual_excitations,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "HAVE_COMPILED",
    "MilburnError",
    "ParameterError",
    "InstabilityError",
    "DomainError",
    "NegativeOccupationError",
    "UnknownPresetError",
    "VerificationError",
    "SystemParams",
    "NormalModes",
    "derive_modes",
    "milburn_covariance",
    "von_neumann_covariance",
    "covariance_trajectory",
    "series_oracle_covariance",
    "steady_state_covariance",
    "CorrelationRecord",
    "correlation_record",
    "virtual_excitations",
    "log_negativity",
    "steering",
    "purity",
    "isotropic_closed_form",
    "TimeGrid",
    "DEFAULT_GRID",
    "RunResult",
    "SweepSpec",
    "time_series",
    "parameter_sweep",
    "figure_preset",
]
