"""First-order thermal process identification from step-response records."""

from ._core import (
    CsvError,
    DegenerateData,
    DiscreteModel,
    DiscretizationMethod,
    Error,
    FileError,
    FitParams,
    FitResult,
    InvalidArgument,
    LMConfig,
    PhysicalParams,
    ProcessParams,
    SeriesTooShort,
    SingularSystem,
    derive_process_params,
    discretize,
    fit_series,
    fit_to_process,
    generate,
    lm_fit,
    process_to_fit,
    read_csv,
    sg_projection,
    sg_smooth,
    simulate_continuous,
    simulate_discrete,
    step_response,
    step_response_jacobian,
    validate_step_jacobian,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
