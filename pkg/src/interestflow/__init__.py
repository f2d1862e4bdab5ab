"""Collective interest mobility: interacting heavy-tailed walkers,
attention flow networks, growth scaling exponents, and inversion of the
behavioral parameters (p, lambda) from observed exponents."""

__version__ = "0.1.0"

from .engine import SessionResult, SimConfig, run_session, simulate_lifetimes
from .errors import (
    FitError,
    InferenceError,
    IngestError,
    InterestFlowError,
    ParameterError,
    SweepError,
)
from .flownet import (
    SINK,
    SOURCE,
    AttentionFlowNetwork,
    Metrics,
    build_network,
    check_flow_balance,
    metrics,
)
from .inference import InferredParams, ObservedExponents, infer, log_likelihood
from .ingest import (
    Event,
    GrowthCurve,
    Session,
    community_exponents,
    growth_curve,
    parse_events,
    sessionize,
)
from .levy import StepLawParams, sample_displacement, step_cdf, step_quantile
from .scaling import (
    ExponentSet,
    ResponseSurface,
    ScalingFit,
    build_response_surface,
    fit_power_law,
    run_sweep,
    sweep_exponents,
)
from .space import InterestSpace, LatticePoint

__all__ = [
    "AttentionFlowNetwork",
    "Event",
    "ExponentSet",
    "FitError",
    "GrowthCurve",
    "InferenceError",
    "InferredParams",
    "IngestError",
    "InterestFlowError",
    "InterestSpace",
    "LatticePoint",
    "Metrics",
    "ObservedExponents",
    "ParameterError",
    "ResponseSurface",
    "SINK",
    "SOURCE",
    "ScalingFit",
    "Session",
    "SessionResult",
    "SimConfig",
    "StepLawParams",
    "SweepError",
    "build_network",
    "build_response_surface",
    "check_flow_balance",
    "community_exponents",
    "fit_power_law",
    "growth_curve",
    "infer",
    "log_likelihood",
    "metrics",
    "parse_events",
    "run_session",
    "run_sweep",
    "sample_displacement",
    "sessionize",
    "simulate_lifetimes",
    "step_cdf",
    "step_quantile",
    "sweep_exponents",
]
