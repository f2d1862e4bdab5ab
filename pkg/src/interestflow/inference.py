"""Invert observed exponents into the behavioral parameters (p, lambda).

Observed (alpha, beta, theta) are treated as Gaussian around the
surface's per-cell exponents with a common width sigma, so maximizing
the likelihood over the grid is the same as minimizing the Euclidean
distance in exponent space.  Sigma only rescales the objective; the
chosen cell never depends on it (it is accepted for completeness).

Gamma is deliberately left out of the objective: it tracks the jump
exponent more than anything else, so it serves better as a consistency
diagnostic than as a third residual.
"""

import math
from dataclasses import dataclass

from .errors import InferenceError
from .scaling import ExponentSet, ResponseSurface


@dataclass(frozen=True)
class ObservedExponents:
    alpha: float
    beta: float
    theta: float

    def __post_init__(self):
        for name in ("alpha", "beta", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise InferenceError(f"observed {name} must be finite")


@dataclass(frozen=True)
class InferredParams:
    p_hat: float
    lambda_hat: float
    distance: float
    cell_index: tuple[int, int]


def _squared_distance(obs: ObservedExponents, cell: ExponentSet) -> float:
    return (
        (obs.alpha - cell.alpha.exponent) ** 2
        + (obs.beta - cell.beta.exponent) ** 2
        + (obs.theta - cell.theta.exponent) ** 2
    )


def log_likelihood(obs: ObservedExponents, cell: ExponentSet, sigma: float = 1.0) -> float:
    """Log of the proportional Gaussian likelihood (constant dropped)."""
    if sigma <= 0.0:
        raise InferenceError(f"sigma must be positive, got {sigma}")
    return -_squared_distance(obs, cell) / sigma**2


def infer(obs: ObservedExponents, surface: ResponseSurface) -> InferredParams:
    """Pick the grid cell whose exponents sit closest to the observation.

    Failed surface cells are skipped; ties break toward smaller p, then
    smaller lambda (the scan runs in grid order).
    """
    best = None
    best_sq = math.inf
    for (i, j) in sorted(surface.cells):
        sq = _squared_distance(obs, surface.cells[(i, j)])
        if sq < best_sq:
            best_sq = sq
            best = (i, j)
    if best is None:
        raise InferenceError("surface has no usable cells")
    p_hat, lambda_hat = surface.params_at(*best)
    return InferredParams(
        p_hat=p_hat,
        lambda_hat=lambda_hat,
        distance=math.sqrt(best_sq),
        cell_index=best,
    )


def gamma_diagnostic(observed_gamma: float, surface: ResponseSurface, cell_index: tuple[int, int]) -> dict:
    """Report how far an observed gamma sits from the chosen cell's."""
    cell = surface.cells[cell_index]
    return {
        "observed": observed_gamma,
        "surface_value": cell.gamma.exponent,
        "abs_difference": abs(observed_gamma - cell.gamma.exponent),
    }
