"""Heavy-tailed step sampling for walkers in the interest space.

Jump lengths follow a bounded power law with density proportional to
``l**-lam`` on ``[l_min, l_max]``.  The upper bound keeps the law
normalizable over the whole admissible exponent range (it is not
normalizable on an unbounded support at ``lam <= 1``).

Closed forms used throughout (``r = l_max / l_min``):

    lam != 1:  F(l) = expm1((1-lam)*log(l/l_min)) / expm1((1-lam)*log(r))
               Q(u) = l_min * exp(log1p(u*expm1((1-lam)*log(r))) / (1-lam))
    lam == 1:  F(l) = log(l/l_min) / log(r)
               Q(u) = l_min * r**u

The expm1/log1p forms stay accurate as ``lam`` approaches 1 from either
side, where the naive power-difference form cancels catastrophically.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

DEFAULT_L_MIN = 1.0
DEFAULT_L_MAX = 1000.0


@dataclass(frozen=True)
class StepLawParams:
    """Parameters of the bounded power-law jump length distribution.

    lam    -- tail exponent, must lie in [1, 3]
    l_min  -- lower support edge in lattice units (>= 1 keeps every
              sampled displacement nonzero after rounding)
    l_max  -- upper support edge, finite
    """

    lam: float
    l_min: float = DEFAULT_L_MIN
    l_max: float = DEFAULT_L_MAX

    def __post_init__(self):
        if not (1.0 <= self.lam <= 3.0):
            raise ParameterError(f"step exponent must be in [1, 3], got {self.lam}")
        if not (0.0 < self.l_min < self.l_max):
            raise ParameterError(
                f"need 0 < l_min < l_max, got l_min={self.l_min}, l_max={self.l_max}"
            )
        if not math.isfinite(self.l_max):
            raise ParameterError("l_max must be finite")


def step_quantile(u, params: StepLawParams):
    """Inverse CDF of the bounded power law.

    Accepts a scalar or array ``u`` in [0, 1); returns the same shape.
    Monotone nondecreasing in ``u`` with Q(0) = l_min and Q(u->1) -> l_max.
    """
    u = np.asarray(u, dtype=float)
    if np.any(u < 0.0) or np.any(u >= 1.0):
        raise ParameterError("quantile argument must lie in [0, 1)")
    log_r = math.log(params.l_max / params.l_min)
    if params.lam == 1.0:
        out = params.l_min * np.exp(u * log_r)
    else:
        s = 1.0 - params.lam
        out = params.l_min * np.exp(np.log1p(u * math.expm1(s * log_r)) / s)
    return out if out.ndim else float(out)


def step_cdf(l, params: StepLawParams):
    """CDF of the bounded power law, clamped to {0, 1} outside the support.

    Accepts a scalar or array; exact inverse of :func:`step_quantile` on
    the support.
    """
    l = np.asarray(l, dtype=float)
    ratio = np.clip(l / params.l_min, 1.0, params.l_max / params.l_min)
    log_r = math.log(params.l_max / params.l_min)
    if params.lam == 1.0:
        out = np.log(ratio) / log_r
    else:
        s = 1.0 - params.lam
        out = np.expm1(s * np.log(ratio)) / math.expm1(s * log_r)
    return out if out.ndim else float(out)


def displacement_from(length: float, angle: float) -> tuple[int, int]:
    """Project a continuous (length, angle) jump onto the integer lattice.

    Components round to the nearest integer, ties away from zero, so the
    marginal length law survives up to rounding and the direction stays
    isotropic.  With length >= 1 the result is never (0, 0): the larger
    component is at least 1/sqrt(2) in magnitude and rounds to >= 1.
    """
    dx = length * math.cos(angle)
    dy = length * math.sin(angle)
    return _round_away(dx), _round_away(dy)


def _round_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def sample_displacement(rng: np.random.Generator, params: StepLawParams) -> tuple[int, int]:
    """Draw one isotropic lattice displacement (length then angle)."""
    dx, dy = sample_displacements(rng, params, 1)
    return int(dx[0]), int(dy[0])


def sample_displacements(rng: np.random.Generator, params: StepLawParams, n: int):
    """Draw ``n`` displacements in one batch.

    Draw order is fixed: one uniform batch for lengths, then one for
    angles.  Callers relying on bit reproducibility (the simulation
    engine) depend on this order.
    """
    lengths = step_quantile(rng.random(n), params)
    angles = rng.random(n) * (2.0 * math.pi)
    dx = lengths * np.cos(angles)
    dy = lengths * np.sin(angles)
    return _round_away_array(dx), _round_away_array(dy)


def _round_away_array(x: np.ndarray) -> np.ndarray:
    return (np.sign(x) * np.floor(np.abs(x) + 0.5)).astype(np.int64)
