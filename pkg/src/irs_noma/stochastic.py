"""
Distribution parameters, raw moments and Gamma moment matching

Nakagami-m amplitudes and Gamma powers are the only laws the analysis needs.
Moment formulas are evaluated in log space through `ln_gamma` and
exponentiated once, so shapes in the hundreds (N * k_S1 for large surfaces)
never overflow.
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DegenerateVarianceError, require
from .specfun import Probability, ln_gamma, reg_inc_gamma_lower

# Variance below this fraction of mu^2 is treated as a deterministic power.
DEGENERATE_VARIANCE_RATIO = 1.0e-30

_MAX_MOMENT_ORDER = 4

Draw = Union[float, np.ndarray]


@dataclass(frozen=True)
class NakagamiParams:
    """Nakagami-m amplitude law with shape m and mean power omega"""

    m: float
    omega: float

    def __post_init__(self):
        require(
            math.isfinite(self.m) and self.m >= 0.5,
            f"Nakagami shape m must be >= 0.5, got {self.m!r}",
        )
        require(
            math.isfinite(self.omega) and self.omega > 0.0,
            f"Nakagami mean power omega must be > 0, got {self.omega!r}",
        )

    def power_gamma(self) -> "GammaParams":
        """Law of the squared amplitude, Gamma(m, omega / m)"""
        return GammaParams(self.m, self.omega / self.m)


@dataclass(frozen=True)
class GammaParams:
    """Gamma law with shape k and scale theta"""

    k: float
    theta: float

    def __post_init__(self):
        require(
            math.isfinite(self.k) and self.k > 0.0, f"Gamma shape k must be > 0, got {self.k!r}"
        )
        require(
            math.isfinite(self.theta) and self.theta > 0.0,
            f"Gamma scale theta must be > 0, got {self.theta!r}",
        )

    @property
    def mean(self) -> float:
        return self.k * self.theta

    @property
    def variance(self) -> float:
        return self.k * self.theta * self.theta


@dataclass(frozen=True)
class PowerMoments:
    """First and second raw moments of a non-negative power"""

    mu: float
    mu2: float

    def __post_init__(self):
        require(
            math.isfinite(self.mu) and self.mu > 0.0, f"first moment must be > 0, got {self.mu!r}"
        )
        require(
            math.isfinite(self.mu2) and self.mu2 > 0.0,
            f"second moment must be > 0, got {self.mu2!r}",
        )

    @property
    def variance(self) -> float:
        return self.mu2 - self.mu * self.mu

    def scaled(self, c: float) -> "PowerMoments":
        """Moments of c * X"""
        require(c > 0.0, f"scale factor must be > 0, got {c!r}")
        return PowerMoments(c * self.mu, c * c * self.mu2)


def _check_order(p: int) -> None:
    require(
        isinstance(p, (int, np.integer)) and 1 <= p <= _MAX_MOMENT_ORDER,
        f"moment order must be an integer in 1..{_MAX_MOMENT_ORDER}, got {p!r}",
    )


def nakagami_raw_moment(params: NakagamiParams, p: int) -> float:
    """E{|H|^p} = Gamma(m + p/2) / (Gamma(m) (m / omega)^(p/2))"""
    _check_order(p)
    m = params.m
    log_moment = (
        ln_gamma(m + 0.5 * p) - ln_gamma(m) - 0.5 * p * (math.log(m) - math.log(params.omega))
    )
    return math.exp(log_moment)


def gamma_raw_moment(params: GammaParams, p: int) -> float:
    """E{X^p} = theta^p * k (k + 1) ... (k + p - 1)"""
    _check_order(p)
    log_moment = p * math.log(params.theta) + sum(math.log(params.k + q) for q in range(p))
    return math.exp(log_moment)


def match_gamma(moments: PowerMoments) -> GammaParams:
    """
    Gamma law with the same first and second raw moments.

    k = mu^2 / (mu2 - mu^2), theta = (mu2 - mu^2) / mu. Exact when the
    moments come from a Gamma law.

    Raises:
        DegenerateVarianceError: mu2 - mu^2 <= 1e-30 * mu^2 (near-deterministic
            power, the fit would be a spike)
    """
    mu = moments.mu
    variance = moments.variance
    if variance <= DEGENERATE_VARIANCE_RATIO * mu * mu:
        raise DegenerateVarianceError(
            f"power variance {variance!r} is degenerate for mean {mu!r}; no Gamma fit"
        )
    return GammaParams(mu * mu / variance, variance / mu)


def scale_gamma(params: GammaParams, c: float) -> GammaParams:
    """Law of c * X for X ~ Gamma(k, theta): Gamma(k, c * theta)"""
    require(math.isfinite(c) and c > 0.0, f"scale factor must be > 0, got {c!r}")
    return GammaParams(params.k, c * params.theta)


def gamma_cdf(params: GammaParams, x: float) -> Probability:
    """P{X <= x}"""
    if x <= 0.0:
        return 0.0
    return reg_inc_gamma_lower(params.k, x / params.theta)


def gamma_pdf(params: GammaParams, x: Draw) -> Draw:
    """Density of Gamma(k, theta) at x (scalar or array)"""
    k, theta = params.k, params.theta
    x_arr = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_pdf = (k - 1.0) * np.log(x_arr) - x_arr / theta - ln_gamma(k) - k * math.log(theta)
        pdf = np.where(x_arr > 0.0, np.exp(log_pdf), 0.0)
    if k == 1.0:
        pdf = np.where(x_arr == 0.0, 1.0 / theta, pdf)
    return float(pdf) if np.ndim(pdf) == 0 else pdf


def make_stream(seed: int, chunk_index: Optional[int] = None) -> np.random.Generator:
    """
    Counter-based random stream.

    The stream is a Philox generator keyed by SeedSequence(seed); a chunk index
    selects an independent substream, so results depend only on
    (seed, chunk_index) and never on which worker draws them.
    """
    require(int(seed) >= 0, f"seed must be non-negative, got {seed!r}")
    spawn_key = () if chunk_index is None else (int(chunk_index),)
    seed_sequence = np.random.SeedSequence(int(seed), spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(seed_sequence))


def sample_gamma(params: GammaParams, stream: np.random.Generator, size=None) -> Draw:
    """
    Gamma draws.

    Shapes k >= 1 go straight to numpy's Marsaglia-Tsang sampler. Shapes
    k < 1 are boosted: Gamma(k + 1, theta) * U^(1/k) with U uniform on [0, 1).
    """
    k = params.k
    if k >= 1.0:
        return stream.gamma(k, params.theta, size=size)
    boosted = stream.gamma(k + 1.0, params.theta, size=size)
    return boosted * stream.random(size=size) ** (1.0 / k)


def sample_nakagami(params: NakagamiParams, stream: np.random.Generator, size=None) -> Draw:
    """Nakagami amplitude draws, the square root of a Gamma(m, omega / m) power"""
    return np.sqrt(sample_gamma(params.power_gamma(), stream, size=size))


__all__ = [
    "DEGENERATE_VARIANCE_RATIO",
    "GammaParams",
    "NakagamiParams",
    "PowerMoments",
    "gamma_cdf",
    "gamma_pdf",
    "gamma_raw_moment",
    "make_stream",
    "match_gamma",
    "nakagami_raw_moment",
    "sample_gamma",
    "sample_nakagami",
    "scale_gamma",
]
