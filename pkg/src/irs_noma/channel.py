"""
Effective channel power statistics of the two-UE IRS uplink

The UE the surface is configured for sees its reflected paths add coherently
(a positive sum of amplitude products, fitted by a Gamma law); the other UE
sees them add with random phases (a complex Gaussian sum, Rayleigh in
magnitude). Both effective channel powers are then matched to a Gamma law
through their first two raw moments.

Direct and reflection links are taken as independent. A pathloss
`ell_bs = 0` removes the surface structurally, not as a numerical limit.
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Tuple

import numpy as np

from .errors import DegenerateError, require
from .stochastic import (
    GammaParams,
    NakagamiParams,
    PowerMoments,
    gamma_pdf,
    gamma_raw_moment,
    match_gamma,
    nakagami_raw_moment,
    scale_gamma,
)

logger = logging.getLogger(__name__)

UE_INDICES = (1, 2)

_MU1_DEGENERATE_MARGIN = 1.0e-12


class CombiningRole(Enum):
    """How the surface combines a UE's reflected paths"""

    COHERENT = "coherent"
    RANDOM = "random"


class Strategy(Enum):
    """Surface configuration of a scenario"""

    BOOST_UE1 = "boost-ue1"
    BOOST_UE2 = "boost-ue2"
    NO_IRS = "no-irs"

    @property
    def boosted_ue(self):
        return {Strategy.BOOST_UE1: 1, Strategy.BOOST_UE2: 2}.get(self)

    def role(self, ue: int) -> CombiningRole:
        """Combining role of `ue`; without a surface both roles coincide"""
        boosted = self.boosted_ue or 1
        return CombiningRole.COHERENT if ue == boosted else CombiningRole.RANDOM


def _pair(values) -> Tuple[float, float]:
    pair = tuple(float(v) for v in values)
    require(len(pair) == 2, f"expected one value per UE, got {values!r}")
    return pair


@dataclass(frozen=True)
class LinkSet:
    """
    Link parameters of one scenario, in linear units.

    Per-UE fields are (UE1, UE2) pairs. Pathlosses are linear power gains,
    transmit and noise powers are in watts.
    """

    n_elements: int
    m_bs: float
    ell_bs: float
    m_h: Tuple[float, float]
    ell_h: Tuple[float, float]
    m_g: Tuple[float, float]
    ell_g: Tuple[float, float]
    p_tx: Tuple[float, float]
    p_noise: float

    def __post_init__(self):
        for name in ("m_h", "ell_h", "m_g", "ell_g", "p_tx"):
            object.__setattr__(self, name, _pair(getattr(self, name)))

        require(
            isinstance(self.n_elements, (int, np.integer)) and self.n_elements >= 0,
            f"n_elements must be a non-negative integer, got {self.n_elements!r}",
        )
        require(
            math.isfinite(self.ell_bs) and self.ell_bs >= 0.0,
            f"ell_bs must be >= 0, got {self.ell_bs!r}",
        )
        require(
            self.ell_bs == 0.0 or self.n_elements >= 1,
            "a surface with ell_bs > 0 needs n_elements >= 1",
        )
        for name, value in (("m_bs", self.m_bs),) + tuple(
            (f"{field}[{ue}]", getattr(self, field)[ue - 1])
            for field in ("m_h", "m_g")
            for ue in UE_INDICES
        ):
            require(math.isfinite(value) and value >= 0.5, f"{name} must be >= 0.5, got {value!r}")
        for ue in UE_INDICES:
            for field in ("ell_h", "ell_g"):
                value = getattr(self, field)[ue - 1]
                require(
                    math.isfinite(value) and value >= 0.0,
                    f"{field}[{ue}] must be >= 0, got {value!r}",
                )
            p = self.p_tx[ue - 1]
            require(math.isfinite(p) and p > 0.0, f"p_tx[{ue}] must be > 0, got {p!r}")
        require(
            math.isfinite(self.p_noise) and self.p_noise > 0.0,
            f"p_noise must be > 0, got {self.p_noise!r}",
        )

    @property
    def has_irs(self) -> bool:
        return self.ell_bs > 0.0 and self.n_elements >= 1

    def without_irs(self) -> "LinkSet":
        """The no-IRS baseline of this scenario"""
        return replace(self, ell_bs=0.0)

    def reflection_gain(self, ue: int) -> float:
        """Composite pathloss ell_BS * ell_g of the reflected path, 0 without a surface"""
        _check_ue(ue)
        return self.ell_bs * self.ell_g[ue - 1] if self.has_irs else 0.0

    def direct_link(self, ue: int) -> NakagamiParams:
        _check_ue(ue)
        return NakagamiParams(self.m_h[ue - 1], self.ell_h[ue - 1])


def _check_ue(ue: int) -> None:
    require(ue in UE_INDICES, f"ue must be 1 or 2, got {ue!r}")


def mu1(m_bs: float, m_g: float) -> float:
    """Mean of one element's amplitude product |h_BS,n| |g_n| for unit-power links"""
    return nakagami_raw_moment(NakagamiParams(m_bs, 1.0), 1) * nakagami_raw_moment(
        NakagamiParams(m_g, 1.0), 1
    )


def s1_gamma_params(n_elements: int, m_bs: float, m_g: float) -> GammaParams:
    """
    Gamma fit of S1, the coherent sum of N amplitude products.

    Shape N mu1^2 / (1 - mu1^2), scale (1 - mu1^2) / mu1; the fit has mean
    N mu1 and variance N (1 - mu1^2), the exact moments of the sum.

    Raises:
        DegenerateError: mu1 within 1e-12 of 1 (both links deterministic)
    """
    require(
        isinstance(n_elements, (int, np.integer)) and n_elements >= 1,
        f"n_elements must be >= 1, got {n_elements!r}",
    )
    mean = mu1(m_bs, m_g)
    if mean >= 1.0 - _MU1_DEGENERATE_MARGIN:
        raise DegenerateError(f"amplitude products are deterministic (mu1={mean!r})")
    spread = 1.0 - mean * mean
    return GammaParams(n_elements * mean * mean / spread, spread / mean)


def s1_density(x, n_elements: int, m_bs: float, m_g: float):
    """Gamma approximation of the S1 density"""
    return gamma_pdf(s1_gamma_params(n_elements, m_bs, m_g), x)


def s2_magnitude_density(x, n_elements: int):
    """Rayleigh approximation of the |S2| density, S2 ~ CN(0, N)"""
    x_arr = np.asarray(x, dtype=float)
    pdf = np.where(x_arr > 0.0, 2.0 * x_arr / n_elements * np.exp(-x_arr * x_arr / n_elements), 0.0)
    return float(pdf) if np.ndim(pdf) == 0 else pdf


def s2_magnitude_cdf(x, n_elements: int):
    """Rayleigh approximation of the |S2| CDF"""
    x_arr = np.asarray(x, dtype=float)
    cdf = np.where(x_arr > 0.0, -np.expm1(-x_arr * x_arr / n_elements), 0.0)
    return float(cdf) if np.ndim(cdf) == 0 else cdf


def reflection_gamma(links: LinkSet, ue: int) -> GammaParams:
    """Law of the pathloss-scaled coherent reflection amplitude sqrt(ell_BS ell_g) S1"""
    gain = links.reflection_gain(ue)
    require(gain > 0.0, f"UE{ue} has no reflected path in this scenario")
    s1 = s1_gamma_params(links.n_elements, links.m_bs, links.m_g[ue - 1])
    return scale_gamma(s1, math.sqrt(gain))


def _direct_moments(links: LinkSet, ue: int) -> Tuple[float, float, float, float]:
    if links.ell_h[ue - 1] == 0.0:
        return (0.0, 0.0, 0.0, 0.0)
    direct = links.direct_link(ue)
    return tuple(nakagami_raw_moment(direct, p) for p in range(1, 5))


def coherent_power_moments(links: LinkSet, ue: int) -> PowerMoments:
    """
    Raw moments of Z = (H_d + H_r)^2 for the coherently combined UE.

    H_d ~ Nakagami(m_h, ell_h), H_r ~ Gamma(N k_S1, sqrt(ell_BS ell_g) theta_S1).
    """
    _check_ue(ue)
    d1, d2, d3, d4 = _direct_moments(links, ue)
    if links.reflection_gain(ue) == 0.0:
        return PowerMoments(d2, d4)

    reflection = reflection_gamma(links, ue)
    r1, r2, r3, r4 = (gamma_raw_moment(reflection, p) for p in range(1, 5))
    mu = d2 + r2 + 2.0 * d1 * r1
    mu2 = d4 + r4 + 6.0 * d2 * r2 + 4.0 * d3 * r1 + 4.0 * d1 * r3
    return PowerMoments(mu, mu2)


def random_power_moments(links: LinkSet, ue: int) -> PowerMoments:
    """
    Raw moments of Z = |H_d + H_r|^2 for the randomly combined UE.

    |H_d| ~ Nakagami(m_h, ell_h), |H_r| ~ Nakagami(1, N ell_BS ell_g).
    """
    _check_ue(ue)
    _, d2, _, d4 = _direct_moments(links, ue)
    gain = links.reflection_gain(ue)
    if gain == 0.0:
        return PowerMoments(d2, d4)

    reflection = NakagamiParams(1.0, links.n_elements * gain)
    r2 = nakagami_raw_moment(reflection, 2)
    r4 = nakagami_raw_moment(reflection, 4)
    return PowerMoments(d2 + r2, d4 + r4 + 4.0 * d2 * r2)


def received_power_gamma(links: LinkSet, ue: int, role: CombiningRole) -> GammaParams:
    """Gamma law (k_i, P_i theta_i) of the received power Z_i P_i"""
    if role is CombiningRole.COHERENT:
        moments = coherent_power_moments(links, ue)
    else:
        moments = random_power_moments(links, ue)
    return scale_gamma(match_gamma(moments), links.p_tx[ue - 1])


def scenario_links(links: LinkSet, strategy: Strategy) -> LinkSet:
    """Links as seen by `strategy`; the no-IRS baseline drops the surface"""
    return links.without_irs() if strategy is Strategy.NO_IRS else links


@lru_cache(maxsize=128)
def scenario_power_gammas(links: LinkSet, strategy: Strategy) -> Tuple[GammaParams, GammaParams]:
    """Received-power Gamma laws of (UE1, UE2) under `strategy`"""
    effective = scenario_links(links, strategy)
    gammas = tuple(received_power_gamma(effective, ue, strategy.role(ue)) for ue in UE_INDICES)
    for ue, gamma in zip(UE_INDICES, gammas):
        logger.debug(
            "%s UE%d (%s): k=%.6g theta=%.6g",
            strategy.value,
            ue,
            strategy.role(ue).value,
            gamma.k,
            gamma.theta,
        )
    return gammas


__all__ = [
    "CombiningRole",
    "LinkSet",
    "Strategy",
    "UE_INDICES",
    "coherent_power_moments",
    "mu1",
    "random_power_moments",
    "received_power_gamma",
    "reflection_gamma",
    "s1_density",
    "s1_gamma_params",
    "s2_magnitude_cdf",
    "s2_magnitude_density",
    "scenario_links",
    "scenario_power_gammas",
]
