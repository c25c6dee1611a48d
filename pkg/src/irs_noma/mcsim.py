"""
Monte-Carlo oracle for the IRS uplink

Draws the raw complex coefficients of the direct, BS-IRS and UE-IRS links,
applies the phase rule of the boosted UE and measures the exact effective
channel powers, outage events and densities. Nothing here uses the Gamma
approximations of the analysis.

Work is split into chunks of CHUNK_SIZE realizations. Chunk c draws from the
substream (seed, c) and chunk results are merged in chunk order, so a run is
reproducible bit for bit whatever the number of workers.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, ClassVar, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from .channel import UE_INDICES, LinkSet, Strategy, scenario_links
from .errors import require
from .outage import OutageCurve, OutageMode, db_to_linear
from .stochastic import NakagamiParams, make_stream, sample_nakagami

logger = logging.getLogger(__name__)

CHUNK_SIZE = 1 << 16
MIN_OUTAGE_SAMPLES = 10_000
MIN_DENSITY_SAMPLES = 100_000
DEFAULT_BINS = 200
DEFAULT_CONFIDENCE = 0.95


class DensityQuantity(Enum):
    S1 = "s1"
    S2_MAGNITUDE = "s2"


@dataclass(frozen=True, eq=False)
class ChannelDraw:
    """
    Small-scale fading coefficients of a batch of realizations.

    h: (size, 2) direct links, h_bs: (size, N) BS-IRS links,
    g: (size, 2, N) UE-IRS links. All have unit mean power; pathlosses are
    applied when powers are formed.
    """

    h: np.ndarray
    h_bs: np.ndarray
    g: np.ndarray


@dataclass(frozen=True, eq=False)
class Realization:
    """Effective channel powers Z of both UEs, shape (2,) or (size, 2)"""

    z: np.ndarray

    def __post_init__(self):
        require(bool(np.all(self.z >= 0.0)), "effective channel powers must be non-negative")

    def received_power(self, links: LinkSet) -> np.ndarray:
        """Z_i P_i"""
        return self.z * np.asarray(links.p_tx)


@dataclass(frozen=True)
class EmpiricalCurve(OutageCurve):
    """Monte-Carlo outage estimate of one UE with Wilson score bounds"""

    source: ClassVar[str] = "empirical"

    ci_low: Tuple[float, ...]
    ci_high: Tuple[float, ...]
    n_samples: int
    seed: int

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "ci_low", tuple(float(v) for v in self.ci_low))
        object.__setattr__(self, "ci_high", tuple(float(v) for v in self.ci_high))
        for low, p, high in zip(self.ci_low, self.p_out, self.ci_high):
            require(0.0 <= low <= p <= high <= 1.0, "confidence bounds must bracket the estimate")

    @property
    def p_hat(self) -> Tuple[float, ...]:
        return self.p_out


@dataclass(frozen=True, eq=False)
class Histogram:
    """Equal-width histogram over [0, sample maximum], normalized to unit area"""

    bin_edges: np.ndarray
    density: np.ndarray
    n_samples: int

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    @property
    def bin_widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)


def _complex_nakagami(m: float, stream: np.random.Generator, size) -> np.ndarray:
    amplitude = sample_nakagami(NakagamiParams(m, 1.0), stream, size=size)
    phase = stream.uniform(0.0, 2.0 * np.pi, size=size)
    return amplitude * np.exp(1j * phase)


def draw_channels(links: LinkSet, stream: np.random.Generator, size: int) -> ChannelDraw:
    """Draw `size` realizations of every fading coefficient of the scenario"""
    n = links.n_elements if links.has_irs else 0
    h = np.stack([_complex_nakagami(links.m_h[ue - 1], stream, size) for ue in UE_INDICES], axis=1)
    h_bs = _complex_nakagami(links.m_bs, stream, (size, n))
    g = np.stack(
        [_complex_nakagami(links.m_g[ue - 1], stream, (size, n)) for ue in UE_INDICES], axis=1
    )
    return ChannelDraw(h, h_bs, g)


def boost_phases(draw: ChannelDraw, ue: int) -> np.ndarray:
    """phi_n = arg(h_i) - arg(h_BS,n g_i,n), aligning every path of `ue`"""
    cascade = draw.h_bs * draw.g[:, ue - 1, :]
    return np.angle(draw.h[:, ue - 1])[:, None] - np.angle(cascade)


def combined_power(
    draw: ChannelDraw, links: LinkSet, ue: int, phases: Optional[np.ndarray]
) -> np.ndarray:
    """|sqrt(ell_h) h + sqrt(ell_BS ell_g) sum_n e^(j phi_n) h_BS,n g_n|^2 for `ue`"""
    signal = math.sqrt(links.ell_h[ue - 1]) * draw.h[:, ue - 1]
    gain = links.reflection_gain(ue)
    if gain > 0.0 and phases is not None:
        cascade = np.exp(1j * phases) * draw.h_bs * draw.g[:, ue - 1, :]
        signal = signal + math.sqrt(gain) * cascade.sum(axis=1)
    return np.abs(signal) ** 2


def coherent_power(draw: ChannelDraw, links: LinkSet, ue: int) -> np.ndarray:
    """(sqrt(ell_h) |h| + sqrt(ell_BS ell_g) sum_n |h_BS,n| |g_n|)^2 for the boosted UE"""
    amplitude = math.sqrt(links.ell_h[ue - 1]) * np.abs(draw.h[:, ue - 1])
    gain = links.reflection_gain(ue)
    if gain > 0.0:
        s1 = (np.abs(draw.h_bs) * np.abs(draw.g[:, ue - 1, :])).sum(axis=1)
        amplitude = amplitude + math.sqrt(gain) * s1
    return amplitude**2


def sample_realization(
    links: LinkSet, strategy: Strategy, stream: np.random.Generator, size: Optional[int] = None
) -> Realization:
    """
    Exact effective channel powers under `strategy`.

    The boosted UE is combined coherently; the other UE sees the boosted UE's
    phases. Without a surface both UEs keep their direct link only.
    """
    effective = scenario_links(links, strategy)
    draw = draw_channels(effective, stream, 1 if size is None else size)
    boosted = strategy.boosted_ue

    z = np.empty((draw.h.shape[0], 2))
    if boosted is None or not effective.has_irs:
        for ue in UE_INDICES:
            z[:, ue - 1] = combined_power(draw, effective, ue, None)
    else:
        phases = boost_phases(draw, boosted)
        other = 3 - boosted
        z[:, boosted - 1] = coherent_power(draw, effective, boosted)
        z[:, other - 1] = combined_power(draw, effective, other, phases)
    return Realization(z[0] if size is None else z)


def outage_events(
    received: np.ndarray, p_noise: float, epsilon: np.ndarray, mode: OutageMode
) -> np.ndarray:
    """
    Per-realization outage indicators.

    Args:
        received: (size, 2) received powers Z_i P_i
        p_noise: noise power P_w
        epsilon: (T,) linear thresholds
        mode: detection event

    Returns:
        Boolean array (size, T, 2), True where the UE is in outage
    """
    x = received[:, None, :]
    eps = np.asarray(epsilon, dtype=float)[None, :, None]
    snr = x / p_noise
    if mode is OutageMode.SNR:
        return snr <= eps

    sinr = x / (x[..., ::-1] + p_noise)
    first_pass = sinr > eps
    if mode is OutageMode.NOIC:
        return ~first_pass
    # Parallel IC: detected in the first iteration, or after the other UE was
    # detected and cancelled.
    success = first_pass | (first_pass[..., ::-1] & (snr > eps))
    return ~success


def wilson_interval(
    successes: int, n: int, confidence: float = DEFAULT_CONFIDENCE
) -> Tuple[float, float]:
    """Wilson score interval of a binomial proportion"""
    require(n > 0, "Wilson interval needs at least one trial")
    require(0.0 < confidence < 1.0, f"confidence must lie in (0, 1), got {confidence!r}")
    z = float(norm.ppf(0.5 + 0.5 * confidence))
    p = successes / n
    z2n = z * z / n
    denominator = 1.0 + z2n
    center = (p + 0.5 * z2n) / denominator
    half = z * math.sqrt(p * (1.0 - p) / n + 0.25 * z2n / n) / denominator
    return max(0.0, min(center - half, p)), min(1.0, max(center + half, p))


def _chunk_plan(n_samples: int) -> List[Tuple[int, int]]:
    n_chunks = -(-n_samples // CHUNK_SIZE)
    return [
        (index, min(CHUNK_SIZE, n_samples - index * CHUNK_SIZE)) for index in range(n_chunks)
    ]


def _map_chunks(task: Callable, plan: List[Tuple[int, int]], workers: int) -> list:
    require(workers >= 1, f"workers must be >= 1, got {workers!r}")
    if workers == 1:
        return [task(chunk) for chunk in plan]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(task, plan))


def empirical_outage(
    links: LinkSet,
    strategy: Strategy,
    thresholds: Sequence[float],
    mode: OutageMode,
    n_samples: int,
    seed: int,
    workers: int = 1,
    confidence: float = DEFAULT_CONFIDENCE,
) -> List[EmpiricalCurve]:
    """
    Empirical outage curves of both UEs over a dB threshold grid.

    Returns:
        One curve per UE, UE1 first
    """
    thresholds = [float(t) for t in thresholds]
    require(len(thresholds) > 0, "threshold list must not be empty")
    require(
        n_samples >= MIN_OUTAGE_SAMPLES,
        f"n_samples must be >= {MIN_OUTAGE_SAMPLES}, got {n_samples!r}",
    )
    epsilon = np.array([db_to_linear(t) for t in thresholds])
    plan = _chunk_plan(n_samples)
    logger.info(
        "simulating %s/%s: %d samples in %d chunks on %d worker(s)",
        strategy.value,
        mode.value,
        n_samples,
        len(plan),
        workers,
    )

    def count_outages(chunk: Tuple[int, int]) -> np.ndarray:
        index, size = chunk
        realization = sample_realization(links, strategy, make_stream(seed, index), size)
        events = outage_events(realization.received_power(links), links.p_noise, epsilon, mode)
        return events.sum(axis=0, dtype=np.int64)

    counts = np.zeros((len(thresholds), 2), dtype=np.int64)
    for chunk_counts in _map_chunks(count_outages, plan, workers):
        counts += chunk_counts

    curves = []
    for ue in UE_INDICES:
        ue_counts = counts[:, ue - 1]
        bounds = [wilson_interval(int(c), n_samples, confidence) for c in ue_counts]
        curves.append(
            EmpiricalCurve(
                strategy,
                mode,
                ue,
                tuple(thresholds),
                tuple(ue_counts / n_samples),
                tuple(low for low, _ in bounds),
                tuple(high for _, high in bounds),
                n_samples,
                seed,
            )
        )
    logger.info("simulation %s/%s done", strategy.value, mode.value)
    return curves


def sample_density_quantity(
    quantity: DensityQuantity,
    n_elements: int,
    m_bs: float,
    m_g: float,
    n_samples: int,
    seed: int,
    workers: int = 1,
) -> np.ndarray:
    """
    Samples of S1 = sum |h_BS,n| |g_n| or |S2| = |sum e^(j phi_n) h_BS,n g_n|.

    S2 uses independent uniform phases phi_n.
    """
    require(
        isinstance(n_elements, (int, np.integer)) and n_elements >= 1,
        f"n_elements must be >= 1, got {n_elements!r}",
    )
    bs_link = NakagamiParams(m_bs, 1.0)
    ue_link = NakagamiParams(m_g, 1.0)

    def draw_chunk(chunk: Tuple[int, int]) -> np.ndarray:
        index, size = chunk
        stream = make_stream(seed, index)
        shape = (size, n_elements)
        if quantity is DensityQuantity.S1:
            products = sample_nakagami(bs_link, stream, shape) * sample_nakagami(
                ue_link, stream, shape
            )
            return products.sum(axis=1)
        h_bs = _complex_nakagami(bs_link.m, stream, shape)
        g = _complex_nakagami(ue_link.m, stream, shape)
        phases = stream.uniform(0.0, 2.0 * np.pi, size=shape)
        return np.abs((np.exp(1j * phases) * h_bs * g).sum(axis=1))

    return np.concatenate(_map_chunks(draw_chunk, _chunk_plan(n_samples), workers))


def empirical_density(
    quantity: DensityQuantity,
    n_elements: int,
    m_bs: float,
    m_g: float,
    n_samples: int,
    bins: int = DEFAULT_BINS,
    seed: int = 0,
    workers: int = 1,
) -> Histogram:
    """Histogram of S1 or |S2| over [0, sample maximum]"""
    require(
        n_samples >= MIN_DENSITY_SAMPLES,
        f"n_samples must be >= {MIN_DENSITY_SAMPLES}, got {n_samples!r}",
    )
    require(bins >= 1, f"bins must be >= 1, got {bins!r}")
    samples = sample_density_quantity(quantity, n_elements, m_bs, m_g, n_samples, seed, workers)
    edges = np.linspace(0.0, float(samples.max()), bins + 1)
    density, edges = np.histogram(samples, bins=edges, density=True)
    return Histogram(edges, density, n_samples)


__all__ = [
    "CHUNK_SIZE",
    "ChannelDraw",
    "DensityQuantity",
    "EmpiricalCurve",
    "Histogram",
    "Realization",
    "boost_phases",
    "coherent_power",
    "combined_power",
    "draw_channels",
    "empirical_density",
    "empirical_outage",
    "outage_events",
    "sample_density_quantity",
    "sample_realization",
    "wilson_interval",
]
