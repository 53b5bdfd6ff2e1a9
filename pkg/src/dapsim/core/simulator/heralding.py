"""Heralded single-mode states from a two-mode squeezed vacuum.

The photon pairs of a parametric down-conversion source have
P(n) = (1 - lambda^2) lambda^(2n). The idler passes a lossy channel and a
herald detector; post-selecting outcome k_h leaves the signal in the
photon-number diagonal mixture

    w_n ~ (1 - lambda^2) lambda^(2n) sum_j P_h(k_h|j) Binom(j; n, tau_h).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from dapsim.core.detectors.base import ResponseMatrix
from dapsim.core.errors import DapsTruncationError, DapsValueError
from dapsim.core.fock.distribution import (
    DEFAULT_TAIL_BOUND,
    MAX_FOCK_INDEX,
    StateSpec,
    attenuation_matrix,
)

herald_logger = logging.getLogger("dapsim.simulator")


@dataclass(frozen=True)
class HeraldedState:
    """Signal state conditioned on a herald outcome."""

    state: StateSpec
    probability: float
    k_h: int
    photon_weights: tuple

    def to_record(self) -> dict:
        """Serialisable representation."""
        return {
            "k_h": self.k_h,
            "probability": self.probability,
            "state": self.state.to_record(),
        }


def pdc_truncation(squeezing: float, tail_bound: float = DEFAULT_TAIL_BOUND) -> int:
    """Smallest n_max with pair-number tail lambda^(2(n_max+1)) below the bound."""
    if squeezing == 0:
        return 0
    n = math.ceil(math.log(tail_bound) / (2.0 * math.log(squeezing))) - 1
    return max(n, 0)


def heralded_pdc_state(
    squeezing: float,
    herald_transmittance: float,
    herald_detector: ResponseMatrix,
    k_h: int,
    n_max: Optional[int] = None,
    tail_bound: float = DEFAULT_TAIL_BOUND,
) -> HeraldedState:
    """Signal state heralded by outcome `k_h` of the idler detector.

    Args:
        squeezing (:obj:`float`): lambda in [0, 1).
        herald_transmittance (:obj:`float`): Idler arm transmittance.
        herald_detector (:obj:`ResponseMatrix`): Herald POVM, covering at
            least the pair-number truncation.
        k_h (:obj:`int`): The post-selected herald outcome.
        n_max (:obj:`int`, optional): Pair-number truncation; derived from
            the tail bound when omitted.
        tail_bound (:obj:`float`): Largest pair-number mass allowed
            beyond the truncation.

    Raises:
        DapsValueError: For parameters out of range or when the outcome
            can never be heralded.
        DapsTruncationError: If the truncation leaves too much mass.

    """
    if not 0.0 <= squeezing < 1.0:
        raise DapsValueError(
            f"Squeezing parameter must lie in [0, 1), got {squeezing!r}.",
            section="heralding",
            field="squeezing",
        )
    if not 0.0 <= herald_transmittance <= 1.0:
        raise DapsValueError(
            f"Herald transmittance must lie in [0, 1], got {herald_transmittance!r}.",
            section="heralding",
            field="transmittance",
        )
    if not 0 <= k_h <= herald_detector.K:
        raise DapsValueError(
            f"Herald outcome k_h={k_h} outside 0..{herald_detector.K}.",
            section="heralding",
            field="khs",
        )
    n_max = pdc_truncation(squeezing, tail_bound) if n_max is None else n_max
    n_max = min(n_max, MAX_FOCK_INDEX)
    tail = squeezing ** (2 * (n_max + 1))
    if tail > tail_bound:
        raise DapsTruncationError(
            f"Pair-number tail beyond n_max={n_max} is {tail:.3e}.", tail_mass=tail
        )
    if herald_detector.n_max < n_max:
        raise DapsValueError(
            f"Herald response covers n <= {herald_detector.n_max}, "
            f"pairs need n <= {n_max}."
        )
    n = np.arange(n_max + 1)
    pairs = (1.0 - squeezing ** 2) * squeezing ** (2 * n)
    click = herald_detector.p[k_h, : n_max + 1] @ attenuation_matrix(
        n_max, herald_transmittance
    )
    weights = pairs * click
    probability = float(weights.sum())
    if probability <= 0.0:
        raise DapsValueError(
            f"Herald outcome k_h={k_h} has zero probability for "
            f"lambda={squeezing}, tau_h={herald_transmittance}.",
            section="heralding",
            field="khs",
        )
    weights = weights / probability
    herald_logger.info(
        "Heralding k_h=%d: probability %.4e, signal mean photons %.4f",
        k_h,
        probability,
        float(n @ weights),
    )
    return HeraldedState(
        state=StateSpec.fock_mixture(weights),
        probability=probability,
        k_h=k_h,
        photon_weights=tuple(float(w) for w in weights),
    )
