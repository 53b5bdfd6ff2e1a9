"""The unbalanced homodyning front-end: signal mixed with the LO.

The state that enters the multiplexing stage is

    rho(beta) = integral d^2 alpha P(alpha) |t alpha - r beta><t alpha - r beta|

i.e. the signal attenuated by |t|^2 and then displaced by -r beta. Every
detector downstream is phase insensitive and the balanced multiplexer
conserves photon number, so only the photon-number diagonal of rho(beta)
is carried forward.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from dapsim.core.errors import DapsTruncationError, DapsValueError
from dapsim.core.fock.displacement import displaced_number_probabilities
from dapsim.core.fock.distribution import (
    DEFAULT_TAIL_BOUND,
    MAX_FOCK_INDEX,
    FockDistribution,
    StateSpec,
    attenuation_matrix,
    poisson_weights,
)

fock_logger = logging.getLogger("dapsim.fock")


@dataclass(frozen=True)
class FrontendConfig:
    """Beam splitter coefficients of the signal/LO mixer and the truncation."""

    t: complex
    r: complex
    n_max: int
    tail_bound: float = DEFAULT_TAIL_BOUND

    def __post_init__(self):
        norm = abs(self.t) ** 2 + abs(self.r) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise DapsValueError(
                f"Beam splitter is not lossless: |t|^2 + |r|^2 = {norm!r}.",
                section="frontend",
                field="t",
            )
        if not 1 <= self.n_max <= MAX_FOCK_INDEX:
            raise DapsValueError(
                f"Truncation n_max={self.n_max} outside [1, {MAX_FOCK_INDEX}].",
                section="frontend",
                field="n_max",
            )

    @classmethod
    def from_transmittance(
        cls, transmittance: float, n_max: int, **kwargs
    ) -> "FrontendConfig":
        """Real coefficients t = sqrt(T), r = sqrt(1 - T)."""
        if not 0.0 <= transmittance <= 1.0:
            raise DapsValueError(
                f"Transmittance must lie in [0, 1], got {transmittance!r}.",
                section="frontend",
                field="transmittance",
            )
        return cls(
            t=complex(math.sqrt(transmittance)),
            r=complex(math.sqrt(1.0 - transmittance)),
            n_max=n_max,
            **kwargs,
        )

    @property
    def transmittance(self) -> float:
        """|t|^2."""
        return abs(self.t) ** 2

    @property
    def reflectance(self) -> float:
        """|r|^2."""
        return abs(self.r) ** 2

    def with_n_max(self, n_max: int) -> "FrontendConfig":
        """Copy of this config with another truncation."""
        return FrontendConfig(self.t, self.r, n_max, self.tail_bound)


def _coherent_distribution(
    amplitude: complex, cfg: FrontendConfig
) -> np.ndarray:
    weights, tail = poisson_weights(abs(amplitude) ** 2, cfg.n_max)
    if tail > cfg.tail_bound:
        raise DapsTruncationError(
            f"Poisson tail beyond n_max={cfg.n_max} is {tail:.3e} "
            f"for mean {abs(amplitude) ** 2:.4g}.",
            tail_mass=tail,
        )
    return weights


def _diagonal_distribution(
    state: StateSpec, cfg: FrontendConfig, beta: complex
) -> np.ndarray:
    weights, tail = state.photon_weights(cfg.n_max)
    if tail > cfg.tail_bound:
        raise DapsTruncationError(
            f"Signal {state.describe()} has {tail:.3e} of its photon-number "
            f"mass beyond n_max={cfg.n_max}.",
            tail_mass=tail,
        )
    lossy = attenuation_matrix(cfg.n_max, cfg.transmittance) @ weights
    gamma = -cfg.r * beta
    if gamma == 0:
        return lossy
    return displaced_number_probabilities(cfg.n_max, gamma) @ lossy


def _raw_distribution(
    state: StateSpec, cfg: FrontendConfig, beta: complex
) -> np.ndarray:
    if state.variant == "vacuum":
        return _coherent_distribution(-cfg.r * beta, cfg)
    if state.variant == "coherent" and not state.phase_randomized:
        return _coherent_distribution(cfg.t * state.alpha - cfg.r * beta, cfg)
    if state.variant == "mixture":
        return sum(
            w * _raw_distribution(comp, cfg, beta) for w, comp in state.components
        )
    # Fock, thermal and phase randomised coherent states are diagonal.
    return _diagonal_distribution(state, cfg, beta)


def frontend_distribution(
    state: StateSpec, cfg: FrontendConfig, beta: complex
) -> FockDistribution:
    """Photon-number distribution of the state entering the multiplexer.

    Args:
        state (:obj:`StateSpec`): The signal.
        cfg (:obj:`FrontendConfig`): Mixer coefficients and truncation.
        beta (:obj:`complex`): The LO amplitude of this setting.

    Returns:
        :obj:`FockDistribution` of rho(beta).

    Raises:
        DapsTruncationError: If the tail beyond n_max exceeds the
            configured bound. The achieved tail mass is attached.

    """
    beta = complex(beta)
    if not cmath.isfinite(beta):
        raise DapsValueError(f"LO amplitude must be finite, got {beta!r}.")
    probs = _raw_distribution(state, cfg, beta)
    tail = 1.0 - float(np.sum(probs))
    if tail > cfg.tail_bound:
        raise DapsTruncationError(
            f"Front-end distribution for {state.describe()} at |beta|={abs(beta):.4g} "
            f"leaves {tail:.3e} beyond n_max={cfg.n_max}.",
            tail_mass=tail,
        )
    fock_logger.debug(
        "Front-end distribution for %s at beta=%s: tail %.2e",
        state.describe(),
        beta,
        tail,
    )
    return FockDistribution(probs, max_loss=max(cfg.tail_bound, 1e-12))


def phase_insensitivity_check(
    state: StateSpec, cfg: FrontendConfig, beta: complex, phases: int = 4
) -> float:
    """Largest change of the output diagonal when the LO phase is rotated.

    Phase randomised and diagonal states give zero up to round-off. The
    value is a diagnostic; nothing is integrated over the phase.
    """
    ref = frontend_distribution(state, cfg, abs(beta)).probs
    worst = 0.0
    for k in range(1, phases):
        rotated = abs(beta) * cmath.exp(2j * math.pi * k / phases)
        probs = frontend_distribution(state, cfg, rotated).probs
        worst = max(worst, float(np.max(np.abs(probs - ref))))
    return worst


def suggest_truncation(
    state: StateSpec,
    transmittance: float,
    beta_max: float,
    tail_bound: float = DEFAULT_TAIL_BOUND,
    start: Optional[int] = None,
) -> int:
    """Smallest n_max (in steps of 5) meeting the tail bound at beta_max.

    The frontend distribution is evaluated at the largest LO amplitude of
    the scan, where the photon-number spread is widest.
    """
    amp = math.sqrt(transmittance * max(state.mean_photons(), 0.0))
    amp += math.sqrt(1.0 - transmittance) * beta_max
    mean = amp ** 2
    guess = int(mean + 12.0 * math.sqrt(mean) + 15)
    guess = max(guess, state.support_hint() + 5)
    n_max = min(start or guess, MAX_FOCK_INDEX)
    t = complex(math.sqrt(transmittance))
    r = complex(math.sqrt(1.0 - transmittance))
    while True:
        cfg = FrontendConfig(t, r, n_max, tail_bound)
        try:
            frontend_distribution(state, cfg, beta_max)
        except DapsTruncationError as err:
            if n_max >= MAX_FOCK_INDEX:
                raise DapsTruncationError(
                    f"No truncation up to {MAX_FOCK_INDEX} meets the tail bound "
                    f"{tail_bound:.1e} for {state.describe()} "
                    f"at |beta|={beta_max:.4g}.",
                    tail_mass=err.tail_mass,
                )
            n_max = min(n_max + 5, MAX_FOCK_INDEX)
            continue
        fock_logger.info(
            "Chose n_max=%d for %s up to |beta|=%.4g", n_max, state.describe(), beta_max
        )
        return n_max
