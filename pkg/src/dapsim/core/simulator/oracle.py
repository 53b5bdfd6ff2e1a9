"""Monte Carlo evaluation of click statistics through the P function.

For classical light the outcome table is an average of products of
coherent-state responses,

    Pr(k_1, ..., k_N) = E_{alpha ~ P} prod_i p_{k_i}(w_i |t alpha - r beta|^2),

which is independent of the Fock-space pipeline and serves as its oracle.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from dapsim.core.detectors.base import CoherentResponse
from dapsim.core.errors import DapsValueError
from dapsim.core.fock.distribution import StateSpec
from dapsim.core.seeding import ORACLE_STREAM, make_rng
from dapsim.core.simulator.multiplex import MultiplexConfig

oracle_logger = logging.getLogger("dapsim.simulator")

MAX_CHUNK = 100_000
MAX_CHUNK_CELLS = 50_000_000


@dataclass(frozen=True)
class OracleEstimate:
    """Monte Carlo outcome table with its standard errors."""

    probs: np.ndarray
    stderr: np.ndarray
    samples: int

    def z_scores(self, exact: np.ndarray, floor: float = 1e-9) -> np.ndarray:
        """(exact - estimate) / stderr.

        The error is floored at `floor`, the truncation accuracy of exact
        tables, since point-like P functions have no sampling spread.
        """
        diff = np.asarray(exact) - self.probs
        return diff / np.maximum(self.stderr, floor)


def sample_p_function(
    state: StateSpec, size: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw `size` amplitudes from the (nonnegative) P function of `state`."""
    if not state.is_classical:
        raise DapsValueError(
            f"{state.describe()} has no nonnegative P function to sample from."
        )
    if state.variant in ("vacuum", "fock"):
        return np.zeros(size, dtype=complex)
    if state.variant == "coherent":
        alpha = np.full(size, state.alpha, dtype=complex)
        if state.phase_randomized:
            alpha = alpha * np.exp(2j * np.pi * rng.random(size))
        return alpha
    if state.variant == "thermal":
        scale = np.sqrt(state.nbar / 2.0)
        return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
    weights = np.array([w for w, _ in state.components])
    choice = rng.choice(len(weights), size=size, p=weights / weights.sum())
    out = np.empty(size, dtype=complex)
    for i, (_, comp) in enumerate(state.components):
        mask = choice == i
        if mask.any():
            out[mask] = sample_p_function(comp, int(mask.sum()), rng)
    return out


def _arm_responses(cfg: MultiplexConfig) -> List[CoherentResponse]:
    scales = (cfg.imbalance and cfg.imbalance.eta_scale) or (1.0,) * cfg.N
    n_max = cfg.frontend.n_max
    return [
        (cfg.detector.perturbed(s) if s != 1.0 else cfg.detector).coherent_response(
            n_max
        )
        for s in scales
    ]


def pfunction_mc_oracle(
    state: StateSpec,
    cfg: MultiplexConfig,
    beta: complex,
    samples: int = 1_000_000,
    seed: int = 0,
    responses: Optional[List[CoherentResponse]] = None,
) -> OracleEstimate:
    """Monte Carlo outcome table of a classical state at one LO setting.

    Args:
        state (:obj:`StateSpec`): A state with nonnegative P function.
        cfg (:obj:`MultiplexConfig`): Front-end, multiplexer and detector.
        beta (:obj:`complex`): LO amplitude.
        samples (:obj:`int`): Number of amplitudes drawn from P.
        seed (:obj:`int`): Master seed.
        responses (:obj:`list`, optional): Coherent responses per arm,
            overriding those of the configured detector.

    """
    if samples < 2:
        raise DapsValueError(f"Need at least two samples, got {samples}.")
    responses = responses or _arm_responses(cfg)
    weights = np.asarray(cfg.arm_weights())
    t, r = cfg.frontend.t, cfg.frontend.r
    K = responses[0].K
    cells = (K + 1) ** cfg.N
    chunk_size = int(max(1, min(MAX_CHUNK, MAX_CHUNK_CELLS // cells)))
    total = np.zeros(cells)
    total_sq = np.zeros(cells)
    done = 0
    chunk = 0
    while done < samples:
        n = min(chunk_size, samples - done)
        rng = make_rng(seed, 0, ORACLE_STREAM, chunk)
        alpha = sample_p_function(state, n, rng)
        intensity = np.abs(t * alpha - r * complex(beta)) ** 2
        prod = np.ones((n, 1))
        for w, resp in zip(weights, responses):
            arm = resp(w * intensity)
            prod = (prod[:, :, None] * arm[:, None, :]).reshape(n, -1)
        total += prod.sum(axis=0)
        total_sq += (prod ** 2).sum(axis=0)
        done += n
        chunk += 1
    mean = total / samples
    var = np.clip(total_sq / samples - mean ** 2, 0.0, None)
    stderr = np.sqrt(var / (samples - 1))
    shape = (K + 1,) * cfg.N
    oracle_logger.debug(
        "P-function oracle for %s at beta=%s: %d samples",
        state.describe(),
        beta,
        samples,
    )
    return OracleEstimate(mean.reshape(shape), stderr.reshape(shape), samples)
