"""Multiplexed click statistics.

Photons entering the multiplexer are spread over N = 2^S detectors by a
tree of 50:50 beam splitters, so given n photons the split is multinomial
with equal cells. Each detector then answers with outcome k according to
its response matrix.

Two recursions compute the table. Both walk over the detectors one at a
time and carry a vector over the photons still to be distributed:

* exchangeable detectors: the state is the outcome histogram so far, so
  the work grows with the number of histograms rather than tuples. Arm j
  of the remaining ones takes Binomial(r, 1/j) of the r photons left.
* imbalanced splitting or per-detector responses: the state is the
  outcome tuple so far, arm i takes Binomial(r, q_i) with
  q_i = w_i / sum_{j >= i} w_j.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import binom

from dapsim.core.dataset import (
    ClickTable,
    check_tractable,
    outcome_tuples,
    tuple_histograms,
)
from dapsim.core.detectors.base import DetectorModel, ResponseMatrix
from dapsim.core.errors import DapsValueError
from dapsim.core.fock.distribution import FockDistribution
from dapsim.core.fock.frontend import FrontendConfig

simulator_logger = logging.getLogger("dapsim.simulator")

MAX_DEPTH = 3
MAX_HISTOGRAM_WORK = 50_000_000


@dataclass(frozen=True)
class ImbalanceConfig:
    """Deviations from an ideal symmetric multiplexer.

    Args:
        weights: Splitting weights, one per detector, positive, sum 1.
        eta_scale: Efficiency scale factors, one per detector.

    """

    weights: Optional[Tuple[float, ...]] = None
    eta_scale: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-12:
                raise DapsValueError(
                    f"Imbalance weights must be positive and sum to 1, got {w}.",
                    section="imbalance",
                    field="weights",
                )
        if self.eta_scale is not None:
            if any(s <= 0 for s in self.eta_scale):
                raise DapsValueError(
                    "Efficiency scale factors must be positive.",
                    section="imbalance",
                    field="eta_scale",
                )

    def check_detectors(self, N: int):
        """Both vectors, when given, need one entry per detector."""
        for name in ("weights", "eta_scale"):
            vals = getattr(self, name)
            if vals is not None and len(vals) != N:
                raise DapsValueError(
                    f"Imbalance {name} has {len(vals)} entries for N={N} detectors.",
                    section="imbalance",
                    field=name,
                )


@dataclass(frozen=True)
class MultiplexConfig:
    """Depth S of the splitting tree, front-end and detector model."""

    S: int
    frontend: FrontendConfig
    detector: DetectorModel
    imbalance: Optional[ImbalanceConfig] = None

    def __post_init__(self):
        if not 1 <= self.S <= MAX_DEPTH:
            raise DapsValueError(
                f"Multiplexing depth S={self.S} outside [1, {MAX_DEPTH}] "
                f"(N = 2^S <= {2 ** MAX_DEPTH}).",
                section="multiplex",
                field="depth",
            )
        if self.imbalance is not None:
            self.imbalance.check_detectors(self.N)
        check_tractable(self.N, self.K)

    @property
    def N(self) -> int:
        """Number of detectors."""
        return 2 ** self.S

    @property
    def K(self) -> int:
        """Index of the last outcome bin."""
        return self.detector.outcome_bins(self.frontend.n_max)

    @property
    def is_symmetric(self) -> bool:
        """Whether all arms are exchangeable."""
        return self.imbalance is None or (
            self.imbalance.weights is None and self.imbalance.eta_scale is None
        )

    def response(self) -> ResponseMatrix:
        """Response matrix of the nominal detector at the truncation."""
        return self.detector.response_matrix(self.frontend.n_max)

    def arm_responses(self) -> List[ResponseMatrix]:
        """Response matrix of every detector, perturbed where configured."""
        scales = (self.imbalance and self.imbalance.eta_scale) or (1.0,) * self.N
        return [
            self.detector.perturbed(s).response_matrix(self.frontend.n_max)
            if s != 1.0
            else self.response()
            for s in scales
        ]

    def arm_weights(self) -> Tuple[float, ...]:
        """Splitting weights of the detectors."""
        weights = self.imbalance and self.imbalance.weights
        return tuple(weights) if weights else (1.0 / self.N,) * self.N

    def with_frontend(self, frontend: FrontendConfig) -> "MultiplexConfig":
        """Copy with another front-end (e.g. another truncation)."""
        return MultiplexConfig(self.S, frontend, self.detector, self.imbalance)


def _split_kernels(response: ResponseMatrix, q: float, n_max: int) -> np.ndarray:
    """W[k, r, r - m] = Binom(m; r, q) P(k|m).

    Shape (K+1, n_max+1, n_max+1): from r photons remaining, the arm takes
    m of them, answers k, and r - m photons stay.
    """
    r = np.arange(n_max + 1)
    m = np.arange(n_max + 1)
    split = binom.pmf(m[None, :], r[:, None], q)  # [r, m]
    p = response.p[:, : n_max + 1]
    kernels = np.zeros((response.K + 1, n_max + 1, n_max + 1))
    rr, mm = np.nonzero(split)
    for k in range(response.K + 1):
        kernels[k, rr, rr - mm] = split[rr, mm] * p[k, mm]
    return kernels


def _check_response(response: ResponseMatrix, n_max: int):
    if response.n_max < n_max:
        raise DapsValueError(
            f"Response matrix covers n <= {response.n_max}, the distribution "
            f"needs n <= {n_max}."
        )


def click_statistics_histogram(
    dist: FockDistribution, detector: ResponseMatrix, N: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Histogram probabilities c_{N_0, ..., N_K} for N identical detectors.

    Returns:
        (histograms, probabilities), histograms in the same lexicographic
        order as :func:`dapsim.core.dataset.tuple_histograms`.

    """
    n_max = dist.n_max
    _check_response(detector, n_max)
    K = detector.K
    work = math.comb(N + K, K) * (n_max + 1)
    if work > MAX_HISTOGRAM_WORK:
        raise DapsValueError(
            f"Histogram recursion for N={N}, K={K}, n_max={n_max} is too large "
            f"({work} states)."
        )
    states: Dict[Tuple[int, ...], np.ndarray] = {(0,) * (K + 1): dist.probs.copy()}
    for remaining in range(N, 0, -1):
        kernels = _split_kernels(detector, 1.0 / remaining, n_max)
        nxt: Dict[Tuple[int, ...], np.ndarray] = {}
        for hist, vec in states.items():
            for k in range(K + 1):
                new = vec @ kernels[k]
                key = hist[:k] + (hist[k] + 1,) + hist[k + 1 :]
                if key in nxt:
                    nxt[key] += new
                else:
                    nxt[key] = new
        states = nxt
    hists = np.array(sorted(states), dtype=int)
    # Every photon has been assigned after the last arm.
    probs = np.array([states[tuple(h)][0] for h in hists])
    return hists, probs


def _spread_histograms(
    hists: np.ndarray, probs: np.ndarray, N: int, K: int
) -> np.ndarray:
    """Tuple table of exchangeable detectors from histogram probabilities."""
    all_hists, inverse = tuple_histograms(N, K)
    lookup = {tuple(h): p for h, p in zip(hists, probs)}
    # multinomial coefficient N! / prod N_k!
    multiplicity = np.bincount(inverse, minlength=all_hists.shape[0])
    hist_probs = np.array([lookup.get(tuple(h), 0.0) for h in all_hists])
    return (hist_probs / multiplicity)[inverse].reshape((K + 1,) * N)


def click_statistics_tuples(
    dist: FockDistribution,
    responses: Sequence[ResponseMatrix],
    weights: Sequence[float],
) -> np.ndarray:
    """Tuple table for arbitrary splitting weights and per-arm responses."""
    n_max = dist.n_max
    N = len(responses)
    K = responses[0].K
    if any(r.K != K for r in responses):
        raise DapsValueError("All detectors of a multiplexer need the same K.")
    for r in responses:
        _check_response(r, n_max)
    check_tractable(N, K)
    if (K + 1) ** N * (n_max + 1) > MAX_HISTOGRAM_WORK:
        raise DapsValueError(
            f"Tuple recursion for N={N}, K={K}, n_max={n_max} is too large."
        )
    w = np.asarray(weights, dtype=float)
    state = dist.probs.copy()
    for i in range(N):
        q = 1.0 if i == N - 1 else float(w[i] / w[i:].sum())
        kernels = _split_kernels(responses[i], q, n_max)
        state = np.einsum("...r,krs->...ks", state, kernels)
    return state[..., 0]


def click_statistics_exact(
    dist: FockDistribution, detector: ResponseMatrix, N: int
) -> ClickTable:
    """Exact outcome table of N identical detectors behind a balanced splitter.

    Pr(k_1, ..., k_N) = sum_n P_n sum_{n_1 + ... + n_N = n}
    n! / prod(n_i!) N^-n prod_i P(k_i | n_i).

    The table is exactly symmetric under exchange of detectors.
    """
    if N < 1:
        raise DapsValueError(f"Need at least one detector, got N={N}.")
    check_tractable(N, detector.K)
    hists, probs = click_statistics_histogram(dist, detector, N)
    table = _spread_histograms(hists, probs, N, detector.K)
    simulator_logger.debug(
        "Click table N=%d K=%d from n_max=%d: total %.15f",
        N,
        detector.K,
        dist.n_max,
        table.sum(),
    )
    return ClickTable(table / table.sum())


def multiplexed_statistics(dist: FockDistribution, cfg: MultiplexConfig) -> ClickTable:
    """Outcome table of a configured multiplexer.

    Symmetric configurations use the histogram recursion, imbalanced ones
    the tuple recursion with their per-arm weights and responses.
    """
    if cfg.is_symmetric:
        return click_statistics_exact(dist, cfg.response(), cfg.N)
    table = click_statistics_tuples(dist, cfg.arm_responses(), cfg.arm_weights())
    return ClickTable(table / table.sum())


def tuple_probability(table: ClickTable, outcome: Sequence[int]) -> float:
    """Probability of one outcome tuple."""
    if len(outcome) != table.N:
        raise DapsValueError(f"Outcome {tuple(outcome)} does not have N={table.N}.")
    return float(table.probs[tuple(outcome)])


__all__ = [
    "ImbalanceConfig",
    "MultiplexConfig",
    "click_statistics_exact",
    "click_statistics_histogram",
    "click_statistics_tuples",
    "multiplexed_statistics",
    "outcome_tuples",
    "tuple_probability",
]
