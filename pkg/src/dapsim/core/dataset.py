"""Outcome tables and scan datasets shared by the simulator and estimator.

Nothing in here knows about detectors or states: a table is indexed by
outcome tuples (k_1, ..., k_N) with every k_i in 0..K. The estimator only
ever sees these types, which is what keeps it detector agnostic.
"""

import functools
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from dapsim.core.errors import DapsDataError, DapsValueError

NORMALISATION_TOLERANCE = 1e-10
MAX_TUPLES = 2_000_000


def check_tractable(N: int, K: int):
    """Reject tuple tables which would not fit in memory comfortably."""
    if N < 1 or K < 1:
        raise DapsValueError(f"Need N >= 1 detectors and K >= 1, got N={N}, K={K}.")
    size = (K + 1) ** N
    if size > MAX_TUPLES:
        raise DapsValueError(
            f"Outcome table with N={N} detectors and K+1={K + 1} bins has {size} "
            f"tuples, above the supported {MAX_TUPLES}.",
            section="multiplex",
            field="depth",
        )


@functools.lru_cache(maxsize=16)
def outcome_tuples(N: int, K: int) -> np.ndarray:
    """All outcome tuples in C (row major) order, shape ((K+1)^N, N)."""
    check_tractable(N, K)
    tuples = np.indices((K + 1,) * N).reshape(N, -1).T.copy()
    tuples.setflags(write=False)
    return tuples


@functools.lru_cache(maxsize=16)
def tuple_histograms(N: int, K: int) -> Tuple[np.ndarray, np.ndarray]:
    """Histograms (N_0, ..., N_K) and a group index per tuple.

    Returns:
        A pair (histograms, inverse): the distinct histograms in
        lexicographic order, shape (H, K+1), and for each tuple the row of
        its histogram.

    """
    tuples = outcome_tuples(N, K)
    hists = (tuples[:, :, None] == np.arange(K + 1)[None, None, :]).sum(axis=1)
    unique, inverse = np.unique(hists, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    unique.setflags(write=False)
    inverse.setflags(write=False)
    return unique, inverse


def _check_shape(arr: np.ndarray, what: str) -> Tuple[int, int]:
    if arr.ndim < 1 or len(set(arr.shape)) != 1 or arr.shape[0] < 2:
        raise DapsDataError(
            f"{what} must have one axis of equal length K+1 >= 2 per detector, "
            f"got shape {arr.shape}."
        )
    return arr.ndim, arr.shape[0] - 1


def _to_dense(entries, N: int, K: int, dtype) -> np.ndarray:
    arr = np.zeros((K + 1,) * N, dtype=dtype)
    for key, value in entries:
        key = tuple(int(k) for k in key)
        if len(key) != N or any(not 0 <= k <= K for k in key):
            raise DapsDataError(
                f"Outcome tuple {key} does not match N={N}, K={K}."
            )
        arr[key] += value
    return arr


def _to_sparse(arr: np.ndarray) -> List[list]:
    idx = np.argwhere(arr != 0)
    return [[[int(k) for k in key], arr[tuple(key)].item()] for key in idx]


class ClickTable:
    """Exact probabilities Pr(k_1, ..., k_N) of multiplexed outcomes.

    Args:
        probs: Array with N axes of length K+1.

    """

    def __init__(self, probs):
        arr = np.array(probs, dtype=float)
        self.N, self.K = _check_shape(arr, "A probability table")
        if np.any(arr < -1e-14):
            raise DapsValueError("Probability table has negative entries.")
        total = float(arr.sum())
        if abs(total - 1.0) > NORMALISATION_TOLERANCE:
            raise DapsValueError(
                f"Probability table sums to {total!r}, not one.",
            )
        arr = np.clip(arr, 0.0, None)
        arr.setflags(write=False)
        self._probs = arr

    @property
    def probs(self) -> np.ndarray:
        """The (read only) tuple probabilities."""
        return self._probs

    def histogram_table(self) -> Tuple[np.ndarray, np.ndarray]:
        """Probabilities c_{N_0, ..., N_K} of outcome histograms.

        Returns:
            (histograms, probabilities) over every possible histogram.

        """
        hists, inverse = tuple_histograms(self.N, self.K)
        return hists, np.bincount(
            inverse, weights=self._probs.reshape(-1), minlength=hists.shape[0]
        )

    def histogram_probability(self, histogram: Sequence[int]) -> float:
        """Probability of one histogram (N_0, ..., N_K)."""
        hists, probs = self.histogram_table()
        match = np.all(hists == np.asarray(histogram)[None, :], axis=1)
        return float(probs[match].sum())

    def marginal(self, arm: int) -> np.ndarray:
        """Outcome distribution of a single detector."""
        axes = tuple(a for a in range(self.N) if a != arm)
        return self._probs.sum(axis=axes) if axes else self._probs.copy()

    def expected_counts(self, events: float) -> "CoincidenceCounts":
        """Expected (real valued) coincidence counts for `events` trials."""
        if events < 2:
            raise DapsValueError(f"Need at least two nominal events, got {events}.")
        return CoincidenceCounts(self._probs * float(events))

    def to_sparse(self) -> List[list]:
        """Nonzero entries as [tuple, probability] pairs."""
        return _to_sparse(self._probs)

    @classmethod
    def from_sparse(cls, entries, N: int, K: int) -> "ClickTable":
        """Rebuild from :meth:`to_sparse` output."""
        return cls(_to_dense(entries, N, K, float))

    def __repr__(self):
        return f"<ClickTable: N={self.N}, K={self.K}>"

    def __eq__(self, other):
        if not isinstance(other, ClickTable):
            return NotImplemented
        return np.array_equal(self._probs, other._probs)


class CoincidenceCounts:
    """Coincidence events E(k_1, ..., k_N) and their total E.

    Counts are integers for sampled (or measured) data. Expected counts of
    an exact table are real valued; they give asymptotic error bars.
    """

    def __init__(self, counts):
        arr = np.array(counts)
        if arr.dtype.kind not in "iuf":
            raise DapsDataError(f"Counts must be numeric, got dtype {arr.dtype}.")
        self.N, self.K = _check_shape(arr, "A coincidence table")
        if np.any(arr < 0):
            raise DapsDataError("Coincidence counts must be nonnegative.")
        if arr.dtype.kind == "u":
            arr = arr.astype(np.int64)
        arr.setflags(write=False)
        self._counts = arr

    @property
    def counts(self) -> np.ndarray:
        """The (read only) counts array."""
        return self._counts

    @property
    def E(self) -> float:
        """Total number of events."""
        total = self._counts.sum()
        return int(total) if self.is_integral else float(total)

    @property
    def is_integral(self) -> bool:
        """Whether these are event counts rather than expectations."""
        return self._counts.dtype.kind == "i"

    def frequencies(self) -> np.ndarray:
        """Relative frequencies E(k_1, ..., k_N) / E."""
        total = float(self._counts.sum())
        if total <= 0:
            raise DapsDataError("Coincidence table has no events.")
        return self._counts / total

    def tuple_histograms(self) -> Tuple[np.ndarray, np.ndarray]:
        """Histograms of the outcome tuples, see :func:`tuple_histograms`."""
        return tuple_histograms(self.N, self.K)

    def resampled(self, rng: np.random.Generator) -> "CoincidenceCounts":
        """A multinomial resample with the same (rounded) event total."""
        total = int(round(float(self._counts.sum())))
        p = self.frequencies().reshape(-1)
        drawn = rng.multinomial(total, p / p.sum())
        return CoincidenceCounts(drawn.reshape(self._counts.shape))

    def to_sparse(self) -> List[list]:
        """Nonzero entries as [tuple, count] pairs."""
        return _to_sparse(self._counts)

    @classmethod
    def from_sparse(cls, entries, N: int, K: int) -> "CoincidenceCounts":
        """Rebuild from :meth:`to_sparse` output."""
        entries = list(entries)
        integral = all(isinstance(v, int) for _, v in entries)
        return cls(_to_dense(entries, N, K, np.int64 if integral else float))

    @classmethod
    def from_mapping(cls, mapping: Dict[tuple, float], N: int, K: int):
        """Build from a {(k_1, ..., k_N): count} mapping."""
        return cls.from_sparse(mapping.items(), N, K)

    def __repr__(self):
        return f"<CoincidenceCounts: N={self.N}, K={self.K}, E={self.E}>"

    def __eq__(self, other):
        if not isinstance(other, CoincidenceCounts):
            return NotImplemented
        return np.array_equal(self._counts, other._counts)


@dataclass(frozen=True)
class ScanSetting:
    """One LO setting of a scan: exact table and/or sampled events."""

    index: int
    beta: complex
    exact: Optional[ClickTable] = None
    events: Optional[CoincidenceCounts] = None

    def __post_init__(self):
        if self.exact is None and self.events is None:
            raise DapsDataError(
                f"Setting #{self.index} carries neither exact probabilities "
                "nor events.",
                setting=self.index,
            )

    @property
    def intensity(self) -> float:
        """|beta|^2."""
        return abs(self.beta) ** 2

    @property
    def shape(self) -> Tuple[int, int]:
        """(N, K) of the setting."""
        table: Any = self.events if self.events is not None else self.exact
        return table.N, table.K

    def counts(self, nominal_events: float = 1e6) -> CoincidenceCounts:
        """Events if sampled, else expected counts of the exact table."""
        if self.events is not None:
            return self.events
        return self.exact.expected_counts(nominal_events)  # type: ignore


@dataclass(frozen=True)
class ScanDataset:
    """An LO scan of the signal with the paired signal-blocked scan.

    Args:
        settings: Signal settings ordered by index.
        vacuum: The same LO grid measured with the signal blocked.
        metadata: Provenance (state, configuration, seed, ...).

    """

    settings: Tuple[ScanSetting, ...]
    vacuum: Optional[Tuple[ScanSetting, ...]] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "settings", tuple(self.settings))
        if self.vacuum is not None:
            object.__setattr__(self, "vacuum", tuple(self.vacuum))
        indices = [s.index for s in self.settings]
        if indices != sorted(set(indices)):
            raise DapsDataError("Setting indices must be unique and ascending.")
        shapes = {s.shape for s in self.settings + (self.vacuum or ())}
        if len(shapes) > 1:
            raise DapsDataError(f"Settings mix detector layouts {sorted(shapes)}.")
        if self.vacuum is not None:
            grid = [(s.index, s.beta) for s in self.settings]
            vac_grid = [(s.index, s.beta) for s in self.vacuum]
            if grid != vac_grid:
                raise DapsDataError(
                    "The vacuum scan must use the same LO settings as the signal scan."
                )

    @property
    def N(self) -> int:
        """Number of detectors."""
        return self.settings[0].shape[0]

    @property
    def K(self) -> int:
        """Index of the last outcome bin."""
        return self.settings[0].shape[1]

    @property
    def betas(self) -> np.ndarray:
        """LO amplitudes of the settings."""
        return np.array([s.beta for s in self.settings], dtype=complex)

    @property
    def intensities(self) -> np.ndarray:
        """LO intensities |beta|^2 of the settings."""
        return np.abs(self.betas) ** 2

    def __len__(self):
        return len(self.settings)

    def require_vacuum(self) -> Tuple[ScanSetting, ...]:
        """The vacuum scan, or a data error if it is missing."""
        if self.vacuum is None:
            raise DapsDataError(
                "Dataset has no signal-blocked (vacuum) scan, which is needed "
                "for detector-independent amplitudes."
            )
        return self.vacuum

    def zero_setting(self) -> ScanSetting:
        """The setting with beta = 0."""
        for s in self.settings:
            if s.beta == 0:
                return s
        raise DapsDataError("Dataset has no setting with beta = 0.")

    def with_metadata(self, **extra) -> "ScanDataset":
        """Copy with updated metadata."""
        return ScanDataset(self.settings, self.vacuum, {**self.metadata, **extra})
