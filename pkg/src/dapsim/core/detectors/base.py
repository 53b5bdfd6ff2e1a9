"""Base classes for phase-insensitive detector models."""

import inspect
import logging
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Type

import numpy as np
from cached_property import cached_property

from dapsim.core.errors import DapsValueError
from dapsim.core.plugin.host import get_plugin_manager

detector_logger = logging.getLogger("dapsim.detectors")

COMPLETENESS_TOLERANCE = 1e-10


class ResponseMatrix:
    """Fock-diagonal POVM of a detector: P(k|n) for k <= K, n <= n_max.

    Rows are outcomes, columns incident photon numbers. Every column is a
    probability vector.

    Args:
        p: The (K+1) x (n_max+1) matrix.
        label (:obj:`str`, optional): Human readable name of the model.
        overflow_folded (:obj:`bool`): Set when outcomes above K were
            merged into the last bin.

    """

    def __init__(self, p, label: str = "custom", overflow_folded: bool = False):
        arr = np.array(p, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 2:
            raise DapsValueError(
                f"Response matrix needs at least two outcome rows, got {arr.shape}."
            )
        if np.any(arr < -1e-12) or np.any(arr > 1 + 1e-12):
            raise DapsValueError("Response matrix entries must lie in [0, 1].")
        sums = arr.sum(axis=0)
        worst = float(np.max(np.abs(sums - 1.0)))
        if worst > COMPLETENESS_TOLERANCE:
            raise DapsValueError(
                f"Response matrix columns do not sum to one (worst {worst:.3e})."
            )
        arr = np.clip(arr, 0.0, 1.0)
        arr.setflags(write=False)
        self._p = arr
        self.label = label
        self.overflow_folded = overflow_folded

    @property
    def p(self) -> np.ndarray:
        """The (read only) matrix."""
        return self._p

    @property
    def K(self) -> int:
        """Index of the last outcome bin."""
        return self._p.shape[0] - 1

    @property
    def n_max(self) -> int:
        """Largest photon number covered."""
        return self._p.shape[1] - 1

    def column(self, n: int) -> np.ndarray:
        """Outcome distribution for n incident photons."""
        return self._p[:, n]

    def resized(self, n_max: int) -> "ResponseMatrix":
        """Restrict to a smaller photon-number range."""
        if n_max > self.n_max:
            raise DapsValueError(
                f"Cannot extend a response matrix from n_max={self.n_max} to {n_max}."
            )
        return ResponseMatrix(
            self._p[:, : n_max + 1], self.label, self.overflow_folded
        )

    def outcome_probabilities(self, photon_probs) -> np.ndarray:
        """Single-detector outcome distribution for a photon distribution."""
        photon_probs = np.asarray(photon_probs, dtype=float)
        return self._p[:, : photon_probs.size] @ photon_probs

    def __repr__(self):
        return f"<ResponseMatrix {self.label}: K={self.K}, n_max={self.n_max}>"

    def __eq__(self, other):
        if not isinstance(other, ResponseMatrix):
            return NotImplemented
        return self._p.shape == other._p.shape and np.array_equal(self._p, other._p)


class CoherentResponse:
    """Outcome probabilities p_k(mu) for a coherent state of intensity mu.

    Wraps a vectorised evaluator which maps an array of intensities of
    shape (m,) to probabilities of shape (m, K+1).
    """

    def __init__(
        self, evaluator: Callable[[np.ndarray], np.ndarray], K: int, label: str
    ):
        self._evaluator = evaluator
        self.K = K
        self.label = label

    def __call__(self, mu):
        """Evaluate for a scalar (returns (K+1,)) or an array of intensities."""
        arr = np.asarray(mu, dtype=float)
        if np.any(arr < 0):
            raise DapsValueError("Coherent intensities must be nonnegative.")
        out = self._evaluator(np.atleast_1d(arr))
        return out[0] if arr.ndim == 0 else out

    def __repr__(self):
        return f"<CoherentResponse {self.label}: K={self.K}>"


def check_efficiency(eta: float, field: str = "eta") -> float:
    """Validate an efficiency parameter."""
    if not 0.0 <= eta <= 1.0:
        raise DapsValueError(
            f"Efficiency {field} must lie in [0, 1], got {eta!r}.",
            section="detector",
            field=field,
        )
    return float(eta)


def fold_last_bin(p: np.ndarray) -> np.ndarray:
    """Replace the last row by the complement of the others."""
    out = p.copy()
    out[-1] = np.clip(1.0 - out[:-1].sum(axis=0), 0.0, 1.0)
    return out


class DetectorModel:
    """A named, parameterised detector model.

    Subclasses set `name`, accept their parameters as keyword arguments,
    and implement :meth:`build_response_matrix` and :meth:`coherent_response`.
    Models are registered through the `get_detector_models` plugin hook.
    """

    name = "base"
    description = "Abstract detector model."

    def __init__(self, **params):
        self.params = params

    def outcome_bins(self, n_max: Optional[int] = None) -> int:
        """Index K of the last outcome bin for matrices up to `n_max`."""
        raise NotImplementedError

    def build_response_matrix(self, n_max: int) -> ResponseMatrix:
        """Construct the Fock-diagonal POVM up to `n_max` photons."""
        raise NotImplementedError

    def coherent_response(self, n_max: Optional[int] = None) -> CoherentResponse:
        """Closed form outcome probabilities for coherent light.

        `n_max` only matters for models whose K follows the truncation.
        """
        raise NotImplementedError

    @cached_property
    def _matrix_cache(self) -> Dict[int, ResponseMatrix]:
        return {}

    def response_matrix(self, n_max: int) -> ResponseMatrix:
        """The (cached) POVM up to `n_max` photons."""
        if n_max not in self._matrix_cache:
            self._matrix_cache[n_max] = self.build_response_matrix(n_max)
        return self._matrix_cache[n_max]

    def perturbed(self, eta_scale: float) -> "DetectorModel":
        """Copy of this model with its efficiency scaled by `eta_scale`."""
        params = dict(self.params)
        if "eta" not in params:
            raise DapsValueError(f"Model {self.name!r} has no efficiency to perturb.")
        params["eta"] = check_efficiency(params["eta"] * eta_scale)
        return type(self)(**params)

    def to_record(self) -> dict:
        """Serialisable representation."""
        return {"model": self.name, **self.params}

    def __repr__(self):
        params = ", ".join(f"{k}={v!r}" for k, v in sorted(self.params.items()))
        return f"<{self.__class__.__name__}: {params}>"

    def __eq__(self, other):
        if not isinstance(other, DetectorModel):
            return NotImplemented
        return self.name == other.name and self.params == other.params

    def __hash__(self):
        return hash((self.name, tuple(sorted(self.params.items()))))

    def __getstate__(self):
        # The matrix cache is rebuilt on demand in worker processes.
        return {"params": self.params}

    def __setstate__(self, state):
        self.params = state["params"]


def _detector_lookup() -> Dict[str, Type[DetectorModel]]:
    lookup: Dict[str, Type[DetectorModel]] = {}
    for model_list in get_plugin_manager().hook.get_detector_models():
        for cls in model_list:
            lookup[cls.name] = cls
    return lookup


class DetectorTuple(NamedTuple):
    """Detector Tuple object for describing available models."""

    label: str
    description: str


def detector_readout() -> Iterator[DetectorTuple]:
    """Generate a readout of available detector models."""
    lookup = _detector_lookup()
    for label in sorted(lookup):
        yield DetectorTuple(label=label, description=lookup[label].description)


def detector_selector(name: Optional[str] = None, **params) -> DetectorModel:
    """Instantiate a detector model by name."""
    name = name or "photoelectric"
    lookup = _detector_lookup()
    try:
        cls = lookup[name]
    except KeyError:
        raise DapsValueError(
            "Requested detector model {!r} which is not currently available. "
            "Try one of {}".format(name, ", ".join(sorted(lookup))),
            section="detector",
            field="model",
        )
    return cls(**params)


def list_detector_names() -> List[str]:
    """Names of all registered detector models."""
    return sorted(_detector_lookup())


def detector_from_section(section: dict) -> DetectorModel:
    """Instantiate the model named by `model` in a config section.

    Keys the model does not accept are skipped, so one section can carry
    the parameters of several models.
    """
    section = dict(section or {})
    name = section.pop("model", None) or "photoelectric"
    lookup = _detector_lookup()
    if name not in lookup:
        # Let the selector raise its usual error.
        return detector_selector(name)
    accepted = inspect.signature(lookup[name].__init__).parameters
    params = {k: v for k, v in section.items() if k in accepted}
    skipped = sorted(set(section) - set(params))
    if skipped:
        detector_logger.debug("Model %r ignores config keys %s", name, skipped)
    try:
        return detector_selector(name, **params)
    except TypeError as err:
        raise DapsValueError(
            f"Bad parameters for detector model {name!r}: {err}",
            section="detector",
        )
