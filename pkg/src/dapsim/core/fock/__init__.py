"""Fock-space numerics for the optical front-end.

Photon-number distributions, displacement matrix elements, the lossy and
displaced front-end state and the small symmetric eigensolver used by the
estimators.
"""

# flake8: noqa: F401

from dapsim.core.fock.distribution import (
    MAX_FOCK_INDEX,
    FockDistribution,
    StateSpec,
    attenuate,
    attenuation_matrix,
    loss_diagonal,
)
from dapsim.core.fock.displacement import (
    displaced_fock_overlap,
    displacement_matrix,
    displaced_number_probabilities,
)
from dapsim.core.fock.frontend import (
    FrontendConfig,
    frontend_distribution,
    phase_insensitivity_check,
    suggest_truncation,
)
from dapsim.core.fock.eigen import jacobi_eigh, symmetric_eigen_min
