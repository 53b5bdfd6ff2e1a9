"""Documenting and validating experiment configuration.

Provide a mapping with all configuration options, with information
on valid inputs and definitions. Keys are `section:field`, with `core`
for the top level `[dapsim]` section.

This mapping is used to validate config inputs when an
:obj:`ExperimentConfig` is built, as well as to document them
(see `dapsim config`).
"""

from dapsim.core.plugin.host import get_plugin_manager

STANDARD_CONFIG_INFO_DICT = {
    "core:schema_version": {
        "validation": [1],
        "definition": "Version of the config and file schema.",
    },
    "core:seed": {
        "definition": "Master seed. All randomness of a run derives from it.",
    },
    "core:processes": {
        "validation": range(1, 1025),
        "definition": "Number of worker processes for scan generation.",
    },
    "core:n_max": {
        "definition": (
            "Fock truncation. `auto` picks the smallest truncation whose "
            "tail mass stays below 1e-10 over the whole scan."
        ),
    },
    "state:kind": {
        "validation": ["vacuum", "fock", "coherent", "thermal", "fock_mixture"],
        "definition": "The signal state fed into the unbalanced beam splitter.",
    },
    "state:m": {
        "validation": range(0, 151),
        "definition": "Photon number of a Fock signal.",
    },
    "state:alpha": {
        "definition": "Complex amplitude of a coherent signal, e.g. `1+0.5j`.",
    },
    "state:nbar": {
        "definition": "Mean photon number of a thermal signal.",
    },
    "state:fock_weights": {
        "definition": "Comma separated weights of |0>, |1>, ... for `fock_mixture`.",
    },
    "state:phase_randomized": {
        "validation": [True, False],
        "definition": "Average the signal over its phase.",
    },
    "frontend:transmittance": {
        "definition": "Signal transmittance |t|^2 of the unbalanced beam splitter.",
    },
    "detector:model": {
        "definition": "Name of a registered detector model (see `dapsim detectors`).",
    },
    "detector:eta": {
        "definition": "Detector efficiency.",
    },
    "detector:eta2": {
        "definition": "Quadratic response coefficient of the `tes` model.",
    },
    "detector:bins": {
        "definition": "Index of the last outcome bin K.",
    },
    "multiplex:depth": {
        "validation": [1, 2, 3],
        "definition": "Number of 50:50 splitting steps S, so N = 2^S detectors.",
    },
    "imbalance:enabled": {
        "validation": [True, False],
        "definition": "Inject an asymmetric split and per-detector efficiencies.",
    },
    "imbalance:weights": {
        "definition": "Comma separated splitting weights, one per detector.",
    },
    "imbalance:eta_scale": {
        "definition": "Comma separated efficiency scale factors, one per detector.",
    },
    "scan:max_intensity": {
        "definition": "Largest LO intensity |beta|^2 of the equidistant grid.",
    },
    "scan:settings": {
        "validation": range(1, 10001),
        "definition": "Number of LO settings.",
    },
    "scan:intensities": {
        "definition": "Explicit comma separated |beta|^2 grid, replaces the above.",
    },
    "scan:trials": {
        "definition": "Sampled trials per setting.",
    },
    "scan:sample": {
        "validation": [True, False],
        "definition": "Draw synthetic events in addition to the exact tables.",
    },
    "heralding:enabled": {
        "validation": [True, False],
        "definition": "Replace the signal state by a heralded PDC state.",
    },
    "heralding:squeezing": {
        "definition": "Two-mode squeezing parameter lambda in [0, 1).",
    },
    "heralding:transmittance": {
        "definition": "Transmittance of the herald (idler) arm.",
    },
    "heralding:khs": {
        "definition": "Comma separated herald outcomes to post-select on.",
    },
    "estimate:zs": {
        "definition": "Comma separated z values for which G_z is estimated.",
    },
    "estimate:threshold": {
        "definition": "Significance (in standard deviations) to flag negativity.",
    },
    "estimate:error_method": {
        "validation": ["propagation", "bootstrap"],
        "definition": "How eigenvalue error bars are obtained.",
    },
    "estimate:bootstrap_resamples": {
        "validation": range(2, 100001),
        "definition": "Number of bootstrap resamples.",
    },
    "estimate:nominal_events": {
        "definition": "Event count attached to exact tables for error bars.",
    },
    "analysis:z": {
        "definition": "The z at which curves are fitted, predicted and compared.",
    },
    "analysis:variable": {
        "validation": ["di", "raw"],
        "definition": "Curve abscissa: |beta_DI|^2 or the raw |beta|^2.",
    },
    "analysis:fix_decay": {
        "validation": [True, False],
        "definition": "Fix the heralded decay rate to the vacuum fit.",
    },
    "analysis:z_min": {
        "definition": "Lower end of the optimal z search grid.",
    },
    "analysis:z_max": {
        "definition": "Upper end of the optimal z search grid.",
    },
    "analysis:z_step": {
        "definition": "Step of the optimal z search grid.",
    },
    "analysis:quadrature_order": {
        "validation": range(8, 1025),
        "definition": "Gauss-Legendre order of the convolution quadrature.",
    },
    "analysis:predict_photons": {
        "validation": range(0, 21),
        "definition": "Photon number m for `analyze --mode predict`.",
    },
}


def get_config_info() -> dict:
    """Gets the config info from core dapsim and plugins and merges them."""
    plugin_manager = get_plugin_manager()
    configs_info = plugin_manager.hook.get_configs_info()
    return {
        k: v for config_info_dict in configs_info for k, v in config_info_dict.items()
    }
