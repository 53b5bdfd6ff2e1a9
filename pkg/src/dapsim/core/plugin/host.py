"""Defines the plugin manager getter."""
import functools

import pluggy

from dapsim.core.plugin import plugin_base_name, project_name
from dapsim.core.plugin.hookspecs import PluginSpec


@functools.lru_cache(maxsize=None)
def get_plugin_manager() -> pluggy.PluginManager:
    """Initializes the PluginManager.

    The built-in models are registered directly when the package metadata
    (and so the entry point) is not available, e.g. when running from a
    source checkout.
    """
    pm = pluggy.PluginManager(plugin_base_name)
    pm.add_hookspecs(PluginSpec)
    pm.load_setuptools_entrypoints(project_name)
    # NB: Imported here to avoid a circular import via the detector modules.
    from dapsim.core.plugin import lib

    if not pm.is_registered(lib):
        pm.register(lib, name=project_name)
    return pm
