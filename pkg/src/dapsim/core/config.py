"""Layered configuration for simulations and estimates.

Values come from plugin defaults, the user config directories, config
files between the working directory and the target path, an explicit
config file and command line overrides, in increasing priority.
"""

import configparser
import logging
import os
import os.path
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import appdirs
import toml

from dapsim.core.errors import DapsConfigError
from dapsim.core.plugin.host import get_plugin_manager

config_logger = logging.getLogger("dapsim.config")

global_loader = None
""":obj:`ConfigLoader`: Shared loader, so parsed files stay cached between calls."""

CONFIG_FILE_NAMES = ["setup.cfg", "tox.ini", ".dapsim", "pyproject.toml"]


def coerce_value(val: Any) -> Any:
    """Try to coerce to a more specific type.

    Strings become int, float, complex (``1+0.5j``), bool or None where
    they parse as such, otherwise they are left as they are.
    """
    if not isinstance(val, str):
        return val
    try:
        v: Any = int(val)
    except ValueError:
        try:
            v = float(val)
        except ValueError:
            cleaned_val = val.strip().lower()
            if cleaned_val in ["true"]:
                v = True
            elif cleaned_val in ["false"]:
                v = False
            elif cleaned_val in ["none"]:
                v = None
            else:
                try:
                    v = complex(cleaned_val.replace(" ", ""))
                except ValueError:
                    v = val
    return v


def split_comma_separated(raw: Any) -> List[Any]:
    """Split a comma separated config value into coerced elements."""
    if raw is None:
        return []
    if isinstance(raw, (list, tuple)):
        return [coerce_value(v) for v in raw]
    if not isinstance(raw, str):
        return [raw]
    return [coerce_value(s.strip()) for s in raw.split(",") if s.strip()]


def nested_combine(*dicts: dict) -> dict:
    """Merge config layers, later layers winning key by key.

    Sections present in several layers are merged recursively. A key
    which is a section in one layer and a plain value in another is a
    :obj:`DapsConfigError`.
    """
    r: dict = {}
    for d in dicts:
        for k in d:
            if k in r and isinstance(r[k], dict):
                if isinstance(d[k], dict):
                    r[k] = nested_combine(r[k], d[k])
                else:
                    raise DapsConfigError(
                        f"Key {k!r} is a section in one config but a value in "
                        f"another: {d[k]!r}",
                        field=k,
                    )
            else:
                r[k] = d[k]
    return r


def dict_diff(left: dict, right: dict, ignore: Optional[List[str]] = None) -> dict:
    """The part of `left` which `right` lacks or sets differently.

    Sections are compared recursively and only differing keys are kept.

    Args:
        left (:obj:`dict`): The object containing the *new* elements
            which will be compared against the other.
        right (:obj:`dict`): The object to compare against.
        ignore (:obj:`list` of :obj:`str`, optional): Keys to skip.

    Returns:
        `dict`: A dictionary representing the difference.

    """
    buff: dict = {}
    for k in left:
        if ignore and k in ignore:
            continue
        if k not in right:
            buff[k] = left[k]
        elif left[k] == right[k]:
            continue
        elif isinstance(left[k], dict) and isinstance(right[k], dict):
            diff = dict_diff(left[k], right[k], ignore=ignore)
            if diff:
                buff[k] = diff
        else:
            buff[k] = left[k]
    return buff


class ConfigLoader:
    """Finds, parses and caches config files.

    Note:
        Keys are read case-sensitively, and any key ending in `_path` or
        `_dir` is resolved relative to the file which set it.

    """

    def __init__(self):
        self._config_cache: dict = {}

    @classmethod
    def get_global(cls) -> "ConfigLoader":
        """Get the singleton loader."""
        global global_loader
        if not global_loader:
            global_loader = cls()
        return global_loader

    @classmethod
    def _walk_toml(cls, config: Dict[str, Any], base_key=()):
        """Recursively walk the nested config inside a TOML file."""
        buff: List[tuple] = []
        for k, v in config.items():
            key = base_key + (k,)
            if isinstance(v, dict):
                buff.extend(cls._walk_toml(v, key))
            else:
                buff.append((key, v))
        return buff

    @classmethod
    def _get_config_elems_from_toml(cls, fpath: str) -> List[Tuple[tuple, Any]]:
        """Load the `[tool.dapsim]` table of a TOML file as (path, value) tuples.

        Top level values of the table belong to the core section.
        """
        config = toml.load(fpath)
        tool = config.get("tool", {}).get("dapsim", {})
        buff = []
        for key, val in cls._walk_toml(tool):
            if len(key) == 1:
                key = ("core",) + key
            buff.append((key, coerce_value(val)))
        return buff

    @staticmethod
    def _get_config_elems_from_file(fpath: str) -> List[Tuple[tuple, Any]]:
        """Load an INI style file as (path, value) tuples.

        The `[dapsim]` section maps to `core` and `[dapsim:a:b]` to the
        nested path `(a, b)`.
        """
        buff: List[Tuple[tuple, Any]] = []
        config = configparser.ConfigParser(interpolation=None)
        config.optionxform = lambda option: option  # type: ignore
        try:
            config.read(fpath)
        except configparser.Error as err:
            raise DapsConfigError(f"Unable to parse config file {fpath!r}: {err}")
        for k in config.sections():
            if k == "dapsim":
                key: Tuple = ("core",)
            elif k.startswith("dapsim:"):
                key = tuple(k[len("dapsim:") :].split(":"))
            else:
                continue

            for name, val in config.items(section=k):
                v = coerce_value(val)
                if name.lower().endswith(("_path", "_dir")):
                    ref_path = os.path.join(os.path.dirname(fpath), val)
                    if os.path.exists(ref_path):
                        v = ref_path
                buff.append((key + (name,), v))
        return buff

    @staticmethod
    def _incorporate_vals(ctx: dict, vals: List[Tuple[Tuple[str, ...], Any]]) -> dict:
        """Write (path, value) tuples into the nested dict `ctx`."""
        for k, v in vals:
            r = ctx
            n = k[-1]
            pth = k[:-1]
            for dp in pth:
                if dp in r:
                    if isinstance(r[dp], dict):
                        r = r[dp]
                    else:
                        raise DapsConfigError(
                            f"Overriding config value with section! [{k}]",
                            section=":".join(pth),
                            field=n,
                        )
                else:
                    r[dp] = {}
                    r = r[dp]
            r[n] = v
        return ctx

    def _load_file(self, fpath: str) -> List[Tuple[tuple, Any]]:
        if fpath.endswith(".toml"):
            return self._get_config_elems_from_toml(fpath)
        return self._get_config_elems_from_file(fpath)

    def load_default_config_file(self, file_dir: str, file_name: str) -> dict:
        """Load the default config file."""
        elems = self._load_file(os.path.join(file_dir, file_name))
        return self._incorporate_vals({}, elems)

    def load_config_file(self, fpath: str) -> dict:
        """Load a single, explicitly named config file."""
        if not os.path.isfile(fpath):
            raise DapsConfigError(f"Config file {fpath!r} does not exist.")
        config_logger.info("Loading config file %s", fpath)
        return self._incorporate_vals({}, self._load_file(fpath))

    def load_config_at_path(self, path: str) -> dict:
        """Merge every known config file in one directory."""
        if str(path) in self._config_cache:
            return self._config_cache[str(path)]

        configs: dict = {}
        p = path if os.path.isdir(path) else os.path.dirname(path)
        d = os.listdir(os.path.expanduser(p))
        # Later file names win.
        for fname in CONFIG_FILE_NAMES:
            if fname in d:
                config_logger.debug("Reading config from %s", os.path.join(p, fname))
                configs = self._incorporate_vals(
                    configs, self._load_file(os.path.join(p, fname))
                )

        self._config_cache[str(path)] = configs
        return configs

    @staticmethod
    def _get_user_config_dir_path() -> str:
        appname = "dapsim"
        appauthor = "dapsim"

        # On Mac OSX follow Linux XDG base dirs
        user_config_dir_path = os.path.expanduser("~/.config/dapsim")
        if appdirs.system == "darwin":
            appdirs.system = "linux2"
            user_config_dir_path = appdirs.user_config_dir(appname, appauthor)
            appdirs.system = "darwin"

        if not os.path.exists(user_config_dir_path):
            user_config_dir_path = appdirs.user_config_dir(appname, appauthor)

        return user_config_dir_path

    def load_user_appdir_config(self) -> dict:
        """Load the config from the user's OS specific appdir config directory."""
        user_config_dir_path = self._get_user_config_dir_path()
        if os.path.exists(user_config_dir_path):
            return self.load_config_at_path(user_config_dir_path)
        return {}

    def load_user_config(self) -> dict:
        """Load the config from the user's home directory."""
        return self.load_config_at_path(os.path.expanduser("~"))

    def load_config_up_to_path(self, path: str) -> dict:
        """Merge the user configs with every directory down to `path`."""
        user_appdir_config = self.load_user_appdir_config()
        user_config = self.load_user_config()
        config_paths = self.iter_config_locations_up_to_path(path)
        config_stack = [self.load_config_at_path(p) for p in config_paths]
        return nested_combine(user_appdir_config, user_config, *config_stack)

    @staticmethod
    def iter_config_locations_up_to_path(path, working_path=None):
        """Directories to search for config, outermost first.

        The walk starts at the common root of `path` and the working
        directory and ends at `path`.
        """
        given_path = Path(path).resolve()
        working_path = Path(working_path or Path.cwd()).resolve()

        if not given_path.is_dir():
            given_path = given_path.parent

        common_path = Path(os.path.commonpath([working_path, given_path]))

        path_to_visit = common_path
        while path_to_visit != given_path:
            yield str(path_to_visit.resolve())
            next_path_to_visit = (
                path_to_visit / given_path.relative_to(path_to_visit).parts[0]
            )
            if next_path_to_visit == path_to_visit:
                break
            path_to_visit = next_path_to_visit

        yield str(given_path.resolve())


class DapsConfig:
    """The class that actually gets passed around as a config object.

    Layering, lowest priority first: plugin defaults, user config, config
    files found on the path, an explicit config file, then overrides (which
    always land in the core section unless given as nested dicts).
    """

    def __init__(
        self, configs: Optional[dict] = None, overrides: Optional[dict] = None
    ):
        self._overrides = overrides
        defaults = nested_combine(*get_plugin_manager().hook.load_default_config())
        core_overrides = {
            k: v for k, v in (overrides or {}).items() if not isinstance(v, dict)
        }
        section_overrides = {
            k: v for k, v in (overrides or {}).items() if isinstance(v, dict)
        }
        self._configs = nested_combine(
            defaults,
            configs or {"core": {}},
            section_overrides,
            {"core": core_overrides},
        )
        self._configs["core"]["color"] = (
            False if self._configs["core"].get("nocolor", False) else None
        )

    @classmethod
    def from_path(
        cls,
        path: str = ".",
        extra_config_path: Optional[str] = None,
        overrides: Optional[dict] = None,
    ) -> "DapsConfig":
        """Loads a config object given a particular path.

        Args:
            path (:obj:`str`): Directory from which to discover config files.
            extra_config_path (:obj:`str`, optional): An explicit config
                file, applied on top of the discovered ones.
            overrides (:obj:`dict`, optional): Values which beat everything.

        """
        loader = ConfigLoader.get_global()
        c = loader.load_config_up_to_path(path=path)
        if extra_config_path:
            c = nested_combine(c, loader.load_config_file(extra_config_path))
        return cls(configs=c, overrides=overrides)

    def diff_to(self, other: "DapsConfig") -> dict:
        """Keys of this config which are missing or different in `other`."""
        return dict_diff(self._configs, other._configs)

    def get(
        self, val: str, section: Union[str, Iterable[str]] = "core", default: Any = None
    ):
        """Get a particular value from the config."""
        sect = self.get_section(section) or {}
        return sect.get(val, default)

    def get_section(self, section: Union[str, Iterable[str]]) -> Union[dict, None]:
        """Return a whole section of config as a dict.

        Args:
            section: An iterable or string. If it's a string
                we load that root section. If it's an iterable
                of strings, then we treat it as a path within
                the dictionary structure.

        """
        if isinstance(section, str):
            return self._configs.get(section, None)
        buff = self._configs
        for sec in section:
            buff = buff.get(sec, None)
            if buff is None:
                return None
        return buff

    def set_value(self, config_path: Iterable[str], val: Any):
        """Set a value at a given path."""
        config_path = list(config_path)
        config_val = coerce_value(val)
        if len(config_path) == 1:
            config_path = ["core"] + config_path
        buff = self._configs
        for elem in config_path[:-1]:
            buff = buff.setdefault(elem, {})
        buff[config_path[-1]] = config_val

    def as_dict(self) -> dict:
        """A (shallow per section) copy of the combined config."""
        return {
            k: dict(v) if isinstance(v, dict) else v for k, v in self._configs.items()
        }

    def iter_vals(self, cfg: Optional[dict] = None) -> Iterable[tuple]:
        """Return an iterable of tuples representing keys.

        We show values before dicts, the tuple contains an indent
        value to know what level of the dict we're in. Dict labels
        will be returned as a blank value before their content.
        """
        cfg = cfg or self._configs

        keys = sorted(cfg.keys())
        for k in keys:
            if not isinstance(cfg[k], dict) and cfg[k] is not None:
                yield (0, k, cfg[k])

        for k in keys:
            if isinstance(cfg[k], dict):
                yield (0, k, "")
                for idnt, key, val in self.iter_vals(cfg=cfg[k]):
                    yield (idnt + 1, key, val)
