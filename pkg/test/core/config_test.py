"""Tests for the configuration routines."""

import os
import sys
from pathlib import Path
from unittest.mock import call, patch

import appdirs
import pytest

from dapsim.core import DapsConfig
from dapsim.core.config import (
    ConfigLoader,
    coerce_value,
    dict_diff,
    nested_combine,
    split_comma_separated,
)
from dapsim.core.errors import DapsConfigError

config_a = {
    "core": {"testing_val": "foobar", "testing_int": 4},
    "bar": {"foo": "barbar"},
}


def test__config__nested_combine():
    """Test combination of two config dicts."""
    a = {"a": {"b": {"c": 123, "d": 456}}}
    b = {"b": {"b": {"c": 123, "d": 456}}}
    c = {"a": {"b": {"c": 234, "e": 456}}}
    r = nested_combine(a, b, c)
    assert r == {
        "a": {"b": {"c": 234, "e": 456, "d": 456}},
        "b": {"b": {"c": 123, "d": 456}},
    }


def test__config__nested_combine_section_clash():
    """A value can't replace a whole section."""
    with pytest.raises(DapsConfigError) as excinfo:
        nested_combine({"a": {"b": 1}}, {"a": 2})
    assert excinfo.value.field == "a"


def test__config__dict_diff():
    """Test diffs between two config dicts."""
    a = {"a": {"b": {"c": 123, "d": 456, "f": 6}}}
    b = {"b": {"b": {"c": 123, "d": 456}}}
    c = {"a": {"b": {"c": 234, "e": 456, "f": 6}}}
    assert dict_diff(a, b) == a
    assert dict_diff(a, c) == {"a": {"b": {"c": 123, "d": 456}}}
    assert dict_diff(c, a) == {"a": {"b": {"c": 234, "e": 456}}}


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("4", 4),
        ("0.25", 0.25),
        ("1e6", 1e6),
        ("True", True),
        ("false", False),
        ("None", None),
        ("1+0.5j", 1 + 0.5j),
        ("1 + 0.5j", 1 + 0.5j),
        ("auto", "auto"),
        ("0,1,2", "0,1,2"),
        (3, 3),
    ],
)
def test__config__coerce_value(raw, expected):
    """Strings become the most specific type they parse as."""
    assert coerce_value(raw) == expected
    assert type(coerce_value(raw)) is type(expected)


@pytest.mark.parametrize(
    "raw,expected",
    [
        (None, []),
        ("-1.5,0, 0.5,1", [-1.5, 0, 0.5, 1]),
        ("0,1,", [0, 1]),
        (2, [2]),
        (["1", "2.5"], [1, 2.5]),
    ],
)
def test__config__split_comma_separated(raw, expected):
    """Comma separated values are split and coerced."""
    assert split_comma_separated(raw) == expected


def test__config__load_file_dir():
    """Test loading config from a directory path."""
    c = ConfigLoader()
    cfg = c.load_config_at_path(
        os.path.join("test", "fixtures", "config", "inheritance_a")
    )
    assert cfg == config_a


def test__config__load_file_f():
    """Test loading config from a file path."""
    c = ConfigLoader()
    cfg = c.load_config_at_path(
        os.path.join("test", "fixtures", "config", "inheritance_a", "scan.json")
    )
    assert cfg == config_a


def test__config__load_nested():
    """Test nested overwrite and precedence of config files in one directory."""
    c = ConfigLoader()
    cfg = c.load_config_up_to_path(
        os.path.join(
            "test", "fixtures", "config", "inheritance_a", "nested", "scan.json"
        )
    )
    assert cfg == {
        "core": {"testing_val": "foobar", "testing_int": 1, "testing_bar": 7.698},
        "bar": {"foo": "foobar"},
        "fnarr": {"fnarr": {"foo": "foobar"}},
    }


def test__config__load_toml():
    """Test loading config from a pyproject.toml file."""
    c = ConfigLoader()
    cfg = c.load_default_config_file(
        os.path.join("test", "fixtures", "config", "toml"),
        "pyproject.toml",
    )
    assert cfg == {
        "core": {
            "testing_int": 5,
            "testing_bar": 7.698,
            "testing_bool": False,
            "testing_arr": ["a", "b", "c"],
            "testing_complex": 1 + 0.5j,
        },
        "bar": {"foo": "foobar"},
        "fnarr": {"fnarr": {"foo": "foobar"}},
    }


def test__config__load_missing_explicit_file():
    """An explicit config file must exist."""
    with pytest.raises(DapsConfigError):
        ConfigLoader().load_config_file("test/fixtures/config/nope.cfg")


def test__config__iter_config_paths_right_order():
    """Test that config paths are fetched ordered by priority."""
    c = ConfigLoader()
    cfg_paths = c.iter_config_locations_up_to_path(
        os.path.join(
            "test", "fixtures", "config", "inheritance_a", "nested", "scan.json"
        ),
        working_path="test/fixtures",
    )
    assert list(cfg_paths) == [
        str(Path(p).resolve())
        for p in [
            "test/fixtures",
            "test/fixtures/config",
            "test/fixtures/config/inheritance_a",
            "test/fixtures/config/inheritance_a/nested",
        ]
    ]


def test__config__layered_on_defaults():
    """Discovered files are layered on top of the packaged defaults."""
    cfg = DapsConfig.from_path(
        path=os.path.join("test", "fixtures", "config", "inheritance_b")
    )
    assert cfg.get("seed") == 7
    assert cfg.get("model", section="detector") == "onoff"
    assert cfg.get("transmittance", section="frontend") == 0.95
    # Untouched defaults survive the layering.
    assert cfg.get("bins", section="detector") == 4
    assert cfg.get("depth", section="multiplex") == 1


def test__config__defaults_loaded():
    """The packaged defaults describe the heralded TES experiment."""
    cfg = DapsConfig()
    assert cfg.get("schema_version") == 1
    assert cfg.get("n_max") == "auto"
    assert cfg.get("model", section="detector") == "tes"
    assert cfg.get("eta2", section="detector") == 0.0001
    assert cfg.get_section(["heralding", "detector"])["model"] == "tes"
    assert cfg.get("zs", section="estimate") == "-1.5,0,0.5,1"


def test__config__overrides_precedence():
    """Flat overrides land in core, nested ones in their section."""
    cfg = DapsConfig.from_path(
        path=os.path.join("test", "fixtures", "config", "inheritance_b"),
        overrides={"seed": 99, "detector": {"eta": 0.25}},
    )
    assert cfg.get("seed") == 99
    assert cfg.get("eta", section="detector") == 0.25
    assert cfg.get("model", section="detector") == "onoff"


def test__config__explicit_file_beats_discovered():
    """A file given explicitly is applied on top of discovered config."""
    cfg = DapsConfig.from_path(
        path=os.path.join("test", "fixtures", "config", "inheritance_b"),
        extra_config_path=os.path.join(
            "test", "fixtures", "experiments", "fock1_exact.cfg"
        ),
    )
    assert cfg.get("seed") == 11
    assert cfg.get("model", section="detector") == "photoelectric"
    assert cfg.get("transmittance", section="frontend") == 0.8


def test__config__nocolor():
    """The nocolor flag switches colour off."""
    assert DapsConfig(overrides={"nocolor": True}).get("color") is False
    assert DapsConfig().get("color") is None


def test__config__set_value_and_diff():
    """Values set on one config show up in its diff to another."""
    a = DapsConfig()
    b = DapsConfig()
    a.set_value(["seed"], "12")
    a.set_value(["detector", "eta"], "0.5")
    assert a.get("seed") == 12
    assert a.diff_to(b) == {"core": {"seed": 12}, "detector": {"eta": 0.5}}


def test__config__iter_vals():
    """Values come before sections, nested one level deeper."""
    cfg = DapsConfig()
    vals = list(cfg.iter_vals(cfg={"a": 1, "s": {"b": 2}}))
    assert vals == [(0, "a", 1), (0, "s", ""), (1, "b", 2)]


@patch("os.path.exists")
@patch("os.listdir")
@pytest.mark.skipif(sys.platform == "win32", reason="Not applicable on Windows")
def test__config__load_user_appdir_config(
    mock_listdir, mock_path_exists, mock_xdg_home
):
    """Test loading config from user appdir."""
    xdg_config_path = os.environ.get("XDG_CONFIG_HOME") + "/dapsim"

    def path_exists(x):
        if x == os.path.expanduser("~/.config/dapsim"):
            return False
        if x == xdg_config_path:
            return False
        else:
            return True

    mock_path_exists.side_effect = path_exists

    c = ConfigLoader()

    with patch.object(appdirs, attribute="system", new="darwin"):
        resolved_path = c._get_user_config_dir_path()
        c.load_user_appdir_config()
    assert resolved_path == os.path.expanduser("~/Library/Application Support/dapsim")

    mock_path_exists.assert_has_calls(
        [
            call(xdg_config_path),
            call(os.path.expanduser("~/Library/Application Support/dapsim")),
        ]
    )
