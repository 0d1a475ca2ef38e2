"""Tests for the YAML configuration layer"""

import yaml

from config_manager import DEFAULTS, ConfigManager, load_config


def test_missing_file_is_created(tmp_path, capsys):
    path = tmp_path / "witness_config.yaml"
    config = ConfigManager(path)
    assert path.exists()
    assert config.get("oracle", "trials") == 100000
    assert "Config file not found" in capsys.readouterr().out
    assert yaml.safe_load(path.read_text())["sampling"]["seed"] == DEFAULTS["sampling"]["seed"]


def test_missing_file_without_creation(tmp_path):
    path = tmp_path / "absent.yaml"
    config = load_config(path, create_missing=False)
    assert not path.exists()
    assert config.get("sampling", "shots") == 4000


def test_overrides_and_fallbacks(tmp_path):
    path = tmp_path / "witness_config.yaml"
    path.write_text("oracle:\n  trials: 500\nsweep:\n  steps: 5\n")
    config = load_config(path)
    assert config.get("oracle", "trials") == 500
    assert config.get("oracle", "restarts") == 12
    assert config.get("sweep", "steps") == 5
    assert config.get("sweep", "phi") == "pi"
    assert config.get("nowhere", "nothing", 7) == 7


def test_unknown_section_warns(tmp_path, capsys):
    path = tmp_path / "witness_config.yaml"
    path.write_text("colors:\n  theme: dark\n")
    config = load_config(path)
    assert "unknown config section 'colors'" in capsys.readouterr().out
    assert config.section("colors") == {}


def test_non_mapping_file(tmp_path):
    path = tmp_path / "witness_config.yaml"
    path.write_text("- just\n- a list\n")
    assert load_config(path).get("tolerances", "min_abs") == 1e-6


def test_shipped_config_matches_defaults():
    config = ConfigManager(create_missing=False)
    for section, values in DEFAULTS.items():
        for key, value in values.items():
            assert config.get(section, key) == value
