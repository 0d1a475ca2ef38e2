"""
Configuration Loader
Reads witness_config.yaml and falls back to built-in defaults
1. Missing file -> a default file is written
2. Missing keys -> built-in default values
3. Unknown sections -> warning, ignored
"""

import copy
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "witness_config.yaml"

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "tolerances": {
        "nonvanishing": 1e-9,
        "min_abs": 1e-6,
        "oracle_slack": 1e-9,
    },
    "sampling": {"shots": 4000, "seed": 20190101},
    "oracle": {"trials": 100000, "restarts": 12, "components": 8, "workers": 1},
    "sweep": {"phi": "pi", "steps": 13, "noise_p": 1.0},
    "auto_settings": {"candidates": 8},
}


class ConfigManager:
    """
    Runtime configuration of the toolkit
    Values from the YAML file override DEFAULTS key by key
    """

    def __init__(self, config_path: Union[str, Path] = DEFAULT_CONFIG_PATH,
                 create_missing: bool = True):
        """Initialize with the config file path"""
        self.config_path = Path(config_path)
        self.create_missing = create_missing
        self.config = self._load_config()

    def _load_config(self) -> Dict:
        """Load configuration, creating a default file when needed"""
        if not self.config_path.exists():
            if not self.create_missing:
                return copy.deepcopy(DEFAULTS)
            print(f"⚠️  Config file not found: {self.config_path}")
            print("Creating default config...")
            self._create_default_config()

        with open(self.config_path, "r") as f:
            loaded = yaml.safe_load(f) or {}

        if not isinstance(loaded, dict):
            print(f"⚠️  Ignoring {self.config_path}: top level is not a mapping")
            return copy.deepcopy(DEFAULTS)

        merged = copy.deepcopy(DEFAULTS)
        for section, values in loaded.items():
            if section not in DEFAULTS:
                print(f"⚠️  Warning: unknown config section '{section}'")
                continue
            if isinstance(values, dict):
                merged[section].update(values)
        return merged

    def _create_default_config(self):
        """Write DEFAULTS to the config path"""
        self.config_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_path, "w") as f:
            yaml.dump(DEFAULTS, f, default_flow_style=False, sort_keys=False)

    def get(self, section: str, key: str, default: Optional[Any] = None) -> Any:
        """
        Look up a configuration value

        Args:
            section: Top-level section name, e.g. "oracle"
            key: Key inside the section, e.g. "trials"
            default: Returned when neither the file nor DEFAULTS define the key

        Returns:
            The configured value
        """
        values = self.config.get(section, {})
        if key in values:
            return values[key]
        return DEFAULTS.get(section, {}).get(key, default)

    def section(self, name: str) -> Dict[str, Any]:
        return dict(self.config.get(name, {}))


def load_config(config_path: Union[str, Path] = DEFAULT_CONFIG_PATH,
                create_missing: bool = True) -> ConfigManager:
    """
    Convenience function to load configuration

    Args:
        config_path: Path to the YAML file
        create_missing: Write a default file when none exists

    Returns:
        ConfigManager instance
    """
    return ConfigManager(config_path, create_missing=create_missing)
