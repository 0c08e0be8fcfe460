"""Layered configuration with environment overrides."""

import json
import os


class ConfigError(ValueError):
    """Raised when a value cannot be coerced to the declared type."""


class Settings:
    _COERCERS = {
        "int": int,
        "float": float,
        "bool": lambda raw: str(raw).lower() in ("1", "true", "yes", "on"),
        "str": str,
    }

    def __init__(self, defaults=None, env_prefix="APP_"):
        self._values = dict(defaults or {})
        self.env_prefix = env_prefix

    @classmethod
    def from_file(cls, path, env_prefix="APP_"):
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        if not isinstance(data, dict):
            raise ConfigError("top-level config must be an object")
        return cls(defaults=data, env_prefix=env_prefix)

    def get(self, key, default=None, kind="str"):
        env_key = self.env_prefix + key.upper()
        if env_key in os.environ:
            raw = os.environ[env_key]
        elif key in self._values:
            raw = self._values[key]
        else:
            return default
        try:
            return self._COERCERS[kind](raw)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"cannot coerce {key}={raw!r} to {kind}") from exc

    def set(self, key, value):
        self._values[key] = value

    def as_dict(self):
        return dict(self._values)

    @staticmethod
    def site_paths():
        return [
            "/etc/app/config.json",
            os.path.expanduser("~/.config/app/config.json"),
        ]


def merge(base, *overlays):
    """Later overlays win; nested dicts are merged recursively."""
    merged = dict(base)
    for overlay in overlays:
        for key, value in overlay.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key] = merge(merged[key], value)
            else:
                merged[key] = value
    return merged
